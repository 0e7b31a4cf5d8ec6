//! Randomized quasi-Monte Carlo quadrature over arches and cone bases.
//!
//! Regions are parametrized over the unit cube by measure-preserving maps.
//! Directions in the vertex cone come from spherical triangles fanned from
//! one edge ray when the vertex is convex, and from the whole sphere with
//! rejection otherwise. Radii invert the radial measure, and the lateral
//! faces are polar sectors at the vertex, which is exact below the
//! separation radius.
//!
//! Each of [`REPLICATES`] independent random shifts of the Halton sequence
//! gives an unbiased estimate. The reported value is their mean and the
//! standard error is their spread.

use std::f64::consts::{PI, TAU};

use super::containment::Solid;
use super::regions::{ArchRegion, ConeRegion};
use super::sampling::{check_acceptance, shard_rng, Estimate, Proposal, RegionTag, SamplingError, SHARD_SIZE};
use crate::mesh::PolyhedralSurface;
use crate::qmc::{random_shift, shifted_halton};
use crate::{par, Vec3};

/// Independent random shifts per estimate.
pub const REPLICATES: usize = 32;

/// Uniform map from the unit square onto a spherical triangle (Arvo's
/// construction).
#[derive(Debug, Clone, Copy)]
pub(crate) struct SphericalTriangle {
    a: Vec3,
    b: Vec3,
    /// Unit tangent at `a` towards `c`.
    ac_dir: Vec3,
    ac_len: f64,
    alpha: f64,
    cos_c: f64,
    area: f64,
}

impl SphericalTriangle {
    fn new(a: Vec3, b: Vec3, c: Vec3) -> Option<Self> {
        let area = 2.0 * a.dot(&b.cross(&c)).abs().atan2(1.0 + a.dot(&b) + b.dot(&c) + c.dot(&a));
        let n_ab = a.cross(&b);
        let n_ac = a.cross(&c);
        if area < 1e-14 || n_ab.norm() < 1e-12 || n_ac.norm() < 1e-12 {
            return None;
        }
        let alpha = n_ab.normalize().dot(&n_ac.normalize()).clamp(-1.0, 1.0).acos();
        let ac_dir = (c - a * c.dot(&a)).normalize();
        Some(Self {
            a,
            b,
            ac_dir,
            ac_len: a.dot(&c).clamp(-1.0, 1.0).acos(),
            alpha,
            cos_c: a.dot(&b),
            area,
        })
    }

    fn map(&self, u: f64, v: f64) -> Vec3 {
        let (sa, ca) = self.alpha.sin_cos();
        let (s, t) = (u * self.area - self.alpha).sin_cos();
        let p = t - ca;
        let q = s + sa * self.cos_c;
        let cos_b = (((q * t - p * s) * ca - q) / ((q * s + p * t) * sa)).clamp(-1.0, 1.0);
        // Point on arc AC at angular distance acos(cos_b) from A.
        let b_len = cos_b.acos().min(self.ac_len);
        let c_hat = self.a * b_len.cos() + self.ac_dir * b_len.sin();
        let z = 1.0 - v * (1.0 - c_hat.dot(&self.b));
        let w = c_hat - self.b * c_hat.dot(&self.b);
        let wn = w.norm();
        if wn == 0.0 {
            return self.b;
        }
        self.b * z + w * ((1.0 - z * z).max(0.0).sqrt() / wn)
    }
}

/// Unit rays from `v` along its incident edges.
fn edge_rays(s: &PolyhedralSurface, v: usize) -> Vec<Vec3> {
    let mut nbrs = Vec::new();
    for f in s.faces_around_vertex(v) {
        let face = s.face(f);
        let k = face.iter().position(|&w| w == v).expect("face contains v");
        nbrs.push(face[(k + face.len() - 1) % face.len()]);
        nbrs.push(face[(k + 1) % face.len()]);
    }
    nbrs.sort_unstable();
    nbrs.dedup();
    let p = s.vertex(v);
    nbrs.into_iter().map(|w| (s.vertex(w) - p).normalize()).collect()
}

/// Spherical triangles tiling the direction set of a convex, pointed
/// vertex cone, or `None` when the cone is not of that kind.
pub(crate) fn convex_cone_fan(s: &PolyhedralSurface, v: usize) -> Option<Vec<SphericalTriangle>> {
    let rays = edge_rays(s, v);
    if rays.len() < 3 {
        return None;
    }
    for f in s.faces_around_vertex(v) {
        let n = s.face_normal(f);
        if rays.iter().any(|e| n.dot(e) > 1e-12) {
            return None;
        }
    }
    let axis = rays.iter().sum::<Vec3>().normalize();
    if rays.iter().any(|e| e.dot(&axis) <= 1e-9) {
        return None;
    }
    let helper = if axis.x.abs() < 0.9 { Vec3::x() } else { Vec3::y() };
    let e1 = axis.cross(&helper).normalize();
    let e2 = axis.cross(&e1);
    let mut sorted = rays;
    sorted.sort_by(|p, q| {
        let ap = p.dot(&e2).atan2(p.dot(&e1));
        let aq = q.dot(&e2).atan2(q.dot(&e1));
        ap.total_cmp(&aq)
    });
    let tris: Vec<_> = (1..sorted.len() - 1)
        .filter_map(|i| SphericalTriangle::new(sorted[0], sorted[i], sorted[i + 1]))
        .collect();
    (!tris.is_empty()).then_some(tris)
}

enum Directions {
    Fan {
        triangles: Vec<SphericalTriangle>,
        cumulative: Vec<f64>,
    },
    Sphere {
        solid: Box<Solid>,
    },
}

/// Measure-preserving parametrization of the directions of a vertex cone.
struct ConeDirections {
    center: Vec3,
    solid_angle: f64,
    kind: Directions,
}

impl ConeDirections {
    fn new(s: &PolyhedralSurface, v: usize) -> Self {
        let center = s.vertex(v);
        match convex_cone_fan(s, v) {
            Some(triangles) => {
                let mut total = 0.0;
                let cumulative = triangles
                    .iter()
                    .map(|t| {
                        total += t.area;
                        total
                    })
                    .collect();
                Self {
                    center,
                    solid_angle: total,
                    kind: Directions::Fan { triangles, cumulative },
                }
            }
            None => Self {
                center,
                solid_angle: 4.0 * PI,
                kind: Directions::Sphere {
                    solid: Box::new(Solid::new(s)),
                },
            },
        }
    }

    /// Point at distance `rho` in the direction encoded by `(u, v)`, or
    /// `None` when a sphere proposal falls outside the solid.
    fn point(&self, u: f64, v: f64, rho: f64) -> Option<Vec3> {
        match &self.kind {
            Directions::Fan { triangles, cumulative } => {
                let (k, t) = pick(cumulative, u);
                Some(self.center + triangles[k].map(t, v) * rho)
            }
            Directions::Sphere { solid } => {
                let z = 2.0 * u - 1.0;
                let r = (1.0 - z * z).max(0.0).sqrt();
                let (sp, cp) = (TAU * v).sin_cos();
                let x = self.center + Vec3::new(r * cp, r * sp, z) * rho;
                solid.is_inside(&x).then_some(x)
            }
        }
    }
}

/// Index of the piece selected by `u` and `u` rescaled within it.
fn pick(cumulative: &[f64], u: f64) -> (usize, f64) {
    let total = *cumulative.last().expect("at least one piece");
    let x = u * total;
    let k = cumulative.partition_point(|&c| c <= x).min(cumulative.len() - 1);
    let lo = if k == 0 { 0.0 } else { cumulative[k - 1] };
    let t = ((x - lo) / (cumulative[k] - lo)).clamp(0.0, 1.0);
    (k, t)
}

struct Sector {
    face: usize,
    start: Vec3,
    perp: Vec3,
    angle: f64,
}

/// Polar sectors of the faces through `v`.
fn face_sectors(s: &PolyhedralSurface, v: usize) -> Vec<Sector> {
    let p = s.vertex(v);
    s.faces_around_vertex(v)
        .into_iter()
        .map(|f| {
            let face = s.face(f);
            let k = face.iter().position(|&w| w == v).expect("face contains v");
            let prev = (s.vertex(face[(k + face.len() - 1) % face.len()]) - p).normalize();
            let next = (s.vertex(face[(k + 1) % face.len()]) - p).normalize();
            let n = s.face_normal(f);
            let mut angle = next.cross(&prev).dot(&n).atan2(next.dot(&prev));
            if angle <= 0.0 {
                angle += TAU;
            }
            Sector {
                face: f,
                start: next,
                perp: n.cross(&next),
                angle,
            }
        })
        .collect()
}

/// Runs `REPLICATES` shifted Halton rules of `n / REPLICATES` points each.
fn integrate<const D: usize, P, F>(
    n: usize,
    seed: u64,
    stream_id: u64,
    width: usize,
    measure: f64,
    point: P,
    integrands: F,
) -> Result<Vec<Estimate>, SamplingError>
where
    P: Fn(&[f64; D]) -> Option<Proposal> + Sync + Send,
    F: Fn(&Proposal, &mut [f64]) + Sync + Send,
{
    if n == 0 {
        return Err(SamplingError::NoSamples);
    }
    let reps = REPLICATES.min(n);
    let per = n / reps;
    let chunks = per.div_ceil(SHARD_SIZE);
    let shifts: Vec<[f64; D]> = (0..reps)
        .map(|j| random_shift(&mut shard_rng(seed, j, stream_id)))
        .collect();
    let parts = par::map_range(reps * chunks, |task| {
        let (j, c) = (task / chunks, task % chunks);
        let start = c * SHARD_SIZE;
        let end = (start + SHARD_SIZE).min(per);
        let mut sums = vec![0.0; width];
        let mut vals = vec![0.0; width];
        let mut accepted = 0;
        for i in start..end {
            if let Some(p) = point(&shifted_halton(i as u64, &shifts[j])) {
                accepted += 1;
                vals.iter_mut().for_each(|v| *v = 0.0);
                integrands(&p, &mut vals);
                sums.iter_mut().zip(&vals).for_each(|(s, v)| *s += v);
            }
        }
        (accepted, sums)
    });
    let accepted: usize = parts.iter().map(|(a, _)| a).sum();
    check_acceptance(reps * per, accepted)?;
    let mut means = vec![vec![0.0; width]; reps];
    for (task, (_, sums)) in parts.iter().enumerate() {
        let row = &mut means[task / chunks];
        row.iter_mut().zip(sums).for_each(|(m, s)| *m += s);
    }
    let scale = measure / per as f64;
    Ok((0..width)
        .map(|k| {
            let xs: Vec<f64> = means.iter().map(|row| row[k] * scale).collect();
            let r = xs.len() as f64;
            let mean = xs.iter().sum::<f64>() / r;
            let var = if xs.len() > 1 {
                xs.iter().map(|x| (x - mean).powi(2)).sum::<f64>() / (r - 1.0)
            } else {
                0.0
            };
            Estimate {
                value: mean,
                stderr: (var / r).sqrt(),
            }
        })
        .collect())
}

/// Integrals over the arch volume of the `width` values written by
/// `integrands`, using `n` points.
pub(crate) fn qmc_arch<F>(
    arch: &ArchRegion<'_>,
    n: usize,
    seed: u64,
    width: usize,
    integrands: F,
) -> Result<Vec<Estimate>, SamplingError>
where
    F: Fn(&Proposal, &mut [f64]) + Sync + Send,
{
    let dirs = ConeDirections::new(arch.surface(), arch.vertex());
    let (r3, big3) = (arch.inner_radius().powi(3), arch.outer_radius().powi(3));
    let measure = dirs.solid_angle * (big3 - r3) / 3.0;
    let point = |u: &[f64; 3]| {
        let rho = (r3 + u[2] * (big3 - r3)).cbrt();
        dirs.point(u[0], u[1], rho).map(|x| Proposal { point: x, face: None })
    };
    integrate(
        n,
        seed,
        RegionTag::ArchVolume.stream(),
        width,
        measure,
        point,
        integrands,
    )
}

/// Integrals over the base `B(v, r)`. `stream_offset` separates the inner
/// and outer base of one arch.
pub(crate) fn qmc_base<F>(
    cone: &ConeRegion<'_>,
    n: usize,
    seed: u64,
    stream_offset: u64,
    width: usize,
    integrands: F,
) -> Result<Vec<Estimate>, SamplingError>
where
    F: Fn(&Proposal, &mut [f64]) + Sync + Send,
{
    let dirs = ConeDirections::new(cone.surface(), cone.vertex());
    let rho = cone.radius();
    let measure = dirs.solid_angle * rho * rho;
    let point = |u: &[f64; 2]| dirs.point(u[0], u[1], rho).map(|x| Proposal { point: x, face: None });
    let id = RegionTag::Base.stream() + 16 * stream_offset;
    integrate(n, seed, id, width, measure, point, integrands)
}

/// Integrals over the lateral boundary of the arch.
pub(crate) fn qmc_lateral<F>(
    arch: &ArchRegion<'_>,
    n: usize,
    seed: u64,
    width: usize,
    integrands: F,
) -> Result<Vec<Estimate>, SamplingError>
where
    F: Fn(&Proposal, &mut [f64]) + Sync + Send,
{
    let sectors = face_sectors(arch.surface(), arch.vertex());
    let mut total = 0.0;
    let cumulative: Vec<f64> = sectors
        .iter()
        .map(|s| {
            total += s.angle;
            total
        })
        .collect();
    let center = arch.apex();
    let (r2, big2) = (arch.inner_radius().powi(2), arch.outer_radius().powi(2));
    let measure = total * (big2 - r2) / 2.0;
    let point = |u: &[f64; 2]| {
        let (k, t) = pick(&cumulative, u[0]);
        let s = &sectors[k];
        let (sn, cs) = (t * s.angle).sin_cos();
        let rho = (r2 + u[1] * (big2 - r2)).sqrt();
        Some(Proposal {
            point: center + (s.start * cs + s.perp * sn) * rho,
            face: Some(s.face),
        })
    };
    integrate(n, seed, RegionTag::Lateral.stream(), width, measure, point, integrands)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixtures;

    fn octant() -> SphericalTriangle {
        SphericalTriangle::new(Vec3::x(), Vec3::y(), Vec3::z()).unwrap()
    }

    #[test]
    fn octant_triangle_area() {
        assert!((octant().area - PI / 2.0).abs() < 1e-14);
    }

    #[test]
    fn triangle_map_stays_inside_and_hits_corners() {
        let t = octant();
        for i in 0..=20 {
            for j in 0..=20 {
                let p = t.map(i as f64 / 20.0, j as f64 / 20.0);
                assert!((p.norm() - 1.0).abs() < 1e-12);
                assert!(p.min() > -1e-12, "{p:?}");
            }
        }
        assert!((t.map(0.3, 0.0) - Vec3::y()).norm() < 1e-12);
        assert!((t.map(1.0, 1.0) - Vec3::z()).norm() < 1e-9);
    }

    #[test]
    fn triangle_map_is_uniform() {
        // Over the positive octant, int x dw = pi/4 and int x^2 dw = pi/6.
        let t = octant();
        let n = 200;
        let (mut m1, mut m2) = (0.0, 0.0);
        for i in 0..n {
            for j in 0..n {
                let p = t.map((i as f64 + 0.5) / n as f64, (j as f64 + 0.5) / n as f64);
                m1 += p.x;
                m2 += p.x * p.x;
            }
        }
        let w = t.area / (n * n) as f64;
        assert!((m1 * w - PI / 4.0).abs() < 1e-4, "{}", m1 * w);
        assert!((m2 * w - PI / 6.0).abs() < 1e-4, "{}", m2 * w);
    }

    #[test]
    fn convex_vertices_get_a_fan() {
        let cube = fixtures::cube();
        let fan = convex_cone_fan(&cube, 0).unwrap();
        let omega: f64 = fan.iter().map(|t| t.area).sum();
        assert!((omega - PI / 2.0).abs() < 1e-12);

        // Apex of |x| + |y| <= z: four equal pieces of total solid angle
        // 4 * (pi/2 - 2 atan(1/sqrt 2) + ...) computed via Girard.
        let pyr = fixtures::square_pyramid();
        let fan = convex_cone_fan(&pyr, 0).unwrap();
        let omega: f64 = fan.iter().map(|t| t.area).sum();
        let rays = [
            Vec3::new(1.0, 0.0, 1.0),
            Vec3::new(0.0, 1.0, 1.0),
            Vec3::new(-1.0, 0.0, 1.0),
            Vec3::new(0.0, -1.0, 1.0),
        ]
        .map(|r| r.normalize());
        let girard: f64 = [(0, 1, 2), (0, 2, 3)]
            .iter()
            .map(|&(a, b, c)| SphericalTriangle::new(rays[a], rays[b], rays[c]).unwrap().area)
            .sum();
        assert!((omega - girard).abs() < 1e-12, "{omega} {girard}");
    }

    #[test]
    fn reflex_vertex_falls_back_to_rejection() {
        let l = fixtures::l_prism();
        let reflex = (0..l.vertex_count())
            .find(|&v| convex_cone_fan(&l, v).is_none())
            .expect("the notch has nonconvex vertices");
        let arch = ArchRegion::new(&l, reflex, 0.1, 0.2).unwrap();
        let vol = qmc_arch(&arch, 200_000, 3, 1, |_, out| out[0] = 1.0).unwrap();
        // A reflex prism corner is three octants of the ball.
        let exact = 3.0 / 8.0 * 4.0 / 3.0 * PI * (0.008 - 0.001);
        assert!(
            (vol[0].value - exact).abs() < 4.0 * vol[0].stderr + 1e-6,
            "{:?} {exact}",
            vol[0]
        );
    }

    #[test]
    fn measures_match_the_cube_corner() {
        let s = fixtures::cube();
        let arch = ArchRegion::new(&s, 0, 0.25, 0.5).unwrap();
        let one = |_: &Proposal, out: &mut [f64]| out[0] = 1.0;
        let vol = qmc_arch(&arch, 4096, 1, 1, one).unwrap()[0];
        let base = qmc_base(&arch.outer_base(), 4096, 1, 1, 1, one).unwrap()[0];
        let lat = qmc_lateral(&arch, 4096, 1, 1, one).unwrap()[0];
        assert!((vol.value - PI / 6.0 * (0.125 - 0.015625)).abs() < 1e-12);
        assert!((base.value - PI / 8.0).abs() < 1e-12);
        assert!((lat.value - 3.0 * PI / 4.0 * (0.25 - 0.0625)).abs() < 1e-12);
        assert!(vol.stderr < 1e-12 && base.stderr < 1e-12 && lat.stderr < 1e-12);
    }

    #[test]
    fn points_land_in_their_regions() {
        let s = fixtures::square_pyramid();
        let arch = ArchRegion::new(&s, 0, 0.25, 0.5).unwrap();
        let solid = Solid::new(&s);
        let in_shell = |x: &Vec3| (0.25 - 1e-12..=0.5 + 1e-12).contains(&x.norm());
        let volume_check = |p: &Proposal, out: &mut [f64]| {
            out[0] = f64::from(!(in_shell(&p.point) && solid.is_inside(&p.point)));
        };
        let lateral_check = |p: &Proposal, out: &mut [f64]| {
            let f = p.face.unwrap();
            let on_face = s.face_normal(f).dot(&(p.point - s.vertex(0))).abs() < 1e-12;
            out[0] = f64::from(!(in_shell(&p.point) && on_face));
        };
        assert_eq!(qmc_arch(&arch, 4096, 2, 1, volume_check).unwrap()[0].value, 0.0);
        assert_eq!(qmc_lateral(&arch, 4096, 2, 1, lateral_check).unwrap()[0].value, 0.0);
    }

    #[test]
    fn smooth_integrands_converge_fast() {
        // int over the octant shell of x is (pi/4) (R^4 - r^4) / 4.
        let s = fixtures::cube();
        let arch = ArchRegion::new(&s, 0, 0.25, 0.5).unwrap();
        let est = qmc_arch(&arch, 1 << 17, 7, 1, |p, out| out[0] = p.point.x).unwrap()[0];
        let exact = PI / 16.0 * (0.0625 - 0.00390625);
        assert!((est.value - exact).abs() < 4.0 * est.stderr + 1e-12);
        // Plain Monte Carlo at this budget gives about 1.5e-3.
        assert!(est.stderr / exact < 5e-4, "{:?}", est);
    }
}
