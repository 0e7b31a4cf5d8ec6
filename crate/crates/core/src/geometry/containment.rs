use crate::mesh::PolyhedralSurface;
use crate::Vec3;

/// Points within this multiple of the bounding-box diagonal of a face are
/// classified as on the boundary.
pub const BOUNDARY_TOLERANCE: f64 = 1e-12;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, serde::Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Containment {
    Inside,
    Outside,
    Boundary,
}

#[derive(Debug, Clone)]
struct FacePlane {
    corners: Vec<Vec3>,
    normal: Vec3,
    // Axes kept when projecting to 2D (the dominant normal axis is dropped).
    axes: (usize, usize),
}

/// Precomputed containment queries against one surface.
///
/// Inside/outside is decided by the generalized winding number, summed over
/// fan triangles of every face. The fan need not be a valid triangulation of
/// the polygon: the signed solid angles cancel along interior diagonals.
#[derive(Debug, Clone)]
pub struct Solid {
    triangles: Vec<[Vec3; 3]>,
    planes: Vec<FacePlane>,
    tolerance: f64,
}

impl Solid {
    pub fn new(s: &PolyhedralSurface) -> Self {
        let triangles = s.triangles().into_iter().map(|(t, _)| t.map(|i| s.vertex(i))).collect();
        let planes = (0..s.face_count())
            .map(|f| {
                let normal = s.face_normal(f);
                let a = normal.abs();
                let drop = if a.x >= a.y && a.x >= a.z {
                    0
                } else if a.y >= a.z {
                    1
                } else {
                    2
                };
                FacePlane {
                    corners: s.face(f).iter().map(|&v| s.vertex(v)).collect(),
                    normal,
                    axes: ((drop + 1) % 3, (drop + 2) % 3),
                }
            })
            .collect();
        Self {
            triangles,
            planes,
            tolerance: BOUNDARY_TOLERANCE * s.bounding_box_diagonal(),
        }
    }

    /// Generalized winding number: 1 inside, 0 outside for a closed,
    /// outward-oriented surface.
    pub fn winding_number(&self, p: &Vec3) -> f64 {
        let mut total = 0.0;
        for [a, b, c] in &self.triangles {
            let (a, b, c) = (a - p, b - p, c - p);
            let (la, lb, lc) = (a.norm(), b.norm(), c.norm());
            let num = a.dot(&b.cross(&c));
            let den = la * lb * lc + a.dot(&b) * lc + a.dot(&c) * lb + b.dot(&c) * la;
            total += 2.0 * num.atan2(den);
        }
        total / (4.0 * std::f64::consts::PI)
    }

    /// Fast interior test without the boundary band; points exactly on the
    /// surface get an arbitrary answer.
    pub fn is_inside(&self, p: &Vec3) -> bool {
        self.winding_number(p) > 0.5
    }

    pub fn distance_to_boundary(&self, p: &Vec3) -> f64 {
        self.planes
            .iter()
            .map(|fp| polygon_distance(fp, p))
            .fold(f64::INFINITY, f64::min)
    }

    pub fn contains(&self, p: &Vec3) -> Containment {
        if self.distance_to_boundary(p) <= self.tolerance {
            Containment::Boundary
        } else if self.is_inside(p) {
            Containment::Inside
        } else {
            Containment::Outside
        }
    }
}

/// Classifies `x` against the closed surface `s`.
pub fn contains_point(s: &PolyhedralSurface, x: &Vec3) -> Containment {
    Solid::new(s).contains(x)
}

fn polygon_distance(fp: &FacePlane, p: &Vec3) -> f64 {
    let c = fp.corners[0];
    let h = (p - c).dot(&fp.normal);
    let q = p - fp.normal * h;
    let (i, j) = fp.axes;
    let n = fp.corners.len();
    let mut inside = false;
    for k in 0..n {
        let a = fp.corners[k];
        let b = fp.corners[(k + 1) % n];
        if (a[j] > q[j]) != (b[j] > q[j]) {
            let t = (q[j] - a[j]) / (b[j] - a[j]);
            if q[i] < a[i] + t * (b[i] - a[i]) {
                inside = !inside;
            }
        }
    }
    if inside {
        return h.abs();
    }
    (0..n)
        .map(|k| super::point_segment_distance(p, &fp.corners[k], &fp.corners[(k + 1) % n]))
        .fold(f64::INFINITY, f64::min)
}

/// Euclidean distance from `p` to the closed planar polygon face `f`.
pub fn point_polygon_distance(s: &PolyhedralSurface, f: usize, p: &Vec3) -> f64 {
    let normal = s.face_normal(f);
    let a = normal.abs();
    let drop = if a.x >= a.y && a.x >= a.z {
        0
    } else if a.y >= a.z {
        1
    } else {
        2
    };
    let fp = FacePlane {
        corners: s.face(f).iter().map(|&v| s.vertex(v)).collect(),
        normal,
        axes: ((drop + 1) % 3, (drop + 2) % 3),
    };
    polygon_distance(&fp, p)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixtures;
    use rand::{Rng, SeedableRng};

    #[test]
    fn cube_classification() {
        let s = fixtures::cube();
        assert_eq!(contains_point(&s, &Vec3::new(0.5, 0.5, 0.5)), Containment::Inside);
        assert_eq!(contains_point(&s, &Vec3::new(2.0, 0.0, 0.0)), Containment::Outside);
        assert_eq!(contains_point(&s, &Vec3::new(0.5, 0.5, 1.0)), Containment::Boundary);
        assert_eq!(contains_point(&s, &Vec3::new(1.0, 1.0, 1.0)), Containment::Boundary);
    }

    #[test]
    fn l_prism_notch_is_outside() {
        let s = fixtures::l_prism();
        let solid = Solid::new(&s);
        assert_eq!(solid.contains(&Vec3::new(1.5, 1.5, 0.5)), Containment::Outside);
        assert_eq!(solid.contains(&Vec3::new(0.5, 1.5, 0.5)), Containment::Inside);
        assert_eq!(solid.contains(&Vec3::new(1.5, 0.5, 0.5)), Containment::Inside);
        assert_eq!(solid.contains(&Vec3::new(1.5, 1.0, 0.5)), Containment::Boundary);
    }

    #[test]
    fn polygon_distance_outside_the_face() {
        let s = fixtures::cube();
        // Face 1 is the top z = 1.
        let d = point_polygon_distance(&s, 1, &Vec3::new(2.0, 0.5, 1.0));
        assert!((d - 1.0).abs() < 1e-15);
        let d = point_polygon_distance(&s, 1, &Vec3::new(0.5, 0.5, 3.0));
        assert!((d - 2.0).abs() < 1e-15);
    }

    fn halfspace_inside(s: &crate::PolyhedralSurface, p: &Vec3) -> bool {
        (0..s.face_count()).all(|f| (p - s.face_centroid(f)).dot(&s.face_normal(f)) < 0.0)
    }

    #[test]
    fn winding_agrees_with_halfspaces_on_convex_fixtures() {
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(11);
        for s in [
            fixtures::cube(),
            fixtures::regular_tetrahedron(),
            fixtures::random_hull(30, 3),
        ] {
            let solid = Solid::new(&s);
            let (lo, hi) = s.bounding_box();
            let pad = (hi - lo) * 0.2;
            for _ in 0..20_000 {
                let p = Vec3::from_fn(|i, _| rng.random_range(lo[i] - pad[i]..hi[i] + pad[i]));
                if solid.distance_to_boundary(&p) < 1e-9 {
                    continue;
                }
                assert_eq!(solid.is_inside(&p), halfspace_inside(&s, &p), "{p:?}");
            }
        }
    }
}
