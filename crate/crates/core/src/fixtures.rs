//! Built-in meshes: the named fixtures used by tests and the CLI, plus the
//! random families explored by the monochromatic search.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::hull::convex_hull;
use crate::mesh::PolyhedralSurface;
use crate::Vec3;

/// Names accepted by [`by_name`], in the order `fixtures` writes them.
pub const NAMES: &[&str] = &[
    "cube",
    "tetrahedron",
    "pyramid",
    "pyramid-side2",
    "l-prism",
    "notched-box-2",
    "notched-box-3",
];

pub fn by_name(name: &str) -> Option<PolyhedralSurface> {
    Some(match name {
        "cube" => cube(),
        "tetrahedron" => regular_tetrahedron(),
        "pyramid" => square_pyramid(),
        "pyramid-side2" => square_pyramid_side2(),
        "l-prism" => l_prism(),
        "notched-box-2" => notched_box(
            3.0,
            2.0,
            1.0,
            &[
                Notch::new(Corner::BottomRight, 1.0, 0.5),
                Notch::new(Corner::TopRight, 0.5, 0.5),
            ],
        ),
        "notched-box-3" => notched_box(
            3.0,
            3.0,
            1.5,
            &[
                Notch::new(Corner::BottomRight, 1.0, 1.0),
                Notch::new(Corner::TopRight, 1.0, 0.5),
                Notch::new(Corner::TopLeft, 0.5, 1.0),
            ],
        ),
        _ => return None,
    })
}

fn build(vertices: Vec<Vec3>, faces: Vec<Vec<usize>>) -> PolyhedralSurface {
    PolyhedralSurface::new(vertices, faces).expect("fixture connectivity is well formed")
}

/// The unit cube `[0,1]^3`.
pub fn cube() -> PolyhedralSurface {
    let v = [
        (0., 0., 0.),
        (1., 0., 0.),
        (1., 1., 0.),
        (0., 1., 0.),
        (0., 0., 1.),
        (1., 0., 1.),
        (1., 1., 1.),
        (0., 1., 1.),
    ]
    .map(|(x, y, z)| Vec3::new(x, y, z));
    build(
        v.to_vec(),
        vec![
            vec![0, 3, 2, 1],
            vec![4, 5, 6, 7],
            vec![0, 1, 5, 4],
            vec![1, 2, 6, 5],
            vec![2, 3, 7, 6],
            vec![3, 0, 4, 7],
        ],
    )
}

/// Regular tetrahedron with unit edges, one face on `z = 0`.
pub fn regular_tetrahedron() -> PolyhedralSurface {
    let s3 = 3f64.sqrt();
    let v = vec![
        Vec3::new(0.0, 0.0, 0.0),
        Vec3::new(1.0, 0.0, 0.0),
        Vec3::new(0.5, s3 / 2.0, 0.0),
        Vec3::new(0.5, s3 / 6.0, (2.0f64 / 3.0).sqrt()),
    ];
    build(v, vec![vec![0, 2, 1], vec![0, 1, 3], vec![1, 2, 3], vec![2, 0, 3]])
}

/// The pyramid `|x| + |y| <= z <= 1`: apex at the origin, four lateral
/// triangles (faces 0..4, in counterclockwise order around the axis) and
/// the square top (face 4).
pub fn square_pyramid() -> PolyhedralSurface {
    let v = vec![
        Vec3::zeros(),
        Vec3::new(1.0, 0.0, 1.0),
        Vec3::new(0.0, 1.0, 1.0),
        Vec3::new(-1.0, 0.0, 1.0),
        Vec3::new(0.0, -1.0, 1.0),
    ];
    build(
        v,
        vec![
            vec![0, 2, 1],
            vec![0, 3, 2],
            vec![0, 4, 3],
            vec![0, 1, 4],
            vec![1, 2, 3, 4],
        ],
    )
}

/// Square pyramid with apex `(0,0,1)` over the base `[-1,1]^2 x {0}`.
pub fn square_pyramid_side2() -> PolyhedralSurface {
    let v = vec![
        Vec3::new(0.0, 0.0, 1.0),
        Vec3::new(-1.0, -1.0, 0.0),
        Vec3::new(1.0, -1.0, 0.0),
        Vec3::new(1.0, 1.0, 0.0),
        Vec3::new(-1.0, 1.0, 0.0),
    ];
    build(
        v,
        vec![
            vec![0, 1, 2],
            vec![0, 2, 3],
            vec![0, 3, 4],
            vec![0, 4, 1],
            vec![1, 4, 3, 2],
        ],
    )
}

/// Right prism over a simple counterclockwise polygon, `0 <= z <= height`.
///
/// Faces: bottom (0), top (1), then one side per polygon edge, side `2 + k`
/// standing on the edge from corner `k` to corner `k + 1`.
pub fn prism(polygon: &[(f64, f64)], height: f64) -> PolyhedralSurface {
    let n = polygon.len();
    let mut v: Vec<Vec3> = polygon.iter().map(|&(x, y)| Vec3::new(x, y, 0.0)).collect();
    v.extend(polygon.iter().map(|&(x, y)| Vec3::new(x, y, height)));
    let mut faces = vec![(0..n).rev().collect::<Vec<_>>(), (n..2 * n).collect()];
    for k in 0..n {
        let k1 = (k + 1) % n;
        faces.push(vec![k, k1, k1 + n, k + n]);
    }
    build(v, faces)
}

/// The L-shaped prism: `[0,2]^2` minus the notch `[1,2]^2`, extruded to
/// height 1. The reflex notch edge joins vertices 3 and 9.
pub fn l_prism() -> PolyhedralSurface {
    notched_box(2.0, 2.0, 1.0, &[Notch::new(Corner::TopRight, 1.0, 1.0)])
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Corner {
    BottomRight,
    TopRight,
    TopLeft,
}

/// Rectangular notch of size `width x depth` cut from a corner of the
/// cross-section (`width` along x, `depth` along y).
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Notch {
    pub corner: Corner,
    pub width: f64,
    pub depth: f64,
}

impl Notch {
    pub fn new(corner: Corner, width: f64, depth: f64) -> Self {
        Self { corner, width, depth }
    }
}

/// Box `[0,w] x [0,h] x [0,height]` with rectangular notches cut along the
/// vertical edges at the chosen corners. The corner at the origin is never
/// notched. Each notch adds two faces and one reflex edge.
pub fn notched_box(w: f64, h: f64, height: f64, notches: &[Notch]) -> PolyhedralSurface {
    let find = |c: Corner| notches.iter().find(|n| n.corner == c);
    let mut poly = vec![(0.0, 0.0)];
    match find(Corner::BottomRight) {
        Some(n) => poly.extend([(w - n.width, 0.0), (w - n.width, n.depth), (w, n.depth)]),
        None => poly.push((w, 0.0)),
    }
    match find(Corner::TopRight) {
        Some(n) => poly.extend([(w, h - n.depth), (w - n.width, h - n.depth), (w - n.width, h)]),
        None => poly.push((w, h)),
    }
    match find(Corner::TopLeft) {
        Some(n) => poly.extend([(n.width, h), (n.width, h - n.depth), (0.0, h - n.depth)]),
        None => poly.push((0.0, h)),
    }
    prism(&poly, height)
}

/// Unit cube without its top face (an open surface).
pub fn open_box() -> PolyhedralSurface {
    let c = cube();
    let faces = c
        .faces()
        .iter()
        .enumerate()
        .filter(|&(f, _)| f != 1)
        .map(|(_, face)| face.clone())
        .collect();
    build(c.vertices().to_vec(), faces)
}

/// Two corner tetrahedra in opposite octants sharing only the origin.
pub fn tetrahedra_sharing_vertex() -> PolyhedralSurface {
    let v = vec![
        Vec3::zeros(),
        Vec3::x(),
        Vec3::y(),
        Vec3::z(),
        -Vec3::x(),
        -Vec3::y(),
        -Vec3::z(),
    ];
    build(
        v,
        vec![
            vec![0, 2, 1],
            vec![0, 1, 3],
            vec![0, 3, 2],
            vec![1, 2, 3],
            vec![0, 4, 5],
            vec![0, 6, 4],
            vec![0, 5, 6],
            vec![4, 6, 5],
        ],
    )
}

fn unit_vector<R: Rng>(rng: &mut R) -> Vec3 {
    let z: f64 = rng.random_range(-1.0..1.0);
    let phi: f64 = rng.random_range(0.0..std::f64::consts::TAU);
    let s = (1.0 - z * z).sqrt();
    Vec3::new(s * phi.cos(), s * phi.sin(), z)
}

/// Convex hull of `n >= 4` uniform random points on the unit sphere.
pub fn random_hull(n: usize, seed: u64) -> PolyhedralSurface {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let pts: Vec<Vec3> = (0..n).map(|_| unit_vector(&mut rng)).collect();
    convex_hull(&pts).expect("random sphere points are in general position")
}

/// Octahedron subdivided `levels` times, with every vertex pushed to a
/// random radius in `[r_min, r_max]`. The result is star-shaped about the
/// origin, hence embedded; faces are triangles.
pub fn star_sphere(levels: usize, r_min: f64, r_max: f64, seed: u64) -> PolyhedralSurface {
    let mut verts = vec![Vec3::x(), -Vec3::x(), Vec3::y(), -Vec3::y(), Vec3::z(), -Vec3::z()];
    let mut tris: Vec<[usize; 3]> = vec![
        [0, 2, 4],
        [2, 1, 4],
        [1, 3, 4],
        [3, 0, 4],
        [2, 0, 5],
        [1, 2, 5],
        [3, 1, 5],
        [0, 3, 5],
    ];
    for _ in 0..levels {
        let mut mids = std::collections::HashMap::new();
        let mut mid = |a: usize, b: usize, verts: &mut Vec<Vec3>| {
            *mids.entry((a.min(b), a.max(b))).or_insert_with(|| {
                verts.push(((verts[a] + verts[b]) * 0.5).normalize());
                verts.len() - 1
            })
        };
        let mut next = Vec::with_capacity(tris.len() * 4);
        for [a, b, c] in tris {
            let ab = mid(a, b, &mut verts);
            let bc = mid(b, c, &mut verts);
            let ca = mid(c, a, &mut verts);
            next.extend([[a, ab, ca], [ab, b, bc], [ca, bc, c], [ab, bc, ca]]);
        }
        tris = next;
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    for p in &mut verts {
        let r: f64 = if r_max > r_min {
            rng.random_range(r_min..r_max)
        } else {
            r_min
        };
        *p *= r;
    }
    build(verts, tris.into_iter().map(|t| t.to_vec()).collect())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::mesh::validate_surface;

    #[test]
    fn named_fixtures_are_valid_spheres() {
        for name in NAMES {
            let s = by_name(name).unwrap();
            let d = validate_surface(&s);
            assert!(d.is_valid(), "{name}: {:?}", d.violations);
            assert_eq!(d.euler_characteristic, 2, "{name}");
            assert!(s.signed_volume() > 0.0);
        }
        assert!(by_name("dodecahedron").is_none());
    }

    #[test]
    fn l_prism_layout() {
        let s = l_prism();
        assert_eq!(s.face_count(), 8);
        assert_eq!(s.vertex(3), Vec3::new(1.0, 1.0, 0.0));
        assert_eq!(s.vertex(9), Vec3::new(1.0, 1.0, 1.0));
        assert!((s.signed_volume() - 3.0).abs() < 1e-14);
    }

    #[test]
    fn notch_counts_add_two_faces_each() {
        for (k, notches) in [
            vec![],
            vec![Notch::new(Corner::TopRight, 0.5, 0.5)],
            vec![
                Notch::new(Corner::TopRight, 0.5, 0.5),
                Notch::new(Corner::TopLeft, 0.5, 0.5),
            ],
        ]
        .iter()
        .enumerate()
        {
            let s = notched_box(2.0, 2.0, 1.0, notches);
            assert_eq!(s.face_count(), 6 + 2 * k);
            assert!(validate_surface(&s).is_valid());
        }
    }

    #[test]
    fn random_families_are_valid() {
        for seed in 0..5 {
            let h = random_hull(8, seed);
            assert_eq!(h.face_count(), 12);
            assert!(validate_surface(&h).is_valid());
            let s = star_sphere(1, 0.7, 1.3, seed);
            assert_eq!(s.face_count(), 32);
            assert!(validate_surface(&s).is_valid());
        }
    }
}
