use std::f64::consts::TAU;
use std::fmt::Write as _;

use serde::Serialize;
use thiserror::Error;

use super::containment::{Containment, Solid};
use crate::mesh::PolyhedralSurface;
use crate::report::fmt_f64;

/// Probe displacement for reflex disambiguation, relative to edge length.
pub const PROBE_OFFSET: f64 = 1e-6;

// Below this bisector length the two face directions are nearly opposite
// (angle close to pi) and both branches agree to within the tolerance.
const FLAT_BISECTOR: f64 = 1e-7;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum GeometryError {
    #[error("edge {edge} ({a}-{b}) does not have exactly two faces")]
    NonManifoldEdge { edge: usize, a: usize, b: usize },
    #[error("edge {edge} ({a}-{b}) is degenerate: its faces fold onto each other")]
    DegenerateEdge { edge: usize, a: usize, b: usize },
    #[error("edge {edge} ({a}-{b}): probe point lies on the surface, side is ambiguous")]
    AmbiguousSide { edge: usize, a: usize, b: usize },
    #[error("edge {edge} ({a}-{b}): probe test disagrees with face orientation")]
    InconsistentSide { edge: usize, a: usize, b: usize },
}

/// Dihedral angle at one edge, measured inside the solid.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct DihedralAngle {
    pub edge: usize,
    pub vertices: [usize; 2],
    pub faces: [usize; 2],
    /// Radians in `(0, 2pi)`.
    pub interior_angle: f64,
    /// `2pi - interior_angle`.
    pub exterior_angle: f64,
}

impl DihedralAngle {
    fn new(edge: usize, vertices: [usize; 2], faces: [usize; 2], interior: f64) -> Self {
        Self {
            edge,
            vertices,
            faces,
            interior_angle: interior,
            exterior_angle: TAU - interior,
        }
    }
}

/// Interior dihedral angle of every edge, in edge order.
///
/// The unsigned angle between the two faces comes from their in-plane
/// directions perpendicular to the edge. Whether the solid fills that wedge
/// or its reflex complement is decided by probing a point just off the edge
/// along the bisector; the result is cross-checked against the angle implied
/// by the face orientations alone.
pub fn dihedral_angles(s: &PolyhedralSurface) -> Result<Vec<DihedralAngle>, GeometryError> {
    let solid = Solid::new(s);
    s.edges()
        .iter()
        .enumerate()
        .map(|(id, e)| {
            let [a, b] = e.vertices;
            let [f0, f1] = e.face_pair().ok_or(GeometryError::NonManifoldEdge { edge: id, a, b })?;
            // Direction of the edge as traversed by f0.
            let (p, q) = if s.face_traverses(f0, a, b) { (a, b) } else { (b, a) };
            let (pa, pb) = (s.vertex(p), s.vertex(q));
            let len = (pb - pa).norm();
            let dir = (pb - pa) / len;
            let n0 = s.face_normal(f0);
            let n1 = s.face_normal(f1);
            // In-face directions pointing away from the edge.
            let t0 = n0.cross(&dir);
            let t1 = dir.cross(&n1);

            let oriented = {
                let th = t1.dot(&-n0).atan2(t1.dot(&t0));
                if th < 0.0 {
                    th + TAU
                } else {
                    th
                }
            };
            let unsigned = t0.cross(&t1).norm().atan2(t0.dot(&t1));
            if unsigned < FLAT_BISECTOR {
                return Err(GeometryError::DegenerateEdge { edge: id, a, b });
            }

            let bisector = t0 + t1;
            let angle = if bisector.norm() < FLAT_BISECTOR {
                oriented
            } else {
                let mid = (pa + pb) * 0.5;
                let probe = mid + bisector.normalize() * (PROBE_OFFSET * len);
                let chosen = match solid.contains(&probe) {
                    Containment::Inside => unsigned,
                    Containment::Outside => TAU - unsigned,
                    Containment::Boundary => return Err(GeometryError::AmbiguousSide { edge: id, a, b }),
                };
                if (chosen - oriented).abs() > 1e-6 {
                    return Err(GeometryError::InconsistentSide { edge: id, a, b });
                }
                chosen
            };
            Ok(DihedralAngle::new(id, e.vertices, [f0, f1], angle))
        })
        .collect()
}

/// Angle table as CSV:
/// `edge_id,v0,v1,face0,face1,interior_angle,exterior_angle`.
pub fn angle_table_csv(angles: &[DihedralAngle]) -> String {
    let mut out = String::from("edge_id,v0,v1,face0,face1,interior_angle,exterior_angle\n");
    for a in angles {
        writeln!(
            out,
            "{},{},{},{},{},{},{}",
            a.edge,
            a.vertices[0],
            a.vertices[1],
            a.faces[0],
            a.faces[1],
            fmt_f64(a.interior_angle),
            fmt_f64(a.exterior_angle)
        )
        .unwrap();
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixtures;
    use crate::Vec3;
    use std::f64::consts::PI;

    #[test]
    fn cube_edges_are_right_angles() {
        let angles = dihedral_angles(&fixtures::cube()).unwrap();
        assert_eq!(angles.len(), 12);
        for a in &angles {
            assert!((a.interior_angle - PI / 2.0).abs() < 1e-12);
            assert_eq!(a.interior_angle + a.exterior_angle, TAU);
        }
    }

    #[test]
    fn pyramid_lateral_angle_from_explicit_normals() {
        // Oracle: outward normals (1,1,-1)/sqrt3 and (-1,1,-1)/sqrt3 of two
        // adjacent lateral faces; interior angle = pi - angle(n1, n2).
        let n1 = Vec3::new(1.0, 1.0, -1.0).normalize();
        let n2 = Vec3::new(-1.0, 1.0, -1.0).normalize();
        let expected = PI - n1.dot(&n2).acos();
        assert!((expected - (PI - (1.0f64 / 3.0).acos())).abs() < 1e-15);

        let s = fixtures::square_pyramid();
        let angles = dihedral_angles(&s).unwrap();
        let lateral = angles
            .iter()
            .find(|a| a.faces.contains(&0) && a.faces.contains(&1))
            .unwrap();
        assert!((lateral.interior_angle - expected).abs() < 1e-9);
        assert!((lateral.interior_angle - 1.910633).abs() < 1e-6);
        for a in &angles {
            assert!(a.interior_angle < PI);
        }
    }

    #[test]
    fn l_prism_notch_is_reflex() {
        let s = fixtures::l_prism();
        let angles = dihedral_angles(&s).unwrap();
        let notch = s.edge_between(3, 9).unwrap();
        for a in &angles {
            if a.edge == notch {
                assert!((a.interior_angle - 1.5 * PI).abs() < 1e-9);
            } else {
                assert!((a.interior_angle - 0.5 * PI).abs() < 1e-9);
            }
        }
    }

    #[test]
    fn convex_hulls_have_convex_edges() {
        for seed in 0..10 {
            let s = fixtures::random_hull(12, seed);
            for a in dihedral_angles(&s).unwrap() {
                assert!(a.interior_angle > 0.0 && a.interior_angle < PI);
            }
        }
    }

    #[test]
    fn flat_edge_is_pi() {
        // Cube with the top split into two coplanar triangles.
        let c = fixtures::cube();
        let mut faces: Vec<Vec<usize>> = c.faces().to_vec();
        faces[1] = vec![4, 5, 6];
        faces.push(vec![4, 6, 7]);
        let s = PolyhedralSurface::new(c.vertices().to_vec(), faces).unwrap();
        let angles = dihedral_angles(&s).unwrap();
        let diag = s.edge_between(4, 6).unwrap();
        assert!((angles[diag].interior_angle - PI).abs() < 1e-12);
    }

    #[test]
    fn open_surface_is_an_error() {
        assert!(matches!(
            dihedral_angles(&fixtures::open_box()),
            Err(GeometryError::NonManifoldEdge { .. })
        ));
    }

    #[test]
    fn csv_has_header_and_rows() {
        let csv = angle_table_csv(&dihedral_angles(&fixtures::regular_tetrahedron()).unwrap());
        let lines: Vec<&str> = csv.lines().collect();
        assert_eq!(lines.len(), 7);
        assert_eq!(lines[0], "edge_id,v0,v1,face0,face1,interior_angle,exterior_angle");
        assert!(lines[1].starts_with("0,0,2,0,"));
    }
}
