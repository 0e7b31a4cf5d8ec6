//! Incremental 3D convex hull for point sets in general position.
//!
//! Used to generate convex fixtures. Points are inserted in input order; a
//! point sees a face when it lies strictly above the face plane, and the new
//! cone of faces is attached along the horizon of the visible region.

use std::collections::{HashMap, HashSet};

use thiserror::Error;

use crate::mesh::PolyhedralSurface;
use crate::Vec3;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum HullError {
    #[error("need at least 4 points, got {0}")]
    TooFewPoints(usize),
    #[error("points are coplanar or collinear")]
    Degenerate,
}

#[derive(Debug, Clone, Copy)]
struct Facet {
    v: [usize; 3],
    normal: Vec3,
    offset: f64,
}

impl Facet {
    fn new(pts: &[Vec3], v: [usize; 3]) -> Self {
        let normal = (pts[v[1]] - pts[v[0]]).cross(&(pts[v[2]] - pts[v[0]])).normalize();
        Self {
            v,
            normal,
            offset: normal.dot(&pts[v[0]]),
        }
    }

    fn height(&self, p: &Vec3) -> f64 {
        self.normal.dot(p) - self.offset
    }
}

/// Triangulated convex hull with outward orientation. Vertices not on the
/// hull are dropped; the remaining ones keep their relative order.
pub fn convex_hull(points: &[Vec3]) -> Result<PolyhedralSurface, HullError> {
    if points.len() < 4 {
        return Err(HullError::TooFewPoints(points.len()));
    }
    let scale = points.iter().map(|p| p.norm()).fold(0.0, f64::max).max(1.0);
    let eps = 1e-12 * scale;

    // Initial tetrahedron from extreme points.
    let i0 = 0;
    let i1 = (0..points.len())
        .max_by(|&a, &b| {
            let da = (points[a] - points[i0]).norm_squared();
            let db = (points[b] - points[i0]).norm_squared();
            da.total_cmp(&db)
        })
        .unwrap();
    let dir = (points[i1] - points[i0]).normalize();
    let line_dist = |p: &Vec3| {
        let d = p - points[i0];
        (d - dir * d.dot(&dir)).norm()
    };
    let i2 = (0..points.len())
        .max_by(|&a, &b| line_dist(&points[a]).total_cmp(&line_dist(&points[b])))
        .unwrap();
    if line_dist(&points[i2]) <= eps {
        return Err(HullError::Degenerate);
    }
    let base = Facet::new(points, [i0, i1, i2]);
    let i3 = (0..points.len())
        .max_by(|&a, &b| base.height(&points[a]).abs().total_cmp(&base.height(&points[b]).abs()))
        .unwrap();
    if base.height(&points[i3]).abs() <= eps {
        return Err(HullError::Degenerate);
    }

    let mut facets: Vec<Option<Facet>> = Vec::new();
    let (a, b, c) = if base.height(&points[i3]) > 0.0 {
        (i0, i2, i1)
    } else {
        (i0, i1, i2)
    };
    for v in [[a, b, c], [a, c, i3], [c, b, i3], [b, a, i3]] {
        facets.push(Some(Facet::new(points, v)));
    }
    let seed: HashSet<usize> = [i0, i1, i2, i3].into_iter().collect();

    for (pi, p) in points.iter().enumerate() {
        if seed.contains(&pi) {
            continue;
        }
        let visible: Vec<usize> = facets
            .iter()
            .enumerate()
            .filter_map(|(k, f)| f.filter(|f| f.height(p) > eps).map(|_| k))
            .collect();
        if visible.is_empty() {
            continue;
        }
        let mut directed: HashMap<(usize, usize), ()> = HashMap::new();
        for &k in &visible {
            let v = facets[k].unwrap().v;
            for j in 0..3 {
                directed.insert((v[j], v[(j + 1) % 3]), ());
            }
        }
        let mut horizon: Vec<(usize, usize)> = directed
            .keys()
            .filter(|&&(x, y)| !directed.contains_key(&(y, x)))
            .copied()
            .collect();
        horizon.sort_unstable();
        for &k in &visible {
            facets[k] = None;
        }
        for (x, y) in horizon {
            facets.push(Some(Facet::new(points, [x, y, pi])));
        }
    }

    let alive: Vec<[usize; 3]> = facets.iter().flatten().map(|f| f.v).collect();
    let mut used: Vec<usize> = alive.iter().flatten().copied().collect();
    used.sort_unstable();
    used.dedup();
    let remap: HashMap<usize, usize> = used.iter().enumerate().map(|(k, &i)| (i, k)).collect();
    let vertices = used.iter().map(|&i| points[i]).collect();
    let faces = alive.iter().map(|t| t.iter().map(|i| remap[i]).collect()).collect();
    Ok(PolyhedralSurface::new(vertices, faces).expect("hull faces index hull vertices"))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::mesh::validate_surface;

    #[test]
    fn cube_corners_with_interior_point() {
        let mut pts: Vec<Vec3> = (0..8)
            .map(|i| Vec3::new((i & 1) as f64, ((i >> 1) & 1) as f64, ((i >> 2) & 1) as f64))
            .collect();
        // Perturb to avoid coplanar quads.
        for (k, p) in pts.iter_mut().enumerate() {
            *p += Vec3::new(1e-3 * k as f64, -7e-4 * (k % 3) as f64, 5e-4 * (k % 2) as f64);
        }
        pts.push(Vec3::new(0.5, 0.5, 0.5));
        let h = convex_hull(&pts).unwrap();
        assert_eq!(h.vertex_count(), 8);
        assert_eq!(h.face_count(), 12);
        assert!(validate_surface(&h).is_valid());
    }

    #[test]
    fn degenerate_inputs() {
        assert_eq!(
            convex_hull(&[Vec3::zeros(); 3]).unwrap_err(),
            HullError::TooFewPoints(3)
        );
        let flat: Vec<Vec3> = (0..6).map(|i| Vec3::new(i as f64, (i * i) as f64, 0.0)).collect();
        assert_eq!(convex_hull(&flat).unwrap_err(), HullError::Degenerate);
    }

    #[test]
    fn sphere_points_give_2n_minus_4_faces() {
        let h = crate::fixtures::random_hull(200, 7);
        assert_eq!(h.vertex_count(), 200);
        assert_eq!(h.face_count(), 396);
        assert!(validate_surface(&h).is_valid());
    }
}
