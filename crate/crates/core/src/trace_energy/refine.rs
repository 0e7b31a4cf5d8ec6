use std::collections::HashMap;

use crate::mesh::{MeshError, PolyhedralSurface};
use crate::Vec3;

/// Triangle mesh in 3-space.
#[derive(Debug, Clone, PartialEq)]
pub struct TriMesh {
    pub vertices: Vec<Vec3>,
    pub triangles: Vec<[usize; 3]>,
}

impl TriMesh {
    /// Unit square `[0,1]^2` in the plane `z = 0`, split into `n x n` cells
    /// of two triangles each.
    pub fn square_grid(n: usize) -> Self {
        let idx = |i: usize, j: usize| j * (n + 1) + i;
        let mut vertices = Vec::with_capacity((n + 1) * (n + 1));
        for j in 0..=n {
            for i in 0..=n {
                vertices.push(Vec3::new(i as f64 / n as f64, j as f64 / n as f64, 0.0));
            }
        }
        let mut triangles = Vec::with_capacity(2 * n * n);
        for j in 0..n {
            for i in 0..n {
                triangles.push([idx(i, j), idx(i + 1, j), idx(i + 1, j + 1)]);
                triangles.push([idx(i, j), idx(i + 1, j + 1), idx(i, j + 1)]);
            }
        }
        Self { vertices, triangles }
    }

    /// Vertices lying on an edge used by exactly one triangle.
    pub fn boundary_vertices(&self) -> Vec<bool> {
        let mut count: HashMap<(usize, usize), usize> = HashMap::new();
        for t in &self.triangles {
            for k in 0..3 {
                let (a, b) = (t[k], t[(k + 1) % 3]);
                *count.entry((a.min(b), a.max(b))).or_default() += 1;
            }
        }
        let mut out = vec![false; self.vertices.len()];
        for ((a, b), c) in count {
            if c == 1 {
                out[a] = true;
                out[b] = true;
            }
        }
        out
    }

    pub fn area(&self) -> f64 {
        self.triangles
            .iter()
            .map(|t| {
                let [a, b, c] = t.map(|i| self.vertices[i]);
                0.5 * (b - a).cross(&(c - a)).norm()
            })
            .sum()
    }

    pub fn to_surface(&self) -> Result<PolyhedralSurface, MeshError> {
        PolyhedralSurface::new(
            self.vertices.clone(),
            self.triangles.iter().map(|t| t.to_vec()).collect(),
        )
    }
}

/// A polyhedral surface fan-triangulated and then uniformly subdivided
/// `level` times (each triangle into four via edge midpoints).
#[derive(Debug, Clone)]
pub struct RefinedSurface {
    pub level: usize,
    pub fan_rotation: usize,
    pub mesh: TriMesh,
    /// Base face of each triangle.
    pub triangle_face: Vec<usize>,
    /// Sorted base faces whose closure contains each vertex.
    pub vertex_faces: Vec<Vec<usize>>,
    pub base_face_count: usize,
}

impl RefinedSurface {
    /// Fails with the offending face when a fan folds over.
    pub fn new(base: &PolyhedralSurface, level: usize, fan_rotation: usize) -> Result<Self, usize> {
        let mut vertices = base.vertices().to_vec();
        let mut triangles = Vec::new();
        let mut triangle_face = Vec::new();
        for f in 0..base.face_count() {
            if !base.fan_is_valid(f, fan_rotation) {
                return Err(f);
            }
            for t in base.fan_triangles_rotated(f, fan_rotation) {
                triangles.push(t);
                triangle_face.push(f);
            }
        }
        for _ in 0..level {
            let mut mid: HashMap<(usize, usize), usize> = HashMap::new();
            let mut midpoint = |a: usize, b: usize, vertices: &mut Vec<Vec3>| {
                *mid.entry((a.min(b), a.max(b))).or_insert_with(|| {
                    vertices.push((vertices[a] + vertices[b]) * 0.5);
                    vertices.len() - 1
                })
            };
            let mut next = Vec::with_capacity(4 * triangles.len());
            let mut next_face = Vec::with_capacity(4 * triangles.len());
            for (t, &f) in triangles.iter().zip(&triangle_face) {
                let [a, b, c] = *t;
                let ab = midpoint(a, b, &mut vertices);
                let bc = midpoint(b, c, &mut vertices);
                let ca = midpoint(c, a, &mut vertices);
                next.extend([[a, ab, ca], [ab, b, bc], [ca, bc, c], [ab, bc, ca]]);
                next_face.extend([f; 4]);
            }
            triangles = next;
            triangle_face = next_face;
        }
        let mut vertex_faces = vec![Vec::new(); vertices.len()];
        for (t, &f) in triangles.iter().zip(&triangle_face) {
            for &v in t {
                vertex_faces[v].push(f);
            }
        }
        for fs in &mut vertex_faces {
            fs.sort_unstable();
            fs.dedup();
        }
        Ok(Self {
            level,
            fan_rotation,
            mesh: TriMesh { vertices, triangles },
            triangle_face,
            vertex_faces,
            base_face_count: base.face_count(),
        })
    }

    pub fn vertex_count(&self) -> usize {
        self.mesh.vertices.len()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixtures;

    #[test]
    fn counts_grow_by_four() {
        let cube = fixtures::cube();
        let r0 = RefinedSurface::new(&cube, 0, 0).unwrap();
        assert_eq!(r0.mesh.triangles.len(), 12);
        for l in 1..4 {
            let r = RefinedSurface::new(&cube, l, 0).unwrap();
            assert_eq!(r.mesh.triangles.len(), 12 * 4usize.pow(l as u32));
            // Closed triangulated sphere: V = T/2 + 2.
            assert_eq!(r.vertex_count(), r.mesh.triangles.len() / 2 + 2);
        }
    }

    #[test]
    fn vertices_lie_on_their_faces() {
        let s = fixtures::square_pyramid();
        let r = RefinedSurface::new(&s, 3, 1).unwrap();
        for (v, faces) in r.vertex_faces.iter().enumerate() {
            assert!(!faces.is_empty());
            for &f in faces {
                let n = s.face_normal(f);
                let p = s.vertex(s.face(f)[0]);
                assert!((r.mesh.vertices[v] - p).dot(&n).abs() < 1e-12);
            }
        }
        assert!((r.mesh.area() - s.surface_area()).abs() < 1e-12);
    }

    #[test]
    fn grid_boundary() {
        let g = TriMesh::square_grid(4);
        assert_eq!(g.vertices.len(), 25);
        assert_eq!(g.boundary_vertices().iter().filter(|&&b| b).count(), 16);
        assert!((g.area() - 1.0).abs() < 1e-15);
    }
}
