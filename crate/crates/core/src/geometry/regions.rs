use thiserror::Error;

use super::containment::point_polygon_distance;
use crate::mesh::PolyhedralSurface;
use crate::Vec3;

/// Cone and arch radii may use at most this fraction of the separation
/// radius of their vertex.
pub const RADIUS_FRACTION: f64 = 0.9;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum RegionError {
    #[error("vertex {vertex} does not exist")]
    NoSuchVertex { vertex: usize },
    #[error("radii must satisfy 0 < r < R, got r = {inner}, R = {outer}")]
    BadRadii { inner: f64, outer: f64 },
    #[error("radius {radius} exceeds {fraction} x separation radius {separation} at vertex {vertex}")]
    TooLarge {
        vertex: usize,
        radius: f64,
        separation: f64,
        fraction: f64,
    },
}

pub fn point_segment_distance(p: &Vec3, a: &Vec3, b: &Vec3) -> f64 {
    let ab = b - a;
    let len2 = ab.norm_squared();
    let t = if len2 > 0.0 {
        ((p - a).dot(&ab) / len2).clamp(0.0, 1.0)
    } else {
        0.0
    };
    (p - (a + ab * t)).norm()
}

/// Distance from vertex `v` to the nearest other vertex, edge not incident
/// to `v`, or face not incident to `v`. Balls about `v` of smaller radius
/// meet only the faces and edges through `v`.
pub fn separation_radius(s: &PolyhedralSurface, v: usize) -> f64 {
    let p = s.vertex(v);
    let mut best = f64::INFINITY;
    for (w, q) in s.vertices().iter().enumerate() {
        if w != v {
            best = best.min((q - p).norm());
        }
    }
    for e in s.edges() {
        if !e.vertices.contains(&v) {
            let [a, b] = e.vertices;
            best = best.min(point_segment_distance(&p, &s.vertex(a), &s.vertex(b)));
        }
    }
    for f in 0..s.face_count() {
        if !s.face(f).contains(&v) {
            best = best.min(point_polygon_distance(s, f, &p));
        }
    }
    best
}

fn check_radius(s: &PolyhedralSurface, vertex: usize, radius: f64) -> Result<f64, RegionError> {
    let separation = separation_radius(s, vertex);
    if radius > RADIUS_FRACTION * separation {
        return Err(RegionError::TooLarge {
            vertex,
            radius,
            separation,
            fraction: RADIUS_FRACTION,
        });
    }
    Ok(separation)
}

/// Truncated cone `{X in closure(Omega) : |X - v| <= r}` at a vertex.
#[derive(Debug, Clone, Copy)]
pub struct ConeRegion<'a> {
    surface: &'a PolyhedralSurface,
    vertex: usize,
    radius: f64,
}

impl<'a> ConeRegion<'a> {
    pub fn new(surface: &'a PolyhedralSurface, vertex: usize, radius: f64) -> Result<Self, RegionError> {
        if vertex >= surface.vertex_count() {
            return Err(RegionError::NoSuchVertex { vertex });
        }
        if radius.partial_cmp(&0.0) != Some(std::cmp::Ordering::Greater) {
            return Err(RegionError::BadRadii {
                inner: radius,
                outer: radius,
            });
        }
        check_radius(surface, vertex, radius)?;
        Ok(Self {
            surface,
            vertex,
            radius,
        })
    }

    pub fn surface(&self) -> &'a PolyhedralSurface {
        self.surface
    }

    pub fn vertex(&self) -> usize {
        self.vertex
    }

    pub fn apex(&self) -> Vec3 {
        self.surface.vertex(self.vertex)
    }

    pub fn radius(&self) -> f64 {
        self.radius
    }
}

/// Arch `{X in closure(Omega) : r <= |X - v| <= R}` at a vertex. Its
/// boundary consists of the inner base `B(v, r)`, the outer base `B(v, R)`
/// and the lateral part on the faces through `v`.
#[derive(Debug, Clone, Copy)]
pub struct ArchRegion<'a> {
    surface: &'a PolyhedralSurface,
    vertex: usize,
    inner: f64,
    outer: f64,
}

impl<'a> ArchRegion<'a> {
    pub fn new(surface: &'a PolyhedralSurface, vertex: usize, inner: f64, outer: f64) -> Result<Self, RegionError> {
        if vertex >= surface.vertex_count() {
            return Err(RegionError::NoSuchVertex { vertex });
        }
        if !(inner > 0.0 && outer > inner) {
            return Err(RegionError::BadRadii { inner, outer });
        }
        check_radius(surface, vertex, outer)?;
        Ok(Self {
            surface,
            vertex,
            inner,
            outer,
        })
    }

    pub fn surface(&self) -> &'a PolyhedralSurface {
        self.surface
    }

    pub fn vertex(&self) -> usize {
        self.vertex
    }

    pub fn apex(&self) -> Vec3 {
        self.surface.vertex(self.vertex)
    }

    pub fn inner_radius(&self) -> f64 {
        self.inner
    }

    pub fn outer_radius(&self) -> f64 {
        self.outer
    }

    pub fn inner_base(&self) -> ConeRegion<'a> {
        ConeRegion {
            surface: self.surface,
            vertex: self.vertex,
            radius: self.inner,
        }
    }

    pub fn outer_base(&self) -> ConeRegion<'a> {
        ConeRegion {
            surface: self.surface,
            vertex: self.vertex,
            radius: self.outer,
        }
    }

    /// Spherical shell volume `4/3 pi (R^3 - r^3)`.
    pub fn shell_volume(&self) -> f64 {
        4.0 / 3.0 * std::f64::consts::PI * (self.outer.powi(3) - self.inner.powi(3))
    }
}
