//! Polyhedral surfaces: construction, OFF input/output and manifold validation.
//!
//! A [`PolyhedralSurface`] stores vertex positions and planar polygonal faces
//! (counterclockwise when seen from outside). Undirected edges and the
//! face-to-face adjacency are derived once at construction; the surface is
//! immutable afterwards. Structural problems that make the connectivity
//! meaningless (indices out of range, repeated indices, faces with fewer
//! than three corners) are construction errors. Everything else, such as
//! open edges, pinched vertices or a flipped face, is reported as data by
//! [`validate_surface`].

use std::collections::HashMap;
use std::fmt::Write as _;

use serde::Serialize;
use thiserror::Error;

use crate::Vec3;

/// Relative planarity tolerance: a face is planar when every corner lies
/// within this multiple of the bounding-box diagonal of its best-fit plane.
pub const PLANAR_TOLERANCE: f64 = 1e-9;

/// Faces whose area is below this multiple of the squared bounding-box
/// diagonal are degenerate.
pub const DEGENERATE_AREA_TOLERANCE: f64 = 1e-14;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum MeshError {
    #[error("face {face} has {count} vertices, at least 3 are required")]
    FaceTooSmall { face: usize, count: usize },
    #[error("face {face} references vertex {index}, but there are only {vertex_count}")]
    IndexOutOfRange {
        face: usize,
        index: usize,
        vertex_count: usize,
    },
    #[error("face {face} repeats vertex {index}")]
    DuplicateIndex { face: usize, index: usize },
}

/// An undirected edge with the faces that use it, in order of first use.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Edge {
    /// Endpoints, smaller index first.
    pub vertices: [usize; 2],
    pub faces: Vec<usize>,
}

impl Edge {
    /// The two incident faces, when the edge is manifold.
    pub fn face_pair(&self) -> Option<[usize; 2]> {
        match self.faces.as_slice() {
            &[a, b] => Some([a, b]),
            _ => None,
        }
    }
}

#[derive(Debug, Clone)]
pub struct PolyhedralSurface {
    vertices: Vec<Vec3>,
    faces: Vec<Vec<usize>>,
    edges: Vec<Edge>,
    edge_lookup: HashMap<(usize, usize), usize>,
    face_edges: Vec<Vec<usize>>,
}

fn edge_key(a: usize, b: usize) -> (usize, usize) {
    if a < b {
        (a, b)
    } else {
        (b, a)
    }
}

impl PolyhedralSurface {
    pub fn new(vertices: Vec<Vec3>, faces: Vec<Vec<usize>>) -> Result<Self, MeshError> {
        let n = vertices.len();
        for (fi, face) in faces.iter().enumerate() {
            if face.len() < 3 {
                return Err(MeshError::FaceTooSmall {
                    face: fi,
                    count: face.len(),
                });
            }
            for (k, &vi) in face.iter().enumerate() {
                if vi >= n {
                    return Err(MeshError::IndexOutOfRange {
                        face: fi,
                        index: vi,
                        vertex_count: n,
                    });
                }
                if face[..k].contains(&vi) {
                    return Err(MeshError::DuplicateIndex { face: fi, index: vi });
                }
            }
        }

        let mut edges: Vec<Edge> = Vec::new();
        let mut edge_lookup = HashMap::new();
        let mut face_edges = Vec::with_capacity(faces.len());
        for (fi, face) in faces.iter().enumerate() {
            let mut fe = Vec::with_capacity(face.len());
            for k in 0..face.len() {
                let key = edge_key(face[k], face[(k + 1) % face.len()]);
                let id = *edge_lookup.entry(key).or_insert_with(|| {
                    edges.push(Edge {
                        vertices: [key.0, key.1],
                        faces: Vec::with_capacity(2),
                    });
                    edges.len() - 1
                });
                edges[id].faces.push(fi);
                fe.push(id);
            }
            face_edges.push(fe);
        }

        Ok(Self {
            vertices,
            faces,
            edges,
            edge_lookup,
            face_edges,
        })
    }

    pub fn vertices(&self) -> &[Vec3] {
        &self.vertices
    }

    pub fn faces(&self) -> &[Vec<usize>] {
        &self.faces
    }

    pub fn edges(&self) -> &[Edge] {
        &self.edges
    }

    pub fn vertex(&self, v: usize) -> Vec3 {
        self.vertices[v]
    }

    pub fn face(&self, f: usize) -> &[usize] {
        &self.faces[f]
    }

    pub fn vertex_count(&self) -> usize {
        self.vertices.len()
    }

    pub fn face_count(&self) -> usize {
        self.faces.len()
    }

    pub fn edge_count(&self) -> usize {
        self.edges.len()
    }

    /// Edge ids of face `f`, in the order of its boundary cycle
    /// (`face_edges(f)[k]` joins corner `k` to corner `k + 1`).
    pub fn face_edges(&self, f: usize) -> &[usize] {
        &self.face_edges[f]
    }

    pub fn edge_between(&self, a: usize, b: usize) -> Option<usize> {
        self.edge_lookup.get(&edge_key(a, b)).copied()
    }

    /// Whether face `f` traverses `a -> b` as consecutive corners.
    pub fn face_traverses(&self, f: usize, a: usize, b: usize) -> bool {
        let face = &self.faces[f];
        (0..face.len()).any(|k| face[k] == a && face[(k + 1) % face.len()] == b)
    }

    /// Faces that contain vertex `v`, in increasing order.
    pub fn faces_around_vertex(&self, v: usize) -> Vec<usize> {
        (0..self.faces.len()).filter(|&f| self.faces[f].contains(&v)).collect()
    }

    /// Neighbouring faces of `f` across each of its manifold edges.
    pub fn face_neighbors(&self, f: usize) -> Vec<(usize, usize)> {
        self.face_edges[f]
            .iter()
            .flat_map(|&e| {
                self.edges[e]
                    .faces
                    .iter()
                    .filter(move |&&g| g != f)
                    .map(move |&g| (e, g))
            })
            .collect()
    }

    pub fn euler_characteristic(&self) -> i64 {
        self.vertices.len() as i64 - self.edges.len() as i64 + self.faces.len() as i64
    }

    /// Newell normal of face `f`: twice the vector area.
    pub fn face_vector_area2(&self, f: usize) -> Vec3 {
        let face = &self.faces[f];
        let mut n = Vec3::zeros();
        for k in 0..face.len() {
            let p = self.vertices[face[k]];
            let q = self.vertices[face[(k + 1) % face.len()]];
            n.x += (p.y - q.y) * (p.z + q.z);
            n.y += (p.z - q.z) * (p.x + q.x);
            n.z += (p.x - q.x) * (p.y + q.y);
        }
        n
    }

    /// Outward unit normal (zero vector for degenerate faces).
    pub fn face_normal(&self, f: usize) -> Vec3 {
        let n = self.face_vector_area2(f);
        let len = n.norm();
        if len > 0.0 {
            n / len
        } else {
            n
        }
    }

    pub fn face_area(&self, f: usize) -> f64 {
        0.5 * self.face_vector_area2(f).norm()
    }

    pub fn face_centroid(&self, f: usize) -> Vec3 {
        let face = &self.faces[f];
        face.iter().map(|&v| self.vertices[v]).sum::<Vec3>() / face.len() as f64
    }

    pub fn surface_area(&self) -> f64 {
        (0..self.faces.len()).map(|f| self.face_area(f)).sum()
    }

    pub fn bounding_box(&self) -> (Vec3, Vec3) {
        let mut lo = Vec3::repeat(f64::INFINITY);
        let mut hi = Vec3::repeat(f64::NEG_INFINITY);
        for p in &self.vertices {
            lo = lo.inf(p);
            hi = hi.sup(p);
        }
        (lo, hi)
    }

    pub fn bounding_box_diagonal(&self) -> f64 {
        if self.vertices.is_empty() {
            return 0.0;
        }
        let (lo, hi) = self.bounding_box();
        (hi - lo).norm()
    }

    /// Fan triangulation of face `f` rooted at its lowest-index corner,
    /// shifted by `rotation` positions along the cycle.
    pub fn fan_triangles_rotated(&self, f: usize, rotation: usize) -> Vec<[usize; 3]> {
        let face = &self.faces[f];
        let n = face.len();
        let lowest = (0..n).min_by_key(|&k| face[k]).unwrap_or(0);
        let root = (lowest + rotation) % n;
        (1..n - 1)
            .map(|k| [face[root], face[(root + k) % n], face[(root + k + 1) % n]])
            .collect()
    }

    pub fn fan_triangles(&self, f: usize) -> Vec<[usize; 3]> {
        self.fan_triangles_rotated(f, 0)
    }

    /// Whether the fan of face `f` covers the polygon without folding, i.e.
    /// every fan triangle has positive area along the face normal.
    pub fn fan_is_valid(&self, f: usize, rotation: usize) -> bool {
        let n = self.face_normal(f);
        let scale = self.face_area(f).max(f64::MIN_POSITIVE);
        self.fan_triangles_rotated(f, rotation).iter().all(|t| {
            let [a, b, c] = t.map(|i| self.vertices[i]);
            0.5 * (b - a).cross(&(c - a)).dot(&n) > 1e-12 * scale
        })
    }

    /// All fan triangles with their face ids.
    pub fn triangles(&self) -> Vec<([usize; 3], usize)> {
        (0..self.faces.len())
            .flat_map(|f| self.fan_triangles(f).into_iter().map(move |t| (t, f)))
            .collect()
    }

    /// Signed enclosed volume; positive when normals point outward.
    pub fn signed_volume(&self) -> f64 {
        let mut vol = 0.0;
        for (t, _) in self.triangles() {
            let [a, b, c] = t.map(|i| self.vertices[i]);
            vol += a.dot(&b.cross(&c));
        }
        vol / 6.0
    }

    /// A copy with every vertex mapped by `map`.
    pub fn map_vertices(&self, map: impl Fn(Vec3) -> Vec3) -> Self {
        let vertices = self.vertices.iter().map(|&p| map(p)).collect();
        Self::new(vertices, self.faces.clone()).expect("connectivity unchanged")
    }

    /// A copy with the boundary cycle of face `f` reversed.
    pub fn with_face_reversed(&self, f: usize) -> Self {
        let mut faces = self.faces.clone();
        faces[f].reverse();
        Self::new(self.vertices.clone(), faces).expect("connectivity unchanged")
    }

    /// A copy whose face `k` is the original face `order[k]`.
    pub fn with_faces_permuted(&self, order: &[usize]) -> Self {
        let faces = order.iter().map(|&i| self.faces[i].clone()).collect();
        Self::new(self.vertices.clone(), faces).expect("connectivity unchanged")
    }
}

// ---------------------------------------------------------------------------
// OFF input / output

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum OffError {
    #[error("missing OFF header, line {line}")]
    MissingHeader { line: usize },
    #[error("malformed header {found:?}, line {line}")]
    MalformedHeader { line: usize, found: String },
    #[error("malformed counts line, line {line}")]
    MalformedCounts { line: usize },
    #[error("unexpected end of input while reading {expected}, line {line}")]
    UnexpectedEof { line: usize, expected: &'static str },
    #[error("invalid number {token:?}, line {line}")]
    BadNumber { line: usize, token: String },
    #[error("vertex needs 3 coordinates, line {line}")]
    ShortVertex { line: usize },
    #[error("face declares {declared} vertices but lists {found}, line {line}")]
    ShortFace { line: usize, declared: usize, found: usize },
    #[error("index out of range, line {line}: vertex {index} of {vertex_count}")]
    IndexOutOfRange {
        line: usize,
        index: usize,
        vertex_count: usize,
    },
    #[error("face with fewer than 3 vertices ({count}), line {line}")]
    FaceTooSmall { line: usize, count: usize },
    #[error("duplicate vertex index {index} within a face, line {line}")]
    DuplicateIndex { line: usize, index: usize },
}

impl OffError {
    pub fn line(&self) -> usize {
        match *self {
            OffError::MissingHeader { line }
            | OffError::MalformedHeader { line, .. }
            | OffError::MalformedCounts { line }
            | OffError::UnexpectedEof { line, .. }
            | OffError::BadNumber { line, .. }
            | OffError::ShortVertex { line }
            | OffError::ShortFace { line, .. }
            | OffError::IndexOutOfRange { line, .. }
            | OffError::FaceTooSmall { line, .. }
            | OffError::DuplicateIndex { line, .. } => line,
        }
    }
}

/// Parsed OFF content: the surface plus any per-vertex scalar column.
#[derive(Debug, Clone)]
pub struct OffContents {
    pub surface: PolyhedralSurface,
    /// Fourth column of the vertex lines, when every vertex carries one.
    pub vertex_scalars: Option<Vec<f64>>,
}

struct Lines<'a> {
    inner: std::iter::Enumerate<std::str::Lines<'a>>,
    last: usize,
}

impl<'a> Lines<'a> {
    /// Next line with content, as (1-based line number, tokens).
    fn next_tokens(&mut self) -> Option<(usize, Vec<&'a str>)> {
        for (i, raw) in self.inner.by_ref() {
            self.last = i + 1;
            let body = raw.split('#').next().unwrap_or("");
            let tokens: Vec<&str> = body.split_whitespace().collect();
            if !tokens.is_empty() {
                return Some((i + 1, tokens));
            }
        }
        None
    }
}

fn parse_num<T: std::str::FromStr>(token: &str, line: usize) -> Result<T, OffError> {
    token.parse().map_err(|_| OffError::BadNumber {
        line,
        token: token.to_string(),
    })
}

/// Parses an OFF document into a surface.
pub fn parse_off(text: &str) -> Result<PolyhedralSurface, OffError> {
    parse_off_with_scalars(text).map(|c| c.surface)
}

/// Parses an OFF document, keeping an optional fourth vertex column.
pub fn parse_off_with_scalars(text: &str) -> Result<OffContents, OffError> {
    let mut lines = Lines {
        inner: text.lines().enumerate(),
        last: 0,
    };
    let (hline, htoks) = lines.next_tokens().ok_or(OffError::MissingHeader { line: 1 })?;
    let head = htoks[0];
    let rest: Vec<&str> = if head == "OFF" {
        htoks[1..].to_vec()
    } else if let Some(tail) = head.strip_prefix("OFF") {
        // "OFF8 6 0" style headers are not OFF.
        return Err(OffError::MalformedHeader {
            line: hline,
            found: format!("OFF{tail}"),
        });
    } else {
        return Err(OffError::MalformedHeader {
            line: hline,
            found: head.to_string(),
        });
    };

    let (cline, ctoks) = if rest.is_empty() {
        lines.next_tokens().ok_or(OffError::UnexpectedEof {
            line: lines.last,
            expected: "counts",
        })?
    } else {
        (hline, rest)
    };
    if ctoks.len() < 2 {
        return Err(OffError::MalformedCounts { line: cline });
    }
    let nv: usize = parse_num(ctoks[0], cline).map_err(|_| OffError::MalformedCounts { line: cline })?;
    let nf: usize = parse_num(ctoks[1], cline).map_err(|_| OffError::MalformedCounts { line: cline })?;

    let mut vertices = Vec::with_capacity(nv);
    let mut scalars = Vec::with_capacity(nv);
    for _ in 0..nv {
        let (line, toks) = lines.next_tokens().ok_or(OffError::UnexpectedEof {
            line: lines.last,
            expected: "vertex",
        })?;
        if toks.len() < 3 {
            return Err(OffError::ShortVertex { line });
        }
        let x = parse_num(toks[0], line)?;
        let y = parse_num(toks[1], line)?;
        let z = parse_num(toks[2], line)?;
        vertices.push(Vec3::new(x, y, z));
        if toks.len() == 4 {
            scalars.push(parse_num(toks[3], line)?);
        }
    }

    let mut faces = Vec::with_capacity(nf);
    for _ in 0..nf {
        let (line, toks) = lines.next_tokens().ok_or(OffError::UnexpectedEof {
            line: lines.last,
            expected: "face",
        })?;
        let k: usize = parse_num(toks[0], line)?;
        if k < 3 {
            return Err(OffError::FaceTooSmall { line, count: k });
        }
        if toks.len() < k + 1 {
            return Err(OffError::ShortFace {
                line,
                declared: k,
                found: toks.len() - 1,
            });
        }
        let mut face = Vec::with_capacity(k);
        for tok in &toks[1..=k] {
            let idx: usize = parse_num(tok, line)?;
            if idx >= nv {
                return Err(OffError::IndexOutOfRange {
                    line,
                    index: idx,
                    vertex_count: nv,
                });
            }
            if face.contains(&idx) {
                return Err(OffError::DuplicateIndex { line, index: idx });
            }
            face.push(idx);
        }
        faces.push(face);
    }

    let surface = PolyhedralSurface::new(vertices, faces).expect("indices and face sizes were checked while parsing");
    let vertex_scalars = (nv > 0 && scalars.len() == nv).then_some(scalars);
    Ok(OffContents {
        surface,
        vertex_scalars,
    })
}

fn write_off_body(s: &PolyhedralSurface, scalars: Option<&[f64]>) -> String {
    let mut out = String::new();
    writeln!(out, "OFF").unwrap();
    writeln!(out, "{} {} {}", s.vertex_count(), s.face_count(), s.edge_count()).unwrap();
    for (i, p) in s.vertices().iter().enumerate() {
        // Debug formatting of f64 is the shortest representation that
        // parses back to the same bits.
        match scalars {
            Some(vals) => writeln!(out, "{:?} {:?} {:?} {:?}", p.x, p.y, p.z, vals[i]).unwrap(),
            None => writeln!(out, "{:?} {:?} {:?}", p.x, p.y, p.z).unwrap(),
        }
    }
    for face in s.faces() {
        write!(out, "{}", face.len()).unwrap();
        for v in face {
            write!(out, " {v}").unwrap();
        }
        out.push('\n');
    }
    out
}

/// Writes a surface as OFF text. Coordinates round-trip bit-exactly.
pub fn serialize_off(s: &PolyhedralSurface) -> String {
    write_off_body(s, None)
}

/// OFF text with one scalar appended to each vertex line.
pub fn serialize_off_with_scalars(s: &PolyhedralSurface, scalars: &[f64]) -> String {
    assert_eq!(scalars.len(), s.vertex_count(), "one scalar per vertex");
    write_off_body(s, Some(scalars))
}

// ---------------------------------------------------------------------------
// Validation

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum ViolationKind {
    /// Edge used by a single face.
    BoundaryEdge,
    /// Edge used by three or more faces.
    NonManifoldEdge,
    /// Vertex whose link is not a single cycle.
    NonManifoldVertex,
    /// Vertex not referenced by any face.
    IsolatedVertex,
    /// More than one connected component of faces.
    Disconnected,
    NonPlanarFace,
    DegenerateFace,
    /// Both faces of an edge traverse it in the same direction.
    InconsistentOrientation,
    /// Enclosed volume is not positive (inward normals or inside-out).
    NonPositiveVolume,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Location {
    Vertex(usize),
    Edge([usize; 2]),
    Face(usize),
    /// Number of connected components.
    Components(usize),
    Global,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Violation {
    pub kind: ViolationKind,
    pub location: Location,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct MeshDiagnostics {
    pub vertex_count: usize,
    pub edge_count: usize,
    pub face_count: usize,
    #[serde(rename = "euler")]
    pub euler_characteristic: i64,
    pub violations: Vec<Violation>,
}

impl MeshDiagnostics {
    pub fn is_valid(&self) -> bool {
        self.violations.is_empty()
    }

    pub fn count(&self, kind: ViolationKind) -> usize {
        self.violations.iter().filter(|v| v.kind == kind).count()
    }

    /// Genus of a valid closed orientable surface.
    pub fn genus(&self) -> Option<i64> {
        (self.is_valid() && (2 - self.euler_characteristic) % 2 == 0).then_some((2 - self.euler_characteristic) / 2)
    }
}

/// Checks every standing hypothesis on a surface and lists the violations.
pub fn validate_surface(s: &PolyhedralSurface) -> MeshDiagnostics {
    let mut violations = Vec::new();
    let diag = s.bounding_box_diagonal();

    let mut used = vec![false; s.vertex_count()];
    for face in s.faces() {
        for &v in face {
            used[v] = true;
        }
    }
    for (v, &u) in used.iter().enumerate() {
        if !u {
            violations.push(Violation {
                kind: ViolationKind::IsolatedVertex,
                location: Location::Vertex(v),
            });
        }
    }

    let mut closed = true;
    for e in s.edges() {
        let loc = Location::Edge(e.vertices);
        match e.faces.len() {
            1 => {
                closed = false;
                violations.push(Violation {
                    kind: ViolationKind::BoundaryEdge,
                    location: loc,
                });
            }
            2 => {
                let [a, b] = e.vertices;
                let f0 = s.face_traverses(e.faces[0], a, b);
                let f1 = s.face_traverses(e.faces[1], a, b);
                if f0 == f1 {
                    violations.push(Violation {
                        kind: ViolationKind::InconsistentOrientation,
                        location: loc,
                    });
                }
            }
            _ => {
                closed = false;
                violations.push(Violation {
                    kind: ViolationKind::NonManifoldEdge,
                    location: loc,
                });
            }
        }
    }

    // Vertex links; only meaningful where every incident edge is manifold,
    // otherwise the edge violation already explains the defect.
    let mut links: Vec<Vec<(usize, usize)>> = vec![Vec::new(); s.vertex_count()];
    for face in s.faces() {
        let n = face.len();
        for k in 0..n {
            links[face[k]].push((face[(k + n - 1) % n], face[(k + 1) % n]));
        }
    }
    for (v, link) in links.iter().enumerate() {
        if link.is_empty() {
            continue;
        }
        let all_manifold = link.iter().all(|&(p, q)| {
            [p, q].iter().all(|&w| {
                s.edge_between(v, w)
                    .map(|e| s.edges()[e].faces.len() == 2)
                    .unwrap_or(false)
            })
        });
        if all_manifold && !link_is_single_cycle(link) {
            violations.push(Violation {
                kind: ViolationKind::NonManifoldVertex,
                location: Location::Vertex(v),
            });
        }
    }

    let components = face_components(s);
    if components > 1 {
        violations.push(Violation {
            kind: ViolationKind::Disconnected,
            location: Location::Components(components),
        });
    }

    for f in 0..s.face_count() {
        let n2 = s.face_vector_area2(f);
        let area = 0.5 * n2.norm();
        if area <= DEGENERATE_AREA_TOLERANCE * diag * diag {
            violations.push(Violation {
                kind: ViolationKind::DegenerateFace,
                location: Location::Face(f),
            });
            continue;
        }
        let normal = n2 / n2.norm();
        let c = s.face_centroid(f);
        let off = s
            .face(f)
            .iter()
            .map(|&v| (s.vertex(v) - c).dot(&normal).abs())
            .fold(0.0, f64::max);
        if off > PLANAR_TOLERANCE * diag {
            violations.push(Violation {
                kind: ViolationKind::NonPlanarFace,
                location: Location::Face(f),
            });
        }
    }

    if closed && s.face_count() > 0 && s.signed_volume() <= 0.0 {
        violations.push(Violation {
            kind: ViolationKind::NonPositiveVolume,
            location: Location::Global,
        });
    }

    MeshDiagnostics {
        vertex_count: s.vertex_count(),
        edge_count: s.edge_count(),
        face_count: s.face_count(),
        euler_characteristic: s.euler_characteristic(),
        violations,
    }
}

/// Link segments `(prev, next)` form exactly one closed cycle.
fn link_is_single_cycle(link: &[(usize, usize)]) -> bool {
    let mut adj: HashMap<usize, Vec<usize>> = HashMap::new();
    for &(p, q) in link {
        adj.entry(p).or_default().push(q);
        adj.entry(q).or_default().push(p);
    }
    if adj.values().any(|n| n.len() != 2) {
        return false;
    }
    let start = link[0].0;
    let mut seen = vec![start];
    let mut stack = vec![start];
    while let Some(x) = stack.pop() {
        for &y in &adj[&x] {
            if !seen.contains(&y) {
                seen.push(y);
                stack.push(y);
            }
        }
    }
    seen.len() == adj.len()
}

/// Number of connected pieces of the surface; faces touching only at a
/// vertex count as connected.
pub fn face_components(s: &PolyhedralSurface) -> usize {
    let mut uf = UnionFind::new(s.face_count());
    let mut first_face = vec![usize::MAX; s.vertex_count()];
    for f in 0..s.face_count() {
        for &v in s.face(f) {
            if first_face[v] == usize::MAX {
                first_face[v] = f;
            } else {
                uf.union(first_face[v], f);
            }
        }
    }
    uf.count_roots()
}

/// Plain union-find with path halving; used for face components and the
/// partition quotient graph.
#[derive(Debug, Clone)]
pub struct UnionFind {
    parent: Vec<usize>,
}

impl UnionFind {
    pub fn new(n: usize) -> Self {
        Self {
            parent: (0..n).collect(),
        }
    }

    pub fn find(&mut self, mut x: usize) -> usize {
        while self.parent[x] != x {
            self.parent[x] = self.parent[self.parent[x]];
            x = self.parent[x];
        }
        x
    }

    pub fn union(&mut self, a: usize, b: usize) {
        let (ra, rb) = (self.find(a), self.find(b));
        if ra != rb {
            // Keep the smaller index as representative.
            let (lo, hi) = if ra < rb { (ra, rb) } else { (rb, ra) };
            self.parent[hi] = lo;
        }
    }

    pub fn count_roots(&mut self) -> usize {
        (0..self.parent.len()).filter(|&i| self.find(i) == i).count()
    }
}
