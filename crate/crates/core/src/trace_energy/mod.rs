//! Discrete extension seminorm of Dirichlet data.
//!
//! Data given on the Dirichlet part `D` of the surface is extended to the
//! whole surface by the piecewise-linear function of least surface Dirichlet
//! energy. Repeating this on uniformly refined triangulations shows whether
//! the data admits a finite-energy extension (energies settle) or not
//! (energies keep growing).
//!
//! Which refined vertices carry data is set by [`DirichletVertices`]. The
//! default constrains every vertex of a `D` face where the data has a single
//! value, since a continuous piecewise-linear function that equals `f` on an
//! open triangle also equals it at the triangle's corners. Vertices where
//! adjacent `D` faces prescribe different values (the apex of the pyramid
//! step data) stay free.

mod cg;
mod refine;

use std::fmt::Write as _;

use serde::Serialize;
use thiserror::Error;

pub use cg::{conjugate_gradient, CgOutcome, SparseMatrix};
pub use refine::{RefinedSurface, TriMesh};

use crate::fixtures;
use crate::mesh::{serialize_off_with_scalars, PolyhedralSurface, UnionFind};
use crate::par;
use crate::partition::{Label, Partition, Side};
use crate::report::fmt_f64;
use crate::Vec3;

/// Relative residual demanded of the linear solver.
pub const SOLVER_TOLERANCE: f64 = 1e-10;

/// Relative change between the last two levels below which a study counts
/// as convergent.
pub const CONVERGENCE_THRESHOLD: f64 = 0.01;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum TraceError {
    #[error("partition has {found} labels but the surface has {expected} faces")]
    LabelCount { expected: usize, found: usize },
    #[error("face data has {found} values but the surface has {expected} faces")]
    DataLength { expected: usize, found: usize },
    #[error("fan triangulation of face {face} folds over")]
    InvalidFan { face: usize },
    #[error("solver stopped after {iterations} iterations at relative residual {residual:e}")]
    NotConverged { iterations: usize, residual: f64 },
    #[error("unknown study case {0:?}")]
    UnknownCase(String),
}

/// Values prescribed on the Dirichlet part.
#[derive(Debug, Clone, PartialEq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum TraceData {
    Constant(f64),
    /// One value per base face; only Dirichlet faces are read.
    FaceConstants(Vec<f64>),
    /// `gradient . X + offset`.
    Linear {
        gradient: Vec3,
        offset: f64,
    },
}

impl TraceData {
    /// The coordinate function `x`, `y` or `z` (axis 0, 1, 2).
    pub fn coordinate(axis: usize) -> Self {
        let mut g = Vec3::zeros();
        g[axis] = 1.0;
        TraceData::Linear {
            gradient: g,
            offset: 0.0,
        }
    }

    /// Value at `x` as seen from face `face`.
    fn value(&self, x: &Vec3, face: usize) -> f64 {
        match self {
            TraceData::Constant(c) => *c,
            TraceData::FaceConstants(v) => v[face],
            TraceData::Linear { gradient, offset } => gradient.dot(x) + offset,
        }
    }
}

/// Refined vertices that receive Dirichlet data.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum DirichletVertices {
    /// Every vertex of a `D` face, unless its `D` faces disagree on the value.
    #[default]
    Closure,
    /// Only vertices all of whose faces are `D`; vertices on `D`/`N` edges
    /// are free.
    Interior,
}

impl std::str::FromStr for DirichletVertices {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "closure" => Ok(DirichletVertices::Closure),
            "interior" => Ok(DirichletVertices::Interior),
            _ => Err(format!("unknown vertex rule `{s}` (expected closure or interior)")),
        }
    }
}

/// Minimizing extension and the pieces of its quadratic form.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Extension {
    pub values: Vec<f64>,
    /// `int |grad_t f|^2` of the extension.
    pub energy: f64,
    /// Lumped `int f^2`; zero unless the mass term was included.
    pub mass: f64,
    pub iterations: usize,
    pub relative_residual: f64,
    pub constrained: usize,
    pub free: usize,
    /// Free regions with no constrained neighbour, set to mean zero.
    pub unanchored_components: usize,
}

/// Edge weights `1/2 cot` of the opposite angle, one triple per triangle
/// corner, so that `sum w_ij (u_i - u_j)^2` is the exact PL energy.
fn cotangent_weights(mesh: &TriMesh) -> Vec<[(usize, usize, f64); 3]> {
    par::map_slice(&mesh.triangles, |t| {
        let p = t.map(|i| mesh.vertices[i]);
        let mut out = [(0, 0, 0.0); 3];
        for k in 0..3 {
            let (i, j) = ((k + 1) % 3, (k + 2) % 3);
            let (a, b) = (p[i] - p[k], p[j] - p[k]);
            let cot = a.dot(&b) / a.cross(&b).norm();
            out[k] = (t[i], t[j], 0.5 * cot);
        }
        out
    })
}

fn lumped_mass(mesh: &TriMesh) -> Vec<f64> {
    let areas = par::map_slice(&mesh.triangles, |t| {
        let [a, b, c] = t.map(|i| mesh.vertices[i]);
        0.5 * (b - a).cross(&(c - a)).norm()
    });
    let mut m = vec![0.0; mesh.vertices.len()];
    for (t, a) in mesh.triangles.iter().zip(areas) {
        for &v in t {
            m[v] += a / 3.0;
        }
    }
    m
}

/// Stiffness matrix `L` with `u^T L u` the PL Dirichlet energy.
pub fn stiffness_matrix(mesh: &TriMesh) -> SparseMatrix {
    let mut trip = Vec::with_capacity(12 * mesh.triangles.len());
    for tri in cotangent_weights(mesh) {
        for (i, j, w) in tri {
            trip.extend([(i, i, w), (j, j, w), (i, j, -w), (j, i, -w)]);
        }
    }
    SparseMatrix::from_triplets(mesh.vertices.len(), &trip)
}

/// Minimizes `u^T (L + M) u` (with `M` only when `with_mass`) over vertex
/// values with `fixed[v] = Some(c)` held at `c`.
pub fn minimize(mesh: &TriMesh, fixed: &[Option<f64>], with_mass: bool) -> Result<Extension, TraceError> {
    let n = mesh.vertices.len();
    let stiffness = stiffness_matrix(mesh);
    let mass = if with_mass { lumped_mass(mesh) } else { vec![0.0; n] };

    let free: Vec<usize> = (0..n).filter(|&v| fixed[v].is_none()).collect();
    let mut slot = vec![usize::MAX; n];
    for (k, &v) in free.iter().enumerate() {
        slot[v] = k;
    }
    let mut u: Vec<f64> = fixed.iter().map(|c| c.unwrap_or(0.0)).collect();

    let mut trip = Vec::new();
    let mut rhs = vec![0.0; free.len()];
    for (k, &v) in free.iter().enumerate() {
        trip.push((k, k, mass[v]));
        for (w, a) in stiffness.row(v) {
            if slot[w] != usize::MAX {
                trip.push((k, slot[w], a));
            } else {
                rhs[k] -= a * u[w];
            }
        }
    }
    let reduced = SparseMatrix::from_triplets(free.len(), &trip);
    let mut x = vec![0.0; free.len()];
    let out = conjugate_gradient(&reduced, &rhs, &mut x, SOLVER_TOLERANCE, 20 * free.len() + 100);
    if !out.converged {
        return Err(TraceError::NotConverged {
            iterations: out.iterations,
            residual: out.relative_residual,
        });
    }

    // Free regions that touch no constrained vertex only see a constant
    // nullspace (without the mass term); fix them to mean zero.
    let mut uf = UnionFind::new(free.len());
    let mut anchored = vec![false; free.len()];
    for t in &mesh.triangles {
        for k in 0..3 {
            let (a, b) = (t[k], t[(k + 1) % 3]);
            match (slot[a] != usize::MAX, slot[b] != usize::MAX) {
                (true, true) => uf.union(slot[a], slot[b]),
                (true, false) => anchored[slot[a]] = true,
                (false, true) => anchored[slot[b]] = true,
                _ => {}
            }
        }
    }
    let mut comp_anchored = vec![false; free.len()];
    for (k, _) in anchored.iter().enumerate().filter(|(_, &a)| a) {
        comp_anchored[uf.find(k)] = true;
    }
    let mut sums: Vec<(f64, usize)> = vec![(0.0, 0); free.len()];
    for (k, &xk) in x.iter().enumerate() {
        let r = uf.find(k);
        sums[r].0 += xk;
        sums[r].1 += 1;
    }
    let mut unanchored = 0;
    for r in 0..free.len() {
        if sums[r].1 > 0 && uf.find(r) == r && !comp_anchored[r] {
            unanchored += 1;
        }
    }
    if !with_mass && unanchored > 0 {
        for (k, xk) in x.iter_mut().enumerate() {
            let r = uf.find(k);
            if !comp_anchored[r] {
                *xk -= sums[r].0 / sums[r].1 as f64;
            }
        }
    }

    for (k, &v) in free.iter().enumerate() {
        u[v] = x[k];
    }
    let energy = stiffness.quadratic_form(&u);
    let mass_term: f64 = mass.iter().zip(&u).map(|(m, v)| m * v * v).sum();
    Ok(Extension {
        values: u,
        energy,
        mass: mass_term,
        iterations: out.iterations,
        relative_residual: out.relative_residual,
        constrained: n - free.len(),
        free: free.len(),
        unanchored_components: unanchored,
    })
}

/// Prescribed value at each refined vertex, or `None` where it is free.
pub fn constraints(
    rs: &RefinedSurface,
    p: &Partition,
    f: &TraceData,
    rule: DirichletVertices,
) -> Result<Vec<Option<f64>>, TraceError> {
    if p.labels.len() != rs.base_face_count {
        return Err(TraceError::LabelCount {
            expected: rs.base_face_count,
            found: p.labels.len(),
        });
    }
    if let TraceData::FaceConstants(v) = f {
        if v.len() != rs.base_face_count {
            return Err(TraceError::DataLength {
                expected: rs.base_face_count,
                found: v.len(),
            });
        }
    }
    Ok(rs
        .vertex_faces
        .iter()
        .zip(&rs.mesh.vertices)
        .map(|(faces, x)| {
            let mut d = faces.iter().copied().filter(|&g| p.labels[g] == Label::D);
            let first = d.next()?;
            if rule == DirichletVertices::Interior && faces.iter().any(|&g| p.labels[g] == Label::N) {
                return None;
            }
            let v = f.value(x, first);
            d.all(|g| f.value(x, g) == v).then_some(v)
        })
        .collect())
}

/// Least PL surface Dirichlet energy among extensions of `f` from `D`.
pub fn minimal_extension_energy(rs: &RefinedSurface, p: &Partition, f: &TraceData) -> Result<Extension, TraceError> {
    minimal_extension_energy_with(rs, p, f, DirichletVertices::default())
}

/// [`minimal_extension_energy`] with an explicit vertex rule.
pub fn minimal_extension_energy_with(
    rs: &RefinedSurface,
    p: &Partition,
    f: &TraceData,
    rule: DirichletVertices,
) -> Result<Extension, TraceError> {
    minimize(&rs.mesh, &constraints(rs, p, f, rule)?, false)
}

/// Least `int f^2 + |grad_t f|^2` among extensions of `f` from `D`, with a
/// lumped mass term. The total is `energy + mass` of the result.
pub fn full_restriction_norm(rs: &RefinedSurface, p: &Partition, f: &TraceData) -> Result<Extension, TraceError> {
    minimize(&rs.mesh, &constraints(rs, p, f, DirichletVertices::default())?, true)
}

/// Refined mesh with the extension values appended to each vertex line.
pub fn extension_off(rs: &RefinedSurface, ext: &Extension) -> String {
    let s = rs.mesh.to_surface().expect("refined mesh is well formed");
    serialize_off_with_scalars(&s, &ext.values)
}

// ---------------------------------------------------------------------------
// Refinement studies

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "SCREAMING_SNAKE_CASE")]
pub enum Classification {
    Convergent,
    Divergent,
    Inconclusive,
}

impl Classification {
    pub fn as_str(self) -> &'static str {
        match self {
            Classification::Convergent => "CONVERGENT",
            Classification::Divergent => "DIVERGENT",
            Classification::Inconclusive => "INCONCLUSIVE",
        }
    }
}

/// Convergent when the last relative change is below
/// [`CONVERGENCE_THRESHOLD`]; divergent when energies strictly increase and
/// the last increment is at least half the median increment.
pub fn classify(energies: &[f64]) -> Classification {
    if energies.len() < 2 {
        return Classification::Inconclusive;
    }
    let (prev, last) = (energies[energies.len() - 2], energies[energies.len() - 1]);
    let change = if last == prev {
        0.0
    } else {
        (last - prev).abs() / last.abs().max(prev.abs())
    };
    if change < CONVERGENCE_THRESHOLD {
        return Classification::Convergent;
    }
    let mut inc: Vec<f64> = energies.windows(2).map(|w| w[1] - w[0]).collect();
    if inc.iter().any(|&d| d <= 0.0) {
        return Classification::Inconclusive;
    }
    let last_inc = *inc.last().unwrap();
    inc.sort_by(f64::total_cmp);
    let m = inc.len();
    let median = if m % 2 == 1 {
        inc[m / 2]
    } else {
        0.5 * (inc[m / 2 - 1] + inc[m / 2])
    };
    if last_inc >= 0.5 * median {
        Classification::Divergent
    } else {
        Classification::Inconclusive
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct LevelEnergy {
    pub level: usize,
    pub vertices: usize,
    pub free_vertices: usize,
    pub constrained_vertices: usize,
    pub energy: f64,
    pub iterations: usize,
    pub relative_residual: f64,
    pub unanchored_components: usize,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct EnergyReport {
    pub fan_rotation: usize,
    pub dirichlet_vertices: DirichletVertices,
    pub levels: Vec<LevelEnergy>,
    pub classification: Classification,
}

impl EnergyReport {
    pub fn energies(&self) -> Vec<f64> {
        self.levels.iter().map(|l| l.energy).collect()
    }

    /// CSV with columns `level,vertices,energy,classification`.
    pub fn to_csv(&self) -> String {
        let mut out = String::from("level,vertices,energy,classification\n");
        for l in &self.levels {
            writeln!(
                out,
                "{},{},{},{}",
                l.level,
                l.vertices,
                fmt_f64(l.energy),
                self.classification.as_str()
            )
            .unwrap();
        }
        out
    }
}

/// Minimal extension energies on the given refinement levels.
pub fn refinement_study(
    base: &PolyhedralSurface,
    p: &Partition,
    f: &TraceData,
    levels: &[usize],
    fan_rotation: usize,
) -> Result<EnergyReport, TraceError> {
    refinement_study_with(base, p, f, levels, fan_rotation, DirichletVertices::default())
}

/// [`refinement_study`] with an explicit vertex rule.
pub fn refinement_study_with(
    base: &PolyhedralSurface,
    p: &Partition,
    f: &TraceData,
    levels: &[usize],
    fan_rotation: usize,
    rule: DirichletVertices,
) -> Result<EnergyReport, TraceError> {
    let mut out = Vec::with_capacity(levels.len());
    for &level in levels {
        let rs = RefinedSurface::new(base, level, fan_rotation).map_err(|face| TraceError::InvalidFan { face })?;
        let ext = minimal_extension_energy_with(&rs, p, f, rule)?;
        out.push(LevelEnergy {
            level,
            vertices: rs.vertex_count(),
            free_vertices: ext.free,
            constrained_vertices: ext.constrained,
            energy: ext.energy,
            iterations: ext.iterations,
            relative_residual: ext.relative_residual,
            unanchored_components: ext.unanchored_components,
        });
    }
    let energies: Vec<f64> = out.iter().map(|l| l.energy).collect();
    Ok(EnergyReport {
        fan_rotation,
        dirichlet_vertices: rule,
        classification: classify(&energies),
        levels: out,
    })
}

/// A named study: base surface, labeling, data and default levels.
#[derive(Debug, Clone)]
pub struct StudyCase {
    pub name: &'static str,
    pub surface: PolyhedralSurface,
    pub partition: Partition,
    pub data: TraceData,
    pub levels: Vec<usize>,
}

pub const STUDY_CASES: [&str; 3] = ["pyramid-step", "cube-smooth", "cube-all-dirichlet"];

/// Built-in studies:
///
/// * `pyramid-step`: square pyramid, two opposite lateral faces Dirichlet
///   with values 1 and 0, levels 1 to 6.
/// * `cube-smooth`: cube, bottom face Dirichlet with data `x`, levels 0 to 4.
/// * `cube-all-dirichlet`: cube, every face Dirichlet with data `x`,
///   levels 0 to 3.
pub fn study_case(name: &str) -> Result<StudyCase, TraceError> {
    match name {
        "pyramid-step" => {
            let surface = fixtures::square_pyramid();
            let partition = Partition::with_neumann(Side::Interior, 5, &[1, 3, 4]);
            Ok(StudyCase {
                name: "pyramid-step",
                surface,
                partition,
                data: TraceData::FaceConstants(vec![1.0, 0.0, 0.0, 0.0, 0.0]),
                levels: (1..=6).collect(),
            })
        }
        "cube-smooth" => Ok(StudyCase {
            name: "cube-smooth",
            surface: fixtures::cube(),
            partition: Partition::with_neumann(Side::Interior, 6, &[1, 2, 3, 4, 5]),
            data: TraceData::coordinate(0),
            levels: (0..=4).collect(),
        }),
        "cube-all-dirichlet" => Ok(StudyCase {
            name: "cube-all-dirichlet",
            surface: fixtures::cube(),
            partition: Partition::all_dirichlet(Side::Interior, 6),
            data: TraceData::coordinate(0),
            levels: (0..=3).collect(),
        }),
        other => Err(TraceError::UnknownCase(other.to_string())),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn flat_patch(n: usize) -> (TriMesh, Vec<Option<f64>>, impl Fn(&Vec3) -> f64) {
        let g = TriMesh::square_grid(n);
        let lin = |p: &Vec3| 2.0 * p.x + 3.0 * p.y + 1.0;
        let boundary = g.boundary_vertices();
        let fixed = g
            .vertices
            .iter()
            .zip(&boundary)
            .map(|(p, &b)| b.then(|| lin(p)))
            .collect();
        (g, fixed, lin)
    }

    #[test]
    fn flat_patch_reproduces_linear_data() {
        let (g, fixed, lin) = flat_patch(16);
        let ext = minimize(&g, &fixed, false).unwrap();
        for (p, v) in g.vertices.iter().zip(&ext.values) {
            assert!((v - lin(p)).abs() < 1e-9);
        }
        // |grad|^2 * area = 4 + 9.
        assert!((ext.energy / 13.0 - 1.0).abs() < 1e-10);
        assert_eq!(ext.unanchored_components, 0);
    }

    #[test]
    fn energy_is_scale_free() {
        let (g, fixed, _) = flat_patch(8);
        let mut big = g.clone();
        big.vertices.iter_mut().for_each(|p| *p *= 7.5);
        let a = minimize(&g, &fixed, false).unwrap().energy;
        let b = minimize(&big, &fixed, false).unwrap().energy;
        assert!((a - b).abs() <= 1e-12 * a);
    }

    #[test]
    fn constants_extend_with_zero_energy() {
        let s = fixtures::square_pyramid();
        let rs = RefinedSurface::new(&s, 2, 0).unwrap();
        let p = Partition::with_neumann(Side::Interior, 5, &[4]);
        let ext = minimal_extension_energy(&rs, &p, &TraceData::Constant(2.5)).unwrap();
        assert!(ext.energy.abs() < 1e-10, "{}", ext.energy);
        for v in &ext.values {
            assert!((v - 2.5).abs() < 1e-9);
        }
    }

    #[test]
    fn interior_rule_frees_shared_d_n_vertices() {
        let cube = fixtures::cube();
        let p = Partition::with_neumann(Side::Interior, 6, &[1, 2, 3, 4, 5]);
        let rule = DirichletVertices::Interior;
        let rs0 = RefinedSurface::new(&cube, 0, 0).unwrap();
        let c0 = constraints(&rs0, &p, &TraceData::Constant(1.0), rule).unwrap();
        assert!(c0.iter().all(Option::is_none));
        let rs2 = RefinedSurface::new(&cube, 2, 0).unwrap();
        let c2 = constraints(&rs2, &p, &TraceData::Constant(1.0), rule).unwrap();
        // Interior points of a 4x4 subdivided square: 3x3.
        assert_eq!(c2.iter().filter(|c| c.is_some()).count(), 9);
    }

    #[test]
    fn closure_rule_constrains_whole_d_face() {
        let cube = fixtures::cube();
        let p = Partition::with_neumann(Side::Interior, 6, &[1, 2, 3, 4, 5]);
        let rs2 = RefinedSurface::new(&cube, 2, 0).unwrap();
        let c2 = constraints(&rs2, &p, &TraceData::Constant(1.0), DirichletVertices::Closure).unwrap();
        assert_eq!(c2.iter().filter(|c| c.is_some()).count(), 25);
    }

    #[test]
    fn closure_rule_frees_conflicting_vertices() {
        let pyr = fixtures::square_pyramid();
        let n = pyr.faces().len();
        let d: Vec<usize> = (0..n).collect();
        let p = Partition::with_neumann(Side::Interior, n, &[]);
        let vals: Vec<f64> = d.iter().map(|&i| i as f64).collect();
        let rs = RefinedSurface::new(&pyr, 0, 0).unwrap();
        let c = constraints(&rs, &p, &TraceData::FaceConstants(vals), DirichletVertices::Closure).unwrap();
        assert!(c.iter().all(Option::is_none));
    }

    #[test]
    fn no_anchor_means_mean_zero() {
        let cube = fixtures::cube();
        let rs = RefinedSurface::new(&cube, 0, 0).unwrap();
        let p = Partition::with_neumann(Side::Interior, 6, &[1, 2, 3, 4, 5]);
        let ext =
            minimal_extension_energy_with(&rs, &p, &TraceData::coordinate(0), DirichletVertices::Interior).unwrap();
        assert_eq!(ext.unanchored_components, 1);
        assert_eq!(ext.energy, 0.0);
    }

    #[test]
    fn enlarging_d_never_lowers_energy() {
        let cube = fixtures::cube();
        let rs = RefinedSurface::new(&cube, 2, 0).unwrap();
        let f = TraceData::Linear {
            gradient: Vec3::new(1.0, -2.0, 0.5),
            offset: 0.0,
        };
        let small = Partition::with_neumann(Side::Interior, 6, &[1, 2, 3, 4, 5]);
        let mid = Partition::with_neumann(Side::Interior, 6, &[1, 3, 4, 5]);
        let large = Partition::with_neumann(Side::Interior, 6, &[1, 4]);
        let e: Vec<f64> = [small, mid, large]
            .iter()
            .map(|p| minimal_extension_energy(&rs, p, &f).unwrap().energy)
            .collect();
        assert!(e[0] <= e[1] * (1.0 + 1e-12) && e[1] <= e[2] * (1.0 + 1e-12), "{e:?}");
    }

    #[test]
    fn full_norm_bounds() {
        let cube = fixtures::cube();
        let rs = RefinedSurface::new(&cube, 2, 0).unwrap();
        let p = Partition::with_neumann(Side::Interior, 6, &[1, 2, 3, 4, 5]);
        let zero = full_restriction_norm(&rs, &p, &TraceData::Constant(0.0)).unwrap();
        assert_eq!(zero.energy + zero.mass, 0.0);
        let one = full_restriction_norm(&rs, &p, &TraceData::Constant(1.0)).unwrap();
        let total = one.energy + one.mass;
        assert!(total > 0.0 && total <= cube.surface_area());
        assert!(total >= one.energy);
    }

    #[test]
    fn classifier() {
        assert_eq!(classify(&[1.0, 1.5, 1.504]), Classification::Convergent);
        assert_eq!(classify(&[1.0, 2.0, 3.0, 4.0]), Classification::Divergent);
        assert_eq!(classify(&[1.0, 2.0, 3.0, 3.1]), Classification::Inconclusive);
        assert_eq!(classify(&[3.0, 2.0, 1.0]), Classification::Inconclusive);
        assert_eq!(classify(&[0.0, 0.0]), Classification::Convergent);
        assert_eq!(classify(&[1.0]), Classification::Inconclusive);
    }

    #[test]
    fn fully_constrained_is_convergent() {
        let case = study_case("cube-all-dirichlet").unwrap();
        let r = refinement_study(&case.surface, &case.partition, &case.data, &case.levels, 0).unwrap();
        assert_eq!(r.classification, Classification::Convergent);
        for l in &r.levels {
            assert_eq!(l.free_vertices, 0);
        }
    }

    #[test]
    fn label_and_data_lengths_are_checked() {
        let cube = fixtures::cube();
        let rs = RefinedSurface::new(&cube, 0, 0).unwrap();
        let p = Partition::all_dirichlet(Side::Interior, 5);
        assert!(matches!(
            minimal_extension_energy(&rs, &p, &TraceData::Constant(0.0)),
            Err(TraceError::LabelCount { .. })
        ));
        let p = Partition::all_dirichlet(Side::Interior, 6);
        assert!(matches!(
            minimal_extension_energy(&rs, &p, &TraceData::FaceConstants(vec![0.0; 2])),
            Err(TraceError::DataLength { .. })
        ));
        assert!(study_case("sphere").is_err());
    }

    #[test]
    fn off_export_carries_values() {
        let case = study_case("cube-smooth").unwrap();
        let rs = RefinedSurface::new(&case.surface, 1, 0).unwrap();
        let ext = minimal_extension_energy(&rs, &case.partition, &case.data).unwrap();
        let text = extension_off(&rs, &ext);
        let back = crate::mesh::parse_off_with_scalars(&text).unwrap();
        assert_eq!(back.vertex_scalars.unwrap(), ext.values);
    }
}
