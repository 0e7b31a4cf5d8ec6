//! Dirichlet/Neumann face labelings and their admissibility.
//!
//! A labeling is admissible for a side (interior or exterior domain) when at
//! least one face is Dirichlet and every edge separating a Dirichlet face
//! from a Neumann face has a dihedral angle, measured on that side, strictly
//! below pi. Edges whose angle reaches pi therefore force their two faces to
//! carry the same label. Merging faces across all such edges gives the
//! [`QuotientGraph`]; admissible labelings are exactly the labelings that
//! are constant on each class and not all Neumann.

use std::f64::consts::PI;

use rand::seq::index::sample;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::fixtures::{self, Corner, Notch};
use crate::geometry::{dihedral_angles, DihedralAngle, GeometryError};
use crate::mesh::{validate_surface, PolyhedralSurface, UnionFind};
use crate::par;

/// Angles within this many radians of pi count as reaching pi.
pub const ANGLE_TOLERANCE: f64 = 1e-9;

/// Full enumeration is refused above this many classes.
pub const MAX_ENUMERATION_CLASSES: usize = 30;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum Label {
    D,
    N,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Side {
    Interior,
    Exterior,
}

impl Side {
    /// The dihedral angle of `a` measured in this side's domain.
    pub fn angle(self, a: &DihedralAngle) -> f64 {
        match self {
            Side::Interior => a.interior_angle,
            Side::Exterior => a.exterior_angle,
        }
    }
}

impl std::str::FromStr for Side {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "interior" => Ok(Side::Interior),
            "exterior" => Ok(Side::Exterior),
            other => Err(format!("unknown side {other:?}, expected interior or exterior")),
        }
    }
}

/// Whether an edge with this (side-relevant) angle forbids a label change.
pub fn blocks_change(angle: f64) -> bool {
    angle >= PI - ANGLE_TOLERANCE
}

/// One label per face, in face order, plus the side the angles refer to.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Partition {
    pub side: Side,
    pub labels: Vec<Label>,
}

impl Partition {
    /// The trivial labeling: every face Dirichlet, `N` empty.
    pub fn all_dirichlet(side: Side, faces: usize) -> Self {
        Self {
            side,
            labels: vec![Label::D; faces],
        }
    }

    pub fn with_neumann(side: Side, faces: usize, neumann: &[usize]) -> Self {
        let mut p = Self::all_dirichlet(side, faces);
        for &f in neumann {
            p.labels[f] = Label::N;
        }
        p
    }

    pub fn neumann_faces(&self) -> Vec<usize> {
        self.faces_with(Label::N)
    }

    pub fn dirichlet_faces(&self) -> Vec<usize> {
        self.faces_with(Label::D)
    }

    fn faces_with(&self, label: Label) -> Vec<usize> {
        self.labels
            .iter()
            .enumerate()
            .filter(|&(_, &l)| l == label)
            .map(|(f, _)| f)
            .collect()
    }

    pub fn is_trivial(&self) -> bool {
        self.labels.iter().all(|&l| l == Label::D)
    }

    pub fn from_json(text: &str) -> serde_json::Result<Self> {
        serde_json::from_str(text)
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string(self).expect("partition serializes")
    }
}

#[derive(Debug, Clone, PartialEq, Error)]
pub enum PartitionError {
    #[error("partition has {found} labels but the surface has {expected} faces")]
    LabelCount { expected: usize, found: usize },
    #[error(transparent)]
    Geometry(#[from] GeometryError),
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct ViolatingEdge {
    pub edge: usize,
    pub vertices: [usize; 2],
    pub faces: [usize; 2],
    /// Dihedral angle on the partition's side.
    pub angle: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct AdmissibilityReport {
    pub admissible: bool,
    pub side: Side,
    /// At least one Dirichlet face.
    pub dirichlet_nonempty: bool,
    pub violating_edges: Vec<ViolatingEdge>,
}

/// Admissibility checks against precomputed dihedral angles.
#[derive(Debug, Clone)]
pub struct PartitionChecker {
    face_count: usize,
    angles: Vec<DihedralAngle>,
}

impl PartitionChecker {
    pub fn new(s: &PolyhedralSurface) -> Result<Self, PartitionError> {
        Ok(Self {
            face_count: s.face_count(),
            angles: dihedral_angles(s)?,
        })
    }

    pub fn from_angles(face_count: usize, angles: Vec<DihedralAngle>) -> Self {
        Self { face_count, angles }
    }

    pub fn angles(&self) -> &[DihedralAngle] {
        &self.angles
    }

    pub fn check(&self, p: &Partition) -> Result<AdmissibilityReport, PartitionError> {
        if p.labels.len() != self.face_count {
            return Err(PartitionError::LabelCount {
                expected: self.face_count,
                found: p.labels.len(),
            });
        }
        let dirichlet_nonempty = p.labels.contains(&Label::D);
        let violating_edges: Vec<ViolatingEdge> = self
            .angles
            .iter()
            .filter(|a| p.labels[a.faces[0]] != p.labels[a.faces[1]])
            .filter(|a| blocks_change(p.side.angle(a)))
            .map(|a| ViolatingEdge {
                edge: a.edge,
                vertices: a.vertices,
                faces: a.faces,
                angle: p.side.angle(a),
            })
            .collect();
        Ok(AdmissibilityReport {
            admissible: dirichlet_nonempty && violating_edges.is_empty(),
            side: p.side,
            dirichlet_nonempty,
            violating_edges,
        })
    }
}

/// Checks a labeling against the admissibility conditions and lists every
/// offending edge.
pub fn validate_partition(s: &PolyhedralSurface, p: &Partition) -> Result<AdmissibilityReport, PartitionError> {
    PartitionChecker::new(s)?.check(p)
}

/// Faces merged across every edge that forbids a label change on `side`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct QuotientGraph {
    pub side: Side,
    /// Face groups, each sorted, ordered by least face index.
    pub classes: Vec<Vec<usize>>,
    /// Class of each face.
    pub face_class: Vec<usize>,
    /// Pairs of distinct classes joined by an edge that allows a change.
    pub class_adjacency: Vec<[usize; 2]>,
}

impl QuotientGraph {
    pub fn new(s: &PolyhedralSurface, side: Side) -> Result<Self, PartitionError> {
        Ok(Self::from_angles(s.face_count(), &dihedral_angles(s)?, side))
    }

    pub fn from_angles(face_count: usize, angles: &[DihedralAngle], side: Side) -> Self {
        let mut uf = UnionFind::new(face_count);
        for a in angles {
            if blocks_change(side.angle(a)) {
                uf.union(a.faces[0], a.faces[1]);
            }
        }
        // Roots are least members, so scanning faces in order yields classes
        // sorted by least face index.
        let mut class_of_root = vec![usize::MAX; face_count];
        let mut classes: Vec<Vec<usize>> = Vec::new();
        let mut face_class = vec![0; face_count];
        for (f, class) in face_class.iter_mut().enumerate() {
            let r = uf.find(f);
            if class_of_root[r] == usize::MAX {
                class_of_root[r] = classes.len();
                classes.push(Vec::new());
            }
            *class = class_of_root[r];
            classes[class_of_root[r]].push(f);
        }
        let mut class_adjacency: Vec<[usize; 2]> = angles
            .iter()
            .filter(|a| !blocks_change(side.angle(a)))
            .map(|a| (face_class[a.faces[0]], face_class[a.faces[1]]))
            .filter(|(x, y)| x != y)
            .map(|(x, y)| [x.min(y), x.max(y)])
            .collect();
        class_adjacency.sort_unstable();
        class_adjacency.dedup();
        Self {
            side,
            classes,
            face_class,
            class_adjacency,
        }
    }

    pub fn class_count(&self) -> usize {
        self.classes.len()
    }

    /// Number of admissible labelings, `2^k - 1`.
    pub fn admissible_count(&self) -> u128 {
        let k = self.classes.len() as u32;
        if k >= 128 {
            u128::MAX
        } else {
            (1u128 << k) - 1
        }
    }

    /// Labeling with class `i` Neumann exactly when bit `i` of `mask` is set.
    pub fn labeling(&self, mask: u64) -> Partition {
        Partition {
            side: self.side,
            labels: self
                .face_class
                .iter()
                .map(|&c| if (mask >> c) & 1 == 1 { Label::N } else { Label::D })
                .collect(),
        }
    }
}

/// All admissible labelings of a surface for one side.
#[derive(Debug, Clone, Serialize)]
pub struct Enumeration {
    pub side: Side,
    pub class_count: usize,
    /// `2^k - 1` for `k` classes.
    pub count: u128,
    /// False when `k` exceeds [`MAX_ENUMERATION_CLASSES`]; only the count is
    /// available then.
    pub enumerable: bool,
    pub quotient: QuotientGraph,
}

impl Enumeration {
    /// Labelings in binary counting order over the classes: mask 0 (all
    /// Dirichlet) first, the all-Neumann mask excluded. `None` when the
    /// class count is too large.
    pub fn partitions(&self) -> Option<PartitionIter<'_>> {
        self.enumerable.then(|| PartitionIter {
            quotient: &self.quotient,
            next: 0,
            end: (1u64 << self.class_count) - 1,
        })
    }
}

pub struct PartitionIter<'a> {
    quotient: &'a QuotientGraph,
    next: u64,
    end: u64,
}

impl Iterator for PartitionIter<'_> {
    type Item = Partition;

    fn next(&mut self) -> Option<Partition> {
        (self.next < self.end).then(|| {
            let p = self.quotient.labeling(self.next);
            self.next += 1;
            p
        })
    }

    fn size_hint(&self) -> (usize, Option<usize>) {
        let left = (self.end - self.next) as usize;
        (left, Some(left))
    }
}

impl ExactSizeIterator for PartitionIter<'_> {}

pub fn enumerate_admissible(s: &PolyhedralSurface, side: Side) -> Result<Enumeration, PartitionError> {
    Ok(enumeration_from(QuotientGraph::new(s, side)?))
}

fn enumeration_from(quotient: QuotientGraph) -> Enumeration {
    let k = quotient.class_count();
    Enumeration {
        side: quotient.side,
        class_count: k,
        count: quotient.admissible_count(),
        enumerable: k <= MAX_ENUMERATION_CLASSES,
        quotient,
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct MonochromaticReport {
    pub side: Side,
    pub monochromatic: bool,
    pub class_count: usize,
    /// A nontrivial admissible labeling when not monochromatic.
    pub witness: Option<Partition>,
}

/// Monochromatic means the only admissible labeling is the all-Dirichlet
/// one, i.e. the quotient graph is a single class.
pub fn is_monochromatic(s: &PolyhedralSurface, side: Side) -> Result<MonochromaticReport, PartitionError> {
    Ok(monochromatic_from(&QuotientGraph::new(s, side)?))
}

fn monochromatic_from(q: &QuotientGraph) -> MonochromaticReport {
    let mono = q.class_count() == 1;
    MonochromaticReport {
        side: q.side,
        monochromatic: mono,
        class_count: q.class_count(),
        witness: (!mono).then(|| q.labeling(1)),
    }
}

// ---------------------------------------------------------------------------
// Search

/// Built-in mesh families for the monochromatic search.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case", tag = "family")]
pub enum Family {
    /// Hulls of `min_points..=max_points` random points on the unit sphere.
    ConvexHull { min_points: usize, max_points: usize },
    /// Subdivided octahedra with random vertex radii.
    StarShaped { levels: usize, r_min: f64, r_max: f64 },
    /// Boxes with `min_notches..=max_notches` (at most 3) corner notches.
    NotchedBox { min_notches: usize, max_notches: usize },
}

impl Family {
    pub fn name(&self) -> &'static str {
        match self {
            Family::ConvexHull { .. } => "hull",
            Family::StarShaped { .. } => "star",
            Family::NotchedBox { .. } => "notched",
        }
    }

    /// Mesh number `index` of the family, drawn from `seed + index`.
    pub fn generate(&self, seed: u64, index: usize) -> PolyhedralSurface {
        let mesh_seed = seed.wrapping_add(index as u64);
        let mut rng = ChaCha8Rng::seed_from_u64(mesh_seed);
        match *self {
            Family::ConvexHull { min_points, max_points } => {
                let n = rng.random_range(min_points.max(4)..=max_points.max(min_points.max(4)));
                fixtures::random_hull(n, rng.random())
            }
            Family::StarShaped { levels, r_min, r_max } => fixtures::star_sphere(levels, r_min, r_max, rng.random()),
            Family::NotchedBox {
                min_notches,
                max_notches,
            } => {
                let hi = max_notches.min(3);
                let k = rng.random_range(min_notches.min(hi)..=hi);
                let w: f64 = rng.random_range(1.5..3.0);
                let h: f64 = rng.random_range(1.5..3.0);
                let height: f64 = rng.random_range(0.5..2.0);
                let corners = [Corner::BottomRight, Corner::TopRight, Corner::TopLeft];
                let mut picked: Vec<usize> = sample(&mut rng, 3, k).into_vec();
                picked.sort_unstable();
                let notches: Vec<Notch> = picked
                    .into_iter()
                    .map(|c| {
                        Notch::new(
                            corners[c],
                            w * rng.random_range(0.1..0.45),
                            h * rng.random_range(0.1..0.45),
                        )
                    })
                    .collect();
                fixtures::notched_box(w, h, height, &notches)
            }
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GeneratorSpec {
    #[serde(flatten)]
    pub family: Family,
    pub seed: u64,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct MeshFlags {
    pub index: usize,
    pub id: String,
    pub faces: usize,
    pub interior_classes: usize,
    pub exterior_classes: usize,
    pub interior_monochromatic: bool,
    pub exterior_monochromatic: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SearchReport {
    pub meshes_examined: usize,
    pub skipped_invalid: usize,
    pub both_monochromatic_found: Vec<String>,
    pub meshes: Vec<MeshFlags>,
}

/// Generates up to `budget` meshes from the family and records, for each
/// valid one, whether the interior and exterior problems are monochromatic.
/// Exploratory only: an empty result says nothing about existence.
pub fn search_both_monochromatic(spec: &GeneratorSpec, budget: usize) -> SearchReport {
    let outcomes = par::map_range(budget, |i| {
        let s = spec.family.generate(spec.seed, i);
        if !validate_surface(&s).is_valid() {
            return None;
        }
        let angles = dihedral_angles(&s).ok()?;
        let inner = QuotientGraph::from_angles(s.face_count(), &angles, Side::Interior);
        let outer = QuotientGraph::from_angles(s.face_count(), &angles, Side::Exterior);
        Some(MeshFlags {
            index: i,
            id: format!("{}-{}", spec.family.name(), i),
            faces: s.face_count(),
            interior_classes: inner.class_count(),
            exterior_classes: outer.class_count(),
            interior_monochromatic: inner.class_count() == 1,
            exterior_monochromatic: outer.class_count() == 1,
        })
    });
    let mut report = SearchReport {
        meshes_examined: budget,
        skipped_invalid: 0,
        both_monochromatic_found: Vec::new(),
        meshes: Vec::new(),
    };
    for o in outcomes {
        match o {
            Some(m) => {
                if m.interior_monochromatic && m.exterior_monochromatic {
                    report.both_monochromatic_found.push(m.id.clone());
                }
                report.meshes.push(m);
            }
            None => report.skipped_invalid += 1,
        }
    }
    report
}
