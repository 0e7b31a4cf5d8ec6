//! Computable hypotheses for the mixed Dirichlet/Neumann problem on polyhedra.
//!
//! The crate is organised around a closed, oriented polyhedral surface
//! ([`mesh::PolyhedralSurface`]) and the questions one can ask about it:
//!
//! * [`geometry`]: dihedral angles, separation radii, point containment and
//!   Monte Carlo samplers for vertex cones, bases and arches.
//! * [`partition`]: D/N face labelings, admissibility, exhaustive enumeration
//!   via the quotient graph, monochromaticity and an exploratory search.
//! * [`sector`]: the explicit nonconvex-sector solutions, their harmonicity,
//!   boundary behaviour and the blow-up of their gradient energy.
//! * [`rellich`]: Monte Carlo verification of the radial Rellich identity and
//!   the derived estimate on arches, using harmonic polynomial test functions.
//! * [`trace_energy`]: the discrete extension seminorm computed by minimising
//!   piecewise-linear surface Dirichlet energy, plus refinement studies.
//!
//! Data-parallel inner loops (sampling shards, per-triangle assembly, mesh
//! search) run on rayon when the `parallel` feature is enabled and fall back
//! to plain iterators otherwise. Shard boundaries and reduction order are
//! fixed, so both builds produce bit-identical numbers.

pub mod fixtures;
pub mod geometry;
pub mod hull;
pub mod mesh;
pub mod par;
pub mod partition;
pub mod qmc;
pub mod rellich;
pub mod report;
pub mod sector;
pub mod trace_energy;

/// Double precision 3-vector used for points and directions throughout.
pub type Vec3 = nalgebra::Vector3<f64>;

pub use geometry::{
    contains_point, dihedral_angles, separation_radius, ArchRegion, ConeRegion, Containment, DihedralAngle, Estimate,
    SampleBatch,
};
pub use mesh::{parse_off, serialize_off, validate_surface, MeshDiagnostics, PolyhedralSurface};
pub use partition::{Label, Partition, Side};
