//! Dihedral angles, vertex cones and arches, point containment and Monte
//! Carlo samplers over those regions.

mod angles;
mod containment;
mod quadrature;
mod regions;
mod sampling;

pub use angles::{angle_table_csv, dihedral_angles, DihedralAngle, GeometryError, PROBE_OFFSET};
pub use containment::{contains_point, point_polygon_distance, Containment, Solid, BOUNDARY_TOLERANCE};
pub use quadrature::REPLICATES;
pub(crate) use quadrature::{qmc_arch, qmc_base, qmc_lateral};
pub use regions::{point_segment_distance, separation_radius, ArchRegion, ConeRegion, RegionError, RADIUS_FRACTION};
pub use sampling::{
    sample_arch, sample_base, sample_lateral, shard_rng, Estimate, Moments, RegionTag, SampleBatch, SamplingError,
    StreamTotals, MIN_ACCEPTANCE, SHARD_SIZE,
};
pub(crate) use sampling::{stream_arch, stream_base, stream_lateral, Proposal};
