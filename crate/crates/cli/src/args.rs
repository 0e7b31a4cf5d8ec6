use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Serialize;

#[derive(Parser, Debug)]
#[command(
    name = "polymix",
    version,
    about = "Mixed Dirichlet/Neumann problems on polyhedra: partitions, Rellich checks, sector blow-up and extension energies",
    after_help = "Meshes are OFF files or built-in fixtures written as fixture:NAME (see `polymix fixtures`).\n\
                  Exit codes: 0 success, 1 validation failure under --strict, 2 input error."
)]
pub struct Cli {
    #[command(flatten)]
    pub global: GlobalArgs,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Args, Debug, Clone, Serialize)]
pub struct GlobalArgs {
    /// Root seed for every random stream
    #[arg(long, global = true, default_value_t = 0)]
    pub seed: u64,
    /// Sample count for Monte Carlo commands (rellich: per region, sector-blowup: cone points)
    #[arg(long, global = true)]
    pub samples: Option<usize>,
    /// Report format
    #[arg(long, global = true, value_enum, default_value_t = Format::Json)]
    pub format: Format,
    /// Write the report here instead of standard output
    #[arg(long, global = true)]
    #[serde(skip)]
    pub output: Option<PathBuf>,
    /// Cap on worker threads (results do not depend on it)
    #[arg(long, global = true)]
    #[serde(skip)]
    pub threads: Option<usize>,
    /// Exit with status 1 when a validation check fails
    #[arg(long, global = true)]
    pub strict: bool,
    /// Domain whose dihedral angles apply: interior or exterior
    #[arg(long, global = true, value_enum)]
    pub side: Option<SideArg>,
}

#[derive(ValueEnum, Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Format {
    Json,
    Csv,
}

#[derive(ValueEnum, Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum SideArg {
    Interior,
    Exterior,
}

impl From<SideArg> for polymix::Side {
    fn from(s: SideArg) -> Self {
        match s {
            SideArg::Interior => polymix::Side::Interior,
            SideArg::Exterior => polymix::Side::Exterior,
        }
    }
}

#[derive(ValueEnum, Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum FamilyArg {
    Hull,
    Star,
    Notched,
}

#[derive(ValueEnum, Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum EstimatorArg {
    Rqmc,
    Mc,
}

impl From<EstimatorArg> for polymix::rellich::Estimator {
    fn from(e: EstimatorArg) -> Self {
        match e {
            EstimatorArg::Rqmc => polymix::rellich::Estimator::Rqmc,
            EstimatorArg::Mc => polymix::rellich::Estimator::MonteCarlo,
        }
    }
}

#[derive(ValueEnum, Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum VertexRuleArg {
    Closure,
    Interior,
}

impl From<VertexRuleArg> for polymix::trace_energy::DirichletVertices {
    fn from(r: VertexRuleArg) -> Self {
        match r {
            VertexRuleArg::Closure => polymix::trace_energy::DirichletVertices::Closure,
            VertexRuleArg::Interior => polymix::trace_energy::DirichletVertices::Interior,
        }
    }
}

#[derive(Subcommand, Debug, Clone, Serialize)]
#[serde(tag = "command", rename_all = "kebab-case")]
pub enum Command {
    /// Check that a mesh is a closed, connected, oriented manifold with planar faces
    Validate {
        /// OFF file or fixture:NAME
        mesh: String,
    },
    /// Interior and exterior dihedral angle of every edge
    Angles {
        /// OFF file or fixture:NAME
        mesh: String,
    },
    /// Check a D/N face labeling for admissibility
    CheckPartition {
        /// OFF file or fixture:NAME
        mesh: String,
        /// JSON file {"side": "interior", "labels": ["D", "N", ...]}; --side overrides its side
        partition: PathBuf,
    },
    /// Count and list every admissible labeling
    Enumerate {
        /// OFF file or fixture:NAME
        mesh: String,
        /// Most labelings to list in the report
        #[arg(long, default_value_t = 4096)]
        limit: usize,
    },
    /// Whether the trivial labeling is the only admissible one
    Monochromatic {
        /// OFF file or fixture:NAME
        mesh: String,
    },
    /// Look for meshes monochromatic on both sides among generated families
    Search {
        /// Mesh family to draw from
        #[arg(long, value_enum, default_value_t = FamilyArg::Hull)]
        family: FamilyArg,
        /// Number of meshes to generate
        #[arg(long, default_value_t = 100)]
        budget: usize,
        /// Fewest hull points
        #[arg(long, default_value_t = 5)]
        min_points: usize,
        /// Most hull points
        #[arg(long, default_value_t = 12)]
        max_points: usize,
        /// Octahedron subdivision levels for star-shaped meshes
        #[arg(long, default_value_t = 1)]
        levels: usize,
        /// Smallest vertex radius for star-shaped meshes
        #[arg(long, default_value_t = 0.5)]
        r_min: f64,
        /// Largest vertex radius for star-shaped meshes
        #[arg(long, default_value_t = 1.5)]
        r_max: f64,
        /// Fewest notches for notched boxes
        #[arg(long, default_value_t = 1)]
        min_notches: usize,
        /// Most notches for notched boxes (at most 3)
        #[arg(long, default_value_t = 3)]
        max_notches: usize,
    },
    /// Monte Carlo check of the Rellich identity and estimate on a vertex arch
    Rellich {
        /// OFF file or fixture:NAME
        mesh: String,
        /// Arch vertex
        #[arg(long, default_value_t = 0)]
        vertex: usize,
        /// Inner radius r
        #[arg(long, default_value_t = 0.25)]
        inner: f64,
        /// Outer radius R
        #[arg(long, default_value_t = 0.5)]
        outer: f64,
        /// Comma-separated test functions, or deg1, deg2, deg3 for the catalog up to that degree
        #[arg(long, default_value = "deg2")]
        functions: String,
        /// Quadrature: randomized quasi-Monte Carlo or plain rejection Monte Carlo
        #[arg(long, value_enum, default_value_t = EstimatorArg::Rqmc)]
        estimator: EstimatorArg,
    },
    /// Truncated gradient energy of the sector solution and its blow-up rate
    SectorBlowup {
        /// Sector aperture in [pi, 2pi), e.g. 1.5pi or 3pi/2
        #[arg(long)]
        alpha: String,
        /// Comma-separated truncation radii in (0, 1] (default 1, 1e-1, ..., 1e-6)
        #[arg(long, value_delimiter = ',')]
        eps: Vec<f64>,
        /// Also estimate the nontangential maximal gradient at this distance from the crease
        #[arg(long)]
        crease_distance: Option<f64>,
        /// Approach cone aperture a
        #[arg(long, default_value_t = 1.0)]
        cone_aperture: f64,
        /// Approach cone truncation radius (default: the crease distance)
        #[arg(long)]
        truncation: Option<f64>,
    },
    /// Minimal extension energy of Dirichlet data under refinement
    TraceEnergy {
        /// OFF file or fixture:NAME (omit with --case)
        mesh: Option<String>,
        /// Built-in study: pyramid-step, cube-smooth or cube-all-dirichlet
        #[arg(long)]
        case: Option<String>,
        /// Partition JSON file (required with a mesh)
        #[arg(long)]
        partition: Option<PathBuf>,
        /// Data on D: x, y, z, const:C, faces:V0,V1,... or linear:GX,GY,GZ,C
        #[arg(long)]
        data: Option<String>,
        /// Refinement levels: A..B (inclusive) or a comma list
        #[arg(long)]
        levels: Option<String>,
        /// Fan root rotation used to triangulate polygonal faces
        #[arg(long, default_value_t = 0)]
        fan_rotation: usize,
        /// Vertices that carry data: every vertex of a D face where the data
        /// agree, or only vertices with no N face
        #[arg(long, value_enum, default_value_t = VertexRuleArg::Closure)]
        dirichlet_vertices: VertexRuleArg,
        /// Write the finest extension as OFF with a value per vertex
        #[arg(long)]
        #[serde(skip)]
        export_off: Option<PathBuf>,
    },
    /// Write the built-in meshes as OFF files
    Fixtures {
        /// Target directory (created if missing)
        dir: PathBuf,
    },
}

impl Command {
    pub fn name(&self) -> &'static str {
        match self {
            Command::Validate { .. } => "validate",
            Command::Angles { .. } => "angles",
            Command::CheckPartition { .. } => "check-partition",
            Command::Enumerate { .. } => "enumerate",
            Command::Monochromatic { .. } => "monochromatic",
            Command::Search { .. } => "search",
            Command::Rellich { .. } => "rellich",
            Command::SectorBlowup { .. } => "sector-blowup",
            Command::TraceEnergy { .. } => "trace-energy",
            Command::Fixtures { .. } => "fixtures",
        }
    }
}
