use thiserror::Error;

/// Errors raised by grid, state, and refinement operations.
#[derive(Debug, Error)]
pub enum Error {
    #[error("objects refer to different grids ({left} vs {right})")]
    GridMismatch { left: String, right: String },

    #[error("invalid grid: {0}")]
    InvalidGrid(String),

    #[error("invalid density: {0}")]
    InvalidDensity(String),

    #[error("non-finite value encountered: {0}")]
    NonFinite(String),

    #[error("total mass is zero")]
    ZeroMass,

    #[error("cell index {index} out of range for a grid of {cells} cells")]
    CellOutOfRange { index: usize, cells: usize },

    #[error("invalid cell ordering: {0}")]
    InvalidOrdering(String),

    #[error("operation requires a 1-D grid, got dimension {0}")]
    NotOneDimensional(usize),

    #[error("map is not strictly monotone near x = {at}")]
    NotMonotone { at: f64 },

    #[error("unknown map `{0}` (expected identity, scale:<a>, cubic, exp)")]
    UnknownMap(String),

    #[error("unknown macrostate label `{0}`")]
    UnknownLabel(String),

    #[error("invalid partition: {0}")]
    InvalidPartition(String),

    #[error("state is not unit: <psi|psi> = {norm_sqr}")]
    NonUnit { norm_sqr: f64 },

    #[error("state has empty support")]
    EmptySupport,

    #[error(
        "grid too coarse for depth {requested}: 2^n * eps_grid must stay <= 0.5 \
         (eps_grid = {eps_grid:.3e}); maximum safe depth is {max_safe}"
    )]
    DepthGuard {
        requested: u32,
        max_safe: u32,
        eps_grid: f64,
    },

    #[error("level {level} out of range 0..={n_max}")]
    LevelOutOfRange { level: u32, n_max: u32 },

    #[error("member index {index} out of range for level {level} (2^{level} members)")]
    MemberOutOfRange { level: u32, index: usize },

    #[error("invalid scenario: {0}")]
    InvalidScenario(String),

    #[error("configuration space with {sites} sites and {levels} levels exceeds 2^24 cells")]
    ConfigSpaceTooLarge { sites: u32, levels: u32 },

    #[error("json: {0}")]
    Json(#[from] serde_json::Error),

    #[error("csv: {0}")]
    Csv(#[from] csv::Error),

    #[error("io: {0}")]
    Io(#[from] std::io::Error),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
