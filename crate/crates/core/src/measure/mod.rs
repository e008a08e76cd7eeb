//! Discretized measure spaces: grids with cell weights, densities, subsets,
//! cumulative-mass coordinates and 1-D pushforward densities.

mod cumulative;
mod density;
mod grid;
mod pushforward;
mod sum;

pub use cumulative::{compare_centers, cumulative_order, CellOrdering, CumulativeTable};
pub use density::{integrate, DensityDocument, DensityField, MeasurableSubset, SubsetDocument};
pub(crate) use grid::ensure_grid_id;
pub use grid::{
    ensure_same_grid, Cell, GridDocument, GridId, SampleGrid, DEFAULT_RESOLUTION,
    TOTAL_MEASURE_RTOL,
};
pub use pushforward::{check_monotone, pushforward_density, Derivative, MonotoneMap, Monotonicity};
pub use sum::compensated_sum;
