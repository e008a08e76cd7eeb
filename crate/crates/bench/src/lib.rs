//! Shared fixtures for the criterion benches.

use std::sync::Arc;

use borncount_core::scenarios::{gaussian_ket, random_ket};
use borncount_core::{Ket, MacrostatePartition, SampleGrid};

/// Unit Gaussian on `[-8, 8]` with `cells` cells, split at `x = 1`.
pub fn gaussian_halfline(cells: usize) -> (Ket, MacrostatePartition) {
    let grid = Arc::new(SampleGrid::uniform(-8.0, 8.0, cells).expect("valid grid"));
    let psi = gaussian_ket(&grid, 0.0, 1.0).expect("1-D grid");
    let partition =
        MacrostatePartition::from_fn(grid, &["le1", "gt1"], |x| usize::from(x[0] > 1.0))
            .expect("two labels");
    (psi, partition)
}

/// Smoothed random state on `[-1, 1]` split into thirds.
pub fn random_thirds(seed: u64, cells: usize) -> (Ket, MacrostatePartition) {
    let grid = Arc::new(SampleGrid::uniform(-1.0, 1.0, cells).expect("valid grid"));
    let psi = random_ket(seed, &grid, 16);
    let partition = MacrostatePartition::from_fn(grid, &["r0", "r1", "r2"], |x| {
        (((x[0] + 1.0) * 1.5) as usize).min(2)
    })
    .expect("three labels");
    (psi, partition)
}
