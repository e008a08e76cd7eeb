//! Born-rule probabilities as branch counts.
//!
//! A state on a discretized configuration space is cut into `2^n` pieces of
//! equal probability mass. Counting the pieces that lie inside a macrostate
//! and dividing by `2^n` converges to the Born probability of that
//! macrostate as `n` grows.
//!
//! - [`measure`]: sample grids, densities, measurable subsets, cumulative
//!   mass tables, and pushforwards under monotone maps.
//! - [`state`]: kets, macrostate partitions, Born probabilities, polar form
//!   and gauge absorption.
//! - [`refinement`]: the equal-mass partition sequence, branch vectors,
//!   consistency sets, and convergence reports.
//! - [`scenarios`]: ready-made states (finite uniform case, Stern-Gerlach,
//!   random) and naive counting for contrast.
//! - [`wavefunctional`]: field configuration spaces and density/phase maps.

pub mod error;
pub mod measure;
pub mod refinement;
pub mod scenarios;
pub mod state;
pub mod wavefunctional;

#[cfg(test)]
mod oracle;

pub use error::{Error, Result};
pub use measure::{integrate, DensityField, GridId, MeasurableSubset, SampleGrid};
pub use refinement::{
    build_refinement, consistency_index, convergence_study, counting_probability,
    ConvergenceReport, RefinementOrdering, RefinementSequence,
};
pub use state::{
    born_probability, gauge_absorb, inner_product, GaugeRecord, Ket, MacrostatePartition,
};
