//! Concrete states and partitions: the finite equal-amplitude case, a
//! kinematic Stern-Gerlach endpoint, naive branch counting for contrast,
//! and seeded random states.

mod config;
mod finite;
mod naive;
mod states;
mod stern_gerlach;

pub use config::{GridSpec, ScenarioFile};
pub use finite::{finite_uniform_case, finite_uniform_state, FiniteCaseConfig, LabelProbabilities};
pub use naive::naive_branch_count;
pub use states::{gaussian_ket, random_ket, random_spin_amplitudes};
pub use stern_gerlach::{
    spin_sheet_grid, stern_gerlach_state, SternGerlachConfig, DOWN_LABEL, MIN_SEPARATION_SIGMAS,
    NORMALIZATION_TOLERANCE, UP_LABEL,
};
