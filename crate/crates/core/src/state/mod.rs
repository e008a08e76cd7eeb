//! Wavefunctions on a grid, macrostate projectors and Born probabilities,
//! polar form and gauge absorption, and the uniformized-measure identity.

mod born;
mod ket;
mod partition;
mod polar;
mod uniformized;

pub use born::{
    born_probabilities, born_probability, most_probable_label, project, with_global_phase,
};
pub use ket::{inner_product, Ket, KetDocument, UNIT_TOLERANCE};
pub use partition::{MacrostatePartition, PartitionDocument};
pub use polar::{gauge_absorb, polar_decompose, GaugeRecord, PolarForm};
pub use uniformized::{
    three_densities, uniformized_against_born, uniformized_identity_check, ThreeDensities,
    UniformizedIdentity,
};
