//! Equal-mass dyadic refinements of a state's support, branch vectors,
//! consistency sets and convergence of branch counting to Born probabilities.

mod consistency;
mod report;
mod sequence;
mod support;

pub use consistency::{consistency_index, counting_probability, ConsistencyIndex, DEFAULT_TAU};
pub use report::{convergence_study, label_blocks, ConvergenceReport, ConvergenceRow};
pub use sequence::{
    build_refinement, max_safe_depth, max_safe_depth_for, BranchVector, MemberBoundary,
    RefinementOrdering, RefinementSequence,
};
pub use support::{default_support_threshold, mu_prime, support, SUPPORT_RELATIVE_THRESHOLD};
