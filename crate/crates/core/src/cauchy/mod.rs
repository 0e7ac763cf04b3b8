//! Sequences in graded spaces, Cauchy certification and limit estimation.

mod counterexample;
mod sequence;
mod verdict;

pub use counterexample::{
    bump, counterexample_path, counterexample_sequence, index_plot, limit_plot, settling_index, transition_interval,
};
pub use sequence::{ev, CauchySequence};
pub use verdict::{
    is_cauchy, limit_estimate, limit_from_verdict, CauchyCriteria, CauchyMonitor, CauchyStatus, CauchyVerdict,
    LimitEstimate,
};
