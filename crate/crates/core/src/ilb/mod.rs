//! Truncated graded sequence spaces, plots and smoothness probes.
//!
//! A decreasing scale of Banach spaces `E_0 ⊃ E_1 ⊃ ...` is modelled by one
//! coefficient array of fixed length and the weighted norms
//! `‖v‖_i² = Σ_k (1+k²)^i v_k²`. Because one array represents the element at
//! every level, restrictions of a map to higher levels agree automatically.

mod plot;
mod probe;
mod vector;

pub use plot::{fd_derivative, Plot};
pub use probe::{probe_curve, probe_smoothness, ProbeConfig, SmoothnessReport, Verdict, SMOOTH_ORDER};
pub use vector::{norm, weight, NormScale, ScaledVector};
