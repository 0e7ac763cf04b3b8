//! P1 finite elements for `Δu = f` with zero boundary values on polygons,
//! with nested uniform refinement.
//!
//! The hat functions form a Galerkin basis, not an orthogonal one: the
//! displayed conditions `(Δu_n, δ_k) = (f, δ_k)` are the Galerkin equations.

pub mod assemble;
pub mod convergence;
pub mod io;
pub mod mesh;
pub mod probes;
pub mod solve;
pub mod sparse;

pub use assemble::{assemble, DofMap, GalerkinSystem, Load, LoadQuadrature, Manufactured};
pub use convergence::{run_scheme, DiagnosticRow, SchemeOptions, SchemeRun, DEFAULT_SCHEME_TOL};
pub use mesh::{Point, Triangulation};
pub use probes::{scheme_linearity_probe, vertex_perturbation_probe, LinearityReport, VertexPerturbation};
pub use solve::{energy_norm, error_norms, prolong, solve_poisson, ErrorNorms, FemOptions, FemSolution};
pub use sparse::{conjugate_gradient, CgOptions, CsrMatrix};
