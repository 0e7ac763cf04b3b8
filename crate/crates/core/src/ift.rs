//! Implicit functions by fixed-point iteration, without a priori estimates.
//!
//! For `f(x, y)` with `D₂f(0, 0) = Id`, the solver iterates
//! `φ_x(y) = y - f(x, y)` from `y = 0` and certifies the iterates as a Cauchy
//! sequence at every configured norm level while they stay in the domain box.
//! Nothing is assumed about contraction constants: the domain where this
//! works is explored empirically with [`domain_probe`].

use std::fmt;
use std::sync::Arc;

use rayon::prelude::*;

use crate::cauchy::{CauchyCriteria, CauchyMonitor, CauchyStatus, CauchyVerdict};
use crate::error::{Error, Result};
use crate::experiment::csvio::{fmt_f64, CsvTable};
use crate::ilb::{probe_smoothness, NormScale, Plot, ProbeConfig, ScaledVector, SmoothnessReport};

type ImplicitFn = dyn Fn(&ScaledVector, &ScaledVector) -> Result<ScaledVector> + Send + Sync;

/// Largest per-coordinate defect tolerated in the `D₂f(0,0) = Id` self-test.
pub const IDENTITY_DEFECT_TOL: f64 = 1e-4;
const IDENTITY_FD_STEP: f64 = 1e-5;
const IDENTITY_SAMPLE: usize = 32;

#[derive(Clone)]
pub struct ImplicitProblem {
    f: Arc<ImplicitFn>,
    x_dim: usize,
    y_dim: usize,
    x_radius: f64,
    y_radius: f64,
    scale: NormScale,
}

impl fmt::Debug for ImplicitProblem {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("ImplicitProblem")
            .field("x_dim", &self.x_dim)
            .field("y_dim", &self.y_dim)
            .field("x_radius", &self.x_radius)
            .field("y_radius", &self.y_radius)
            .field("levels", &self.scale.levels())
            .finish_non_exhaustive()
    }
}

impl ImplicitProblem {
    /// Builds the problem on the box `‖x‖₀ < x_radius, ‖y‖₀ < y_radius` and
    /// verifies `D₂f(0,0) ≈ Id` by central differences.
    pub fn new<F>(x_dim: usize, y_dim: usize, x_radius: f64, y_radius: f64, scale: NormScale, f: F) -> Result<Self>
    where
        F: Fn(&ScaledVector, &ScaledVector) -> Result<ScaledVector> + Send + Sync + 'static,
    {
        if x_dim == 0 || y_dim == 0 {
            return Err(Error::InvalidArgument("dimensions must be positive".into()));
        }
        if !(x_radius > 0.0 && y_radius > 0.0) {
            return Err(Error::InvalidArgument("domain radii must be positive".into()));
        }
        let problem = Self { f: Arc::new(f), x_dim, y_dim, x_radius, y_radius, scale };
        let defect = problem.identity_defect()?;
        if defect >= IDENTITY_DEFECT_TOL {
            return Err(Error::Hypothesis(format!("D2 f(0,0) differs from the identity by {defect:e}")));
        }
        Ok(problem)
    }

    pub fn x_dim(&self) -> usize {
        self.x_dim
    }

    pub fn y_dim(&self) -> usize {
        self.y_dim
    }

    pub fn x_radius(&self) -> f64 {
        self.x_radius
    }

    pub fn y_radius(&self) -> f64 {
        self.y_radius
    }

    pub fn scale(&self) -> &NormScale {
        &self.scale
    }

    pub fn eval(&self, x: &ScaledVector, y: &ScaledVector) -> Result<ScaledVector> {
        let value = (self.f)(x, y)?;
        if value.len() != self.y_dim {
            return Err(Error::DimensionMismatch { expected: self.y_dim, actual: value.len() });
        }
        value.check_finite("f(x, y)")
    }

    /// Largest `|D₂f(0,0) e_j - e_j|` over a deterministic coordinate sample.
    pub fn identity_defect(&self) -> Result<f64> {
        let x0 = ScaledVector::zeros(self.x_dim);
        self.eval(&x0, &ScaledVector::zeros(self.y_dim))?;
        let count = self.y_dim.min(IDENTITY_SAMPLE);
        let mut worst = 0.0f64;
        for s in 0..count {
            let j = s * self.y_dim / count;
            let e = ScaledVector::unit(self.y_dim, j);
            let plus = self.eval(&x0, &e.scale(IDENTITY_FD_STEP))?;
            let minus = self.eval(&x0, &e.scale(-IDENTITY_FD_STEP))?;
            let column = (&plus - &minus).scale(0.5 / IDENTITY_FD_STEP);
            worst = worst.max((&column - &e).max_abs());
        }
        Ok(worst)
    }

    fn check_x(&self, x: &ScaledVector) -> Result<()> {
        if x.len() != self.x_dim {
            return Err(Error::DimensionMismatch { expected: self.x_dim, actual: x.len() });
        }
        if !x.is_finite() {
            return Err(Error::NonFinite("x".into()));
        }
        if x.norm(0) >= self.x_radius {
            return Err(Error::DomainViolation(format!("|x|_0 = {} is not below {}", x.norm(0), self.x_radius)));
        }
        Ok(())
    }

    pub fn in_y_box(&self, y: &ScaledVector) -> bool {
        y.norm(0) < self.y_radius
    }
}

/// `φ_x(y) = y - f(x, y)`.
pub fn phi_step(problem: &ImplicitProblem, x: &ScaledVector, y: &ScaledVector) -> Result<ScaledVector> {
    let fy = problem.eval(x, y)?;
    (y - &fy).check_finite("phi_x(y)")
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SolveOptions {
    pub tol: f64,
    pub max_iter: usize,
    pub window: usize,
}

impl Default for SolveOptions {
    fn default() -> Self {
        Self { tol: 1e-12, max_iter: 10_000, window: 3 }
    }
}

impl SolveOptions {
    pub fn criteria(&self) -> Result<CauchyCriteria> {
        CauchyCriteria::new(self.tol, self.window, self.max_iter)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum StopReason {
    Converged,
    DomainExit,
    MaxIterations,
}

#[derive(Debug, Clone, PartialEq)]
pub struct ImplicitSolution {
    pub u_value: ScaledVector,
    pub levels: Vec<u32>,
    /// `‖φⁿ⁺¹(0) - φⁿ(0)‖_level`, one list per level.
    pub iterates_trace: Vec<Vec<f64>>,
    /// Whether iterate `n + 1` stayed in the `y` box.
    pub iterate_in_domain: Vec<bool>,
    pub verdicts: Vec<CauchyVerdict>,
    /// `‖f(x, u)‖_level`, one per level.
    pub residual_norms: Vec<f64>,
    pub in_domain: bool,
    pub iterations: usize,
    pub stop: StopReason,
}

impl ImplicitSolution {
    pub fn accepted(&self) -> bool {
        self.in_domain && self.verdicts.iter().all(CauchyVerdict::accepted)
    }

    /// Verdict at the lowest configured level.
    pub fn verdict(&self) -> &CauchyVerdict {
        &self.verdicts[0]
    }

    /// Trace with columns `n, level, d_n, in_domain`.
    pub fn trace_table(&self) -> Result<CsvTable> {
        let mut table = CsvTable::new(&["n", "level", "d_n", "in_domain"]);
        for (level, trace) in self.levels.iter().zip(&self.iterates_trace) {
            for (n, &d) in trace.iter().enumerate() {
                table.push(vec![
                    n.to_string(),
                    level.to_string(),
                    fmt_f64(d),
                    self.iterate_in_domain[n].to_string(),
                ])?;
            }
        }
        Ok(table)
    }
}

/// Iterates `y_{n+1} = φ_x(y_n)` from `y_0 = 0`.
///
/// Stops when every level certifies the iterates as Cauchy, when an iterate
/// leaves the `y` box, or after `max_iter` steps. The last two outcomes are
/// reported in the solution, not as errors.
pub fn solve_implicit(problem: &ImplicitProblem, x: &ScaledVector, opts: &SolveOptions) -> Result<ImplicitSolution> {
    problem.check_x(x)?;
    let criteria = opts.criteria()?;
    let levels = problem.scale.levels().to_vec();
    let mut monitors = levels.iter().map(|&l| CauchyMonitor::new(l, criteria)).collect::<Result<Vec<_>>>()?;

    let mut y = ScaledVector::zeros(problem.y_dim);
    let mut iterate_in_domain = Vec::new();
    let mut stop = StopReason::MaxIterations;
    for _ in 0..opts.max_iter {
        let next = phi_step(problem, x, &y)?;
        let diff = &next - &y;
        let inside = problem.in_y_box(&next);
        iterate_in_domain.push(inside);
        let mut all_accept = true;
        for m in monitors.iter_mut() {
            all_accept &= m.push(diff.norm(m.level()));
        }
        let stationary = next == y;
        y = next;
        if !inside {
            stop = StopReason::DomainExit;
            break;
        }
        if stationary {
            monitors.iter_mut().for_each(CauchyMonitor::mark_stationary);
            stop = StopReason::Converged;
            break;
        }
        if all_accept {
            stop = StopReason::Converged;
            break;
        }
    }

    let verdicts: Vec<CauchyVerdict> = monitors.iter().map(CauchyMonitor::verdict).collect();
    let residual = problem.eval(x, &y)?;
    let in_domain = iterate_in_domain.iter().all(|&b| b);
    log::debug!("implicit solve: {:?} after {} iterations", stop, iterate_in_domain.len());
    Ok(ImplicitSolution {
        residual_norms: levels.iter().map(|&l| residual.norm(l)).collect(),
        iterates_trace: monitors.iter().map(|m| m.differences().to_vec()).collect(),
        iterations: iterate_in_domain.len(),
        iterate_in_domain,
        u_value: y,
        levels,
        verdicts,
        in_domain,
        stop,
    })
}

#[derive(Debug, Clone, PartialEq)]
pub struct DomainSample {
    pub magnitude: f64,
    /// `cauchy-accepted`, `diverging`, `domain-exit`, `inconclusive` or `outside-box`.
    pub status: String,
    pub accepted: bool,
    pub in_domain: bool,
    pub ratio_estimate: f64,
    pub u_norm: f64,
    pub iterations: usize,
}

#[derive(Debug, Clone, PartialEq)]
pub struct DomainProfile {
    pub samples: Vec<DomainSample>,
}

impl DomainProfile {
    /// Empirical lower bound on the extent of the solution domain along the ray.
    pub fn largest_accepted(&self) -> Option<f64> {
        self.samples.iter().filter(|s| s.accepted).map(|s| s.magnitude).reduce(f64::max)
    }

    /// Columns `magnitude, status, u_norm`.
    pub fn to_table(&self) -> Result<CsvTable> {
        let mut table = CsvTable::new(&["magnitude", "status", "u_norm"]);
        for s in &self.samples {
            table.push(vec![fmt_f64(s.magnitude), s.status.clone(), fmt_f64(s.u_norm)])?;
        }
        Ok(table)
    }
}

/// Runs [`solve_implicit`] at `x = m · ray` for each magnitude `m`, in parallel.
pub fn domain_probe(
    problem: &ImplicitProblem,
    ray: &ScaledVector,
    magnitudes: &[f64],
    opts: &SolveOptions,
) -> Result<DomainProfile> {
    if ray.len() != problem.x_dim {
        return Err(Error::DimensionMismatch { expected: problem.x_dim, actual: ray.len() });
    }
    if magnitudes.is_empty() || magnitudes[0] <= 0.0 || magnitudes.windows(2).any(|w| w[1] <= w[0]) {
        return Err(Error::InvalidArgument("magnitudes must be positive and increasing".into()));
    }
    let samples = magnitudes
        .par_iter()
        .map(|&m| {
            let x = ray.scale(m);
            if x.norm(0) >= problem.x_radius {
                return Ok(DomainSample {
                    magnitude: m,
                    status: "outside-box".into(),
                    accepted: false,
                    in_domain: false,
                    ratio_estimate: f64::NAN,
                    u_norm: f64::NAN,
                    iterations: 0,
                });
            }
            let sol = solve_implicit(problem, &x, opts)?;
            let status = if sol.accepted() {
                CauchyStatus::Accepted.to_string()
            } else if sol.verdict().status == CauchyStatus::Diverging {
                CauchyStatus::Diverging.to_string()
            } else if !sol.in_domain {
                "domain-exit".to_string()
            } else {
                sol.verdict().status.to_string()
            };
            Ok(DomainSample {
                magnitude: m,
                accepted: sol.accepted(),
                in_domain: sol.in_domain,
                ratio_estimate: sol.verdict().ratio_estimate,
                u_norm: sol.u_value.norm(0),
                iterations: sol.iterations,
                status,
            })
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(DomainProfile { samples })
}

/// Probes `t ↦ observable(u(plot(t)))` for smoothness.
///
/// Every probed `x` must be certified; a point where the iteration does not
/// converge inside the box is reported as a domain violation.
pub fn solution_plot_probe<O>(
    problem: &ImplicitProblem,
    plot: &Plot<ScaledVector>,
    observable: O,
    point: &[f64],
    direction: &[f64],
    opts: &SolveOptions,
    config: &ProbeConfig,
) -> Result<SmoothnessReport>
where
    O: Fn(&ScaledVector) -> f64,
{
    let problem = problem.clone();
    let opts = *opts;
    let solution = plot.map(move |x| {
        let sol = solve_implicit(&problem, &x, &opts)?;
        if !sol.accepted() {
            return Err(Error::DomainViolation(format!(
                "iteration not certified at x = {:?}: {}",
                x.as_slice(),
                sol.verdict().report_line()
            )));
        }
        Ok(sol.u_value)
    });
    let config = ProbeConfig { noise_floor: config.noise_floor.max(opts.tol), ..*config };
    probe_smoothness(&solution, &observable, point, direction, &config)
}

/// Reference problems with closed-form solutions.
pub mod problems {
    use super::*;

    /// `f(x, y) = y + x y - x` applied per coordinate; `u(x) = x / (1 + x)`.
    pub fn affine(dim: usize, x_radius: f64, y_radius: f64, scale: NormScale) -> Result<ImplicitProblem> {
        ImplicitProblem::new(dim, dim, x_radius, y_radius, scale, |x, y| Ok(y.zip_map(x, |yk, xk| yk + xk * yk - xk)))
    }

    /// `f(x, y) = y - A x` with `A = diag(a)`; `u(x) = A x`.
    pub fn linear_diagonal(a: Vec<f64>, x_radius: f64, y_radius: f64, scale: NormScale) -> Result<ImplicitProblem> {
        let dim = a.len();
        let a = ScaledVector::new(a)?;
        ImplicitProblem::new(dim, dim, x_radius, y_radius, scale, move |x, y| Ok(y - &x.zip_map(&a, |xk, ak| xk * ak)))
    }

    /// `f(x, y) = y`: no dependence on `x`, `u ≡ 0`.
    pub fn trivial(dim: usize, scale: NormScale) -> Result<ImplicitProblem> {
        ImplicitProblem::new(dim, dim, f64::MAX, f64::MAX, scale, |_, y| Ok(y.clone()))
    }
}
