//! `D₁J(x, y)(a) = f(x, J(x, y))(a)` with `J(x₀, ·) = Id`, built by the
//! path-space fixed point: for fixed `(x, y)` the path
//! `α(t) = ∫₀ᵗ f(s(x - x₀) + x₀, y + α(s)) · (x - x₀) ds`
//! is found by Picard iteration on a uniform grid, and `J(x, y) = y + α(1)`.

use std::fmt;
use std::sync::Arc;

use rayon::prelude::*;

use crate::cauchy::{CauchyCriteria, CauchyMonitor, CauchyVerdict};
use crate::error::{Error, Result};
use crate::experiment::csvio::{fmt_f64, CsvTable};
use crate::ilb::{NormScale, ScaledVector};

type FrobeniusFn = dyn Fn(&ScaledVector, &ScaledVector, &ScaledVector) -> Result<ScaledVector> + Send + Sync;

pub const DEFAULT_GRID: usize = 200;

/// `f(x, y)` as a linear map `a ↦ f(x, y)(a)` from `x`-space to `y`-space.
#[derive(Clone)]
pub struct FrobeniusProblem {
    f: Arc<FrobeniusFn>,
    x0: ScaledVector,
    y0: ScaledVector,
    x_radius: f64,
    y_radius: f64,
    scale: NormScale,
}

impl fmt::Debug for FrobeniusProblem {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("FrobeniusProblem")
            .field("x0", &self.x0)
            .field("y0", &self.y0)
            .field("x_radius", &self.x_radius)
            .field("y_radius", &self.y_radius)
            .finish_non_exhaustive()
    }
}

impl FrobeniusProblem {
    /// `B = {‖x - x₀‖₀ < x_radius}`, `B′ = {‖y - y₀‖₀ < y_radius}`.
    pub fn new<F>(
        x0: ScaledVector,
        y0: ScaledVector,
        x_radius: f64,
        y_radius: f64,
        scale: NormScale,
        f: F,
    ) -> Result<Self>
    where
        F: Fn(&ScaledVector, &ScaledVector, &ScaledVector) -> Result<ScaledVector> + Send + Sync + 'static,
    {
        if !(x_radius > 0.0 && y_radius > 0.0) {
            return Err(Error::InvalidArgument("domain radii must be positive".into()));
        }
        let x0 = x0.check_finite("x0")?;
        let y0 = y0.check_finite("y0")?;
        let problem = Self { f: Arc::new(f), x0, y0, x_radius, y_radius, scale };
        let a = ScaledVector::unit(problem.x_dim(), 0);
        problem.eval(&problem.x0, &problem.y0, &a)?;
        Ok(problem)
    }

    pub fn x_dim(&self) -> usize {
        self.x0.len()
    }

    pub fn y_dim(&self) -> usize {
        self.y0.len()
    }

    pub fn base_point(&self) -> (&ScaledVector, &ScaledVector) {
        (&self.x0, &self.y0)
    }

    pub fn scale(&self) -> &NormScale {
        &self.scale
    }

    /// `f(x, y)(a)`, checked for shape and finiteness.
    pub fn eval(&self, x: &ScaledVector, y: &ScaledVector, a: &ScaledVector) -> Result<ScaledVector> {
        let value = (self.f)(x, y, a)?;
        if value.len() != self.y_dim() {
            return Err(Error::DimensionMismatch { expected: self.y_dim(), actual: value.len() });
        }
        value.check_finite("f(x, y)(a)")
    }

    fn check_point(&self, x: &ScaledVector, y: &ScaledVector) -> Result<()> {
        x.check_same_len(&self.x0)?;
        y.check_same_len(&self.y0)?;
        if (x - &self.x0).norm(0) >= self.x_radius {
            return Err(Error::DomainViolation("x outside the base box".into()));
        }
        if !self.in_y_box(y) {
            return Err(Error::DomainViolation("y outside the fibre box".into()));
        }
        Ok(())
    }

    fn in_y_box(&self, y: &ScaledVector) -> bool {
        (y - &self.y0).norm(0) < self.y_radius
    }

    /// Integrand `s ↦ f(s(x - x₀) + x₀, y + γ(s)) · (x - x₀)` at every grid node.
    fn integrand(&self, x: &ScaledVector, y: &ScaledVector, gamma: &PathFunction) -> Result<Vec<ScaledVector>> {
        let dx = x - &self.x0;
        gamma
            .times
            .par_iter()
            .zip(&gamma.values)
            .map(|(&t, g)| self.eval(&self.x0.axpy(t, &dx), &(y + g), &dx))
            .collect()
    }
}

/// Path `t ↦ γ(t)` sampled on `M + 1` equispaced nodes of `[0, 1]`, `γ(0) = 0`.
#[derive(Debug, Clone, PartialEq)]
pub struct PathFunction {
    times: Vec<f64>,
    values: Vec<ScaledVector>,
}

impl PathFunction {
    pub fn zero(grid_size: usize, dim: usize) -> Result<Self> {
        if grid_size < 2 {
            return Err(Error::InvalidArgument("grid size must be at least 2".into()));
        }
        let times = (0..=grid_size).map(|m| m as f64 / grid_size as f64).collect();
        Ok(Self { times, values: vec![ScaledVector::zeros(dim); grid_size + 1] })
    }

    pub fn grid_size(&self) -> usize {
        self.times.len() - 1
    }

    pub fn times(&self) -> &[f64] {
        &self.times
    }

    pub fn values(&self) -> &[ScaledVector] {
        &self.values
    }

    pub fn end(&self) -> &ScaledVector {
        &self.values[self.values.len() - 1]
    }

    /// `max_m ‖γ(t_m) - η(t_m)‖_level`.
    pub fn sup_distance(&self, other: &Self, level: u32) -> f64 {
        self.values.iter().zip(&other.values).map(|(a, b)| (a - b).norm(level)).fold(0.0, f64::max)
    }

    /// Columns `t, c0, c1, ...`.
    pub fn to_table(&self) -> Result<CsvTable> {
        let dim = self.values[0].len();
        let names: Vec<String> = std::iter::once("t".to_string()).chain((0..dim).map(|k| format!("c{k}"))).collect();
        let header: Vec<&str> = names.iter().map(String::as_str).collect();
        let mut table = CsvTable::new(&header);
        for (t, v) in self.times.iter().zip(&self.values) {
            table.push(std::iter::once(fmt_f64(*t)).chain(v.as_slice().iter().map(|&c| fmt_f64(c))).collect())?;
        }
        Ok(table)
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct PicardStep {
    pub path: PathFunction,
    /// Whether `y + γ′(t)` stays in the fibre box at every node.
    pub in_domain: bool,
}

/// One Picard pass: cumulative trapezoid integral of the integrand along `γ`.
pub fn picard_step(
    problem: &FrobeniusProblem,
    x: &ScaledVector,
    y: &ScaledVector,
    gamma: &PathFunction,
) -> Result<PicardStep> {
    x.check_same_len(&problem.x0)?;
    y.check_same_len(&problem.y0)?;
    if gamma.values[0].len() != problem.y_dim() {
        return Err(Error::DimensionMismatch { expected: problem.y_dim(), actual: gamma.values[0].len() });
    }
    let g = problem.integrand(x, y, gamma)?;
    let half_dt = 0.5 / gamma.grid_size() as f64;
    let mut values = Vec::with_capacity(g.len());
    let mut acc = ScaledVector::zeros(problem.y_dim());
    values.push(acc.clone());
    for w in g.windows(2) {
        acc = acc.axpy(half_dt, &(&w[0] + &w[1]));
        values.push(acc.clone());
    }
    let in_domain = values.iter().all(|v| problem.in_y_box(&(y + v)));
    Ok(PicardStep { path: PathFunction { times: gamma.times.clone(), values }, in_domain })
}

/// Largest level-0 defect of the central grid derivative of `α` against the
/// integrand, over interior nodes.
pub fn ode_residual(
    problem: &FrobeniusProblem,
    x: &ScaledVector,
    y: &ScaledVector,
    alpha: &PathFunction,
) -> Result<f64> {
    let g = problem.integrand(x, y, alpha)?;
    let m = alpha.grid_size() as f64;
    Ok((1..alpha.grid_size())
        .map(|i| {
            let slope = (&alpha.values[i + 1] - &alpha.values[i - 1]).scale(0.5 * m);
            (&slope - &g[i]).norm(0)
        })
        .fold(0.0, f64::max))
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FrobeniusOptions {
    pub tol: f64,
    pub max_iter: usize,
    pub window: usize,
}

impl Default for FrobeniusOptions {
    fn default() -> Self {
        Self { tol: 1e-12, max_iter: 200, window: 3 }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct FrobeniusSolution {
    pub j_value: ScaledVector,
    pub alpha: PathFunction,
    /// One verdict per configured level, on sup-over-grid differences.
    pub verdicts: Vec<CauchyVerdict>,
    pub in_domain: bool,
    pub iterations: usize,
    /// Interior-node ODE residual of the returned path.
    pub ode_residual: f64,
    /// `ode_residual · M²`.
    pub residual_constant: f64,
    /// `(iteration, level-0 sup difference, ODE residual of the new iterate)`.
    pub trace: Vec<(usize, f64, f64)>,
}

impl FrobeniusSolution {
    pub fn accepted(&self) -> bool {
        self.in_domain && self.verdicts.iter().all(CauchyVerdict::accepted)
    }

    pub fn verdict(&self) -> &CauchyVerdict {
        &self.verdicts[0]
    }

    /// Columns `iteration, sup_diff, residual`.
    pub fn trace_table(&self) -> Result<CsvTable> {
        let mut table = CsvTable::new(&["iteration", "sup_diff", "residual"]);
        for &(n, d, r) in &self.trace {
            table.push(vec![n.to_string(), fmt_f64(d), fmt_f64(r)])?;
        }
        Ok(table)
    }
}

/// Picard iteration from `γ = 0` until the sup-norm differences are certified
/// Cauchy at every level, the path leaves the fibre box, or `max_iter`.
pub fn solve_frobenius(
    problem: &FrobeniusProblem,
    x: &ScaledVector,
    y: &ScaledVector,
    grid_size: usize,
    opts: &FrobeniusOptions,
) -> Result<FrobeniusSolution> {
    problem.check_point(x, y)?;
    let criteria = CauchyCriteria::new(opts.tol, opts.window, opts.max_iter)?;
    let mut monitors =
        problem.scale.levels().iter().map(|&l| CauchyMonitor::new(l, criteria)).collect::<Result<Vec<_>>>()?;

    let mut gamma = PathFunction::zero(grid_size, problem.y_dim())?;
    let mut in_domain = true;
    let mut trace = Vec::new();
    for n in 0..opts.max_iter {
        let step = picard_step(problem, x, y, &gamma)?;
        let mut all_accept = true;
        for m in monitors.iter_mut() {
            all_accept &= m.push(step.path.sup_distance(&gamma, m.level()));
        }
        let stationary = step.path == gamma;
        gamma = step.path;
        trace.push((n, monitors[0].differences()[n], ode_residual(problem, x, y, &gamma)?));
        if !step.in_domain {
            in_domain = false;
            break;
        }
        if stationary {
            monitors.iter_mut().for_each(CauchyMonitor::mark_stationary);
            break;
        }
        if all_accept {
            break;
        }
    }

    let residual = trace.last().map_or(0.0, |t| t.2);
    Ok(FrobeniusSolution {
        j_value: y + gamma.end(),
        verdicts: monitors.iter().map(CauchyMonitor::verdict).collect(),
        iterations: trace.len(),
        ode_residual: residual,
        residual_constant: residual * (grid_size * grid_size) as f64,
        alpha: gamma,
        in_domain,
        trace,
    })
}

#[derive(Debug, Clone, PartialEq)]
pub struct CompatibilityReport {
    pub max_defect: f64,
    pub samples: usize,
}

/// Finite-difference check that
/// `D₁f(x,y)(a)(b) + D₂f(x,y)(f(x,y)(a))(b)` is symmetric in `(a, b)`.
pub fn check_compatibility(
    problem: &FrobeniusProblem,
    samples: &[(ScaledVector, ScaledVector)],
    a: &ScaledVector,
    b: &ScaledVector,
    h: f64,
) -> Result<CompatibilityReport> {
    if !(h > 0.0) {
        return Err(Error::InvalidArgument("finite-difference step must be positive".into()));
    }
    a.check_same_len(&problem.x0)?;
    b.check_same_len(&problem.x0)?;
    let side = |x: &ScaledVector, y: &ScaledVector, a: &ScaledVector, b: &ScaledVector| -> Result<ScaledVector> {
        let d1 = &problem.eval(&x.axpy(h, a), y, b)? - &problem.eval(&x.axpy(-h, a), y, b)?;
        let fa = problem.eval(x, y, a)?;
        let d2 = &problem.eval(x, &y.axpy(h, &fa), b)? - &problem.eval(x, &y.axpy(-h, &fa), b)?;
        (&d1 + &d2).scale(0.5 / h).check_finite("compatibility term")
    };
    let mut max_defect = 0.0f64;
    for (x, y) in samples {
        problem.check_point(x, y)?;
        let defect = (&side(x, y, a, b)? - &side(x, y, b, a)?).norm(0);
        max_defect = max_defect.max(defect);
    }
    Ok(CompatibilityReport { max_defect, samples: samples.len() })
}

/// Reference problems.
pub mod problems {
    use super::*;

    /// Scalar `f(x, y)(a) = y · a` at `x₀ = 0`; `J(x, y) = y e^{x}`.
    pub fn exponential(y0: f64, x_radius: f64, y_radius: f64) -> Result<FrobeniusProblem> {
        FrobeniusProblem::new(
            ScaledVector::zeros(1),
            ScaledVector::scalar(y0)?,
            x_radius,
            y_radius,
            NormScale::default(),
            |_, y, a| Ok(y.scale(a[0])),
        )
    }

    /// `f(x, y)(a) = c · Σ a_k` on every `y` coordinate; `J(x, y) = y + c Σ(x - x₀)`.
    pub fn constant(c: f64, x0: ScaledVector, y_dim: usize) -> Result<FrobeniusProblem> {
        let y0 = ScaledVector::zeros(y_dim);
        FrobeniusProblem::new(x0, y0, f64::MAX, f64::MAX, NormScale::default(), move |_, y, a| {
            let s: f64 = a.as_slice().iter().sum();
            Ok(y.map(|_| c * s))
        })
    }

    /// Two-dimensional `x`, `f(x, y)(a) = (a₁ + a₂) · y`.
    pub fn summed_exponential(y0: ScaledVector, radius: f64) -> Result<FrobeniusProblem> {
        FrobeniusProblem::new(ScaledVector::zeros(2), y0, radius, radius, NormScale::default(), |_, y, a| {
            Ok(y.scale(a[0] + a[1]))
        })
    }
}
