//! Runs configured experiments and collects their files and checks.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use super::config::*;
use super::csvio::{fmt_f64, CsvTable};
use crate::cauchy::{index_plot, limit_plot, transition_interval, CauchyCriteria};
use crate::error::{Error, Result};
use crate::fem::{
    run_scheme, scheme_linearity_probe, vertex_perturbation_probe, Load, Manufactured, SchemeOptions,
    VertexPerturbation,
};
use crate::frobenius::{self, solve_frobenius, FrobeniusOptions, FrobeniusProblem};
use crate::ift::{self, domain_probe, phi_step, solution_plot_probe, solve_implicit, ImplicitProblem, SolveOptions};
use crate::ilb::{probe_curve, NormScale, Plot, ProbeConfig, ScaledVector, Verdict};
use crate::scheme::{residual_trace, FemScheme, CERTIFY_WINDOW};

#[derive(Debug, Clone, PartialEq)]
pub struct Check {
    pub name: String,
    pub passed: bool,
    pub detail: String,
}

impl Check {
    pub fn new(name: &str, passed: bool, detail: impl Into<String>) -> Self {
        Self { name: name.to_string(), passed, detail: detail.into() }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct OutputFile {
    pub name: String,
    pub contents: String,
}

#[derive(Debug, Clone, PartialEq)]
pub struct ExperimentOutcome {
    pub name: String,
    pub kind: &'static str,
    pub files: Vec<OutputFile>,
    pub checks: Vec<Check>,
    /// Error that stopped the experiment; its checks are then incomplete.
    pub error: Option<String>,
}

impl ExperimentOutcome {
    pub fn passed(&self) -> bool {
        self.error.is_none() && self.checks.iter().all(|c| c.passed)
    }

    pub fn file(&self, name: &str) -> Option<&str> {
        self.files.iter().find(|f| f.name == name).map(|f| f.contents.as_str())
    }

    pub fn check(&self, name: &str) -> Option<&Check> {
        self.checks.iter().find(|c| c.name == name)
    }
}

#[derive(Debug, Clone, PartialEq, Default)]
pub struct Bundle {
    pub seed: u64,
    pub outcomes: Vec<ExperimentOutcome>,
}

impl Bundle {
    pub fn all_passed(&self) -> bool {
        self.outcomes.iter().all(ExperimentOutcome::passed)
    }

    pub fn outcome(&self, name: &str) -> Option<&ExperimentOutcome> {
        self.outcomes.iter().find(|o| o.name == name)
    }

    /// Plain-text report with one line per check.
    pub fn report(&self) -> String {
        let mut out = format!("seed: {}\nexperiments: {}\n", self.seed, self.outcomes.len());
        let (mut passed, mut total) = (0, 0);
        for o in &self.outcomes {
            out.push_str(&format!("\n[{}] kind={} files={}\n", o.name, o.kind, o.files.len()));
            if let Some(e) = &o.error {
                out.push_str(&format!("  FAIL error: {e}\n"));
                total += 1;
            }
            for c in &o.checks {
                out.push_str(&format!("  {} {}: {}\n", if c.passed { "PASS" } else { "FAIL" }, c.name, c.detail));
                total += 1;
                passed += usize::from(c.passed);
            }
        }
        out.push_str(&format!("\nsummary: {passed}/{total} checks passed\n"));
        out
    }
}

/// Seed of one experiment, derived from the global seed and its name.
pub fn experiment_seed(seed: u64, name: &str) -> u64 {
    // FNV-1a
    name.bytes().fold(0xcbf2_9ce4_8422_2325u64 ^ seed, |h, b| (h ^ u64::from(b)).wrapping_mul(0x0100_0000_01b3))
}

/// Checks that every referenced mesh file loads.
pub fn check_fixtures(config: &ExperimentConfig) -> Result<()> {
    for e in &config.experiments {
        let mesh = match &e.kind {
            ExperimentKind::FemConverge(s) => &s.mesh,
            ExperimentKind::Probe(s) => &s.mesh,
            _ => continue,
        };
        if let MeshSpec::File(_) = mesh {
            mesh.load().map_err(|err| Error::Config(format!("[{}] mesh: {err}", e.name)))?;
        }
    }
    Ok(())
}

/// Runs every experiment (concurrently) and returns the outcomes in config
/// order. A failing experiment is recorded in its outcome; only missing
/// fixtures abort the whole bundle.
pub fn run_experiment(config: &ExperimentConfig) -> Result<Bundle> {
    check_fixtures(config)?;
    let outcomes = config.experiments.par_iter().map(|spec| run_one(spec, config.seed)).collect();
    Ok(Bundle { seed: config.seed, outcomes })
}

pub fn run_one(spec: &ExperimentSpec, seed: u64) -> ExperimentOutcome {
    log::info!("running [{}] ({})", spec.name, spec.kind.name());
    let mut out = ExperimentOutcome {
        name: spec.name.clone(),
        kind: spec.kind.name(),
        files: vec![],
        checks: vec![],
        error: None,
    };
    let mut rng = ChaCha8Rng::seed_from_u64(experiment_seed(seed, &spec.name));
    let result = match &spec.kind {
        ExperimentKind::FemConverge(s) => fem_converge(s, &mut out),
        ExperimentKind::IftSolve(s) => ift_solve(s, &mut rng, &mut out),
        ExperimentKind::IftDomain(s) => ift_domain(s, &mut out),
        ExperimentKind::Frobenius(s) => frobenius_run(s, &mut rng, &mut out),
        ExperimentKind::Probe(s) => probe(s, &mut out),
        ExperimentKind::Counterexample(s) => counterexample(s, &mut out),
    };
    if let Err(e) = result {
        log::warn!("[{}] failed: {e}", spec.name);
        out.error = Some(e.to_string());
    }
    out
}

impl ExperimentOutcome {
    fn add_file(&mut self, name: &str, table: &CsvTable) -> Result<()> {
        self.add_text(name, table.to_csv_string()?);
        Ok(())
    }

    fn add_text(&mut self, name: &str, contents: String) {
        self.files.push(OutputFile { name: name.to_string(), contents });
    }

    fn record(&mut self, name: &str, passed: bool, detail: impl Into<String>) {
        self.checks.push(Check::new(name, passed, detail));
    }
}

fn e(v: f64) -> String {
    format!("{v:.3e}")
}

fn fem_converge(s: &FemConvergeSpec, out: &mut ExperimentOutcome) -> Result<()> {
    let mesh0 = s.mesh.load()?;
    let manufactured = Manufactured::sin_sin();
    let (load, exact) = match s.problem {
        FemProblem::SinSin => (manufactured.load.clone(), Some(&manufactured)),
        FemProblem::Constant => (Load::constant(1.0), None),
        FemProblem::Zero => (Load::zero(), None),
    };
    let opts = SchemeOptions { fem: s.solver.fem_options(), tol: s.tol, window: s.window };
    let run = run_scheme(&mesh0, &load, s.levels, &opts, exact)?;
    out.add_file("diagnostics.csv", &run.diagnostic_table()?)?;
    out.add_file("cauchy_trace.csv", &run.verdict.trace_table()?)?;
    if let Some(err) = &run.failure {
        out.record("solver", false, err.to_string());
        return Ok(());
    }

    if exact.is_some() {
        let from = if s.levels >= 3 { 2 } else { 1 };
        if let Some((h1, l2)) = run.min_orders(from, s.levels) {
            out.record(
                "l2-order",
                l2 >= 1.8,
                format!("min L2 order over levels {from}..{} is {l2:.3} (>= 1.8)", s.levels),
            );
            out.record(
                "h1-order",
                h1 >= 0.9,
                format!("min H1 order over levels {from}..{} is {h1:.3} (>= 0.9)", s.levels),
            );
        }
        if s.levels >= 4 && s.mesh == MeshSpec::Square {
            let sol = &run.solutions[3];
            let err = (sol.eval([0.5, 0.5])? - manufactured.u([0.5, 0.5])).abs();
            out.record("center-error", err <= 2e-2, format!("|u_4(0.5,0.5) - u(0.5,0.5)| = {} (<= 2e-2)", e(err)));
        }
    }

    if s.levels >= s.window + 2 {
        let v = &run.verdict;
        out.record("cauchy", v.accepted(), v.report_line());
        if s.problem == FemProblem::SinSin {
            let q = v.ratio_estimate;
            out.record("cauchy-ratio", (0.4..=0.6).contains(&q), format!("ratio estimate {q:.4} in [0.4, 0.6]"));
        }
    }

    if s.levels > CERTIFY_WINDOW {
        let scheme = FemScheme::new(&mesh0, s.levels, opts.fem)?;
        let trace = residual_trace(&scheme, &load, s.levels - 1, s.tol)?;
        out.add_file("residual_trace.csv", &trace.to_table()?)?;
        let last = trace.entries.last().map_or(0.0, |r| r.1);
        out.record(
            "residual",
            trace.certified,
            format!("last {CERTIFY_WINDOW} Galerkin residuals <= {} (last {})", e(s.tol), e(last)),
        );
    }
    Ok(())
}

fn ift_problem(spec: &IftSpec) -> Result<ImplicitProblem> {
    let scale = NormScale::new(spec.levels.clone())?;
    match spec.problem {
        IftProblemKind::Scalar | IftProblemKind::Componentwise => {
            ift::problems::affine(spec.dim, spec.x_radius, spec.y_radius, scale)
        }
        IftProblemKind::Trivial => ift::problems::trivial(spec.dim, scale),
    }
}

fn solve_options(spec: &IftSpec) -> SolveOptions {
    SolveOptions { tol: spec.tol, max_iter: spec.max_iter, window: spec.window }
}

fn closed_form(problem: IftProblemKind, x: &[f64]) -> Vec<f64> {
    match problem {
        IftProblemKind::Trivial => vec![0.0; x.len()],
        _ => x.iter().map(|&xk| xk / (1.0 + xk)).collect(),
    }
}

/// Root of `y ↦ y + x y - x` on `[-r, r]` by bisection.
fn bisect_affine(x: f64, r: f64) -> Option<f64> {
    let g = |y: f64| y + x * y - x;
    let (mut lo, mut hi) = (-r, r);
    if g(lo).signum() == g(hi).signum() {
        return None;
    }
    for _ in 0..200 {
        let mid = 0.5 * (lo + hi);
        if mid <= lo || mid >= hi {
            break;
        }
        if g(mid).signum() == g(lo).signum() {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    Some(0.5 * (lo + hi))
}

/// Violations of `‖u - y_n‖ ≤ qⁿ/(1-q) ‖y_1‖` along `y_n = φⁿ(0)` for the affine
/// family, where `q = max |x_k|` and `u` is the closed form.
fn banach_violations(problem: &ImplicitProblem, x: &ScaledVector, iterations: usize) -> Result<usize> {
    let q = x.max_abs();
    let u = ScaledVector::new(closed_form(IftProblemKind::Componentwise, x.as_slice()))?;
    let slack = 8.0 * f64::EPSILON * (1.0 + u.norm(0)) / (1.0 - q);
    let mut y = ScaledVector::zeros(x.len());
    let mut y1 = 0.0;
    let mut violations = 0;
    for n in 0..=iterations {
        if n == 1 {
            y1 = y.norm(0);
        }
        if n >= 1 {
            let bound = q.powi(n as i32) / (1.0 - q) * y1;
            violations += usize::from((&u - &y).norm(0) > bound + slack);
        }
        y = phi_step(problem, x, &y)?;
    }
    Ok(violations)
}

fn ift_solve(s: &IftSolveSpec, rng: &mut ChaCha8Rng, out: &mut ExperimentOutcome) -> Result<()> {
    let problem = ift_problem(&s.ift)?;
    let opts = solve_options(&s.ift);
    let mut cases = vec![s.x.clone().unwrap_or_else(|| (0..s.ift.dim).map(|k| 0.5 / (1.0 + k as f64)).collect())];
    cases.extend((0..s.samples).map(|_| vec![rng.random_range(-0.9..0.9)]));

    let solutions = cases
        .par_iter()
        .map(|x| solve_implicit(&problem, &ScaledVector::new(x.clone())?, &opts))
        .collect::<Result<Vec<_>>>()?;

    let mut trace = CsvTable::new(&["case", "n", "level", "d_n", "in_domain"]);
    let mut table = CsvTable::new(&["case", "k", "x", "u", "closed_form", "bisection", "iterations", "status"]);
    let (mut accepted, mut closed_err, mut bisect_err, mut residual, mut violations) = (0, 0.0f64, 0.0f64, 0.0f64, 0);
    let affine = s.ift.problem != IftProblemKind::Trivial;
    for (case, (x, sol)) in cases.iter().zip(&solutions).enumerate() {
        for row in sol.trace_table()?.rows() {
            let mut r = vec![case.to_string()];
            r.extend(row.iter().cloned());
            trace.push(r)?;
        }
        let exact = closed_form(s.ift.problem, x);
        for (k, (&xk, &uk)) in x.iter().zip(sol.u_value.as_slice()).enumerate() {
            let bis = if affine { bisect_affine(xk, s.ift.y_radius) } else { None };
            closed_err = closed_err.max((uk - exact[k]).abs());
            if let Some(b) = bis {
                bisect_err = bisect_err.max((uk - b).abs());
            }
            table.push(vec![
                case.to_string(),
                k.to_string(),
                fmt_f64(xk),
                fmt_f64(uk),
                fmt_f64(exact[k]),
                bis.map(fmt_f64).unwrap_or_default(),
                sol.iterations.to_string(),
                sol.verdict().status.to_string(),
            ])?;
        }
        accepted += usize::from(sol.accepted());
        residual = residual.max(sol.residual_norms[0]);
        if affine && sol.accepted() {
            violations += banach_violations(&problem, &ScaledVector::new(x.clone())?, sol.iterations)?;
        }
    }
    out.add_file("solution.csv", &table)?;
    out.add_file("trace.csv", &trace)?;

    let n = cases.len();
    out.record("accepted", accepted == n, format!("{accepted}/{n} solves certified at levels {:?}", s.ift.levels));
    out.record("closed-form", closed_err <= 1e-8, format!("max |u - closed form| = {} (<= 1e-8)", e(closed_err)));
    if affine {
        out.record("bisection", bisect_err <= 1e-8, format!("max |u - bisection root| = {} (<= 1e-8)", e(bisect_err)));
        out.record("banach-bound", violations == 0, format!("{violations} violations of the a-posteriori bound"));
    }
    let bound = 10.0 * s.ift.tol;
    out.record("residual", residual <= bound, format!("max |f(x, u)| = {} (<= {})", e(residual), e(bound)));
    Ok(())
}

fn ift_domain(s: &IftDomainSpec, out: &mut ExperimentOutcome) -> Result<()> {
    let problem = ift_problem(&s.ift)?;
    let ray = ScaledVector::new(s.ray.clone())?;
    let profile = domain_probe(&problem, &ray, &s.steps, &solve_options(&s.ift))?;
    out.add_file("profile.csv", &profile.to_table()?)?;
    let largest = profile.largest_accepted().map_or("none".to_string(), |m| m.to_string());
    match s.ift.problem {
        IftProblemKind::Trivial => {
            let all = profile.samples.iter().all(|p| p.accepted && p.u_norm == 0.0);
            out.record(
                "accepted-everywhere",
                all,
                format!("u = 0 certified at every step (largest accepted {largest})"),
            );
        }
        _ => {
            let mut mismatches = Vec::new();
            let mut ratio_err = 0.0f64;
            for p in &profile.samples {
                // φ_x is affine with slope -x per coordinate
                let factor = p.magnitude * ray.max_abs();
                let inside = p.magnitude * ray.norm(0) < problem.x_radius();
                if inside && p.accepted != (factor < 1.0) {
                    mismatches.push(p.magnitude);
                }
                if p.accepted && factor > 0.0 {
                    ratio_err = ratio_err.max((p.ratio_estimate - factor).abs());
                }
                if inside && !p.accepted && !(p.ratio_estimate >= 1.0) {
                    mismatches.push(p.magnitude);
                }
            }
            out.record(
                "profile",
                mismatches.is_empty(),
                format!("accepted exactly where max|x_k| < 1, rejected with ratio >= 1 elsewhere (largest accepted {largest}, mismatches {mismatches:?})"),
            );
            out.record(
                "contraction-factor",
                ratio_err <= 0.05,
                format!("max |ratio - max|x_k|| = {} (<= 0.05)", e(ratio_err)),
            );
        }
    }
    Ok(())
}

/// Closed form `J(x, y)` of a scalar reference problem.
type Exact = Box<dyn Fn(f64, f64) -> f64 + Sync>;

fn frobenius_problem(s: &FrobeniusSpec) -> Result<(FrobeniusProblem, Exact)> {
    Ok(match s.problem {
        FrobeniusProblemKind::Exponential => {
            let y_radius = 2.0 * (1.0 + s.y.abs()) * s.x.abs().exp();
            (frobenius::problems::exponential(s.y, s.x.abs() + 1.0, y_radius)?, Box::new(|x, y| y * x.exp()))
        }
        FrobeniusProblemKind::Constant => {
            let c = s.c;
            (frobenius::problems::constant(c, ScaledVector::zeros(1), 1)?, Box::new(move |x, y| y + c * x))
        }
    })
}

fn frobenius_run(s: &FrobeniusSpec, rng: &mut ChaCha8Rng, out: &mut ExperimentOutcome) -> Result<()> {
    let (problem, exact) = frobenius_problem(s)?;
    let opts = FrobeniusOptions { tol: s.tol, max_iter: s.max_iter, window: s.window };
    let (x, y) = (ScaledVector::scalar(s.x)?, ScaledVector::scalar(s.y)?);
    let sol = solve_frobenius(&problem, &x, &y, s.grid, &opts)?;
    out.add_file("alpha.csv", &sol.alpha.to_table()?)?;
    out.add_file("trace.csv", &sol.trace_table()?)?;
    let j_exact = exact(s.x, s.y);
    let err = (sol.j_value[0] - j_exact).abs();
    out.record("accepted", sol.accepted(), sol.verdict().report_line());
    let bound = match s.problem {
        FrobeniusProblemKind::Exponential => 5e-4,
        FrobeniusProblemKind::Constant => 1e-12,
    };
    out.record("value", err <= bound, format!("|J - exact| = {} at M = {} (<= {})", e(err), s.grid, e(bound)));
    out.record(
        "ode-residual",
        sol.ode_residual.is_finite(),
        format!("ODE residual {} = C / M^2 with C = {:.4}", e(sol.ode_residual), sol.residual_constant),
    );

    let mut grid = CsvTable::new(&["M", "J", "error", "order"]);
    let studies = s
        .grids
        .par_iter()
        .map(|&m| Ok((m, solve_frobenius(&problem, &x, &y, m, &opts)?.j_value[0])))
        .collect::<Result<Vec<_>>>()?;
    let mut min_order = f64::INFINITY;
    for (i, &(m, j)) in studies.iter().enumerate() {
        let err = (j - j_exact).abs();
        let order = (i > 0).then(|| {
            let (pm, pj) = studies[i - 1];
            ((pj - j_exact).abs() / err).ln() / (m as f64 / pm as f64).ln()
        });
        if let Some(o) = order {
            min_order = min_order.min(o);
        }
        grid.push(vec![m.to_string(), fmt_f64(j), fmt_f64(err), order.map(fmt_f64).unwrap_or_default()])?;
    }
    out.add_file("grid.csv", &grid)?;
    if s.problem == FrobeniusProblemKind::Exponential && s.grids.len() >= 2 {
        out.record(
            "grid-order",
            min_order >= 1.8,
            format!("min observed grid order over M = {:?} is {min_order:.3} (>= 1.8)", s.grids),
        );
    }

    let (x0, y0) = problem.base_point();
    let mut identity = CsvTable::new(&["y", "J", "defect"]);
    let mut worst = 0.0f64;
    for _ in 0..s.identity_samples {
        let ys = y0[0] + rng.random_range(-1.0..1.0);
        let j = solve_frobenius(&problem, x0, &ScaledVector::scalar(ys)?, s.grid, &opts)?.j_value[0];
        worst = worst.max((j - ys).abs());
        identity.push(vec![fmt_f64(ys), fmt_f64(j), fmt_f64((j - ys).abs())])?;
    }
    out.add_file("identity.csv", &identity)?;
    if s.identity_samples > 0 {
        out.record(
            "identity",
            worst <= 1e-14,
            format!("max |J(x0, y) - y| = {} over {} samples (<= 1e-14)", e(worst), s.identity_samples),
        );
    }
    Ok(())
}

fn probe(s: &ProbeSpec, out: &mut ExperimentOutcome) -> Result<()> {
    let fem = s.solver.fem_options();
    let mut mesh0 = s.mesh.load()?;
    for _ in 0..s.base_level {
        mesh0 = mesh0.refine()?;
    }
    match s.target {
        ProbeTarget::Linearity => {
            let f0 = Manufactured::sin_sin().load;
            let df = Load::constant(1.0);
            let r =
                scheme_linearity_probe(&mesh0, &f0, &df, s.levels, s.t, &fem, &ProbeConfig::default().with_h0(s.h0))?;
            let mut table = CsvTable::new(&["level", "defect", "relative_defect"]);
            for l in &r.levels {
                table.push(vec![l.level.to_string(), fmt_f64(l.defect), fmt_f64(l.relative_defect)])?;
            }
            out.add_file("linearity.csv", &table)?;
            out.add_text("probe.csv", r.derivative.to_csv()?);
            let bound = 10.0 * s.solver.solver_tol;
            out.record("exact-at-zero", r.exact_at_zero, "Num(f0 + 0 df) reproduces Num(f0) bit for bit");
            out.record(
                "superposition",
                r.max_relative_defect() <= bound,
                format!("max relative superposition defect {} (<= {})", e(r.max_relative_defect()), e(bound)),
            );
            out.record(
                "derivative",
                r.derivative_rel_error <= 1e-6,
                format!(
                    "derivative {} vs |Num(df)| {}: relative error {} (<= 1e-6)",
                    fmt_f64(r.derivative.derivative_estimate),
                    fmt_f64(r.delta_norm),
                    e(r.derivative_rel_error)
                ),
            );
            out.record("smooth", r.derivative.verdict == Verdict::SmoothConsistent, r.derivative.verdict.to_string());
        }
        ProbeTarget::Vertex => {
            let vertex = mesh0
                .find_vertex(s.vertex, 1e-12)
                .ok_or_else(|| Error::InvalidArgument(format!("no vertex at {:?} on the base mesh", s.vertex)))?;
            let p = VertexPerturbation {
                vertex,
                direction: s.direction,
                amplitude: s.amplitude,
                area_floor: s.area_floor,
                samples: s.samples.clone(),
            };
            let reports = vertex_perturbation_probe(
                &mesh0,
                &Load::constant(1.0),
                &p,
                s.levels,
                &fem,
                &ProbeConfig::default().with_h0(s.h0),
            )?;
            let mut summary = CsvTable::new(&["level", "derivative", "observed_order", "verdict"]);
            for (level, r) in &reports {
                out.add_text(&format!("probe_level{level}.csv"), r.to_csv()?);
                summary.push(vec![
                    level.to_string(),
                    fmt_f64(r.derivative_estimate),
                    fmt_f64(r.observed_order),
                    r.verdict.to_string(),
                ])?;
                out.record(
                    &format!("smooth-level{level}"),
                    r.verdict == Verdict::SmoothConsistent,
                    r.verdict.to_string(),
                );
            }
            out.add_file("vertex.csv", &summary)?;
        }
        ProbeTarget::Implicit => {
            let problem = ift::problems::affine(1, 2.0, 100.0, NormScale::default())?;
            let plot = Plot::curve(0.0, 0.9, ScaledVector::scalar)?;
            let cfg = ProbeConfig::default().with_h0(s.h0);
            let r = solution_plot_probe(
                &problem,
                &plot,
                |u: &ScaledVector| u[0],
                &[s.point],
                &[1.0],
                &SolveOptions::default(),
                &cfg,
            )?;
            out.add_text("probe.csv", r.to_csv()?);
            let exact = 1.0 / (1.0 + s.point).powi(2);
            let err = (r.derivative_estimate - exact).abs();
            out.record(
                "derivative",
                err <= 1e-3,
                format!(
                    "du/dx = {} vs 1/(1+x)^2 = {}: |diff| {} (<= 1e-3)",
                    fmt_f64(r.derivative_estimate),
                    fmt_f64(exact),
                    e(err)
                ),
            );
            out.record("smooth", r.verdict == Verdict::SmoothConsistent, r.verdict.to_string());
        }
    }
    Ok(())
}

fn counterexample(s: &CounterexampleSpec, out: &mut ExperimentOutcome) -> Result<()> {
    let (x, y) = (ScaledVector::new(s.x.clone())?, ScaledVector::new(s.y.clone())?);
    let gap = (&y - &x).norm(0);
    let criteria = CauchyCriteria::new(s.tol, s.window, s.max_index)?;
    let x0 = x.clone();
    let dist = move |v: &ScaledVector| (v - &x0).norm(0);

    let lim = limit_plot(x.clone(), y.clone(), criteria)?;
    let r = probe_curve(&lim, &dist, 0.0, &ProbeConfig::default())?;
    out.add_text("limit_probe.csv", r.to_csv()?);
    out.record("limit-jump", r.verdict == Verdict::JumpDetected, format!("lim Γ probe at t = 0: {}", r.verdict));
    let err = (r.value_jump - gap).abs();
    out.record(
        "jump-size",
        err <= 1e-6,
        format!("jump {} vs |y - x| {}: |diff| {} (<= 1e-6)", fmt_f64(r.value_jump), fmt_f64(gap), e(err)),
    );

    let mut seams = CsvTable::new(&["k", "seam", "derivative", "observed_order", "verdict"]);
    let mut rough = Vec::new();
    for k in 0..=s.k_max {
        let plot = index_plot(x.clone(), y.clone(), k)?;
        let (a, b) = transition_interval(k);
        let cfg = ProbeConfig::default().with_h0((b - a) / 64.0);
        for seam in [a, b].into_iter().filter(|&t| t < 1.0) {
            let r = probe_curve(&plot, &dist, seam, &cfg)?;
            if r.verdict != Verdict::SmoothConsistent {
                rough.push((k, seam));
            }
            seams.push(vec![
                k.to_string(),
                fmt_f64(seam),
                fmt_f64(r.derivative_estimate),
                fmt_f64(r.observed_order),
                r.verdict.to_string(),
            ])?;
        }
    }
    out.add_file("seams.csv", &seams)?;
    out.record(
        "index-smooth",
        rough.is_empty(),
        format!("ev_k ∘ Γ smooth at every seam for k <= {} (non-smooth: {rough:?})", s.k_max),
    );
    Ok(())
}
