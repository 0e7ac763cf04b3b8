//! Acceptance suite: one PASS/FAIL line per criterion, non-zero exit on any
//! failure. Run with `cargo test -p cauchy-core --test acceptance`.

use std::process::ExitCode;
use std::time::{Duration, Instant};

use cauchy_core::cauchy::{
    index_plot, is_cauchy, limit_plot, transition_interval, CauchyCriteria, CauchySequence, CauchyStatus,
};
use cauchy_core::experiment::csvio::CsvTable;
use cauchy_core::experiment::{run_experiment, ExperimentConfig};
use cauchy_core::fem::{
    run_scheme, scheme_linearity_probe, FemOptions, Load, Manufactured, SchemeOptions, Triangulation,
};
use cauchy_core::frobenius::{problems as frob, solve_frobenius, FrobeniusOptions};
use cauchy_core::ift::{domain_probe, phi_step, problems::affine, solve_implicit, SolveOptions};
use cauchy_core::ilb::{probe_curve, ProbeConfig, Verdict};
use cauchy_core::{NormScale, Result, ScaledVector};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

const SEED: u64 = 0x5eed;
const SOLVER_TOL: f64 = 1e-10;

type Criterion<'a> = (&'static str, Box<dyn FnOnce() -> Result<Outcome> + 'a>);

struct Outcome {
    passed: bool,
    detail: String,
}

fn outcome(passed: bool, detail: impl Into<String>) -> Result<Outcome> {
    Ok(Outcome { passed, detail: detail.into() })
}

fn timed<T>(f: impl FnOnce() -> T) -> (T, Duration) {
    let start = Instant::now();
    let out = f();
    (out, start.elapsed())
}

fn s(v: f64) -> ScaledVector {
    ScaledVector::scalar(v).unwrap()
}

/// Root of the increasing map `y ↦ (1 + x) y - x` on `[lo, hi]`.
fn bisection(x: f64, mut lo: f64, mut hi: f64) -> f64 {
    let g = |y: f64| y + x * y - x;
    while hi - lo > 4.0 * f64::EPSILON * hi.abs().max(lo.abs()).max(1.0) {
        let mid = 0.5 * (lo + hi);
        if g(mid) < 0.0 {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    0.5 * (lo + hi)
}

fn ift_oracles() -> Result<Outcome> {
    let problem = affine(1, 2.0, 100.0, NormScale::default())?;
    let mut rng = ChaCha8Rng::seed_from_u64(SEED);
    let xs: Vec<f64> = (0..20).map(|_| rng.random_range(-0.9..0.9)).collect();
    let (solutions, elapsed) = timed(|| {
        xs.iter().map(|&x| solve_implicit(&problem, &s(x), &SolveOptions::default())).collect::<Result<Vec<_>>>()
    });
    let solutions = solutions?;
    let mut worst: f64 = 0.0;
    let mut certified = 0;
    for (&x, sol) in xs.iter().zip(&solutions) {
        let u = sol.u_value[0];
        worst = worst.max((u - x / (1.0 + x)).abs()).max((u - bisection(x, -100.0, 100.0)).abs());
        certified += usize::from(sol.accepted());
    }
    outcome(
        certified == 20 && worst <= 1e-8 && elapsed < Duration::from_secs(1),
        format!("{certified}/20 certified, max |u - oracle| = {worst:.2e} (<= 1e-8), {elapsed:.2?} (< 1 s)"),
    )
}

fn ift_domain() -> Result<Outcome> {
    let problem = affine(1, 2.0, 100.0, NormScale::default())?;
    let steps = [0.05, 0.1, 0.3, 0.5, 0.7, 0.9, 1.5];
    let mut mismatches = 0;
    let mut ratio_err: f64 = 0.0;
    let mut rejected_ratio = f64::INFINITY;
    for ray in [1.0, -1.0] {
        let profile = domain_probe(&problem, &s(ray), &steps, &SolveOptions::default())?;
        for p in &profile.samples {
            if p.magnitude <= 0.9 {
                mismatches += usize::from(!p.accepted);
                ratio_err = ratio_err.max((p.ratio_estimate - p.magnitude).abs());
            } else {
                mismatches += usize::from(p.accepted);
                rejected_ratio = rejected_ratio.min(p.ratio_estimate);
            }
        }
    }
    outcome(
        mismatches == 0 && rejected_ratio >= 1.0 && ratio_err <= 0.05,
        format!(
            "|x| <= 0.9 accepted and x = ±1.5 rejected ({mismatches} mismatches), rejected ratio {rejected_ratio:.3} (>= 1), max |q - |x|| = {ratio_err:.2e} (<= 0.05)"
        ),
    )
}

fn banach_bound() -> Result<Outcome> {
    let mut rng = ChaCha8Rng::seed_from_u64(SEED + 3);
    let mut cases: Vec<Vec<f64>> = (0..20).map(|_| vec![rng.random_range(-0.9..0.9)]).collect();
    cases.extend((0..10).map(|_| (0..6).map(|_| rng.random_range(-0.9..0.9)).collect()));
    let (mut checked, mut violations, mut runs) = (0, 0, 0);
    for x in cases {
        let problem = affine(x.len(), 2.0, 100.0, NormScale::default())?;
        let xv = ScaledVector::new(x.clone())?;
        let sol = solve_implicit(&problem, &xv, &SolveOptions::default())?;
        if !sol.accepted() {
            continue;
        }
        runs += 1;
        let q = xv.max_abs();
        let u = ScaledVector::new(x.iter().map(|&v| v / (1.0 + v)).collect())?;
        // rounding of the closed form and of the iterates
        let slack = 8.0 * f64::EPSILON * (1.0 + u.norm(0)) / (1.0 - q);
        let mut y = phi_step(&problem, &xv, &ScaledVector::zeros(x.len()))?;
        let y1 = y.norm(0);
        for n in 1..=sol.iterations {
            checked += 1;
            violations += usize::from((&u - &y).norm(0) > q.powi(n as i32) / (1.0 - q) * y1 + slack);
            y = phi_step(&problem, &xv, &y)?;
        }
    }
    outcome(
        violations == 0 && runs == 30,
        format!("{violations} violations over {checked} iterates of {runs} accepted runs"),
    )
}

fn frobenius_exponential() -> Result<Outcome> {
    let problem = frob::exponential(1.0, 2.0, 10.0)?;
    let opts = FrobeniusOptions::default();
    let e = std::f64::consts::E;
    let (errors, elapsed) = timed(|| {
        [50, 100, 200, 400]
            .iter()
            .map(|&m| Ok((m, (solve_frobenius(&problem, &s(1.0), &s(1.0), m, &opts)?.j_value[0] - e).abs())))
            .collect::<Result<Vec<_>>>()
    });
    let errors = errors?;
    let at200 = errors[2].1;
    let order = errors.windows(2).map(|w| (w[0].1 / w[1].1).log2()).fold(f64::INFINITY, f64::min);
    outcome(
        at200 <= 5e-4 && order >= 1.8 && elapsed < Duration::from_secs(1),
        format!("|J - e| = {at200:.2e} at M = 200 (<= 5e-4), grid order {order:.3} (>= 1.8), {elapsed:.2?} (< 1 s)"),
    )
}

fn frobenius_identity() -> Result<Outcome> {
    let problem = frob::exponential(0.0, 2.0, 10.0)?;
    let mut rng = ChaCha8Rng::seed_from_u64(SEED + 5);
    let mut worst: f64 = 0.0;
    for _ in 0..10 {
        let y = rng.random_range(-5.0..5.0);
        let j = solve_frobenius(&problem, &s(0.0), &s(y), 200, &FrobeniusOptions::default())?.j_value[0];
        worst = worst.max((j - y).abs());
    }
    outcome(worst <= 1e-14, format!("max |J(x0, y) - y| = {worst:.2e} over 10 samples (<= 1e-14)"))
}

fn fem_run() -> Result<(cauchy_core::fem::SchemeRun, Duration)> {
    let m = Manufactured::sin_sin();
    let pool = rayon::ThreadPoolBuilder::new().num_threads(1).build().expect("thread pool");
    let (run, elapsed) = pool.install(|| {
        timed(|| run_scheme(&Triangulation::unit_square(), &m.load, 5, &SchemeOptions::default(), Some(&m)))
    });
    Ok((run?, elapsed))
}

fn fem_convergence(run: &cauchy_core::fem::SchemeRun, elapsed: Duration) -> Result<Outcome> {
    let (h1, l2) = run.min_orders(2, 5).unwrap_or((f64::NAN, f64::NAN));
    let center = (run.solutions[3].eval([0.5, 0.5])? - 1.0).abs();
    outcome(
        l2 >= 1.8 && h1 >= 0.9 && center <= 2e-2 && elapsed < Duration::from_secs(30),
        format!(
            "orders L2 {l2:.3} (>= 1.8), H1 {h1:.3} (>= 0.9), |e(0.5,0.5)| at level 4 = {center:.2e} (<= 2e-2), {elapsed:.2?} single-threaded (< 30 s)"
        ),
    )
}

fn fem_cauchy(run: &cauchy_core::fem::SchemeRun) -> Result<Outcome> {
    let v = &run.verdict;
    outcome(
        v.status == CauchyStatus::Accepted && (0.4..=0.6).contains(&v.ratio_estimate),
        format!("{} with ratio {:.4} (in [0.4, 0.6])", v.status, v.ratio_estimate),
    )
}

fn scheme_linearity() -> Result<Outcome> {
    let fem =
        FemOptions { cg: cauchy_core::fem::CgOptions { rtol: SOLVER_TOL, ..Default::default() }, ..Default::default() };
    let r = scheme_linearity_probe(
        &Triangulation::unit_square(),
        &Manufactured::sin_sin().load,
        &Load::constant(1.0),
        4,
        1.0,
        &fem,
        &ProbeConfig::default().with_h0(0.25),
    )?;
    let defect = r.max_relative_defect();
    let absolute = r.levels.iter().map(|l| l.defect).fold(0.0, f64::max);
    outcome(
        r.exact_at_zero && defect <= 10.0 * SOLVER_TOL && r.derivative_rel_error <= 1e-6,
        format!(
            "superposition defect {defect:.2e} relative, {absolute:.2e} absolute (<= 1e-9), derivative relative error {:.2e} (<= 1e-6)",
            r.derivative_rel_error
        ),
    )
}

fn counterexample() -> Result<Outcome> {
    let (x, y) = (s(0.25), s(1.75));
    let x0 = x.clone();
    let dist = move |v: &ScaledVector| (v - &x0).norm(0);
    let lim = limit_plot(x.clone(), y.clone(), CauchyCriteria::new(1e-12, 3, 20)?)?;
    let r = probe_curve(&lim, &dist, 0.0, &ProbeConfig::default())?;
    let jump_err = (r.value_jump - 1.5).abs();
    let mut seams = 0;
    let mut rough = Vec::new();
    for k in 0..=10 {
        let plot = index_plot(x.clone(), y.clone(), k)?;
        let (a, b) = transition_interval(k);
        let cfg = ProbeConfig::default().with_h0((b - a) / 64.0);
        for seam in [a, b].into_iter().filter(|&t| t < 1.0) {
            seams += 1;
            if probe_curve(&plot, &dist, seam, &cfg)?.verdict != Verdict::SmoothConsistent {
                rough.push((k, seam));
            }
        }
    }
    outcome(
        r.verdict == Verdict::JumpDetected && jump_err <= 1e-6 && rough.is_empty(),
        format!("lim Γ at t = 0: {} with |jump - |y - x|| = {jump_err:.1e}; {seams} seams for k <= 10, non-smooth {rough:?}", r.verdict),
    )
}

fn detector_honesty() -> Result<Outcome> {
    let geometric = CauchySequence::scalar(|n| 1.0 - 0.5f64.powi(n as i32));
    let g = is_cauchy(&geometric, 0, &CauchyCriteria::new(1e-10, 3, 200)?)?.status;
    let linear = CauchySequence::scalar(|n| n as f64);
    let d = is_cauchy(&linear, 0, &CauchyCriteria::new(1e-10, 3, 200)?)?.status;
    let harmonic = CauchySequence::recursive(s(0.0), |n, x| Ok(x.map(|v| v + 1.0 / (n as f64 + 1.0))));
    let mut harmonic_status = Vec::new();
    for tol in [1e-1, 1e-2, 1e-4, 1e-8] {
        harmonic_status.push(is_cauchy(&harmonic, 0, &CauchyCriteria::new(tol, 3, 10_000)?)?.status);
    }
    outcome(
        g == CauchyStatus::Accepted
            && d == CauchyStatus::Diverging
            && harmonic_status.iter().all(|&h| h == CauchyStatus::Inconclusive),
        format!("geometric {g}, x_n = n {d}, harmonic up to 10^4 at tol 1e-1..1e-8 {harmonic_status:?}"),
    )
}

fn mesh_combinatorics() -> Result<Outcome> {
    let mut problems = Vec::new();
    for (name, mesh0) in [("square", Triangulation::unit_square()), ("l-shape", Triangulation::l_shape())] {
        let levels = mesh0.hierarchy(5)?;
        for w in levels.windows(2) {
            let (c, f) = (&w[0], &w[1]);
            if f.num_vertices() != c.num_vertices() + c.num_edges() || f.num_triangles() != 4 * c.num_triangles() {
                problems.push(format!("{name} level {}: counts", f.level()));
            }
        }
        for m in &levels {
            if let Err(e) = m.validate() {
                problems.push(format!("{name} level {}: {e}", m.level()));
            }
            if (m.total_area() - mesh0.total_area()).abs() > 1e-12 {
                problems.push(format!("{name} level {}: area", m.level()));
            }
        }
    }
    outcome(problems.is_empty(), format!("square and L-shape over 5 refinements, violations {problems:?}"))
}

fn reproducibility() -> Result<Outcome> {
    let config = ExperimentConfig::parse(include_str!("../../../configs/all.cfg"))?;
    let (a, b) = (run_experiment(&config)?, run_experiment(&config)?);
    let (dir_a, dir_b) = (tempfile::tempdir()?, tempfile::tempdir()?);
    let paths = a.write(dir_a.path())?;
    b.write(dir_b.path())?;
    let (mut files, mut differing, mut not_round_trip) = (0, Vec::new(), Vec::new());
    for p in paths.iter().filter(|p| p.extension().is_some_and(|e| e == "csv")) {
        files += 1;
        let rel = p.strip_prefix(dir_a.path()).expect("inside the bundle");
        let (x, y) = (std::fs::read(p)?, std::fs::read(dir_b.path().join(rel))?);
        if x != y {
            differing.push(rel.display().to_string());
        }
        let text = String::from_utf8_lossy(&x);
        if CsvTable::parse(&text)?.to_csv_string()? != text {
            not_round_trip.push(rel.display().to_string());
        }
    }
    outcome(
        files > 0 && differing.is_empty() && not_round_trip.is_empty(),
        format!("{files} CSV files byte-identical across two runs (differing {differing:?}, not round-tripping {not_round_trip:?})"),
    )
}

fn main() -> ExitCode {
    let fem = fem_run();
    let criteria: Vec<Criterion> = vec![
        ("ift-oracle-agreement", Box::new(ift_oracles)),
        ("ift-domain-profile", Box::new(ift_domain)),
        ("banach-a-posteriori-bound", Box::new(banach_bound)),
        ("frobenius-exponential", Box::new(frobenius_exponential)),
        ("frobenius-identity", Box::new(frobenius_identity)),
        (
            "fem-convergence",
            Box::new(|| match &fem {
                Ok((run, t)) => fem_convergence(run, *t),
                Err(e) => Err(e.clone()),
            }),
        ),
        (
            "fem-cauchy-certification",
            Box::new(|| match &fem {
                Ok((run, _)) => fem_cauchy(run),
                Err(e) => Err(e.clone()),
            }),
        ),
        ("scheme-linearity", Box::new(scheme_linearity)),
        ("counterexample", Box::new(counterexample)),
        ("detector-honesty", Box::new(detector_honesty)),
        ("mesh-combinatorics", Box::new(mesh_combinatorics)),
        ("reproducibility", Box::new(reproducibility)),
    ];
    let total = criteria.len();
    let mut failed = 0;
    for (i, (name, check)) in criteria.into_iter().enumerate() {
        let (passed, detail) = match check() {
            Ok(o) => (o.passed, o.detail),
            Err(e) => (false, format!("error: {e}")),
        };
        failed += usize::from(!passed);
        println!("{} {:02} {name}: {detail}", if passed { "PASS" } else { "FAIL" }, i + 1);
    }
    println!("acceptance: {}/{total} criteria passed", total - failed);
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
