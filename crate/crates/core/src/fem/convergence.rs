use std::sync::Arc;

use crate::cauchy::{CauchyCriteria, CauchyMonitor, CauchyVerdict};
use crate::error::{Error, Result};
use crate::experiment::csvio::{fmt_f64, CsvTable};
use crate::fem::assemble::{Load, Manufactured};
use crate::fem::mesh::Triangulation;
use crate::fem::solve::{energy_norm, error_norms, prolong_to, solve_poisson, ErrorNorms, FemOptions, FemSolution};

/// Tolerance for certifying the refinement sequence in the energy norm.
///
/// Five levels give four differences, all inside the confirmation window;
/// on the unit square with `‖u‖ ≈ 2.2` they start near 1.2 and halve.
pub const DEFAULT_SCHEME_TOL: f64 = 1.0;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SchemeOptions {
    pub fem: FemOptions,
    pub tol: f64,
    pub window: usize,
}

impl Default for SchemeOptions {
    fn default() -> Self {
        Self { fem: FemOptions::default(), tol: DEFAULT_SCHEME_TOL, window: 3 }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct DiagnosticRow {
    pub level: usize,
    pub ndof: usize,
    pub h_max: f64,
    pub errors: Option<ErrorNorms>,
    /// `‖u_n - u_{n-1}‖` in the energy norm on the finest mesh.
    pub cauchy_diff: Option<f64>,
    pub ratio: Option<f64>,
}

#[derive(Debug, Clone)]
pub struct SchemeRun {
    pub meshes: Vec<Arc<Triangulation>>,
    /// Solutions on levels `1..=L`.
    pub solutions: Vec<FemSolution>,
    pub rows: Vec<DiagnosticRow>,
    pub verdict: CauchyVerdict,
    /// Error that stopped the run early, if any.
    pub failure: Option<Error>,
}

impl SchemeRun {
    /// Columns `level, ndof, h_max, H1_error, L2_error, cauchy_diff, ratio`.
    pub fn diagnostic_table(&self) -> Result<CsvTable> {
        let mut table = CsvTable::new(&["level", "ndof", "h_max", "H1_error", "L2_error", "cauchy_diff", "ratio"]);
        let opt = |v: Option<f64>| v.map(fmt_f64).unwrap_or_default();
        for r in &self.rows {
            table.push(vec![
                r.level.to_string(),
                r.ndof.to_string(),
                fmt_f64(r.h_max),
                opt(r.errors.map(|e| e.h1)),
                opt(r.errors.map(|e| e.l2)),
                opt(r.cauchy_diff),
                opt(r.ratio),
            ])?;
        }
        Ok(table)
    }

    fn row(&self, level: usize) -> Option<&DiagnosticRow> {
        self.rows.iter().find(|r| r.level == level)
    }

    /// Smallest `(H¹, L²)` order `log₂(e_n / e_{n+1})` over consecutive
    /// levels in `from..=to`.
    pub fn min_orders(&self, from: usize, to: usize) -> Option<(f64, f64)> {
        let mut out = (f64::INFINITY, f64::INFINITY);
        for n in from..to {
            let (a, b) = (self.row(n)?.errors?, self.row(n + 1)?.errors?);
            out.0 = out.0.min((a.h1 / b.h1).log2());
            out.1 = out.1.min((a.l2 / b.l2).log2());
        }
        (from < to).then_some(out)
    }
}

/// Solves on `levels` successive refinements of `mesh0` and certifies the
/// solutions, prolonged to the finest mesh, as a Cauchy sequence in the
/// energy norm. With fewer than `window + 2` levels the verdict stays
/// inconclusive.
pub fn run_scheme(
    mesh0: &Triangulation,
    load: &Load,
    levels: usize,
    opts: &SchemeOptions,
    exact: Option<&Manufactured>,
) -> Result<SchemeRun> {
    if levels < 2 {
        return Err(Error::InvalidArgument("at least two levels are required".into()));
    }
    let criteria = CauchyCriteria::new(opts.tol, opts.window, levels.max(opts.window + 2))?;
    let mut monitor = CauchyMonitor::new(1, criteria)?;
    let meshes = mesh0.hierarchy(levels)?;
    let finest = &meshes[levels];

    let mut solutions: Vec<FemSolution> = Vec::new();
    let mut rows: Vec<DiagnosticRow> = Vec::new();
    let mut previous: Option<Vec<f64>> = None;
    let mut failure = None;
    for level in 1..=levels {
        let sol = match solve_poisson(Arc::clone(&meshes[level]), load, &opts.fem) {
            Ok(s) => s,
            Err(e) => {
                log::warn!("level {level} failed: {e}");
                failure = Some(e);
                break;
            }
        };
        let fine = prolong_to(&meshes, level, &sol.nodal)?;
        let cauchy_diff = previous.as_ref().map(|p| {
            let diff: Vec<f64> = fine.iter().zip(p).map(|(a, b)| a - b).collect();
            energy_norm(finest, &diff)
        });
        if let Some(d) = cauchy_diff {
            monitor.push(d);
        }
        let ratio = match (rows.last().and_then(|r| r.cauchy_diff), cauchy_diff) {
            (Some(a), Some(b)) => Some(b / a),
            _ => None,
        };
        rows.push(DiagnosticRow {
            level,
            ndof: sol.ndof(),
            h_max: meshes[level].h_max(),
            errors: exact.map(|m| error_norms(&meshes[level], &sol.nodal, m)),
            cauchy_diff,
            ratio,
        });
        previous = Some(fine);
        solutions.push(sol);
    }
    Ok(SchemeRun { meshes, solutions, rows, verdict: monitor.verdict(), failure })
}
