//! Cauchy certification from consecutive differences.
//!
//! Small consecutive differences alone do not make a sequence Cauchy (the
//! harmonic partial sums are the standard counterexample). A window is
//! accepted only when it also shows a contraction ratio `q < 1` and the
//! geometric tail bound `q/(1-q) · d_N` is below tolerance. Every solver in
//! the crate feeds its differences through [`CauchyMonitor`].

use std::fmt;

use crate::cauchy::CauchySequence;
use crate::error::{Error, Result};
use crate::experiment::csvio::{fmt_f64, CsvTable};
use crate::ilb::ScaledVector;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CauchyCriteria {
    pub tol: f64,
    /// Confirmation window length `w`.
    pub window: usize,
    /// Largest term index examined.
    pub max_index: usize,
    /// Acceptance is not considered before this term index.
    pub burn_in: usize,
}

impl CauchyCriteria {
    pub fn new(tol: f64, window: usize, max_index: usize) -> Result<Self> {
        let c = Self { tol, window, max_index, burn_in: 0 };
        c.validate()?;
        Ok(c)
    }

    pub fn with_burn_in(mut self, burn_in: usize) -> Self {
        self.burn_in = burn_in;
        self
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.tol > 0.0 && self.tol.is_finite()) {
            return Err(Error::InvalidArgument(format!("tol must be positive, got {}", self.tol)));
        }
        if self.window < 3 {
            return Err(Error::InvalidArgument(format!("window must be >= 3, got {}", self.window)));
        }
        if self.max_index < self.window + 2 {
            return Err(Error::InvalidArgument(format!(
                "max_index {} must be >= window + 2 = {}",
                self.max_index,
                self.window + 2
            )));
        }
        Ok(())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum CauchyStatus {
    Accepted,
    Diverging,
    Inconclusive,
}

impl CauchyStatus {
    pub fn as_str(self) -> &'static str {
        match self {
            CauchyStatus::Accepted => "cauchy-accepted",
            CauchyStatus::Diverging => "diverging",
            CauchyStatus::Inconclusive => "inconclusive",
        }
    }
}

impl fmt::Display for CauchyStatus {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct CauchyVerdict {
    pub status: CauchyStatus,
    pub level: u32,
    /// First difference index of the accepting window.
    pub n_star: Option<usize>,
    /// Median ratio `d_{m+1}/d_m` over the last window; `NaN` if too short.
    pub ratio_estimate: f64,
    /// `q/(1-q) · d_N`, present only when `q < 1`.
    pub tail_bound: Option<f64>,
    /// `d_n = ‖x_{n+1} - x_n‖_level` for every examined `n`.
    pub differences: Vec<f64>,
}

impl CauchyVerdict {
    pub fn accepted(&self) -> bool {
        self.status == CauchyStatus::Accepted
    }

    /// Index of the term returned as the limit stand-in (`N* + w`).
    pub fn limit_index(&self) -> Option<usize> {
        self.n_star.map(|_| self.differences.len())
    }

    /// `status=... level=... n_star=... ratio=... tail_bound=... terms=...`
    pub fn report_line(&self) -> String {
        let n_star = self.n_star.map_or_else(|| "-".to_string(), |n| n.to_string());
        let tail = self.tail_bound.map_or_else(|| "-".to_string(), fmt_f64);
        format!(
            "status={} level={} n_star={} ratio={} tail_bound={} terms={}",
            self.status,
            self.level,
            n_star,
            fmt_f64(self.ratio_estimate),
            tail,
            self.differences.len() + 1
        )
    }

    /// Trace with columns `n, d_n, ratio, level`.
    pub fn trace_table(&self) -> Result<CsvTable> {
        let mut table = CsvTable::new(&["n", "d_n", "ratio", "level"]);
        for (n, &d) in self.differences.iter().enumerate() {
            let ratio = if n == 0 { String::new() } else { fmt_f64(ratio(self.differences[n - 1], d)) };
            table.push(vec![n.to_string(), fmt_f64(d), ratio, self.level.to_string()])?;
        }
        Ok(table)
    }
}

fn ratio(prev: f64, next: f64) -> f64 {
    if prev > 0.0 {
        next / prev
    } else if next == 0.0 {
        0.0
    } else {
        f64::INFINITY
    }
}

fn median(values: &mut [f64]) -> f64 {
    values.sort_by(|a, b| a.total_cmp(b));
    let n = values.len();
    if n % 2 == 1 {
        values[n / 2]
    } else {
        0.5 * (values[n / 2 - 1] + values[n / 2])
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
struct Window {
    q: f64,
    min_ratio: f64,
    accepting: bool,
}

/// Incremental Cauchy detector fed one difference norm at a time.
#[derive(Debug, Clone)]
pub struct CauchyMonitor {
    level: u32,
    criteria: CauchyCriteria,
    diffs: Vec<f64>,
    stationary: bool,
}

impl CauchyMonitor {
    pub fn new(level: u32, criteria: CauchyCriteria) -> Result<Self> {
        criteria.validate()?;
        Ok(Self { level, criteria, diffs: Vec::new(), stationary: false })
    }

    pub fn level(&self) -> u32 {
        self.level
    }

    pub fn criteria(&self) -> &CauchyCriteria {
        &self.criteria
    }

    pub fn differences(&self) -> &[f64] {
        &self.diffs
    }

    /// Records `d_n` and reports whether the window ending at it accepts.
    pub fn push(&mut self, d: f64) -> bool {
        self.diffs.push(d);
        self.window().is_some_and(|w| w.accepting)
    }

    /// Marks the sequence as exactly stationary from now on. Valid only for
    /// iterated maps, where `x_{n+1} = x_n` forces every later difference
    /// to vanish.
    pub fn mark_stationary(&mut self) {
        self.stationary = true;
    }

    fn window(&self) -> Option<Window> {
        let w = self.criteria.window;
        let n = self.diffs.len();
        if n < w + 1 {
            return None;
        }
        let tail = &self.diffs[n - w - 1..];
        let mut ratios: Vec<f64> = tail.windows(2).map(|p| ratio(p[0], p[1])).collect();
        let min_ratio = ratios.iter().copied().fold(f64::INFINITY, f64::min);
        let q = median(&mut ratios);
        let last = tail[w];
        let small = tail[1..].iter().all(|&d| d <= self.criteria.tol);
        let tail_bound = if q < 1.0 { q / (1.0 - q) * last } else { f64::INFINITY };
        // the term returned as the limit is x_n; burn-in applies to it
        let accepting = n >= self.criteria.burn_in && q < 1.0 && small && tail_bound <= self.criteria.tol;
        Some(Window { q, min_ratio, accepting })
    }

    pub fn verdict(&self) -> CauchyVerdict {
        let n = self.diffs.len();
        if self.stationary {
            return CauchyVerdict {
                status: CauchyStatus::Accepted,
                level: self.level,
                n_star: Some(n.saturating_sub(1)),
                ratio_estimate: 0.0,
                tail_bound: Some(0.0),
                differences: self.diffs.clone(),
            };
        }
        let base = CauchyVerdict {
            status: CauchyStatus::Inconclusive,
            level: self.level,
            n_star: None,
            ratio_estimate: f64::NAN,
            tail_bound: None,
            differences: self.diffs.clone(),
        };
        let Some(window) = self.window() else {
            return base;
        };
        let last = self.diffs[n - 1];
        let tail_bound = (window.q < 1.0).then(|| window.q / (1.0 - window.q) * last);
        let status = if window.accepting {
            CauchyStatus::Accepted
        } else if window.min_ratio >= 1.0 - self.criteria.tol && last > self.criteria.tol {
            CauchyStatus::Diverging
        } else {
            CauchyStatus::Inconclusive
        };
        CauchyVerdict {
            status,
            n_star: window.accepting.then(|| n - self.criteria.window),
            ratio_estimate: window.q,
            tail_bound,
            ..base
        }
    }
}

/// Examines `x_0 ..= x_max_index` at one norm level, stopping at the first
/// accepting window.
pub fn is_cauchy(seq: &CauchySequence, level: u32, criteria: &CauchyCriteria) -> Result<CauchyVerdict> {
    let mut monitor = CauchyMonitor::new(level, *criteria)?;
    let mut prev = seq.ev(0)?;
    for n in 0..criteria.max_index {
        let next = seq.ev(n + 1)?;
        if monitor.push((&next - &prev).norm(level)) {
            break;
        }
        prev = next;
    }
    Ok(monitor.verdict())
}

#[derive(Debug, Clone, PartialEq)]
pub struct LimitEstimate {
    pub value: ScaledVector,
    pub tail_bound: f64,
    pub verdict: CauchyVerdict,
}

/// Stand-in for `lim x_n`: the term `x_{N*+w}` of an accepted window.
pub fn limit_estimate(seq: &CauchySequence, level: u32, criteria: &CauchyCriteria) -> Result<LimitEstimate> {
    let verdict = is_cauchy(seq, level, criteria)?;
    limit_from_verdict(seq, verdict)
}

pub fn limit_from_verdict(seq: &CauchySequence, verdict: CauchyVerdict) -> Result<LimitEstimate> {
    match (verdict.status, verdict.limit_index(), verdict.tail_bound) {
        (CauchyStatus::Accepted, Some(index), Some(tail_bound)) => {
            Ok(LimitEstimate { value: seq.ev(index)?, tail_bound, verdict })
        }
        _ => Err(Error::NotCauchy(verdict.report_line())),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn criteria(tol: f64, max_index: usize) -> CauchyCriteria {
        CauchyCriteria::new(tol, 3, max_index).unwrap()
    }

    #[test]
    fn geometric_sequence_is_accepted() {
        let seq = CauchySequence::scalar(|n| 1.0 - 0.5f64.powi(n as i32));
        let v = is_cauchy(&seq, 0, &criteria(1e-8, 200)).unwrap();
        assert_eq!(v.status, CauchyStatus::Accepted);
        assert!((v.ratio_estimate - 0.5).abs() < 1e-12);
        // d_n = 2^-(n+1) <= 1e-8 from n = 26 on; the window is d_26..d_28
        assert_eq!(v.n_star, Some(26));
        let lim = limit_from_verdict(&seq, v).unwrap();
        assert!((lim.value[0] - 1.0).abs() <= 1e-8);
        assert!((1.0 - lim.value[0]).abs() <= lim.tail_bound * (1.0 + 1e-12));
    }

    #[test]
    fn identity_sequence_diverges() {
        let seq = CauchySequence::scalar(|n| n as f64);
        let v = is_cauchy(&seq, 0, &criteria(1e-8, 50)).unwrap();
        assert_eq!(v.status, CauchyStatus::Diverging);
        assert_eq!(v.ratio_estimate, 1.0);
        assert!(v.tail_bound.is_none());
    }

    #[test]
    fn harmonic_sums_stay_inconclusive() {
        let seq = CauchySequence::recursive(ScaledVector::scalar(0.0).unwrap(), |n, x| {
            Ok(x.map(|s| s + 1.0 / (n as f64 + 1.0)))
        });
        for tol in [1e-8, 1e-4, 1e-2] {
            let v = is_cauchy(&seq, 0, &criteria(tol, 10_000)).unwrap();
            assert_ne!(v.status, CauchyStatus::Accepted, "tol {tol}");
            if tol == 1e-8 {
                assert_eq!(v.status, CauchyStatus::Inconclusive);
                assert!(v.ratio_estimate > 0.999 && v.ratio_estimate < 1.0);
            }
        }
    }

    #[test]
    fn constant_sequence_limit_is_exact() {
        let c = ScaledVector::new(vec![0.25, -7.0, 3.5]).unwrap();
        let seq = CauchySequence::constant(c.clone());
        let lim = limit_estimate(&seq, 2, &criteria(1e-12, 10)).unwrap();
        assert_eq!(lim.value, c);
        assert_eq!(lim.tail_bound, 0.0);
    }

    #[test]
    fn two_component_limit() {
        let seq = CauchySequence::from_fn(|n| {
            let n = n as i32;
            ScaledVector::new(vec![1.0 - 3f64.powi(-n), 2.0 - 2f64.powi(-n)])
        });
        let tol = 1e-10;
        let lim = limit_estimate(&seq, 0, &criteria(tol, 200)).unwrap();
        assert!((lim.value[0] - 1.0).abs() <= tol);
        assert!((lim.value[1] - 2.0).abs() <= tol);
    }

    #[test]
    fn limit_refuses_non_cauchy_data() {
        let seq = CauchySequence::scalar(|n| n as f64);
        assert!(matches!(limit_estimate(&seq, 0, &criteria(1e-6, 30)), Err(Error::NotCauchy(_))));
    }

    #[test]
    fn burn_in_delays_acceptance() {
        // constant for 40 terms, then jumps once
        let seq = CauchySequence::scalar(|n| if n < 40 { 0.0 } else { 1.0 });
        let early = limit_estimate(&seq, 0, &criteria(1e-9, 100)).unwrap();
        assert_eq!(early.value[0], 0.0);
        let late = limit_estimate(&seq, 0, &criteria(1e-9, 100).with_burn_in(45)).unwrap();
        assert_eq!(late.value[0], 1.0);
    }

    #[test]
    fn criteria_validation() {
        assert!(CauchyCriteria::new(0.0, 3, 10).is_err());
        assert!(CauchyCriteria::new(1e-3, 2, 10).is_err());
        assert!(CauchyCriteria::new(1e-3, 3, 4).is_err());
        assert!(CauchyCriteria::new(1e-3, 3, 5).is_ok());
    }

    #[test]
    fn poisoned_terms_propagate() {
        let seq = CauchySequence::scalar(|n| if n == 3 { f64::INFINITY } else { 0.0 });
        let c = CauchyCriteria { burn_in: 10, ..criteria(1e-3, 20) };
        assert!(matches!(is_cauchy(&seq, 0, &c), Err(Error::PoisonedTerm { index: 3, .. })));
    }

    #[test]
    fn trace_and_report_formats() {
        let seq = CauchySequence::scalar(|n| 0.5f64.powi(n as i32));
        let v = is_cauchy(&seq, 1, &criteria(1e-3, 40)).unwrap();
        let table = v.trace_table().unwrap();
        assert_eq!(table.header(), &["n", "d_n", "ratio", "level"]);
        assert_eq!(table.rows().len(), v.differences.len());
        assert!(v.report_line().starts_with("status=cauchy-accepted level=1 "));
    }

    proptest! {
        // x_n = c (1 - r^n): the true limit c lies within the reported tail
        // bound of every term past the confirmation window.
        #[test]
        fn tail_bound_holds_on_geometric_families(
            coeffs in prop::collection::vec(-10.0f64..10.0, 1..6),
            r in 0.05f64..0.9,
            level in 0u32..3,
        ) {
            let c = ScaledVector::new(coeffs).unwrap();
            let limit = c.clone();
            let seq = CauchySequence::from_fn(move |n| Ok(c.scale(1.0 - r.powi(n as i32))));
            let crit = CauchyCriteria::new(1e-9, 3, 2000).unwrap();
            let est = limit_estimate(&seq, level, &crit).unwrap();
            let slack = 1e-12 * (1.0 + limit.norm(level));
            prop_assert!((&limit - &est.value).norm(level) <= est.tail_bound + slack);
            let q = est.verdict.ratio_estimate;
            let n_star = est.verdict.n_star.unwrap();
            for n in n_star..est.verdict.differences.len() {
                let bound = q / (1.0 - q) * est.verdict.differences[n];
                let err = (&limit - &seq.ev(n + 1).unwrap()).norm(level);
                prop_assert!(err <= bound + slack, "n={} err={} bound={}", n, err, bound);
            }
        }

        #[test]
        fn acceptance_is_monotone_in_level(
            coeffs in prop::collection::vec(-5.0f64..5.0, 1..6),
            r in 0.05f64..0.9,
            j in 1u32..4,
        ) {
            let c = ScaledVector::new(coeffs).unwrap();
            let seq = CauchySequence::from_fn(move |n| Ok(c.scale(1.0 - r.powi(n as i32))));
            let crit = CauchyCriteria::new(1e-8, 3, 2000).unwrap();
            let high = is_cauchy(&seq, j, &crit).unwrap();
            prop_assume!(high.accepted());
            for i in 0..j {
                prop_assert!(is_cauchy(&seq, i, &crit).unwrap().accepted());
            }
        }
    }
}
