//! Finite-difference smoothness probes along plots.
//!
//! A probe evaluates central differences at `h0, h0/2, h0/4, ...` and looks
//! at how successive estimates move. Smooth observables give defects that
//! shrink at second order; a kink or a jump shows up as disagreement between
//! one-sided differences that does not shrink with `h`. The verdicts are
//! statements of consistency with smoothness, never proofs of it.

use std::fmt;

use crate::error::{Error, Result};
use crate::ilb::plot::{check_direction, sample, Plot};

/// Minimal observed order accepted as "consistent with smooth".
pub const SMOOTH_ORDER: f64 = 1.5;

/// One-sided disagreement must shrink at least by this factor per halving,
/// otherwise a persistent jump is reported.
const JUMP_PERSISTENCE: f64 = 0.6;

/// Rounding-noise multiplier applied to `eps * |F|`.
const ROUNDOFF_FACTOR: f64 = 64.0;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ProbeConfig {
    pub h0: f64,
    pub halvings: usize,
    /// Relative to `max(1, |D_h0|)`.
    pub jump_threshold: f64,
    /// Absolute evaluation noise of the observable (e.g. an iterative
    /// solver's tolerance), added to the rounding floor.
    pub noise_floor: f64,
}

impl Default for ProbeConfig {
    fn default() -> Self {
        Self { h0: 1e-2, halvings: 3, jump_threshold: 1e-3, noise_floor: 0.0 }
    }
}

impl ProbeConfig {
    pub fn with_h0(mut self, h0: f64) -> Self {
        self.h0 = h0;
        self
    }

    pub fn with_noise_floor(mut self, noise: f64) -> Self {
        self.noise_floor = noise;
        self
    }

    fn validate(&self) -> Result<()> {
        if !(self.h0 > 0.0 && self.h0.is_finite()) {
            return Err(Error::InvalidArgument(format!("h0 must be positive, got {}", self.h0)));
        }
        if self.halvings < 3 {
            return Err(Error::InvalidArgument(format!("need at least 3 halvings, got {}", self.halvings)));
        }
        if !(self.jump_threshold > 0.0) || !(self.noise_floor >= 0.0) {
            return Err(Error::InvalidArgument("thresholds must be non-negative".into()));
        }
        Ok(())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Verdict {
    SmoothConsistent,
    JumpDetected,
    Inconclusive,
}

impl Verdict {
    pub fn as_str(self) -> &'static str {
        match self {
            Verdict::SmoothConsistent => "smooth-consistent",
            Verdict::JumpDetected => "jump-detected",
            Verdict::Inconclusive => "inconclusive",
        }
    }
}

impl fmt::Display for Verdict {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl std::str::FromStr for Verdict {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "smooth-consistent" => Ok(Verdict::SmoothConsistent),
            "jump-detected" => Ok(Verdict::JumpDetected),
            "inconclusive" => Ok(Verdict::Inconclusive),
            other => Err(Error::Parse(format!("unknown verdict {other:?}"))),
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct SmoothnessReport {
    /// Richardson-extrapolated derivative when smooth, otherwise the
    /// central difference at the smallest step.
    pub derivative_estimate: f64,
    pub steps: Vec<f64>,
    pub central: Vec<f64>,
    /// `|D_{h_j} - D_{h_{j+1}}|`, one entry per halving.
    pub consistency_defect: Vec<f64>,
    /// Pairwise orders `log2(e_j / e_{j+1})`; `NaN` where a defect is at the
    /// rounding floor.
    pub pairwise_orders: Vec<f64>,
    /// Minimum of the usable pairwise orders, `+inf` when every defect sits
    /// at the rounding floor.
    pub observed_order: f64,
    /// `|D+ - D-|` of second-order one-sided differences at each step.
    pub one_sided_gap: Vec<f64>,
    /// `|F(p + h_min) - F(p - h_min)|`.
    pub value_jump: f64,
    pub verdict: Verdict,
}

impl SmoothnessReport {
    /// CSV with columns `h, D_h, defect, order_estimate, verdict`.
    pub fn to_csv(&self) -> Result<String> {
        use crate::experiment::csvio::{fmt_f64, CsvTable};
        let mut table = CsvTable::new(&["h", "D_h", "defect", "order_estimate", "verdict"]);
        for (j, (&h, &d)) in self.steps.iter().zip(&self.central).enumerate() {
            let defect = if j == 0 { String::new() } else { fmt_f64(self.consistency_defect[j - 1]) };
            let order = if j < 2 { String::new() } else { fmt_f64(self.pairwise_orders[j - 2]) };
            table.push(vec![fmt_f64(h), fmt_f64(d), defect, order, self.verdict.to_string()])?;
        }
        table.to_csv_string()
    }
}

/// Probes `F = observable ∘ plot` around `point` along `direction`.
///
/// Every sampled point `point ± 2 h0 direction` must lie inside the plot box.
pub fn probe_smoothness<T, O>(
    plot: &Plot<T>,
    observable: &O,
    point: &[f64],
    direction: &[f64],
    config: &ProbeConfig,
) -> Result<SmoothnessReport>
where
    O: Fn(&T) -> f64 + ?Sized,
{
    config.validate()?;
    check_direction(plot.dim(), direction)?;
    let steps: Vec<f64> = (0..=config.halvings).map(|j| config.h0 / f64::powi(2.0, j as i32)).collect();

    let f_center = sample(plot, observable, point, direction, 0.0)?;
    let mut central = Vec::with_capacity(steps.len());
    let mut gaps = Vec::with_capacity(steps.len());
    let mut f_scale = f_center.abs();
    let mut last_pair = (f_center, f_center);
    for &h in &steps {
        let fp = sample(plot, observable, point, direction, h)?;
        let fm = sample(plot, observable, point, direction, -h)?;
        let fp2 = sample(plot, observable, point, direction, 2.0 * h)?;
        let fm2 = sample(plot, observable, point, direction, -2.0 * h)?;
        f_scale = f_scale.max(fp.abs()).max(fm.abs()).max(fp2.abs()).max(fm2.abs());
        central.push((fp - fm) / (2.0 * h));
        let forward = (-3.0 * f_center + 4.0 * fp - fp2) / (2.0 * h);
        let backward = (3.0 * f_center - 4.0 * fm + fm2) / (2.0 * h);
        gaps.push((forward - backward).abs());
        last_pair = (fp, fm);
    }

    let floor = |h: f64| (config.noise_floor + ROUNDOFF_FACTOR * f64::EPSILON * f_scale) / h;

    let defects: Vec<f64> = central.windows(2).map(|w| (w[1] - w[0]).abs()).collect();
    let above_floor: Vec<bool> = defects.iter().zip(&steps[1..]).map(|(&e, &h)| e > floor(h)).collect();

    let pairwise_orders: Vec<f64> = (0..defects.len().saturating_sub(1))
        .map(|j| if above_floor[j] && above_floor[j + 1] { (defects[j] / defects[j + 1]).log2() } else { f64::NAN })
        .collect();

    // Defects that reach the rounding floor count as converged; only the
    // prefix above the floor has to show the asymptotic order.
    let prefix = above_floor.iter().take_while(|&&a| a).count();
    let resolved_tail = above_floor[prefix..].iter().all(|&a| !a);
    let observed_order = if prefix >= 2 {
        pairwise_orders[..prefix - 1].iter().copied().fold(f64::INFINITY, f64::min)
    } else {
        f64::INFINITY
    };
    let decreasing = defects[..prefix].windows(2).all(|w| w[1] < w[0]);

    let n = gaps.len();
    let gap_threshold = config.jump_threshold * central[0].abs().max(1.0) + 4.0 * floor(steps[n - 1]);
    let persistent = gaps[n - 1] > JUMP_PERSISTENCE * gaps[n - 2];
    let jump = gaps[n - 1] > gap_threshold && persistent;

    let verdict = if jump {
        Verdict::JumpDetected
    } else if resolved_tail && decreasing && observed_order >= SMOOTH_ORDER {
        Verdict::SmoothConsistent
    } else {
        Verdict::Inconclusive
    };

    let d_last = central[n - 1];
    let derivative_estimate =
        if verdict == Verdict::SmoothConsistent { (4.0 * d_last - central[n - 2]) / 3.0 } else { d_last };

    Ok(SmoothnessReport {
        derivative_estimate,
        steps,
        central,
        consistency_defect: defects,
        pairwise_orders,
        observed_order,
        one_sided_gap: gaps,
        value_jump: (last_pair.0 - last_pair.1).abs(),
        verdict,
    })
}

/// [`probe_smoothness`] for one-parameter plots with the unit direction `+1`.
pub fn probe_curve<T, O>(plot: &Plot<T>, observable: &O, t: f64, config: &ProbeConfig) -> Result<SmoothnessReport>
where
    O: Fn(&T) -> f64 + ?Sized,
{
    probe_smoothness(plot, observable, &[t], &[1.0], config)
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn id(v: &f64) -> f64 {
        *v
    }

    fn curve(f: impl Fn(f64) -> f64 + Send + Sync + 'static) -> Plot<f64> {
        Plot::curve(-2.0, 2.0, move |t| Ok(f(t))).unwrap()
    }

    #[test]
    fn cubic_is_smooth() {
        let r = probe_curve(&curve(|t| t * t * t), &id, 0.3, &ProbeConfig::default()).unwrap();
        assert_eq!(r.verdict, Verdict::SmoothConsistent);
        assert!((r.derivative_estimate - 0.27).abs() < 1e-10);
        assert!(r.observed_order >= 1.9);
    }

    #[test]
    fn absolute_value_kink_is_a_jump() {
        let r = probe_curve(&curve(f64::abs), &id, 0.0, &ProbeConfig::default()).unwrap();
        assert_eq!(r.verdict, Verdict::JumpDetected);
        // one-sided derivatives -1 and +1
        assert!((r.one_sided_gap.last().unwrap() - 2.0).abs() < 1e-12);
    }

    #[test]
    fn constant_is_smooth_with_zero_derivative() {
        let r = probe_curve(&curve(|_| 4.0), &id, 0.7, &ProbeConfig::default()).unwrap();
        assert_eq!(r.verdict, Verdict::SmoothConsistent);
        assert_eq!(r.derivative_estimate, 0.0);
        assert!(r.observed_order.is_infinite());
    }

    #[test]
    fn step_function_reports_value_jump() {
        let plot = curve(|t| if t > 0.0 { 3.0 } else { 1.0 });
        let r = probe_curve(&plot, &id, 0.0, &ProbeConfig::default()).unwrap();
        assert_eq!(r.verdict, Verdict::JumpDetected);
        assert_eq!(r.value_jump, 2.0);
    }

    #[test]
    fn flat_glue_is_smooth_but_linear_glue_is_not() {
        // exp(-1/t) glued to zero is C-infinity at the seam
        let flat = curve(|t| if t > 0.0 { (-1.0 / t).exp() } else { 0.0 });
        let r = probe_curve(&flat, &id, 0.0, &ProbeConfig::default()).unwrap();
        assert_eq!(r.verdict, Verdict::SmoothConsistent);
        let kink = curve(|t| t.max(0.0));
        let r = probe_curve(&kink, &id, 0.0, &ProbeConfig::default()).unwrap();
        assert_eq!(r.verdict, Verdict::JumpDetected);
    }

    #[test]
    fn erratic_noise_is_not_called_smooth() {
        // deterministic pseudo-noise of amplitude 1e-3 on a smooth curve
        let plot = curve(|t| t + 1e-3 * (1e7 * t).sin());
        let r = probe_curve(&plot, &id, 0.1, &ProbeConfig::default()).unwrap();
        assert_ne!(r.verdict, Verdict::SmoothConsistent);
    }

    #[test]
    fn rejects_bad_configs_and_domains() {
        let plot = curve(|t| t);
        let cfg = ProbeConfig { halvings: 2, ..Default::default() };
        assert!(probe_curve(&plot, &id, 0.0, &cfg).is_err());
        assert!(probe_curve(&plot, &id, 1.99, &ProbeConfig::default()).is_err());
    }

    #[test]
    fn csv_has_one_row_per_step() {
        let r = probe_curve(&curve(|t| t.sin()), &id, 0.2, &ProbeConfig::default()).unwrap();
        let csv = r.to_csv().unwrap();
        let lines: Vec<_> = csv.lines().collect();
        assert_eq!(lines[0], "h,D_h,defect,order_estimate,verdict");
        assert_eq!(lines.len(), 1 + r.steps.len());
        assert!(lines[1].ends_with("smooth-consistent"));
    }

    proptest! {
        // Polynomials of degree <= 5 with bounded coefficients.
        #[test]
        fn polynomials_probe_smooth(
            coeffs in prop::collection::vec(-3.0f64..3.0, 1..=6),
            t in -0.8f64..0.8,
        ) {
            let c = coeffs.clone();
            let plot = curve(move |x| c.iter().rev().fold(0.0, |acc, &a| acc * x + a));
            let cfg = ProbeConfig::default();
            let r = probe_curve(&plot, &id, t, &cfg).unwrap();
            prop_assert_eq!(r.verdict, Verdict::SmoothConsistent);
            let exact: f64 = coeffs.iter().enumerate().skip(1)
                .map(|(k, &a)| k as f64 * a * t.powi(k as i32 - 1)).sum();
            let bound = 10.0 * cfg.h0 * cfg.h0 * 3.0 * 120.0;
            prop_assert!((r.derivative_estimate - exact).abs() <= bound,
                "estimate {} exact {}", r.derivative_estimate, exact);
        }
    }
}
