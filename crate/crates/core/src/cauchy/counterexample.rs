//! A path of Cauchy sequences along which every index map is smooth but the
//! limit map jumps.
//!
//! `Γ(t)_n` moves from `x` to `y` on the interval `[1/(n+2), 1/(n+1)]` along
//! `γ(σ) = x + s(σ)(y - x)`, where `s` is a flat smoothstep. For `t = 0` every
//! term is `x`; for any `t > 0` the terms equal `y` once `1/(n+1) <= t`.
//! Hence `lim Γ(0) = x` and `lim Γ(t) = y` for `t > 0`.

use crate::cauchy::verdict::{limit_estimate, CauchyCriteria};
use crate::cauchy::CauchySequence;
use crate::error::{Error, Result};
use crate::ilb::{Plot, ScaledVector};

fn flat(t: f64) -> f64 {
    if t > 0.0 {
        (-1.0 / t).exp()
    } else {
        0.0
    }
}

/// Smoothstep with every derivative vanishing at 0 and 1:
/// `s(σ) = ψ(σ) / (ψ(σ) + ψ(1-σ))`, `ψ(t) = exp(-1/t)` for `t > 0`.
pub fn bump(sigma: f64) -> f64 {
    if sigma <= 0.0 {
        0.0
    } else if sigma >= 1.0 {
        1.0
    } else {
        let a = flat(sigma);
        a / (a + flat(1.0 - sigma))
    }
}

/// Start and end of the transition interval of term `n`.
pub fn transition_interval(n: usize) -> (f64, f64) {
    (1.0 / (n as f64 + 2.0), 1.0 / (n as f64 + 1.0))
}

/// `Γ(t)_n` for `t ∈ [0, 1]`.
pub fn counterexample_path(x: &ScaledVector, y: &ScaledVector, t: f64, n: usize) -> Result<ScaledVector> {
    if !(0.0..=1.0).contains(&t) {
        return Err(Error::DomainViolation(format!("path parameter {t} outside [0, 1]")));
    }
    x.check_same_len(y)?;
    let (start, end) = transition_interval(n);
    Ok(if t <= start {
        x.clone()
    } else if t >= end {
        y.clone()
    } else {
        let tau = (t - start) / (end - start);
        x.axpy(bump(tau), &(y - x))
    })
}

/// The whole sequence `Γ(t)`.
pub fn counterexample_sequence(x: ScaledVector, y: ScaledVector, t: f64) -> Result<CauchySequence> {
    if !(0.0..=1.0).contains(&t) {
        return Err(Error::DomainViolation(format!("path parameter {t} outside [0, 1]")));
    }
    x.check_same_len(&y)?;
    Ok(CauchySequence::from_fn(move |n| counterexample_path(&x, &y, t, n)))
}

/// Index past which `Γ(t)` is constant (`1/(n+1) <= t`).
pub fn settling_index(t: f64) -> usize {
    if t <= 0.0 {
        0
    } else {
        (1.0 / t).ceil() as usize
    }
}

/// `t ↦ Γ(t)_k` on `(-1, 1)`, extended to `t < 0` by the constant branch `x`.
pub fn index_plot(x: ScaledVector, y: ScaledVector, k: usize) -> Result<Plot<ScaledVector>> {
    x.check_same_len(&y)?;
    Plot::curve(-1.0, 1.0, move |t| counterexample_path(&x, &y, t.max(0.0), k))
}

/// `t ↦ lim Γ(t)` on `(-1, 1)`, extended to `t < 0` by `x`.
///
/// The limit is the certified estimate of [`limit_estimate`]; the detector's
/// burn-in is placed past the transition region of `Γ(t)`.
pub fn limit_plot(x: ScaledVector, y: ScaledVector, base: CauchyCriteria) -> Result<Plot<ScaledVector>> {
    x.check_same_len(&y)?;
    base.validate()?;
    Plot::curve(-1.0, 1.0, move |t| {
        let t = t.max(0.0);
        let settle = settling_index(t) + 1;
        let criteria = CauchyCriteria {
            burn_in: base.burn_in.max(settle),
            max_index: base.max_index.max(settle + base.window + 2),
            ..base
        };
        let seq = counterexample_sequence(x.clone(), y.clone(), t)?;
        Ok(limit_estimate(&seq, 0, &criteria)?.value)
    })
}
