use std::fmt;
use std::sync::Arc;

use crate::error::{Error, Result};

type EvalFn<T> = dyn Fn(&[f64]) -> Result<T> + Send + Sync;

/// A parametrized family: a map from an open box of `R^d` into some target.
pub struct Plot<T> {
    domain: Vec<(f64, f64)>,
    eval: Arc<EvalFn<T>>,
}

impl<T> Clone for Plot<T> {
    fn clone(&self) -> Self {
        Self { domain: self.domain.clone(), eval: Arc::clone(&self.eval) }
    }
}

impl<T> fmt::Debug for Plot<T> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("Plot").field("domain", &self.domain).finish_non_exhaustive()
    }
}

impl<T> Plot<T> {
    /// `domain` lists the open intervals `(lo, hi)` whose product is the box.
    pub fn new<F>(domain: Vec<(f64, f64)>, eval: F) -> Result<Self>
    where
        F: Fn(&[f64]) -> Result<T> + Send + Sync + 'static,
    {
        if domain.is_empty() {
            return Err(Error::InvalidArgument("plot domain must have dimension >= 1".into()));
        }
        for (i, &(lo, hi)) in domain.iter().enumerate() {
            if !(lo.is_finite() && hi.is_finite() && lo < hi) {
                return Err(Error::InvalidArgument(format!("empty interval on axis {i}: ({lo}, {hi})")));
            }
        }
        Ok(Self { domain, eval: Arc::new(eval) })
    }

    /// One-parameter plot on the open interval `(lo, hi)`.
    pub fn curve<F>(lo: f64, hi: f64, eval: F) -> Result<Self>
    where
        F: Fn(f64) -> Result<T> + Send + Sync + 'static,
    {
        Self::new(vec![(lo, hi)], move |p: &[f64]| eval(p[0]))
    }

    pub fn dim(&self) -> usize {
        self.domain.len()
    }

    pub fn domain(&self) -> &[(f64, f64)] {
        &self.domain
    }

    pub fn contains(&self, point: &[f64]) -> bool {
        point.len() == self.dim() && point.iter().zip(&self.domain).all(|(&x, &(lo, hi))| lo < x && x < hi)
    }

    pub fn eval(&self, point: &[f64]) -> Result<T> {
        if !self.contains(point) {
            return Err(Error::DomainViolation(format!("{point:?} is not inside {:?}", self.domain)));
        }
        (self.eval)(point)
    }
}

impl<T: Send + Sync + 'static> Plot<T> {
    /// Post-composes the plot with `f`.
    pub fn map<U, F>(&self, f: F) -> Plot<U>
    where
        F: Fn(T) -> Result<U> + Send + Sync + 'static,
    {
        let inner = Arc::clone(&self.eval);
        Plot { domain: self.domain.clone(), eval: Arc::new(move |p: &[f64]| f(inner(p)?)) }
    }
}

pub(crate) fn offset(point: &[f64], direction: &[f64], s: f64) -> Vec<f64> {
    point.iter().zip(direction).map(|(&p, &d)| p + s * d).collect()
}

/// `observable ∘ plot` evaluated at `point + s * direction`, checked finite.
pub(crate) fn sample<T, O>(plot: &Plot<T>, observable: &O, point: &[f64], direction: &[f64], s: f64) -> Result<f64>
where
    O: Fn(&T) -> f64 + ?Sized,
{
    let value = observable(&plot.eval(&offset(point, direction, s))?);
    if value.is_finite() {
        Ok(value)
    } else {
        Err(Error::NonFinite(format!("observable at offset {s:e}")))
    }
}

pub(crate) fn check_direction(plot_dim: usize, direction: &[f64]) -> Result<()> {
    if direction.len() != plot_dim {
        return Err(Error::DimensionMismatch { expected: plot_dim, actual: direction.len() });
    }
    let len = direction.iter().map(|d| d * d).sum::<f64>().sqrt();
    if (len - 1.0).abs() > 1e-12 {
        return Err(Error::InvalidArgument(format!("direction must be a unit vector, |d| = {len}")));
    }
    Ok(())
}

/// Central difference `(F(p + h d) - F(p - h d)) / 2h` of `F = observable ∘ plot`.
pub fn fd_derivative<T, O>(plot: &Plot<T>, observable: &O, point: &[f64], direction: &[f64], h: f64) -> Result<f64>
where
    O: Fn(&T) -> f64 + ?Sized,
{
    if !(h > 0.0 && h.is_finite()) {
        return Err(Error::InvalidArgument(format!("step must be positive, got {h}")));
    }
    check_direction(plot.dim(), direction)?;
    let fp = sample(plot, observable, point, direction, h)?;
    let fm = sample(plot, observable, point, direction, -h)?;
    Ok((fp - fm) / (2.0 * h))
}
