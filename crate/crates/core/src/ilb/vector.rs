use std::fmt;
use std::ops::{Add, Index, Sub};

use crate::error::{Error, Result};

/// Truncated element of a graded sequence space.
///
/// The same coefficient array stands for the element at every level of the
/// scale; levels differ only through the weights applied by [`norm`].
#[derive(Clone, PartialEq)]
pub struct ScaledVector {
    coeffs: Vec<f64>,
}

impl ScaledVector {
    pub fn new(coeffs: Vec<f64>) -> Result<Self> {
        if coeffs.is_empty() {
            return Err(Error::InvalidArgument("truncation size must be at least 1".into()));
        }
        if let Some(k) = coeffs.iter().position(|c| !c.is_finite()) {
            return Err(Error::NonFinite(format!("coefficient {k}")));
        }
        Ok(Self { coeffs })
    }

    pub fn zeros(len: usize) -> Self {
        assert!(len >= 1, "truncation size must be at least 1");
        Self { coeffs: vec![0.0; len] }
    }

    pub fn scalar(value: f64) -> Result<Self> {
        Self::new(vec![value])
    }

    /// Unit vector `e_k` in a space of truncation size `len`.
    pub fn unit(len: usize, k: usize) -> Self {
        let mut v = Self::zeros(len);
        v.coeffs[k] = 1.0;
        v
    }

    pub fn len(&self) -> usize {
        self.coeffs.len()
    }

    pub fn is_empty(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn as_slice(&self) -> &[f64] {
        &self.coeffs
    }

    pub fn into_vec(self) -> Vec<f64> {
        self.coeffs
    }

    pub fn is_finite(&self) -> bool {
        self.coeffs.iter().all(|c| c.is_finite())
    }

    /// Re-checks the finiteness invariant after unchecked arithmetic.
    pub fn check_finite(self, context: &str) -> Result<Self> {
        if self.is_finite() {
            Ok(self)
        } else {
            Err(Error::NonFinite(context.to_string()))
        }
    }

    pub fn check_same_len(&self, other: &Self) -> Result<()> {
        if self.len() == other.len() {
            Ok(())
        } else {
            Err(Error::DimensionMismatch { expected: self.len(), actual: other.len() })
        }
    }

    /// Elementwise map. The result is not re-validated.
    pub fn map(&self, f: impl Fn(f64) -> f64) -> Self {
        Self { coeffs: self.coeffs.iter().map(|&c| f(c)).collect() }
    }

    pub fn zip_map(&self, other: &Self, f: impl Fn(f64, f64) -> f64) -> Self {
        assert_eq!(self.len(), other.len(), "truncation sizes differ");
        Self { coeffs: self.coeffs.iter().zip(&other.coeffs).map(|(&a, &b)| f(a, b)).collect() }
    }

    pub fn scale(&self, s: f64) -> Self {
        self.map(|c| s * c)
    }

    /// `self + s * other`
    pub fn axpy(&self, s: f64, other: &Self) -> Self {
        self.zip_map(other, |a, b| a + s * b)
    }

    pub fn norm(&self, level: u32) -> f64 {
        weighted_norm(&self.coeffs, level)
    }

    pub fn max_abs(&self) -> f64 {
        self.coeffs.iter().fold(0.0, |m, c| m.max(c.abs()))
    }
}

impl Index<usize> for ScaledVector {
    type Output = f64;

    fn index(&self, k: usize) -> &f64 {
        &self.coeffs[k]
    }
}

impl Add for &ScaledVector {
    type Output = ScaledVector;

    fn add(self, rhs: &ScaledVector) -> ScaledVector {
        self.zip_map(rhs, |a, b| a + b)
    }
}

impl Sub for &ScaledVector {
    type Output = ScaledVector;

    fn sub(self, rhs: &ScaledVector) -> ScaledVector {
        self.zip_map(rhs, |a, b| a - b)
    }
}

impl fmt::Debug for ScaledVector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_tuple("ScaledVector").field(&self.coeffs).finish()
    }
}

/// Weight `(1 + k^2)^level` of coefficient `k`.
#[inline]
pub fn weight(k: usize, level: u32) -> f64 {
    let base = 1.0 + (k as f64) * (k as f64);
    base.powi(level as i32)
}

fn weighted_norm(coeffs: &[f64], level: u32) -> f64 {
    coeffs.iter().enumerate().map(|(k, &c)| weight(k, level) * c * c).sum::<f64>().sqrt()
}

/// `‖v‖_level = (Σ_k (1+k²)^level v_k²)^{1/2}`.
pub fn norm(v: &ScaledVector, level: u32) -> Result<f64> {
    if !v.is_finite() {
        return Err(Error::NonFinite("norm argument".into()));
    }
    Ok(v.norm(level))
}

/// A finite list of norm levels standing in for the whole scale.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct NormScale {
    levels: Vec<u32>,
}

impl NormScale {
    pub fn new(mut levels: Vec<u32>) -> Result<Self> {
        if levels.is_empty() {
            return Err(Error::InvalidArgument("norm scale needs at least one level".into()));
        }
        levels.sort_unstable();
        levels.dedup();
        Ok(Self { levels })
    }

    pub fn levels(&self) -> &[u32] {
        &self.levels
    }

    pub fn highest(&self) -> u32 {
        *self.levels.last().expect("non-empty")
    }

    pub fn norm(&self, v: &ScaledVector, level: u32) -> Result<f64> {
        if !self.levels.contains(&level) {
            return Err(Error::InvalidArgument(format!("level {level} is not configured (levels {:?})", self.levels)));
        }
        norm(v, level)
    }

    /// Norms at every configured level, ascending.
    pub fn norms(&self, v: &ScaledVector) -> Vec<f64> {
        self.levels.iter().map(|&l| v.norm(l)).collect()
    }
}

impl Default for NormScale {
    fn default() -> Self {
        Self { levels: vec![0, 1, 2] }
    }
}
