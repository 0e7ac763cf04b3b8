use std::fmt;
use std::sync::{Arc, Mutex};

use crate::error::{Error, Result};
use crate::ilb::ScaledVector;

type IndexedFn = dyn Fn(usize) -> Result<ScaledVector> + Send + Sync;
type RecursiveFn = dyn Fn(usize, &ScaledVector) -> Result<ScaledVector> + Send + Sync;

#[derive(Clone)]
enum Generator {
    Indexed(Arc<IndexedFn>),
    /// `x_0` and the step `x_{n+1} = step(n, x_n)`.
    Recursive(ScaledVector, Arc<RecursiveFn>),
}

/// Lazily generated sequence in a graded space with a memo of computed terms.
///
/// Terms are produced in index order under a lock, so concurrent callers of
/// [`CauchySequence::ev`] observe the same values a sequential caller would.
pub struct CauchySequence {
    generator: Generator,
    memo: Mutex<Vec<ScaledVector>>,
}

impl fmt::Debug for CauchySequence {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("CauchySequence")
            .field("computed", &self.memo.lock().map(|m| m.len()).unwrap_or(0))
            .finish_non_exhaustive()
    }
}

impl Clone for CauchySequence {
    fn clone(&self) -> Self {
        let memo = self.memo.lock().map(|m| m.clone()).unwrap_or_default();
        Self { generator: self.generator.clone(), memo: Mutex::new(memo) }
    }
}

impl CauchySequence {
    /// Sequence given by an explicit formula `n ↦ x_n`.
    pub fn from_fn<F>(generator: F) -> Self
    where
        F: Fn(usize) -> Result<ScaledVector> + Send + Sync + 'static,
    {
        Self { generator: Generator::Indexed(Arc::new(generator)), memo: Mutex::new(Vec::new()) }
    }

    /// Sequence given by a recursion `x_{n+1} = step(n, x_n)`.
    pub fn recursive<F>(first: ScaledVector, step: F) -> Self
    where
        F: Fn(usize, &ScaledVector) -> Result<ScaledVector> + Send + Sync + 'static,
    {
        Self { generator: Generator::Recursive(first, Arc::new(step)), memo: Mutex::new(Vec::new()) }
    }

    pub fn constant(value: ScaledVector) -> Self {
        Self::from_fn(move |_| Ok(value.clone()))
    }

    /// Scalar sequence (truncation size 1).
    pub fn scalar<F>(f: F) -> Self
    where
        F: Fn(usize) -> f64 + Send + Sync + 'static,
    {
        Self::from_fn(move |n| ScaledVector::scalar(f(n)))
    }

    /// Highest index computed so far, if any.
    pub fn max_index_computed(&self) -> Option<usize> {
        let memo = self.memo.lock().expect("memo lock poisoned");
        memo.len().checked_sub(1)
    }

    /// The `k`-th term. Idempotent; fills the memo up to `k`.
    pub fn ev(&self, k: usize) -> Result<ScaledVector> {
        let mut memo = self.memo.lock().expect("memo lock poisoned");
        while memo.len() <= k {
            let index = memo.len();
            let term = match &self.generator {
                Generator::Indexed(f) => f(index),
                Generator::Recursive(first, _) if index == 0 => Ok(first.clone()),
                Generator::Recursive(_, step) => step(index - 1, &memo[index - 1]),
            }
            .map_err(|e| poisoned(index, e.to_string()))?;
            if !term.is_finite() {
                return Err(poisoned(index, "non-finite coefficient".into()));
            }
            if let Some(first) = memo.first() {
                if first.len() != term.len() {
                    return Err(poisoned(
                        index,
                        format!("truncation size {} differs from {}", term.len(), first.len()),
                    ));
                }
            }
            memo.push(term);
        }
        Ok(memo[k].clone())
    }
}

fn poisoned(index: usize, reason: String) -> Error {
    Error::PoisonedTerm { index, reason }
}

/// Free-function form of [`CauchySequence::ev`].
pub fn ev(seq: &CauchySequence, k: usize) -> Result<ScaledVector> {
    seq.ev(k)
}
