use alloc::format;
use alloc::vec;
use alloc::vec::Vec;

use crate::error::{Error, Result};

/// Axis-aligned box `[low_j, up_j]` for every coordinate `j`.
#[derive(Debug, Clone, PartialEq)]
pub struct SearchSpace {
    low: Vec<f64>,
    up: Vec<f64>,
}

impl SearchSpace {
    /// Builds a box from per-dimension bounds. Equal bounds are accepted and
    /// make the space [`degenerate`](Self::is_degenerate).
    pub fn new(low: Vec<f64>, up: Vec<f64>) -> Result<Self> {
        if low.is_empty() {
            return Err(Error::InvalidSpace("zero dimensions".into()));
        }
        if low.len() != up.len() {
            return Err(Error::InvalidSpace(format!(
                "{} lower bounds but {} upper bounds",
                low.len(),
                up.len()
            )));
        }
        for (j, (&lo, &hi)) in low.iter().zip(&up).enumerate() {
            if !lo.is_finite() || !hi.is_finite() {
                return Err(Error::InvalidSpace(format!(
                    "non-finite bound in dimension {j}"
                )));
            }
            if lo > hi {
                return Err(Error::InvalidSpace(format!(
                    "low {lo} > up {hi} in dimension {j}"
                )));
            }
        }
        Ok(Self { low, up })
    }

    /// The same interval `[low, up]` in each of `dims` dimensions.
    pub fn uniform(dims: usize, low: f64, up: f64) -> Result<Self> {
        Self::new(vec![low; dims], vec![up; dims])
    }

    pub fn dims(&self) -> usize {
        self.low.len()
    }

    pub fn low(&self) -> &[f64] {
        &self.low
    }

    pub fn up(&self) -> &[f64] {
        &self.up
    }

    pub fn width(&self, j: usize) -> f64 {
        self.up[j] - self.low[j]
    }

    /// True when some dimension has `low == up`. Only useful in tests.
    pub fn is_degenerate(&self) -> bool {
        self.low.iter().zip(&self.up).any(|(lo, hi)| lo == hi)
    }

    pub fn contains(&self, x: &[f64]) -> bool {
        x.len() == self.dims()
            && x.iter()
                .zip(self.low.iter().zip(&self.up))
                .all(|(v, (lo, hi))| *lo <= *v && *v <= *hi)
    }

    /// True when `other` lies entirely inside `self`.
    pub fn encloses(&self, other: &SearchSpace) -> bool {
        self.dims() == other.dims()
            && (0..self.dims()).all(|j| self.low[j] <= other.low[j] && other.up[j] <= self.up[j])
    }

    pub(crate) fn check_dims(&self, got: usize) -> Result<()> {
        if got == self.dims() {
            Ok(())
        } else {
            Err(Error::DimensionMismatch {
                expected: self.dims(),
                got,
            })
        }
    }
}
