use std::fmt;
use std::ops::{Deref, Index};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Finite real coefficient sequence representing an eventually-zero sequence.
///
/// Index 0 of the backing vector is coordinate 1. Two vectors that differ only
/// by trailing zeros compare equal.
#[derive(Debug, Clone, Default, Serialize, Deserialize)]
#[serde(transparent)]
pub struct CoeffVector(Vec<f64>);

impl CoeffVector {
    /// Builds a vector, rejecting NaN and infinite entries.
    pub fn new(entries: Vec<f64>) -> Result<Self> {
        if let Some(index) = entries.iter().position(|x| !x.is_finite()) {
            return Err(Error::InvalidVector { index });
        }
        Ok(Self(entries))
    }

    /// Builds a vector without validation. Callers guarantee finiteness.
    pub(crate) fn from_vec(entries: Vec<f64>) -> Self {
        debug_assert!(entries.iter().all(|x| x.is_finite()));
        Self(entries)
    }

    pub fn zeros(len: usize) -> Self {
        Self(vec![0.0; len])
    }

    /// The unit vector e_k (1-based) of length `len`.
    pub fn unit(k: usize, len: usize) -> Self {
        assert!(k >= 1 && k <= len, "unit vector index out of range");
        let mut v = vec![0.0; len];
        v[k - 1] = 1.0;
        Self(v)
    }

    pub fn as_slice(&self) -> &[f64] {
        &self.0
    }

    pub fn into_vec(self) -> Vec<f64> {
        self.0
    }

    /// Length after dropping trailing zeros.
    pub fn support_len(&self) -> usize {
        self.0.iter().rposition(|&x| x != 0.0).map_or(0, |i| i + 1)
    }

    pub fn is_zero(&self) -> bool {
        self.support_len() == 0
    }

    /// Copy padded with zeros (or truncated, if `len` is shorter) to `len`.
    pub fn resized(&self, len: usize) -> Self {
        let mut v = self.0.clone();
        v.resize(len, 0.0);
        Self(v)
    }

    pub fn max_abs_diff(&self, other: &CoeffVector) -> f64 {
        let n = self.len().max(other.len());
        (0..n)
            .map(|i| (self.get(i) - other.get(i)).abs())
            .fold(0.0, f64::max)
    }

    /// Entry at 0-based position, zero beyond the stored length.
    pub fn get(&self, i: usize) -> f64 {
        self.0.get(i).copied().unwrap_or(0.0)
    }
}

impl PartialEq for CoeffVector {
    fn eq(&self, other: &Self) -> bool {
        let n = self.support_len();
        n == other.support_len() && self.0[..n] == other.0[..n]
    }
}

impl Deref for CoeffVector {
    type Target = [f64];

    fn deref(&self) -> &[f64] {
        &self.0
    }
}

impl Index<usize> for CoeffVector {
    type Output = f64;

    fn index(&self, i: usize) -> &f64 {
        &self.0[i]
    }
}

impl TryFrom<Vec<f64>> for CoeffVector {
    type Error = Error;

    fn try_from(v: Vec<f64>) -> Result<Self> {
        Self::new(v)
    }
}

impl fmt::Display for CoeffVector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "(")?;
        for (i, x) in self.0.iter().enumerate() {
            if i > 0 {
                write!(f, ", ")?;
            }
            write!(f, "{x}")?;
        }
        write!(f, ")")
    }
}
