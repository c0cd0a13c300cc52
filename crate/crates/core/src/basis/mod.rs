//! Basic sequences given by a change of basis into an ambient space, and the
//! constants attached to them.

mod constants;
mod estimate;
mod opnorm;

use std::fmt;

use serde::{Deserialize, Serialize};

use crate::constructions::AlphaSchedule;
use crate::error::{Error, Result};
use crate::optim::linalg::{self, Matrix};
use crate::spaces::SpaceOracle;
use crate::tolerance;
use crate::vector::CoeffVector;

pub use constants::{
    basis_constant, basis_constant_with, domination_constant, domination_constant_with,
    equivalence_constants, equivalence_constants_with, wide_s_constant, wide_s_constant_with,
    Equivalence,
};
pub(crate) use estimate::extended_f64;
pub use estimate::{ConstantEstimate, Method};
pub use opnorm::{operator_norm, EstimateOptions, RatioProblem, Target};

/// How the vectors `x_n` sit in the ambient space.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case", deny_unknown_fields)]
pub enum Preset {
    /// `x_n = e_n`.
    Canonical,
    /// `x_n = e_1 + ... + e_n`; ambient coordinates are tail sums.
    Summing,
    /// `x_n = base_{n+by}`.
    Shifted { by: usize, base: Box<Preset> },
    /// `x_n = factors_n * base_n`. Past the end of `factors` the last factor
    /// repeats.
    Scaled { factors: Vec<f64>, base: Box<Preset> },
    /// `z_n = (1 - a_n) base_n + a_n base_{n+1}`.
    ConvexAlpha {
        schedule: AlphaSchedule,
        base: Box<Preset>,
    },
}

impl Preset {
    pub fn shifted(by: usize, base: Preset) -> Self {
        Preset::Shifted {
            by,
            base: Box::new(base),
        }
    }

    pub fn scaled(factors: Vec<f64>, base: Preset) -> Self {
        Preset::Scaled {
            factors,
            base: Box::new(base),
        }
    }

    pub fn convex(schedule: AlphaSchedule, base: Preset) -> Self {
        Preset::ConvexAlpha {
            schedule,
            base: Box::new(base),
        }
    }

    fn validate(&self) -> Result<()> {
        match self {
            Preset::Canonical | Preset::Summing => Ok(()),
            Preset::Shifted { base, .. } => base.validate(),
            Preset::Scaled { factors, base } => {
                if factors.is_empty() {
                    return Err(Error::InvalidScaling("empty factor list".into()));
                }
                if let Some(f) = factors.iter().find(|f| !(f.is_finite() && **f != 0.0)) {
                    return Err(Error::InvalidScaling(format!("factor {f} is not finite and nonzero")));
                }
                base.validate()
            }
            Preset::ConvexAlpha { schedule, base } => {
                if let Some(a) = schedule.alphas.iter().find(|a| !(a.is_finite() && **a >= 0.0 && **a < 1.0)) {
                    return Err(Error::InvalidSchedule(format!("alpha {a} outside [0, 1)")));
                }
                base.validate()
            }
        }
    }

    /// Ambient dimension and columns of the first `n` vectors.
    fn columns(&self, n: usize) -> Result<(usize, Vec<Vec<f64>>)> {
        Ok(match self {
            Preset::Canonical => (
                n,
                (0..n).map(|j| CoeffVector::unit(j + 1, n).into_vec()).collect(),
            ),
            Preset::Summing => (
                n,
                (0..n)
                    .map(|j| (0..n).map(|i| if i <= j { 1.0 } else { 0.0 }).collect())
                    .collect(),
            ),
            Preset::Shifted { by, base } => {
                let (dim, mut cols) = base.columns(n + by)?;
                (dim, cols.split_off(*by))
            }
            Preset::Scaled { factors, base } => {
                let (dim, mut cols) = base.columns(n)?;
                for (j, c) in cols.iter_mut().enumerate() {
                    let f = factors.get(j).or(factors.last()).copied().unwrap_or(1.0);
                    c.iter_mut().for_each(|v| *v *= f);
                }
                (dim, cols)
            }
            Preset::ConvexAlpha { schedule, base } => {
                let (dim, cols) = base.columns(n + 1)?;
                let alphas = schedule.extended(n)?;
                let out = (0..n)
                    .map(|j| {
                        let a = alphas[j];
                        cols[j]
                            .iter()
                            .zip(&cols[j + 1])
                            .map(|(x, y)| (1.0 - a) * x + a * y)
                            .collect()
                    })
                    .collect();
                (dim, out)
            }
        })
    }
}

impl fmt::Display for Preset {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Preset::Canonical => write!(f, "canonical"),
            Preset::Summing => write!(f, "summing"),
            Preset::Shifted { by, base } => write!(f, "shifted:{by}({base})"),
            Preset::Scaled { base, .. } => write!(f, "scaled({base})"),
            Preset::ConvexAlpha { base, .. } => write!(f, "convex_alpha({base})"),
        }
    }
}

/// A basic sequence `(x_n)` at truncation `truncation`, described by the
/// ambient norm and the preset that places each `x_n` in ambient
/// coordinates.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct BasicSequenceSpec {
    pub ambient: SpaceOracle,
    pub preset: Preset,
    pub truncation: usize,
}

impl BasicSequenceSpec {
    pub fn new(ambient: SpaceOracle, preset: Preset, truncation: usize) -> Result<Self> {
        let s = Self {
            ambient,
            preset,
            truncation,
        };
        s.validate()?;
        Ok(s)
    }

    pub fn canonical(ambient: SpaceOracle, truncation: usize) -> Self {
        Self {
            ambient,
            preset: Preset::Canonical,
            truncation,
        }
    }

    /// The summing basis of c0.
    pub fn summing(truncation: usize) -> Self {
        Self {
            ambient: SpaceOracle::C0Sup,
            preset: Preset::Summing,
            truncation,
        }
    }

    /// Same sequence at another truncation.
    pub fn with_truncation(&self, truncation: usize) -> Self {
        Self {
            truncation,
            ..self.clone()
        }
    }

    pub fn validate(&self) -> Result<()> {
        self.ambient.validate()?;
        self.preset.validate()?;
        // Triangular with nonzero diagonal implies independence; presets that
        // are not triangular in ambient coordinates are checked by rank.
        let b = self.resolve(self.truncation.max(1))?;
        if linalg::rank(&b.matrix()) < b.n {
            return Err(Error::InvalidParameter(format!(
                "vectors of {self} are linearly dependent"
            )));
        }
        Ok(())
    }

    /// Ambient columns of `x_1, ..., x_n`.
    pub fn resolve(&self, n: usize) -> Result<ResolvedBasis> {
        let (dim, cols) = self.preset.columns(n)?;
        Ok(ResolvedBasis { n, dim, cols })
    }

    /// `||sum a_n x_n||` in the ambient norm.
    pub fn norm(&self, a: &[f64]) -> Result<f64> {
        let b = self.resolve(a.len())?;
        self.ambient.norm(&b.expand(a))
    }

    /// Ambient vector `sum a_n x_n`.
    pub fn expand(&self, a: &CoeffVector) -> Result<CoeffVector> {
        let b = self.resolve(a.len())?;
        CoeffVector::new(b.expand(a))
    }
}

impl fmt::Display for BasicSequenceSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} in {} (N={})", self.preset, self.ambient, self.truncation)
    }
}

/// Explicit ambient columns of the first `n` vectors of a basic sequence.
#[derive(Debug, Clone, PartialEq)]
pub struct ResolvedBasis {
    pub n: usize,
    dim: usize,
    cols: Vec<Vec<f64>>,
}

impl ResolvedBasis {
    pub fn ambient_dim(&self) -> usize {
        self.dim
    }

    /// Ambient coordinates of `x_{j+1}`.
    pub fn column(&self, j: usize) -> &[f64] {
        &self.cols[j]
    }

    /// `sum a_j x_j`; entries of `a` past `n` are ignored.
    pub fn expand(&self, a: &[f64]) -> Vec<f64> {
        let mut y = vec![0.0; self.dim];
        for (c, &aj) in self.cols.iter().zip(a) {
            if aj != 0.0 {
                for (yi, ci) in y.iter_mut().zip(c) {
                    *yi += aj * ci;
                }
            }
        }
        y
    }

    /// The `dim x n` change-of-basis matrix.
    pub fn matrix(&self) -> Matrix {
        Matrix::from_columns(&self.cols, self.dim)
    }
}

/// Coefficients `(a_n)` with `sum a_n x_n = v`.
pub fn coefficients(seq: &BasicSequenceSpec, v: &CoeffVector) -> Result<CoeffVector> {
    let b = seq.resolve(seq.truncation)?;
    let dim = b.ambient_dim();
    let outside = v.as_slice().iter().skip(dim).fold(0.0_f64, |m, x| m.max(x.abs()));
    if outside > tolerance::CERTIFIED {
        return Err(Error::NotInSpan { residual: outside });
    }
    let rhs = v.resized(dim).into_vec();
    let (a, residual) = linalg::solve(&b.matrix(), &rhs);
    if residual > tolerance::CERTIFIED {
        return Err(Error::NotInSpan { residual });
    }
    CoeffVector::new(a)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum Side {
    /// Keep entries `1..=n`.
    P,
    /// Keep entries `> n`.
    R,
}

/// `P_n a` or `R_n a = a - P_n a` in coefficient space.
pub fn project(seq: &BasicSequenceSpec, a: &CoeffVector, n: usize, side: Side) -> Result<CoeffVector> {
    if n == 0 || n > seq.truncation {
        return Err(Error::IndexError {
            index: n,
            len: seq.truncation,
        });
    }
    let out = a
        .iter()
        .enumerate()
        .map(|(i, &x)| match (side, i < n) {
            (Side::P, true) | (Side::R, false) => x,
            _ => 0.0,
        })
        .collect();
    Ok(CoeffVector::from_vec(out))
}

/// A point of the coefficient simplex: nonnegative entries summing to one.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "CoeffVector", into = "CoeffVector")]
pub struct SimplexPoint {
    t: CoeffVector,
}

impl SimplexPoint {
    /// Accepts `t` when every entry is `>= -1e-12` and the sum is within
    /// `1e-12` of one; tiny negative entries are clamped to zero.
    pub fn new(t: CoeffVector) -> Result<Self> {
        let tol = tolerance::ALGEBRAIC;
        if let Some((i, &x)) = t.iter().enumerate().find(|(_, &x)| x < -tol) {
            return Err(Error::NotInSimplex(format!("coordinate {} is negative ({x:e})", i + 1)));
        }
        let sum: f64 = t.iter().sum();
        if (sum - 1.0).abs() > tol {
            return Err(Error::NotInSimplex(format!("coordinates sum to {sum}, not 1")));
        }
        let v = t.iter().map(|&x| x.max(0.0)).collect();
        Ok(Self {
            t: CoeffVector::from_vec(v),
        })
    }

    /// Wraps entries already known to be a simplex point up to a tracked
    /// defect (used for truncated maps whose columns lose mass).
    pub(crate) fn from_raw(t: Vec<f64>) -> Self {
        Self {
            t: CoeffVector::from_vec(t),
        }
    }

    /// The vertex `e_k`.
    pub fn vertex(k: usize, len: usize) -> Self {
        Self {
            t: CoeffVector::unit(k, len),
        }
    }

    pub fn uniform(len: usize) -> Self {
        Self {
            t: CoeffVector::from_vec(vec![1.0 / len as f64; len]),
        }
    }

    pub fn coeffs(&self) -> &CoeffVector {
        &self.t
    }

    pub fn support_len(&self) -> usize {
        self.t.support_len()
    }
}

impl std::ops::Deref for SimplexPoint {
    type Target = [f64];

    fn deref(&self) -> &[f64] {
        &self.t
    }
}

impl TryFrom<CoeffVector> for SimplexPoint {
    type Error = Error;

    fn try_from(t: CoeffVector) -> Result<Self> {
        Self::new(t)
    }
}

impl From<SimplexPoint> for CoeffVector {
    fn from(p: SimplexPoint) -> Self {
        p.t
    }
}

/// Coefficients of `v` as a simplex point.
pub fn simplex_membership(seq: &BasicSequenceSpec, v: &CoeffVector) -> Result<SimplexPoint> {
    SimplexPoint::new(coefficients(seq, v)?)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn v(x: &[f64]) -> CoeffVector {
        CoeffVector::new(x.to_vec()).unwrap()
    }

    #[test]
    fn coefficient_examples() {
        let s = BasicSequenceSpec::summing(4);
        assert_eq!(coefficients(&s, &v(&[1.0, 1.0])).unwrap(), v(&[0.0, 1.0]));
        let c = BasicSequenceSpec::canonical(SpaceOracle::C0Sup, 2);
        assert_eq!(coefficients(&c, &v(&[3.0, -1.0])).unwrap(), v(&[3.0, -1.0]));
        assert!(matches!(
            coefficients(&c, &v(&[1.0, 0.0, 1.0])),
            Err(Error::NotInSpan { .. })
        ));
        let sh = BasicSequenceSpec::new(SpaceOracle::ell1(), Preset::shifted(1, Preset::Canonical), 2).unwrap();
        assert!(matches!(
            coefficients(&sh, &v(&[1.0, 0.0, 0.0])),
            Err(Error::NotInSpan { .. })
        ));
        assert_eq!(coefficients(&sh, &v(&[0.0, 2.0, 5.0])).unwrap(), v(&[2.0, 5.0]));
    }

    #[test]
    fn projection_examples() {
        let s = BasicSequenceSpec::canonical(SpaceOracle::ell1(), 5);
        let a = v(&[1.0, 2.0, 3.0]);
        assert_eq!(project(&s, &a, 2, Side::P).unwrap(), v(&[1.0, 2.0, 0.0]));
        assert_eq!(project(&s, &a, 2, Side::R).unwrap(), v(&[0.0, 0.0, 3.0]));
        assert_eq!(project(&s, &a, 5, Side::P).unwrap(), a);
        assert!(matches!(
            project(&s, &a, 0, Side::P),
            Err(Error::IndexError { .. })
        ));
        assert!(project(&s, &a, 6, Side::R).is_err());
    }

    #[test]
    fn simplex_examples() {
        let s = BasicSequenceSpec::summing(3);
        let b = s.resolve(3).unwrap();
        let x1 = CoeffVector::new(b.column(0).to_vec()).unwrap();
        assert_eq!(simplex_membership(&s, &x1).unwrap().coeffs(), &v(&[1.0]));
        let half = v(&b.expand(&[0.5, 0.5]));
        assert_eq!(&simplex_membership(&s, &half).unwrap()[..2], &[0.5, 0.5]);
        let bad = v(&b.expand(&[2.0, -1.0]));
        assert!(matches!(
            simplex_membership(&s, &bad),
            Err(Error::NotInSimplex(_))
        ));
        let p = SimplexPoint::new(v(&[1.0 + 5e-13, -5e-13])).unwrap();
        assert_eq!(p[1], 0.0);
    }

    #[test]
    fn summing_norm_matches_space() {
        let s = BasicSequenceSpec::summing(3);
        let a = [2.0, -1.0, 0.5];
        assert_eq!(s.norm(&a).unwrap(), SpaceOracle::SummingC0.norm(&a).unwrap());
    }

    #[test]
    fn presets_round_trip_json() {
        let s = BasicSequenceSpec::new(
            SpaceOracle::C0Sup,
            Preset::scaled(vec![0.25, 0.5, 1.0], Preset::shifted(2, Preset::Summing)),
            6,
        )
        .unwrap();
        let j = serde_json::to_string(&s).unwrap();
        let back: BasicSequenceSpec = serde_json::from_str(&j).unwrap();
        assert_eq!(back, s);
        assert!(serde_json::from_str::<BasicSequenceSpec>(
            r#"{"ambient":{"family":"c0_sup"},"preset":{"kind":"canonical"},"truncation":2,"x":1}"#
        )
        .is_err());
    }

    #[test]
    fn convex_columns() {
        let sched = AlphaSchedule::explicit(vec![1.0 / 18.0, 0.01]).unwrap();
        let s = BasicSequenceSpec::new(SpaceOracle::ell1(), Preset::convex(sched, Preset::Canonical), 2).unwrap();
        let b = s.resolve(2).unwrap();
        assert_eq!(b.ambient_dim(), 3);
        assert_eq!(b.column(0), &[17.0 / 18.0, 1.0 / 18.0, 0.0]);
    }
}
