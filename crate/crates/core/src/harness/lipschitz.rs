use serde::{Deserialize, Serialize};

use crate::basis::{
    basis_constant_with, operator_norm, BasicSequenceSpec, ConstantEstimate, EstimateOptions, Method,
    RatioProblem, Target,
};
use crate::constructions::{AffineMapSpec, Entry, MapKind};
use crate::error::{Error, Result};
use crate::optim::linalg::Matrix;
use crate::spaces::SpaceOracle;
use crate::tolerance;

use super::Growth;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "SCREAMING_SNAKE_CASE")]
pub enum LipschitzMethod {
    Exact,
    Sample,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "SCREAMING_SNAKE_CASE")]
pub enum Direction {
    /// `sup ||A d|| / ||d||`.
    Forward,
    /// `inf ||A d|| / ||d||`.
    Inverse,
}

#[derive(Debug, Clone)]
pub struct LipschitzOptions {
    pub trials: usize,
    pub seed: u64,
    pub growth: Growth,
}

impl Default for LipschitzOptions {
    fn default() -> Self {
        Self {
            trials: 200,
            seed: 0,
            growth: Growth::default(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct LipschitzReport {
    pub direction: Direction,
    pub method: LipschitzMethod,
    pub truncation: usize,
    /// FORWARD: over the difference space `sum d = 0`. INVERSE: the
    /// equivalence route, over all coefficient vectors.
    pub estimate: ConstantEstimate,
    /// FORWARD: the equivalence constant over all coefficient vectors (an
    /// upper bound for `estimate`). INVERSE: the direct route over the
    /// difference space (a value `>= estimate`).
    pub cross_check: ConstantEstimate,
    /// FORWARD: an upper bound. INVERSE: a lower bound. `None` when no
    /// closed form is known for the map.
    #[serde(default, with = "option_extended")]
    pub analytic: Option<f64>,
    pub analytic_source: String,
}

impl LipschitzReport {
    /// Whether the computed values sit on the right side of the analytic
    /// bound and of each other.
    pub fn consistent(&self) -> bool {
        let tol = tolerance::CERTIFIED;
        match self.direction {
            Direction::Forward => {
                self.estimate.lower <= self.cross_check.upper + tol
                    && self.analytic.is_none_or(|a| self.estimate.lower <= a + tol)
            }
            Direction::Inverse => {
                self.estimate.lower <= self.cross_check.upper + tol
                    && self.analytic.is_none_or(|a| a <= self.estimate.upper + tol)
            }
        }
    }
}

mod option_extended {
    use serde::{Deserialize, Deserializer, Serializer};

    pub fn serialize<S: Serializer>(x: &Option<f64>, s: S) -> Result<S::Ok, S::Error> {
        match x {
            Some(v) => crate::basis::extended_f64::serialize(v, s),
            None => s.serialize_none(),
        }
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<Option<f64>, D::Error> {
        #[derive(Deserialize)]
        struct W(#[serde(with = "crate::basis::extended_f64")] f64);
        Ok(Option::<W>::deserialize(d)?.map(|w| w.0))
    }
}

fn dense(cols: &[Vec<Entry>]) -> Matrix {
    let rows = cols.iter().flat_map(|c| c.iter().map(|e| e.0)).max().unwrap_or(0).max(cols.len());
    let mut m = Matrix::zeros(rows, cols.len());
    for (j, c) in cols.iter().enumerate() {
        for &(r, w) in c {
            m[(r - 1, j)] += w;
        }
    }
    m
}

/// Columns `1..=n` of `A^p`, growing the map as needed.
fn power(m: &AffineMapSpec, p: usize, n: usize, growth: Growth) -> Result<Matrix> {
    let need = n + p * band(m);
    let map = if need > m.domain() {
        match growth {
            Growth::AutoExtend { cap } if need <= cap => m.extended(need)?,
            Growth::AutoExtend { cap } => {
                return Err(Error::TruncationOverflow {
                    support: need,
                    truncation: cap,
                })
            }
            Growth::Error => m.clone(),
        }
    } else {
        m.clone()
    };
    Ok(dense(&map.power_columns(p, n)?))
}

/// How far right one application can move mass.
fn band(m: &AffineMapSpec) -> usize {
    m.columns
        .iter()
        .enumerate()
        .flat_map(|(j, c)| c.iter().map(move |e| e.0.saturating_sub(j + 1)))
        .max()
        .unwrap_or(0)
}

fn sup_ratio(
    space: &SpaceOracle,
    from: Matrix,
    to: Matrix,
    sum_zero: bool,
    method: LipschitzMethod,
    opts: &LipschitzOptions,
) -> Result<ConstantEstimate> {
    let eopts = match method {
        LipschitzMethod::Exact => EstimateOptions {
            trials: opts.trials,
            seed: opts.seed,
            ..EstimateOptions::default()
        },
        LipschitzMethod::Sample => EstimateOptions::sampling(opts.trials, opts.seed),
    };
    operator_norm(
        &RatioProblem {
            from_space: space,
            from_map: from,
            targets: vec![Target { space, map: to }],
            sum_zero,
        },
        &eopts,
    )
}

/// `1/s` as an estimate for an inf-type constant.
fn reciprocal(s: ConstantEstimate) -> ConstantEstimate {
    let inv = |x: f64| if x > 0.0 { 1.0 / x } else { f64::INFINITY };
    let singular = s.upper.is_infinite();
    ConstantEstimate {
        lower: if singular { 0.0 } else { inv(s.upper) },
        upper: inv(s.lower),
        upper_source: format!("reciprocal of {}", s.upper_source),
        certified: s.certified && !singular,
        flag: if singular {
            Some("singular at truncation".into())
        } else {
            s.flag.clone()
        },
        ..s
    }
}

/// Lipschitz constant of the linear part of `m` (FORWARD) or the inverse
/// constant `c` with `||A d|| >= c ||d||` (INVERSE), at truncation `n`.
pub fn lipschitz_estimate(
    m: &AffineMapSpec,
    space: &SpaceOracle,
    n: usize,
    method: LipschitzMethod,
    direction: Direction,
    opts: &LipschitzOptions,
) -> Result<LipschitzReport> {
    if n == 0 {
        return Err(Error::InvalidParameter("truncation must be >= 1".into()));
    }
    space.validate()?;
    let a = power(m, 1, n, opts.growth)?;
    let id = Matrix::identity(n);
    let (estimate, cross_check) = match direction {
        Direction::Forward => (
            sup_ratio(space, id.clone(), a.clone(), true, method, opts)?,
            sup_ratio(space, id, a, false, method, opts)?,
        ),
        Direction::Inverse => (
            reciprocal(sup_ratio(space, a.clone(), id.clone(), false, method, opts)?),
            reciprocal(sup_ratio(space, a, id, true, method, opts)?),
        ),
    };
    let (analytic, analytic_source) = analytic_bound(m, space, n, direction)?;
    let mut estimate = estimate;
    if method == LipschitzMethod::Sample {
        match direction {
            Direction::Forward => {
                if let Some(u) = analytic {
                    estimate.upper = u;
                    estimate.upper_source = analytic_source.clone();
                }
            }
            Direction::Inverse => {
                estimate.lower = analytic.unwrap_or(0.0).max(0.0);
            }
        }
        estimate.method = Method::SampledAscent;
        estimate.certified = estimate.upper - estimate.lower <= tolerance::CERTIFIED;
    }
    Ok(LipschitzReport {
        direction,
        method,
        truncation: n,
        estimate,
        cross_check,
        analytic,
        analytic_source,
    })
}

/// Closed-form bounds.
///
/// Shift maps on spaces where the shift is an isometry give exactly 1. For
/// the main map, with `x_n = e_n` in `space`, `K` its basis constant at
/// `n + 1` and `S = sum a_j ||x_{j+1}|| / ||x_j||`, write
/// `A d = sum d_j w_j + sum d_j a_j x_{j+1}` with `w_j = (1 - a_j) x_j`.
/// The scaled sequence is `2K/(1 - a_1)`-equivalent to `(x_j)` and
/// `|d_j| <= 2K ||d|| / ||x_j||`, giving
/// `||A d|| <= (2K/(1 - a_1) + 2K S) ||d||` and
/// `||A d|| >= ((1 - a_1)/(2K) - 2K S) ||d||`.
fn analytic_bound(
    m: &AffineMapSpec,
    space: &SpaceOracle,
    n: usize,
    direction: Direction,
) -> Result<(Option<f64>, String)> {
    let shift_isometry = matches!(
        space,
        SpaceOracle::EllP { .. } | SpaceOracle::C0Sup | SpaceOracle::SummingC0
    );
    match m.kind {
        MapKind::F0Shift if shift_isometry => {
            Ok((Some(1.0), "shift is an isometry of the space".into()))
        }
        MapKind::FMain => {
            let alpha = m
                .alpha
                .as_ref()
                .ok_or_else(|| Error::InvalidSchedule("map carries no schedule".into()))?
                .extended(n)?;
            let seq = BasicSequenceSpec::canonical(space.clone(), n + 1);
            let k = basis_constant_with(&seq, n + 1, &EstimateOptions::default())?.upper;
            if !k.is_finite() {
                return Ok((None, "basis constant unavailable".into()));
            }
            let norms: Vec<f64> = (1..=n + 1)
                .map(|j| space.norm(&crate::vector::CoeffVector::unit(j, j)))
                .collect::<Result<_>>()?;
            let s: f64 = (0..n).map(|j| alpha[j] * norms[j + 1] / norms[j]).sum();
            let l = 2.0 * k / (1.0 - alpha[0]);
            Ok(match direction {
                Direction::Forward => (
                    Some(l + 2.0 * k * s),
                    format!("2K/(1-a_1) + 2K S with K = {k}, S = {s}"),
                ),
                Direction::Inverse => (
                    Some((1.0 / l - 2.0 * k * s).max(0.0)),
                    format!("(1-a_1)/(2K) - 2K S with K = {k}, S = {s}"),
                ),
            })
        }
        _ => Ok((None, "none".into())),
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ProbeReport {
    pub truncation: usize,
    /// `(p, Lip(A^p))`.
    pub per_p: Vec<(usize, ConstantEstimate)>,
    #[serde(with = "crate::basis::extended_f64")]
    pub sup: f64,
    /// All values within the certified tolerance of each other.
    pub flat: bool,
}

/// FORWARD Lipschitz constants of `A, A^2, ..., A^p_max`.
pub fn uniform_lipschitz_probe(
    m: &AffineMapSpec,
    space: &SpaceOracle,
    n: usize,
    p_max: usize,
    opts: &LipschitzOptions,
) -> Result<ProbeReport> {
    if p_max == 0 || n == 0 {
        return Err(Error::InvalidParameter("need p_max >= 1 and N >= 1".into()));
    }
    space.validate()?;
    let mut per_p = Vec::with_capacity(p_max);
    for p in 1..=p_max {
        let ap = power(m, p, n, opts.growth)?;
        let e = sup_ratio(space, Matrix::identity(n), ap, true, LipschitzMethod::Exact, opts)?;
        per_p.push((p, e));
    }
    let sup = per_p.iter().map(|(_, e)| e.upper).fold(0.0, f64::max);
    let lo = per_p.iter().map(|(_, e)| e.lower).fold(f64::INFINITY, f64::min);
    Ok(ProbeReport {
        truncation: n,
        flat: sup - lo <= tolerance::CERTIFIED,
        per_p,
        sup,
    })
}
