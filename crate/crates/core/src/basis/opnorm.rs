//! Operator norms `sup { max_t ||G_t a|| : ||F a|| <= 1 }` over coefficient
//! vectors `a`, optionally restricted to `sum a = 0`.
//!
//! Two exact routes are tried in turn. The vertex route lists the extreme
//! points of the `from` ball (ambient extreme points cut down to the range of
//! `F`) and maximizes the convex objective over them. The LP route solves one
//! linear program per norming functional of each target norm. When neither
//! applies the result is a sampled lower bound.

use crate::error::{Error, Result};
use crate::optim::linalg::{self, Matrix};
use crate::optim::{
    for_each_section_point, lp_solve, sampled_ascent, section, section_size, AscentConfig,
    LinExpr, LpBuilder, NormBound, Relation, Sense,
};
use crate::spaces::{extreme_points_capped, norming_functionals_capped, ExtremeCap, SpaceOracle};
use crate::tolerance;
use crate::vector::CoeffVector;

use super::{ConstantEstimate, Method};

/// A linear image `G a` measured in `space`.
#[derive(Debug, Clone)]
pub struct Target<'a> {
    pub space: &'a SpaceOracle,
    pub map: Matrix,
}

#[derive(Debug, Clone)]
pub struct RatioProblem<'a> {
    pub from_space: &'a SpaceOracle,
    pub from_map: Matrix,
    pub targets: Vec<Target<'a>>,
    pub sum_zero: bool,
}

#[derive(Debug, Clone)]
pub struct EstimateOptions {
    pub cap: ExtremeCap,
    /// Candidate count above which the LP route is preferred when available.
    pub prefer_lp_above: usize,
    /// Skip the exact routes.
    pub force_sampling: bool,
    pub trials: usize,
    pub seed: u64,
    /// Known upper bound used when no exact route applies.
    pub analytic_upper: Option<(f64, String)>,
    pub tol: f64,
}

impl Default for EstimateOptions {
    fn default() -> Self {
        Self {
            cap: ExtremeCap::default(),
            prefer_lp_above: 2_000_000,
            force_sampling: false,
            trials: 200,
            seed: 0,
            analytic_upper: None,
            tol: tolerance::CERTIFIED,
        }
    }
}

impl EstimateOptions {
    pub fn sampling(trials: usize, seed: u64) -> Self {
        Self {
            force_sampling: true,
            trials,
            seed,
            ..Self::default()
        }
    }
}

impl RatioProblem<'_> {
    fn dim(&self) -> usize {
        self.from_map.cols
    }

    fn check(&self) -> Result<()> {
        for t in &self.targets {
            if t.map.cols != self.dim() {
                return Err(Error::DimensionMismatch {
                    expected: self.dim(),
                    actual: t.map.cols,
                });
            }
        }
        if self.targets.is_empty() {
            return Err(Error::EmptyInput);
        }
        Ok(())
    }

    /// Objective value and `||F a||` at `a`.
    fn eval(&self, a: &[f64]) -> (f64, f64) {
        let from = self.from_space.norm_unchecked(&self.from_map.mul_vec(a));
        let to = self
            .targets
            .iter()
            .map(|t| t.space.norm_unchecked(&t.map.mul_vec(a)))
            .fold(0.0, f64::max);
        (to, from)
    }

    fn ratio(&self, a: &[f64]) -> f64 {
        let (to, from) = self.eval(a);
        if from > 0.0 {
            to / from
        } else if to > 0.0 {
            f64::INFINITY
        } else {
            0.0
        }
    }
}

fn estimate(lower: f64, witness: Vec<f64>, upper: f64, source: &str, method: Method, n: usize, certified: bool) -> ConstantEstimate {
    ConstantEstimate {
        lower,
        lower_witness: if witness.is_empty() {
            Vec::new()
        } else {
            vec![CoeffVector::from_vec(witness)]
        },
        upper,
        upper_source: source.to_string(),
        method,
        certified,
        truncation: n,
        flag: None,
    }
}

/// Computes the operator norm of `problem`, exactly when possible.
pub fn operator_norm(problem: &RatioProblem, opts: &EstimateOptions) -> Result<ConstantEstimate> {
    problem.check()?;
    let n = problem.dim();
    let domain = if problem.sum_zero { n.saturating_sub(1) } else { n };
    if domain == 0 {
        return Ok(estimate(0.0, Vec::new(), 0.0, "trivial domain", Method::ExactExtremePoints, n, true));
    }
    if let Some(k) = unbounded_direction(problem) {
        return Ok(estimate(
            f64::INFINITY,
            k,
            f64::INFINITY,
            "kernel of the from-map",
            Method::ExactExtremePoints,
            n,
            true,
        ));
    }
    if !opts.force_sampling && problem.from_space.polyhedral() {
        let lp_ok = problem.targets.iter().all(|t| t.space.polyhedral());
        match vertex_route(problem, opts, lp_ok) {
            Ok(Some(e)) => return Ok(e),
            Ok(None) | Err(Error::DimensionCap { .. }) => {}
            Err(e) => return Err(e),
        }
        if lp_ok {
            match lp_route(problem, opts) {
                Ok(e) => return Ok(e),
                Err(Error::DimensionCap { .. }) => {}
                Err(e) => return Err(e),
            }
        }
    }
    sampling_route(problem, opts)
}

/// A nonzero `a` in the domain with `F a = 0` and some `G_t a != 0`.
fn unbounded_direction(p: &RatioProblem) -> Option<Vec<f64>> {
    let n = p.dim();
    let mut rows: Vec<Vec<f64>> = (0..p.from_map.rows).map(|i| p.from_map.row(i).to_vec()).collect();
    if p.sum_zero {
        rows.push(vec![1.0; n]);
    }
    if rows.is_empty() {
        rows.push(vec![0.0; n]);
    }
    let kernel = linalg::nullspace(&Matrix::from_rows(&rows));
    kernel.into_iter().find(|k| {
        p.targets
            .iter()
            .any(|t| t.map.mul_vec(k).iter().any(|v| v.abs() > 1e-12))
    })
}

/// `a = L v` for `v` in the range of `F`: inverse of a square block of
/// independent rows.
struct LeftInverse {
    rows: Vec<usize>,
    inv: Matrix,
}

impl LeftInverse {
    fn new(f: &Matrix) -> Result<Self> {
        let (_, rows) = linalg::rref(&f.transpose());
        let n = f.cols;
        if rows.len() < n {
            return Err(Error::Internal("from-map is not injective".into()));
        }
        let block = Matrix::from_rows(&rows.iter().map(|&i| f.row(i).to_vec()).collect::<Vec<_>>());
        let mut cols = Vec::with_capacity(n);
        for j in 0..n {
            let e = CoeffVector::unit(j + 1, n).into_vec();
            cols.push(
                linalg::solve_square(&block, &e)
                    .ok_or_else(|| Error::Internal("singular pivot block".into()))?,
            );
        }
        Ok(Self {
            rows,
            inv: Matrix::from_columns(&cols, n),
        })
    }

    fn apply(&self, v: &[f64], out: &mut [f64]) {
        for (i, o) in out.iter_mut().enumerate() {
            *o = self.inv.row(i).iter().zip(&self.rows).map(|(c, &r)| c * v[r]).sum();
        }
    }

    /// Ambient normal `w` with `w·v = sum(L v)`.
    fn sum_normal(&self, dim: usize) -> Vec<f64> {
        let mut w = vec![0.0; dim];
        for (k, &r) in self.rows.iter().enumerate() {
            w[r] = (0..self.inv.rows).map(|i| self.inv[(i, k)]).sum();
        }
        w
    }
}

fn vertex_route(p: &RatioProblem, opts: &EstimateOptions, lp_available: bool) -> Result<Option<ConstantEstimate>> {
    let n = p.dim();
    let dim = p.from_map.rows;
    let budget = opts.cap.vertex_budget;
    let mut points: Vec<Vec<f64>> = extreme_points_capped(p.from_space, dim, &opts.cap)?
        .into_iter()
        .map(CoeffVector::into_vec)
        .collect();
    // Cut the ambient ball down to the range of F.
    for normal in linalg::nullspace(&p.from_map.transpose()) {
        points = section(&points, &normal, budget)?;
    }
    let left = LeftInverse::new(&p.from_map)?;
    let normal = p.sum_zero.then(|| left.sum_normal(dim));
    let count = match &normal {
        Some(w) => section_size(&points, w),
        None => points.len(),
    };
    if lp_available && count > opts.prefer_lp_above {
        return Ok(None);
    }

    let mut best = f64::NEG_INFINITY;
    let mut witness = vec![0.0; n];
    let mut a = vec![0.0; n];
    let mut visit = |v: &[f64]| {
        left.apply(v, &mut a);
        let r = p.ratio(&a);
        if r > best {
            best = r;
            witness.copy_from_slice(&a);
        }
    };
    match &normal {
        Some(w) => for_each_section_point(&points, w, budget, visit)?,
        None => points.iter().for_each(|v| visit(v)),
    }
    if best == f64::NEG_INFINITY {
        return Err(Error::Internal("no extreme points in the domain".into()));
    }
    Ok(Some(estimate(best, witness, best, "extreme points", Method::ExactExtremePoints, n, true)))
}

fn lp_route(p: &RatioProblem, opts: &EstimateOptions) -> Result<ConstantEstimate> {
    let n = p.dim();
    let mut builder = LpBuilder::new();
    let a = builder.add_free_vars(n);
    let y: Vec<LinExpr> = (0..p.from_map.rows)
        .map(|i| LinExpr::dot(&a, p.from_map.row(i)))
        .collect();
    builder.add_norm_bound(p.from_space, &y, NormBound::Const(1.0))?;
    if p.sum_zero {
        builder.constrain(LinExpr::dot(&a, &vec![1.0; n]), Relation::Eq);
    }

    let mut upper = 0.0_f64;
    let mut lower = 0.0_f64;
    let mut witness = Vec::new();
    let mut solved = 0usize;
    for t in &p.targets {
        let phis = norming_functionals_capped(t.space, t.map.rows, &opts.cap)?;
        let gt = t.map.transpose();
        for phi in phis {
            // The domain is symmetric, so phi and -phi give the same value.
            if phi.iter().find(|v| **v != 0.0).is_none_or(|v| *v < 0.0) {
                continue;
            }
            let c = gt.mul_vec(&phi);
            if c.iter().all(|v| v.abs() < 1e-15) {
                continue;
            }
            let lp = builder.build(Sense::Max, &LinExpr::dot(&a, &c));
            let rep = match lp_solve(&lp) {
                Ok(r) => r,
                Err(Error::Unbounded) => {
                    return Ok(estimate(f64::INFINITY, Vec::new(), f64::INFINITY, "linear programs", Method::ExactLp, n, true))
                }
                Err(e) => return Err(e),
            };
            solved += 1;
            upper = upper.max(rep.best_value);
            let point = rep.best_point.as_slice()[..n].to_vec();
            let r = p.ratio(&point);
            if r > lower || witness.is_empty() {
                lower = r.max(lower);
                witness = point;
            }
        }
    }
    if solved == 0 {
        return Ok(estimate(0.0, Vec::new(), 0.0, "linear programs", Method::ExactLp, n, true));
    }
    let upper = upper.max(lower);
    let certified = upper - lower <= opts.tol;
    Ok(estimate(lower, witness, upper, "linear programs", Method::ExactLp, n, certified))
}

fn sampling_route(p: &RatioProblem, opts: &EstimateOptions) -> Result<ConstantEstimate> {
    let n = p.dim();
    let objective = |a: &[f64]| {
        let r = p.ratio(a);
        if r.is_finite() {
            r
        } else {
            0.0
        }
    };
    let sum_zero = p.sum_zero;
    let project = |a: &mut [f64]| {
        if sum_zero {
            let mean = a.iter().sum::<f64>() / a.len() as f64;
            a.iter_mut().for_each(|v| *v -= mean);
        }
        let f = p.from_space.norm_unchecked(&p.from_map.mul_vec(a));
        if !(f > 1e-300) || !f.is_finite() {
            return false;
        }
        a.iter_mut().for_each(|v| *v /= f);
        true
    };
    let rep = sampled_ascent(objective, project, n, AscentConfig::new(opts.trials, opts.seed))?;
    let lower = rep.best_value.max(0.0);
    let (upper, source) = opts
        .analytic_upper
        .clone()
        .unwrap_or((f64::INFINITY, "none".to_string()));
    let certified = upper - lower <= opts.tol;
    let mut e = estimate(lower, rep.best_point.into_vec(), upper, &source, Method::SampledAscent, n, certified);
    if upper < lower - opts.tol {
        e.flag = Some("sampled lower exceeds analytic upper".into());
    }
    Ok(e)
}
