//! Dense two-phase simplex method with Bland's anti-cycling rule.

use crate::error::{Error, Result};
use crate::tolerance::LP_OPTIMALITY;
use crate::vector::CoeffVector;

use super::SearchReport;

const PIVOT_EPS: f64 = 1e-11;
const HARRIS_SLACK: f64 = 1e-9;
const ITERATION_CAP: usize = 1_000_000;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Sense {
    Min,
    Max,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Relation {
    Le,
    Eq,
    Ge,
}

#[derive(Debug, Clone, PartialEq)]
pub struct Constraint {
    pub coeffs: Vec<f64>,
    pub relation: Relation,
    pub rhs: f64,
}

/// `sense objective·x` subject to linear constraints and per-variable bounds.
/// Bounds default to `[0, +inf)`; use `f64::NEG_INFINITY` / `f64::INFINITY`
/// for missing sides.
#[derive(Debug, Clone, PartialEq)]
pub struct LinearProgram {
    pub sense: Sense,
    pub objective: Vec<f64>,
    pub constraints: Vec<Constraint>,
    pub bounds: Vec<(f64, f64)>,
}

impl LinearProgram {
    pub fn new(sense: Sense, objective: Vec<f64>) -> Self {
        let n = objective.len();
        Self {
            sense,
            objective,
            constraints: Vec::new(),
            bounds: vec![(0.0, f64::INFINITY); n],
        }
    }

    pub fn num_vars(&self) -> usize {
        self.objective.len()
    }

    pub fn constrain(&mut self, coeffs: Vec<f64>, relation: Relation, rhs: f64) -> &mut Self {
        self.constraints.push(Constraint {
            coeffs,
            relation,
            rhs,
        });
        self
    }

    pub fn bound(&mut self, var: usize, lower: f64, upper: f64) -> &mut Self {
        self.bounds[var] = (lower, upper);
        self
    }

    pub fn free(&mut self, var: usize) -> &mut Self {
        self.bound(var, f64::NEG_INFINITY, f64::INFINITY)
    }

    fn validate(&self) -> Result<()> {
        let n = self.num_vars();
        if self.bounds.len() != n {
            return Err(Error::DimensionMismatch {
                expected: n,
                actual: self.bounds.len(),
            });
        }
        if self.objective.iter().any(|x| !x.is_finite()) {
            return Err(Error::InvalidParameter("non-finite objective".into()));
        }
        for c in &self.constraints {
            if c.coeffs.len() != n {
                return Err(Error::DimensionMismatch {
                    expected: n,
                    actual: c.coeffs.len(),
                });
            }
            if !c.rhs.is_finite() || c.coeffs.iter().any(|x| !x.is_finite()) {
                return Err(Error::InvalidParameter("non-finite constraint".into()));
            }
        }
        for &(lo, hi) in &self.bounds {
            if lo.is_nan() || hi.is_nan() || lo > hi || lo == f64::INFINITY || hi == f64::NEG_INFINITY
            {
                return Err(Error::InvalidParameter(format!("bad bounds [{lo}, {hi}]")));
            }
        }
        Ok(())
    }
}

/// How an original variable is written in terms of nonnegative standard-form
/// variables: `x = offset + sum(sign * s)`.
struct VarMap {
    offset: f64,
    parts: Vec<(usize, f64)>,
}

struct Tableau {
    /// m constraint rows followed by the objective row; last column is rhs.
    t: Vec<Vec<f64>>,
    basis: Vec<usize>,
    ncols: usize,
    iterations: usize,
}

impl Tableau {
    fn m(&self) -> usize {
        self.basis.len()
    }

    fn rhs(&self, i: usize) -> f64 {
        self.t[i][self.ncols]
    }

    fn pivot(&mut self, r: usize, e: usize) {
        let p = self.t[r][e];
        for x in self.t[r].iter_mut() {
            *x /= p;
        }
        self.t[r][e] = 1.0;
        let pivot_row = self.t[r].clone();
        for (i, row) in self.t.iter_mut().enumerate() {
            if i == r {
                continue;
            }
            let f = row[e];
            if f != 0.0 {
                for (x, &y) in row.iter_mut().zip(&pivot_row) {
                    *x -= f * y;
                }
                row[e] = 0.0;
            }
        }
        self.basis[r] = e;
        self.iterations += 1;
    }

    /// Runs simplex iterations on the current objective row with Bland's rule.
    /// Only columns with `allowed[j]` may enter.
    fn optimize(&mut self, allowed: &[bool]) -> Result<()> {
        let obj = self.m();
        loop {
            if self.iterations >= ITERATION_CAP {
                return Err(Error::CycleSuspected(ITERATION_CAP));
            }
            let entering =
                (0..self.ncols).find(|&j| allowed[j] && self.t[obj][j] < -LP_OPTIMALITY);
            let Some(e) = entering else {
                return Ok(());
            };
            // Harris two-pass ratio test: bound the step with a small
            // feasibility slack, then take the largest pivot within it.
            let mut theta = f64::INFINITY;
            for i in 0..self.m() {
                let a = self.t[i][e];
                if a > PIVOT_EPS {
                    theta = theta.min((self.rhs(i).max(0.0) + HARRIS_SLACK) / a);
                }
            }
            let mut leave: Option<(usize, f64)> = None;
            for i in 0..self.m() {
                let a = self.t[i][e];
                if a > PIVOT_EPS && self.rhs(i).max(0.0) / a <= theta {
                    let better = match leave {
                        None => true,
                        Some((li, la)) => a > la * (1.0 + 1e-9) || (a >= la * (1.0 - 1e-9) && self.basis[i] < self.basis[li]),
                    };
                    if better {
                        leave = Some((i, a));
                    }
                }
            }
            let Some((r, _)) = leave else {
                return Err(Error::Unbounded);
            };
            self.pivot(r, e);
        }
    }

    fn set_objective(&mut self, cost: &[f64]) {
        let obj = self.m();
        let mut row = vec![0.0; self.ncols + 1];
        row[..cost.len()].copy_from_slice(cost);
        for i in 0..self.m() {
            let cb = cost.get(self.basis[i]).copied().unwrap_or(0.0);
            if cb != 0.0 {
                for (x, &y) in row.iter_mut().zip(&self.t[i]) {
                    *x -= cb * y;
                }
            }
        }
        self.t[obj] = row;
    }
}

/// Solves the program with the two-phase simplex method.
///
/// The returned report carries the objective value in the program's own sense
/// and the optimal point in the original variables. Phase one minimizes the
/// sum of artificial variables; a positive optimum there means `Infeasible`.
pub fn lp_solve(lp: &LinearProgram) -> Result<SearchReport> {
    lp.validate()?;
    let n = lp.num_vars();

    let mut maps = Vec::with_capacity(n);
    let mut nstd = 0;
    let mut bound_rows: Vec<(usize, f64)> = Vec::new();
    for &(lo, hi) in &lp.bounds {
        let map = if lo.is_finite() {
            if hi.is_finite() {
                bound_rows.push((nstd, hi - lo));
            }
            nstd += 1;
            VarMap {
                offset: lo,
                parts: vec![(nstd - 1, 1.0)],
            }
        } else if hi.is_finite() {
            nstd += 1;
            VarMap {
                offset: hi,
                parts: vec![(nstd - 1, -1.0)],
            }
        } else {
            nstd += 2;
            VarMap {
                offset: 0.0,
                parts: vec![(nstd - 2, 1.0), (nstd - 1, -1.0)],
            }
        };
        maps.push(map);
    }

    // Standard-form rows: (coeffs over std vars, relation, rhs >= 0).
    let mut rows: Vec<(Vec<f64>, Relation, f64)> = Vec::new();
    for c in &lp.constraints {
        let mut coeffs = vec![0.0; nstd];
        let mut rhs = c.rhs;
        for (j, &a) in c.coeffs.iter().enumerate() {
            rhs -= a * maps[j].offset;
            for &(s, sign) in &maps[j].parts {
                coeffs[s] += a * sign;
            }
        }
        rows.push((coeffs, c.relation, rhs));
    }
    for &(s, ub) in &bound_rows {
        let mut coeffs = vec![0.0; nstd];
        coeffs[s] = 1.0;
        rows.push((coeffs, Relation::Le, ub));
    }
    for row in rows.iter_mut() {
        if row.2 < 0.0 {
            row.0.iter_mut().for_each(|x| *x = -*x);
            row.2 = -row.2;
            row.1 = match row.1 {
                Relation::Le => Relation::Ge,
                Relation::Ge => Relation::Le,
                Relation::Eq => Relation::Eq,
            };
        }
    }

    let m = rows.len();
    let nslack = rows.iter().filter(|r| r.1 != Relation::Eq).count();
    let nart = rows.iter().filter(|r| r.1 != Relation::Le).count();
    let ncols = nstd + nslack + nart;
    let art_start = nstd + nslack;

    let mut t = vec![vec![0.0; ncols + 1]; m + 1];
    let mut basis = vec![0; m];
    let (mut si, mut ai) = (nstd, art_start);
    for (i, (coeffs, rel, rhs)) in rows.iter().enumerate() {
        t[i][..nstd].copy_from_slice(coeffs);
        t[i][ncols] = *rhs;
        match rel {
            Relation::Le => {
                t[i][si] = 1.0;
                basis[i] = si;
                si += 1;
            }
            Relation::Ge => {
                t[i][si] = -1.0;
                si += 1;
                t[i][ai] = 1.0;
                basis[i] = ai;
                ai += 1;
            }
            Relation::Eq => {
                t[i][ai] = 1.0;
                basis[i] = ai;
                ai += 1;
            }
        }
    }
    let mut tab = Tableau {
        t,
        basis,
        ncols,
        iterations: 0,
    };

    if nart > 0 {
        let mut cost = vec![0.0; ncols];
        cost[art_start..].iter_mut().for_each(|c| *c = 1.0);
        tab.set_objective(&cost);
        tab.optimize(&vec![true; ncols])?;
        let infeasibility = -tab.t[m][ncols];
        let scale = 1.0 + rows.iter().fold(0.0_f64, |a, r| a.max(r.2));
        if infeasibility > 1e-9 * scale {
            return Err(Error::Infeasible);
        }
        // Drive remaining (zero-level) artificials out of the basis; rows where
        // that is impossible are redundant and get dropped.
        let mut i = 0;
        while i < tab.m() {
            if tab.basis[i] >= art_start {
                let col = (0..art_start).find(|&j| tab.t[i][j].abs() > 1e-9);
                match col {
                    Some(j) => tab.pivot(i, j),
                    None => {
                        tab.t.remove(i);
                        tab.basis.remove(i);
                        continue;
                    }
                }
            }
            i += 1;
        }
    }

    let flip = if lp.sense == Sense::Max { -1.0 } else { 1.0 };
    let mut cost = vec![0.0; ncols];
    for (j, map) in maps.iter().enumerate() {
        for &(s, sign) in &map.parts {
            cost[s] += flip * lp.objective[j] * sign;
        }
    }
    tab.set_objective(&cost);
    let allowed: Vec<bool> = (0..ncols).map(|j| j < art_start).collect();
    tab.optimize(&allowed)?;

    let mut std_vals = vec![0.0; ncols];
    for (i, &b) in tab.basis.iter().enumerate() {
        std_vals[b] = tab.rhs(i).max(0.0);
    }
    let x: Vec<f64> = maps
        .iter()
        .map(|m| m.offset + m.parts.iter().map(|&(s, sign)| sign * std_vals[s]).sum::<f64>())
        .collect();
    let value = lp.objective.iter().zip(&x).map(|(c, x)| c * x).sum();
    let worst = max_violation(lp, &x);
    if worst > 1e-7 * (1.0 + x.iter().fold(0.0_f64, |m, v| m.max(v.abs()))) {
        return Err(Error::Internal(format!("simplex lost feasibility (violation {worst:e})")));
    }
    Ok(SearchReport {
        best_value: value,
        best_point: CoeffVector::from_vec(x),
        iterations: tab.iterations,
        converged: true,
        seed: 0,
    })
}

/// Largest violation of any constraint or bound at `x`.
pub fn max_violation(lp: &LinearProgram, x: &[f64]) -> f64 {
    let rows = lp.constraints.iter().map(|c| {
        let s: f64 = c.coeffs.iter().zip(x).map(|(a, b)| a * b).sum();
        match c.relation {
            Relation::Le => s - c.rhs,
            Relation::Ge => c.rhs - s,
            Relation::Eq => (s - c.rhs).abs(),
        }
    });
    let bounds = lp.bounds.iter().zip(x).map(|(&(lo, hi), &v)| (lo - v).max(v - hi));
    rows.chain(bounds).fold(0.0, f64::max)
}
