//! Builder for linear programs over named variables, including the epigraph
//! reduction `||y|| <= bound` of every polyhedral norm family.

use crate::error::{Error, Result};
use crate::spaces::{lin_weight, SpaceOracle};

use super::lp::{LinearProgram, Relation, Sense};

/// Sparse affine expression `sum coeff * var + constant`.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct LinExpr {
    pub terms: Vec<(usize, f64)>,
    pub constant: f64,
}

impl LinExpr {
    pub fn var(v: usize) -> Self {
        Self {
            terms: vec![(v, 1.0)],
            constant: 0.0,
        }
    }

    pub fn constant(c: f64) -> Self {
        Self {
            terms: Vec::new(),
            constant: c,
        }
    }

    /// `sum coeffs[i] * vars[i]`.
    pub fn dot(vars: &[usize], coeffs: &[f64]) -> Self {
        Self {
            terms: vars
                .iter()
                .zip(coeffs)
                .filter(|(_, &c)| c != 0.0)
                .map(|(&v, &c)| (v, c))
                .collect(),
            constant: 0.0,
        }
    }

    pub fn add_scaled(&mut self, other: &LinExpr, f: f64) {
        if f == 0.0 {
            return;
        }
        self.terms.extend(other.terms.iter().map(|&(v, c)| (v, c * f)));
        self.constant += other.constant * f;
    }

    pub fn scaled(&self, f: f64) -> Self {
        let mut e = LinExpr::default();
        e.add_scaled(self, f);
        e
    }
}

/// Right-hand side of a norm bound.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum NormBound {
    Const(f64),
    Var(usize),
}

impl NormBound {
    fn expr(self) -> LinExpr {
        match self {
            NormBound::Const(c) => LinExpr::constant(c),
            NormBound::Var(v) => LinExpr::var(v),
        }
    }
}

#[derive(Debug, Clone, Default)]
pub struct LpBuilder {
    bounds: Vec<(f64, f64)>,
    rows: Vec<(LinExpr, Relation)>,
}

impl LpBuilder {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn num_vars(&self) -> usize {
        self.bounds.len()
    }

    pub fn add_var(&mut self, lower: f64, upper: f64) -> usize {
        self.bounds.push((lower, upper));
        self.bounds.len() - 1
    }

    pub fn add_free_vars(&mut self, n: usize) -> Vec<usize> {
        (0..n)
            .map(|_| self.add_var(f64::NEG_INFINITY, f64::INFINITY))
            .collect()
    }

    pub fn add_nonneg_vars(&mut self, n: usize) -> Vec<usize> {
        (0..n).map(|_| self.add_var(0.0, f64::INFINITY)).collect()
    }

    /// Adds `expr (relation) 0`.
    pub fn constrain(&mut self, expr: LinExpr, relation: Relation) {
        self.rows.push((expr, relation));
    }

    /// Adds constraints forcing `||y||_space <= bound`, where `y` is a vector
    /// of affine expressions.
    ///
    /// * c0: `±y_j <= s`;
    /// * summing c0: `±sum_{i>=j} y_i <= s`;
    /// * l1: auxiliaries `u_j >= ±y_j`, `sum u_j <= s`;
    /// * Lin: auxiliaries `u_j >= ±y_j`, `w_k sum_{j>=k} u_j <= s`;
    /// * interval renorming: the ambient bound applied to `M P_I y` for every
    ///   interval `I`.
    pub fn add_norm_bound(&mut self, space: &SpaceOracle, y: &[LinExpr], bound: NormBound) -> Result<()> {
        let s = bound.expr();
        let le = |b: &mut Self, lhs: LinExpr| {
            let mut e = lhs;
            e.add_scaled(&s, -1.0);
            b.constrain(e, Relation::Le);
        };
        match space {
            SpaceOracle::C0Sup => {
                for yj in y {
                    le(self, yj.clone());
                    le(self, yj.scaled(-1.0));
                }
            }
            SpaceOracle::SummingC0 => {
                let mut tail = LinExpr::default();
                for yj in y.iter().rev() {
                    tail.add_scaled(yj, 1.0);
                    le(self, tail.clone());
                    le(self, tail.scaled(-1.0));
                }
            }
            SpaceOracle::EllP { p } if *p == 1.0 => {
                let u = self.abs_aux(y);
                le(self, LinExpr::dot(&u, &vec![1.0; u.len()]));
            }
            SpaceOracle::LinEll1 => {
                let u = self.abs_aux(y);
                for k in 1..=u.len() {
                    let w = lin_weight(k);
                    le(self, LinExpr::dot(&u[k - 1..], &vec![w; u.len() - k + 1]));
                }
            }
            SpaceOracle::IntervalRenorm(seq) => {
                let n = y.len();
                let basis = seq.resolve(n)?;
                let amb = basis.ambient_dim();
                for i in 0..n {
                    let mut z = vec![LinExpr::default(); amb];
                    for j in i..n {
                        for (zk, &ck) in z.iter_mut().zip(basis.column(j)) {
                            zk.add_scaled(&y[j], ck);
                        }
                        self.add_norm_bound(&seq.ambient, &z, bound)?;
                    }
                }
            }
            _ => return Err(Error::NotPolyhedral(space.to_string())),
        }
        Ok(())
    }

    fn abs_aux(&mut self, y: &[LinExpr]) -> Vec<usize> {
        let u = self.add_nonneg_vars(y.len());
        for (yj, &uj) in y.iter().zip(&u) {
            let mut e = yj.clone();
            e.add_scaled(&LinExpr::var(uj), -1.0);
            self.constrain(e.clone(), Relation::Le);
            let mut e = yj.scaled(-1.0);
            e.add_scaled(&LinExpr::var(uj), -1.0);
            self.constrain(e, Relation::Le);
        }
        u
    }

    pub fn build(&self, sense: Sense, objective: &LinExpr) -> LinearProgram {
        let n = self.num_vars();
        let dense = |e: &LinExpr| {
            let mut v = vec![0.0; n];
            for &(j, c) in &e.terms {
                v[j] += c;
            }
            v
        };
        let mut lp = LinearProgram::new(sense, dense(objective));
        lp.bounds = self.bounds.clone();
        for (e, rel) in &self.rows {
            lp.constrain(dense(e), *rel, -e.constant);
        }
        lp
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::optim::lp_solve;

    /// min s subject to ||x - c|| <= s with x fixed at c + d: recovers ||d||.
    fn norm_via_lp(space: &SpaceOracle, d: &[f64]) -> f64 {
        let mut b = LpBuilder::new();
        let s = b.add_var(0.0, f64::INFINITY);
        let y: Vec<LinExpr> = d.iter().map(|&v| LinExpr::constant(v)).collect();
        b.add_norm_bound(space, &y, NormBound::Var(s)).unwrap();
        lp_solve(&b.build(Sense::Min, &LinExpr::var(s))).unwrap().best_value
    }

    #[test]
    fn epigraphs_match_norms() {
        let d = [0.4, -1.1, 0.25, 0.9];
        for space in [
            SpaceOracle::C0Sup,
            SpaceOracle::ell1(),
            SpaceOracle::SummingC0,
            SpaceOracle::LinEll1,
        ] {
            let lp = norm_via_lp(&space, &d);
            assert!((lp - space.norm_unchecked(&d)).abs() < 1e-9, "{space}: {lp}");
        }
    }

    #[test]
    fn non_polyhedral_rejected() {
        let mut b = LpBuilder::new();
        let y = vec![LinExpr::constant(1.0)];
        assert!(matches!(
            b.add_norm_bound(&SpaceOracle::EllP { p: 2.0 }, &y, NormBound::Const(1.0)),
            Err(Error::NotPolyhedral(_))
        ));
    }
}
