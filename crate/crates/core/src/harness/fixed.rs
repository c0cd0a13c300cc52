use serde::{Deserialize, Serialize};

use crate::basis::SimplexPoint;
use crate::constructions::{f1_index, AffineMapSpec, MapKind};
use crate::error::{Error, Result};
use crate::optim::linalg::{self, Matrix};
use crate::optim::{lp_solve, LinearProgram, Relation, Sense};
use crate::tolerance;
use crate::vector::CoeffVector;

/// Forward substitution through a lower-triangular `A - I` whose diagonal
/// is nonzero: each step forces one more coordinate to vanish.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TriangularCertificate {
    pub diagonal: Vec<f64>,
    pub steps: Vec<String>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FixedPointAnalysis {
    pub kind: MapKind,
    pub truncation: usize,
    /// Dimension of `{t : (A - I) t = 0}` in the first `n` coordinates.
    pub nullity: usize,
    pub kernel_basis: Vec<CoeffVector>,
    pub triangular: Option<TriangularCertificate>,
    /// A fixed point in the simplex, if one exists.
    pub simplex_fixed_point: Option<SimplexPoint>,
    /// `A = I` on the truncation.
    pub all_fixed: bool,
    /// For permutation maps: maximal index chains `i -> f(i) -> ...` inside
    /// `1..=n`, and finite cycles.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub chains: Option<Vec<Vec<usize>>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub cycles: Option<Vec<Vec<usize>>>,
    pub conclusion: String,
}

impl FixedPointAnalysis {
    pub fn has_simplex_fixed_point(&self) -> bool {
        self.simplex_fixed_point.is_some()
    }
}

/// Solves `(A - I) t = 0` on the first `n` coordinates and decides whether
/// the solution set meets the simplex.
pub fn fixed_point_solve(m: &AffineMapSpec, n: usize) -> Result<FixedPointAnalysis> {
    if n == 0 || n > m.domain() {
        return Err(Error::InvalidParameter(format!(
            "truncation {n} outside 1..={}",
            m.domain()
        )));
    }
    let rows = m.reach(n).max(n);
    let mut d = m.matrix(rows, n);
    for i in 0..n {
        d[(i, i)] -= 1.0;
    }
    let kernel = linalg::nullspace(&d);
    let all_fixed = (0..rows).all(|i| d.row(i).iter().all(|v| v.abs() <= tolerance::ALGEBRAIC));

    let triangular = triangular_certificate(&d, n);
    let simplex_fixed_point = if triangular.is_some() {
        None
    } else if all_fixed {
        Some(SimplexPoint::uniform(n))
    } else {
        simplex_feasible(&d, n)?
    };

    let (chains, cycles) = if m.kind == MapKind::F1Bilateral {
        let (c, y) = permutation_structure(n);
        (Some(c), Some(y))
    } else {
        (None, None)
    };

    let conclusion = if let Some(t) = &triangular {
        format!(
            "(A - I) is lower triangular with nonzero diagonal (min |d| = {:e}); t = 0 is the only solution and violates sum t = 1: no simplex fixed point",
            t.diagonal.iter().fold(f64::INFINITY, |m, v| m.min(v.abs()))
        )
    } else if all_fixed {
        "A = I on the truncation: every simplex point is fixed".into()
    } else if simplex_fixed_point.is_some() {
        format!("kernel of dimension {} meets the simplex", kernel.len())
    } else {
        format!(
            "kernel of dimension {} misses the simplex (LP infeasible): no simplex fixed point",
            kernel.len()
        )
    };

    Ok(FixedPointAnalysis {
        kind: m.kind,
        truncation: n,
        nullity: kernel.len(),
        kernel_basis: kernel.into_iter().map(CoeffVector::from_vec).collect(),
        triangular,
        simplex_fixed_point,
        all_fixed,
        chains,
        cycles,
        conclusion,
    })
}

fn triangular_certificate(d: &Matrix, n: usize) -> Option<TriangularCertificate> {
    let lower = (0..n).all(|i| (i + 1..n).all(|j| d[(i, j)] == 0.0));
    let diagonal: Vec<f64> = (0..n).map(|i| d[(i, i)]).collect();
    if !lower || diagonal.contains(&0.0) {
        return None;
    }
    let steps = (0..n)
        .map(|i| {
            if i == 0 {
                format!("row 1: {:e} t_1 = 0 => t_1 = 0", diagonal[0])
            } else {
                format!("row {}: {:e} t_{} = -(terms in t_1..t_{}) = 0 => t_{} = 0", i + 1, diagonal[i], i + 1, i, i + 1)
            }
        })
        .collect();
    Some(TriangularCertificate { diagonal, steps })
}

/// Feasibility of `(A - I) t = 0, sum t = 1, t >= 0`.
fn simplex_feasible(d: &Matrix, n: usize) -> Result<Option<SimplexPoint>> {
    let mut lp = LinearProgram::new(Sense::Min, vec![0.0; n]);
    for i in 0..d.rows {
        lp.constrain(d.row(i).to_vec(), Relation::Eq, 0.0);
    }
    lp.constrain(vec![1.0; n], Relation::Eq, 1.0);
    match lp_solve(&lp) {
        Ok(rep) => {
            let t: Vec<f64> = rep.best_point.as_slice()[..n].iter().map(|v| v.max(0.0)).collect();
            let s: f64 = t.iter().sum();
            Ok(Some(SimplexPoint::from_raw(t.iter().map(|v| v / s).collect())))
        }
        Err(Error::Infeasible) => Ok(None),
        Err(e) => Err(e),
    }
}

/// Chains and cycles of the bilateral shift restricted to `1..=n`.
fn permutation_structure(n: usize) -> (Vec<Vec<usize>>, Vec<Vec<usize>>) {
    let inside = |i: usize| (1..=n).contains(&i);
    let mut has_pre = vec![false; n + 1];
    for i in 1..=n {
        let j = f1_index(i);
        if inside(j) {
            has_pre[j] = true;
        }
    }
    let mut seen = vec![false; n + 1];
    let mut chains = Vec::new();
    for start in (1..=n).filter(|&i| !has_pre[i]) {
        let mut chain = vec![start];
        seen[start] = true;
        let mut cur = f1_index(start);
        while inside(cur) && !seen[cur] {
            seen[cur] = true;
            chain.push(cur);
            cur = f1_index(cur);
        }
        chains.push(chain);
    }
    // Whatever is left lies on cycles.
    let mut cycles = Vec::new();
    for start in 1..=n {
        if !seen[start] {
            let mut cyc = vec![start];
            seen[start] = true;
            let mut cur = f1_index(start);
            while cur != start {
                seen[cur] = true;
                cyc.push(cur);
                cur = f1_index(cur);
            }
            cycles.push(cyc);
        }
    }
    (chains, cycles)
}
