//! Optimization kernel: dense simplex LP solver, exact maximization over
//! finite point sets, seeded sampling with local ascent, vertex enumeration
//! and the epigraph reductions of polyhedral norms.

mod ascent;
mod epigraph;
pub mod linalg;
mod lp;
pub mod rng;
pub mod vertex;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::vector::CoeffVector;

pub use ascent::{sampled_ascent, AscentConfig};
pub use epigraph::{LinExpr, LpBuilder, NormBound};
pub use lp::{lp_solve, max_violation, Constraint, LinearProgram, Relation, Sense};
pub use vertex::{enumerate_vertices, for_each_section_point, section, section_size, VertexBudget};

/// Outcome of any search: LP, extreme-point scan or sampled ascent.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SearchReport {
    pub best_value: f64,
    pub best_point: CoeffVector,
    pub iterations: usize,
    pub converged: bool,
    pub seed: u64,
}

/// Exact maximum of `objective` over a finite list of points.
///
/// When the points are the extreme points of a polytope and the objective is
/// convex, this is the maximum over the whole polytope.
pub fn max_over_extreme_points<F>(objective: F, points: &[CoeffVector]) -> Result<SearchReport>
where
    F: Fn(&[f64]) -> f64,
{
    let mut best: Option<(f64, usize)> = None;
    for (i, p) in points.iter().enumerate() {
        let v = objective(p);
        if best.is_none_or(|(b, _)| v > b) {
            best = Some((v, i));
        }
    }
    let (value, idx) = best.ok_or(Error::EmptyInput)?;
    Ok(SearchReport {
        best_value: value,
        best_point: points[idx].clone(),
        iterations: points.len(),
        converged: true,
        seed: 0,
    })
}
