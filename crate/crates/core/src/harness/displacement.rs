use crate::constructions::AffineMapSpec;
use crate::error::{Error, Result};
use crate::optim::{
    lp_solve, sampled_ascent, AscentConfig, LinExpr, LpBuilder, NormBound, Relation, SearchReport,
    Sense,
};
use crate::spaces::SpaceOracle;
use crate::vector::CoeffVector;

/// `||(A - I) t||` for `t` supported in the first `n` coordinates.
pub fn displacement(m: &AffineMapSpec, space: &SpaceOracle, t: &[f64]) -> Result<f64> {
    let img = m.apply_linear(t)?;
    let len = img.len().max(t.len());
    let d: Vec<f64> = (0..len)
        .map(|i| img.get(i).copied().unwrap_or(0.0) - t.get(i).copied().unwrap_or(0.0))
        .collect();
    space.norm(&d)
}

/// Minimum of `||(A - I) t||` over the simplex of support `n`.
///
/// Polyhedral spaces are solved exactly as an epigraph LP; the returned
/// value is the norm re-evaluated at the LP argmin. Other spaces fall back to
/// sampled descent (`converged` then only reports a local stall).
pub fn min_displacement(m: &AffineMapSpec, space: &SpaceOracle, n: usize) -> Result<SearchReport> {
    min_displacement_seeded(m, space, n, 0)
}

pub fn min_displacement_seeded(m: &AffineMapSpec, space: &SpaceOracle, n: usize, seed: u64) -> Result<SearchReport> {
    if n == 0 {
        return Err(Error::InvalidParameter("truncation must be >= 1".into()));
    }
    if n > m.domain() {
        return Err(Error::TruncationOverflow {
            support: n,
            truncation: m.domain(),
        });
    }
    space.validate()?;
    if space.polyhedral() {
        lp_path(m, space, n)
    } else {
        sampled_path(m, space, n, seed)
    }
}

fn lp_path(m: &AffineMapSpec, space: &SpaceOracle, n: usize) -> Result<SearchReport> {
    let rows = m.reach(n).max(n);
    let a = m.matrix(rows, n);
    let mut b = LpBuilder::new();
    let t = b.add_nonneg_vars(n);
    let s = b.add_nonneg_vars(1)[0];
    let mut simplex = LinExpr::dot(&t, &vec![1.0; n]);
    simplex.add_scaled(&LinExpr::constant(1.0), -1.0);
    b.constrain(simplex, Relation::Eq);
    let y: Vec<LinExpr> = (0..rows)
        .map(|i| {
            let mut e = LinExpr::dot(&t, a.row(i));
            if i < n {
                e.add_scaled(&LinExpr::var(t[i]), -1.0);
            }
            e
        })
        .collect();
    b.add_norm_bound(space, &y, NormBound::Var(s))?;
    let lp = b.build(Sense::Min, &LinExpr::var(s));
    let rep = lp_solve(&lp).map_err(|e| match e {
        Error::Infeasible => Error::Internal("displacement LP reported an empty simplex".into()),
        other => other,
    })?;
    let point: Vec<f64> = rep.best_point.as_slice()[..n].iter().map(|v| v.max(0.0)).collect();
    let total: f64 = point.iter().sum();
    let point: Vec<f64> = point.iter().map(|v| v / total).collect();
    let value = displacement(m, space, &point)?;
    Ok(SearchReport {
        best_value: value,
        best_point: CoeffVector::from_vec(point),
        iterations: rep.iterations,
        converged: true,
        seed: 0,
    })
}

fn sampled_path(m: &AffineMapSpec, space: &SpaceOracle, n: usize, seed: u64) -> Result<SearchReport> {
    let objective = |t: &[f64]| -displacement(m, space, t).unwrap_or(f64::INFINITY);
    let project = |t: &mut [f64]| {
        t.iter_mut().for_each(|v| *v = v.max(0.0));
        let s: f64 = t.iter().sum();
        if s <= 0.0 {
            return false;
        }
        t.iter_mut().for_each(|v| *v /= s);
        true
    };
    let rep = sampled_ascent(objective, project, n, AscentConfig::new(64, seed))?;
    let value = displacement(m, space, &rep.best_point)?;
    Ok(SearchReport {
        best_value: value,
        ..rep
    })
}
