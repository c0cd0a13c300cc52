//! Brute-force vertex enumeration of `{x : A x <= b}` and vertex sets of
//! hyperplane sections.

use std::collections::HashSet;

use crate::error::{Error, Result};

use super::linalg::{solve_square, Matrix};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct VertexBudget {
    /// Max number of active-set combinations tried by `enumerate_vertices`.
    pub max_combinations: u64,
    /// Max number of points materialized by `section`.
    pub max_points: usize,
    /// Max number of crossing pairs visited by `for_each_section_point`.
    pub max_pairs: usize,
}

impl Default for VertexBudget {
    fn default() -> Self {
        Self {
            max_combinations: 2_000_000,
            max_points: 500_000,
            max_pairs: 50_000_000,
        }
    }
}

fn binomial(n: usize, k: usize) -> u128 {
    if k > n {
        return 0;
    }
    let k = k.min(n - k);
    (0..k).fold(1u128, |acc, i| {
        acc.saturating_mul((n - i) as u128) / (i as u128 + 1)
    })
}

/// Key for approximate deduplication of points.
fn key(p: &[f64]) -> Vec<i64> {
    p.iter().map(|x| (x * 1e8).round() as i64).collect()
}

/// All vertices of the polyhedron `{x in R^dim : rows[i]·x <= rhs[i]}`.
///
/// Tries every `dim`-subset of the constraints as an active set; a subset
/// yields a vertex when it is nonsingular and its solution satisfies all
/// constraints to 1e-9.
pub fn enumerate_vertices(
    rows: &[Vec<f64>],
    rhs: &[f64],
    dim: usize,
    budget: VertexBudget,
) -> Result<Vec<Vec<f64>>> {
    let m = rows.len();
    if binomial(m, dim) > budget.max_combinations as u128 {
        return Err(Error::DimensionCap {
            dim,
            cap: budget.max_combinations as usize,
        });
    }
    let mut out = Vec::new();
    let mut seen = HashSet::new();
    if dim == 0 || m < dim {
        return Ok(out);
    }
    let mut idx: Vec<usize> = (0..dim).collect();
    loop {
        let sub: Vec<Vec<f64>> = idx.iter().map(|&i| rows[i].clone()).collect();
        let b: Vec<f64> = idx.iter().map(|&i| rhs[i]).collect();
        if let Some(x) = solve_square(&Matrix::from_rows(&sub), &b) {
            let feasible = rows.iter().zip(rhs).all(|(r, &bi)| {
                r.iter().zip(&x).map(|(a, b)| a * b).sum::<f64>() <= bi + 1e-9 * (1.0 + bi.abs())
            });
            if feasible && seen.insert(key(&x)) {
                out.push(x);
            }
        }
        // Next combination in lexicographic order.
        let mut i = dim;
        loop {
            if i == 0 {
                return Ok(out);
            }
            i -= 1;
            if idx[i] != i + m - dim {
                break;
            }
        }
        idx[i] += 1;
        for j in i + 1..dim {
            idx[j] = idx[j - 1] + 1;
        }
    }
}

/// A superset of the vertices of `conv(points) ∩ {x : normal·x = 0}` lying
/// inside that section.
///
/// Every vertex of a polytope's hyperplane section lies on a segment between
/// two of the polytope's vertices on opposite sides of the hyperplane, so the
/// returned set (points on the hyperplane plus one crossing point per such
/// pair) realizes the maximum of any convex function over the section.
pub fn section(points: &[Vec<f64>], normal: &[f64], budget: VertexBudget) -> Result<Vec<Vec<f64>>> {
    let (on, pos, neg, side) = split(points, normal);
    let total = on.len() + pos.len() * neg.len();
    if total > budget.max_points {
        return Err(Error::DimensionCap {
            dim: total,
            cap: budget.max_points,
        });
    }
    let mut seen = HashSet::with_capacity(total);
    let mut out = Vec::with_capacity(total);
    for &i in &on {
        if seen.insert(key(&points[i])) {
            out.push(points[i].clone());
        }
    }
    let mut buf = vec![0.0; normal.len()];
    for &i in &pos {
        for &j in &neg {
            crossing(&points[i], &points[j], side[i], side[j], &mut buf);
            if seen.insert(key(&buf)) {
                out.push(buf.clone());
            }
        }
    }
    Ok(out)
}

/// Streaming form of [`section`]: calls `visit` on every candidate point
/// without deduplication or materialization.
pub fn for_each_section_point<F>(
    points: &[Vec<f64>],
    normal: &[f64],
    budget: VertexBudget,
    mut visit: F,
) -> Result<()>
where
    F: FnMut(&[f64]),
{
    let (on, pos, neg, side) = split(points, normal);
    if pos.len() * neg.len() > budget.max_pairs {
        return Err(Error::DimensionCap {
            dim: pos.len() * neg.len(),
            cap: budget.max_pairs,
        });
    }
    for &i in &on {
        visit(&points[i]);
    }
    let mut buf = vec![0.0; normal.len()];
    for &i in &pos {
        for &j in &neg {
            crossing(&points[i], &points[j], side[i], side[j], &mut buf);
            visit(&buf);
        }
    }
    Ok(())
}

/// Number of candidates `section` would consider, before deduplication.
pub fn section_size(points: &[Vec<f64>], normal: &[f64]) -> usize {
    let (on, pos, neg, _) = split(points, normal);
    on.len() + pos.len() * neg.len()
}

fn crossing(u: &[f64], v: &[f64], su: f64, sv: f64, out: &mut [f64]) {
    let lam = su / (su - sv);
    for ((o, a), b) in out.iter_mut().zip(u).zip(v) {
        *o = a + lam * (b - a);
    }
}

type Split = (Vec<usize>, Vec<usize>, Vec<usize>, Vec<f64>);

fn split(points: &[Vec<f64>], normal: &[f64]) -> Split {
    let scale = points
        .iter()
        .flat_map(|p| p.iter())
        .fold(0.0_f64, |m, x| m.max(x.abs()))
        * normal.iter().fold(0.0_f64, |m, x| m.max(x.abs()))
        * normal.len().max(1) as f64;
    let tol = 1e-12 * scale.max(1e-300);
    let side: Vec<f64> = points
        .iter()
        .map(|p| p.iter().zip(normal).map(|(a, b)| a * b).sum())
        .collect();
    let pos: Vec<usize> = (0..points.len()).filter(|&i| side[i] > tol).collect();
    let neg: Vec<usize> = (0..points.len()).filter(|&i| side[i] < -tol).collect();
    let on: Vec<usize> = (0..points.len()).filter(|&i| side[i].abs() <= tol).collect();
    (on, pos, neg, side)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn square_vertices() {
        let rows = vec![
            vec![1.0, 0.0],
            vec![-1.0, 0.0],
            vec![0.0, 1.0],
            vec![0.0, -1.0],
        ];
        let v = enumerate_vertices(&rows, &[1.0; 4], 2, VertexBudget::default()).unwrap();
        assert_eq!(v.len(), 4);
        assert!(v.iter().all(|p| p[0].abs() == 1.0 && p[1].abs() == 1.0));
    }

    #[test]
    fn cube_section_by_sum_zero() {
        let mut cube = Vec::new();
        for mask in 0..8 {
            cube.push((0..3).map(|i| if mask >> i & 1 == 1 { 1.0 } else { -1.0 }).collect());
        }
        let s = section(&cube, &[1.0, 1.0, 1.0], VertexBudget::default()).unwrap();
        // The hexagon's six vertices are permutations of (1, 0, -1).
        for perm in [[1.0, 0.0, -1.0], [0.0, 1.0, -1.0], [-1.0, 1.0, 0.0]] {
            assert!(s.iter().any(|p| p.iter().zip(&perm).all(|(a, b)| (a - b).abs() < 1e-12)));
        }
        assert!(s.iter().all(|p| p.iter().sum::<f64>().abs() < 1e-12));
    }

    #[test]
    fn budget_enforced() {
        let rows = vec![vec![1.0; 10]; 60];
        let err = enumerate_vertices(&rows, &[1.0; 60], 10, VertexBudget::default());
        assert!(matches!(err, Err(Error::DimensionCap { .. })));
    }
}
