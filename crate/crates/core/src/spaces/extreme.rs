//! Extreme points of polyhedral unit balls and finite norming sets of linear
//! functionals (`||x|| = max_f f·x`).

use crate::error::{Error, Result};
use crate::optim::{enumerate_vertices, VertexBudget};
use crate::vector::CoeffVector;

use super::{lin_weight, SpaceOracle};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct ExtremeCap {
    /// Largest dimension for families enumerated through sign vectors.
    pub sign_dim: usize,
    /// Largest number of points returned for any family.
    pub max_points: usize,
    pub vertex_budget: VertexBudget,
}

impl Default for ExtremeCap {
    fn default() -> Self {
        Self {
            sign_dim: 16,
            max_points: 1 << 16,
            vertex_budget: VertexBudget::default(),
        }
    }
}

fn sign_vectors(n: usize) -> impl Iterator<Item = Vec<f64>> {
    (0..1u64 << n).map(move |mask| {
        (0..n)
            .map(|i| if mask >> i & 1 == 1 { -1.0 } else { 1.0 })
            .collect()
    })
}

/// Extreme points of the `n`-dimensional unit ball of `space`, as a list
/// without redundant points.
///
/// * l1: the `2n` vectors `±e_i`;
/// * c0: the `2^n` sign vectors;
/// * summing c0: preimages of sign vectors under the tail-sum map,
///   `a_i = S_i - S_{i+1}`;
/// * Lin's norm: with `c_k = 1 + 8^-k`, one point per index set
///   `E = {1 = e_1 < ... < e_m}` and sign choice, carrying
///   `c_{e_j} - c_{e_{j+1}}` at `e_j` and `c_{e_m}` at `e_m`;
/// * interval renorming: brute-force vertex enumeration of its facet
///   description, within the vertex budget.
pub fn extreme_points(space: &SpaceOracle, n: usize) -> Result<Vec<CoeffVector>> {
    extreme_points_capped(space, n, &ExtremeCap::default())
}

pub fn extreme_points_capped(
    space: &SpaceOracle,
    n: usize,
    cap: &ExtremeCap,
) -> Result<Vec<CoeffVector>> {
    space.validate()?;
    if !space.polyhedral() {
        return Err(Error::NotPolyhedral(space.to_string()));
    }
    let sign_cap = |n: usize| -> Result<()> {
        if n > cap.sign_dim || (1usize << n) > cap.max_points {
            Err(Error::DimensionCap {
                dim: n,
                cap: cap.sign_dim.min(cap.max_points.ilog2() as usize),
            })
        } else {
            Ok(())
        }
    };
    let points: Vec<Vec<f64>> = match space {
        SpaceOracle::EllP { .. } => (0..n)
            .flat_map(|i| {
                [1.0, -1.0].into_iter().map(move |s| {
                    let mut v = vec![0.0; n];
                    v[i] = s;
                    v
                })
            })
            .collect(),
        SpaceOracle::C0Sup => {
            sign_cap(n)?;
            sign_vectors(n).collect()
        }
        SpaceOracle::SummingC0 => {
            sign_cap(n)?;
            sign_vectors(n)
                .map(|s| (0..n).map(|i| s[i] - s.get(i + 1).copied().unwrap_or(0.0)).collect())
                .collect()
        }
        SpaceOracle::LinEll1 => {
            // 2 * 3^(n-1) points.
            let count = if n == 0 { 0 } else { 2u128 * 3u128.pow(n as u32 - 1) };
            if count > cap.max_points as u128 {
                return Err(Error::DimensionCap {
                    dim: n,
                    cap: cap.max_points,
                });
            }
            lin_extreme_points(n)
        }
        SpaceOracle::IntervalRenorm(_) => {
            let rows = norming_functionals_capped(space, n, cap)?;
            let rhs = vec![1.0; rows.len()];
            let v = enumerate_vertices(&rows, &rhs, n, cap.vertex_budget)?;
            if v.len() > cap.max_points {
                return Err(Error::DimensionCap {
                    dim: n,
                    cap: cap.max_points,
                });
            }
            v
        }
        SpaceOracle::James { .. } => unreachable!("non-polyhedral"),
    };
    Ok(points.into_iter().map(CoeffVector::from_vec).collect())
}

fn lin_extreme_points(n: usize) -> Vec<Vec<f64>> {
    let c = |k: usize| 1.0 / lin_weight(k);
    let mut out = Vec::new();
    if n == 0 {
        return out;
    }
    // Index sets containing 1: subsets of {2..n} joined with {1}.
    for mask in 0..1u64 << (n - 1) {
        let set: Vec<usize> = std::iter::once(1)
            .chain((2..=n).filter(|k| mask >> (k - 2) & 1 == 1))
            .collect();
        let mut mag = vec![0.0; n];
        for (j, &e) in set.iter().enumerate() {
            mag[e - 1] = match set.get(j + 1) {
                Some(&next) => 0.125_f64.powi(e as i32) - 0.125_f64.powi(next as i32),
                None => c(e),
            };
        }
        let m = set.len();
        for signs in 0..1u64 << m {
            let mut v = mag.clone();
            for (j, &e) in set.iter().enumerate() {
                if signs >> j & 1 == 1 {
                    v[e - 1] = -v[e - 1];
                }
            }
            out.push(v);
        }
    }
    out
}

/// A finite set of linear functionals on vectors of length `len` whose
/// pointwise maximum is the norm.
pub fn norming_functionals(space: &SpaceOracle, len: usize) -> Result<Vec<Vec<f64>>> {
    norming_functionals_capped(space, len, &ExtremeCap::default())
}

pub fn norming_functionals_capped(
    space: &SpaceOracle,
    len: usize,
    cap: &ExtremeCap,
) -> Result<Vec<Vec<f64>>> {
    space.validate()?;
    if !space.polyhedral() {
        return Err(Error::NotPolyhedral(space.to_string()));
    }
    let check = |count: u128| -> Result<()> {
        if count > cap.max_points as u128 {
            Err(Error::DimensionCap {
                dim: len,
                cap: cap.max_points,
            })
        } else {
            Ok(())
        }
    };
    let unit = |j: usize, s: f64| {
        let mut f = vec![0.0; len];
        f[j] = s;
        f
    };
    Ok(match space {
        SpaceOracle::C0Sup => (0..len).flat_map(|j| [unit(j, 1.0), unit(j, -1.0)]).collect(),
        SpaceOracle::EllP { .. } => {
            check(1u128 << len.min(127))?;
            sign_vectors(len).collect()
        }
        SpaceOracle::SummingC0 => (0..len)
            .flat_map(|j| {
                [1.0, -1.0].into_iter().map(move |s| {
                    (0..len).map(|i| if i >= j { s } else { 0.0 }).collect()
                })
            })
            .collect(),
        SpaceOracle::LinEll1 => {
            check((1u128 << (len + 1).min(127)) - 2)?;
            let mut out = Vec::new();
            for k in 1..=len {
                let w = lin_weight(k);
                for s in sign_vectors(len - k + 1) {
                    let mut f = vec![0.0; len];
                    for (i, si) in s.into_iter().enumerate() {
                        f[k - 1 + i] = w * si;
                    }
                    out.push(f);
                }
            }
            out
        }
        SpaceOracle::IntervalRenorm(seq) => {
            let basis = seq.resolve(len)?;
            let amb = basis.ambient_dim();
            let inner = norming_functionals_capped(&seq.ambient, amb, cap)?;
            check((len * (len + 1) / 2) as u128 * inner.len() as u128)?;
            // phi^T M restricted to the interval's columns.
            let composed: Vec<Vec<f64>> = inner
                .iter()
                .map(|phi| {
                    (0..len)
                        .map(|j| phi.iter().zip(basis.column(j)).map(|(a, b)| a * b).sum())
                        .collect()
                })
                .collect();
            let mut out = Vec::new();
            for i in 0..len {
                for j in i..len {
                    for row in &composed {
                        let mut f = vec![0.0; len];
                        f[i..=j].copy_from_slice(&row[i..=j]);
                        out.push(f);
                    }
                }
            }
            out
        }
        SpaceOracle::James { .. } => unreachable!("non-polyhedral"),
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn as_sorted(points: Vec<CoeffVector>) -> Vec<Vec<f64>> {
        let mut v: Vec<Vec<f64>> = points.into_iter().map(CoeffVector::into_vec).collect();
        v.sort_by(|a, b| a.partial_cmp(b).unwrap());
        v
    }

    #[test]
    fn cross_polytope_and_cube() {
        let got = as_sorted(extreme_points(&SpaceOracle::ell1(), 2).unwrap());
        assert_eq!(
            got,
            vec![vec![-1.0, 0.0], vec![0.0, -1.0], vec![0.0, 1.0], vec![1.0, 0.0]]
        );
        let cube = as_sorted(extreme_points(&SpaceOracle::C0Sup, 2).unwrap());
        assert_eq!(
            cube,
            vec![vec![-1.0, -1.0], vec![-1.0, 1.0], vec![1.0, -1.0], vec![1.0, 1.0]]
        );
    }

    #[test]
    fn summing_preimages() {
        let got = as_sorted(extreme_points(&SpaceOracle::SummingC0, 2).unwrap());
        let mut want = Vec::new();
        for s1 in [1.0, -1.0] {
            for s2 in [1.0, -1.0] {
                want.push(vec![s1 - s2, s2]);
            }
        }
        want.sort_by(|a, b| a.partial_cmp(b).unwrap());
        assert_eq!(got, want);
    }

    #[test]
    fn lin_count_and_norm() {
        for n in 1..=6 {
            let pts = extreme_points(&SpaceOracle::LinEll1, n).unwrap();
            assert_eq!(pts.len(), 2 * 3usize.pow(n as u32 - 1));
            for p in &pts {
                assert!((SpaceOracle::LinEll1.norm_unchecked(p) - 1.0).abs() < 1e-12);
            }
        }
    }

    #[test]
    fn errors() {
        assert!(matches!(
            extreme_points(&SpaceOracle::James { p: 2.0 }, 3),
            Err(Error::NotPolyhedral(_))
        ));
        assert!(matches!(
            extreme_points(&SpaceOracle::C0Sup, 17),
            Err(Error::DimensionCap { .. })
        ));
    }

    #[test]
    fn norming_sets_reproduce_norms() {
        let x = [0.3, -1.2, 0.7, 0.05];
        for space in [
            SpaceOracle::C0Sup,
            SpaceOracle::ell1(),
            SpaceOracle::SummingC0,
            SpaceOracle::LinEll1,
        ] {
            let fs = norming_functionals(&space, 4).unwrap();
            let m = fs
                .iter()
                .map(|f| f.iter().zip(&x).map(|(a, b)| a * b).sum::<f64>())
                .fold(f64::NEG_INFINITY, f64::max);
            assert!((m - space.norm_unchecked(&x)).abs() < 1e-12, "{space}");
        }
    }
}
