use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::optim::linalg::Matrix;

use super::alpha::{alpha_validate, AlphaSchedule};

pub const DEFAULT_F2_TERMS: usize = 60;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "SCREAMING_SNAKE_CASE")]
pub enum MapKind {
    /// `t_n -> (1 - a_n) t_n` at `n` plus `a_n t_n` at `n + 1`.
    FMain,
    /// Unilateral shift `t_n -> t_n` at `n + 1`.
    F0Shift,
    /// Bilateral shift: `2 -> 1`, odd `n -> n + 2`, even `n >= 4 -> n - 2`.
    F1Bilateral,
    /// `t_n -> 2^-j t_n` at `n + j`, `j >= 1`.
    F2Smoothed,
    /// Hand-built columns.
    Custom,
}

impl FromStr for MapKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Ok(match s.to_ascii_lowercase().replace('_', "-").as_str() {
            "f" | "f-main" | "fmain" | "main" => MapKind::FMain,
            "f0" | "f0-shift" | "shift" => MapKind::F0Shift,
            "f1" | "f1-bilateral" | "bilateral" => MapKind::F1Bilateral,
            "f2" | "f2-smoothed" | "smoothed" => MapKind::F2Smoothed,
            "custom" => MapKind::Custom,
            _ => return Err(Error::InvalidParameter(format!("unknown map kind `{s}`"))),
        })
    }
}

impl fmt::Display for MapKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            MapKind::FMain => "f-main",
            MapKind::F0Shift => "f0",
            MapKind::F1Bilateral => "f1",
            MapKind::F2Smoothed => "f2",
            MapKind::Custom => "custom",
        })
    }
}

/// One nonzero `(row, weight)` entry; rows are 1-based.
pub type Entry = (usize, f64);

/// Affine self-map of the coefficient simplex, `t -> A t`, stored by
/// columns. Columns are nonnegative and sum to one, except that truncated
/// kinds record the mass they drop in `residuals`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct AffineMapSpec {
    pub kind: MapKind,
    pub columns: Vec<Vec<Entry>>,
    /// Per-column mass missing from the stored entries.
    pub residuals: Vec<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub alpha: Option<AlphaSchedule>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub terms: Option<usize>,
}

/// Parameters for [`map_build`].
#[derive(Debug, Clone, Default)]
pub struct MapParams {
    pub n: usize,
    pub alpha: Option<AlphaSchedule>,
    /// Number of terms kept by F2 (default 60).
    pub terms: Option<usize>,
    /// `(K, inf ||x_n||, sup ||x_n||)`: when given, the schedule's sum
    /// condition is validated too.
    pub sum_bound: Option<(f64, f64, f64)>,
}

impl MapParams {
    pub fn new(n: usize) -> Self {
        Self {
            n,
            ..Self::default()
        }
    }

    pub fn with_alpha(mut self, alpha: AlphaSchedule) -> Self {
        self.alpha = Some(alpha);
        self
    }
}

/// Image of index `n` (1-based) under the bilateral shift.
pub fn f1_index(n: usize) -> usize {
    match n {
        2 => 1,
        n if n % 2 == 1 => n + 2,
        n => n - 2,
    }
}

pub fn map_build(kind: MapKind, params: &MapParams) -> Result<AffineMapSpec> {
    let n = params.n;
    let mut spec = AffineMapSpec {
        kind,
        columns: Vec::with_capacity(n),
        residuals: vec![0.0; n],
        alpha: None,
        terms: None,
    };
    match kind {
        MapKind::FMain => {
            let alpha = params
                .alpha
                .as_ref()
                .ok_or_else(|| Error::InvalidSchedule("F_MAIN needs an alpha schedule".into()))?;
            let (k, lo, hi) = params.sum_bound.unwrap_or((1.0, 1.0, 1.0));
            let report = alpha_validate(alpha, k, lo, hi);
            let failed: Vec<&str> = report
                .conditions
                .iter()
                .filter(|c| !c.pass && (c.name != "sum" || params.sum_bound.is_some()))
                .map(|c| c.name.as_str())
                .collect();
            if !failed.is_empty() {
                return Err(Error::InvalidSchedule(format!("fails: {}", failed.join(", "))));
            }
            let a = alpha.extended(n)?;
            spec.columns = (1..=n).map(|j| vec![(j, 1.0 - a[j - 1]), (j + 1, a[j - 1])]).collect();
            spec.alpha = Some(alpha.clone());
        }
        MapKind::F0Shift => spec.columns = (1..=n).map(|j| vec![(j + 1, 1.0)]).collect(),
        MapKind::F1Bilateral => spec.columns = (1..=n).map(|j| vec![(f1_index(j), 1.0)]).collect(),
        MapKind::F2Smoothed => {
            let terms = params.terms.unwrap_or(DEFAULT_F2_TERMS);
            if terms == 0 || terms > 1000 {
                return Err(Error::InvalidParameter(format!("F2 term count {terms} outside 1..=1000")));
            }
            spec.columns = (1..=n)
                .map(|j| (1..=terms).map(|i| (j + i, 0.5f64.powi(i as i32))).collect())
                .collect();
            spec.residuals = vec![0.5f64.powi(terms as i32); n];
            spec.terms = Some(terms);
        }
        MapKind::Custom => {
            return Err(Error::InvalidParameter("use AffineMapSpec::from_columns for custom maps".into()))
        }
    }
    Ok(spec)
}

impl AffineMapSpec {
    /// A hand-built map. Each column must be nonnegative and sum to one.
    pub fn from_columns(columns: Vec<Vec<Entry>>) -> Result<Self> {
        for (j, c) in columns.iter().enumerate() {
            if c.iter().any(|&(r, w)| r == 0 || !(w >= 0.0 && w.is_finite())) {
                return Err(Error::InvalidParameter(format!("column {} has a bad entry", j + 1)));
            }
            let s: f64 = c.iter().map(|e| e.1).sum();
            if (s - 1.0).abs() > 1e-12 {
                return Err(Error::InvalidParameter(format!("column {} sums to {s}", j + 1)));
            }
        }
        Ok(Self {
            kind: MapKind::Custom,
            residuals: vec![0.0; columns.len()],
            columns,
            alpha: None,
            terms: None,
        })
    }

    pub fn identity(n: usize) -> Self {
        Self::from_columns((1..=n).map(|j| vec![(j, 1.0)]).collect()).expect("identity columns are valid")
    }

    /// The same map with `n` stored columns. Built-in kinds are rebuilt;
    /// custom maps cannot grow.
    pub fn extended(&self, n: usize) -> Result<Self> {
        if n <= self.domain() {
            let mut m = self.clone();
            m.columns.truncate(n);
            m.residuals.truncate(n);
            return Ok(m);
        }
        if self.kind == MapKind::Custom {
            return Err(Error::TruncationOverflow {
                support: n,
                truncation: self.domain(),
            });
        }
        map_build(
            self.kind,
            &MapParams {
                n,
                alpha: self.alpha.clone(),
                terms: self.terms,
                sum_bound: None,
            },
        )
    }

    /// Number of stored columns (the domain truncation).
    pub fn domain(&self) -> usize {
        self.columns.len()
    }

    /// Largest row touched by columns `1..=n`.
    pub fn reach(&self, n: usize) -> usize {
        self.columns[..n.min(self.domain())]
            .iter()
            .flat_map(|c| c.iter().map(|e| e.0))
            .max()
            .unwrap_or(0)
    }

    /// Max over columns of `|sum - 1 + residual|`.
    pub fn column_sum_error(&self) -> f64 {
        self.columns
            .iter()
            .zip(&self.residuals)
            .map(|(c, r)| (c.iter().map(|e| e.1).sum::<f64>() + r - 1.0).abs())
            .fold(0.0, f64::max)
    }

    /// `A t` for `t` supported in the first `domain()` coordinates.
    pub fn apply_linear(&self, t: &[f64]) -> Result<Vec<f64>> {
        let support = t.iter().rposition(|&v| v != 0.0).map_or(0, |i| i + 1);
        if support > self.domain() {
            return Err(Error::TruncationOverflow {
                support,
                truncation: self.domain(),
            });
        }
        let mut out = vec![0.0; self.reach(support).max(t.len())];
        for (j, &tj) in t.iter().enumerate().take(support) {
            if tj != 0.0 {
                for &(r, w) in &self.columns[j] {
                    out[r - 1] += w * tj;
                }
            }
        }
        Ok(out)
    }

    /// Dense `rows x n` matrix of columns `1..=n`, dropping rows past `rows`.
    pub fn matrix(&self, rows: usize, n: usize) -> Matrix {
        let mut m = Matrix::zeros(rows, n);
        for (j, c) in self.columns.iter().take(n).enumerate() {
            for &(r, w) in c {
                if r <= rows {
                    m[(r - 1, j)] += w;
                }
            }
        }
        m
    }

    /// Columns `1..=n` of `A^p`. Fails with `TruncationOverflow` when an
    /// intermediate column leaves the stored domain.
    pub fn power_columns(&self, p: usize, n: usize) -> Result<Vec<Vec<Entry>>> {
        let mut cols: Vec<Vec<Entry>> = (1..=n).map(|j| vec![(j, 1.0)]).collect();
        for _ in 0..p {
            cols = cols
                .into_iter()
                .map(|c| {
                    let support = c.iter().map(|e| e.0).max().unwrap_or(0);
                    let mut dense = vec![0.0; support];
                    for (r, w) in c {
                        dense[r - 1] += w;
                    }
                    let img = self.apply_linear(&dense)?;
                    Ok(img.into_iter().enumerate().filter(|e| e.1 != 0.0).map(|(i, w)| (i + 1, w)).collect())
                })
                .collect::<Result<_>>()?;
        }
        Ok(cols)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn fmain_first_column() {
        let a = AlphaSchedule::geometric(0.1125, 0.5, 6);
        let m = map_build(MapKind::FMain, &MapParams::new(6).with_alpha(a.clone())).unwrap();
        assert_eq!(m.columns[0], vec![(1, 1.0 - a.alphas[0]), (2, a.alphas[0])]);
        assert!(m.column_sum_error() < 1e-15);
        let bad = AlphaSchedule::explicit(vec![0.6; 6]).unwrap();
        assert!(matches!(
            map_build(MapKind::FMain, &MapParams::new(6).with_alpha(bad)),
            Err(Error::InvalidSchedule(_))
        ));
        assert!(map_build(MapKind::FMain, &MapParams::new(6)).is_err());
    }

    #[test]
    fn f1_is_a_permutation() {
        let m = map_build(MapKind::F1Bilateral, &MapParams::new(40)).unwrap();
        assert_eq!(m.columns[1], vec![(1, 1.0)]);
        let mut seen = std::collections::HashSet::new();
        for c in &m.columns {
            assert!(seen.insert(c[0].0));
        }
        // Every index 1..=38 is hit once the domain reaches 40.
        assert!((1..=38).all(|k| seen.contains(&k)));
    }

    #[test]
    fn f2_weights() {
        let m = map_build(MapKind::F2Smoothed, &MapParams::new(3)).unwrap();
        assert_eq!(&m.columns[0][..3], &[(2, 0.5), (3, 0.25), (4, 0.125)]);
        assert!(m.column_sum_error() < 1e-15);
        assert_eq!(m.residuals[0], 0.5f64.powi(60));
    }

    #[test]
    fn powers_of_shift() {
        let m = map_build(MapKind::F0Shift, &MapParams::new(10)).unwrap();
        let p = m.power_columns(3, 4).unwrap();
        assert_eq!(p[0], vec![(4, 1.0)]);
        assert!(m.power_columns(3, 9).is_err());
    }

    #[test]
    fn custom_columns_checked() {
        assert!(AffineMapSpec::from_columns(vec![vec![(1, 0.5)]]).is_err());
        let id = AffineMapSpec::identity(3);
        assert_eq!(id.apply_linear(&[0.2, 0.3, 0.5]).unwrap(), vec![0.2, 0.3, 0.5]);
        assert!(matches!(
            id.apply_linear(&[0.0, 0.0, 0.0, 1.0]),
            Err(Error::TruncationOverflow { .. })
        ));
    }
}
