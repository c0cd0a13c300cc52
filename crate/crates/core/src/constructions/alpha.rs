use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Closed form used to continue a schedule past its stored entries.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "family", rename_all = "snake_case", deny_unknown_fields)]
pub enum AlphaGenerator {
    /// `a_n = r * beta^n`.
    Geometric { r: f64, beta: f64 },
}

impl AlphaGenerator {
    pub fn value(&self, n: usize) -> f64 {
        match *self {
            AlphaGenerator::Geometric { r, beta } => r * beta.powi(n as i32),
        }
    }

    /// `sum_{n > len} a_n`.
    pub fn tail_sum(&self, len: usize) -> f64 {
        match *self {
            AlphaGenerator::Geometric { r, beta } => r * beta.powi(len as i32 + 1) / (1.0 - beta),
        }
    }
}

/// The decreasing sequence `a_1, a_2, ...` that drives the convex basis
/// `z_n = (1 - a_n) x_n + a_n x_{n+1}` and the fixed-point-free map.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct AlphaSchedule {
    pub alphas: Vec<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub generator: Option<AlphaGenerator>,
}

impl AlphaSchedule {
    pub fn explicit(alphas: Vec<f64>) -> Result<Self> {
        if let Some(a) = alphas.iter().find(|a| !a.is_finite()) {
            return Err(Error::InvalidSchedule(format!("non-finite alpha {a}")));
        }
        Ok(Self {
            alphas,
            generator: None,
        })
    }

    pub fn geometric(r: f64, beta: f64, len: usize) -> Self {
        let g = AlphaGenerator::Geometric { r, beta };
        Self {
            alphas: (1..=len).map(|n| g.value(n)).collect(),
            generator: Some(g),
        }
    }

    pub fn len(&self) -> usize {
        self.alphas.len()
    }

    pub fn is_empty(&self) -> bool {
        self.alphas.is_empty()
    }

    /// `a_n` (1-based), from the stored entries or the generator.
    pub fn alpha(&self, n: usize) -> Option<f64> {
        match self.alphas.get(n.wrapping_sub(1)) {
            Some(&a) => Some(a),
            None => self.generator.map(|g| g.value(n)),
        }
    }

    /// `a_1, ..., a_n`.
    pub fn extended(&self, n: usize) -> Result<Vec<f64>> {
        (1..=n)
            .map(|k| {
                self.alpha(k).ok_or_else(|| {
                    Error::InvalidSchedule(format!(
                        "schedule has {} entries and no generator; {n} needed",
                        self.len()
                    ))
                })
            })
            .collect()
    }

    /// Sum of the whole series when a generator is present, else of the
    /// stored entries.
    pub fn total(&self) -> f64 {
        let stored: f64 = self.alphas.iter().sum();
        stored + self.generator.map_or(0.0, |g| g.tail_sum(self.len()))
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum AlphaFamily {
    Geometric,
}

/// `a_n = r 2^-n` with `r = 0.9 min(1/2, inf/(4 K sup))`, `n = 1..=n`.
pub fn alpha_generate(k: f64, inf_norm: f64, sup_norm: f64, n: usize, family: AlphaFamily) -> Result<AlphaSchedule> {
    if !(k >= 1.0 && k.is_finite()) {
        return Err(Error::InvalidParameter(format!("basis constant must be >= 1, got {k}")));
    }
    if !(inf_norm > 0.0 && inf_norm <= sup_norm && sup_norm.is_finite()) {
        return Err(Error::InvalidParameter(format!(
            "need 0 < inf <= sup, got inf={inf_norm}, sup={sup_norm}"
        )));
    }
    let AlphaFamily::Geometric = family;
    let r = 0.9 * f64::min(0.5, inf_norm / (4.0 * k * sup_norm));
    let s = AlphaSchedule::geometric(r, 0.5, n);
    let report = alpha_validate(&s, k, inf_norm, sup_norm);
    if !report.all_pass {
        return Err(Error::Internal(format!("generated schedule fails validation: {report:?}")));
    }
    Ok(s)
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ConditionCheck {
    pub name: String,
    pub pass: bool,
    /// Positive when the condition holds; the distance to failure.
    pub margin: f64,
    pub detail: String,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct AlphaReport {
    pub conditions: Vec<ConditionCheck>,
    pub all_pass: bool,
    pub sum: f64,
    pub bound: f64,
}

/// Checks `0 < a_n < 1/2`, strict decrease, and
/// `sum a_n < inf/(4 K sup)`.
pub fn alpha_validate(s: &AlphaSchedule, k: f64, inf_norm: f64, sup_norm: f64) -> AlphaReport {
    let a = &s.alphas;
    let range_margin = a
        .iter()
        .map(|&x| x.min(0.5 - x))
        .fold(f64::INFINITY, f64::min);
    let decrease_margin = a
        .windows(2)
        .map(|w| w[0] - w[1])
        .fold(f64::INFINITY, f64::min);
    // The limit 0 needs either a generator tending to 0 or, at truncation,
    // nothing more than a decreasing positive list.
    let limit_ok = match s.generator {
        Some(AlphaGenerator::Geometric { beta, .. }) => beta.abs() < 1.0,
        None => true,
    };
    let decrease_margin = if decrease_margin.is_infinite() {
        a.first().copied().unwrap_or(0.0)
    } else {
        decrease_margin
    };
    let sum = s.total();
    let bound = inf_norm / (4.0 * k * sup_norm);
    let conditions = vec![
        ConditionCheck {
            name: "range".into(),
            pass: !a.is_empty() && range_margin > 0.0,
            margin: if a.is_empty() { 0.0 } else { range_margin },
            detail: "0 < a_n < 1/2".into(),
        },
        ConditionCheck {
            name: "decreasing".into(),
            pass: !a.is_empty() && decrease_margin > 0.0 && limit_ok,
            margin: decrease_margin,
            detail: "a_n strictly decreasing to 0".into(),
        },
        ConditionCheck {
            name: "sum".into(),
            pass: sum < bound,
            margin: bound - sum,
            detail: format!("sum a_n = {sum} < inf/(4 K sup) = {bound}"),
        },
    ];
    AlphaReport {
        all_pass: conditions.iter().all(|c| c.pass),
        conditions,
        sum,
        bound,
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn generated_for_summing() {
        let s = alpha_generate(2.0, 1.0, 1.0, 20, AlphaFamily::Geometric).unwrap();
        assert!((s.alphas[0] - 0.05625).abs() < 1e-15);
        assert!((s.total() - 0.1125).abs() < 1e-15);
        let r = alpha_validate(&s, 2.0, 1.0, 1.0);
        assert!(r.all_pass);
        assert!((r.conditions[2].margin - 0.0125).abs() < 1e-15);
    }

    #[test]
    fn generated_for_monotone() {
        let s = alpha_generate(1.0, 1.0, 1.0, 5, AlphaFamily::Geometric).unwrap();
        assert!((s.total() - 0.225).abs() < 1e-15);
    }

    #[test]
    fn validation_examples() {
        let s = AlphaSchedule::explicit((1..=30).map(|n| 0.5f64.powi(n) / 9.0).collect()).unwrap();
        assert!(alpha_validate(&s, 2.0, 1.0, 1.0).all_pass);
        let s = AlphaSchedule::explicit(vec![0.6; 5]).unwrap();
        let r = alpha_validate(&s, 2.0, 1.0, 1.0);
        assert!(!r.conditions[0].pass && !r.conditions[1].pass);
        let s = AlphaSchedule::explicit((1..=5).map(|n| 0.4 * (1.0 - 1.0 / n as f64)).collect()).unwrap();
        assert!(!alpha_validate(&s, 2.0, 1.0, 1.0).conditions[1].pass);
    }

    #[test]
    fn extension() {
        let s = AlphaSchedule::geometric(0.2, 0.5, 2);
        assert_eq!(s.extended(4).unwrap()[3], 0.2 / 16.0);
        assert!(AlphaSchedule::explicit(vec![0.1]).unwrap().extended(2).is_err());
    }
}
