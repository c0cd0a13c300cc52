//! Sequence-space norms on finite coefficient vectors.

mod extreme;
mod james;

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};
use serde_json::{Map, Value};

use crate::basis::BasicSequenceSpec;
use crate::error::{Error, Result};
use crate::vector::CoeffVector;

pub use extreme::{
    extreme_points, extreme_points_capped, norming_functionals, norming_functionals_capped,
    ExtremeCap,
};
pub use james::james_norm;

/// A named norm family with its parameters.
///
/// Every variant evaluates on a finite coefficient vector that stands for an
/// eventually-zero sequence, so all suprema are finite maxima.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "SpaceDescriptor", into = "SpaceDescriptor")]
pub enum SpaceOracle {
    /// `max |x_i|`.
    C0Sup,
    /// `(sum |x_i|^p)^(1/p)`, `p >= 1`.
    EllP { p: f64 },
    /// Coefficients in the summing basis of c0, measured in the sup norm of
    /// their tail sums.
    SummingC0,
    /// Lin's equivalent norm on l1: `max_k 8^k/(1+8^k) * sum_{n>=k} |x_n|`.
    LinEll1,
    /// `max` over finite intervals I of `||P_I a||` for coefficients `a` in
    /// the given basic sequence.
    IntervalRenorm(Box<BasicSequenceSpec>),
    /// p-variation over increasing subsequences.
    James { p: f64 },
}

impl SpaceOracle {
    pub fn ell1() -> Self {
        SpaceOracle::EllP { p: 1.0 }
    }

    pub fn family(&self) -> &'static str {
        match self {
            SpaceOracle::C0Sup => "c0_sup",
            SpaceOracle::EllP { .. } => "ell_p",
            SpaceOracle::SummingC0 => "summing_c0",
            SpaceOracle::LinEll1 => "lin_ell1",
            SpaceOracle::IntervalRenorm(_) => "interval_renorm",
            SpaceOracle::James { .. } => "james",
        }
    }

    /// True exactly when the unit ball at every truncation is a polytope.
    pub fn polyhedral(&self) -> bool {
        match self {
            SpaceOracle::C0Sup | SpaceOracle::SummingC0 | SpaceOracle::LinEll1 => true,
            SpaceOracle::EllP { p } => *p == 1.0,
            SpaceOracle::IntervalRenorm(seq) => seq.ambient.polyhedral(),
            SpaceOracle::James { .. } => false,
        }
    }

    pub fn validate(&self) -> Result<()> {
        match self {
            SpaceOracle::EllP { p } | SpaceOracle::James { p } => {
                if !(p.is_finite() && *p >= 1.0) {
                    return Err(Error::InvalidParameter(format!("p must be >= 1, got {p}")));
                }
                Ok(())
            }
            SpaceOracle::IntervalRenorm(seq) => seq.validate(),
            _ => Ok(()),
        }
    }

    /// Norm of a finite vector whose entries are known to be finite.
    pub fn norm_unchecked(&self, x: &[f64]) -> f64 {
        match self {
            SpaceOracle::C0Sup => x.iter().fold(0.0, |m, v| m.max(v.abs())),
            SpaceOracle::EllP { p } => ell_p(x, *p),
            SpaceOracle::SummingC0 => {
                let mut tail = 0.0_f64;
                let mut best = 0.0_f64;
                for v in x.iter().rev() {
                    tail += v;
                    best = best.max(tail.abs());
                }
                best
            }
            SpaceOracle::LinEll1 => {
                let mut tail = 0.0_f64;
                let mut best = 0.0_f64;
                for (k, v) in x.iter().enumerate().rev() {
                    tail += v.abs();
                    best = best.max(lin_weight(k + 1) * tail);
                }
                best
            }
            SpaceOracle::IntervalRenorm(seq) => interval_norm(seq, x),
            SpaceOracle::James { p } => james_norm(x, *p),
        }
    }

    /// Checked norm evaluation.
    pub fn norm(&self, x: &[f64]) -> Result<f64> {
        self.validate()?;
        if let Some(index) = x.iter().position(|v| !v.is_finite()) {
            return Err(Error::InvalidVector { index });
        }
        Ok(self.norm_unchecked(x))
    }
}

/// `8^k / (1 + 8^k)`, the k-th weight of Lin's norm (k is 1-based).
pub fn lin_weight(k: usize) -> f64 {
    1.0 / (1.0 + 0.125_f64.powi(k as i32))
}

fn ell_p(x: &[f64], p: f64) -> f64 {
    if p == 1.0 {
        return x.iter().map(|v| v.abs()).sum();
    }
    let m = x.iter().fold(0.0_f64, |m, v| m.max(v.abs()));
    if m == 0.0 {
        return 0.0;
    }
    m * x.iter().map(|v| (v.abs() / m).powf(p)).sum::<f64>().powf(1.0 / p)
}

fn interval_norm(seq: &BasicSequenceSpec, a: &[f64]) -> f64 {
    let n = a.iter().rposition(|&v| v != 0.0).map_or(0, |i| i + 1);
    if n == 0 {
        return 0.0;
    }
    let basis = match seq.resolve(n) {
        Ok(b) => b,
        Err(_) => return f64::NAN,
    };
    let mut best = 0.0_f64;
    let mut y = vec![0.0; basis.ambient_dim()];
    for i in 0..n {
        y.iter_mut().for_each(|v| *v = 0.0);
        for j in i..n {
            if a[j] != 0.0 {
                for (yk, ck) in y.iter_mut().zip(basis.column(j)) {
                    *yk += a[j] * ck;
                }
            }
            best = best.max(seq.ambient.norm_unchecked(&y));
        }
    }
    best
}

/// Evaluates `space` on `v`.
pub fn norm_eval(space: &SpaceOracle, v: &CoeffVector) -> Result<f64> {
    space.norm(v)
}

/// JSON form `{"family": ..., "params": {...}}`.
#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SpaceDescriptor {
    pub family: String,
    #[serde(default)]
    pub params: Map<String, Value>,
}

impl From<SpaceOracle> for SpaceDescriptor {
    fn from(s: SpaceOracle) -> Self {
        let mut params = Map::new();
        match &s {
            SpaceOracle::EllP { p } | SpaceOracle::James { p } => {
                params.insert("p".into(), Value::from(*p));
            }
            SpaceOracle::IntervalRenorm(seq) => {
                params.insert(
                    "sequence".into(),
                    serde_json::to_value(seq.as_ref()).expect("sequence serializes"),
                );
            }
            _ => {}
        }
        SpaceDescriptor {
            family: s.family().to_string(),
            params,
        }
    }
}

impl TryFrom<SpaceDescriptor> for SpaceOracle {
    type Error = Error;

    fn try_from(d: SpaceDescriptor) -> Result<Self> {
        let allowed: &[&str] = match d.family.as_str() {
            "ell_p" | "james" => &["p"],
            "interval_renorm" => &["sequence"],
            _ => &[],
        };
        if let Some(k) = d.params.keys().find(|k| !allowed.contains(&k.as_str())) {
            return Err(Error::InvalidParameter(format!(
                "unknown parameter `{k}` for family `{}`",
                d.family
            )));
        }
        let p = || -> Result<f64> {
            d.params
                .get("p")
                .and_then(Value::as_f64)
                .ok_or_else(|| Error::InvalidParameter("missing numeric parameter `p`".into()))
        };
        let space = match d.family.as_str() {
            "c0_sup" => SpaceOracle::C0Sup,
            "ell_p" => SpaceOracle::EllP { p: p()? },
            "summing_c0" => SpaceOracle::SummingC0,
            "lin_ell1" => SpaceOracle::LinEll1,
            "james" => SpaceOracle::James { p: p()? },
            "interval_renorm" => {
                let seq = d
                    .params
                    .get("sequence")
                    .ok_or_else(|| Error::InvalidParameter("missing `sequence`".into()))?;
                let seq: BasicSequenceSpec = serde_json::from_value(seq.clone())
                    .map_err(|e| Error::InvalidParameter(e.to_string()))?;
                SpaceOracle::IntervalRenorm(Box::new(seq))
            }
            other => return Err(Error::InvalidParameter(format!("unknown family `{other}`"))),
        };
        space.validate()?;
        Ok(space)
    }
}

impl fmt::Display for SpaceOracle {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            SpaceOracle::C0Sup => write!(f, "c0"),
            SpaceOracle::EllP { p } if *p == 1.0 => write!(f, "ell1"),
            SpaceOracle::EllP { p } => write!(f, "ell-p:{p}"),
            SpaceOracle::SummingC0 => write!(f, "summing"),
            SpaceOracle::LinEll1 => write!(f, "lin-ell1"),
            SpaceOracle::IntervalRenorm(seq) => write!(f, "interval({seq})"),
            SpaceOracle::James { p } => write!(f, "james:{p}"),
        }
    }
}

/// Short names used on the command line: `c0`, `ell1`, `ell-p:<p>`,
/// `summing`, `lin-ell1`, `james:<p>`, or a JSON descriptor.
impl FromStr for SpaceOracle {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let s = s.trim();
        if s.starts_with('{') {
            return serde_json::from_str(s).map_err(|e| Error::InvalidParameter(e.to_string()));
        }
        let parse_p = |v: &str| -> Result<f64> {
            v.parse::<f64>()
                .map_err(|_| Error::InvalidParameter(format!("bad exponent `{v}`")))
        };
        let space = match s.split_once(':') {
            Some(("ell-p" | "ellp" | "ell_p", p)) => SpaceOracle::EllP { p: parse_p(p)? },
            Some(("james", p)) => SpaceOracle::James { p: parse_p(p)? },
            Some(_) => return Err(Error::InvalidParameter(format!("unknown space `{s}`"))),
            None => match s {
                "c0" | "c0-sup" | "c0_sup" => SpaceOracle::C0Sup,
                "ell1" | "l1" => SpaceOracle::ell1(),
                "summing" | "summing-c0" | "summing_c0" => SpaceOracle::SummingC0,
                "lin-ell1" | "lin_ell1" | "lin" => SpaceOracle::LinEll1,
                _ => return Err(Error::InvalidParameter(format!("unknown space `{s}`"))),
            },
        };
        space.validate()?;
        Ok(space)
    }
}
