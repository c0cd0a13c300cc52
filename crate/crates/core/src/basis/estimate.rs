use serde::{Deserialize, Serialize};

use crate::vector::CoeffVector;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "SCREAMING_SNAKE_CASE")]
pub enum Method {
    /// Maximum over the extreme points of a polyhedral ball.
    ExactExtremePoints,
    /// One linear program per norming functional of the target norm.
    ExactLp,
    /// Random starts with local ascent; lower bound only.
    SampledAscent,
    /// Closed-form bound.
    AnalyticBound,
}

impl Method {
    pub fn is_exact(self) -> bool {
        matches!(self, Method::ExactExtremePoints | Method::ExactLp)
    }
}

/// Two-sided bound on a norm-type constant at a fixed truncation.
///
/// For sup-type constants the witnesses attain `lower`. For inf-type
/// constants (wide-(s), inverse Lipschitz) they attain `upper`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ConstantEstimate {
    pub lower: f64,
    pub lower_witness: Vec<CoeffVector>,
    #[serde(with = "extended_f64")]
    pub upper: f64,
    /// Where `upper` comes from.
    pub upper_source: String,
    pub method: Method,
    pub certified: bool,
    pub truncation: usize,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub flag: Option<String>,
}

impl ConstantEstimate {
    /// Width of the certified interval.
    pub fn gap(&self) -> f64 {
        self.upper - self.lower
    }

    /// Best single value: the common value when certified, else the lower
    /// bound.
    pub fn value(&self) -> f64 {
        self.lower
    }
}

/// Serializes non-finite floats as the strings "inf", "-inf", "nan" so that
/// reports never lose an unbounded upper bound.
pub(crate) mod extended_f64 {
    use serde::de::Error as _;
    use serde::{Deserialize, Deserializer, Serializer};

    pub fn serialize<S: Serializer>(x: &f64, s: S) -> Result<S::Ok, S::Error> {
        if x.is_finite() {
            s.serialize_f64(*x)
        } else if x.is_nan() {
            s.serialize_str("nan")
        } else if *x > 0.0 {
            s.serialize_str("inf")
        } else {
            s.serialize_str("-inf")
        }
    }

    #[derive(Deserialize)]
    #[serde(untagged)]
    enum Repr {
        Num(f64),
        Str(String),
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<f64, D::Error> {
        match Repr::deserialize(d)? {
            Repr::Num(x) => Ok(x),
            Repr::Str(s) => match s.as_str() {
                "inf" => Ok(f64::INFINITY),
                "-inf" => Ok(f64::NEG_INFINITY),
                "nan" => Ok(f64::NAN),
                other => Err(D::Error::custom(format!("not a number: {other}"))),
            },
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn infinite_upper_round_trips() {
        let e = ConstantEstimate {
            lower: 1.5,
            lower_witness: vec![CoeffVector::unit(1, 2)],
            upper: f64::INFINITY,
            upper_source: "none".into(),
            method: Method::SampledAscent,
            certified: false,
            truncation: 2,
            flag: None,
        };
        let j = serde_json::to_string(&e).unwrap();
        assert!(j.contains("\"upper\":\"inf\""));
        assert!(j.contains("SAMPLED_ASCENT"));
        let back: ConstantEstimate = serde_json::from_str(&j).unwrap();
        assert_eq!(back, e);
    }
}
