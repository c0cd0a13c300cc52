use serde::{Deserialize, Serialize};

/// Absolute tolerance for comparisons that back a certified claim.
pub const CERTIFIED: f64 = 1e-9;

/// Absolute tolerance for algebraic identities evaluated in floating point.
pub const ALGEBRAIC: f64 = 1e-12;

/// Reduced-cost threshold used by the simplex method's optimality test.
pub const LP_OPTIMALITY: f64 = 1e-9;

/// Tolerance pair carried through reports. Both fields can be overridden from
/// an experiment config.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Tolerances {
    #[serde(default = "default_certified")]
    pub certified: f64,
    #[serde(default = "default_algebraic")]
    pub algebraic: f64,
}

fn default_certified() -> f64 {
    CERTIFIED
}

fn default_algebraic() -> f64 {
    ALGEBRAIC
}

impl Default for Tolerances {
    fn default() -> Self {
        Self {
            certified: CERTIFIED,
            algebraic: ALGEBRAIC,
        }
    }
}
