use crate::basis::{BasicSequenceSpec, Preset};
use crate::error::{Error, Result};
use crate::spaces::SpaceOracle;

use super::alpha::AlphaSchedule;

/// Checks the Key Lemma's scaling: non-decreasing with values in `(0, 1]`.
pub fn validate_scaling(alpha: &[f64]) -> Result<()> {
    if alpha.is_empty() {
        return Err(Error::InvalidScaling("empty scaling".into()));
    }
    if let Some(a) = alpha.iter().find(|a| !(**a > 0.0 && **a <= 1.0)) {
        return Err(Error::InvalidScaling(format!("{a} is outside (0, 1]")));
    }
    if alpha.windows(2).any(|w| w[1] < w[0]) {
        return Err(Error::InvalidScaling("scaling must be non-decreasing".into()));
    }
    Ok(())
}

/// `(a_n x_n)` for a non-decreasing `a` in `(0, 1]`.
pub fn scaled_basis(seq: &BasicSequenceSpec, alpha: &[f64]) -> Result<BasicSequenceSpec> {
    validate_scaling(alpha)?;
    if alpha.iter().all(|&a| a == 1.0) {
        return Ok(seq.clone());
    }
    BasicSequenceSpec::new(
        seq.ambient.clone(),
        Preset::scaled(alpha.to_vec(), seq.preset.clone()),
        seq.truncation,
    )
}

/// `z_n = (1 - a_n) x_n + a_n x_{n+1}`.
pub fn convex_basis(seq: &BasicSequenceSpec, alpha: &AlphaSchedule) -> Result<BasicSequenceSpec> {
    let a = alpha.extended(seq.truncation)?;
    if let Some(x) = a.iter().find(|x| !(**x > 0.0 && **x < 0.5)) {
        return Err(Error::InvalidSchedule(format!("alpha {x} outside (0, 1/2)")));
    }
    if a.windows(2).any(|w| w[1] >= w[0]) {
        return Err(Error::InvalidSchedule("alpha must be strictly decreasing".into()));
    }
    BasicSequenceSpec::new(
        seq.ambient.clone(),
        Preset::convex(alpha.clone(), seq.preset.clone()),
        seq.truncation,
    )
}

/// The norm `|||a||| = max_I ||P_I sum a_n x_n||` over finite intervals `I`.
pub fn interval_renorm(seq: &BasicSequenceSpec) -> Result<SpaceOracle> {
    seq.validate()?;
    Ok(SpaceOracle::IntervalRenorm(Box::new(seq.clone())))
}
