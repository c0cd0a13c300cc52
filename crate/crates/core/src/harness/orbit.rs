use serde::{Deserialize, Serialize};

use crate::basis::SimplexPoint;
use crate::constructions::AffineMapSpec;
use crate::error::{Error, Result};
use crate::spaces::SpaceOracle;

use super::Growth;

/// `t' = A t` on the coefficient simplex.
///
/// Mass dropped by truncated kinds is not renormalized; compare
/// `1 - sum(t')` with the column residuals.
pub fn map_apply(m: &AffineMapSpec, t: &SimplexPoint) -> Result<SimplexPoint> {
    Ok(SimplexPoint::from_raw(m.apply_linear(t)?))
}

/// Applies `m`, growing it first under `growth` when the support of `t`
/// leaves its domain.
pub(crate) fn apply_growing(m: &mut AffineMapSpec, t: &[f64], growth: Growth) -> Result<Vec<f64>> {
    let support = t.iter().rposition(|&v| v != 0.0).map_or(0, |i| i + 1);
    if support > m.domain() {
        match growth {
            Growth::Error => {
                return Err(Error::TruncationOverflow {
                    support,
                    truncation: m.domain(),
                })
            }
            Growth::AutoExtend { cap } => {
                if support > cap {
                    return Err(Error::TruncationOverflow {
                        support,
                        truncation: cap,
                    });
                }
                *m = m.extended((2 * m.domain()).max(support).min(cap))?;
            }
        }
    }
    m.apply_linear(t)
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct OrbitRecord {
    pub points: Vec<SimplexPoint>,
    /// `||t_{p+1} - t_p||` in the chosen space.
    pub step_displacements: Vec<f64>,
    /// `coordinate_traces[i][p]` is coordinate `i + 1` of `t_p`.
    pub coordinate_traces: Vec<Vec<f64>>,
    /// `1 - sum(t_p)` at the last step.
    pub mass_defect: f64,
}

/// Iterates `m` from `t0` for `steps` steps.
pub fn picard_orbit(
    m: &AffineMapSpec,
    t0: &SimplexPoint,
    steps: usize,
    space: &SpaceOracle,
    growth: Growth,
) -> Result<OrbitRecord> {
    if steps == 0 {
        return Err(Error::InvalidParameter("steps must be >= 1".into()));
    }
    space.validate()?;
    let mut map = m.clone();
    let mut points = vec![t0.clone()];
    let mut disp = Vec::with_capacity(steps);
    for _ in 0..steps {
        let cur: &[f64] = points.last().unwrap();
        let next = apply_growing(&mut map, cur, growth)?;
        let len = next.len().max(cur.len());
        let diff: Vec<f64> = (0..len)
            .map(|i| next.get(i).copied().unwrap_or(0.0) - cur.get(i).copied().unwrap_or(0.0))
            .collect();
        disp.push(space.norm_unchecked(&diff));
        points.push(SimplexPoint::from_raw(next));
    }
    let width = points.iter().map(|p| p.len()).max().unwrap_or(0).min(16);
    let coordinate_traces = (0..width)
        .map(|i| points.iter().map(|p| p.get(i).copied().unwrap_or(0.0)).collect())
        .collect();
    let mass_defect = 1.0 - points.last().unwrap().iter().sum::<f64>();
    Ok(OrbitRecord {
        points,
        step_displacements: disp,
        coordinate_traces,
        mass_defect,
    })
}
