//! Experiments on the truncated simplex: orbits, displacement, fixed points
//! and Lipschitz constants of the affine maps.

mod displacement;
mod fixed;
mod lipschitz;
mod orbit;

use serde::{Deserialize, Serialize};

pub use displacement::{displacement, min_displacement, min_displacement_seeded};
pub use fixed::{fixed_point_solve, FixedPointAnalysis, TriangularCertificate};
pub use lipschitz::{
    lipschitz_estimate, uniform_lipschitz_probe, Direction, LipschitzMethod, LipschitzOptions,
    LipschitzReport, ProbeReport,
};
pub use orbit::{map_apply, picard_orbit, OrbitRecord};

/// Hard cap on automatic domain growth.
pub const MAX_TRUNCATION: usize = 512;

/// What to do when mass moves past a map's stored domain.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Growth {
    Error,
    AutoExtend { cap: usize },
}

impl Default for Growth {
    fn default() -> Self {
        Growth::AutoExtend { cap: MAX_TRUNCATION }
    }
}
