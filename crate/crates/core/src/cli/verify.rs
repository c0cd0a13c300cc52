use std::fmt;
use std::str::FromStr;

use super::commands::random_pairs;
use super::config::sequence_stats;
use super::report::{Check, Report};
use crate::basis::{basis_constant, equivalence_constants, wide_s_constant, BasicSequenceSpec};
use crate::constructions::{
    abel_identity_check, alpha_generate, alpha_validate, convex_basis, hj_monotonicity_check, key_lemma_check,
    map_build, separation_lower_bound_with, small_perturbation_sum, AlphaFamily, KeyLemmaConfig, MapKind, MapParams,
};
use crate::error::{Error, Result};
use crate::harness::{
    fixed_point_solve, lipschitz_estimate, min_displacement, uniform_lipschitz_probe, Direction, LipschitzMethod,
    LipschitzOptions,
};
use crate::optim::rng;
use crate::spaces::SpaceOracle;
use crate::tolerance::Tolerances;
use crate::vector::CoeffVector;

/// Exhaustive computations (extreme points, per-p probes) run at
/// `min(N, EXACT_CAP)`.
pub const EXACT_CAP: usize = 8;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum VerifyPreset {
    Summing,
    CanonicalEll1,
    CanonicalC0,
    LinEll1,
}

impl VerifyPreset {
    pub const ALL: [VerifyPreset; 4] = [
        VerifyPreset::Summing,
        VerifyPreset::CanonicalEll1,
        VerifyPreset::CanonicalC0,
        VerifyPreset::LinEll1,
    ];

    pub fn sequence(self, n: usize) -> BasicSequenceSpec {
        match self {
            VerifyPreset::Summing => BasicSequenceSpec::summing(n),
            _ => BasicSequenceSpec::canonical(self.coefficient_space(), n),
        }
    }

    /// The norm the sequence induces on coefficient vectors.
    pub fn coefficient_space(self) -> SpaceOracle {
        match self {
            VerifyPreset::Summing => SpaceOracle::SummingC0,
            VerifyPreset::CanonicalEll1 => SpaceOracle::ell1(),
            VerifyPreset::CanonicalC0 => SpaceOracle::C0Sup,
            VerifyPreset::LinEll1 => SpaceOracle::LinEll1,
        }
    }
}

impl FromStr for VerifyPreset {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Ok(match s {
            "summing" => VerifyPreset::Summing,
            "canonical-ell1" => VerifyPreset::CanonicalEll1,
            "canonical-c0" => VerifyPreset::CanonicalC0,
            "lin-ell1" => VerifyPreset::LinEll1,
            _ => return Err(Error::InvalidParameter(format!("unknown preset `{s}`"))),
        })
    }
}

impl fmt::Display for VerifyPreset {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            VerifyPreset::Summing => "summing",
            VerifyPreset::CanonicalEll1 => "canonical-ell1",
            VerifyPreset::CanonicalC0 => "canonical-c0",
            VerifyPreset::LinEll1 => "lin-ell1",
        })
    }
}

/// Runs every check on one preset and returns the consolidated report.
pub fn verify_all(preset: VerifyPreset, n: usize, seed: u64, tol: Tolerances) -> Result<Report> {
    if n < 2 {
        return Err(Error::InvalidParameter("verify-all needs N >= 2".into()));
    }
    let ne = n.min(EXACT_CAP);
    let x = preset.sequence(n);
    let space = preset.coefficient_space();
    let mut r = Report::new("verify-all", Some(seed), tol, Some(n));
    r.data("preset", &preset.to_string());
    r.data("exact_truncation", &ne);

    let k_est = basis_constant(&x, n)?;
    let (k, inf, sup) = sequence_stats(&x, n)?;
    r.check(Check::at_least("basis_constant", k, 1.0, tol.certified, format!("K = {k}")));
    r.check(Check::flag("basis_constant_certified", k_est.certified, format!("{:?}", k_est.method)));
    r.estimate("basis_constant", k_est);
    r.estimate("wide_s", wide_s_constant(&x, n)?);

    let alpha = alpha_generate(k, inf, sup, n, AlphaFamily::Geometric)?;
    for c in alpha_validate(&alpha, k, inf, sup).conditions {
        r.check(Check {
            name: format!("alpha_{}", c.name),
            pass: c.pass,
            margin: c.margin,
            detail: c.detail,
        });
    }
    r.data("alpha", &alpha);
    let a = alpha.extended(n + 1)?;

    // Scaling by 1 - a_n, plus random non-decreasing scalings.
    let xe = x.with_truncation(ne);
    let mut scalings = vec![a[..ne].iter().map(|v| 1.0 - v).collect::<Vec<_>>()];
    scalings.extend((0..5).map(|d| rng::nondecreasing_unit(&mut rng::substream(seed, 1 << 40 | d), ne)));
    let mut margin = f64::INFINITY;
    let mut holds = true;
    for s in &scalings {
        let rep = key_lemma_check(&xe, s, &KeyLemmaConfig::enumerate())?;
        holds &= rep.holds();
        margin = margin.min((rep.l - rep.forward.upper).min(rep.l - rep.backward.upper));
    }
    r.check(Check {
        name: "key_lemma".into(),
        pass: holds,
        margin,
        detail: format!("{} scalings at N = {ne}, L = 2K/alpha_1", scalings.len()),
    });

    let hj = hj_monotonicity_check(&x, None, 2000, seed)?;
    r.check(Check::at_most(
        "hj_monotonicity",
        hj.max_violation,
        0.0,
        tol.certified,
        format!("{} trials", hj.trials),
    ));

    let mut abel = 0.0_f64;
    for c in 0..200u64 {
        let mut g = rng::substream(seed, 2 << 40 | c);
        let v = CoeffVector::new(rng::uniform_vec(&mut g, n, -1.0, 1.0))?;
        let w = CoeffVector::new(rng::nondecreasing_unit(&mut g, n))?;
        abel = abel.max(abel_identity_check(&v, &w)?);
    }
    r.check(Check::at_most("abel_identity", abel, 0.0, tol.algebraic, "max residual over 200 instances"));

    let pert = small_perturbation_sum(&x, &alpha, Some(k))?;
    r.check(Check {
        name: "small_perturbation".into(),
        pass: pert.pass,
        margin: pert.bound - pert.sum,
        detail: format!("sum {} < 1/(2K) = {}", pert.sum, pert.bound),
    });

    let z = convex_basis(&x, &alpha)?;
    let zb = z.resolve(n)?;
    let zmin = (0..n)
        .map(|j| z.ambient.norm(zb.column(j)))
        .collect::<Result<Vec<_>>>()?
        .into_iter()
        .fold(f64::INFINITY, f64::min);
    let zfloor = (1.0 - a[0]) * inf - a[0] * sup;
    r.check(Check::at_least("convex_norms", zmin, zfloor, tol.certified, format!("min ||z_n|| = {zmin}")));
    let eq = equivalence_constants(&x.with_truncation(ne), &z.with_truncation(ne), ne)?;
    r.check(Check::flag(
        "convex_equivalence",
        eq.certified() && eq.constant().is_finite(),
        format!("(z_n) ~ (x_n) with L = {} at N = {ne}", eq.constant()),
    ));
    r.estimate("convex_forward", eq.forward);
    r.estimate("convex_backward", eq.backward);

    let f = map_build(MapKind::FMain, &MapParams::new(n).with_alpha(alpha.clone()))?;
    let fp = fixed_point_solve(&f, n)?;
    r.check(Check::flag(
        "fixed_point_free",
        fp.triangular.is_some() && !fp.has_simplex_fixed_point(),
        fp.conclusion.clone(),
    ));
    let d = min_displacement(&f, &space, n)?;
    r.check(Check {
        name: "min_displacement".into(),
        pass: d.best_value > 0.0,
        margin: d.best_value,
        detail: format!("min ||(A - I) t|| over the simplex at N = {n}"),
    });

    let opts = LipschitzOptions {
        seed,
        ..Default::default()
    };
    let fwd = lipschitz_estimate(&f, &space, ne, LipschitzMethod::Exact, Direction::Forward, &opts)?;
    let smp = lipschitz_estimate(&f, &space, ne, LipschitzMethod::Sample, Direction::Forward, &opts)?;
    let up = fwd.analytic.unwrap_or(f64::INFINITY);
    r.check(Check {
        name: "lipschitz_forward".into(),
        pass: smp.estimate.lower <= fwd.estimate.upper + tol.certified
            && fwd.estimate.upper <= up + tol.certified
            && fwd.consistent(),
        margin: (up - fwd.estimate.upper).min(fwd.estimate.upper - smp.estimate.lower),
        detail: format!("sampled {} <= exact {} <= analytic {up}", smp.estimate.lower, fwd.estimate.upper),
    });
    let inv = lipschitz_estimate(&f, &space, ne, LipschitzMethod::Exact, Direction::Inverse, &opts)?;
    let lo = inv.analytic.unwrap_or(0.0);
    r.check(Check {
        name: "lipschitz_inverse".into(),
        pass: inv.consistent() && inv.estimate.lower > 0.0,
        margin: inv.estimate.upper - lo,
        detail: format!("analytic {lo} <= exact {}", inv.estimate.lower),
    });
    r.estimate("lipschitz_forward", fwd.estimate);
    r.estimate("lipschitz_inverse", inv.estimate);

    if space != SpaceOracle::LinEll1 {
        let f0 = map_build(MapKind::F0Shift, &MapParams::new(ne))?;
        let probe = uniform_lipschitz_probe(&f0, &space, ne, 8, &opts)?;
        r.check(Check::at_most(
            "shift_uniformly_lipschitz",
            (probe.sup - 1.0).abs(),
            0.0,
            tol.certified,
            format!("sup_p<=8 Lip(F0^p) = {}", probe.sup),
        ));
    }

    let mut slack = f64::INFINITY;
    let mut floor = 0.0;
    for (kp, lp) in random_pairs(seed, 20, n) {
        let s = separation_lower_bound_with(&x, &x, &kp, &lp, n, Some(k))?;
        slack = slack.min(s.direct - s.floor);
        floor = s.floor;
    }
    r.check(Check::at_least(
        "separation",
        slack,
        0.0,
        tol.certified,
        format!("floor {floor}, 20 random pairs"),
    ));
    Ok(r)
}
