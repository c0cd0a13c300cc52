use serde::{Deserialize, Serialize};

use crate::basis::{
    basis_constant_with, operator_norm, BasicSequenceSpec, ConstantEstimate, EstimateOptions,
    RatioProblem, Target,
};
use crate::error::{Error, Result};
use crate::optim::linalg::Matrix;
use crate::optim::rng;
use crate::tolerance;
use crate::vector::CoeffVector;

use super::alpha::AlphaSchedule;
use super::bases::{interval_renorm, validate_scaling};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MonotonicityReport {
    pub trials: usize,
    pub seed: u64,
    pub truncation: usize,
    pub max_violation: f64,
    pub violations: usize,
    /// Worst `(a, alpha)` pair.
    pub worst: Option<(CoeffVector, CoeffVector)>,
}

/// Samples `|||sum a_n alpha_n x_n||| <= |||sum a_n x_n|||` under the
/// interval renorming of `seq`. A fixed `alpha` is used when given,
/// otherwise each trial draws a fresh non-decreasing one.
pub fn hj_monotonicity_check(
    seq: &BasicSequenceSpec,
    alpha: Option<&[f64]>,
    trials: usize,
    seed: u64,
) -> Result<MonotonicityReport> {
    let n = seq.truncation;
    if let Some(a) = alpha {
        validate_scaling(a)?;
    }
    let norm = interval_renorm(seq)?;
    let mut rep = MonotonicityReport {
        trials,
        seed,
        truncation: n,
        max_violation: f64::NEG_INFINITY,
        violations: 0,
        worst: None,
    };
    for t in 0..trials {
        let mut r = rng::substream(seed, t as u64);
        let a = rng::uniform_vec(&mut r, n, -1.0, 1.0);
        let al = match alpha {
            Some(x) => x.iter().copied().chain(std::iter::repeat(*x.last().unwrap())).take(n).collect(),
            None => rng::nondecreasing_unit(&mut r, n),
        };
        let scaled: Vec<f64> = a.iter().zip(&al).map(|(x, y)| x * y).collect();
        let v = norm.norm_unchecked(&scaled) - norm.norm_unchecked(&a);
        if v > tolerance::CERTIFIED {
            rep.violations += 1;
        }
        if v > rep.max_violation {
            rep.max_violation = v;
            rep.worst = Some((CoeffVector::from_vec(a), CoeffVector::from_vec(al)));
        }
    }
    Ok(rep)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "SCREAMING_SNAKE_CASE")]
pub enum KeyLemmaMode {
    /// Exact over extreme points (or LPs).
    Enum,
    /// Random coefficient vectors.
    Sample,
}

#[derive(Debug, Clone)]
pub struct KeyLemmaConfig {
    pub mode: KeyLemmaMode,
    pub trials: usize,
    pub seed: u64,
    /// Basis constant to use instead of computing it.
    pub basis_constant: Option<f64>,
}

impl KeyLemmaConfig {
    pub fn enumerate() -> Self {
        Self {
            mode: KeyLemmaMode::Enum,
            trials: 0,
            seed: 0,
            basis_constant: None,
        }
    }

    pub fn sample(trials: usize, seed: u64) -> Self {
        Self {
            mode: KeyLemmaMode::Sample,
            trials,
            seed,
            basis_constant: None,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct KeyLemmaReport {
    pub mode: KeyLemmaMode,
    pub basis_constant: f64,
    pub alpha1: f64,
    /// `2 K / alpha_1`.
    pub l: f64,
    /// `sup ||sum a_i alpha_i x_i|| / ||sum a_i x_i||`.
    pub forward: ConstantEstimate,
    /// `sup ||sum a_i x_i|| / ||sum a_i alpha_i x_i||`.
    pub backward: ConstantEstimate,
    pub forward_holds: bool,
    pub backward_holds: bool,
    pub certified: bool,
}

impl KeyLemmaReport {
    pub fn holds(&self) -> bool {
        self.forward_holds && self.backward_holds
    }
}

/// Checks `(1/L)||sum a x|| <= ||sum a alpha x|| <= L ||sum a x||` with
/// `L = 2K/alpha_1`.
pub fn key_lemma_check(seq: &BasicSequenceSpec, alpha: &[f64], cfg: &KeyLemmaConfig) -> Result<KeyLemmaReport> {
    validate_scaling(alpha)?;
    let n = seq.truncation;
    let al: Vec<f64> = alpha
        .iter()
        .copied()
        .chain(std::iter::repeat(*alpha.last().unwrap()))
        .take(n)
        .collect();
    let k = match cfg.basis_constant {
        Some(k) => k,
        None => basis_constant_with(seq, n, &EstimateOptions::default())?.upper,
    };
    let l = 2.0 * k / al[0];
    let m = seq.resolve(n)?.matrix();
    let mut md = m.clone();
    for i in 0..md.rows {
        for (v, a) in md.row_mut(i).iter_mut().zip(&al) {
            *v *= a;
        }
    }
    let (forward, backward) = match cfg.mode {
        KeyLemmaMode::Enum => {
            let opts = EstimateOptions::default();
            let prob = |f: &Matrix, g: &Matrix| RatioProblem {
                from_space: &seq.ambient,
                from_map: f.clone(),
                targets: vec![Target {
                    space: &seq.ambient,
                    map: g.clone(),
                }],
                sum_zero: false,
            };
            (
                operator_norm(&prob(&m, &md), &opts)?,
                operator_norm(&prob(&md, &m), &opts)?,
            )
        }
        KeyLemmaMode::Sample => sample_ratios(seq, &m, &md, cfg.trials, cfg.seed),
    };
    let tol = tolerance::CERTIFIED;
    Ok(KeyLemmaReport {
        mode: cfg.mode,
        basis_constant: k,
        alpha1: al[0],
        l,
        forward_holds: forward.lower <= l + tol,
        backward_holds: backward.lower <= l + tol,
        certified: forward.certified && backward.certified && forward.upper <= l + tol && backward.upper <= l + tol,
        forward,
        backward,
    })
}

fn sample_ratios(
    seq: &BasicSequenceSpec,
    m: &Matrix,
    md: &Matrix,
    trials: usize,
    seed: u64,
) -> (ConstantEstimate, ConstantEstimate) {
    let n = m.cols;
    let mut best = [(0.0_f64, vec![0.0; n]), (0.0_f64, vec![0.0; n])];
    for t in 0..trials {
        let mut r = rng::substream(seed, t as u64);
        let a = rng::uniform_vec(&mut r, n, -1.0, 1.0);
        let plain = seq.ambient.norm_unchecked(&m.mul_vec(&a));
        let scaled = seq.ambient.norm_unchecked(&md.mul_vec(&a));
        if plain > 0.0 && scaled > 0.0 {
            for (slot, ratio) in best.iter_mut().zip([scaled / plain, plain / scaled]) {
                if ratio > slot.0 {
                    *slot = (ratio, a.clone());
                }
            }
        }
    }
    let [f, b] = best.map(|(v, w)| ConstantEstimate {
        lower: v,
        lower_witness: vec![CoeffVector::from_vec(w)],
        upper: f64::INFINITY,
        upper_source: "none".into(),
        method: crate::basis::Method::SampledAscent,
        certified: false,
        truncation: n,
        flag: None,
    });
    (f, b)
}

/// Max-abs residual of Abel's summation
/// `sum a_n alpha_n e_n = sum_{n<N} (alpha_n - alpha_{n+1}) P_n a + alpha_N a`.
pub fn abel_identity_check(a: &CoeffVector, alpha: &CoeffVector) -> Result<f64> {
    let n = a.len();
    if alpha.len() != n {
        return Err(Error::DimensionMismatch {
            expected: n,
            actual: alpha.len(),
        });
    }
    if n == 0 {
        return Ok(0.0);
    }
    let lhs: Vec<f64> = a.iter().zip(alpha.iter()).map(|(x, y)| x * y).collect();
    let mut rhs: Vec<f64> = a.iter().map(|x| alpha[n - 1] * x).collect();
    for k in 0..n - 1 {
        let d = alpha[k] - alpha[k + 1];
        for i in 0..=k {
            rhs[i] += d * a[i];
        }
    }
    Ok(lhs.iter().zip(&rhs).map(|(x, y)| (x - y).abs()).fold(0.0, f64::max))
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PerturbationReport {
    /// `sum_{n<=N} alpha_n ||x_{n+1}|| / ((1 - alpha_n) ||x_n||)`.
    pub sum: f64,
    /// `1/(2K)`.
    pub bound: f64,
    pub pass: bool,
    pub basis_constant: f64,
    pub truncation: usize,
}

/// The small-perturbation sum for `w_n = (1 - alpha_n) x_n` against
/// `z_n = w_n + alpha_n x_{n+1}`.
pub fn small_perturbation_sum(
    seq: &BasicSequenceSpec,
    alpha: &AlphaSchedule,
    basis_constant: Option<f64>,
) -> Result<PerturbationReport> {
    let n = seq.truncation;
    let a = alpha.extended(n)?;
    let k = match basis_constant {
        Some(k) => k,
        None => basis_constant_with(seq, n, &EstimateOptions::default())?.upper,
    };
    let b = seq.resolve(n + 1)?;
    let norms: Vec<f64> = (0..=n)
        .map(|j| seq.ambient.norm(b.column(j)))
        .collect::<Result<_>>()?;
    let sum = (0..n)
        .map(|j| a[j] * norms[j + 1] / ((1.0 - a[j]) * norms[j]))
        .sum::<f64>();
    let bound = 1.0 / (2.0 * k);
    Ok(PerturbationReport {
        sum,
        bound,
        pass: sum < bound,
        basis_constant: k,
        truncation: n,
    })
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SeparationReport {
    /// First (1-based) position where the index sequences differ.
    pub j: usize,
    /// `||z_{k_j} - z_{l_j}|| / ||x_j||`.
    pub direct: f64,
    /// `inf ||z_n|| / (K_z sup ||x_n||)`.
    pub floor: f64,
    pub basis_constant_z: f64,
    pub inf_z: f64,
    pub sup_x: f64,
}

/// Lower bounds on `||T_k - T_l||` where `T_k x_n = z_{k_n}`.
pub fn separation_lower_bound(
    seq_x: &BasicSequenceSpec,
    seq_z: &BasicSequenceSpec,
    kappa: &[usize],
    ell: &[usize],
    n: usize,
) -> Result<SeparationReport> {
    separation_lower_bound_with(seq_x, seq_z, kappa, ell, n, None)
}

/// As [`separation_lower_bound`], reusing a known basis constant of `seq_z`
/// at `n`.
pub fn separation_lower_bound_with(
    seq_x: &BasicSequenceSpec,
    seq_z: &BasicSequenceSpec,
    kappa: &[usize],
    ell: &[usize],
    n: usize,
    basis_constant_z: Option<f64>,
) -> Result<SeparationReport> {
    if kappa == ell {
        return Err(Error::IdenticalSequences);
    }
    let j = kappa
        .iter()
        .zip(ell)
        .position(|(a, b)| a != b)
        .ok_or_else(|| Error::InvalidParameter("one index sequence is a prefix of the other".into()))?;
    for s in [kappa, ell] {
        if s.contains(&0) || s.windows(2).any(|w| w[1] <= w[0]) {
            return Err(Error::InvalidParameter("index sequences must be increasing and 1-based".into()));
        }
    }
    let (kj, lj) = (kappa[j], ell[j]);
    let top = n.max(kj).max(lj).max(j + 1);
    let bz = seq_z.resolve(top)?;
    let bx = seq_x.resolve(top)?;
    let diff: Vec<f64> = bz.column(kj - 1).iter().zip(bz.column(lj - 1)).map(|(a, b)| a - b).collect();
    let direct = seq_z.ambient.norm(&diff)? / seq_x.ambient.norm(bx.column(j))?;

    let zn: Vec<f64> = (0..n).map(|i| seq_z.ambient.norm(bz.column(i))).collect::<Result<_>>()?;
    let xn: Vec<f64> = (0..n).map(|i| seq_x.ambient.norm(bx.column(i))).collect::<Result<_>>()?;
    let inf_z = zn.iter().copied().fold(f64::INFINITY, f64::min);
    let sup_x = xn.iter().copied().fold(0.0, f64::max);
    let kz = match basis_constant_z {
        Some(k) => k,
        None => basis_constant_with(&seq_z.with_truncation(n), n, &EstimateOptions::default())?.upper,
    };
    Ok(SeparationReport {
        j: j + 1,
        direct,
        floor: inf_z / (kz * sup_x),
        basis_constant_z: kz,
        inf_z,
        sup_x,
    })
}
