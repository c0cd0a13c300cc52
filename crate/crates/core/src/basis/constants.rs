use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::optim::linalg::Matrix;
use crate::spaces::SpaceOracle;

use super::{operator_norm, BasicSequenceSpec, ConstantEstimate, EstimateOptions, RatioProblem, Target};

fn matrix_at(seq: &BasicSequenceSpec, n: usize) -> Result<Matrix> {
    Ok(seq.resolve(n)?.matrix())
}

/// `max_{n <= N} ||P_n||` measured in the ambient norm of `seq`.
pub fn basis_constant(seq: &BasicSequenceSpec, n: usize) -> Result<ConstantEstimate> {
    basis_constant_with(seq, n, &EstimateOptions::default())
}

pub fn basis_constant_with(seq: &BasicSequenceSpec, n: usize, opts: &EstimateOptions) -> Result<ConstantEstimate> {
    if n == 0 {
        return Err(Error::InvalidParameter("truncation must be >= 1".into()));
    }
    let m = matrix_at(seq, n)?;
    let targets = (1..=n)
        .map(|k| {
            let mut g = m.clone();
            for i in 0..g.rows {
                g.row_mut(i)[k..].iter_mut().for_each(|v| *v = 0.0);
            }
            Target {
                space: &seq.ambient,
                map: g,
            }
        })
        .collect();
    operator_norm(
        &RatioProblem {
            from_space: &seq.ambient,
            from_map: m,
            targets,
            sum_zero: false,
        },
        opts,
    )
}

/// Norm of the coefficient identity from `span(x_n)` to `span(y_n)`:
/// the least `L` with `||sum a_n y_n|| <= L ||sum a_n x_n||`.
pub fn domination_constant(from: &BasicSequenceSpec, to: &BasicSequenceSpec, n: usize) -> Result<ConstantEstimate> {
    domination_constant_with(from, to, n, &EstimateOptions::default())
}

pub fn domination_constant_with(
    from: &BasicSequenceSpec,
    to: &BasicSequenceSpec,
    n: usize,
    opts: &EstimateOptions,
) -> Result<ConstantEstimate> {
    operator_norm(
        &RatioProblem {
            from_space: &from.ambient,
            from_map: matrix_at(from, n)?,
            targets: vec![Target {
                space: &to.ambient,
                map: matrix_at(to, n)?,
            }],
            sum_zero: false,
        },
        opts,
    )
}

/// Both domination constants between two sequences.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Equivalence {
    /// `x -> y`.
    pub forward: ConstantEstimate,
    /// `y -> x`.
    pub backward: ConstantEstimate,
}

impl Equivalence {
    /// The equivalence constant `L = max(forward, backward)` (upper bounds).
    pub fn constant(&self) -> f64 {
        self.forward.upper.max(self.backward.upper)
    }

    pub fn certified(&self) -> bool {
        self.forward.certified && self.backward.certified
    }
}

pub fn equivalence_constants(x: &BasicSequenceSpec, y: &BasicSequenceSpec, n: usize) -> Result<Equivalence> {
    equivalence_constants_with(x, y, n, &EstimateOptions::default())
}

pub fn equivalence_constants_with(
    x: &BasicSequenceSpec,
    y: &BasicSequenceSpec,
    n: usize,
    opts: &EstimateOptions,
) -> Result<Equivalence> {
    Ok(Equivalence {
        forward: domination_constant_with(x, y, n, opts)?,
        backward: domination_constant_with(y, x, n, opts)?,
    })
}

/// Best `L` with `L |sum a_n| <= ||sum a_n x_n||`, i.e. the reciprocal of
/// `max { |sum a_n| : ||sum a_n x_n|| <= 1 }`.
///
/// The witness attains the upper bound of `L`. When the maximum is
/// unbounded or zero the estimate is `0` and carries the flag `NotWideS`.
pub fn wide_s_constant(seq: &BasicSequenceSpec, n: usize) -> Result<ConstantEstimate> {
    wide_s_constant_with(seq, n, &EstimateOptions::default())
}

pub fn wide_s_constant_with(seq: &BasicSequenceSpec, n: usize, opts: &EstimateOptions) -> Result<ConstantEstimate> {
    if n == 0 {
        return Err(Error::InvalidParameter("truncation must be >= 1".into()));
    }
    let abs = SpaceOracle::C0Sup;
    let s = operator_norm(
        &RatioProblem {
            from_space: &seq.ambient,
            from_map: matrix_at(seq, n)?,
            targets: vec![Target {
                space: &abs,
                map: Matrix::from_rows(&[vec![1.0; n]]),
            }],
            sum_zero: false,
        },
        opts,
    )?;
    let inv = |x: f64| if x > 0.0 { 1.0 / x } else { f64::INFINITY };
    let mut e = ConstantEstimate {
        lower: if s.upper.is_finite() { inv(s.upper) } else { 0.0 },
        upper: inv(s.lower),
        upper_source: format!("reciprocal of sampled or exact |sum a| ({})", s.upper_source),
        ..s
    };
    if !s_is_positive_finite(&e) {
        e.lower = 0.0;
        e.flag = Some("NotWideS".into());
    }
    Ok(e)
}

fn s_is_positive_finite(e: &ConstantEstimate) -> bool {
    e.lower > 0.0 && e.upper.is_finite()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::basis::{Method, Preset};

    #[test]
    fn basis_constants() {
        let e = basis_constant(&BasicSequenceSpec::canonical(SpaceOracle::ell1(), 8), 8).unwrap();
        assert!(e.certified && (e.lower - 1.0).abs() < 1e-12);
        let e = basis_constant(&BasicSequenceSpec::canonical(SpaceOracle::C0Sup, 8), 8).unwrap();
        assert!(e.certified && (e.lower - 1.0).abs() < 1e-12);
        let e = basis_constant(&BasicSequenceSpec::summing(4), 4).unwrap();
        assert_eq!(e.method, Method::ExactExtremePoints);
        assert!((e.lower - 2.0).abs() < 1e-12);
        assert!((e.upper - 2.0).abs() < 1e-12);
    }

    #[test]
    fn domination_examples() {
        let l1 = BasicSequenceSpec::canonical(SpaceOracle::ell1(), 6);
        let s = BasicSequenceSpec::summing(6);
        assert!((domination_constant(&l1, &l1, 6).unwrap().lower - 1.0).abs() < 1e-12);
        assert!((domination_constant(&l1, &s, 6).unwrap().lower - 1.0).abs() < 1e-12);
        let c0 = BasicSequenceSpec::canonical(SpaceOracle::C0Sup, 2);
        let e = domination_constant(&BasicSequenceSpec::summing(2), &c0, 2).unwrap();
        assert!((e.lower - 2.0).abs() < 1e-12);
    }

    #[test]
    fn equivalence_under_scaling() {
        let x = BasicSequenceSpec::canonical(SpaceOracle::ell1(), 5);
        let y = BasicSequenceSpec::new(SpaceOracle::ell1(), Preset::scaled(vec![0.5], Preset::Canonical), 5).unwrap();
        let e = equivalence_constants(&x, &y, 5).unwrap();
        assert!((e.forward.lower - 0.5).abs() < 1e-12);
        assert!((e.backward.lower - 2.0).abs() < 1e-12);
        assert!(e.certified());
        assert!((e.constant() - 2.0).abs() < 1e-12);
    }

    #[test]
    fn wide_s_examples() {
        let e = wide_s_constant(&BasicSequenceSpec::summing(8), 8).unwrap();
        assert!((e.lower - 1.0).abs() < 1e-12, "{e:?}");
        let e = wide_s_constant(&BasicSequenceSpec::canonical(SpaceOracle::ell1(), 8), 8).unwrap();
        assert!((e.lower - 1.0).abs() < 1e-12);
        let e = wide_s_constant(&BasicSequenceSpec::canonical(SpaceOracle::C0Sup, 10), 10).unwrap();
        assert!((e.lower - 0.1).abs() < 1e-12);
        assert!(e.flag.is_none());
    }
}
