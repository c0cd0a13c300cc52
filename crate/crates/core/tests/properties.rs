use proptest::prelude::*;

use wcfpp::basis::{basis_constant, project, BasicSequenceSpec, Side, SimplexPoint};
use wcfpp::constructions::{abel_identity_check, alpha_generate, map_build, AlphaFamily, MapKind, MapParams};
use wcfpp::harness::{displacement, map_apply};
use wcfpp::optim::{lp_solve, LinearProgram, Sense};
use wcfpp::spaces::SpaceOracle;
use wcfpp::CoeffVector;

fn spaces() -> Vec<SpaceOracle> {
    vec![
        SpaceOracle::C0Sup,
        SpaceOracle::ell1(),
        SpaceOracle::EllP { p: 2.5 },
        SpaceOracle::SummingC0,
        SpaceOracle::LinEll1,
        SpaceOracle::James { p: 2.0 },
    ]
}

fn vec_pair(max: usize) -> impl Strategy<Value = (Vec<f64>, Vec<f64>)> {
    (1..=max).prop_flat_map(|n| (prop::collection::vec(-5.0..5.0f64, n), prop::collection::vec(-5.0..5.0f64, n)))
}

fn simplex(max: usize) -> impl Strategy<Value = Vec<f64>> {
    prop::collection::vec(0.0..1.0f64, 1..=max).prop_filter_map("zero mass", |v| {
        let s: f64 = v.iter().sum();
        (s > 1e-6).then(|| v.iter().map(|x| x / s).collect())
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(128))]

    #[test]
    fn norms_are_subadditive_and_homogeneous((x, y) in vec_pair(10), c in -4.0..4.0f64) {
        for s in spaces() {
            let sum: Vec<f64> = x.iter().zip(&y).map(|(a, b)| a + b).collect();
            let (nx, ny) = (s.norm(&x).unwrap(), s.norm(&y).unwrap());
            prop_assert!(s.norm(&sum).unwrap() <= nx + ny + 1e-9);
            let cx: Vec<f64> = x.iter().map(|a| c * a).collect();
            prop_assert!((s.norm(&cx).unwrap() - c.abs() * nx).abs() <= 1e-9 * (1.0 + nx));
        }
    }

    #[test]
    fn projections_bounded_by_basis_constant(a in prop::collection::vec(-3.0..3.0f64, 2..7), k in 1usize..6) {
        let n = a.len();
        let x = BasicSequenceSpec::summing(n);
        let kb = basis_constant(&x, n).unwrap().upper;
        let v = CoeffVector::new(a.clone()).unwrap();
        let p = project(&x, &v, k.min(n), Side::P).unwrap();
        prop_assert!(x.norm(p.as_slice()).unwrap() <= kb * x.norm(&a).unwrap() + 1e-9);
    }

    #[test]
    fn maps_keep_the_simplex(t in simplex(8)) {
        let n = t.len();
        let alpha = alpha_generate(2.0, 1.0, 1.0, n, AlphaFamily::Geometric).unwrap();
        for m in [
            map_build(MapKind::FMain, &MapParams::new(n).with_alpha(alpha)).unwrap(),
            map_build(MapKind::F0Shift, &MapParams::new(n)).unwrap(),
            map_build(MapKind::F1Bilateral, &MapParams::new(n)).unwrap(),
        ] {
            let p = SimplexPoint::new(CoeffVector::new(t.clone()).unwrap()).unwrap();
            let img = map_apply(&m, &p).unwrap();
            let mass: f64 = img.coeffs().as_slice().iter().sum();
            prop_assert!((mass - 1.0).abs() <= 1e-12);
            prop_assert!(img.coeffs().as_slice().iter().all(|&v| v >= 0.0));
        }
    }

    #[test]
    fn shift_displacement_at_least_two_over_n(t in simplex(10)) {
        let n = t.len();
        let f0 = map_build(MapKind::F0Shift, &MapParams::new(n)).unwrap();
        prop_assert!(displacement(&f0, &SpaceOracle::ell1(), &t).unwrap() >= 2.0 / n as f64 - 1e-12);
    }

    #[test]
    fn abel_residual_is_tiny(a in prop::collection::vec(-1.0..1.0f64, 1..40), w0 in prop::collection::vec(0.01..1.0f64, 40)) {
        let mut w: Vec<f64> = w0[..a.len()].to_vec();
        w.sort_by(f64::total_cmp);
        let r = abel_identity_check(&CoeffVector::new(a).unwrap(), &CoeffVector::new(w).unwrap()).unwrap();
        prop_assert!(r <= 1e-12);
    }

    #[test]
    fn box_lp_has_closed_form(c in prop::collection::vec(-2.0..2.0f64, 1..6), lo in -3.0..0.0f64, w in 0.1..3.0f64) {
        let mut lp = LinearProgram::new(Sense::Max, c.clone());
        for i in 0..c.len() {
            lp.bound(i, lo, lo + w);
        }
        let want: f64 = c.iter().map(|&ci| (ci * lo).max(ci * (lo + w))).sum();
        let got = lp_solve(&lp).unwrap().best_value;
        prop_assert!((got - want).abs() <= 1e-9);
    }
}
