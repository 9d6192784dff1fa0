use heisenberg_xray::inversion::{reconstruct, Measurement, ModeBounds};
use heisenberg_xray::xray::{apply_partial_isometry, apply_singular_values};
use heisenberg_xray::{
    adjoint_spectral, forward_spectral, normal_spectral, Complex64, ModeIndex, PlanarAtom, RationalMomentum,
    SignalDecomposition,
};
use proptest::prelude::*;

fn arb_momentum() -> impl Strategy<Value = RationalMomentum> {
    (1u64..5, 1u64..5).prop_map(|(a, b)| RationalMomentum::new(a, b).unwrap())
}

fn arb_signal(n_max: i64, j_max: u64, k_max: u64) -> impl Strategy<Value = SignalDecomposition> {
    let mode = (
        1..=n_max,
        any::<bool>(),
        0..=j_max,
        0..=k_max,
        -1.0..1.0f64,
        -1.0..1.0f64,
    );
    prop::collection::vec(mode, 1..10).prop_map(|entries| {
        let mut x = SignalDecomposition::new();
        for (n, neg, j, k, re, im) in entries {
            let n = if neg { -n } else { n };
            x.add_mode(ModeIndex::new(n, j, k).unwrap(), Complex64::new(re, im));
        }
        x
    })
}

proptest! {
    #[test]
    fn adjoint_identity_in_coefficients(
        x in arb_signal(6, 8, 3),
        y in arb_signal(6, 16, 3),
        r in arb_momentum(),
    ) {
        let lhs = forward_spectral(&x, r).mode_inner(&y);
        let rhs = x.mode_inner(&adjoint_spectral(&y, r));
        prop_assert!((lhs - rhs).norm() <= 1e-12 * (1.0 + lhs.norm()));
    }

    #[test]
    fn forward_factors_through_svd(x in arb_signal(6, 8, 3), r in arb_momentum()) {
        let direct = forward_spectral(&x, r);
        let factored = apply_partial_isometry(&apply_singular_values(&x, r), r);
        prop_assert!(direct.max_abs_diff(&factored) <= 1e-12 * (1.0 + x.mode_norm()));
    }

    #[test]
    fn normal_operator_is_positive(x in arb_signal(6, 8, 3), r in arb_momentum()) {
        let q = x.mode_inner(&normal_spectral(&x, r));
        prop_assert!(q.re >= 0.0);
        prop_assert!(q.im.abs() <= 1e-12 * (1.0 + q.re));
        let image = forward_spectral(&x, r).mode_norm();
        prop_assert!((q.re - image * image).abs() <= 1e-10 * (1.0 + q.re));
    }

    #[test]
    fn forward_is_linear(x in arb_signal(4, 6, 2), y in arb_signal(4, 6, 2), r in arb_momentum(), a in -2.0..2.0f64) {
        let mut sum = x.clone();
        for (&m, &v) in y.modes() {
            sum.add_mode(m, v * a);
        }
        let lhs = forward_spectral(&sum, r);
        let mut rhs = forward_spectral(&x, r);
        for (&m, &v) in forward_spectral(&y, r).modes() {
            rhs.add_mode(m, v * a);
        }
        prop_assert!(lhs.max_abs_diff(&rhs) <= 1e-12 * (1.0 + sum.mode_norm()));
    }

    #[test]
    fn two_radius_inversion_recovers_resolved_modes(
        x in arb_signal(3, 4, 2),
        xi in (-3.0..3.0f64, -3.0..3.0f64),
    ) {
        let mut x = x;
        x.add_planar(PlanarAtom::new([xi.0, xi.1], Complex64::new(1.0, -0.5)));
        let bounds = ModeBounds { n_max: 3, j_max: 4, k_max: 2 };
        let data: Vec<Measurement> = [RationalMomentum::ONE, RationalMomentum::new(1, 2).unwrap()]
            .into_iter()
            .map(|r| Measurement { signal: forward_spectral(&x, r), r })
            .collect();
        let rec = reconstruct(&data, bounds, 0.0).unwrap();
        prop_assert!(rec.unresolved.is_empty());
        prop_assert!(rec.signal.max_abs_diff(&x) <= 1e-9);
    }
}
