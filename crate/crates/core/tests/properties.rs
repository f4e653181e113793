use core::f64::consts::PI;

use proptest::prelude::*;
use qwalk_core::green::q_of_nu;
use qwalk_core::model::{band_edges, canonical_angle, r_of};
use qwalk_core::spectrum::{classify_fiber, PointSpectrum};
use qwalk_core::wavefunction::kernel_k;
use qwalk_core::{QuasiMomentum, TwoParticleParams};

fn hopping() -> impl Strategy<Value = f64> {
    0.1f64..3.0
}

fn angle() -> impl Strategy<Value = f64> {
    -PI..=PI
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn effective_hopping_is_a_fraction(l1 in hopping(), l2 in hopping(), a in -20.0f64..20.0) {
        let p = TwoParticleParams::new(l1, l2, 1.0, 1).unwrap();
        let r = r_of(a, &p);
        prop_assert!((0.0..=1.0 + 1e-15).contains(&r), "r = {r}");
        prop_assert!((r - r_of(canonical_angle(a), &p)).abs() < 1e-14);
    }

    #[test]
    fn canonical_angle_lands_in_half_open_interval(a in -1e4f64..1e4) {
        let c = canonical_angle(a);
        prop_assert!(c > -PI && c <= PI);
        prop_assert!((canonical_angle(c) - c).abs() == 0.0);
        let turns = (a - c) / (2.0 * PI);
        prop_assert!((turns - turns.round()).abs() < 1e-9);
    }

    #[test]
    fn band_is_ordered_and_inside_the_full_range(
        l1 in hopping(), l2 in hopping(), phi in prop::collection::vec(angle(), 1..4)
    ) {
        let d = phi.len();
        let p = TwoParticleParams::new(l1, l2, 1.0, d).unwrap();
        let band = band_edges(&QuasiMomentum::new(phi).unwrap(), &p).unwrap();
        let full = 4.0 * (l1 + l2) * d as f64;
        prop_assert!(band.beta1 >= 0.0);
        prop_assert!(band.beta1 <= band.beta2);
        prop_assert!(band.beta2 <= full * (1.0 + 1e-15));
        // symmetric about the centre 2Λd
        let centre = 0.5 * full;
        prop_assert!(((band.beta1 + band.beta2) - 2.0 * centre).abs() < 1e-12 * full || band.beta1 == 0.0);
    }

    #[test]
    fn q_decreases_away_from_the_band(
        l1 in hopping(), l2 in hopping(), phi in prop::collection::vec(angle(), 1..3),
        t1 in 1e-3f64..10.0, factor in 1.01f64..10.0
    ) {
        let d = phi.len();
        let p = TwoParticleParams::new(l1, l2, 1.0, d).unwrap();
        let q = QuasiMomentum::new(phi).unwrap();
        let band = band_edges(&q, &p).unwrap();
        let t2 = t1 * factor;
        let above = (q_of_nu(band.beta2 + t1, &q, &p).unwrap(), q_of_nu(band.beta2 + t2, &q, &p).unwrap());
        prop_assert!(above.0 > above.1 && above.1 > 0.0, "{above:?}");
        let below = (q_of_nu(band.beta1 - t1, &q, &p).unwrap(), q_of_nu(band.beta1 - t2, &q, &p).unwrap());
        prop_assert!(below.1 > below.0 && below.0 < 0.0 && below.1 < 0.0, "{below:?}");
    }

    #[test]
    fn eigenvalue_sits_on_the_side_of_the_interaction(
        l1 in hopping(), l2 in hopping(), a in angle(), mu in prop_oneof![-20.0f64..-0.5, 0.5f64..20.0]
    ) {
        let p = TwoParticleParams::new(l1, l2, mu, 1).unwrap();
        let q = QuasiMomentum::new(vec![a]).unwrap();
        let report = classify_fiber(&q, &p).unwrap();
        match report.point.kind {
            PointSpectrum::Exists { nu } => {
                if mu > 0.0 {
                    prop_assert!(nu > report.essential.beta2);
                } else {
                    prop_assert!(nu < report.essential.beta1);
                }
            }
            other => prop_assert!(false, "d = 1 always binds, got {other:?}"),
        }
    }

    #[test]
    fn kernel_is_normalised_and_even(
        l1 in hopping(), l2 in hopping(), a in angle(), mu in prop_oneof![-10.0f64..-0.5, 0.5f64..10.0]
    ) {
        let p = TwoParticleParams::new(l1, l2, mu, 1).unwrap();
        let q = QuasiMomentum::new(vec![a]).unwrap();
        let nu = classify_fiber(&q, &p).unwrap().point.kind.nu().unwrap();
        let k = kernel_k(&q, nu, &p, 6).unwrap();
        prop_assert!((k.values.get(&[0]).unwrap() - 1.0).abs() < 1e-8);
        for x in 1..=6i64 {
            let (plus, minus) = (k.values.get(&[x]).unwrap(), k.values.get(&[-x]).unwrap());
            prop_assert!(plus.is_finite());
            prop_assert!((plus - minus).abs() <= 1e-12 * plus.abs().max(1e-300) + 1e-15);
        }
    }
}
