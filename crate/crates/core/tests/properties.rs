use chebwidom::asymptotics::{interval_green, random_set};
use chebwidom::bands::build_frame;
use chebwidom::chebyshev::{chebyshev, chebyshev_with, ChebyshevOptions, RootForm};
use chebwidom::jacobi::{transfer_matrix, JacobiParams};
use chebwidom::{validate_set, EquilibriumData, IntervalSet};
use num_complex::Complex64;
use proptest::prelude::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

fn sets() -> impl Strategy<Value = IntervalSet> {
    any::<u64>().prop_map(|s| random_set(&mut ChaCha8Rng::seed_from_u64(s)))
}

/// Symmetric sets built by mirroring 1 or 2 bands from `(0, 2]`.
fn symmetric_sets() -> impl Strategy<Value = IntervalSet> {
    (0.05f64..0.6, 0.1f64..0.6, proptest::option::of((0.1f64..0.4, 0.1f64..0.4))).prop_map(|(g, w, more)| {
        let mut bands = vec![(g, g + w)];
        if let Some((g2, w2)) = more {
            let lo = g + w + g2;
            bands.push((lo, lo + w2));
        }
        let mut all: Vec<(f64, f64)> = bands.iter().map(|&(a, b)| (-b, -a)).collect();
        all.extend(bands);
        IntervalSet::new(&all).unwrap()
    })
}

fn sup_on(set: &IntervalSet, roots: &RootForm) -> f64 {
    let mut best = f64::NEG_INFINITY;
    for b in set.bands() {
        for i in 0..=4000 {
            let x = b.at_angle(std::f64::consts::PI * i as f64 / 4000.0);
            best = best.max(roots.log_abs(x).0);
        }
    }
    best
}

fn off_set_point(set: &IntervalSet, rng: &mut ChaCha8Rng) -> Complex64 {
    let h = set.hull();
    Complex64::new(rng.random_range(h.lo - 1.0..h.hi + 1.0), rng.random_range(0.05..1.5) * rng.random_range(-1.0f64..1.0).signum())
}

proptest! {
    #![proptest_config(ProptestConfig { cases: 24, ..ProptestConfig::default() })]

    #[test]
    fn normalisation_is_idempotent_and_partitions_the_hull(set in sets()) {
        let raw: Vec<(f64, f64)> = set.bands().iter().map(|b| (b.lo, b.hi)).collect();
        prop_assert_eq!(validate_set(&raw).unwrap(), set.clone());
        let gaps: f64 = set.gaps().iter().map(|g| g.len()).sum();
        prop_assert!((set.total_length() + gaps - set.hull().len()).abs() < 1e-14);
        for (b, g) in set.bands().iter().zip(set.gaps()) {
            prop_assert_eq!(b.hi, g.left);
        }
    }

    #[test]
    fn scaling_covariance(set in sets(), n in 1usize..10, scale in 0.3f64..3.0, shift in -2.0f64..2.0) {
        let t = chebyshev(&set, n, 1e-12).unwrap();
        let moved = chebyshev(&set.affine(scale, shift), n, 1e-12).unwrap();
        let expected = t.log_norm + n as f64 * scale.ln();
        prop_assert!((moved.log_norm - expected).exp_m1().abs() < 1e-10);
        for (a, b) in t.zeros().iter().zip(moved.zeros()) {
            prop_assert!((scale * a + shift - b).abs() < 1e-9 * scale.max(1.0));
        }
    }

    #[test]
    fn symmetric_sets_give_parity(set in symmetric_sets(), n in 1usize..12) {
        let t = chebyshev(&set, n, 1e-12).unwrap();
        let z = t.zeros();
        for k in 0..n {
            prop_assert!((z[k] + z[n - 1 - k]).abs() < 1e-10);
        }
    }

    #[test]
    fn no_monic_polynomial_does_better(set in sets(), n in 1usize..10, seed in any::<u64>()) {
        let t = chebyshev(&set, n, 1e-12).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let h = set.hull();
        let zeros: Vec<f64> = t.zeros().iter().map(|z| z + 0.02 * h.len() * rng.random_range(-1.0..1.0)).collect();
        let q = RootForm::new(zeros);
        prop_assert!(sup_on(&set, &q) >= t.log_norm - 1e-9);
    }

    #[test]
    fn schiefermayr_lower_bound(set in sets(), n in 1usize..16) {
        let eq = EquilibriumData::compute(&set).unwrap();
        let t = chebyshev_with(&set, n, &ChebyshevOptions::default(), Some(&eq)).unwrap();
        prop_assert!(t.widom_factor(eq.capacity) >= 2.0 - 1e-8);
    }

    #[test]
    fn zeros_interlace_with_alternation(set in sets(), n in 2usize..16) {
        let t = chebyshev(&set, n, 1e-12).unwrap();
        prop_assert_eq!(t.alternation.len(), n + 1);
        for (k, &z) in t.zeros().iter().enumerate() {
            prop_assert!(t.alternation[k] < z && z < t.alternation[k + 1]);
        }
        for w in t.zeros().windows(2) {
            prop_assert!(w[0] < w[1]);
        }
    }

    #[test]
    fn transfer_matrix_is_unimodular(p in 1usize..5, seed in any::<u64>(), re in -3.0f64..3.0, im in -1.0f64..1.0) {
        let params = JacobiParams::random(&mut ChaCha8Rng::seed_from_u64(seed), p);
        let det = transfer_matrix(&params, Complex64::new(re, im)).determinant();
        prop_assert!((det - 1.0).norm() < 1e-10);
    }

    #[test]
    fn gap_integrals_vanish_at_double_order(set in sets()) {
        let eq = EquilibriumData::compute(&set).unwrap();
        for v in eq.gap_integrals(2 * eq.quad_order) {
            prop_assert!(v.abs() <= 1e-10, "{}", v);
        }
    }

    #[test]
    fn equilibrium_measure_is_a_probability(set in sets()) {
        let eq = EquilibriumData::compute(&set).unwrap();
        prop_assert!((eq.band_measures.iter().sum::<f64>() - 1.0).abs() < 1e-12);
        prop_assert!(eq.band_measures.iter().all(|&m| m > 0.0));
    }

    #[test]
    fn green_vanishes_on_the_set_and_is_positive_off_it(set in sets(), seed in any::<u64>()) {
        let eq = EquilibriumData::compute(&set).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        for b in set.bands() {
            prop_assert!(eq.green_real(b.at_angle(rng.random_range(0.0..std::f64::consts::PI))).abs() < 1e-12);
        }
        for g in set.gaps() {
            prop_assert!(eq.green_real(g.as_band().at_angle(rng.random_range(0.1..3.0))) > 0.0);
        }
        let z = off_set_point(&set, &mut rng);
        prop_assert!(eq.green(z).g > 0.0);
    }

    #[test]
    fn green_is_conjugation_symmetric(set in sets(), seed in any::<u64>()) {
        let eq = EquilibriumData::compute(&set).unwrap();
        let z = off_set_point(&set, &mut ChaCha8Rng::seed_from_u64(seed));
        prop_assert!((eq.green(z).g - eq.green(z.conj()).g).abs() < 1e-12);
    }

    #[test]
    fn capacity_grows_with_the_set(set in sets(), grow in 0.01f64..0.3) {
        let mut raw: Vec<(f64, f64)> = set.bands().iter().map(|b| (b.lo, b.hi)).collect();
        raw[0].0 -= grow;
        let bigger = IntervalSet::new(&raw).unwrap();
        let c0 = EquilibriumData::compute(&set).unwrap().capacity;
        let c1 = EquilibriumData::compute(&bigger).unwrap().capacity;
        prop_assert!(c1 > c0);
    }

    #[test]
    fn discriminant_identity_off_the_spectrum(set in sets(), n in 1usize..16, seed in any::<u64>()) {
        let f = build_frame(&chebyshev(&set, n, 1e-12).unwrap()).unwrap();
        let z = off_set_point(&set, &mut ChaCha8Rng::seed_from_u64(seed));
        let (small, big) = f.bn_powers(z).unwrap();
        let d = f.delta_complex(z);
        prop_assert!((small + big - d).norm() <= 1e-9 * d.norm());
        prop_assert!(small.norm() < 1.0);
    }

    #[test]
    fn green_sandwich(set in sets(), n in 1usize..16, seed in any::<u64>()) {
        let eq = EquilibriumData::compute(&set).unwrap();
        let f = build_frame(&chebyshev_with(&set, n, &ChebyshevOptions::default(), Some(&eq)).unwrap()).unwrap();
        let z = off_set_point(&set, &mut ChaCha8Rng::seed_from_u64(seed));
        let gn = f.green_n(z);
        prop_assert!(interval_green(set.hull(), z) <= gn + 1e-8);
        prop_assert!(gn <= eq.green(z).g + 1e-8);
    }
}
