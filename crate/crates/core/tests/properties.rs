use std::collections::BTreeMap;

use doslab::bounds::{constant, gamma, lloyd_constant};
use doslab::dos::{dos_functionals, dos_histogram, ids, TestFunction};
use doslab::lyapunov::transfer_lyapunov_1d;
use doslab::measures::{dw, ProbabilityMeasure};
use doslab::{ModelSpec, Region};
use num_complex::Complex64;
use proptest::prelude::*;

fn atomic() -> impl Strategy<Value = ProbabilityMeasure> {
    prop::collection::vec((-2.0f64..2.0, 0.05f64..1.0), 1..6).prop_map(|atoms| {
        let (xs, mut ws): (Vec<f64>, Vec<f64>) = atoms.into_iter().unzip();
        let total: f64 = ws.iter().sum();
        ws.iter_mut().for_each(|w| *w /= total);
        ProbabilityMeasure::make_atomic(&xs, &ws, 2.0).unwrap()
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn dw_is_a_metric(a in atomic(), b in atomic(), c in atomic()) {
        let ab = dw(&a, &b);
        prop_assert!(dw(&a, &a).abs() < 1e-12);
        prop_assert!((ab - dw(&b, &a)).abs() < 1e-10);
        prop_assert!(ab >= -1e-12);
        prop_assert!(ab <= dw(&a, &c) + dw(&c, &b) + 1e-10);
        // |f| ≤ 1 for admissible f, so no two probability measures are farther than 2
        prop_assert!(ab <= 2.0 + 1e-12);
    }

    #[test]
    fn dw_between_point_masses(x in -2.0f64..2.0, y in -2.0f64..2.0) {
        let t = (x - y).abs();
        let got = dw(&ProbabilityMeasure::delta(x), &ProbabilityMeasure::delta(y));
        prop_assert!((got - 2.0 * t / (2.0 + t)).abs() < 1e-9);
    }

    #[test]
    fn dw_is_translation_invariant(a in atomic(), b in atomic(), s in -1.0f64..1.0) {
        prop_assert!((dw(&a, &b) - dw(&a.shift(s), &b.shift(s))).abs() < 1e-9);
        prop_assert!((dw(&a, &b) - dw(&a.reflect(), &b.reflect())).abs() < 1e-9);
    }

    #[test]
    fn constants_are_positive_and_monotone(d in 1usize..5, n in 1usize..64, c in 0.01f64..8.0, dc in 0.0f64..4.0) {
        let none = BTreeMap::new();
        prop_assert!(gamma(d, n, c) > 0.0);
        prop_assert!(gamma(d, n, c) <= gamma(d, n, c + dc));
        prop_assert!(gamma(d, n, c) <= gamma(d, n + 1, c));
        prop_assert!(constant("lambda0", d + 1, n, c, &none).unwrap() < constant("lambda0", d, n, c, &none).unwrap());
        prop_assert!(constant("alpha0_eta_threshold", d, n, c, &none).unwrap() > 0.0);
        if d >= 3 {
            prop_assert!(lloyd_constant(d + 1).unwrap() < lloyd_constant(d).unwrap());
        }
        for (name, v) in doslab::bounds::constants(d, n, c, &none).unwrap() {
            prop_assert!(v > 0.0, "{name} = {v}");
        }
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(12))]

    #[test]
    fn histogram_counts_match_eigenvalues(seed in 0u64..1000, side in 8usize..40, lambda in 0.0f64..3.0) {
        let m = ModelSpec::cube(1, 1, lambda, ProbabilityMeasure::bernoulli(1.0, 0.3).unwrap()).unwrap();
        let est = dos_histogram(&m, side, 1, 16, seed).unwrap();
        let eig = m.sample_box(Region::Periodic { side }, seed, 0).unwrap().eigenvalues().unwrap();
        for &e in &est.edges[1..est.edges.len() - 1] {
            let below = eig.iter().filter(|&&x| x < e).count();
            // an eigenvalue within rounding of the edge may fall on either side
            let near = eig.iter().filter(|&&x| (x - e).abs() < 1e-9).count();
            let got = (ids(&est, e).unwrap().0 * side as f64).round() as usize;
            prop_assert!(got >= below && got <= below + near, "E = {}: {} vs {}", e, got, below);
        }
    }

    #[test]
    fn functionals_are_linear(a in -3.0f64..3.0, b in -3.0f64..3.0, t in 0.5f64..3.0, x0 in -2.0f64..2.0, seed in 0u64..100) {
        let m = ModelSpec::cube(1, 1, 1.0, ProbabilityMeasure::bernoulli(1.0, 0.5).unwrap()).unwrap();
        let r = m.spectral_bound();
        let f = TestFunction::abs_tent(x0, r);
        let g = TestFunction::sin(t, r);
        let h = TestFunction::combination(vec![(a, f.clone()), (b, g.clone())]).unwrap();
        let est = dos_functionals(&m, &[f, g, h], 60, 6, seed).unwrap();
        prop_assert!((est[2].value - (a * est[0].value + b * est[1].value)).abs() < 1e-10);
    }

    #[test]
    fn lyapunov_reflection_symmetry(re in -2.5f64..2.5, im in 0.5f64..2.0, p in 0.1f64..0.9, seed in 0u64..100) {
        // ω → -ω together with E → -E conjugates the transfer matrices by diag(1, -1)
        let nu = ProbabilityMeasure::bernoulli(1.0, p).unwrap();
        let a = transfer_lyapunov_1d(&nu, Complex64::new(re, im), 20_000, seed).unwrap();
        let b = transfer_lyapunov_1d(&nu.reflect(), Complex64::new(-re, im), 20_000, seed).unwrap();
        prop_assert!((a.value - b.value).abs() <= 4.0 * (a.error + b.error) + 1e-9, "{} vs {}", a.value, b.value);
    }
}
