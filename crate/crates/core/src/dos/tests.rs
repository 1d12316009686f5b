use super::*;
use crate::lattice::sample_disorder;
use crate::measures::{discretize_fn, ProbabilityMeasure};

fn bernoulli() -> ProbabilityMeasure {
    ProbabilityMeasure::bernoulli(1.0, 0.5).unwrap()
}

fn chain(lambda: f64, m: ProbabilityMeasure) -> ModelSpec {
    ModelSpec::cube(1, 1, lambda, m).unwrap()
}

/// T_j(H/r) e_s by the plain three-term recursion on the whole box.
fn chebyshev_full(b: &HamiltonianBox, n: usize, r: f64) -> Vec<f64> {
    let mut mu = vec![0.0; n + 1];
    for &s in b.projection_sites() {
        let mut prev = vec![0.0; b.dim()];
        let mut cur = vec![0.0; b.dim()];
        cur[s] = 1.0;
        mu[0] += 1.0;
        for j in 1..=n {
            let hv = b.apply(&cur).unwrap();
            let next: Vec<f64> = if j == 1 {
                hv.iter().map(|x| x / r).collect()
            } else {
                hv.iter().zip(&prev).map(|(x, p)| 2.0 * x / r - p).collect()
            };
            mu[j] += next[s];
            prev = std::mem::replace(&mut cur, next);
        }
    }
    mu
}

#[test]
fn doubling_matches_full_recursion() {
    let m = ModelSpec::cube(2, 2, 0.7, bernoulli()).unwrap();
    for n in [0, 1, 2, 7, 10] {
        let b = moment_box(&m, n, 5, 3).unwrap();
        let r = m.spectral_bound();
        let fast = chebyshev_traces(&b, n, r);
        // the full recursion needs a box containing every walk of length n
        let big = m.sample_box(Region::Centered { radius: n + 2 }, 5, 3).unwrap();
        let slow = chebyshev_full(&big, n, r);
        for j in 0..=n {
            assert!((fast[j] - slow[j]).abs() < 1e-12, "n = {n}, j = {j}: {} vs {}", fast[j], slow[j]);
        }
    }
}

#[test]
fn chebyshev_moments_on_strip_and_bethe() {
    let fam = crate::lattice::MatrixFamily::new(2, vec![vec![0.5, 0.2, 0.2, -0.3], vec![-1.0, 0.0, 0.0, 1.0]], vec![1.0, 1.0]).unwrap();
    let strip = ModelSpec::strip(fam, 1.0).unwrap();
    let bethe = ModelSpec::bethe(3, 0.5, bernoulli()).unwrap();
    for m in [strip, bethe] {
        let n = 8;
        let r = m.spectral_bound();
        let b = moment_box(&m, n, 1, 0).unwrap();
        let big = m.sample_box(Region::Centered { radius: n + 1 }, 1, 0).unwrap();
        let fast = chebyshev_traces(&b, n, r);
        let slow = chebyshev_full(&big, n, r);
        for j in 0..=n {
            assert!((fast[j] - slow[j]).abs() < 1e-12);
        }
    }
}

#[test]
fn low_trace_moments() {
    let est = trace_moments(&chain(1.0, bernoulli()), 6, 20, 11).unwrap();
    assert_eq!(est.moments[0], 1.0);
    // two hop-and-return walks plus ω₀²
    assert_eq!(est.moments[2], 3.0);
    assert_eq!(est.moment_stderr[2], 0.0);
    let free = trace_moments(&chain(1.0, ProbabilityMeasure::delta(0.0)), 9, 3, 1).unwrap();
    for j in (1..=9).step_by(2) {
        assert_eq!(free.moments[j], 0.0);
    }
    assert_eq!(free.moments[4], 6.0);
    let shifted = trace_moments(&ModelSpec::cube(2, 2, 0.5, ProbabilityMeasure::delta(0.8)).unwrap(), 1, 4, 2).unwrap();
    assert!((shifted.moments[1] - 0.4).abs() < 1e-15);
}

#[test]
fn functional_of_constants_and_squares() {
    let m = chain(1.0, bernoulli());
    let r = m.spectral_bound();
    let one = TestFunction::polynomial(vec![1.0], r);
    let est = dos_functional(&m, &one, 60, 10, 4).unwrap();
    assert!((est.value - 1.0).abs() < 1e-12);
    assert_eq!(est.bias_bound, 0.0);
    let free = chain(0.0, bernoulli());
    let sq = TestFunction::polynomial(vec![0.0, 0.0, 1.0], free.spectral_bound());
    // Bernstein operators do not reproduce x², so use a high degree
    let est = dos_functional(&free, &sq, 4000, 2, 4).unwrap();
    assert!((est.value - 2.0).abs() < 4.0 * 2.0 / 4000.0 + 1e-9, "{}", est.value);
    assert!(est.stderr < 1e-12);
}

#[test]
fn functional_is_linear() {
    let m = ModelSpec::cube(1, 2, 0.8, bernoulli()).unwrap();
    let r = m.spectral_bound();
    let f = TestFunction::abs_tent(0.4, r);
    let g = TestFunction::cos(1.3, r);
    let h = TestFunction::combination(vec![(2.5, f.clone()), (-0.75, g.clone())]).unwrap();
    let est = dos_functionals(&m, &[f, g, h], 120, 30, 9).unwrap();
    let combined = 2.5 * est[0].value - 0.75 * est[1].value;
    assert!((est[2].value - combined).abs() < 1e-10);
}

#[test]
fn paired_difference_vanishes_for_equal_models() {
    let m = chain(1.0, bernoulli());
    let r = m.spectral_bound();
    let fs = vec![TestFunction::abs_tent(0.0, r)];
    let d = dos_functional_differences(&m, &m, &fs, 50, 8, 1).unwrap();
    assert_eq!(d[0].value, 0.0);
    assert_eq!(d[0].stderr, 0.0);
    assert!((d[0].bias_bound - 2.0 * bernstein_error_bound(1.0, r, 50)).abs() < 1e-15);
}

#[test]
fn ring_count_matches_dense_eigenvalues() {
    let m = chain(1.0, discretize_fn(|_| 0.5, 1.0, 0.01).unwrap());
    for sample in 0..4 {
        let b = m.sample_box(Region::Periodic { side: 37 }, 3, sample).unwrap();
        let eig = b.eigenvalues().unwrap();
        for i in 0..=60 {
            let e = -3.0 + 0.1 * i as f64;
            assert_eq!(ring_count_below(b.diagonal(), e).unwrap(), eig.partition_point(|&x| x < e), "E = {e}");
        }
    }
}

#[test]
fn free_histogram_matches_arcsine_law() {
    let m = chain(0.0, bernoulli());
    // the free ring has doubly degenerate, evenly spaced levels, so bins must
    // hold many levels for the counts to resolve the density
    let est = dos_histogram(&m, 2048, 1, 32, 1).unwrap();
    let total: f64 = est.masses.iter().sum();
    assert!((total - 1.0).abs() < 1e-12);
    let l1: f64 = est.edges.windows(2).zip(&est.masses).map(|(w, m)| (m - (free_ids_1d(w[1]) - free_ids_1d(w[0]))).abs()).sum();
    assert!(l1 <= 0.02, "{l1}");
    assert!(ids(&est, -5.0).unwrap().0 == 0.0 && ids(&est, 5.0).unwrap().0 == 1.0);
    let mid = ids(&est, 0.0).unwrap().0;
    assert!((mid - 0.5).abs() < 1e-3, "{mid}");
    assert!((ids(&est, 2f64.sqrt()).unwrap().0 - 0.75).abs() < 0.01);
}

#[test]
fn constant_potential_shifts_the_spectrum() {
    let free = chain(0.0, bernoulli()).sample_box(Region::Periodic { side: 12 }, 1, 0).unwrap().eigenvalues().unwrap();
    let m = chain(0.5, ProbabilityMeasure::delta(0.6));
    let shifted = m.sample_box(Region::Periodic { side: 12 }, 1, 0).unwrap().eigenvalues().unwrap();
    for (a, b) in free.iter().zip(&shifted) {
        assert!((b - a - 0.3).abs() < 1e-12);
    }
}

#[test]
fn moment_and_histogram_paths_agree() {
    let m = chain(1.0, bernoulli());
    let r = m.spectral_bound();
    let side = 1024;
    let hist = dos_histogram(&m, side, 12, 512, 21).unwrap();
    for f in [TestFunction::abs_tent(0.5, r), TestFunction::cos(2.0, r), TestFunction::ramp_above(-0.3, 0.5, r).unwrap()] {
        let mom = dos_functional(&m, &f, 200, 400, 21).unwrap();
        let (hv, hs) = histogram_functional(&hist, &f).unwrap();
        let finite_volume = std::f64::consts::PI * r * f.lip / side as f64 + f.lip * hist.bin_width() / 2.0;
        let tol = mom.bias_bound + finite_volume + 4.0 * (mom.stderr + hs);
        assert!((mom.value - hv).abs() <= tol, "{}: {} vs {hv}, tol {tol}", f.label, mom.value);
    }
}

#[test]
fn wegner_bound_for_uniform_disorder() {
    // density 1/2 on [-1, 1], so the DOS density is at most 1/(2λ)
    let lambda = 2.0;
    let m = chain(lambda, discretize_fn(|_| 0.5, 1.0, 1.0 / 64.0).unwrap());
    let est = dos_histogram(&m, 256, 8, 64, 2).unwrap();
    let w = est.bin_width();
    for (mass, se) in est.masses.iter().zip(&est.mass_stderr) {
        assert!(mass / w <= 1.2 * 0.5 / lambda + 4.0 * se / w);
    }
}

#[test]
fn histogram_rejects_bad_input() {
    let m = chain(1.0, bernoulli());
    assert!(dos_histogram(&m, 3, 1, 16, 0).is_err());
    assert!(dos_histogram(&m, 16, 1, 4, 0).is_err());
    assert!(dos_histogram(&ModelSpec::bethe(3, 1.0, bernoulli()).unwrap(), 16, 1, 16, 0).is_err());
    let moments = trace_moments(&m, 2, 1, 0).unwrap();
    assert!(ids(&moments, 0.0).is_err());
}

#[test]
fn csv_layout() {
    let est = trace_moments(&chain(1.0, bernoulli()), 2, 2, 7).unwrap();
    let csv = est.to_csv();
    let lines: Vec<&str> = csv.lines().collect();
    assert_eq!(lines[0], "# kind,samples,seed,r");
    assert_eq!(lines[1], "# moments,2,7,3.0000000000000000");
    assert_eq!(lines[2], "moment_index,value,stderr");
    assert_eq!(lines.len(), 6);
}

#[test]
fn finite_rank_examples() {
    let m = ModelSpec::cube(1, 2, 1.0, bernoulli()).unwrap();
    let disorder = sample_disorder(&m, 4, 0, Region::Centered { radius: 12 }).unwrap();
    let x = TestFunction::polynomial(vec![0.0, 1.0], 8.0);
    let (lhs, rhs) = finite_rank_deviation(&m, &[0], 0.7, -0.2, &x, &disorder, 12).unwrap();
    assert!((lhs - 2.0 * 0.9).abs() < 1e-12);
    assert!((rhs - 2.0 * 4.0 * 0.9).abs() < 1e-12);
    let (lhs, _) = finite_rank_deviation(&m, &[3], 0.7, -0.2, &x, &disorder, 12).unwrap();
    assert!(lhs < 1e-12);
    let tent = TestFunction::abs_tent(0.3, 8.0);
    for (l, l0) in [(0.9, -0.9), (0.1, 0.2), (-1.0, 1.0)] {
        let (lhs, rhs) = finite_rank_deviation(&m, &[1], l, l0, &tent, &disorder, 12).unwrap();
        assert!(lhs <= rhs, "{lhs} > {rhs}");
    }
}
