//! Bernstein polynomial approximation on [-r, r].

use std::f64::consts::PI;

use crate::error::{invalid, Result};

use super::testfn::TestFunction;

/// Largest supported Bernstein degree.
pub const MAX_DEGREE: usize = 1_000_000;

/// c_b = (4306 + 837√6)/5832.
pub fn bernstein_constant() -> f64 {
    (4306.0 + 837.0 * 6f64.sqrt()) / 5832.0
}

/// Uniform error bound 2 r c_b L_f n^{-1/2} of the degree-n Bernstein
/// approximation of an L_f-Lipschitz function on [-r, r].
pub fn bernstein_error_bound(lip: f64, r: f64, n: usize) -> f64 {
    2.0 * r * bernstein_constant() * lip / (n as f64).sqrt()
}

/// Polynomial Σ c_k T_k(x/r) on [-r, r].
#[derive(Clone, Debug, PartialEq)]
pub struct ChebyshevSeries {
    pub r: f64,
    pub coeffs: Vec<f64>,
}

impl ChebyshevSeries {
    pub fn degree(&self) -> usize {
        self.coeffs.len().saturating_sub(1)
    }

    /// Clenshaw evaluation.
    pub fn eval(&self, x: f64) -> f64 {
        let s = x / self.r;
        let (mut b1, mut b2) = (0.0, 0.0);
        for &c in self.coeffs.iter().skip(1).rev() {
            let b0 = 2.0 * s * b1 - b2 + c;
            b2 = b1;
            b1 = b0;
        }
        self.coeffs.first().copied().unwrap_or(0.0) + s * b1 - b2
    }

    /// Σ_k c_k m_k for Chebyshev moments m_k.
    pub fn pair(&self, moments: &[f64]) -> f64 {
        self.coeffs.iter().zip(moments).map(|(c, m)| c * m).sum()
    }

    /// Coefficients a_j of Σ a_j x^j. Only well conditioned for small degrees.
    pub fn power_coefficients(&self) -> Vec<f64> {
        let n = self.coeffs.len();
        let mut out = vec![0.0; n.max(1)];
        // T_k in powers of s = x/r
        let mut prev = vec![1.0];
        let mut cur = vec![0.0, 1.0];
        for (k, &c) in self.coeffs.iter().enumerate() {
            let t = match k {
                0 => prev.clone(),
                1 => cur.clone(),
                _ => {
                    let mut next = vec![0.0; k + 1];
                    for (j, a) in cur.iter().enumerate() {
                        next[j + 1] += 2.0 * a;
                    }
                    for (j, a) in prev.iter().enumerate() {
                        next[j] -= a;
                    }
                    prev = std::mem::replace(&mut cur, next);
                    cur.clone()
                }
            };
            for (j, a) in t.iter().enumerate() {
                out[j] += c * a;
            }
        }
        let mut scale = 1.0;
        for a in out.iter_mut() {
            *a *= scale;
            scale /= self.r;
        }
        out
    }
}

/// Degree-n Bernstein polynomial of f on [-r, r], i.e. B_n[f∘φ⁻¹]∘φ with
/// φ(x) = (x + r)/(2r), returned in the Chebyshev basis.
///
/// The polynomial is evaluated at the n+1 Chebyshev–Lobatto points with
/// binomial weights computed in log space, then interpolated exactly.
pub fn bernstein_approx(f: &TestFunction, n: usize, r: f64) -> Result<ChebyshevSeries> {
    if n == 0 {
        return invalid("Bernstein degree must be at least 1");
    }
    if n > MAX_DEGREE {
        return invalid(format!("Bernstein degree {n} exceeds {MAX_DEGREE}"));
    }
    if !(r > 0.0) {
        return invalid("interval half-width must be positive");
    }
    let nf = n as f64;
    let samples: Vec<f64> = (0..=n).map(|i| f.eval(-r + 2.0 * r * i as f64 / nf)).collect();
    let mut log_binom = vec![0.0; n + 1];
    for i in 1..=n {
        log_binom[i] = log_binom[i - 1] + ((n - i + 1) as f64).ln() - (i as f64).ln();
    }
    let values: Vec<f64> = (0..=n)
        .map(|j| {
            // node s = cos θ, t = (1 + s)/2 = cos²(θ/2)
            let half = PI * j as f64 / (2.0 * nf);
            let (st, ct) = half.sin_cos();
            let (t, u) = (ct * ct, st * st);
            if j == 0 {
                return samples[n];
            }
            if j == n {
                return samples[0];
            }
            let (lt, lu) = (t.ln(), u.ln());
            let mut acc = 0.0;
            for i in 0..=n {
                let lw = log_binom[i] + i as f64 * lt + (n - i) as f64 * lu;
                if lw > -745.0 {
                    acc += samples[i] * lw.exp();
                }
            }
            acc
        })
        .collect();
    Ok(ChebyshevSeries { r, coeffs: chebyshev_interpolate(&values) })
}

/// Chebyshev coefficients of the degree-n interpolant through values at
/// cos(πj/n), j = 0..=n (a type-I discrete cosine transform).
pub fn chebyshev_interpolate(values: &[f64]) -> Vec<f64> {
    let n = values.len() - 1;
    if n == 0 {
        return vec![values[0]];
    }
    let table: Vec<f64> = (0..2 * n).map(|m| (PI * m as f64 / n as f64).cos()).collect();
    (0..=n)
        .map(|k| {
            let mut acc = 0.5 * (values[0] + if k % 2 == 0 { values[n] } else { -values[n] });
            for (j, v) in values.iter().enumerate().take(n).skip(1) {
                acc += v * table[(j * k) % (2 * n)];
            }
            let c = 2.0 * acc / n as f64;
            if k == 0 || k == n {
                0.5 * c
            } else {
                c
            }
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn bernstein_direct(f: &TestFunction, n: usize, r: f64, x: f64) -> f64 {
        let t = (x + r) / (2.0 * r);
        let mut acc = 0.0;
        let mut binom = 1.0f64;
        for i in 0..=n {
            if i > 0 {
                binom *= (n - i + 1) as f64 / i as f64;
            }
            acc += f.eval(-r + 2.0 * r * i as f64 / n as f64) * binom * t.powi(i as i32) * (1.0 - t).powi((n - i) as i32);
        }
        acc
    }

    #[test]
    fn constant_matches_closed_form() {
        assert!((bernstein_constant() - 1.08989).abs() < 5e-6);
        assert!((bernstein_error_bound(1.0, 3.0, 4) - 3.0 * bernstein_constant()).abs() < 1e-15);
        assert_eq!(bernstein_error_bound(0.0, 3.0, 4), 0.0);
    }

    #[test]
    fn reproduces_affine_functions() {
        let f = TestFunction::polynomial(vec![0.3, -1.7], 2.0);
        let p = bernstein_approx(&f, 37, 2.0).unwrap();
        for i in 0..=40 {
            let x = -2.0 + 0.1 * i as f64;
            assert!((p.eval(x) - f.eval(x)).abs() < 1e-12);
        }
        let one = TestFunction::polynomial(vec![1.0], 2.0);
        let q = bernstein_approx(&one, 400, 2.0).unwrap();
        assert!((q.coeffs[0] - 1.0).abs() < 1e-13);
        assert!(q.coeffs[1..].iter().all(|c| c.abs() < 1e-13));
    }

    #[test]
    fn matches_direct_sum_at_low_degree() {
        let f = TestFunction::abs_tent(0.3, 1.5);
        let p = bernstein_approx(&f, 12, 1.5).unwrap();
        for i in 0..=30 {
            let x = -1.5 + 0.1 * i as f64;
            assert!((p.eval(x) - bernstein_direct(&f, 12, 1.5, x)).abs() < 1e-13);
        }
    }

    #[test]
    fn abs_within_error_bound() {
        let f = TestFunction::abs_tent(0.0, 1.0);
        let p = bernstein_approx(&f, 100, 1.0).unwrap();
        let bound = bernstein_error_bound(1.0, 1.0, 100);
        let worst = (0..=200).map(|j| (PI * j as f64 / 200.0).cos()).map(|x| (p.eval(x) - f.eval(x)).abs()).fold(0.0, f64::max);
        assert!(worst <= bound, "{worst} > {bound}");
        // the error at the kink is of order n^{-1/2}
        assert!(worst > 0.05);
    }

    #[test]
    fn power_basis_of_quadratic() {
        let f = TestFunction::polynomial(vec![0.0, 0.0, 1.0], 1.0);
        let p = bernstein_approx(&f, 2, 1.0).unwrap();
        // B_2[x²] = x² + (1 - x²)/2 on [-1, 1]
        let a = p.power_coefficients();
        assert!((a[0] - 0.5).abs() < 1e-14 && a[1].abs() < 1e-14 && (a[2] - 0.5).abs() < 1e-14);
    }

    #[test]
    fn degree_limits() {
        let f = TestFunction::abs_tent(0.0, 1.0);
        assert!(bernstein_approx(&f, 0, 1.0).is_err());
        assert!(bernstein_approx(&f, MAX_DEGREE + 1, 1.0).is_err());
    }
}
