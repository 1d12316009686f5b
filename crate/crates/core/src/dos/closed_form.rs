//! Closed-form and quadrature densities of states: free Laplacian on Z^d,
//! the Lloyd (Cauchy) model and the Kesten measure of the Bethe lattice.

use std::collections::HashMap;
use std::f64::consts::PI;
use std::path::PathBuf;
use std::sync::{Arc, Mutex, OnceLock};

use num_complex::Complex64;

use crate::error::{invalid, Result};
use crate::quad::{adaptive, adaptive_pieces, tanh_sinh};
use crate::special::j0;
use crate::util::fmt_sig;

/// Grid step used for the tabulated free density in dimension d ≥ 4.
pub const GRID_STEP: f64 = 1.0 / 256.0;

/// Environment variable naming the directory of the tabulated-density cache.
pub const CACHE_ENV: &str = "DOSLAB_CACHE_DIR";

/// Density of states of the free Laplacian on Z^d.
///
/// d = 1 is the arcsine law 1/(2π√(1 - E²/4)), returned as +∞ at E = ±2.
/// d = 2 uses the complete elliptic integral, ρ₂(E) = 1/(4π AGM(1, |E|/4)),
/// which is +∞ at E = 0. d = 3 integrates ρ₃(E) = (1/π)∫₀^π ρ₂(E - 2cos θ) dθ
/// adaptively. d ≥ 4 interpolates a table with step [`GRID_STEP`] built by
/// the same recursion.
pub fn free_dosf(d: usize, e: f64) -> f64 {
    match d {
        0 => f64::NAN,
        1 => rho1(e),
        2 => rho2(e),
        3 => rho3(e),
        _ => free_grid(d).eval(e),
    }
}

fn rho1(e: f64) -> f64 {
    let a = e.abs();
    if a > 2.0 {
        0.0
    } else if a == 2.0 {
        f64::INFINITY
    } else {
        1.0 / (2.0 * PI * (1.0 - 0.25 * e * e).sqrt())
    }
}

fn agm(mut a: f64, mut b: f64) -> f64 {
    for _ in 0..64 {
        if (a - b).abs() <= 1e-16 * a {
            break;
        }
        let m = 0.5 * (a + b);
        b = (a * b).sqrt();
        a = m;
    }
    0.5 * (a + b)
}

fn rho2(e: f64) -> f64 {
    let a = e.abs();
    if a >= 4.0 {
        0.0
    } else if a == 0.0 {
        f64::INFINITY
    } else {
        1.0 / (4.0 * PI * agm(1.0, a / 4.0))
    }
}

/// ρ₂ as the convolution (1/π²)∫ dx/√((4 - x²)(4 - (E - x)²)), integrated
/// directly.
pub fn free_dosf_2d_quadrature(e: f64) -> f64 {
    let a = e.abs();
    if a >= 4.0 {
        return 0.0;
    }
    if a == 0.0 {
        return f64::INFINITY;
    }
    // da = x - (a - 2), db = 2 - x; then 2 + x = da + a and 2 - (a - x) = db + a
    let r = tanh_sinh(|_, da, db| 1.0 / (da * db * (da + a) * (db + a)).sqrt(), a - 2.0, 2.0, 1e-13);
    r.value / (PI * PI)
}

fn rho3(e: f64) -> f64 {
    let a = e.abs();
    if a >= 6.0 {
        return 0.0;
    }
    let mut pts = vec![0.0, PI];
    // singular points of ρ₂(a - 2cos θ): the log peak at 0 and the jumps at ±4
    for y in [0.0, 4.0, -4.0] {
        let c = (a - y) / 2.0;
        if c.abs() < 1.0 {
            pts.push(c.acos());
        }
    }
    pts.sort_by(f64::total_cmp);
    pts.dedup();
    let r = adaptive_pieces(|t: f64| rho2(a - 2.0 * t.cos()), &pts, 1e-13, 1e-12);
    r.value / PI
}

/// Free density tabulated on [-2d, 2d].
#[derive(Debug)]
struct Grid {
    half_width: f64,
    values: Vec<f64>,
}

impl Grid {
    fn eval(&self, e: f64) -> f64 {
        if e.abs() >= self.half_width {
            return 0.0;
        }
        let s = (e + self.half_width) / GRID_STEP;
        let i = (s.floor() as usize).min(self.values.len() - 2);
        let w = s - i as f64;
        (1.0 - w) * self.values[i] + w * self.values[i + 1]
    }
}

fn grid_points(d: usize) -> usize {
    (4.0 * d as f64 / GRID_STEP).round() as usize + 1
}

fn free_grid(d: usize) -> Arc<Grid> {
    static CACHE: OnceLock<Mutex<HashMap<usize, Arc<Grid>>>> = OnceLock::new();
    let cache = CACHE.get_or_init(|| Mutex::new(HashMap::new()));
    if let Some(g) = cache.lock().unwrap().get(&d) {
        return g.clone();
    }
    let half_width = 2.0 * d as f64;
    let values = load_grid(d).unwrap_or_else(|| {
        let n = grid_points(d);
        let values: Vec<f64> = if d == 3 {
            (0..n).map(|i| rho3(-half_width + i as f64 * GRID_STEP)).collect()
        } else {
            let prev = free_grid(d - 1);
            (0..n)
                .map(|i| {
                    let e = -half_width + i as f64 * GRID_STEP;
                    let mut pts = vec![0.0, PI];
                    for y in [prev.half_width, -prev.half_width] {
                        let c = (e - y) / 2.0;
                        if c.abs() < 1.0 {
                            pts.push(c.acos());
                        }
                    }
                    pts.sort_by(f64::total_cmp);
                    adaptive_pieces(|t: f64| prev.eval(e - 2.0 * t.cos()), &pts, 1e-11, 1e-10).value / PI
                })
                .collect()
        };
        store_grid(d, &values);
        values
    });
    let g = Arc::new(Grid { half_width, values });
    cache.lock().unwrap().insert(d, g.clone());
    g
}

fn cache_file(d: usize) -> Option<PathBuf> {
    let dir = std::env::var_os(CACHE_ENV)?;
    Some(PathBuf::from(dir).join(format!("free_dosf_d{d}_step256.txt")))
}

fn load_grid(d: usize) -> Option<Vec<f64>> {
    let text = std::fs::read_to_string(cache_file(d)?).ok()?;
    let values: Vec<f64> = text.lines().map(|l| l.trim().parse::<f64>()).collect::<std::result::Result<_, _>>().ok()?;
    (values.len() == grid_points(d)).then_some(values)
}

fn store_grid(d: usize, values: &[f64]) {
    let Some(path) = cache_file(d) else { return };
    if let Some(dir) = path.parent() {
        let _ = std::fs::create_dir_all(dir);
    }
    let text: String = values.iter().map(|v| fmt_sig(*v) + "\n").collect();
    // a failed cache write only costs a recomputation next time
    let _ = std::fs::write(path, text);
}

/// Integrated density of states of the free Laplacian on Z, 1/2 + arcsin(E/2)/π.
pub fn free_ids_1d(e: f64) -> f64 {
    if e <= -2.0 {
        0.0
    } else if e >= 2.0 {
        1.0
    } else {
        0.5 + (0.5 * e).asin() / PI
    }
}

/// [J₀(2t)/√(2π)]^d.
pub fn free_dosf_fourier(d: usize, t: f64) -> f64 {
    (j0(2.0 * t) / (2.0 * PI).sqrt()).powi(d as i32)
}

/// The decay envelope 2^{-d} π^{-d/2} |t|^{-d/2}.
pub fn free_fourier_decay_bound(d: usize, t: f64) -> f64 {
    let df = d as f64;
    2f64.powf(-df) * PI.powf(-df / 2.0) * t.abs().powf(-df / 2.0)
}

fn cauchy(lambda: f64, y: f64) -> f64 {
    lambda / (PI * (y * y + lambda * lambda))
}

fn check_lloyd(d: usize, lambda: f64) -> Result<()> {
    if d == 0 {
        return invalid("dimension must be at least 1");
    }
    if !(lambda > 0.0) || !lambda.is_finite() {
        return invalid(format!("Cauchy width {lambda} must be positive"));
    }
    Ok(())
}

/// Density of states of the Lloyd model Δ + λω with standard Cauchy ω,
/// from the Fourier representation (1/π)∫₀^∞ J₀(2t)^d e^{-λt} cos(Et) dt.
pub fn lloyd_dosf(d: usize, lambda: f64, e: f64) -> Result<f64> {
    check_lloyd(d, lambda)?;
    let tol = 1e-12;
    // the tail beyond T is bounded by e^{-λT}/(πλ)
    let t_max = ((1.0 / (tol * lambda * PI)).ln() / lambda).max(1.0);
    let pieces = (t_max / 2.0).ceil() as usize;
    let pts: Vec<f64> = (0..=pieces).map(|i| t_max * i as f64 / pieces as f64).collect();
    let r = adaptive_pieces(
        |t: f64| j0(2.0 * t).powi(d as i32) * (-lambda * t).exp() * (e * t).cos(),
        &pts,
        tol,
        0.0,
    );
    Ok(r.value / PI)
}

/// The same density as the convolution ∫ ρ_d(x) λ/(π((E - x)² + λ²)) dx.
pub fn lloyd_dosf_convolution(d: usize, lambda: f64, e: f64) -> Result<f64> {
    check_lloyd(d, lambda)?;
    if d == 1 {
        // x = 2cos θ turns ρ₁(x) dx into dθ/π
        let mut pts = vec![0.0, PI];
        if e.abs() < 2.0 {
            pts.insert(1, (e / 2.0).acos());
        }
        let r = adaptive_pieces(|t: f64| cauchy(lambda, e - 2.0 * t.cos()), &pts, 1e-13, 1e-12);
        return Ok(r.value / PI);
    }
    let w = 2.0 * d as f64;
    let mut pts = vec![-w, w, e.clamp(-w, w)];
    match d {
        2 => pts.push(0.0),
        3 => pts.extend([-2.0, 2.0]),
        _ => {}
    }
    pts.sort_by(f64::total_cmp);
    pts.dedup();
    let r = adaptive_pieces(|x: f64| free_dosf(d, x) * cauchy(lambda, e - x), &pts, 1e-12, 1e-11);
    Ok(r.value)
}

/// Closed form in d = 1: -(1/π) Im[1/(√(z - 2)√(z + 2))] with z = E + iλ.
pub fn lloyd_dosf_1d_closed(lambda: f64, e: f64) -> Result<f64> {
    check_lloyd(1, lambda)?;
    let z = Complex64::new(e, lambda);
    let g = 1.0 / ((z - 2.0).sqrt() * (z + 2.0).sqrt());
    Ok(-g.im / PI)
}

/// Kesten density (k/2π)√(4(k-1) - E²)/(k² - E²) of the free Laplacian on
/// the Bethe lattice of coordination k.
pub fn kesten_dosf(k: usize, e: f64) -> f64 {
    let kf = k as f64;
    let edge2 = 4.0 * (kf - 1.0);
    if e * e >= edge2 {
        return 0.0;
    }
    kf / (2.0 * PI) * (edge2 - e * e).sqrt() / (kf * kf - e * e)
}

/// Spectral edge 2√(k-1) of the Kesten measure.
pub fn kesten_edge(k: usize) -> f64 {
    2.0 * ((k - 1) as f64).sqrt()
}

/// c_B: k/(4π√(k² - 4(k-1))) for k ≤ 6 and √(4(k-1))/k for k ≥ 7.
pub fn kesten_constant(k: usize) -> f64 {
    let kf = k as f64;
    if k <= 6 {
        kf / (4.0 * PI * (kf * kf - 4.0 * (kf - 1.0)).sqrt())
    } else {
        (4.0 * (kf - 1.0)).sqrt() / kf
    }
}

/// ∫_a^b g(E) ρ_Kesten(E) dE for a ≤ b inside the support, in the variable
/// E = 2√(k-1) cos φ where the density becomes smooth.
fn kesten_integral(k: usize, lo: f64, hi: f64, g: impl Fn(f64) -> f64) -> f64 {
    let kf = k as f64;
    let edge = kesten_edge(k);
    let lo = lo.clamp(-edge, edge);
    let hi = hi.clamp(-edge, edge);
    if hi <= lo {
        return 0.0;
    }
    let (p_lo, p_hi) = ((hi / edge).acos(), (lo / edge).acos());
    let q = 4.0 * (kf - 1.0);
    let r = adaptive(
        |phi: f64| {
            let (s, c) = phi.sin_cos();
            g(edge * c) * kf / (2.0 * PI) * q * s * s / (kf * kf - q * c * c)
        },
        p_lo,
        p_hi,
        1e-15,
        1e-14,
    );
    r.value
}

/// Moment ∫ E^j ρ_Kesten(E) dE.
pub fn kesten_moment(k: usize, j: usize) -> f64 {
    kesten_integral(k, f64::NEG_INFINITY, f64::INFINITY, |e| e.powi(j as i32))
}

/// Kesten integrated density of states.
pub fn kesten_ids(k: usize, e: f64) -> f64 {
    kesten_integral(k, f64::NEG_INFINITY, e, |_| 1.0)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn free_1d_values() {
        assert!((free_dosf(1, 0.0) - 1.0 / (2.0 * PI)).abs() < 1e-16);
        assert_eq!(free_dosf(1, 2.5), 0.0);
        assert_eq!(free_dosf(1, -2.0), f64::INFINITY);
        assert!((free_ids_1d(2f64.sqrt()) - 0.75).abs() < 1e-15);
        assert_eq!(free_ids_1d(0.0), 0.5);
    }

    #[test]
    fn two_dimensional_elliptic_matches_convolution() {
        for e in [1.0, 0.1, 2.0, -3.5, 3.99] {
            let a = free_dosf(2, e);
            let b = free_dosf_2d_quadrature(e);
            assert!((a - b).abs() < 1e-10 * a.max(1.0), "E = {e}: {a} vs {b}");
        }
        assert_eq!(free_dosf(2, 4.5), 0.0);
    }

    #[test]
    fn three_dimensional_density_is_normalized() {
        let pts = [-6.0, -2.0, 2.0, 6.0];
        let total = adaptive_pieces(|e: f64| free_dosf(3, e), &pts, 1e-9, 1e-9).value;
        assert!((total - 1.0).abs() < 1e-7, "{total}");
        let second = adaptive_pieces(|e: f64| e * e * free_dosf(3, e), &pts, 1e-9, 1e-9).value;
        assert!((second - 6.0).abs() < 1e-6, "{second}");
    }

    #[test]
    fn fourier_transform_at_zero_and_decay() {
        for d in 1..=4 {
            let v = free_dosf_fourier(d, 0.0);
            assert!((v - (2.0 * PI).powf(-(d as f64) / 2.0)).abs() < 1e-15);
        }
    }

    #[test]
    fn fourier_transform_matches_quadrature_in_1d() {
        for t in [1.0, 2.0, 5.0] {
            // ∫ρ₁(E)cos(tE)dE in the variable E = 2cos θ
            let direct = adaptive(|th: f64| (2.0 * t * th.cos()).cos(), 0.0, PI, 1e-14, 0.0).value / PI;
            let want = direct / (2.0 * PI).sqrt();
            assert!((free_dosf_fourier(1, t) - want).abs() < 1e-6);
        }
    }

    #[test]
    fn lloyd_routes_agree_in_1d() {
        for (lambda, e) in [(0.5, 0.0), (0.1, 1.3), (1.0, 3.0)] {
            let f = lloyd_dosf(1, lambda, e).unwrap();
            let c = lloyd_dosf_convolution(1, lambda, e).unwrap();
            let z = lloyd_dosf_1d_closed(lambda, e).unwrap();
            assert!((f - z).abs() < 1e-9, "fourier {f} closed {z}");
            assert!((c - z).abs() < 1e-9, "convolution {c} closed {z}");
        }
        assert!(lloyd_dosf(1, 0.0, 0.0).is_err());
    }

    #[test]
    fn kesten_normalization_and_values() {
        assert!((kesten_dosf(3, 0.0) - 2f64.sqrt() / (3.0 * PI)).abs() < 1e-15);
        assert_eq!(kesten_dosf(3, 3.0), 0.0);
        for k in [3, 4, 7] {
            assert!((kesten_moment(k, 0) - 1.0).abs() < 1e-12);
            // walks returning to the root: k after two steps
            assert!((kesten_moment(k, 2) - k as f64).abs() < 1e-11);
            assert!(kesten_moment(k, 3).abs() < 1e-12);
            assert!((kesten_ids(k, 0.0) - 0.5).abs() < 1e-12);
        }
        // k(2k - 1) closed walks of length four
        assert!((kesten_moment(3, 4) - 15.0).abs() < 1e-10);
    }

    #[test]
    fn kesten_constant_bounds_the_density() {
        for k in 3..=12 {
            let c = kesten_constant(k);
            let edge = kesten_edge(k);
            let sup = (0..=2000).map(|i| kesten_dosf(k, -edge + edge * i as f64 / 1000.0)).fold(0.0, f64::max);
            assert!(sup <= c + 1e-12, "k = {k}: sup {sup} > {c}");
        }
    }
}
