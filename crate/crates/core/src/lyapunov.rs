//! Lyapunov exponents of d = 1 and strip models: transfer-matrix products,
//! the Thouless formula and the Poisson transform of a histogram DOS.

use faer::complex_native::c64;
use faer::Mat;
use num_complex::Complex64;
use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::dos::{DosEstimate, EstimateKind};
use crate::error::{invalid, Error, Result};
use crate::lattice::MatrixFamily;
use crate::measures::ProbabilityMeasure;
use crate::quad::tanh_sinh;
use crate::rng::{keyed_rng, Domain};
use crate::util::{fmt_sig, map_indexed, mean_stderr};

/// Independent replicas behind every transfer-matrix estimate.
pub const REPLICAS: usize = 8;
/// Steps between renormalizations of the scalar 2×2 product.
pub const RENORM_SCALAR: usize = 32;
/// Steps between QR re-orthonormalizations of the strip frame.
pub const RENORM_STRIP: usize = 8;
/// Smallest accepted number of transfer steps.
pub const MIN_STEPS: usize = 1000;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Method {
    Transfer,
    Thouless,
    ClosedForm,
}

impl Method {
    pub fn as_str(self) -> &'static str {
        match self {
            Method::Transfer => "transfer",
            Method::Thouless => "thouless",
            Method::ClosedForm => "closed-form",
        }
    }
}

/// Lyapunov exponent (or the sum of the nonnegative exponents of a strip)
/// at a complex energy.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct LyapunovResult {
    pub re_e: f64,
    pub im_e: f64,
    /// L(E), or Σ_j γ_j(E) for a strip.
    pub value: f64,
    /// γ_1 ≥ … ≥ γ_L for strips; empty otherwise.
    pub exponents: Vec<f64>,
    pub method: Method,
    /// Transfer steps, or histogram bins for the Thouless route.
    pub steps: usize,
    pub error: f64,
    /// Per-replica (transfer) or per-sample (Thouless) values.
    #[serde(skip)]
    pub replicas: Vec<f64>,
}

impl LyapunovResult {
    pub fn energy(&self) -> Complex64 {
        Complex64::new(self.re_e, self.im_e)
    }

    /// CSV header matching [`LyapunovResult::to_csv_row`] for `width` exponents.
    pub fn csv_header(width: usize) -> String {
        let mut h = String::from("re_E,im_E,value");
        for j in 1..=width {
            h += &format!(",gamma_{j}");
        }
        h + ",stderr,method,steps"
    }

    pub fn to_csv_row(&self) -> String {
        let mut row = format!("{},{},{}", fmt_sig(self.re_e), fmt_sig(self.im_e), fmt_sig(self.value));
        for g in &self.exponents {
            row += &format!(",{}", fmt_sig(*g));
        }
        row + &format!(",{},{},{}", fmt_sig(self.error), self.method.as_str(), self.steps)
    }
}

fn check_steps(steps: usize) -> Result<()> {
    if steps < MIN_STEPS {
        return invalid(format!("at least {MIN_STEPS} transfer steps are needed, got {steps}"));
    }
    Ok(())
}

/// (1/n) log‖A^E(ω_n)⋯A^E(ω_1)‖ for one replica.
fn replica_1d(measure: &ProbabilityMeasure, e: Complex64, steps: usize, seed: u64, replica: u64) -> f64 {
    let mut rng = keyed_rng(Domain::Replica, seed, replica);
    let one = Complex64::new(1.0, 0.0);
    let zero = Complex64::new(0.0, 0.0);
    // rows (a, b) and (c, d) of the running product
    let (mut a, mut b, mut c, mut d) = (one, zero, zero, one);
    let mut log = 0.0;
    for n in 1..=steps {
        let t = e - measure.quantile(rng.gen::<f64>());
        let (na, nb) = (t * a - c, t * b - d);
        c = a;
        d = b;
        a = na;
        b = nb;
        if n % RENORM_SCALAR == 0 || n == steps {
            let s = (a.norm_sqr() + b.norm_sqr() + c.norm_sqr() + d.norm_sqr()).sqrt();
            a /= s;
            b /= s;
            c /= s;
            d /= s;
            log += s.ln();
        }
    }
    log / steps as f64
}

fn transfer_result(e: Complex64, steps: usize, replicas: Vec<f64>) -> LyapunovResult {
    let (value, error) = mean_stderr(&replicas);
    LyapunovResult { re_e: e.re, im_e: e.im, value, exponents: Vec::new(), method: Method::Transfer, steps, error, replicas }
}

/// Lyapunov exponent of the chain with single-site law `measure` by products
/// of the 2×2 transfer matrices ((E - ω, -1), (1, 0)).
///
/// The value is the mean over [`REPLICAS`] keyed replicas and the error is
/// their standard error. Two calls sharing a seed use the same uniforms, so
/// results for different measures are coupled through their quantiles.
pub fn transfer_lyapunov_1d(measure: &ProbabilityMeasure, e: Complex64, steps: usize, seed: u64) -> Result<LyapunovResult> {
    check_steps(steps)?;
    let reps = map_indexed(REPLICAS, |q| replica_1d(measure, e, steps, seed, q));
    Ok(transfer_result(e, steps, reps))
}

/// Paired estimate of L_b(E) - L_a(E) from coupled replicas.
pub fn lyapunov_difference_1d(
    a: &ProbabilityMeasure,
    b: &ProbabilityMeasure,
    e: Complex64,
    steps: usize,
    seed: u64,
) -> Result<(f64, f64)> {
    let la = transfer_lyapunov_1d(a, e, steps, seed)?;
    let lb = transfer_lyapunov_1d(b, e, steps, seed)?;
    let diffs: Vec<f64> = la.replicas.iter().zip(&lb.replicas).map(|(x, y)| y - x).collect();
    Ok(mean_stderr(&diffs))
}

fn to_faer(frame: &[Complex64], n: usize) -> Mat<c64> {
    Mat::from_fn(n, n, |i, j| {
        let z = frame[j * n + i];
        c64::new(z.re, z.im)
    })
}

/// Column-wise log growth of one strip replica, or `None` if the frame
/// collapsed twice.
fn replica_strip(family: &MatrixFamily, lambda: f64, e: Complex64, steps: usize, seed: u64, replica: u64) -> Option<Vec<f64>> {
    let l = family.size();
    let n = 2 * l;
    let identity = |frame: &mut Vec<Complex64>| {
        frame.iter_mut().for_each(|z| *z = Complex64::new(0.0, 0.0));
        for i in 0..n {
            frame[i * n + i] = Complex64::new(1.0, 0.0);
        }
    };
    // column-major 2L × 2L frame; rows 0..L hold ψ_n, rows L..2L hold ψ_{n-1}
    let mut frame = vec![Complex64::new(0.0, 0.0); n * n];
    identity(&mut frame);
    let mut logs = vec![0.0; n];
    let mut reseeded = false;
    let mut rng = keyed_rng(Domain::Replica, seed, replica);
    let mut top = vec![Complex64::new(0.0, 0.0); l];
    for step in 1..=steps {
        let w = &family.matrices()[family.quantile_index(rng.gen::<f64>())];
        for col in frame.chunks_mut(n) {
            for i in 0..l {
                let mut acc = e * col[i] - col[l + i];
                for k in 0..l {
                    acc -= lambda * w[i * l + k] * col[k];
                }
                top[i] = acc;
            }
            let (head, tail) = col.split_at_mut(l);
            tail.copy_from_slice(head);
            head.copy_from_slice(&top);
        }
        if step % RENORM_STRIP == 0 || step == steps {
            let qr = to_faer(&frame, n).qr();
            let r = qr.compute_thin_r();
            let diag: Vec<f64> = (0..n).map(|j| r.read(j, j).abs()).collect();
            if diag.iter().any(|x| !(x.is_finite() && *x > 0.0)) {
                if reseeded {
                    return None;
                }
                reseeded = true;
                identity(&mut frame);
                continue;
            }
            for (acc, x) in logs.iter_mut().zip(&diag) {
                *acc += x.ln();
            }
            let q = qr.compute_thin_q();
            for j in 0..n {
                for i in 0..n {
                    let z = q.read(i, j);
                    frame[j * n + i] = Complex64::new(z.re, z.im);
                }
            }
        }
    }
    Some(logs.into_iter().map(|x| x / steps as f64).collect())
}

/// Nonnegative Lyapunov exponents γ_1 ≥ … ≥ γ_L of the strip with potentials
/// λ ω_n drawn from `family`, and their sum.
///
/// An orthonormal frame of 2L columns is pushed through the 2L×2L transfer
/// matrices and re-orthonormalized by QR every [`RENORM_STRIP`] steps.
pub fn strip_lyapunov(family: &MatrixFamily, lambda: f64, e: Complex64, steps: usize, seed: u64) -> Result<LyapunovResult> {
    check_steps(steps)?;
    let l = family.size();
    let reps = map_indexed(REPLICAS, |q| replica_strip(family, lambda, e, steps, seed, q));
    let mut per = Vec::with_capacity(REPLICAS);
    for (q, r) in reps.into_iter().enumerate() {
        let mut g = r.ok_or_else(|| Error::Numerical(format!("transfer frame lost rank twice in replica {q}")))?;
        g.sort_by(|a, b| b.total_cmp(a));
        g.truncate(l);
        per.push(g);
    }
    let sums: Vec<f64> = per.iter().map(|g| g.iter().sum()).collect();
    let mut exponents: Vec<f64> = (0..l).map(|j| per.iter().map(|g| g[j]).sum::<f64>() / per.len() as f64).collect();
    exponents.sort_by(|a, b| b.total_cmp(a));
    let (_, error) = mean_stderr(&sums);
    let value = exponents.iter().sum();
    Ok(LyapunovResult { re_e: e.re, im_e: e.im, value, exponents, method: Method::Transfer, steps, error, replicas: sums })
}

/// Lyapunov exponent of the free chain: log|z| for the root z of
/// z + 1/z = E with |z| ≥ 1.
pub fn free_lyapunov(e: Complex64) -> f64 {
    if e.im == 0.0 && e.re.abs() <= 2.0 {
        return 0.0;
    }
    let s = (e * e - 4.0).sqrt();
    let z = (e + s) / 2.0;
    z.norm().ln().abs()
}

/// ∫ log|x - u - iv| dx as a function of y = x - u.
fn log_antiderivative(y: f64, v: f64) -> f64 {
    if v == 0.0 {
        if y == 0.0 {
            0.0
        } else {
            y * y.abs().ln() - y
        }
    } else {
        0.5 * y * (y * y + v * v).ln() - y + v * (y / v).atan()
    }
}

fn require_histogram(est: &DosEstimate) -> Result<()> {
    if est.kind != EstimateKind::Histogram {
        return invalid("this operation needs a histogram estimate");
    }
    Ok(())
}

fn per_sample<F: Fn(&[f64]) -> f64>(est: &DosEstimate, f: F) -> (f64, f64) {
    if est.sample_masses.is_empty() {
        return (f(&est.masses), 0.0);
    }
    let vals: Vec<f64> = est.sample_masses.iter().map(|m| f(m)).collect();
    mean_stderr(&vals)
}

/// Thouless formula ∫ log|E' - E| dn(E') for a histogram DOS, integrating the
/// logarithm exactly against each bin's constant density.
///
/// The error adds the sampling standard error and Σ_b m_b |avg_b - g(c_b)|,
/// the spread between bin averages and midpoint values of g = log|· - E|,
/// which gauges the smearing of the eigenvalues over their bins. A negative
/// result is floored at 0 and the excess moved into the error.
pub fn thouless(est: &DosEstimate, e: Complex64) -> Result<LyapunovResult> {
    require_histogram(est)?;
    let v = e.im.abs();
    let averages: Vec<f64> = est
        .edges
        .windows(2)
        .map(|w| (log_antiderivative(w[1] - e.re, v) - log_antiderivative(w[0] - e.re, v)) / (w[1] - w[0]))
        .collect();
    let g = |x: f64| 0.5 * ((x - e.re).powi(2) + v * v).ln();
    let spread: f64 = est
        .edges
        .windows(2)
        .zip(&averages)
        .zip(&est.masses)
        .map(|((w, avg), m)| {
            let mid = g(0.5 * (w[0] + w[1]));
            let s = if mid.is_finite() { (avg - mid).abs() } else { (avg - g(w[0]).max(g(w[1]))).abs() };
            m * s
        })
        .sum();
    let (mut value, stderr) = per_sample(est, |m| m.iter().zip(&averages).map(|(a, b)| a * b).sum());
    let mut error = stderr + spread;
    let replicas: Vec<f64> = est.sample_masses.iter().map(|m| m.iter().zip(&averages).map(|(a, b)| a * b).sum()).collect();
    if value < 0.0 {
        error += -value;
        value = 0.0;
    }
    Ok(LyapunovResult {
        re_e: e.re,
        im_e: e.im,
        value,
        exponents: Vec::new(),
        method: Method::Thouless,
        steps: est.masses.len(),
        error,
        replicas,
    })
}

/// Thouless formula for a strip of the given width: with the DOS normalized
/// per site, the sum of the nonnegative exponents is `width` times the
/// single-channel integral.
pub fn thouless_strip(est: &DosEstimate, e: Complex64, width: usize) -> Result<LyapunovResult> {
    let mut r = thouless(est, e)?;
    let w = width as f64;
    r.value *= w;
    r.error *= w;
    r.replicas.iter_mut().for_each(|x| *x *= w);
    Ok(r)
}

/// Poisson transform ∫ ε/((E - E')² + ε²) dn(E') of a histogram DOS with the
/// arctangent antiderivative on each bin. Returns the value and its
/// sampling standard error.
pub fn poisson_transform(est: &DosEstimate, e: f64, eps: f64) -> Result<(f64, f64)> {
    require_histogram(est)?;
    if !(eps > 0.0) {
        return invalid("the Poisson transform needs eps > 0");
    }
    let averages: Vec<f64> =
        est.edges.windows(2).map(|w| (((w[1] - e) / eps).atan() - ((w[0] - e) / eps).atan()) / (w[1] - w[0])).collect();
    Ok(per_sample(est, |m| m.iter().zip(&averages).map(|(a, b)| a * b).sum()))
}

/// Transfer-matrix values of L(E + iε) along a decreasing ε-sequence.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Extrapolation {
    /// Linear extrapolation of the last two entries to ε = 0, floored at 0.
    pub limit: f64,
    pub limit_error: f64,
    pub table: Vec<LyapunovResult>,
}

pub fn lyapunov_extrapolate(measure: &ProbabilityMeasure, e: f64, eps: &[f64], steps: usize, seed: u64) -> Result<Extrapolation> {
    if eps.is_empty() {
        return invalid("empty eps sequence");
    }
    if eps.iter().any(|x| !(*x > 0.0)) || eps.windows(2).any(|w| !(w[1] < w[0])) {
        return invalid("eps sequence must be positive and strictly decreasing");
    }
    let table = eps
        .iter()
        .map(|&x| transfer_lyapunov_1d(measure, Complex64::new(e, x), steps, seed))
        .collect::<Result<Vec<_>>>()?;
    let last = &table[table.len() - 1];
    let (limit, limit_error) = if table.len() == 1 {
        (last.value, last.error)
    } else {
        let prev = &table[table.len() - 2];
        let (e1, e2) = (eps[eps.len() - 2], eps[eps.len() - 1]);
        // L(ε) ≈ L₀ + aε through the last two points
        let c1 = -e2 / (e1 - e2);
        let c2 = e1 / (e1 - e2);
        (c1 * prev.value + c2 * last.value, (c1 * prev.error).hypot(c2 * last.error))
    };
    Ok(Extrapolation { limit: limit.max(0.0), limit_error, table })
}

/// ∫_ε^1 dα / log((1/ε) √(α/(1-α))) for 0 < ε < 1/2.
pub fn appendix_c_integral(eps: f64) -> Result<f64> {
    if !(eps > 0.0 && eps < 0.5) {
        return invalid(format!("eps = {eps} must lie in (0, 1/2)"));
    }
    let le = -eps.ln();
    // 1 - α is passed exactly as the distance to the right endpoint
    let r = tanh_sinh(|a, _, one_minus| 1.0 / (le + 0.5 * (a.ln() - one_minus.ln())), eps, 1.0, 1e-13);
    Ok(r.value)
}
