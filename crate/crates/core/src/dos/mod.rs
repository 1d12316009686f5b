//! Density-of-states estimators: exact-moment Monte Carlo with Bernstein
//! functionals, periodic-box eigenvalue histograms, and closed-form oracles.

pub mod bernstein;
pub mod closed_form;
pub mod testfn;

use serde::{Deserialize, Serialize};

use crate::error::{invalid, Error, Result};
use crate::lattice::{assemble_box, dependence_radius, Disorder, Geometry, HamiltonianBox, ModelSpec, Region, SiteValue};
use crate::util::{fmt_sig, linspace, map_indexed, mean_stderr};

pub use bernstein::{bernstein_approx, bernstein_constant, bernstein_error_bound, ChebyshevSeries};
pub use closed_form::{
    free_dosf, free_dosf_fourier, free_fourier_decay_bound, free_ids_1d, kesten_constant, kesten_dosf, kesten_edge,
    kesten_ids, kesten_moment, lloyd_dosf, lloyd_dosf_1d_closed, lloyd_dosf_convolution,
};
pub use testfn::{Shape, TestFunction};

/// Offset added to a sample index when its box has to be redrawn.
const RETRY_OFFSET: u64 = 1 << 40;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum EstimateKind {
    Moments,
    Histogram,
}

/// Monte Carlo estimate of the density of states measure.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct DosEstimate {
    pub kind: EstimateKind,
    pub samples: usize,
    pub seed: u64,
    pub spectral_bound: f64,
    /// E[Tr(P₀ H^j P₀)]/N for j = 0..=n.
    pub moments: Vec<f64>,
    pub moment_stderr: Vec<f64>,
    pub edges: Vec<f64>,
    pub masses: Vec<f64>,
    pub mass_stderr: Vec<f64>,
    /// Bin masses of every sample, kept for paired comparisons.
    #[serde(skip)]
    pub sample_masses: Vec<Vec<f64>>,
    pub note: String,
}

impl DosEstimate {
    pub fn to_csv(&self) -> String {
        let kind = match self.kind {
            EstimateKind::Moments => "moments",
            EstimateKind::Histogram => "histogram",
        };
        let mut out = String::from("# kind,samples,seed,r\n");
        out += &format!("# {kind},{},{},{}\n", self.samples, self.seed, fmt_sig(self.spectral_bound));
        if !self.note.is_empty() {
            out += &format!("# note: {}\n", self.note);
        }
        match self.kind {
            EstimateKind::Moments => {
                out += "moment_index,value,stderr\n";
                for (j, (m, s)) in self.moments.iter().zip(&self.moment_stderr).enumerate() {
                    out += &format!("{j},{},{}\n", fmt_sig(*m), fmt_sig(*s));
                }
            }
            EstimateKind::Histogram => {
                out += "bin_lo,bin_hi,mass,stderr\n";
                for (b, (m, s)) in self.masses.iter().zip(&self.mass_stderr).enumerate() {
                    out += &format!("{},{},{},{}\n", fmt_sig(self.edges[b]), fmt_sig(self.edges[b + 1]), fmt_sig(*m), fmt_sig(*s));
                }
            }
        }
        out
    }

    fn require_histogram(&self) -> Result<()> {
        if self.kind != EstimateKind::Histogram {
            return invalid("this operation needs a histogram estimate");
        }
        Ok(())
    }

    /// Largest bin width.
    pub fn bin_width(&self) -> f64 {
        self.edges.windows(2).map(|w| w[1] - w[0]).fold(0.0, f64::max)
    }
}

/// Value of a spectral functional with its Monte Carlo and approximation errors.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct FunctionalEstimate {
    pub label: String,
    pub value: f64,
    pub stderr: f64,
    /// Deterministic bound on the polynomial approximation error.
    pub bias_bound: f64,
    #[serde(skip)]
    pub per_sample: Vec<f64>,
}

/// Σ_{s ∈ P₀} ⟨e_s, T_j(H/r) e_s⟩ for j = 0..=n.
///
/// Uses T_{2j} = 2T_j² - 1 and T_{2j+1} = 2T_{j+1}T_j - T_1, so only ⌈n/2⌉
/// Chebyshev vectors are formed, each restricted to its light cone.
pub fn chebyshev_traces(b: &HamiltonianBox, n: usize, r: f64) -> Vec<f64> {
    let dim = b.dim();
    let mut mu = vec![0.0; n + 1];
    let steps = n.div_ceil(2);
    let mut prev = vec![0.0; dim];
    let mut cur = vec![0.0; dim];
    let mut next = vec![0.0; dim];
    let inv_r = 1.0 / r;
    for &s in b.projection_sites() {
        for &i in b.cone(steps + 1) {
            prev[i] = 0.0;
            cur[i] = 0.0;
            next[i] = 0.0;
        }
        cur[s] = 1.0;
        mu[0] += 1.0;
        let mut mu1 = 0.0;
        for j in 1..=steps {
            // next = v_j from cur = v_{j-1} and prev = v_{j-2}
            if j == 1 {
                for &i in b.cone(1) {
                    next[i] = b.row_times(i, &cur) * inv_r;
                }
                mu1 = next[s];
            } else {
                for &i in b.cone(j) {
                    next[i] = 2.0 * b.row_times(i, &cur) * inv_r - prev[i];
                }
            }
            if 2 * j - 1 <= n {
                let dot: f64 = b.cone(j - 1).iter().map(|&i| next[i] * cur[i]).sum();
                mu[2 * j - 1] += 2.0 * dot - mu1;
            }
            if 2 * j <= n {
                let dot: f64 = b.cone(j).iter().map(|&i| next[i] * next[i]).sum();
                mu[2 * j] += 2.0 * dot - 1.0;
            }
            std::mem::swap(&mut prev, &mut cur);
            std::mem::swap(&mut cur, &mut next);
        }
    }
    mu
}

fn moment_box(model: &ModelSpec, n: usize, seed: u64, sample: u64) -> Result<HamiltonianBox> {
    let radius = dependence_radius(model, n).max(1);
    model.sample_box(Region::Centered { radius }, seed, sample)
}

/// Per-sample Chebyshev moments Tr(P₀ T_j(H/r) P₀)/N, j = 0..=n.
pub fn chebyshev_moment_samples(model: &ModelSpec, n: usize, samples: usize, seed: u64, r: f64) -> Result<Vec<Vec<f64>>> {
    check_samples(samples)?;
    if !(r >= model.spectral_bound()) {
        return invalid(format!("interval half-width {r} is below the spectral bound {}", model.spectral_bound()));
    }
    let nproj = model.n_proj() as f64;
    map_indexed(samples, |i| {
        let b = moment_box(model, n, seed, i)?;
        Ok(chebyshev_traces(&b, n, r).into_iter().map(|m| m / nproj).collect())
    })
    .into_iter()
    .collect()
}

fn check_samples(samples: usize) -> Result<()> {
    if samples == 0 {
        return invalid("need at least one sample");
    }
    Ok(())
}

/// E[Tr(P₀ H^j P₀)]/N for j = 0..=n, exact per sample by the counting lemma.
pub fn trace_moments(model: &ModelSpec, n: usize, samples: usize, seed: u64) -> Result<DosEstimate> {
    check_samples(samples)?;
    let nproj = model.n_proj() as f64;
    let per: Vec<Vec<f64>> = map_indexed(samples, |i| {
        let b = moment_box(model, n, seed, i)?;
        Ok(b.trace_powers(n).into_iter().map(|m| m / nproj).collect())
    })
    .into_iter()
    .collect::<Result<_>>()?;
    let (moments, moment_stderr) = column_stats(&per, n + 1);
    Ok(DosEstimate {
        kind: EstimateKind::Moments,
        samples,
        seed,
        spectral_bound: model.spectral_bound(),
        moments,
        moment_stderr,
        edges: Vec::new(),
        masses: Vec::new(),
        mass_stderr: Vec::new(),
        sample_masses: Vec::new(),
        note: String::new(),
    })
}

fn column_stats(rows: &[Vec<f64>], width: usize) -> (Vec<f64>, Vec<f64>) {
    (0..width)
        .map(|j| {
            let col: Vec<f64> = rows.iter().map(|r| r[j]).collect();
            mean_stderr(&col)
        })
        .unzip()
}

fn check_interval(fs: &[TestFunction], r: f64) -> Result<()> {
    for f in fs {
        if f.r < r * (1.0 - 1e-12) {
            return invalid(format!("test function {} is certified on [-{}, {}], need [-{r}, {r}]", f.label, f.r, f.r));
        }
    }
    Ok(())
}

fn functionals_from(per: &[Vec<f64>], series: &[ChebyshevSeries], fs: &[TestFunction], n: usize, r: f64, bias_factor: f64) -> Vec<FunctionalEstimate> {
    series
        .iter()
        .zip(fs)
        .map(|(p, f)| {
            let vals: Vec<f64> = per.iter().map(|m| p.pair(m)).collect();
            let (value, stderr) = mean_stderr(&vals);
            FunctionalEstimate {
                label: f.label.clone(),
                value,
                stderr,
                bias_bound: bias_factor * bernstein_error_bound(f.lip, r, n),
                per_sample: vals,
            }
        })
        .collect()
}

/// Estimates n(f) = E[Tr(P₀ f(H) P₀)]/N for each f through its degree-n
/// Bernstein polynomial on [-r, r], r the spectral bound of the model.
pub fn dos_functionals(model: &ModelSpec, fs: &[TestFunction], n: usize, samples: usize, seed: u64) -> Result<Vec<FunctionalEstimate>> {
    let r = model.spectral_bound();
    check_interval(fs, r)?;
    let series = fs.iter().map(|f| bernstein_approx(f, n, r)).collect::<Result<Vec<_>>>()?;
    let per = chebyshev_moment_samples(model, n, samples, seed, r)?;
    Ok(functionals_from(&per, &series, fs, n, r, 1.0))
}

pub fn dos_functional(model: &ModelSpec, f: &TestFunction, n: usize, samples: usize, seed: u64) -> Result<FunctionalEstimate> {
    Ok(dos_functionals(model, std::slice::from_ref(f), n, samples, seed)?.remove(0))
}

/// Paired estimates of n_b(f) - n_a(f). Both models are sampled with the same
/// keys, so their disorder is coupled through common uniforms.
pub fn dos_functional_differences(
    a: &ModelSpec,
    b: &ModelSpec,
    fs: &[TestFunction],
    n: usize,
    samples: usize,
    seed: u64,
) -> Result<Vec<FunctionalEstimate>> {
    let r = a.spectral_bound().max(b.spectral_bound());
    check_interval(fs, r)?;
    let series = fs.iter().map(|f| bernstein_approx(f, n, r)).collect::<Result<Vec<_>>>()?;
    let pa = chebyshev_moment_samples(a, n, samples, seed, r)?;
    let pb = chebyshev_moment_samples(b, n, samples, seed, r)?;
    let diff: Vec<Vec<f64>> = pa.iter().zip(&pb).map(|(x, y)| y.iter().zip(x).map(|(u, v)| u - v).collect()).collect();
    Ok(functionals_from(&diff, &series, fs, n, r, 2.0))
}

/// Number of eigenvalues strictly below `e` of the periodic chain with
/// diagonal `a` and unit hopping, from the inertia of its LDLᵀ factorization
/// with the corner row eliminated last.
fn ring_count_below(a: &[f64], e: f64) -> Option<usize> {
    let n = a.len();
    let pivmin = 1e-280;
    let guard = |d: f64| if d.abs() < pivmin { -pivmin } else { d };
    let mut count = 0usize;
    let mut d = guard(a[0] - e);
    if d < 0.0 {
        count += 1;
    }
    // c = L⁻¹ b for the coupling column b = e_0 + e_{n-2} of the last site
    let mut c = 1.0;
    let mut schur = (a[n - 1] - e) - c * c / d;
    for (i, &ai) in a.iter().enumerate().take(n - 1).skip(1) {
        let c_next = if i == n - 2 { 1.0 } else { 0.0 } - c / d;
        d = guard((ai - e) - 1.0 / d);
        if d < 0.0 {
            count += 1;
        }
        c = c_next;
        schur -= c * c / d;
    }
    if !schur.is_finite() {
        return None;
    }
    if schur < 0.0 {
        count += 1;
    }
    Some(count)
}

/// Eigenvalue counts below each edge for one periodic box.
fn sample_counts(model: &ModelSpec, side: usize, edges: &[f64], seed: u64, sample: u64) -> Result<(usize, Vec<usize>)> {
    let b = model.sample_box(Region::Periodic { side }, seed, sample)?;
    let dim = b.dim();
    let chain = matches!(model.geometry, Geometry::Cube { d: 1, .. });
    let mut counts = if chain {
        let diag = b.diagonal();
        edges
            .iter()
            .map(|&e| {
                let mut x = e;
                for _ in 0..4 {
                    if let Some(c) = ring_count_below(diag, x) {
                        return Ok(c);
                    }
                    x += 1e-13 * e.abs().max(1.0);
                }
                Err(Error::Numerical(format!("inertia count failed at E = {e}")))
            })
            .collect::<Result<Vec<_>>>()?
    } else {
        let eig = b.eigenvalues()?;
        edges.iter().map(|&e| eig.partition_point(|&x| x < e)).collect()
    };
    // eigenvalues rounded past ±r belong to the outer bins
    counts[0] = 0;
    *counts.last_mut().unwrap() = dim;
    Ok((dim, counts))
}

/// Eigenvalue histogram of periodic boxes of the given side on [-r, r] with
/// r the model's spectral bound.
pub fn dos_histogram(model: &ModelSpec, side: usize, samples: usize, bins: usize, seed: u64) -> Result<DosEstimate> {
    dos_histogram_on(model, side, samples, bins, seed, model.spectral_bound())
}

/// As [`dos_histogram`] on [-r, r] for a given r ≥ the spectral bound, so that
/// several models can share bin edges.
pub fn dos_histogram_on(model: &ModelSpec, side: usize, samples: usize, bins: usize, seed: u64, r: f64) -> Result<DosEstimate> {
    check_samples(samples)?;
    if side < 4 {
        return invalid(format!("box side {side} must be at least 4"));
    }
    if bins < 8 {
        return invalid(format!("bin count {bins} must be at least 8"));
    }
    if matches!(model.geometry, Geometry::Bethe { .. }) {
        return invalid("histograms need a periodic box, which the Bethe lattice does not have");
    }
    if !(r >= model.spectral_bound()) {
        return invalid(format!("histogram range {r} is below the spectral bound {}", model.spectral_bound()));
    }
    let edges = linspace(-r, r, bins + 1);
    let per: Vec<Vec<f64>> = map_indexed(samples, |i| {
        let (dim, counts) = match sample_counts(model, side, &edges, seed, i) {
            Ok(v) => v,
            Err(Error::Numerical(_)) => sample_counts(model, side, &edges, seed, i + RETRY_OFFSET)?,
            Err(e) => return Err(e),
        };
        Ok(counts.windows(2).map(|w| (w[1] - w[0]) as f64 / dim as f64).collect())
    })
    .into_iter()
    .collect::<Result<_>>()?;
    let (masses, mass_stderr) = column_stats(&per, bins);
    let d = match model.geometry {
        Geometry::Cube { d, .. } => d,
        _ => 1,
    };
    let note = format!("periodic box of side {side}; finite-volume bias of order surface/volume ~ {} not corrected", fmt_sig(2.0 * d as f64 / side as f64));
    Ok(DosEstimate {
        kind: EstimateKind::Histogram,
        samples,
        seed,
        spectral_bound: r,
        moments: Vec::new(),
        moment_stderr: Vec::new(),
        edges,
        masses,
        mass_stderr,
        sample_masses: per,
        note,
    })
}

fn cdf_at(edges: &[f64], masses: &[f64], e: f64) -> f64 {
    if e <= edges[0] {
        return 0.0;
    }
    if e >= edges[edges.len() - 1] {
        return 1.0;
    }
    let b = edges.partition_point(|&x| x <= e) - 1;
    let below: f64 = masses[..b].iter().sum();
    below + masses[b] * (e - edges[b]) / (edges[b + 1] - edges[b])
}

/// Integrated density of states N(E) with linear interpolation inside bins.
pub fn ids(est: &DosEstimate, e: f64) -> Result<(f64, f64)> {
    est.require_histogram()?;
    let vals: Vec<f64> = est.sample_masses.iter().map(|m| cdf_at(&est.edges, m, e)).collect();
    if vals.is_empty() {
        return Ok((cdf_at(&est.edges, &est.masses, e), 0.0));
    }
    Ok(mean_stderr(&vals))
}

fn check_paired(a: &DosEstimate, b: &DosEstimate) -> Result<()> {
    a.require_histogram()?;
    b.require_histogram()?;
    if a.edges != b.edges || a.sample_masses.len() != b.sample_masses.len() || a.sample_masses.is_empty() {
        return invalid("paired histograms need identical bins and sample counts");
    }
    Ok(())
}

/// Paired estimate of N_b(E) - N_a(E).
pub fn ids_difference(a: &DosEstimate, b: &DosEstimate, e: f64) -> Result<(f64, f64)> {
    check_paired(a, b)?;
    let vals: Vec<f64> =
        a.sample_masses.iter().zip(&b.sample_masses).map(|(x, y)| cdf_at(&b.edges, y, e) - cdf_at(&a.edges, x, e)).collect();
    Ok(mean_stderr(&vals))
}

/// Σ_b mass_b f(center_b); differs from the box functional by at most
/// L_f · (bin width)/2.
pub fn histogram_functional(est: &DosEstimate, f: &TestFunction) -> Result<(f64, f64)> {
    est.require_histogram()?;
    let centers: Vec<f64> = est.edges.windows(2).map(|w| 0.5 * (w[0] + w[1])).collect();
    let fc: Vec<f64> = centers.iter().map(|&x| f.eval(x)).collect();
    let vals: Vec<f64> = est.sample_masses.iter().map(|m| m.iter().zip(&fc).map(|(a, b)| a * b).sum()).collect();
    Ok(mean_stderr(&vals))
}

/// Both sides of |Tr P₀(f(H⁰ + λP̃_ℓ) - f(H⁰ + λ₀P̃_ℓ))P₀| ≤ 2N²‖Θ‖_∞ L_f |λ - λ₀|.
///
/// H⁰ is the centered box of the given radius with the frozen disorder and
/// the potential of block ℓ removed; P̃_ℓ places the profile Θ on block ℓ.
pub fn finite_rank_deviation(
    model: &ModelSpec,
    block: &[i64],
    lambda: f64,
    lambda0: f64,
    f: &TestFunction,
    disorder: &Disorder,
    radius: usize,
) -> Result<(f64, f64)> {
    let Geometry::Cube { d, k_block } = model.geometry else {
        return invalid("the finite-rank check is defined for cube models");
    };
    if block.len() != d {
        return invalid(format!("block coordinate has {} entries, expected {d}", block.len()));
    }
    let mut frozen = disorder.clone();
    frozen.insert(block.to_vec(), SiteValue::Scalar(0.0));
    let base = assemble_box(model, Region::Centered { radius }, &frozen)?;
    let kb = k_block as i64;
    let sites: Vec<(usize, f64)> = base
        .coords()
        .iter()
        .enumerate()
        .filter(|(_, c)| c.iter().zip(block).all(|(x, l)| x.div_euclid(kb) == *l))
        .map(|(i, c)| {
            let p = c.iter().fold(0usize, |acc, x| acc * k_block + x.rem_euclid(kb) as usize);
            (i, model.profile[p])
        })
        .collect();
    if sites.len() != model.n_proj() {
        return invalid("block ℓ is not fully inside the box");
    }
    let trace = |coupling: f64| -> Result<f64> {
        let mut h = base.clone();
        for &(i, theta) in &sites {
            h.shift_diagonal(i, coupling * theta);
        }
        let (vals, weights) = h.projected_spectrum()?;
        Ok(vals.iter().zip(&weights).map(|(e, w)| w * f.eval(*e)).sum())
    };
    let lhs = (trace(lambda)? - trace(lambda0)?).abs();
    let nproj = model.n_proj() as f64;
    let rhs = 2.0 * nproj * nproj * model.profile_sup() * f.lip * (lambda - lambda0).abs();
    Ok((lhs, rhs))
}

#[cfg(test)]
mod tests;
