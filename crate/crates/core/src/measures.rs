//! Compactly supported probability measures on the line, stored as weighted atoms.

use std::fmt::Write as _;
use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::error::{invalid, Error, Result};
use crate::lp;
use crate::quad;
use crate::util::fmt_sig;

const MERGE_TOL: f64 = 1e-12;
const WEIGHT_TOL: f64 = 1e-9;
const KERNEL_CELLS: usize = 32;

/// A probability measure with finitely many atoms inside `[-C, C]`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ProbabilityMeasure {
    locations: Vec<f64>,
    weights: Vec<f64>,
    cumulative: Vec<f64>,
    support_bound: f64,
    label: String,
}

/// Mollifier profile; every kernel lives on `[-1/2, 1/2]` before scaling.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum Kernel {
    Box,
    Triangle,
    SmoothBump,
}

impl ProbabilityMeasure {
    /// Builds a canonical measure: atoms sorted, coincident locations merged,
    /// weights renormalized.
    pub fn make_atomic(locations: &[f64], weights: &[f64], c: f64) -> Result<Self> {
        if locations.is_empty() {
            return Err(Error::InvalidMeasure("no atoms".into()));
        }
        if locations.len() != weights.len() {
            return Err(Error::InvalidMeasure(format!(
                "{} locations but {} weights",
                locations.len(),
                weights.len()
            )));
        }
        if !(c >= 0.0) || !c.is_finite() {
            return Err(Error::InvalidMeasure(format!("support bound {c} must be finite and nonnegative")));
        }
        let mut atoms = Vec::with_capacity(locations.len());
        for (&x, &w) in locations.iter().zip(weights) {
            if !x.is_finite() || x.abs() > c * (1.0 + 1e-15) {
                return Err(Error::InvalidMeasure(format!("location {x} outside [-{c}, {c}]")));
            }
            if !(w >= 0.0) || !w.is_finite() {
                return Err(Error::InvalidMeasure(format!("weight {w} must be nonnegative")));
            }
            atoms.push((x.clamp(-c, c), w));
        }
        let total: f64 = atoms.iter().map(|a| a.1).sum();
        if (total - 1.0).abs() > WEIGHT_TOL {
            return Err(Error::InvalidMeasure(format!("weights sum to {total}, not 1")));
        }
        Self::from_unnormalized(atoms, c, String::new())
    }

    fn from_unnormalized(mut atoms: Vec<(f64, f64)>, c: f64, label: String) -> Result<Self> {
        atoms.sort_by(|a, b| a.0.total_cmp(&b.0));
        let mut locations: Vec<f64> = Vec::with_capacity(atoms.len());
        let mut weights: Vec<f64> = Vec::with_capacity(atoms.len());
        for (x, w) in atoms {
            match locations.last() {
                Some(&last) if x - last <= MERGE_TOL => *weights.last_mut().unwrap() += w,
                _ => {
                    locations.push(x);
                    weights.push(w);
                }
            }
        }
        let total: f64 = weights.iter().sum();
        if !(total > 0.0) {
            return Err(Error::InvalidMeasure("total mass is zero".into()));
        }
        for w in &mut weights {
            *w /= total;
        }
        let mut cumulative = Vec::with_capacity(weights.len());
        let mut acc = 0.0;
        for &w in &weights {
            acc += w;
            cumulative.push(acc);
        }
        *cumulative.last_mut().unwrap() = 1.0;
        Ok(Self { locations, weights, cumulative, support_bound: c, label })
    }

    /// The point mass at `x`, with support bound `max(|x|, 1)`.
    pub fn delta(x: f64) -> Self {
        Self::make_atomic(&[x], &[1.0], x.abs().max(1.0)).expect("finite point mass")
    }

    /// Two atoms at `±a` with weights `p` (at `-a`) and `1 - p`.
    pub fn bernoulli(a: f64, p: f64) -> Result<Self> {
        if !(0.0..=1.0).contains(&p) {
            return invalid(format!("bernoulli weight {p} outside [0, 1]"));
        }
        Self::make_atomic(&[-a, a], &[p, 1.0 - p], a.abs())
    }

    /// Attaches a free-text label.
    pub fn with_label(mut self, label: impl Into<String>) -> Self {
        self.label = label.into();
        self
    }

    pub fn locations(&self) -> &[f64] {
        &self.locations
    }

    pub fn weights(&self) -> &[f64] {
        &self.weights
    }

    pub fn support_bound(&self) -> f64 {
        self.support_bound
    }

    pub fn label(&self) -> &str {
        &self.label
    }

    pub fn len(&self) -> usize {
        self.locations.len()
    }

    pub fn is_empty(&self) -> bool {
        self.locations.is_empty()
    }

    /// ∫ f dμ.
    pub fn expect(&self, mut f: impl FnMut(f64) -> f64) -> f64 {
        self.locations.iter().zip(&self.weights).map(|(&x, &w)| w * f(x)).sum()
    }

    pub fn mean(&self) -> f64 {
        self.expect(|x| x)
    }

    /// μ((-∞, x]).
    pub fn cdf(&self, x: f64) -> f64 {
        let k = self.locations.partition_point(|&l| l <= x);
        if k == 0 {
            0.0
        } else {
            self.cumulative[k - 1]
        }
    }

    /// Inverse distribution function: the smallest atom whose cumulative weight exceeds `u`.
    pub fn quantile(&self, u: f64) -> f64 {
        let k = self.cumulative.partition_point(|&c| c <= u);
        self.locations[k.min(self.locations.len() - 1)]
    }

    /// Image under x ↦ -x.
    pub fn reflect(&self) -> Self {
        let atoms = self.locations.iter().zip(&self.weights).map(|(&x, &w)| (-x, w)).collect();
        Self::from_unnormalized(atoms, self.support_bound, self.label.clone()).expect("reflection keeps mass")
    }

    /// Image under x ↦ x + s.
    pub fn shift(&self, s: f64) -> Self {
        let atoms = self.locations.iter().zip(&self.weights).map(|(&x, &w)| (x + s, w)).collect();
        Self::from_unnormalized(atoms, self.support_bound + s.abs(), self.label.clone()).expect("shift keeps mass")
    }

    /// Writes the `support_bound` / `atom` text format.
    pub fn to_text(&self) -> String {
        let mut out = String::new();
        if !self.label.is_empty() {
            let _ = writeln!(out, "# {}", self.label);
        }
        let _ = writeln!(out, "support_bound {}", fmt_sig(self.support_bound));
        for (x, w) in self.locations.iter().zip(&self.weights) {
            let _ = writeln!(out, "atom {} {}", fmt_sig(*x), fmt_sig(*w));
        }
        out
    }

    /// Parses the text format written by [`to_text`](Self::to_text).
    pub fn from_text(text: &str) -> Result<Self> {
        let mut c = None;
        let mut locations = Vec::new();
        let mut weights = Vec::new();
        let mut label = String::new();
        for (i, raw) in text.lines().enumerate() {
            let line = raw.trim();
            if let Some(rest) = line.strip_prefix('#') {
                if label.is_empty() {
                    label = rest.trim().to_string();
                }
                continue;
            }
            if line.is_empty() {
                continue;
            }
            let parse_err = |message: String| Error::Parse { line: i + 1, message };
            let fields: Vec<&str> = line.split_whitespace().collect();
            let num = |s: &str| s.parse::<f64>().map_err(|e| parse_err(format!("bad number {s:?}: {e}")));
            match fields.as_slice() {
                ["support_bound", v] => c = Some(num(v)?),
                ["atom", x, w] => {
                    locations.push(num(x)?);
                    weights.push(num(w)?);
                }
                _ => return Err(parse_err(format!("unrecognized line {line:?}"))),
            }
        }
        let c = c.ok_or_else(|| Error::Parse { line: 0, message: "missing support_bound line".into() })?;
        Ok(Self::make_atomic(&locations, &weights, c)?.with_label(label))
    }

    pub fn read(path: &Path) -> Result<Self> {
        Self::from_text(&std::fs::read_to_string(path)?)
    }
}

/// Discretizes a density given by samples `(x, value)` onto cells of width
/// `step` covering `[-C, C]`.
///
/// The density between samples is linearly interpolated and vanishes outside
/// the sampled range; each cell's trapezoid mass becomes an atom at the cell
/// center, so no unit of mass moves by more than `step / 2`.
pub fn discretize_density(samples: &[(f64, f64)], c: f64, step: f64) -> Result<ProbabilityMeasure> {
    if samples.is_empty() {
        return Err(Error::InvalidMeasure("no density samples".into()));
    }
    if samples.iter().any(|s| !(s.1 >= 0.0) || !s.0.is_finite()) {
        return Err(Error::InvalidMeasure("density samples must be finite and nonnegative".into()));
    }
    let mut pts = samples.to_vec();
    pts.sort_by(|a, b| a.0.total_cmp(&b.0));
    let density = |x: f64| -> f64 {
        let k = pts.partition_point(|p| p.0 < x);
        if k < pts.len() && pts[k].0 == x {
            return pts[k].1;
        }
        if k == 0 || k == pts.len() {
            return 0.0;
        }
        let (x0, y0) = pts[k - 1];
        let (x1, y1) = pts[k];
        y0 + (y1 - y0) * (x - x0) / (x1 - x0)
    };
    // trapezoid over the cell ends and every sample inside the cell, which is
    // the exact mass of the interpolant
    discretize_with(
        |lo, hi| {
            let first = pts.partition_point(|p| p.0 <= lo);
            let last = pts.partition_point(|p| p.0 < hi);
            let mut knots = vec![(lo, density(lo))];
            knots.extend_from_slice(&pts[first..last]);
            knots.push((hi, density(hi)));
            knots.windows(2).map(|w| 0.5 * (w[1].0 - w[0].0) * (w[0].1 + w[1].1)).sum()
        },
        c,
        step,
    )
}

/// Same as [`discretize_density`] for a density given as a function.
pub fn discretize_fn(density: impl Fn(f64) -> f64, c: f64, step: f64) -> Result<ProbabilityMeasure> {
    discretize_with(|lo, hi| 0.5 * (hi - lo) * (density(lo) + density(hi)), c, step)
}

fn discretize_with(cell_mass: impl Fn(f64, f64) -> f64, c: f64, step: f64) -> Result<ProbabilityMeasure> {
    if !(step > 0.0) {
        return invalid(format!("step {step} must be positive"));
    }
    if !(c > 0.0) {
        return invalid(format!("support bound {c} must be positive"));
    }
    let cells = ((2.0 * c / step) - 1e-9).ceil().max(1.0) as usize;
    let mut atoms = Vec::with_capacity(cells);
    let mut total = 0.0;
    for k in 0..cells {
        let lo = -c + k as f64 * step;
        let hi = (lo + step).min(c);
        let mass = cell_mass(lo, hi);
        if !(mass >= 0.0) || !mass.is_finite() {
            return Err(Error::InvalidMeasure(format!("density gives invalid mass {mass} on [{lo}, {hi}]")));
        }
        total += mass;
        if mass > 0.0 {
            atoms.push((0.5 * (lo + hi), mass));
        }
    }
    if !(total > 0.0) {
        return Err(Error::InvalidMeasure("density is identically zero".into()));
    }
    ProbabilityMeasure::from_unnormalized(atoms, c, String::new())
}

fn kernel_cell_masses(kernel: Kernel) -> Vec<f64> {
    let h = 1.0 / KERNEL_CELLS as f64;
    let masses: Vec<f64> = (0..KERNEL_CELLS)
        .map(|j| {
            let lo = -0.5 + j as f64 * h;
            let hi = lo + h;
            let mid = 0.5 * (lo + hi);
            match kernel {
                Kernel::Box => h,
                // linear on each cell since 0 is a cell boundary
                Kernel::Triangle => h * (1.0 - 2.0 * mid.abs()),
                Kernel::SmoothBump => {
                    let bump = |s: f64| {
                        let t = 1.0 - 4.0 * s * s;
                        if t <= 0.0 {
                            0.0
                        } else {
                            (-1.0 / t).exp()
                        }
                    };
                    quad::adaptive(bump, lo, hi, 1e-16, 1e-13).value
                }
            }
        })
        .collect();
    let total: f64 = masses.iter().sum();
    masses.into_iter().map(|m| m / total).collect()
}

/// Replaces every atom by the kernel of width `eta` centered at it, discretized
/// on `eta / 32` cells. The support bound grows to `C + eta`.
pub fn mollify(m: &ProbabilityMeasure, kernel: Kernel, eta: f64) -> Result<ProbabilityMeasure> {
    if !(eta > 0.0) || !eta.is_finite() {
        return invalid(format!("mollifier width {eta} must be positive"));
    }
    let cells = kernel_cell_masses(kernel);
    let h = eta / KERNEL_CELLS as f64;
    let mut atoms = Vec::with_capacity(m.len() * KERNEL_CELLS);
    for (&x, &w) in m.locations.iter().zip(&m.weights) {
        for (j, &cm) in cells.iter().enumerate() {
            if cm > 0.0 {
                atoms.push((x - 0.5 * eta + (j as f64 + 0.5) * h, w * cm));
            }
        }
    }
    let label = format!("{} mollified({kernel:?}, {eta})", m.label);
    ProbabilityMeasure::from_unnormalized(atoms, m.support_bound + eta, label)
}

/// The law of λX for X ~ m.
pub fn rescale(m: &ProbabilityMeasure, lambda: f64) -> Result<ProbabilityMeasure> {
    if !(lambda >= 0.0) || !lambda.is_finite() {
        return invalid(format!("scale {lambda} must be nonnegative"));
    }
    let atoms = m.locations.iter().zip(&m.weights).map(|(&x, &w)| (lambda * x, w)).collect();
    ProbabilityMeasure::from_unnormalized(atoms, lambda * m.support_bound, m.label.clone())
}

/// Bounded-Lipschitz distance sup{|μ(f) - ν(f)| : ‖f‖_∞ + L_f ≤ 1}.
///
/// Solved exactly as a linear program on the union of atom locations; on the
/// line the Lipschitz condition between adjacent points implies it for all pairs.
pub fn dw(mu: &ProbabilityMeasure, nu: &ProbabilityMeasure) -> f64 {
    let mut merged: Vec<(f64, f64)> = mu
        .locations
        .iter()
        .zip(&mu.weights)
        .map(|(&x, &w)| (x, w))
        .chain(nu.locations.iter().zip(&nu.weights).map(|(&x, &w)| (x, -w)))
        .collect();
    merged.sort_by(|a, b| a.0.total_cmp(&b.0));
    let mut xs: Vec<f64> = Vec::new();
    let mut g: Vec<f64> = Vec::new();
    for (x, w) in merged {
        match xs.last() {
            Some(&last) if x - last <= MERGE_TOL => *g.last_mut().unwrap() += w,
            _ => {
                xs.push(x);
                g.push(w);
            }
        }
    }
    let m = xs.len();
    if g.iter().all(|v| v.abs() <= 1e-15) {
        return 0.0;
    }
    // variables: u_i = f_i + M in [0, 2M], then M, then L
    let nv = m + 2;
    let (iv_m, iv_l) = (m, m + 1);
    let mut a = Vec::with_capacity(3 * m);
    let mut b = Vec::with_capacity(3 * m);
    for i in 0..m {
        let mut row = vec![0.0; nv];
        row[i] = 1.0;
        row[iv_m] = -2.0;
        a.push(row);
        b.push(0.0);
    }
    for i in 0..m.saturating_sub(1) {
        let gap = xs[i + 1] - xs[i];
        for sign in [1.0, -1.0] {
            let mut row = vec![0.0; nv];
            row[i + 1] = sign;
            row[i] = -sign;
            row[iv_l] = -gap;
            a.push(row);
            b.push(0.0);
        }
    }
    let mut row = vec![0.0; nv];
    row[iv_m] = 1.0;
    row[iv_l] = 1.0;
    a.push(row);
    b.push(1.0);
    let mut c = vec![0.0; nv];
    c[..m].copy_from_slice(&g);
    let (value, _) = lp::maximize(&a, &b, &c).expect("bounded-Lipschitz LP is feasible and bounded");
    value.clamp(0.0, 2.0)
}

/// Analytic upper bounds on d_w for the standard families of approximating measures.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub enum MeasurePairDescriptor {
    /// Atoms of a measure supported in [-C, C] replaced by kernels of width η.
    MollifiedAtoms { support_bound: f64, eta: f64 },
    /// Two densities at L¹ distance `l1`.
    AbsolutelyContinuous { l1: f64 },
    /// Atoms (λ_n, w_n) moved to (λ'_n, w'_n).
    PointFamily { locations: Vec<f64>, weights: Vec<f64>, moved_locations: Vec<f64>, moved_weights: Vec<f64> },
    /// Laws of λX and λ₀X for X supported in [-C, C].
    DisorderRescale { support_bound: f64, lambda: f64, lambda0: f64 },
}

impl MeasurePairDescriptor {
    fn validate(&self) -> Result<()> {
        let nonneg = |name: &str, v: f64| {
            if v >= 0.0 && v.is_finite() {
                Ok(())
            } else {
                invalid(format!("{name} = {v} must be finite and nonnegative"))
            }
        };
        match self {
            Self::MollifiedAtoms { support_bound, eta } => {
                nonneg("support_bound", *support_bound)?;
                nonneg("eta", *eta)
            }
            Self::AbsolutelyContinuous { l1 } => nonneg("l1", *l1),
            Self::PointFamily { locations, weights, moved_locations, moved_weights } => {
                let n = locations.len();
                if n == 0 || weights.len() != n || moved_locations.len() != n || moved_weights.len() != n {
                    return invalid("point family needs four lists of equal nonzero length");
                }
                for &w in weights.iter().chain(moved_weights) {
                    nonneg("weight", w)?;
                }
                Ok(())
            }
            Self::DisorderRescale { support_bound, lambda, lambda0 } => {
                nonneg("support_bound", *support_bound)?;
                nonneg("lambda", *lambda)?;
                nonneg("lambda0", *lambda0)
            }
        }
    }
}

/// Upper bound on d_w for the pair described by `desc`.
pub fn dw_upper_bound(desc: &MeasurePairDescriptor) -> Result<f64> {
    desc.validate()?;
    Ok(match desc {
        MeasurePairDescriptor::MollifiedAtoms { support_bound, eta } => support_bound.max(1.0) * eta,
        MeasurePairDescriptor::AbsolutelyContinuous { l1 } => *l1,
        MeasurePairDescriptor::PointFamily { locations, weights, moved_locations, moved_weights } => {
            let scale = locations.iter().fold(1.0f64, |acc, x| acc.max(x.abs()));
            let eta: f64 = (0..locations.len())
                .map(|n| (moved_weights[n] - weights[n]).abs() + (moved_locations[n] - locations[n]).abs())
                .sum();
            scale * eta
        }
        MeasurePairDescriptor::DisorderRescale { support_bound, lambda, lambda0 } => support_bound * (lambda - lambda0).abs(),
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn grid_dw_two_points(a: f64) -> f64 {
        // inner maximum for δ₀ vs δ_a at fixed (M, L) is min(2M, L a)
        let steps = 1000;
        let mut best: f64 = 0.0;
        for i in 0..=steps {
            let m = i as f64 / steps as f64;
            let l = 1.0 - m;
            best = best.max((2.0 * m).min(l * a));
        }
        best
    }

    #[test]
    fn canonical_form() {
        let m = ProbabilityMeasure::make_atomic(&[1.0, -1.0], &[0.5, 0.5], 1.0).unwrap();
        assert_eq!(m.locations(), &[-1.0, 1.0]);
        let m = ProbabilityMeasure::make_atomic(&[0.0, 0.0], &[0.3, 0.7], 1.0).unwrap();
        assert_eq!(m.len(), 1);
        assert_eq!(m.weights(), &[1.0]);
    }

    #[test]
    fn construction_errors() {
        assert!(ProbabilityMeasure::make_atomic(&[], &[], 1.0).is_err());
        assert!(ProbabilityMeasure::make_atomic(&[2.0], &[1.0], 1.0).is_err());
        assert!(ProbabilityMeasure::make_atomic(&[0.0, 0.5], &[1.5, -0.5], 1.0).is_err());
        assert!(ProbabilityMeasure::make_atomic(&[0.0, 0.5], &[0.5, 0.4], 1.0).is_err());
    }

    #[test]
    fn two_point_distance_matches_grid_search() {
        for a in [0.25, 1.0, 1.9] {
            let d = dw(&ProbabilityMeasure::delta(0.0), &ProbabilityMeasure::make_atomic(&[a], &[1.0], 2.0).unwrap());
            assert!((d - 2.0 * a / (2.0 + a)).abs() < 1e-9);
            assert!((d - grid_dw_two_points(a)).abs() < 2e-3);
        }
    }

    #[test]
    fn bernoulli_against_delta() {
        let b = ProbabilityMeasure::bernoulli(1.0, 0.5).unwrap();
        let d = dw(&b, &ProbabilityMeasure::delta(0.0));
        assert!((d - 2.0 / 3.0).abs() < 1e-9, "{d}");
    }

    #[test]
    fn discretize_uniform() {
        let m = discretize_density(&[(-1.0, 0.5), (1.0, 0.5)], 1.0, 0.5).unwrap();
        assert_eq!(m.locations(), &[-0.75, -0.25, 0.25, 0.75]);
        for &w in m.weights() {
            assert!((w - 0.25).abs() < 1e-15);
        }
    }

    #[test]
    fn discretize_truncated_cauchy() {
        let samples: Vec<(f64, f64)> =
            (0..=10000).map(|i| -5.0 + i as f64 * 1e-3).map(|x| (x, 1.0 / (std::f64::consts::PI * (1.0 + x * x)))).collect();
        let m = discretize_density(&samples, 5.0, 0.01).unwrap();
        assert!((m.weights().iter().sum::<f64>() - 1.0).abs() < 1e-12);
        // mass below 0 against the arctan distribution function, conditioned on [-5, 5]
        let below: f64 = m.locations().iter().zip(m.weights()).filter(|(x, _)| **x < 0.0).map(|(_, w)| w).sum();
        assert!((below - 0.5).abs() < 1e-3);
        let cond = |x: f64| (x.atan() + 5f64.atan()) / (2.0 * 5f64.atan());
        assert!((m.cdf(1.0) - cond(1.0)).abs() < 1e-2);
    }

    #[test]
    fn spike_density_gives_dominant_atom() {
        let m = discretize_density(&[(0.2, 0.0), (0.25, 100.0), (0.3, 0.0)], 1.0, 0.5).unwrap();
        assert!(m.weights().iter().cloned().fold(0.0, f64::max) > 0.99);
    }

    #[test]
    fn mollified_delta_is_uniform() {
        let m = mollify(&ProbabilityMeasure::delta(0.0), Kernel::Box, 0.2).unwrap();
        assert_eq!(m.len(), 32);
        assert!(m.locations()[0] > -0.1 && *m.locations().last().unwrap() < 0.1);
        for &w in m.weights() {
            assert!((w - 1.0 / 32.0).abs() < 1e-15);
        }
        let d = dw(&m, &ProbabilityMeasure::delta(0.0));
        assert!(d <= 0.1, "{d}");
    }

    #[test]
    fn mollified_bernoulli_converges() {
        let b = ProbabilityMeasure::bernoulli(1.0, 0.5).unwrap();
        let mut prev = f64::INFINITY;
        for eta in [0.5, 0.1, 0.01, 0.001] {
            let d = dw(&mollify(&b, Kernel::Triangle, eta).unwrap(), &b);
            assert!(d <= eta && d <= prev + 1e-9);
            prev = d;
        }
        assert!(prev < 1e-3);
    }

    #[test]
    fn rescale_cases() {
        let b = ProbabilityMeasure::bernoulli(1.0, 0.5).unwrap();
        let z = rescale(&b, 0.0).unwrap();
        assert_eq!(z.locations(), &[0.0]);
        let s = rescale(&b, 0.3).unwrap();
        assert_eq!(s.locations(), &[-0.3, 0.3]);
        assert!(dw(&s, &ProbabilityMeasure::delta(0.0)) <= 0.3);
    }

    #[test]
    fn descriptor_bounds() {
        let d = MeasurePairDescriptor::MollifiedAtoms { support_bound: 1.0, eta: 0.01 };
        assert_eq!(dw_upper_bound(&d).unwrap(), 0.01);
        let d = MeasurePairDescriptor::AbsolutelyContinuous { l1: 0.2 };
        assert_eq!(dw_upper_bound(&d).unwrap(), 0.2);
        let bad = MeasurePairDescriptor::AbsolutelyContinuous { l1: -0.2 };
        assert!(dw_upper_bound(&bad).is_err());
    }

    #[test]
    fn text_round_trip() {
        let m = mollify(&ProbabilityMeasure::bernoulli(1.0, 0.3).unwrap(), Kernel::SmoothBump, 0.1)
            .unwrap()
            .with_label("smooth bernoulli");
        let back = ProbabilityMeasure::from_text(&m.to_text()).unwrap();
        assert_eq!(back.locations(), m.locations());
        for (a, b) in back.weights().iter().zip(m.weights()) {
            assert!((a - b).abs() < 1e-15);
        }
        assert_eq!(back.label(), "smooth bernoulli");
        assert!(ProbabilityMeasure::from_text("atom 0 1\n").is_err());
    }
}
