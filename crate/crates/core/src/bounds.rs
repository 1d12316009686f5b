//! Explicit constants of the continuity theorems and a harness that turns
//! each quantitative bound into a measured inequality.

use std::collections::BTreeMap;
use std::f64::consts::{E, PI};

use num_complex::Complex64;
use rand::Rng;
use serde::{Deserialize, Serialize};
use serde_json::{json, Value};
use sha2::{Digest, Sha256};

use crate::dos::{
    bernstein_constant, dos_functional_differences, dos_functionals, dos_histogram_on, finite_rank_deviation, free_dosf,
    free_ids_1d, ids, ids_difference, kesten_constant, kesten_ids, lloyd_dosf, DosEstimate, TestFunction,
};
use crate::error::{invalid, Error, Result};
use crate::lattice::{assemble_box, dependence_radius, draw_value, sample_disorder, ModelSpec, Region};
use crate::lyapunov::lyapunov_difference_1d;
use crate::measures::{discretize_fn, dw, mollify, rescale, Kernel, ProbabilityMeasure};
use crate::quad::adaptive;
use crate::rng::{keyed_rng, Domain};
use crate::util::linspace;

/// The measured inequalities.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum BoundId {
    DosmMain,
    IdsMain,
    WeakDosm,
    WeakIds,
    PosCoupling,
    LyapComplex,
    LyapReal,
    Dosf,
    Lloyd,
    BetheDosm,
    BetheWeakIds,
    FiniteRank,
    CountingExact,
}

impl BoundId {
    pub const ALL: [BoundId; 13] = [
        BoundId::DosmMain,
        BoundId::IdsMain,
        BoundId::WeakDosm,
        BoundId::WeakIds,
        BoundId::PosCoupling,
        BoundId::LyapComplex,
        BoundId::LyapReal,
        BoundId::Dosf,
        BoundId::Lloyd,
        BoundId::BetheDosm,
        BoundId::BetheWeakIds,
        BoundId::FiniteRank,
        BoundId::CountingExact,
    ];

    pub fn as_str(self) -> &'static str {
        match self {
            BoundId::DosmMain => "dosm-main",
            BoundId::IdsMain => "ids-main",
            BoundId::WeakDosm => "weak-dosm",
            BoundId::WeakIds => "weak-ids",
            BoundId::PosCoupling => "pos-coupling",
            BoundId::LyapComplex => "lyap-complex",
            BoundId::LyapReal => "lyap-real",
            BoundId::Dosf => "dosf",
            BoundId::Lloyd => "lloyd",
            BoundId::BetheDosm => "bethe-dosm",
            BoundId::BetheWeakIds => "bethe-weak-ids",
            BoundId::FiniteRank => "finite-rank",
            BoundId::CountingExact => "counting-exact",
        }
    }
}

impl std::str::FromStr for BoundId {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        BoundId::ALL
            .into_iter()
            .find(|b| b.as_str() == s)
            .ok_or_else(|| Error::InvalidArgument(format!("unknown bound id {s:?}")))
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Verdict {
    Pass,
    Fail,
    /// Neither side of the inequality is resolved by the error budget.
    Inconclusive,
    NotApplicable,
}

/// Outcome of one verification.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct BoundReport {
    pub bound_id: BoundId,
    pub parameters: BTreeMap<String, Value>,
    pub lhs: f64,
    /// Error items; their sum is the total error on `lhs`.
    pub lhs_error_breakdown: BTreeMap<String, f64>,
    pub rhs: f64,
    /// rhs - (lhs + total error).
    pub margin: f64,
    pub verdict: Verdict,
    pub threshold_note: String,
    pub seed: u64,
    pub config_digest: String,
}

impl BoundReport {
    pub fn total_error(&self) -> f64 {
        self.lhs_error_breakdown.values().fold(0.0, |a, b| a + b)
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("reports serialize")
    }
}

fn holder_exponent(d: usize) -> f64 {
    1.0 / (1.0 + 2.0 * d as f64)
}

fn xi0(d: usize) -> f64 {
    1.0 / (1.0 + 1.0 / (2.0 * d as f64))
}

/// γ = 4 max{4 c_b r, N} with r = 2d + C.
pub fn gamma(d: usize, n: usize, c: f64) -> f64 {
    4.0 * (4.0 * bernstein_constant() * (2.0 * d as f64 + c)).max(n as f64)
}

/// Largest η with η^{ξ₀} ≤ 2^{-2d}.
pub fn alpha0_threshold(d: usize) -> f64 {
    2f64.powf(-2.0 * d as f64 / xi0(d))
}

/// Hölder constant c₀ of the free IDS with exponent 1/2, as the supremum of
/// (N₀(E+ε) - N₀(E))/√ε over a grid in E and ε.
pub fn free_ids_holder_constant_1d() -> f64 {
    let mut best = 0.0f64;
    for e in linspace(-2.0, 2.0, 401) {
        for j in 0..=240 {
            let eps = 4.0 * 10f64.powf(-6.0 * j as f64 / 240.0);
            best = best.max((free_ids_1d(e + eps) - free_ids_1d(e)) / eps.sqrt());
        }
    }
    best
}

/// Every constant computable from (d, N, C) and the optional inputs in
/// `extra`: `C_I`, `c0`, `beta`, `D`, `E`, `D1`, `eps_decay`, `k`.
pub fn constants(d: usize, n: usize, c: f64, extra: &BTreeMap<String, f64>) -> Result<BTreeMap<String, f64>> {
    if d == 0 || n == 0 {
        return invalid("d and N must be at least 1");
    }
    if !(c > 0.0) {
        return invalid("C must be positive");
    }
    let df = d as f64;
    let mut out = BTreeMap::new();
    let mut put = |k: &str, v: f64| {
        out.insert(k.to_string(), v);
    };
    let cb = bernstein_constant();
    let r = 2.0 * df + c;
    let g = gamma(d, n, c);
    put("c_b", cb);
    put("r", r);
    put("gamma", g);
    put("holder_exponent", holder_exponent(d));
    put("xi0", xi0(d));
    put("alpha0_eta_threshold", alpha0_threshold(d));
    put("lambda0", 0.5f64.powf(1.0 + 2.0 * df));
    let delta = if d == 1 { 0.5 } else { 1.0 };
    put("delta", delta);
    put("weak_ids_exponent", delta / (1.0 + delta) * holder_exponent(d));
    if let Some(ci) = extra.get("C_I") {
        put("C2", (3.0 * g).max(*ci) * 2.0 * (1.0 + E) * (1.0 + 2.0 * df));
    }
    let c0 = extra.get("c0").copied().or(if d == 1 { Some(free_ids_holder_constant_1d()) } else { None });
    if let Some(c0) = c0 {
        put("c0", c0);
        put("c3", 2.0 * (3.0 * g).max(c0));
    }
    if let (Some(&beta), Some(&dd)) = (extra.get("beta"), extra.get("D")) {
        if !(beta > 0.0 && beta <= 1.0) {
            return invalid(format!("beta = {beta} must lie in (0, 1]"));
        }
        let s = (PI * beta / 2.0).sin();
        put("C_L", 2.0 * (2.0 * g).max(PI * dd / s));
        put("zeta0", 1.0 / (3.0 * (1.0 + beta)));
        put("lyap_real_exponent", beta / (3.0 * (1.0 + beta)));
        put("le_quant1_factor", PI / (2.0 * s));
    }
    if let Some(&e) = extra.get("E") {
        let de = (e + r).abs().max((e - r).abs());
        put("delta_E", de);
        put("eps0", 1.0 / (de * de + 1.0).sqrt());
        if let Some(&beta) = extra.get("beta") {
            let zeta0 = 1.0 / (3.0 * (1.0 + beta));
            put("alpha_L_eta_threshold", (1.0 / (de * de + 1.0)).powf(1.0 / zeta0).min(alpha0_threshold(d)));
        }
    }
    if let (Some(&d1), Some(&eps)) = (extra.get("D1"), extra.get("eps_decay")) {
        if !(eps > 0.0) {
            return invalid("eps_decay must be positive");
        }
        put("dosf_constant", 4.0 * (2.0 / PI).sqrt() * g.max(d1 / eps));
        put("dosf_exponent", eps / (2.0 + eps) * holder_exponent(d));
    }
    if d >= 3 {
        put("D_L", lloyd_constant(d)?);
        put("lloyd_exponent", (df - 2.0) / (df + 2.0));
    }
    if let Some(&k) = extra.get("k") {
        if !(k >= 3.0 && k.fract() == 0.0) {
            return invalid(format!("coordination number k = {k} must be an integer ≥ 3"));
        }
        let ku = k as usize;
        let xb = 2.0 * E / (1.0 + 2.0 * E);
        let lk = k.ln();
        let lambda_b = (-3.0 * lk / xb).exp();
        let r_b = 2.0 * (k - 1.0).sqrt() + c;
        let gamma_b = 2.0 * (2.0 * r_b * cb * lk.sqrt() + 1.0);
        let gamma_tilde = 2.0 * (2.0 * (2.0 * k.sqrt() + lambda_b) * cb * lk.sqrt() + 1.0);
        let c_bk = kesten_constant(ku);
        put("xi0_bethe", xb);
        put("lambda_B", lambda_b);
        put("alpha_B_eta_threshold", lambda_b);
        put("r_B", r_b);
        put("gamma_B", gamma_b);
        put("gamma_tilde_B", gamma_tilde);
        put("c_B", c_bk);
        put("c_tilde_B", gamma_tilde + c_bk);
    }
    Ok(out)
}

/// D_L = 1/((d-2) 2^{d-9/2} π^{(d+1)/2}) for d ≥ 3.
pub fn lloyd_constant(d: usize) -> Result<f64> {
    if d <= 2 {
        return invalid(format!("D_L needs d ≥ 3, got d = {d}"));
    }
    let df = d as f64;
    Ok(1.0 / ((df - 2.0) * 2f64.powf(df - 4.5) * PI.powf((df + 1.0) / 2.0)))
}

/// One named constant; errors when its inputs are missing.
pub fn constant(name: &str, d: usize, n: usize, c: f64, extra: &BTreeMap<String, f64>) -> Result<f64> {
    if name == "D_L" {
        return lloyd_constant(d);
    }
    let all = constants(d, n, c, extra)?;
    all.get(name).copied().ok_or_else(|| {
        Error::InvalidArgument(format!("constant {name:?} is unknown or needs inputs that were not supplied"))
    })
}

/// Deterministic bank of Lipschitz functions on [-r, r]: tents |x - a|,
/// ramps bracketing indicators, cos/sin(tx)/√(2π) and random
/// piecewise-linear functions, in rotation.
pub fn test_function_bank(r: f64, count: usize, seed: u64) -> Vec<TestFunction> {
    (0..count)
        .map(|i| {
            let mut rng = keyed_rng(Domain::Bank, seed, i as u64);
            let f = match i % 4 {
                0 => TestFunction::abs_tent(rng.gen_range(-r..r), r),
                1 => {
                    let e = rng.gen_range(-0.75 * r..0.75 * r);
                    let a = rng.gen_range(0.25..1.0);
                    let f = if (i / 4) % 2 == 0 { TestFunction::ramp_below(e, a, r) } else { TestFunction::ramp_above(e, a, r) };
                    f.expect("ramp width is positive")
                }
                2 => {
                    let t = rng.gen_range(0.5..3.0);
                    if (i / 4) % 2 == 0 {
                        TestFunction::cos(t, r)
                    } else {
                        TestFunction::sin(t, r)
                    }
                }
                _ => {
                    let mut xs: Vec<f64> = (0..5).map(|_| rng.gen_range(-r..r)).collect();
                    xs.sort_by(f64::total_cmp);
                    xs.dedup();
                    let knots = xs.into_iter().map(|x| (x, rng.gen_range(-1.0..1.0))).collect();
                    TestFunction::piecewise_linear(knots, r, format!("pl{i}")).expect("sorted knots")
                }
            };
            f
        })
        .collect()
}

/// Scenario and estimator settings of one verification.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct VerifyConfig {
    pub bound: BoundId,
    pub d: usize,
    pub k_block: usize,
    /// Coordination number for Bethe bounds.
    pub k: usize,
    /// Reference single-site law ν (or μ for coupling families).
    pub measure: ProbabilityMeasure,
    /// Triangle-mollification widths defining ν_α.
    pub etas: Vec<f64>,
    pub lambdas: Vec<f64>,
    /// Reference coupling for pos-coupling.
    pub lambda_ref: f64,
    pub energies: Vec<f64>,
    pub eps: Vec<f64>,
    pub bank_size: usize,
    pub degree: usize,
    pub samples: usize,
    pub side: usize,
    pub bins: usize,
    pub steps: usize,
    pub trials: usize,
    pub seed: u64,
    /// Multiple of the standard error counted as sampling error.
    pub z: f64,
    /// Hölder data (β, D) of the IDS at E; D defaults to a pilot estimate.
    pub beta: f64,
    pub holder_d: Option<f64>,
    /// Fourier decay data (D₁, ε); default to the free Laplacian's for d ≥ 3.
    pub d1: Option<f64>,
    pub eps_decay: Option<f64>,
}

impl VerifyConfig {
    /// Desk-scale defaults for `bound`.
    pub fn new(bound: BoundId, seed: u64) -> Self {
        let bernoulli = ProbabilityMeasure::bernoulli(1.0, 0.5).expect("valid weight").with_label("bernoulli");
        let mut c = Self {
            bound,
            d: 1,
            k_block: 1,
            k: 3,
            measure: bernoulli,
            etas: vec![1e-2, 1e-3, 1e-4],
            lambdas: Vec::new(),
            lambda_ref: 1.0,
            energies: vec![-1.5, -0.5, 0.0, 0.5, 1.5],
            eps: Vec::new(),
            bank_size: 12,
            degree: 400,
            samples: 2000,
            side: 1024,
            bins: 512,
            steps: 100_000,
            trials: 200,
            seed,
            z: 3.0,
            beta: 1.0,
            holder_d: None,
            d1: None,
            eps_decay: None,
        };
        match bound {
            BoundId::DosmMain | BoundId::IdsMain => {
                c.samples = if bound == BoundId::DosmMain { 2000 } else { 64 };
            }
            BoundId::WeakDosm => {
                c.lambdas = (4..=10).map(|j| 0.5f64.powi(j)).collect();
            }
            BoundId::WeakIds => {
                c.lambdas = (4..=10).map(|j| 0.5f64.powi(j)).collect();
                c.energies = vec![0.0, 1.0, 1.9];
                c.samples = 64;
            }
            BoundId::PosCoupling => {
                c.lambdas = vec![1.01, 1.001, 1.0001];
            }
            BoundId::LyapComplex => {
                c.etas = vec![1e-2, 1e-3];
                c.energies = vec![0.0, 0.5, 1.5];
                c.eps = vec![0.05, 0.1, 0.2];
            }
            BoundId::LyapReal => {
                c.etas = vec![1e-7, 1e-8];
                c.energies = vec![0.0, 0.5];
                c.samples = 32;
            }
            BoundId::Dosf => {
                c.d = 3;
                c.measure = discretize_fn(|_| 0.5, 1.0, 1.0 / 64.0).expect("uniform density").with_label("uniform");
                c.lambdas = vec![0.005, 0.002];
                c.side = 10;
                c.samples = 8;
                c.bins = 24;
            }
            BoundId::Lloyd => {
                c.d = 3;
                c.lambdas = vec![0.05, 0.1, 0.2];
            }
            BoundId::BetheDosm => {
                c.etas = vec![1e-2, 1e-3];
                c.degree = 20;
                c.samples = 1000;
            }
            BoundId::BetheWeakIds => {
                c.lambdas = vec![0.01, 0.005];
                c.energies = vec![0.0, 1.0, 2.5];
                c.degree = 24;
                c.samples = 300;
            }
            BoundId::FiniteRank => {}
            BoundId::CountingExact => {
                c.trials = 50;
            }
        }
        c
    }

    /// SHA-256 of the canonical JSON form.
    pub fn digest(&self) -> String {
        let text = serde_json::to_string(self).expect("config serializes");
        let mut h = Sha256::new();
        h.update(text.as_bytes());
        h.finalize().iter().map(|b| format!("{b:02x}")).collect()
    }
}

/// One measured instance of a bound.
struct Case {
    lhs: f64,
    errors: BTreeMap<String, f64>,
    rhs: f64,
    applicable: bool,
    params: BTreeMap<String, Value>,
}

impl Case {
    fn new(lhs: f64, rhs: f64) -> Self {
        Self { lhs, errors: BTreeMap::new(), rhs, applicable: true, params: BTreeMap::new() }
    }

    fn err(mut self, name: &str, v: f64) -> Self {
        self.errors.insert(name.to_string(), v);
        self
    }

    fn param(mut self, name: &str, v: impl Into<Value>) -> Self {
        self.params.insert(name.to_string(), v.into());
        self
    }

    fn skip_unless(mut self, ok: bool) -> Self {
        self.applicable = ok;
        self
    }

    fn total(&self) -> f64 {
        self.errors.values().fold(0.0, |a, b| a + b)
    }

    fn margin(&self) -> f64 {
        self.rhs - (self.lhs + self.total())
    }

    fn verdict(&self) -> Verdict {
        if !self.applicable {
            Verdict::NotApplicable
        } else if self.margin() >= 0.0 {
            Verdict::Pass
        } else if self.lhs - self.total() > self.rhs {
            Verdict::Fail
        } else {
            Verdict::Inconclusive
        }
    }
}

fn report(cfg: &VerifyConfig, mut params: BTreeMap<String, Value>, cases: Vec<Case>, threshold_rule: &str) -> Result<BoundReport> {
    if cases.is_empty() {
        return invalid("the scenario produced no cases");
    }
    let applicable: Vec<&Case> = cases.iter().filter(|c| c.applicable).collect();
    let skipped = cases.len() - applicable.len();
    let worst = applicable
        .iter()
        .min_by(|a, b| a.margin().total_cmp(&b.margin()))
        .copied()
        .unwrap_or(&cases[0]);
    let verdicts: Vec<Verdict> = applicable.iter().map(|c| c.verdict()).collect();
    let verdict = if applicable.is_empty() {
        Verdict::NotApplicable
    } else if verdicts.contains(&Verdict::Fail) {
        Verdict::Fail
    } else if verdicts.contains(&Verdict::Inconclusive) {
        Verdict::Inconclusive
    } else {
        Verdict::Pass
    };
    let mut notes = Vec::new();
    if skipped > 0 {
        notes.push(format!("{skipped} of {} cases outside the threshold ({threshold_rule})", cases.len()));
    }
    if verdict == Verdict::Inconclusive {
        notes.push("inconclusive-at-this-budget".to_string());
    }
    params.insert("cases".into(), json!(cases.len()));
    params.insert("cases_applicable".into(), json!(applicable.len()));
    for (k, v) in &worst.params {
        params.insert(format!("worst_{k}"), v.clone());
    }
    Ok(BoundReport {
        bound_id: cfg.bound,
        parameters: params,
        lhs: worst.lhs,
        lhs_error_breakdown: worst.errors.clone(),
        rhs: worst.rhs,
        margin: worst.margin(),
        verdict,
        threshold_note: notes.join("; "),
        seed: cfg.seed,
        config_digest: cfg.digest(),
    })
}

fn base_params(cfg: &VerifyConfig) -> BTreeMap<String, Value> {
    let mut p = BTreeMap::new();
    p.insert("d".into(), json!(cfg.d));
    p.insert("N".into(), json!(cfg.k_block.pow(cfg.d as u32)));
    p.insert("measure".into(), json!(cfg.measure.label()));
    p.insert("z".into(), json!(cfg.z));
    p
}

fn no_extra() -> BTreeMap<String, f64> {
    BTreeMap::new()
}

fn require_d1(cfg: &VerifyConfig) -> Result<()> {
    if cfg.d != 1 {
        return invalid(format!("{} is implemented for d = 1", cfg.bound.as_str()));
    }
    Ok(())
}

/// Bound on |E N_S(E) - N(E)| for periodic chains of length S: the periodic,
/// Dirichlet and Neumann counts differ by rank-two perturbations.
fn ids_finite_volume_1d(side: usize) -> f64 {
    4.0 / side as f64
}

/// Interpolation error of the histogram IDS at e: zero on a bin edge,
/// otherwise the mass of the containing bin.
fn bin_interpolation(est: &DosEstimate, e: f64) -> f64 {
    let edges = &est.edges;
    if e <= edges[0] || e >= edges[edges.len() - 1] {
        return 0.0;
    }
    let b = edges.partition_point(|&x| x <= e) - 1;
    let w = edges[b + 1] - edges[b];
    if (e - edges[b]).abs() <= 1e-9 * w {
        0.0
    } else {
        est.masses[b]
    }
}

/// Cases for |n_b(f) - n_a(f)| ≤ rhs(f) over a bank, one per function.
fn functional_cases(
    cfg: &VerifyConfig,
    a: &ModelSpec,
    b: &ModelSpec,
    bank: &[TestFunction],
    rhs: impl Fn(&TestFunction) -> f64,
) -> Result<Vec<Case>> {
    let diffs = dos_functional_differences(a, b, bank, cfg.degree, cfg.samples, cfg.seed)?;
    Ok(diffs
        .iter()
        .zip(bank)
        .map(|(est, f)| {
            Case::new(est.value.abs(), rhs(f))
                .err("mc_stderr", cfg.z * est.stderr)
                .err("bernstein_bias", est.bias_bound)
                .param("f", f.label.clone())
                .param("f_lip_norm", f.lip_norm())
        })
        .collect())
}

fn mollified(cfg: &VerifyConfig, eta: f64) -> Result<ProbabilityMeasure> {
    mollify(&cfg.measure, Kernel::Triangle, eta)
}

fn verify_dosm_main(cfg: &VerifyConfig) -> Result<BoundReport> {
    let n = cfg.k_block.pow(cfg.d as u32);
    let c = cfg.measure.support_bound() + cfg.etas.iter().cloned().fold(0.0, f64::max);
    let g = gamma(cfg.d, n, c);
    let r = 2.0 * cfg.d as f64 + c;
    let thr = alpha0_threshold(cfg.d);
    let bank = test_function_bank(r, cfg.bank_size, cfg.seed);
    let base = ModelSpec::cube(cfg.d, cfg.k_block, 1.0, cfg.measure.clone())?;
    let mut cases = Vec::new();
    for &eta_w in &cfg.etas {
        let alt = mollified(cfg, eta_w)?;
        let eta = dw(&cfg.measure, &alt);
        let model = base.with_measure(alt);
        let p = holder_exponent(cfg.d);
        let applicable = eta <= thr;
        let found = if applicable {
            functional_cases(cfg, &base, &model, &bank, |f| 2.0 * g * f.lip_norm() * eta.powf(p))?
        } else {
            vec![Case::new(f64::NAN, f64::NAN)]
        };
        for case in found {
            let single = if case.rhs.is_finite() { json!(case.rhs / 2.0) } else { Value::Null };
            cases.push(
                case.param("mollifier_width", eta_w)
                    .param("eta", eta)
                    .param("rhs_single_gamma", single)
                    .skip_unless(applicable),
            );
        }
    }
    let mut params = base_params(cfg);
    params.insert("C".into(), json!(c));
    params.insert("r".into(), json!(r));
    params.insert("gamma".into(), json!(g));
    params.insert("rhs_form".into(), json!("2 gamma ||f||_Lip eta^(1/(1+2d))"));
    params.insert("alpha0_eta_threshold".into(), json!(thr));
    report(cfg, params, cases, "eta^xi0 <= 2^(-2d)")
}

fn verify_ids_main(cfg: &VerifyConfig) -> Result<BoundReport> {
    require_d1(cfg)?;
    let c = cfg.measure.support_bound() + cfg.etas.iter().cloned().fold(0.0, f64::max);
    let r = 2.0 + c;
    let thr = alpha0_threshold(cfg.d);
    let base = ModelSpec::cube(1, cfg.k_block, 1.0, cfg.measure.clone())?;
    let reference = dos_histogram_on(&base, cfg.side, cfg.samples, cfg.bins, cfg.seed, r)?;
    let mut per_eta = Vec::new();
    let mut params = base_params(cfg);
    for &eta_w in &cfg.etas {
        let alt = mollified(cfg, eta_w)?;
        let eta = dw(&cfg.measure, &alt);
        if eta > thr {
            continue;
        }
        let est = dos_histogram_on(&base.with_measure(alt), cfg.side, cfg.samples, cfg.bins, cfg.seed, r)?;
        let mut worst = 0.0f64;
        for &e in &cfg.energies {
            let (diff, se) = ids_difference(&reference, &est, e)?;
            let err = cfg.z * se + 2.0 * ids_finite_volume_1d(cfg.side) + bin_interpolation(&reference, e) + bin_interpolation(&est, e);
            worst = worst.max((diff.abs() + err) * (1.0 / eta).ln());
        }
        params.insert(format!("ratio_bound_eta_{eta_w:e}"), json!(worst));
        per_eta.push(worst);
    }
    let cases = if per_eta.is_empty() {
        vec![Case::new(f64::NAN, 10.0).skip_unless(false)]
    } else {
        let max = per_eta.iter().cloned().fold(0.0, f64::max);
        let min = per_eta.iter().cloned().fold(f64::INFINITY, f64::min);
        let ratio = if min > 0.0 { max / min } else { f64::INFINITY };
        // uniform boundedness: the spread of the scaled bound stays below 10
        vec![Case::new(ratio, 10.0).param("max_scaled", max).param("min_scaled", min)]
    };
    params.insert("property".into(), json!("max/min over eta of sup_E (|N_a(E)-N(E)| + err) log(1/eta) < 10"));
    report(cfg, params, cases, "eta^xi0 <= 2^(-2d)")
}

fn weak_models(cfg: &VerifyConfig) -> Result<ModelSpec> {
    if cfg.measure.support_bound() > 1.0 {
        return invalid("the weak-disorder bounds need a single-site law on [-1, 1]");
    }
    ModelSpec::cube(cfg.d, cfg.k_block, 0.0, cfg.measure.clone())
}

fn verify_weak_dosm(cfg: &VerifyConfig) -> Result<BoundReport> {
    let n = cfg.k_block.pow(cfg.d as u32);
    let lambda0 = 0.5f64.powf(1.0 + 2.0 * cfg.d as f64);
    let g = gamma(cfg.d, n, lambda0);
    let r = 2.0 * cfg.d as f64 + lambda0;
    let bank = test_function_bank(r, cfg.bank_size, cfg.seed);
    let free = weak_models(cfg)?;
    let p = holder_exponent(cfg.d);
    let mut cases = Vec::new();
    for &lambda in &cfg.lambdas {
        let applicable = lambda > 0.0 && lambda <= lambda0;
        if !applicable {
            cases.push(Case::new(f64::NAN, f64::NAN).param("lambda", lambda).skip_unless(false));
            continue;
        }
        for case in functional_cases(cfg, &free, &free.with_lambda(lambda), &bank, |f| 2.0 * g * f.lip_norm() * lambda.powf(p))? {
            cases.push(case.param("lambda", lambda));
        }
    }
    let mut params = base_params(cfg);
    params.insert("lambda0".into(), json!(lambda0));
    params.insert("gamma".into(), json!(g));
    params.insert("r".into(), json!(r));
    params.insert("rhs_form".into(), json!("2 gamma ||f||_Lip lambda^(1/(1+2d))"));
    report(cfg, params, cases, "0 < lambda <= lambda0")
}

fn verify_weak_ids(cfg: &VerifyConfig) -> Result<BoundReport> {
    require_d1(cfg)?;
    let n = cfg.k_block;
    let lambda0 = 0.125;
    let consts = constants(1, n, lambda0, &no_extra())?;
    let c3 = consts["c3"];
    let expo = consts["weak_ids_exponent"];
    let r = 2.0 + lambda0;
    let free = weak_models(cfg)?;
    let mut cases = Vec::new();
    for &lambda in &cfg.lambdas {
        let in_range = lambda > 0.0 && lambda <= lambda0;
        let est = if in_range { Some(dos_histogram_on(&free.with_lambda(lambda), cfg.side, cfg.samples, cfg.bins, cfg.seed, r)?) } else { None };
        for &e in &cfg.energies {
            let applicable = in_range && e.abs() <= r;
            let case = match (&est, applicable) {
                (Some(est), true) => {
                    let (nl, se) = ids(est, e)?;
                    Case::new((nl - free_ids_1d(e)).abs(), c3 * lambda.powf(expo))
                        .err("mc_stderr", cfg.z * se)
                        .err("finite_volume", ids_finite_volume_1d(cfg.side))
                        .err("bin_interpolation", bin_interpolation(est, e))
                }
                _ => Case::new(f64::NAN, f64::NAN).skip_unless(false),
            };
            cases.push(case.param("lambda", lambda).param("E", e));
        }
    }
    let mut params = base_params(cfg);
    params.insert("c3".into(), json!(c3));
    params.insert("c0".into(), json!(consts["c0"]));
    params.insert("exponent".into(), json!(expo));
    params.insert("lambda0".into(), json!(lambda0));
    report(cfg, params, cases, "0 < lambda <= lambda0, |E| <= 2d + lambda0")
}

fn verify_pos_coupling(cfg: &VerifyConfig) -> Result<BoundReport> {
    let n = cfg.k_block.pow(cfg.d as u32);
    let l0 = cfg.lambda_ref;
    let c = cfg.measure.support_bound() * cfg.lambdas.iter().cloned().fold(l0, f64::max);
    let g = gamma(cfg.d, n, c);
    let r = 2.0 * cfg.d as f64 + c;
    let thr = alpha0_threshold(cfg.d);
    let bank = test_function_bank(r, cfg.bank_size, cfg.seed);
    let reference = ModelSpec::cube(cfg.d, cfg.k_block, l0, cfg.measure.clone())?;
    let nu0 = rescale(&cfg.measure, l0)?;
    let p = holder_exponent(cfg.d);
    let mut cases = Vec::new();
    for &lambda in &cfg.lambdas {
        let eta = dw(&rescale(&cfg.measure, lambda)?, &nu0);
        let descriptor = cfg.measure.support_bound() * (lambda - l0).abs();
        let applicable = eta <= thr && lambda > 0.0;
        if !applicable {
            cases.push(Case::new(f64::NAN, f64::NAN).param("lambda", lambda).param("eta", eta).skip_unless(false));
            continue;
        }
        let found = functional_cases(cfg, &reference, &reference.with_lambda(lambda), &bank, |f| 2.0 * g * f.lip_norm() * eta.powf(p))?;
        for case in found {
            cases.push(case.param("lambda", lambda).param("eta", eta).param("eta_descriptor_bound", descriptor));
        }
    }
    let mut params = base_params(cfg);
    params.insert("lambda_ref".into(), json!(l0));
    params.insert("gamma".into(), json!(g));
    params.insert("r".into(), json!(r));
    report(cfg, params, cases, "eta^xi0 <= 2^(-2d)")
}

fn verify_lyap_complex(cfg: &VerifyConfig) -> Result<BoundReport> {
    require_d1(cfg)?;
    let c = cfg.measure.support_bound() + cfg.etas.iter().cloned().fold(0.0, f64::max);
    let g = gamma(1, 1, c);
    let r = 2.0 + c;
    let thr = alpha0_threshold(1);
    let mut cases = Vec::new();
    for &eta_w in &cfg.etas {
        let alt = mollified(cfg, eta_w)?;
        let eta = dw(&cfg.measure, &alt);
        for &e in &cfg.energies {
            let de = (e + r).abs().max((e - r).abs());
            let eps0 = 1.0 / (de * de + 1.0).sqrt();
            for &eps in &cfg.eps {
                let applicable = eta <= thr && eps > 0.0 && eps <= eps0;
                let case = if applicable {
                    let (diff, se) = lyapunov_difference_1d(&cfg.measure, &alt, Complex64::new(e, eps), cfg.steps, cfg.seed)?;
                    let rhs = g * (2.0 / eps) * eta.powf(1.0 / 3.0);
                    Case::new(diff.abs(), rhs).err("transfer_stderr", cfg.z * se).param("rhs_two_gamma", 2.0 * rhs)
                } else {
                    Case::new(f64::NAN, f64::NAN).skip_unless(false)
                };
                cases.push(case.param("eta", eta).param("E", e).param("eps", eps).param("eps0", eps0));
            }
        }
    }
    let mut params = base_params(cfg);
    params.insert("gamma".into(), json!(g));
    params.insert("rhs_form".into(), json!("gamma (2/eps) eta^(1/3)"));
    report(cfg, params, cases, "eta^xi0 <= 2^(-2d), eps <= eps0(E)")
}

/// Pilot estimate of D in |N(E+ε) - N(E-ε)| ≤ D ε^β from histograms of
/// every measure involved, including sampling and finite-volume errors.
fn pilot_holder_d(cfg: &VerifyConfig, ests: &[DosEstimate], e: f64) -> Result<f64> {
    let mut d = 0.0f64;
    for est in ests {
        for j in 0..=20 {
            let eps = 0.05 * 20f64.powf(j as f64 / 20.0);
            let (hi, s1) = ids(est, e + eps)?;
            let (lo, s2) = ids(est, e - eps)?;
            let err = cfg.z * (s1 + s2) + 2.0 * ids_finite_volume_1d(cfg.side) + bin_interpolation(est, e + eps) + bin_interpolation(est, e - eps);
            d = d.max((hi - lo + err) / eps.powf(cfg.beta));
        }
    }
    Ok(d)
}

fn verify_lyap_real(cfg: &VerifyConfig) -> Result<BoundReport> {
    require_d1(cfg)?;
    let c = cfg.measure.support_bound() + cfg.etas.iter().cloned().fold(0.0, f64::max);
    let g = gamma(1, 1, c);
    let r = 2.0 + c;
    let beta = cfg.beta;
    if !(beta > 0.0 && beta <= 1.0) {
        return invalid(format!("beta = {beta} must lie in (0, 1]"));
    }
    let zeta0 = 1.0 / (3.0 * (1.0 + beta));
    let expo = beta / (3.0 * (1.0 + beta));
    let alts = cfg.etas.iter().map(|&w| mollified(cfg, w)).collect::<Result<Vec<_>>>()?;
    let base = ModelSpec::cube(1, 1, 1.0, cfg.measure.clone())?;
    let pilots = if cfg.holder_d.is_none() {
        let mut v = vec![dos_histogram_on(&base, cfg.side, cfg.samples, cfg.bins, cfg.seed, r)?];
        for alt in &alts {
            v.push(dos_histogram_on(&base.with_measure(alt.clone()), cfg.side, cfg.samples, cfg.bins, cfg.seed, r)?);
        }
        v
    } else {
        Vec::new()
    };
    let mut cases = Vec::new();
    for &e in &cfg.energies {
        let dd = match cfg.holder_d {
            Some(v) => v,
            None => pilot_holder_d(cfg, &pilots, e)?,
        };
        let c_l = 2.0 * (2.0 * g).max(PI * dd / (PI * beta / 2.0).sin());
        let de = (e + r).abs().max((e - r).abs());
        for (alt, &w) in alts.iter().zip(&cfg.etas) {
            let eta = dw(&cfg.measure, alt);
            let applicable = eta <= alpha0_threshold(1) && eta.powf(zeta0) <= 1.0 / (de * de + 1.0);
            let case = if applicable {
                let (diff, se) = lyapunov_difference_1d(&cfg.measure, alt, Complex64::new(e, 0.0), cfg.steps, cfg.seed)?;
                Case::new(diff.abs(), c_l * eta.powf(expo)).err("transfer_stderr", cfg.z * se)
            } else {
                Case::new(f64::NAN, f64::NAN).skip_unless(false)
            };
            cases.push(case.param("E", e).param("eta", eta).param("mollifier_width", w).param("D", dd).param("C_L", c_l));
        }
    }
    let mut params = base_params(cfg);
    params.insert("beta".into(), json!(beta));
    params.insert("D_source".into(), json!(if cfg.holder_d.is_some() { "supplied" } else { "pilot histogram" }));
    params.insert("gamma".into(), json!(g));
    params.insert("exponent".into(), json!(expo));
    report(cfg, params, cases, "eta <= alpha0 threshold and eta^zeta0 <= 1/(delta(E)^2+1)")
}

fn verify_dosf(cfg: &VerifyConfig) -> Result<BoundReport> {
    let d = cfg.d;
    let df = d as f64;
    let (d1, eps) = match (cfg.d1, cfg.eps_decay) {
        (Some(a), Some(b)) => (a, b),
        _ if d >= 3 => (2f64.powf(-df) * PI.powf(-df / 2.0), df / 2.0 - 1.0),
        _ => return invalid("dosf needs Fourier decay data (D1, eps) for d < 3"),
    };
    let n = cfg.k_block.pow(d as u32);
    let lambda0 = 0.5f64.powf(1.0 + 2.0 * df);
    let mut extra = no_extra();
    extra.insert("D1".into(), d1);
    extra.insert("eps_decay".into(), eps);
    let consts = constants(d, n, lambda0, &extra)?;
    let (cst, expo) = (consts["dosf_constant"], consts["dosf_exponent"]);
    let thr = alpha0_threshold(d);
    let free = weak_models(cfg)?;
    let r = 2.0 * df + lambda0;
    let edges = linspace(-r, r, cfg.bins + 1);
    // exact bin averages of the free density
    let free_avg: Vec<f64> = edges
        .windows(2)
        .map(|w| adaptive(|x| free_dosf(d, x), w[0], w[1], 1e-10, 1e-8).value / (w[1] - w[0]))
        .collect();
    let mut cases = Vec::new();
    for &lambda in &cfg.lambdas {
        let applicable = lambda > 0.0 && lambda <= thr;
        if !applicable {
            cases.push(Case::new(f64::NAN, f64::NAN).param("lambda", lambda).skip_unless(false));
            continue;
        }
        let est = dos_histogram_on(&free.with_lambda(lambda), cfg.side, cfg.samples, cfg.bins, cfg.seed, r)?;
        let w = est.bin_width();
        let (b, dev) = est
            .masses
            .iter()
            .zip(&free_avg)
            .map(|(m, a)| (m / w - a).abs())
            .enumerate()
            .max_by(|x, y| x.1.total_cmp(&y.1))
            .expect("bins exist");
        cases.push(
            Case::new(dev, cst * lambda.powf(expo))
                .err("mc_stderr", cfg.z * est.mass_stderr[b] / w)
                .param("lambda", lambda)
                .param("bin_center", 0.5 * (edges[b] + edges[b + 1])),
        );
    }
    let mut params = base_params(cfg);
    params.insert("D1".into(), json!(d1));
    params.insert("eps_decay".into(), json!(eps));
    params.insert("constant".into(), json!(cst));
    params.insert("exponent".into(), json!(expo));
    params.insert("side".into(), json!(cfg.side));
    params.insert("estimator_note".into(), json!("bin-averaged densities of periodic boxes; finite-volume bias not bounded"));
    report(cfg, params, cases, "eta = lambda <= alpha0 threshold")
}

fn verify_lloyd(cfg: &VerifyConfig) -> Result<BoundReport> {
    let d = cfg.d;
    let d_l = lloyd_constant(d)?;
    let expo = (d as f64 - 2.0) / (d as f64 + 2.0);
    let grid = linspace(-(2.0 * d as f64 + 1.0), 2.0 * d as f64 + 1.0, 161);
    let free: Vec<f64> = grid.iter().map(|&e| free_dosf(d, e)).collect();
    let mut cases = Vec::new();
    for &lambda in &cfg.lambdas {
        if !(lambda > 0.0) {
            cases.push(Case::new(f64::NAN, f64::NAN).param("lambda", lambda).skip_unless(false));
            continue;
        }
        let mut worst = (0.0f64, 0.0);
        for (&e, &f0) in grid.iter().zip(&free) {
            let dev = (lloyd_dosf(d, lambda, e)? - f0).abs();
            if dev > worst.0 {
                worst = (dev, e);
            }
        }
        cases.push(
            Case::new(worst.0, d_l * lambda.powf(expo)).err("quadrature", 1e-8).param("lambda", lambda).param("E", worst.1),
        );
    }
    let mut params = base_params(cfg);
    params.insert("D_L".into(), json!(d_l));
    params.insert("exponent".into(), json!(expo));
    params.insert("grid_points".into(), json!(grid.len()));
    params.insert("estimator_note".into(), json!("sup norm over the energy grid"));
    params.insert("measure".into(), json!("cauchy"));
    report(cfg, params, cases, "lambda > 0")
}

fn bethe_constants(cfg: &VerifyConfig, c: f64) -> Result<BTreeMap<String, f64>> {
    let mut extra = no_extra();
    extra.insert("k".into(), cfg.k as f64);
    constants(1, 1, c, &extra)
}

fn verify_bethe_dosm(cfg: &VerifyConfig) -> Result<BoundReport> {
    let c = cfg.measure.support_bound() + cfg.etas.iter().cloned().fold(0.0, f64::max);
    let consts = bethe_constants(cfg, c)?;
    let (gb, xb, thr, r) = (consts["gamma_B"], consts["xi0_bethe"], consts["alpha_B_eta_threshold"], consts["r_B"]);
    let bank = test_function_bank(r, cfg.bank_size, cfg.seed);
    let base = ModelSpec::bethe(cfg.k, 1.0, cfg.measure.clone())?;
    let mut cases = Vec::new();
    for &eta_w in &cfg.etas {
        let alt = mollified(cfg, eta_w)?;
        let eta = dw(&cfg.measure, &alt);
        if eta > thr {
            cases.push(Case::new(f64::NAN, f64::NAN).param("eta", eta).skip_unless(false));
            continue;
        }
        let denom = (-xb * eta.ln()).sqrt();
        for case in functional_cases(cfg, &base, &base.with_measure(alt), &bank, |f| gb * f.lip_norm() / denom)? {
            cases.push(case.param("eta", eta));
        }
    }
    let mut params = base_params(cfg);
    params.insert("k".into(), json!(cfg.k));
    params.insert("gamma_B".into(), json!(gb));
    params.insert("xi0_bethe".into(), json!(xb));
    params.insert("r_B".into(), json!(r));
    report(cfg, params, cases, "eta <= e^(-3 log k / xi0)")
}

fn verify_bethe_weak_ids(cfg: &VerifyConfig) -> Result<BoundReport> {
    if cfg.measure.support_bound() > 1.0 {
        return invalid("the weak-disorder bounds need a single-site law on [-1, 1]");
    }
    let consts = bethe_constants(cfg, 1.0)?;
    let (ct, xb, lambda_b) = (consts["c_tilde_B"], consts["xi0_bethe"], consts["lambda_B"]);
    let edge = 2.0 * ((cfg.k - 1) as f64).sqrt();
    let r = edge + lambda_b;
    let free = ModelSpec::bethe(cfg.k, 0.0, cfg.measure.clone())?;
    let mut cases = Vec::new();
    for &lambda in &cfg.lambdas {
        let in_range = lambda > 0.0 && lambda <= lambda_b;
        let l = -xb * lambda.ln();
        let a = 0.5 * l.powf(-0.25);
        let energies: Vec<f64> = cfg.energies.clone();
        let bank: Vec<TestFunction> = energies
            .iter()
            .flat_map(|&e| [TestFunction::ramp_below(e, a, r), TestFunction::ramp_above(e, a, r)])
            .collect::<Result<_>>()?;
        let est = if in_range { Some(dos_functionals(&free.with_lambda(lambda), &bank, cfg.degree, cfg.samples, cfg.seed)?) } else { None };
        for (i, &e) in energies.iter().enumerate() {
            let applicable = in_range && e.abs() <= r;
            let case = match (&est, applicable) {
                (Some(est), true) => {
                    // n(f₋) ≤ N_λ(E) ≤ n(f₊) brackets the IDS
                    let n0 = kesten_ids(cfg.k, e);
                    let (lo, hi) = (&est[2 * i], &est[2 * i + 1]);
                    let upper = (hi.value - n0).max(n0 - lo.value).max(0.0);
                    Case::new(upper, ct / l.powf(0.25))
                        .err("mc_stderr", cfg.z * lo.stderr.max(hi.stderr))
                        .err("bernstein_bias", lo.bias_bound.max(hi.bias_bound))
                }
                _ => Case::new(f64::NAN, f64::NAN).skip_unless(false),
            };
            cases.push(case.param("lambda", lambda).param("E", e).param("ramp_width", a));
        }
    }
    let mut params = base_params(cfg);
    params.insert("k".into(), json!(cfg.k));
    params.insert("c_tilde_B".into(), json!(ct));
    params.insert("lambda_B".into(), json!(lambda_b));
    params.insert("estimator_note".into(), json!("lhs is the ramp bracket max(n(f+) - N0, N0 - n(f-)) >= |N_lambda - N0|"));
    report(cfg, params, cases, "0 < lambda <= lambda_B, |E| <= 2 sqrt(k-1) + lambda_B")
}

fn verify_finite_rank(cfg: &VerifyConfig) -> Result<BoundReport> {
    require_d1(cfg)?;
    let c = cfg.measure.support_bound();
    let r = 2.0 + c;
    let bank = test_function_bank(r, cfg.bank_size.max(1), cfg.seed);
    let radius = 12;
    let mut cases = Vec::new();
    for t in 0..cfg.trials {
        let mut rng = keyed_rng(Domain::Trial, cfg.seed, t as u64);
        let kb = if t % 2 == 0 { 1 } else { 4 };
        let model = ModelSpec::cube(1, kb, 1.0, cfg.measure.clone())?;
        let f = &bank[rng.gen_range(0..bank.len())];
        let lambda = rng.gen_range(-c..=c);
        let lambda0 = rng.gen_range(-c..=c);
        let block = [rng.gen_range(-2i64..=2)];
        let disorder = sample_disorder(&model, cfg.seed, t as u64, Region::Centered { radius })?;
        let (lhs, rhs) = finite_rank_deviation(&model, &block, lambda, lambda0, f, &disorder, radius)?;
        cases.push(
            Case::new(lhs, rhs).param("trial", t).param("N", kb).param("f", f.label.clone()).param("lambda", lambda).param("lambda0", lambda0),
        );
    }
    let mut params = base_params(cfg);
    params.insert("trials".into(), json!(cfg.trials));
    params.insert("C".into(), json!(c));
    params.insert("box_radius".into(), json!(radius));
    report(cfg, params, cases, "none")
}

fn verify_counting_exact(cfg: &VerifyConfig) -> Result<BoundReport> {
    let mut cases = Vec::new();
    for t in 0..cfg.trials {
        let mut rng = keyed_rng(Domain::Trial, cfg.seed, t as u64);
        let d = 1 + t % 2;
        let kb = 1 + (t / 2) % 2;
        let n = rng.gen_range(0..=12usize);
        let model = ModelSpec::cube(d, kb, 1.0, cfg.measure.clone())?;
        let dep = dependence_radius(&model, n).max(1);
        let big = Region::Centered { radius: dep + 3 };
        let disorder = sample_disorder(&model, cfg.seed, t as u64, big)?;
        let inner = sample_disorder(&model, cfg.seed, t as u64, Region::Centered { radius: dep })?;
        let mut perturbed = disorder.clone();
        for key in disorder.keys() {
            if inner.get(&key).is_none() {
                perturbed.insert(key.clone(), draw_value(&model, cfg.seed ^ 0x9e37_79b9, t as u64, &key));
            }
        }
        let a = full_trace_power(&assemble_box(&model, big, &disorder)?, n)?;
        let b = full_trace_power(&assemble_box(&model, big, &perturbed)?, n)?;
        let diff = if a.to_bits() == b.to_bits() { 0.0 } else { (a - b).abs().max(f64::MIN_POSITIVE) };
        cases.push(Case::new(diff, 0.0).param("trial", t).param("d", d).param("K", kb).param("n", n));
    }
    let mut params = base_params(cfg);
    params.insert("trials".into(), json!(cfg.trials));
    params.insert("comparison".into(), json!("bit-identical Tr(P0 H^n P0) under perturbation outside the dependence radius"));
    report(cfg, params, cases, "none")
}

/// Tr(P₀ Hⁿ P₀) by repeated products with the whole box matrix.
fn full_trace_power(b: &crate::lattice::HamiltonianBox, n: usize) -> Result<f64> {
    let mut total = 0.0;
    for &s in b.projection_sites() {
        let mut v = vec![0.0; b.dim()];
        v[s] = 1.0;
        for _ in 0..n {
            v = b.apply(&v)?;
        }
        total += v[s];
    }
    Ok(total)
}

/// Runs the verification described by `cfg`.
pub fn verify(cfg: &VerifyConfig) -> Result<BoundReport> {
    if cfg.samples == 0 || cfg.degree == 0 {
        return invalid("samples and degree must be positive");
    }
    match cfg.bound {
        BoundId::DosmMain => verify_dosm_main(cfg),
        BoundId::IdsMain => verify_ids_main(cfg),
        BoundId::WeakDosm => verify_weak_dosm(cfg),
        BoundId::WeakIds => verify_weak_ids(cfg),
        BoundId::PosCoupling => verify_pos_coupling(cfg),
        BoundId::LyapComplex => verify_lyap_complex(cfg),
        BoundId::LyapReal => verify_lyap_real(cfg),
        BoundId::Dosf => verify_dosf(cfg),
        BoundId::Lloyd => verify_lloyd(cfg),
        BoundId::BetheDosm => verify_bethe_dosm(cfg),
        BoundId::BetheWeakIds => verify_bethe_weak_ids(cfg),
        BoundId::FiniteRank => verify_finite_rank(cfg),
        BoundId::CountingExact => verify_counting_exact(cfg),
    }
}

#[cfg(test)]
mod tests;
