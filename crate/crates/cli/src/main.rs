mod config;

use std::collections::BTreeMap;
use std::fmt::Write as _;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, CommandFactory, FromArgMatches, Parser, Subcommand, ValueEnum};
use doslab::bounds::{constants, verify, BoundId, VerifyConfig};
use doslab::dos::{
    dos_histogram, free_dosf, free_dosf_fourier, free_ids_1d, ids, kesten_dosf, kesten_ids, lloyd_dosf, trace_moments,
};
use doslab::lattice::{Geometry, SiteLaw};
use doslab::lyapunov::{free_lyapunov, lyapunov_extrapolate, strip_lyapunov, thouless, thouless_strip, transfer_lyapunov_1d};
use doslab::measures::{discretize_fn, dw, rescale};
use doslab::util::{fmt_sig, linspace, set_parallel};
use doslab::{LyapunovResult, Method, ModelSpec, ProbabilityMeasure};
use num_complex::Complex64;

/// Density of states, Lyapunov exponents and continuity bounds for random
/// Schrödinger operators on Z^d, strips and the Bethe lattice.
#[derive(Parser)]
#[command(name = "doslab", version, args_override_self = true)]
struct Cli {
    /// Flat `key = value` file of flag defaults; keys are long flag names and
    /// flags given on the command line win
    #[arg(long, global = true, value_name = "FILE")]
    config: Option<PathBuf>,
    /// Worker threads for the Monte Carlo loops [count]; results do not depend on it
    #[arg(long, global = true, value_name = "N")]
    threads: Option<usize>,
    #[command(subcommand)]
    command: Cmd,
}

#[derive(Subcommand)]
enum Cmd {
    /// Density of states by trace moments or eigenvalue histograms
    Dos(DosArgs),
    /// Integrated density of states from eigenvalue histograms
    Ids(IdsArgs),
    /// Lyapunov exponents by transfer matrices, the Thouless formula or the free closed form
    Lyapunov(LyapunovArgs),
    /// Bounded-Lipschitz distance between two single-site laws
    Metric(MetricArgs),
    /// Closed-form densities: free Laplacian, Lloyd model, Kesten measure
    ClosedForm(ClosedFormArgs),
    /// Table of the explicit constants of the continuity bounds
    Constants(ConstantsArgs),
    /// Measure one continuity bound and report pass, fail or not applicable
    Verify(VerifyArgs),
}

#[derive(Clone, Copy, ValueEnum)]
enum Format {
    Csv,
    Json,
}

#[derive(Args)]
struct Output {
    /// Output file; without it the data goes to stdout and the summary to stderr
    #[arg(long, value_name = "FILE")]
    out: Option<PathBuf>,
    /// Output format
    #[arg(long, value_enum, default_value = "csv")]
    format: Format,
}

#[derive(Clone, Copy, ValueEnum)]
enum GeometryArg {
    Cube,
    Bethe,
}

#[derive(Args)]
struct ModelArgs {
    /// Model file (flat key = value); when given, the geometry flags below are ignored
    #[arg(long, value_name = "FILE")]
    model: Option<PathBuf>,
    /// Lattice when no model file is given
    #[arg(long, value_enum, default_value = "cube")]
    geometry: GeometryArg,
    /// Dimension d of the cubic lattice
    #[arg(long, default_value_t = 1)]
    d: usize,
    /// Block side K; each block holds N = K^d sites [sites]
    #[arg(long = "K", default_value_t = 1)]
    k_block: usize,
    /// Coordination number k of the Bethe lattice
    #[arg(long = "k", default_value_t = 3)]
    coordination: usize,
    /// Disorder strength λ [energy]
    #[arg(long, default_value_t = 1.0, allow_negative_numbers = true)]
    lambda: f64,
    /// Single-site law: a measure file, or delta:X, bernoulli:A,P (weight P at -A), uniform:C
    #[arg(long, default_value = "bernoulli:1,0.5")]
    measure: String,
}

#[derive(Clone, Copy, ValueEnum)]
enum DosMethod {
    Moments,
    Histogram,
}

#[derive(Args)]
struct DosArgs {
    #[command(flatten)]
    model: ModelArgs,
    /// Estimator: exact-truncation trace moments or periodic-box eigenvalue histograms
    #[arg(long, value_enum, default_value = "moments")]
    method: DosMethod,
    /// Highest moment degree n (moments)
    #[arg(long, default_value_t = 40)]
    degree: usize,
    /// Periodic box side (histogram) [sites]
    #[arg(long, default_value_t = 256)]
    side: usize,
    /// Number of bins on [-r, r] (histogram)
    #[arg(long, default_value_t = 128)]
    bins: usize,
    /// Disorder samples [count]
    #[arg(long, default_value_t = 100)]
    samples: usize,
    /// Random seed (mandatory)
    #[arg(long)]
    seed: u64,
    #[command(flatten)]
    output: Output,
}

#[derive(Args)]
struct EnergyGrid {
    /// Energies [energy], comma separated
    #[arg(long, value_delimiter = ',', allow_negative_numbers = true)]
    energies: Vec<f64>,
    /// Evenly spaced energies LO:HI:COUNT [energy:energy:count]
    #[arg(long, value_name = "LO:HI:COUNT", allow_hyphen_values = true)]
    grid: Option<String>,
}

impl EnergyGrid {
    fn points(&self) -> Result<Vec<f64>, Failure> {
        let mut pts = self.energies.clone();
        if let Some(g) = &self.grid {
            let parts: Vec<&str> = g.split(':').collect();
            let bad = || Failure::Usage(format!("--grid {g:?}: expected LO:HI:COUNT"));
            if parts.len() != 3 {
                return Err(bad());
            }
            let lo: f64 = parts[0].parse().map_err(|_| bad())?;
            let hi: f64 = parts[1].parse().map_err(|_| bad())?;
            let n: usize = parts[2].parse().map_err(|_| bad())?;
            if n < 2 || hi.partial_cmp(&lo) != Some(std::cmp::Ordering::Greater) {
                return Err(bad());
            }
            pts.extend(linspace(lo, hi, n));
        }
        if pts.is_empty() {
            return Err(Failure::Usage("give --energies or --grid".into()));
        }
        Ok(pts)
    }
}

#[derive(Args)]
struct IdsArgs {
    #[command(flatten)]
    model: ModelArgs,
    #[command(flatten)]
    energies: EnergyGrid,
    /// Periodic box side [sites]
    #[arg(long, default_value_t = 1024)]
    side: usize,
    /// Number of histogram bins on [-r, r]
    #[arg(long, default_value_t = 512)]
    bins: usize,
    /// Disorder samples [count]
    #[arg(long, default_value_t = 32)]
    samples: usize,
    /// Random seed (mandatory)
    #[arg(long)]
    seed: u64,
    #[command(flatten)]
    output: Output,
}

#[derive(Clone, Copy, ValueEnum)]
enum LyapMethod {
    Transfer,
    Thouless,
    ClosedForm,
}

#[derive(Args)]
struct LyapunovArgs {
    #[command(flatten)]
    model: ModelArgs,
    /// Route to the exponent
    #[arg(long, value_enum, default_value = "transfer")]
    method: LyapMethod,
    /// Complex energies such as 0.5, 4i or 0.5+0.1i [energy], comma separated
    #[arg(long, value_delimiter = ',', required = true, allow_hyphen_values = true)]
    energy: Vec<String>,
    /// Transfer-matrix steps per replica [count]
    #[arg(long, default_value_t = 100_000)]
    steps: usize,
    /// Decreasing imaginary parts ε for extrapolation to a real energy (transfer) [energy]
    #[arg(long, value_delimiter = ',')]
    eps: Vec<f64>,
    /// Periodic box side for the Thouless histogram [sites]
    #[arg(long, default_value_t = 4096)]
    side: usize,
    /// Histogram bins for the Thouless route
    #[arg(long, default_value_t = 512)]
    bins: usize,
    /// Disorder samples for the Thouless route [count]
    #[arg(long, default_value_t = 32)]
    samples: usize,
    /// Random seed (mandatory)
    #[arg(long)]
    seed: u64,
    #[command(flatten)]
    output: Output,
}

#[derive(Args)]
struct MetricArgs {
    /// First law: a measure file or a builtin (delta:X, bernoulli:A,P, uniform:C)
    #[arg(long)]
    a: String,
    /// Second law, same forms as --a
    #[arg(long)]
    b: String,
    #[command(flatten)]
    output: Output,
}

#[derive(Clone, Copy, ValueEnum)]
enum Kind {
    /// Free Laplacian density ρ_d(E)
    FreeDosf,
    /// Free integrated density of states (d = 1)
    FreeIds,
    /// Fourier transform of the free density at t (the grid is read as t)
    FreeFourier,
    /// Lloyd (Cauchy) model density
    Lloyd,
    /// Kesten density of the Bethe lattice
    Kesten,
    /// Kesten integrated density of states
    KestenIds,
}

#[derive(Args)]
struct ClosedFormArgs {
    /// Which closed form
    #[arg(long, value_enum)]
    kind: Kind,
    /// Dimension d
    #[arg(long, default_value_t = 1)]
    d: usize,
    /// Cauchy width λ of the Lloyd model [energy]
    #[arg(long, default_value_t = 0.1)]
    lambda: f64,
    /// Coordination number k (Kesten)
    #[arg(long = "k", default_value_t = 3)]
    coordination: usize,
    #[command(flatten)]
    energies: EnergyGrid,
    #[command(flatten)]
    output: Output,
}

#[derive(Args)]
struct ConstantsArgs {
    /// Dimension d
    #[arg(long)]
    d: usize,
    /// Sites per block N
    #[arg(long = "N", default_value_t = 1)]
    n: usize,
    /// Support bound C of the single-site laws [energy]
    #[arg(long = "C")]
    c: f64,
    /// Craig–Simon constant C_I
    #[arg(long = "C-I")]
    c_i: Option<f64>,
    /// Hölder constant c₀ of the free IDS (default: computed for d = 1)
    #[arg(long)]
    c0: Option<f64>,
    /// Hölder exponent β of the IDS
    #[arg(long)]
    beta: Option<f64>,
    /// Hölder constant D of the IDS
    #[arg(long = "D")]
    holder_d: Option<f64>,
    /// Energy E for the ε₀ and α_L thresholds [energy]
    #[arg(long = "E", allow_negative_numbers = true)]
    energy: Option<f64>,
    /// Fourier decay constant D₁
    #[arg(long = "D1")]
    d1: Option<f64>,
    /// Fourier decay exponent ε
    #[arg(long = "eps-decay")]
    eps_decay: Option<f64>,
    /// Bethe coordination number k
    #[arg(long = "k")]
    coordination: Option<usize>,
    #[command(flatten)]
    output: Output,
}

#[derive(Args)]
struct VerifyArgs {
    /// Bound to measure
    #[arg(long, value_parser = parse_bound)]
    bound: BoundId,
    /// Random seed (mandatory)
    #[arg(long)]
    seed: u64,
    /// Dimension d
    #[arg(long)]
    d: Option<usize>,
    /// Block side K [sites]
    #[arg(long = "K")]
    k_block: Option<usize>,
    /// Bethe coordination number k
    #[arg(long = "k")]
    coordination: Option<usize>,
    /// Reference single-site law (file or builtin)
    #[arg(long)]
    measure: Option<String>,
    /// Mollifier widths defining the perturbed laws [energy]
    #[arg(long, value_delimiter = ',')]
    etas: Option<Vec<f64>>,
    /// Couplings λ [energy]
    #[arg(long, value_delimiter = ',')]
    lambdas: Option<Vec<f64>>,
    /// Reference coupling λ₀ (pos-coupling) [energy]
    #[arg(long)]
    lambda_ref: Option<f64>,
    /// Energies [energy]
    #[arg(long, value_delimiter = ',', allow_negative_numbers = true)]
    energies: Option<Vec<f64>>,
    /// Imaginary parts ε (lyap-complex) [energy]
    #[arg(long, value_delimiter = ',')]
    eps: Option<Vec<f64>>,
    /// Test functions in the bank [count]
    #[arg(long)]
    bank_size: Option<usize>,
    /// Bernstein degree [count]
    #[arg(long)]
    degree: Option<usize>,
    /// Disorder samples [count]
    #[arg(long)]
    samples: Option<usize>,
    /// Periodic box side [sites]
    #[arg(long)]
    side: Option<usize>,
    /// Histogram bins
    #[arg(long)]
    bins: Option<usize>,
    /// Transfer-matrix steps [count]
    #[arg(long)]
    steps: Option<usize>,
    /// Random trials [count]
    #[arg(long)]
    trials: Option<usize>,
    /// Multiple of the standard error counted as sampling error
    #[arg(long)]
    z: Option<f64>,
    /// Hölder exponent β of the IDS
    #[arg(long)]
    beta: Option<f64>,
    /// Hölder constant D of the IDS (default: pilot histogram)
    #[arg(long = "D")]
    holder_d: Option<f64>,
    /// Fourier decay constant D₁
    #[arg(long = "D1")]
    d1: Option<f64>,
    /// Fourier decay exponent ε
    #[arg(long = "eps-decay")]
    eps_decay: Option<f64>,
    /// Output file for the JSON report; stdout when absent
    #[arg(long, value_name = "FILE")]
    out: Option<PathBuf>,
}

fn parse_bound(s: &str) -> Result<BoundId, String> {
    s.parse::<BoundId>().map_err(|_| {
        let ids: Vec<&str> = BoundId::ALL.iter().map(|b| b.as_str()).collect();
        format!("expected one of {}", ids.join(", "))
    })
}

/// Why a run stopped: bad input (exit 2) or a failed computation (exit 1).
enum Failure {
    Usage(String),
    Compute(String),
}

impl From<doslab::Error> for Failure {
    fn from(e: doslab::Error) -> Self {
        if e.is_usage() {
            Failure::Usage(e.to_string())
        } else {
            Failure::Compute(e.to_string())
        }
    }
}

type Outcome = Result<(), Failure>;

fn load_measure(flag: &str, spec: &str) -> Result<ProbabilityMeasure, Failure> {
    let path = Path::new(spec);
    if path.is_file() {
        return ProbabilityMeasure::read(path).map_err(|e| Failure::Usage(format!("{flag} {spec}: {e}")));
    }
    let bad = || Failure::Usage(format!("{flag} {spec:?}: no such file and not a builtin (delta:X, bernoulli:A,P, uniform:C)"));
    let (name, rest) = spec.split_once(':').ok_or_else(bad)?;
    let nums: Vec<f64> = rest.split(',').map(|s| s.trim().parse::<f64>()).collect::<Result<_, _>>().map_err(|_| bad())?;
    let m = match (name, nums.as_slice()) {
        ("delta", [x]) => Ok(ProbabilityMeasure::delta(*x)),
        ("bernoulli", [a, p]) => ProbabilityMeasure::bernoulli(*a, *p),
        ("uniform", [c]) if *c > 0.0 => discretize_fn(|_| 0.5 / c, *c, c / 64.0),
        _ => return Err(bad()),
    };
    Ok(m.map_err(|e| Failure::Usage(format!("{flag} {spec}: {e}")))?.with_label(spec))
}

fn build_model(a: &ModelArgs) -> Result<ModelSpec, Failure> {
    if let Some(path) = &a.model {
        let text = std::fs::read_to_string(path).map_err(|e| Failure::Usage(format!("--model {}: {e}", path.display())))?;
        let base = path.parent().unwrap_or(Path::new("."));
        return ModelSpec::from_kv(&text, base).map_err(|e| Failure::Usage(format!("--model {}: {e}", path.display())));
    }
    let m = load_measure("--measure", &a.measure)?;
    Ok(match a.geometry {
        GeometryArg::Cube => ModelSpec::cube(a.d, a.k_block, a.lambda, m)?,
        GeometryArg::Bethe => ModelSpec::bethe(a.coordination, a.lambda, m)?,
    })
}

/// Writes `data` to the output file (or stdout) and prints the summary.
fn emit(out: Option<&Path>, data: &str, summary: &str) -> Outcome {
    match out {
        Some(p) => {
            std::fs::write(p, data).map_err(|e| Failure::Compute(format!("writing {}: {e}", p.display())))?;
            println!("{summary} -> {}", p.display());
        }
        None => {
            print!("{data}");
            eprintln!("{summary}");
        }
    }
    Ok(())
}

fn to_json<T: serde::Serialize>(v: &T) -> String {
    serde_json::to_string_pretty(v).expect("output serializes") + "\n"
}

fn run_dos(a: &DosArgs) -> Outcome {
    let model = build_model(&a.model)?;
    let est = match a.method {
        DosMethod::Moments => trace_moments(&model, a.degree, a.samples, a.seed)?,
        DosMethod::Histogram => dos_histogram(&model, a.side, a.samples, a.bins, a.seed)?,
    };
    let data = match a.output.format {
        Format::Csv => est.to_csv(),
        Format::Json => to_json(&est),
    };
    let summary = match a.method {
        DosMethod::Moments => format!("dos: {} moments from {} samples, r = {}", a.degree + 1, a.samples, fmt_sig(est.spectral_bound)),
        DosMethod::Histogram => format!("dos: {} bins from {} boxes of side {}, r = {}", a.bins, a.samples, a.side, fmt_sig(est.spectral_bound)),
    };
    emit(a.output.out.as_deref(), &data, &summary)
}

fn run_ids(a: &IdsArgs) -> Outcome {
    let model = build_model(&a.model)?;
    let energies = a.energies.points()?;
    let est = dos_histogram(&model, a.side, a.samples, a.bins, a.seed)?;
    let rows = energies.iter().map(|&e| Ok((e, ids(&est, e)?))).collect::<Result<Vec<_>, doslab::Error>>()?;
    let data = match a.output.format {
        Format::Csv => {
            let mut s = String::from("E,ids,stderr\n");
            for (e, (v, se)) in &rows {
                let _ = writeln!(s, "{},{},{}", fmt_sig(*e), fmt_sig(*v), fmt_sig(*se));
            }
            s
        }
        Format::Json => {
            let v: Vec<_> = rows.iter().map(|(e, (v, se))| serde_json::json!({"E": e, "ids": v, "stderr": se})).collect();
            to_json(&v)
        }
    };
    emit(a.output.out.as_deref(), &data, &format!("ids: {} energies from {} boxes of side {}", rows.len(), a.samples, a.side))
}

fn parse_energy(s: &str) -> Result<Complex64, Failure> {
    s.trim().parse::<Complex64>().map_err(|_| Failure::Usage(format!("--energy {s:?}: not a complex number (examples: 0.5, 4i, 0.5+0.1i)")))
}

/// Single-site law of λΘω for a d = 1, K = 1 chain.
fn chain_law(model: &ModelSpec) -> Result<ProbabilityMeasure, Failure> {
    match (&model.geometry, &model.law) {
        (Geometry::Cube { d: 1, k_block: 1 }, SiteLaw::Scalar(m)) => Ok(rescale(m, model.lambda * model.profile[0])?),
        _ => Err(Failure::Usage("the transfer route needs a d = 1, K = 1 chain or a strip model".into())),
    }
}

fn run_lyapunov(a: &LyapunovArgs) -> Outcome {
    let energies = a.energy.iter().map(|s| parse_energy(s)).collect::<Result<Vec<_>, _>>()?;
    let mut results: Vec<LyapunovResult> = Vec::new();
    match a.method {
        LyapMethod::ClosedForm => {
            for &e in &energies {
                let v = free_lyapunov(e);
                results.push(LyapunovResult {
                    re_e: e.re,
                    im_e: e.im,
                    value: v,
                    exponents: Vec::new(),
                    method: Method::ClosedForm,
                    steps: 0,
                    error: 0.0,
                    replicas: Vec::new(),
                });
            }
        }
        LyapMethod::Transfer => {
            let model = build_model(&a.model)?;
            for &e in &energies {
                if let (Geometry::Strip { .. }, SiteLaw::Matrix(fam)) = (&model.geometry, &model.law) {
                    results.push(strip_lyapunov(fam, model.lambda, e, a.steps, a.seed)?);
                    continue;
                }
                let law = chain_law(&model)?;
                if a.eps.is_empty() {
                    results.push(transfer_lyapunov_1d(&law, e, a.steps, a.seed)?);
                } else {
                    if e.im != 0.0 {
                        return Err(Failure::Usage("--eps extrapolates to real energies only".into()));
                    }
                    let ex = lyapunov_extrapolate(&law, e.re, &a.eps, a.steps, a.seed)?;
                    let last_steps = ex.table.last().map_or(a.steps, |r| r.steps);
                    results.extend(ex.table);
                    results.push(LyapunovResult {
                        re_e: e.re,
                        im_e: 0.0,
                        value: ex.limit,
                        exponents: Vec::new(),
                        method: Method::Transfer,
                        steps: last_steps,
                        error: ex.limit_error,
                        replicas: Vec::new(),
                    });
                }
            }
        }
        LyapMethod::Thouless => {
            let model = build_model(&a.model)?;
            let est = dos_histogram(&model, a.side, a.samples, a.bins, a.seed)?;
            for &e in &energies {
                results.push(match model.geometry {
                    Geometry::Strip { width } => thouless_strip(&est, e, width)?,
                    _ => thouless(&est, e)?,
                });
            }
        }
    }
    let width = results.iter().map(|r| r.exponents.len()).max().unwrap_or(0);
    let data = match a.output.format {
        Format::Csv => {
            let mut s = LyapunovResult::csv_header(width) + "\n";
            for r in &results {
                s += &r.to_csv_row();
                s.push('\n');
            }
            s
        }
        Format::Json => to_json(&results),
    };
    let first = results.first().map(|r| format!(", L({}) = {} ± {}", fmt_energy(r.energy()), fmt_short(r.value), fmt_short(r.error)));
    emit(a.output.out.as_deref(), &data, &format!("lyapunov: {} rows{}", results.len(), first.unwrap_or_default()))
}

fn fmt_energy(e: Complex64) -> String {
    if e.im == 0.0 {
        format!("{}", e.re)
    } else {
        format!("{}{:+}i", e.re, e.im)
    }
}

/// Seven significant digits for terminal summaries.
fn fmt_short(x: f64) -> String {
    if x == 0.0 || !x.is_finite() {
        return format!("{x}");
    }
    let digits = 6 - x.abs().log10().floor() as i32;
    if (0..=15).contains(&digits) {
        format!("{x:.*}", digits as usize)
    } else {
        format!("{x:.6e}")
    }
}

fn run_metric(a: &MetricArgs) -> Outcome {
    let mu = load_measure("--a", &a.a)?;
    let nu = load_measure("--b", &a.b)?;
    let d = dw(&mu, &nu);
    let data = match a.output.format {
        Format::Csv => format!("a,b,dw\n{},{},{}\n", a.a, a.b, fmt_sig(d)),
        Format::Json => to_json(&serde_json::json!({"a": a.a, "b": a.b, "dw": d})),
    };
    let summary = fmt_short(d);
    match &a.output.out {
        Some(p) => {
            std::fs::write(p, &data).map_err(|e| Failure::Compute(format!("writing {}: {e}", p.display())))?;
            println!("{summary}");
        }
        None => println!("{summary}"),
    }
    Ok(())
}

fn run_closed_form(a: &ClosedFormArgs) -> Outcome {
    let pts = a.energies.points()?;
    let k = a.coordination;
    if matches!(a.kind, Kind::Kesten | Kind::KestenIds) && k < 3 {
        return Err(Failure::Usage(format!("--k {k}: the Bethe lattice needs k ≥ 3")));
    }
    if matches!(a.kind, Kind::FreeIds) && a.d != 1 {
        return Err(Failure::Usage("--kind free-ids is available for d = 1".into()));
    }
    if a.d == 0 {
        return Err(Failure::Usage("--d must be at least 1".into()));
    }
    let mut rows = Vec::with_capacity(pts.len());
    for &x in &pts {
        let v = match a.kind {
            Kind::FreeDosf => free_dosf(a.d, x),
            Kind::FreeIds => free_ids_1d(x),
            Kind::FreeFourier => free_dosf_fourier(a.d, x),
            Kind::Lloyd => lloyd_dosf(a.d, a.lambda, x)?,
            Kind::Kesten => kesten_dosf(k, x),
            Kind::KestenIds => kesten_ids(k, x),
        };
        rows.push((x, v));
    }
    let var = if matches!(a.kind, Kind::FreeFourier) { "t" } else { "E" };
    let data = match a.output.format {
        Format::Csv => {
            let mut s = format!("{var},value\n");
            for (x, v) in &rows {
                let _ = writeln!(s, "{},{}", fmt_sig(*x), fmt_sig(*v));
            }
            s
        }
        Format::Json => to_json(&rows.iter().map(|(x, v)| serde_json::json!({var: x, "value": v})).collect::<Vec<_>>()),
    };
    emit(a.output.out.as_deref(), &data, &format!("closed-form: {} points", rows.len()))
}

fn run_constants(a: &ConstantsArgs) -> Outcome {
    let mut extra = BTreeMap::new();
    let mut put = |k: &str, v: Option<f64>| {
        if let Some(v) = v {
            extra.insert(k.to_string(), v);
        }
    };
    put("C_I", a.c_i);
    put("c0", a.c0);
    put("beta", a.beta);
    put("D", a.holder_d);
    put("E", a.energy);
    put("D1", a.d1);
    put("eps_decay", a.eps_decay);
    put("k", a.coordination.map(|k| k as f64));
    if a.beta.is_some() != a.holder_d.is_some() {
        return Err(Failure::Usage("--beta and --D go together".into()));
    }
    let table = constants(a.d, a.n, a.c, &extra)?;
    let mut text = String::new();
    for (k, v) in &table {
        let _ = writeln!(text, "{k} = {}", fmt_sig(*v));
    }
    print!("{text}");
    if let Some(p) = &a.output.out {
        let data = match a.output.format {
            Format::Csv => {
                let mut s = String::from("name,value\n");
                for (k, v) in &table {
                    let _ = writeln!(s, "{k},{}", fmt_sig(*v));
                }
                s
            }
            Format::Json => to_json(&table),
        };
        std::fs::write(p, data).map_err(|e| Failure::Compute(format!("writing {}: {e}", p.display())))?;
    }
    Ok(())
}

fn run_verify(a: &VerifyArgs) -> Outcome {
    let mut cfg = VerifyConfig::new(a.bound, a.seed);
    if let Some(v) = a.d {
        cfg.d = v;
    }
    if let Some(v) = a.k_block {
        cfg.k_block = v;
    }
    if let Some(v) = a.coordination {
        cfg.k = v;
    }
    if let Some(m) = &a.measure {
        cfg.measure = load_measure("--measure", m)?;
    }
    if let Some(v) = &a.etas {
        cfg.etas = v.clone();
    }
    if let Some(v) = &a.lambdas {
        cfg.lambdas = v.clone();
    }
    if let Some(v) = a.lambda_ref {
        cfg.lambda_ref = v;
    }
    if let Some(v) = &a.energies {
        cfg.energies = v.clone();
    }
    if let Some(v) = &a.eps {
        cfg.eps = v.clone();
    }
    macro_rules! set {
        ($($field:ident),*) => {$(if let Some(v) = a.$field { cfg.$field = v; })*};
    }
    set!(bank_size, degree, samples, side, bins, steps, trials, z, beta);
    if a.holder_d.is_some() {
        cfg.holder_d = a.holder_d;
    }
    if a.d1.is_some() {
        cfg.d1 = a.d1;
    }
    if a.eps_decay.is_some() {
        cfg.eps_decay = a.eps_decay;
    }
    let rep = verify(&cfg)?;
    let verdict = serde_json::to_value(rep.verdict).expect("verdict serializes");
    let summary = format!(
        "{}: {} (lhs {} + error {} vs rhs {}, margin {})",
        rep.bound_id.as_str(),
        verdict.as_str().unwrap_or("?"),
        fmt_short(rep.lhs),
        fmt_short(rep.total_error()),
        fmt_short(rep.rhs),
        fmt_short(rep.margin)
    );
    emit(a.out.as_deref(), &(rep.to_json() + "\n"), &summary)
}

fn configure_threads(n: Option<usize>) -> Outcome {
    let Some(n) = n else { return Ok(()) };
    if n == 0 {
        return Err(Failure::Usage("--threads must be at least 1".into()));
    }
    set_parallel(n > 1);
    #[cfg(feature = "parallel")]
    if n > 1 {
        // a second initialization only happens in tests; the first pool stays
        let _ = rayon::ThreadPoolBuilder::new().num_threads(n).build_global();
    }
    Ok(())
}

fn run(cli: &Cli) -> Outcome {
    configure_threads(cli.threads)?;
    match &cli.command {
        Cmd::Dos(a) => run_dos(a),
        Cmd::Ids(a) => run_ids(a),
        Cmd::Lyapunov(a) => run_lyapunov(a),
        Cmd::Metric(a) => run_metric(a),
        Cmd::ClosedForm(a) => run_closed_form(a),
        Cmd::Constants(a) => run_constants(a),
        Cmd::Verify(a) => run_verify(a),
    }
}

fn main() -> ExitCode {
    let cmd = Cli::command();
    let argv = match config::merge(&cmd, std::env::args_os().collect()) {
        Ok(v) => v,
        Err(msg) => {
            eprintln!("error: {msg}");
            return ExitCode::from(2);
        }
    };
    let matches = match cmd.try_get_matches_from(argv) {
        Ok(m) => m,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(if e.use_stderr() { 2 } else { 0 });
        }
    };
    let cli = match Cli::from_arg_matches(&matches) {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(2);
        }
    };
    match run(&cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(Failure::Usage(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(2)
        }
        Err(Failure::Compute(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(1)
        }
    }
}
