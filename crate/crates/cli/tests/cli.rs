use std::path::Path;
use std::process::{Command, Output};

fn doslab(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_doslab")).args(args).output().expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8_lossy(&o.stdout).into_owned()
}

fn write(dir: &Path, name: &str, text: &str) -> String {
    let p = dir.join(name);
    std::fs::write(&p, text).unwrap();
    p.to_string_lossy().into_owned()
}

#[test]
fn constants_table_lists_lambda0() {
    let o = doslab(&["constants", "--d", "1", "--N", "1", "--C", "1"]);
    assert!(o.status.success());
    let out = stdout(&o);
    assert!(out.lines().any(|l| l == "lambda0 = 0.12500000000000000"), "{out}");
    assert!(out.contains("gamma = "));
}

#[test]
fn metric_between_measure_files() {
    let dir = tempfile::tempdir().unwrap();
    let a = write(dir.path(), "bernoulli.msr", "# bernoulli\nsupport_bound 1\natom -1 0.5\natom 1 0.5\n");
    let b = write(dir.path(), "delta0.msr", "support_bound 1\natom 0 1\n");
    let o = doslab(&["metric", "--a", &a, "--b", &b]);
    assert!(o.status.success());
    assert_eq!(stdout(&o).trim(), "0.6666667");
    let o = doslab(&["metric", "--a", "delta:0", "--b", "delta:1"]);
    assert_eq!(stdout(&o).trim(), "0.6666667");
}

#[test]
fn verify_finite_rank_passes() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("report.json");
    let o = doslab(&["verify", "--bound", "finite-rank", "--trials", "200", "--seed", "7", "--out", out.to_str().unwrap()]);
    assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));
    let rep: serde_json::Value = serde_json::from_str(&std::fs::read_to_string(&out).unwrap()).unwrap();
    assert_eq!(rep["verdict"], "pass");
    assert_eq!(rep["bound_id"], "finite-rank");
    assert_eq!(rep["seed"], 7);
    assert!(rep["margin"].as_f64().unwrap() >= 0.0);
    let keys: Vec<&String> = rep.as_object().unwrap().keys().collect();
    assert_eq!(keys.len(), 10);
}

#[test]
fn identical_runs_give_identical_files() {
    let dir = tempfile::tempdir().unwrap();
    let run = |name: &str, threads: &str| {
        let p = dir.path().join(name);
        let o = doslab(&[
            "--threads", threads, "dos", "--d", "2", "--degree", "12", "--samples", "20", "--seed", "5", "--out", p.to_str().unwrap(),
        ]);
        assert!(o.status.success());
        std::fs::read(p).unwrap()
    };
    let a = run("a.csv", "1");
    let b = run("b.csv", "1");
    let c = run("c.csv", "4");
    assert_eq!(a, b);
    assert_eq!(a, c);
    let text = String::from_utf8(a).unwrap();
    assert!(text.lines().any(|l| l == "moment_index,value,stderr"));
}

#[test]
fn seed_is_mandatory() {
    let o = doslab(&["dos", "--degree", "4"]);
    assert_eq!(o.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&o.stderr).contains("--seed"));
}

#[test]
fn usage_errors_exit_with_2() {
    assert_eq!(doslab(&["dos", "--seed", "1", "--bogus"]).status.code(), Some(2));
    assert_eq!(doslab(&["nonsense"]).status.code(), Some(2));
    let o = doslab(&["metric", "--a", "/no/such/file.msr", "--b", "delta:0"]);
    assert_eq!(o.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&o.stderr).contains("--a"));
    assert_eq!(doslab(&["verify", "--bound", "dosm", "--seed", "1"]).status.code(), Some(2));
    assert_eq!(doslab(&["closed-form", "--kind", "lloyd", "--d", "2"]).status.code(), Some(2));
}

#[test]
fn computation_errors_exit_with_1() {
    // the moment box for degree 4000 in d = 3 exceeds the site cap
    let o = doslab(&["dos", "--d", "3", "--degree", "4000", "--samples", "1", "--seed", "1"]);
    assert_eq!(o.status.code(), Some(1));
    assert!(String::from_utf8_lossy(&o.stderr).contains("exceeds the cap"));
}

#[test]
fn config_file_sits_under_flags() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = write(dir.path(), "run.cfg", "# sweep defaults\nseed = 3\ndegree = 10\nsamples = 4\n");
    let merged = doslab(&["--config", &cfg, "dos", "--degree", "6"]);
    let direct = doslab(&["dos", "--seed", "3", "--degree", "6", "--samples", "4"]);
    assert!(merged.status.success(), "{}", String::from_utf8_lossy(&merged.stderr));
    assert_eq!(merged.stdout, direct.stdout);
    let bad = write(dir.path(), "bad.cfg", "seed = 3\nwidth = 2\n");
    let o = doslab(&["--config", &bad, "dos"]);
    assert_eq!(o.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&o.stderr).contains("width"));
}

#[test]
fn model_file_drives_the_run() {
    let dir = tempfile::tempdir().unwrap();
    write(dir.path(), "uniform.msr", "support_bound 1\natom -0.5 0.5\natom 0.5 0.5\n");
    let model = write(dir.path(), "chain.model", "geometry = cube\nd = 1\nlambda = 2\nmeasure = uniform.msr\n");
    let o = doslab(&["dos", "--model", &model, "--degree", "2", "--samples", "3", "--seed", "1"]);
    assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));
    // m₂ = 2 + λ² E[ω²] = 2 + 4·0.25
    assert!(stdout(&o).lines().any(|l| l.starts_with("2,3.0000000000000000,")), "{}", stdout(&o));
}

#[test]
fn lyapunov_closed_form_and_transfer() {
    let o = doslab(&["lyapunov", "--method", "closed-form", "--energy", "4i,3", "--seed", "0"]);
    assert!(o.status.success());
    let out = stdout(&o);
    let lines: Vec<&str> = out.lines().collect();
    assert_eq!(lines[0], "re_E,im_E,value,stderr,method,steps");
    let v: f64 = lines[2].split(',').nth(2).unwrap().parse().unwrap();
    assert!((v - ((3.0 + 5f64.sqrt()) / 2.0).ln()).abs() < 1e-12);
    let o = doslab(&["lyapunov", "--measure", "delta:0", "--energy", "3", "--steps", "20000", "--seed", "2", "--format", "json"]);
    assert!(o.status.success());
    let rows: serde_json::Value = serde_json::from_str(&stdout(&o)).unwrap();
    assert_eq!(rows[0]["method"], "transfer");
    assert!((rows[0]["value"].as_f64().unwrap() - ((3.0 + 5f64.sqrt()) / 2.0).ln()).abs() < 1e-3);
}

#[test]
fn ids_and_closed_form_grids() {
    let o = doslab(&["ids", "--lambda", "0", "--energies", "0,1.4142135623730951", "--side", "510", "--bins", "32", "--samples", "1", "--seed", "1"]);
    assert!(o.status.success());
    let out = stdout(&o);
    let vals: Vec<f64> = out.lines().skip(1).map(|l| l.split(',').nth(1).unwrap().parse().unwrap()).collect();
    assert!((vals[0] - 0.5).abs() < 1e-3 && (vals[1] - 0.75).abs() < 0.01, "{out}");
    let o = doslab(&["closed-form", "--kind", "free-dosf", "--grid=-1:1:3"]);
    assert!(o.status.success());
    let rows: Vec<String> = stdout(&o).lines().map(String::from).collect();
    assert_eq!(rows.len(), 4);
    let mid: f64 = rows[2].split(',').nth(1).unwrap().parse().unwrap();
    assert!((mid - 1.0 / (2.0 * std::f64::consts::PI)).abs() < 1e-15);
}

#[test]
fn every_subcommand_has_help() {
    for sub in ["dos", "ids", "lyapunov", "metric", "closed-form", "constants", "verify"] {
        let o = doslab(&[sub, "--help"]);
        assert!(o.status.success());
        let text = stdout(&o);
        assert!(text.contains("--out"), "{sub}");
    }
    let text = stdout(&doslab(&["dos", "--help"]));
    assert!(text.contains("[sites]") && text.contains("[energy]"));
}
