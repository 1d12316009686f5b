use super::*;

fn none() -> BTreeMap<String, f64> {
    BTreeMap::new()
}

#[test]
fn base_constants() {
    let c = constants(1, 1, 1.0, &none()).unwrap();
    let cb = (4306.0 + 837.0 * 6f64.sqrt()) / 5832.0;
    assert_eq!(c["c_b"], cb);
    assert_eq!(c["r"], 3.0);
    assert!((c["gamma"] - 48.0 * cb).abs() < 1e-12);
    assert_eq!(c["lambda0"], 0.125);
    assert!((c["xi0"] - 2.0 / 3.0).abs() < 1e-15);
    assert!((c["alpha0_eta_threshold"] - 0.125).abs() < 1e-15);
    assert!((c["weak_ids_exponent"] - 1.0 / 9.0).abs() < 1e-15);
    // the square-root singularity at the band edge: N₀(-2+ε) ≈ √ε/π
    assert!((c["c0"] - 0.5).abs() < 0.05, "{}", c["c0"]);
    assert!(c["c0"] >= 1.0 / std::f64::consts::PI);
    assert_eq!(c["c3"], 2.0 * (3.0 * c["gamma"]).max(c["c0"]));
    // large blocks switch γ to the N branch
    assert_eq!(gamma(1, 1000, 1.0), 4000.0);
}

#[test]
fn optional_constants() {
    let mut x = none();
    x.insert("k".into(), 3.0);
    x.insert("beta".into(), 1.0);
    x.insert("D".into(), 0.5);
    x.insert("E".into(), 0.0);
    x.insert("C_I".into(), 1.0);
    x.insert("D1".into(), 0.01);
    x.insert("eps_decay".into(), 0.5);
    let c = constants(3, 1, 1.0, &x).unwrap();
    assert!((c["xi0_bethe"] - 0.8447).abs() < 1e-4);
    let lb = (-3.0 * 3f64.ln() / c["xi0_bethe"]).exp();
    assert!((c["lambda_B"] - lb).abs() < 1e-15);
    assert!((c["lambda_B"] - 0.0203).abs() < 1e-3, "{}", c["lambda_B"]);
    assert!((c["r_B"] - (2.0 * 2f64.sqrt() + 1.0)).abs() < 1e-15);
    assert!((c["c_B"] - 3.0 / (4.0 * std::f64::consts::PI)).abs() < 1e-15);
    assert_eq!(c["c_tilde_B"], c["gamma_tilde_B"] + c["c_B"]);
    assert_eq!(c["C_L"], 2.0 * (2.0 * c["gamma"]));
    assert_eq!(c["zeta0"], 1.0 / 6.0);
    assert_eq!(c["delta_E"], 7.0);
    assert!((c["eps0"] - 1.0 / 50f64.sqrt()).abs() < 1e-15);
    assert_eq!(c["lloyd_exponent"], 0.2);
    assert!((c["dosf_exponent"] - 0.2 / 7.0).abs() < 1e-15);
    assert_eq!(c["C2"], 3.0 * c["gamma"] * 2.0 * (1.0 + E) * 7.0);
    let mut big = none();
    big.insert("k".into(), 8.0);
    assert!((constant("c_B", 1, 1, 1.0, &big).unwrap() - 28f64.sqrt() / 8.0).abs() < 1e-15);
}

#[test]
fn lloyd_constant_values() {
    let d3 = 1.0 / (2f64.powf(-1.5) * std::f64::consts::PI.powi(2));
    assert!((lloyd_constant(3).unwrap() - d3).abs() < 1e-12);
    assert!(lloyd_constant(2).is_err());
    assert!(constant("D_L", 1, 1, 1.0, &none()).is_err());
    assert!(constant("C_L", 1, 1, 1.0, &none()).is_err());
    assert!(constant("nonsense", 1, 1, 1.0, &none()).is_err());
}

#[test]
fn constants_grow_with_inputs() {
    for d in 1..4 {
        let mut prev = 0.0;
        for c in [0.5, 1.0, 2.0, 4.0] {
            let g = constant("gamma", d, 1, c, &none()).unwrap();
            assert!(g > prev);
            prev = g;
        }
        assert!(gamma(d, 1, 1.0) <= gamma(d + 1, 1, 1.0));
    }
}

#[test]
fn bank_is_deterministic_and_bracketed() {
    let a = test_function_bank(3.0, 16, 7);
    let b = test_function_bank(3.0, 16, 7);
    let c = test_function_bank(3.0, 16, 8);
    let xs = linspace(-3.0, 3.0, 61);
    let eval = |bank: &[TestFunction]| -> Vec<f64> { bank.iter().flat_map(|f| xs.iter().map(move |&x| f.eval(x))).collect() };
    assert_eq!(eval(&a), eval(&b));
    assert_ne!(eval(&a), eval(&c));
    for f in &a {
        assert_eq!(f.r, 3.0);
        // the declared Lipschitz constant dominates every difference quotient
        for w in xs.windows(2) {
            assert!((f.eval(w[1]) - f.eval(w[0])).abs() <= f.lip_norm() * (w[1] - w[0]) * (1.0 + 1e-9), "{}", f.label);
        }
    }
}

#[test]
fn bound_ids_round_trip() {
    for b in BoundId::ALL {
        assert_eq!(b.as_str().parse::<BoundId>().unwrap(), b);
        assert_eq!(serde_json::to_value(b).unwrap(), serde_json::Value::String(b.as_str().into()));
    }
    assert!("dosm".parse::<BoundId>().is_err());
}

#[test]
fn case_verdicts() {
    assert_eq!(Case::new(1.0, 2.0).err("e", 0.5).verdict(), Verdict::Pass);
    assert_eq!(Case::new(3.0, 2.0).err("e", 0.5).verdict(), Verdict::Fail);
    assert_eq!(Case::new(2.0, 2.0).err("e", 0.5).verdict(), Verdict::Inconclusive);
    assert_eq!(Case::new(0.0, 0.0).verdict(), Verdict::Pass);
}

#[test]
fn finite_rank_report() {
    let mut cfg = VerifyConfig::new(BoundId::FiniteRank, 7);
    cfg.trials = 20;
    let rep = verify(&cfg).unwrap();
    assert_eq!(rep.verdict, Verdict::Pass);
    assert!(rep.margin >= 0.0);
    assert_eq!(rep.parameters["cases"], json!(20));
    let again = verify(&cfg).unwrap();
    assert_eq!(rep, again);
    let json: serde_json::Value = serde_json::from_str(&rep.to_json()).unwrap();
    for key in ["bound_id", "parameters", "lhs", "lhs_error_breakdown", "rhs", "margin", "verdict", "threshold_note", "seed", "config_digest"] {
        assert!(json.get(key).is_some(), "{key}");
    }
    assert_eq!(json["bound_id"], "finite-rank");
    assert_eq!(rep.config_digest.len(), 64);
}

#[test]
fn counting_is_exact() {
    let mut cfg = VerifyConfig::new(BoundId::CountingExact, 3);
    cfg.trials = 12;
    let rep = verify(&cfg).unwrap();
    assert_eq!(rep.verdict, Verdict::Pass);
    assert_eq!(rep.lhs, 0.0);
}

#[test]
fn lloyd_report_passes() {
    let rep = verify(&VerifyConfig::new(BoundId::Lloyd, 0)).unwrap();
    assert_eq!(rep.verdict, Verdict::Pass, "{}", rep.to_json());
    let mut cfg = VerifyConfig::new(BoundId::Lloyd, 0);
    cfg.d = 2;
    assert!(verify(&cfg).is_err());
}

#[test]
fn out_of_threshold_cases_are_not_applicable() {
    let mut cfg = VerifyConfig::new(BoundId::WeakDosm, 1);
    cfg.lambdas = vec![0.5];
    let rep = verify(&cfg).unwrap();
    assert_eq!(rep.verdict, Verdict::NotApplicable);
    assert!(rep.threshold_note.contains("outside the threshold"));
}

#[test]
fn digest_tracks_config() {
    let a = VerifyConfig::new(BoundId::DosmMain, 1);
    let mut b = a.clone();
    assert_eq!(a.digest(), b.digest());
    b.samples += 1;
    assert_ne!(a.digest(), b.digest());
}
