use std::collections::BTreeSet;
use std::path::Path;
use std::process::{Command as Process, Output};

use proptest::prelude::*;
use serde_json::Value;
use umm_core::cli::{run, Command, ConstantsConfig, Provenance, Report, RunConfig, ScalarText, CSV_COLUMNS};
use umm_core::scalar::Scalar;

fn umm(args: &[&str]) -> Output {
    Process::new(env!("CARGO_BIN_EXE_umm")).args(args).env_remove("UMM_SEED").output().expect("binary runs")
}

fn stderr(o: &Output) -> String {
    String::from_utf8_lossy(&o.stderr).into_owned()
}

fn spectra_overrides() -> Vec<String> {
    vec![
        "constants.kind=spectra".into(),
        r#"constants.generators=["b1","b2"]"#.into(),
        r#"constants.values=[[1,"1/2",0],[3,5,"-2/3"]]"#.into(),
    ]
}

#[test]
fn hurwitz_single_transposition_free_count() {
    let config = RunConfig::load(None, Some(Command::Hurwitz), &["g=0".into(), "d=1".into()]).unwrap();
    let report = run(&config).unwrap();
    assert_eq!(report.exact["table"].as_array().unwrap().len(), 1);
    assert_eq!(report.exact["table"][0]["count"], 1);
    assert_eq!(report.rows[0].quantity, "H_0((1);(1))");
    assert_eq!(report.rows[0].estimate_re, 1.0);

    let out = umm(&["hurwitz", "g=0", "d=1"]);
    assert!(out.status.success(), "{}", stderr(&out));
    let json: Value = serde_json::from_slice(&out.stdout).unwrap();
    assert_eq!(json["exact"]["table"][0]["count"], 1);
}

#[test]
fn master_field_of_conjugated_product_is_product_of_traces() {
    let mut overrides = spectra_overrides();
    overrides.push("p=b1 u1 b2 u1^-1".into());
    let config = RunConfig::load(None, Some(Command::MasterField), &overrides).unwrap();
    let report = run(&config).unwrap();
    let value: Scalar = serde_json::from_value(report.exact["series"][0].clone()).unwrap();
    // σ(b1) = 1/2, σ(b2) = 22/9
    assert_eq!(value, &Scalar::ratio(1, 2) * &Scalar::ratio(22, 9));
    for k in 1..=config.n_max {
        let c: Scalar = serde_json::from_value(report.exact["series"][k].clone()).unwrap();
        assert!(c.is_zero());
    }
}

#[test]
fn malformed_polynomial_names_token_and_exits_2() {
    let out = umm(&["clt", "p=u1 + @ u1^-1"]);
    assert_eq!(out.status.code(), Some(2));
    let err = stderr(&out);
    assert!(err.contains("polynomial") && err.contains('@'), "{err}");

    let out = umm(&["master-field", "p=b9 u1"]);
    assert_eq!(out.status.code(), Some(2));
    assert!(stderr(&out).contains("b9"));
}

#[test]
fn unknown_keys_and_bad_json_exit_2() {
    let out = umm(&["hurwitz", "genius=1"]);
    assert_eq!(out.status.code(), Some(2));
    assert!(stderr(&out).contains("genius"));

    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("bad.json");
    std::fs::write(&path, "{\n  \"command\": \"hurwitz\",\n  \"d_max\": 2,\n  \"extra\": true\n}\n").unwrap();
    let out = umm(&["run", "--config", path.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(2));
    assert!(stderr(&out).contains("extra"), "{}", stderr(&out));

    std::fs::write(&path, "{\n  \"command\": \"hurwitz\"\n  \"d_max\": 2\n}\n").unwrap();
    let out = umm(&["run", "--config", path.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(2));
    assert!(stderr(&out).contains("line 3"), "{}", stderr(&out));
}

#[test]
fn failed_check_exits_1() {
    let out = umm(&["mc-validate", "p=u1", "N=8", "ensemble.samples=200", "sigmas=1e-12"]);
    assert_eq!(out.status.code(), Some(1), "{}", stderr(&out));
    assert!(stderr(&out).contains("FAIL"));
}

fn run_to_csv(dir: &Path, name: &str, args: &[&str]) -> Vec<u8> {
    let csv = dir.join(name);
    let mut full: Vec<&str> = args.to_vec();
    let csv_str = csv.to_str().unwrap().to_string();
    full.extend(["--csv", &csv_str, "--json", "/dev/null"]);
    let out = umm(&full);
    assert!(out.status.success(), "{}", stderr(&out));
    std::fs::read(csv).unwrap()
}

#[test]
fn same_config_and_seed_give_identical_csv() {
    let dir = tempfile::tempdir().unwrap();
    let args = [
        "mc-cumulants",
        "arguments=u1 + u1^-1; u1 + u1^-1",
        "V=u1 + u1^-1",
        "t=0.2",
        "N=[4,8]",
        "ensemble.samples=300",
        "seed=11",
    ];
    let a = run_to_csv(dir.path(), "a.csv", &args);
    let b = run_to_csv(dir.path(), "b.csv", &args);
    assert_eq!(a, b);
    let text = String::from_utf8(a).unwrap();
    assert!(text.starts_with(&CSV_COLUMNS.join(",")));
    assert_eq!(text.lines().count(), 3);

    let mut other = args.to_vec();
    other[6] = "seed=12";
    assert_ne!(run_to_csv(dir.path(), "c.csv", &other), b);
}

#[test]
fn seed_env_overrides_default() {
    let out = Process::new(env!("CARGO_BIN_EXE_umm"))
        .args(["hurwitz", "d=1", "--print-config"])
        .env("UMM_SEED", "77")
        .output()
        .unwrap();
    let config: Value = serde_json::from_slice(&out.stdout).unwrap();
    assert_eq!(config["seed"], 77);
    let out = Process::new(env!("CARGO_BIN_EXE_umm"))
        .args(["hurwitz", "d=1", "seed=5", "--print-config"])
        .env("UMM_SEED", "77")
        .output()
        .unwrap();
    assert_eq!(serde_json::from_slice::<Value>(&out.stdout).unwrap()["seed"], 5);
}

#[test]
fn report_json_parses_back() {
    let mut overrides = spectra_overrides();
    overrides.extend(["p=b1 u1 b2 u1^-1 + u1".to_string(), "V=u1 + u1^-1".into(), "t=0.1".into(), "n_max=2".into()]);
    let config = RunConfig::load(None, Some(Command::MasterField), &overrides).unwrap();
    let report = run(&config).unwrap();
    let back: Report = serde_json::from_str(&report.to_json()).unwrap();
    assert_eq!(back, report);
    assert!(report.rows.iter().any(|r| r.t == Some(0.1)));
}

#[test]
fn provenance_tracks_potential() {
    let a = RunConfig::load(None, Some(Command::FreeEnergy), &["V=u1 + u1^-1".into()]).unwrap();
    let b = RunConfig::load(None, Some(Command::FreeEnergy), &["V=u1^2 + u1^-2".into()]).unwrap();
    assert_ne!(Provenance::of(&a).config_hash, Provenance::of(&b).config_hash);
    assert_eq!(Provenance::of(&a), run(&a).unwrap().provenance);
}

#[test]
fn minimal_config_gets_defaults() {
    let c = RunConfig::from_json(r#"{"command": "validate"}"#, "inline").unwrap();
    assert_eq!((c.xi, c.n_max, c.ensemble.sizes.clone()), (12.0, 4, vec![16, 32, 64]));
    assert_eq!(c.unitaries, 1);
    assert!(c.seed.is_some());
}

#[test]
fn schema_lists_every_config_key() {
    let schema: Value =
        serde_json::from_str(include_str!("../../../schema/run_config.schema.json")).expect("schema is JSON");
    let listed: BTreeSet<String> = schema["properties"].as_object().unwrap().keys().cloned().collect();
    let mut full = RunConfig::new(Command::Hurwitz);
    full.constants =
        Some(ConstantsConfig::Spectra { generators: vec!["x".into()], values: vec![vec![ScalarText(Scalar::one())]] });
    full.polynomial = Some("u1".into());
    full.arguments = vec!["u1".into()];
    full.alpha = Some(vec![1]);
    full.beta = Some(vec![1]);
    full.operator = Some(umm_core::cli::Operator::Star);
    full.output.json = Some("r.json".into());
    let value = serde_json::to_value(&full).unwrap();
    let keys: BTreeSet<String> = value.as_object().unwrap().keys().cloned().collect();
    assert_eq!(listed, keys);
    let ensemble: BTreeSet<String> =
        schema["properties"]["ensemble"]["properties"].as_object().unwrap().keys().cloned().collect();
    assert_eq!(ensemble, ["sizes", "samples", "sampler"].iter().map(|s| s.to_string()).collect());
}

fn arb_config() -> impl Strategy<Value = RunConfig> {
    let command = prop::sample::select(vec![
        Command::MasterField,
        Command::TauKg,
        Command::Hurwitz,
        Command::McCumulants,
        Command::Clt,
    ]);
    let spectrum = prop::collection::vec((-9i64..9, 1i64..5), 2);
    (
        command,
        1usize..3,
        prop::option::of(prop::collection::vec(spectrum, 1..3)),
        prop::sample::select(vec!["u1", "u1 + u1^-1", "1/2*u1^2 - 3"]),
        -1.0f64..1.0,
        (0usize..6, 0usize..3, 1usize..5),
        prop::collection::vec(1usize..64, 1..4),
        any::<u64>(),
    )
        .prop_map(|(command, unitaries, spectra, text, coupling, (n_max, genus, d_max), sizes, seed)| {
            let mut c = RunConfig::new(command);
            c.unitaries = unitaries;
            c.constants = spectra.map(|s| ConstantsConfig::Spectra {
                generators: (0..s.len()).map(|k| format!("c{k}")).collect(),
                values: s.iter().map(|v| v.iter().map(|&(p, q)| ScalarText(Scalar::ratio(p, q))).collect()).collect(),
            });
            c.polynomial = Some(text.to_string());
            c.potential = text.to_string();
            c.coupling = coupling;
            c.n_max = n_max;
            c.genus = genus;
            c.d_max = d_max;
            c.ensemble.sizes = sizes;
            c.seed = Some(seed);
            c
        })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn config_save_load_round_trip(c in arb_config()) {
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("c.json");
        c.save(&path).unwrap();
        let back = RunConfig::load(Some(&path), None, &[]).unwrap();
        prop_assert_eq!(back, c);
    }
}
