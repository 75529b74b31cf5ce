use std::path::PathBuf;
use std::process::{Command, Output};

use serde_json::Value;

fn root() -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("../..")
}

fn fixture(name: &str) -> String {
    root().join("fixtures").join(name).display().to_string()
}

fn run(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_debate-lab"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn code(o: &Output) -> i32 {
    o.status.code().expect("exited normally")
}

fn stderr(o: &Output) -> String {
    String::from_utf8_lossy(&o.stderr).into_owned()
}

fn validator() -> jsonschema::Validator {
    let text = std::fs::read_to_string(root().join("schema/report.schema.json")).unwrap();
    jsonschema::validator_for(&serde_json::from_str(&text).unwrap()).unwrap()
}

/// Parses stdout and checks it against the published schema.
fn report(o: &Output) -> Value {
    let v: Value = serde_json::from_slice(&o.stdout).unwrap_or_else(|e| {
        panic!("stdout is not JSON ({e}): {}", String::from_utf8_lossy(&o.stdout))
    });
    let errors: Vec<String> = validator().iter_errors(&v).map(|e| e.to_string()).collect();
    assert!(errors.is_empty(), "schema violations: {errors:#?}");
    v
}

fn write_config(dir: &tempfile::TempDir, name: &str, body: &str) -> String {
    let p = dir.path().join(name);
    std::fs::write(&p, body).unwrap();
    p.display().to_string()
}

#[test]
fn solve_reports_the_debate_regime() {
    let o = run(&["solve", &fixture("f1-normal.json")]);
    assert_eq!(code(&o), 0, "{}", stderr(&o));
    let v = report(&o);
    assert_eq!(v["results"]["regime"], "Debate");
    assert_eq!(v["results"]["incumbent_announcements"][0], "P");
    let margin = v["results"]["margin"].as_f64().unwrap();
    assert!((margin + 0.01389).abs() < 1e-4, "{margin}");
}

#[test]
fn solve_reports_a_knife_edge_for_uniform_shocks() {
    let o = run(&["solve", &fixture("f1-uniform.json")]);
    assert_eq!(code(&o), 0);
    let v = report(&o);
    assert_eq!(v["results"]["regime"], "KnifeEdge");
    assert!(v["results"]["margin"].as_f64().unwrap().abs() <= 1e-10);
}

#[test]
fn solve_on_the_refusal_fixture() {
    let v = report(&run(&["solve", &fixture("nodebate-negexp.json")]));
    assert_eq!(v["results"]["regime"], "NoDebate");
    let margin = v["results"]["margin"].as_f64().unwrap();
    assert!((margin - 0.00158).abs() < 1e-4, "{margin}");
}

#[test]
fn input_errors_exit_two() {
    let dir = tempfile::tempdir().unwrap();
    let half = write_config(
        &dir,
        "half.json",
        r#"{"q_I": 1.0,
            "prior": {"family": "discrete", "points": [[0.0, 0.25], [2.0, 0.25]]},
            "shock": {"family": "normal", "params": {"mu": 0.0, "sigma": 1.0}},
            "csf": {"family": "tullock"}}"#,
    );
    let o = run(&["solve", &half]);
    assert_eq!(code(&o), 2);
    assert!(stderr(&o).contains("prior"), "{}", stderr(&o));
    assert!(o.stdout.is_empty());

    let o = run(&["solve", &dir.path().join("missing.json").display().to_string()]);
    assert_eq!(code(&o), 2);
    let garbage = write_config(&dir, "garbage.json", "{ not json");
    assert_eq!(code(&run(&["solve", &garbage])), 2);
    // The contest function must be well behaved before anything is solved.
    let o = run(&["solve", &fixture("convex-grid.json")]);
    assert_eq!(code(&o), 2);
    assert!(stderr(&o).contains("concave-in-q_C"), "{}", stderr(&o));
}

#[test]
fn verify_passes_on_the_reference_games() {
    for name in ["f1-normal.json", "nodebate-negexp.json"] {
        let o = run(&["verify", &fixture(name), "--n", "200000"]);
        assert_eq!(code(&o), 0, "{name}: {}", stderr(&o));
        let v = report(&o);
        assert_eq!(v["results"]["all_pass"], true);
        assert_eq!(v["results"]["checks"].as_array().unwrap().len(), 6);
    }
}

#[test]
fn verify_names_the_failing_check() {
    let o = run(&["verify", &fixture("convex-grid.json"), "--n", "200000"]);
    assert_eq!(code(&o), 1);
    assert!(stderr(&o).contains("validate_csf"), "{}", stderr(&o));
    let v = report(&o);
    assert_eq!(v["results"]["failed"], serde_json::json!(["validate_csf"]));
}

#[test]
fn simulate_is_reproducible_and_accurate() {
    let args = [
        "simulate",
        &fixture("f1-uniform.json"),
        "--scenario",
        "no-debate",
        "--n",
        "1000000",
        "--seed",
        "42",
    ];
    let a = run(&args);
    let b = run(&args);
    assert_eq!(code(&a), 0);
    assert_eq!(a.stdout, b.stdout);
    let v = report(&a);
    let est = v["results"]["estimate"].as_f64().unwrap();
    let se = v["results"]["stderr"].as_f64().unwrap();
    assert!((est - 0.5).abs() <= 4.0 * se, "{est} ± {se}");
}

#[test]
fn simulate_argument_errors() {
    let f = fixture("f1-uniform.json");
    assert_eq!(code(&run(&["simulate", &f, "--n", "0"])), 2);
    assert_eq!(code(&run(&["simulate", &f, "--scenario", "debate-conditional"])), 2);
    assert_eq!(code(&run(&["simulate", &f, "--q-c", "1"])), 2);
    assert_eq!(code(&run(&["simulate", &f, "--scenario", "sometimes"])), 2);
}

#[test]
fn simulate_writes_counts_and_report_files() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("report.json");
    let counts = dir.path().join("counts.csv");
    let o = run(&[
        "simulate",
        &fixture("f1-uniform.json"),
        "--scenario",
        "debate-conditional",
        "--q-c",
        "1",
        "--n",
        "300000",
        "--out",
        &out.display().to_string(),
        "--counts",
        &counts.display().to_string(),
    ]);
    assert_eq!(code(&o), 0, "{}", stderr(&o));
    assert!(o.stdout.is_empty());
    let v: Value = serde_json::from_str(&std::fs::read_to_string(&out).unwrap()).unwrap();
    let est = v["results"]["estimate"].as_f64().unwrap();
    assert!((est - 0.5625).abs() <= 4.0 * v["results"]["stderr"].as_f64().unwrap());
    let csv = std::fs::read_to_string(&counts).unwrap();
    assert!(csv.starts_with("scenario,q_c,n,seed,challenger_wins"), "{csv}");
    assert_eq!(csv.lines().count(), 2);
}

#[test]
fn echoed_config_reproduces_the_results() {
    let dir = tempfile::tempdir().unwrap();
    let echo = dir.path().join("echo.json").display().to_string();
    let cases: [&[&str]; 2] = [&["solve"], &["simulate", "--n", "50000", "--seed", "9"]];
    for (args, name) in cases.into_iter().zip(["gamma-normal.json", "f1-normal.json"]) {
        let with = |config: &str| {
            let mut v = vec![args[0], config];
            v.extend_from_slice(&args[1..]);
            report(&run(&v))
        };
        let first = with(&fixture(name));
        std::fs::write(&echo, first["config"].to_string()).unwrap();
        let second = with(&echo);
        assert_eq!(first["results"], second["results"], "{name}");
        assert_eq!(first["config"], second["config"]);
    }
}

fn sweep_rows(o: &Output) -> Vec<Vec<String>> {
    String::from_utf8(o.stdout.clone())
        .unwrap()
        .lines()
        .map(|l| l.split(',').map(str::to_string).collect())
        .collect()
}

#[test]
fn single_step_sweep_matches_solve() {
    let f = fixture("f1-normal.json");
    let o = run(&["sweep", &f, "--param", "q_I", "--range", "1:1", "--steps", "1"]);
    assert_eq!(code(&o), 0, "{}", stderr(&o));
    let rows = sweep_rows(&o);
    assert_eq!(rows.len(), 2);
    let col = |name: &str| rows[0].iter().position(|h| h == name).unwrap();
    let solved = report(&run(&["solve", &f]));
    assert_eq!(rows[1][col("regime")], "Debate");
    for key in ["margin", "debate_payoff", "no_debate_payoff"] {
        let cell: f64 = rows[1][col(key)].parse().unwrap();
        assert_eq!(cell, solved["results"][key].as_f64().unwrap(), "{key}");
    }
}

#[test]
fn quality_sweep_labels() {
    let o = run(&[
        "sweep",
        &fixture("f1-uniform.json"),
        "--param",
        "q_C",
        "--range",
        "0:4",
        "--steps",
        "5",
    ]);
    assert_eq!(code(&o), 0);
    let rows = sweep_rows(&o);
    let label = rows[0].iter().position(|h| h == "label").unwrap();
    let labels: Vec<&str> = rows[1..].iter().map(|r| r[label].as_str()).collect();
    assert_eq!(labels[0], "Informative");
    assert_eq!(labels[1], "Noisy");
    assert_eq!(labels[4], "Informative");
}

#[test]
fn incumbent_sweep_moves_toward_refusal() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("sweep.csv");
    let o = run(&[
        "sweep",
        &fixture("gamma-normal.json"),
        "--param",
        "q_I",
        "--range",
        "0.05:1",
        "--steps",
        "20",
        "--out",
        &out.display().to_string(),
    ]);
    assert_eq!(code(&o), 0, "{}", stderr(&o));
    let text = std::fs::read_to_string(&out).unwrap();
    let margins: Vec<f64> = text
        .lines()
        .skip(1)
        .map(|l| l.split(',').nth(3).unwrap().parse().unwrap())
        .collect();
    assert_eq!(margins.len(), 20);
    assert!(text.lines().nth(1).unwrap().contains(",Debate,"));
    assert!(margins[19] > margins[0], "{margins:?}");
}

#[test]
fn sweep_rejects_out_of_domain_ranges() {
    let f = fixture("f1-normal.json");
    let o = run(&["sweep", &f, "--param", "q_I", "--range", "0.5:1.5", "--steps", "3"]);
    assert_eq!(code(&o), 2);
    assert!(stderr(&o).contains("q_I"), "{}", stderr(&o));
    assert!(o.stdout.is_empty());
    assert_eq!(code(&run(&["sweep", &f, "--param", "q_C", "--range", "-1:1"])), 2);
    assert_eq!(code(&run(&["sweep", &f, "--param", "bogus", "--range", "0:1"])), 2);
    assert_eq!(code(&run(&["sweep", &f, "--param", "q_I", "--range", "0.5"])), 2);
    assert_eq!(code(&run(&["sweep", &f, "--param", "prior.shape", "--range", "1:2"])), 2);
}
