use std::path::{Path, PathBuf};
use std::process::Command;

use causal_bandits::cli::{self, EXIT_CONFIG, EXIT_OK, EXIT_RUNTIME, EXIT_USAGE};

fn run(args: &[&str]) -> (i32, String, String) {
    let mut out = Vec::new();
    let mut err = Vec::new();
    let argv = std::iter::once("causal-bandits").chain(args.iter().copied());
    let code = cli::main_with(argv, &mut out, &mut err);
    (
        code,
        String::from_utf8(out).unwrap(),
        String::from_utf8(err).unwrap(),
    )
}

fn bundled(rel: &str) -> String {
    Path::new(env!("CARGO_MANIFEST_DIR"))
        .join(rel)
        .display()
        .to_string()
}

#[test]
fn help_matches_golden_file() {
    let golden = Path::new(env!("CARGO_MANIFEST_DIR")).join("tests/golden/help.txt");
    let text = cli::help_text();
    if std::env::var_os("UPDATE_GOLDEN").is_some() {
        std::fs::write(&golden, &text).unwrap();
    }
    assert_eq!(text, std::fs::read_to_string(&golden).unwrap());
    for flag in [
        "--seed", "--trials", "--out", "--jobs", "--budget", "--json",
    ] {
        assert!(text.contains(flag), "{flag}");
    }
}

#[test]
fn inspect_graph_lists_c_components() {
    let (code, out, _) = run(&[
        "inspect-graph",
        &bundled("configs/graphs/confounded_example.toml"),
    ]);
    assert_eq!(code, EXIT_OK);
    assert!(
        out.contains("c-components: {{X1, X2, X3, X5}, {X4}}"),
        "{out}"
    );
    assert!(out.contains("X4: effective parents = {X2}, k = 1"), "{out}");
}

#[test]
fn inspect_graph_parallel_has_no_backdoor() {
    let (code, out, _) = run(&["inspect-graph", &bundled("configs/graphs/parallel_7.toml")]);
    assert_eq!(code, EXIT_OK);
    assert!(out.contains("no-backdoor: true\n"));
    assert_eq!(out.matches("no-backdoor: true,").count(), 7);
    assert!(!out.contains("no-backdoor: false"));
}

#[test]
fn inspect_graph_reports_parse_position() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("bad.toml");
    std::fs::write(
        &path,
        "nodes = [\"A\", \"Y\"]\ndirected = [\"A=>Y\"]\nreward = \"Y\"\n",
    )
    .unwrap();
    let (code, _, err) = run(&["inspect-graph", path.to_str().unwrap()]);
    assert_eq!(code, EXIT_CONFIG);
    assert!(err.contains("line 2"), "{err}");
}

#[test]
fn oracle_reports_parallel_means() {
    let (code, out, _) = run(&["oracle", "--parallel", "50", "--json", "--budget", "10"]);
    assert_eq!(code, EXIT_OK);
    let v: serde_json::Value = serde_json::from_str(&out).unwrap();
    let means = v["means"].as_array().unwrap();
    assert!((means[0].as_f64().unwrap() - 0.5).abs() < 1e-12);
    assert_eq!(v["labels"][2], "do(X1=1)");
    assert!((means[2].as_f64().unwrap() - 0.8).abs() < 1e-12);
    assert_eq!(v["best_arm"], 2);
    assert!((v["optimal_value"].as_f64().unwrap() - 8.0).abs() < 1e-9);
}

#[test]
fn oracle_zero_budget_has_zero_benchmark() {
    let (code, out, _) = run(&["oracle", "--parallel", "3", "--budget", "0"]);
    assert_eq!(code, EXIT_OK);
    assert!(out.contains("R*(0) = 0.000000"), "{out}");
}

#[test]
fn oracle_rejects_oversized_models() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("chain.toml");
    let names: Vec<String> = (1..=24).map(|i| format!("\"X{i}\"")).collect();
    let mut edges: Vec<String> = (1..24).map(|i| format!("\"X{i}->X{}\"", i + 1)).collect();
    edges.push("\"X24->Y\"".into());
    std::fs::write(
        &path,
        format!(
            "nodes = [{}, \"Y\"]\ndirected = [{}]\nreward = \"Y\"\n",
            names.join(", "),
            edges.join(", ")
        ),
    )
    .unwrap();
    let (code, _, err) = run(&["oracle", "--random", path.to_str().unwrap()]);
    assert_eq!(code, EXIT_RUNTIME);
    assert!(err.contains("exceeds the cap"), "{err}");
}

#[test]
fn unknown_flag_is_a_usage_error() {
    let (code, _, err) = run(&["sweep", "x.cfg", "--frobnicate"]);
    assert_eq!(code, EXIT_USAGE);
    assert!(err.contains("Usage"), "{err}");
    let (code, _, _) = run(&[]);
    assert_eq!(code, EXIT_USAGE);
}

#[test]
fn missing_config_is_a_config_error() {
    let (code, _, err) = run(&["run", "/nonexistent/x.cfg"]);
    assert_eq!(code, EXIT_CONFIG);
    assert!(err.contains("/nonexistent/x.cfg"), "{err}");
}

fn sweep_to(dir: &Path, name: &str, extra: &[&str]) -> (PathBuf, String) {
    let out = dir.join(name);
    let config = bundled("configs/fig10_simple_parallel_n7.cfg");
    let mut args = vec![
        "run",
        config.as_str(),
        "--trials",
        "5",
        "--out",
        out.to_str().unwrap(),
    ];
    args.extend(extra);
    let (code, stdout, err) = run(&args);
    assert_eq!(code, EXIT_OK, "{err}");
    (out, stdout)
}

#[test]
fn run_overrides_trials_and_is_reproducible() {
    let dir = tempfile::tempdir().unwrap();
    let (a, stdout) = sweep_to(dir.path(), "a.csv", &["--budget", "600"]);
    let (b, _) = sweep_to(dir.path(), "b.csv", &["--budget", "600"]);
    let bytes = std::fs::read(&a).unwrap();
    assert_eq!(bytes, std::fs::read(&b).unwrap());
    let cells = causal_bandits::harness::read_report_csv(&a).unwrap();
    assert_eq!(cells.len(), 3);
    assert!(cells
        .iter()
        .all(|c| c.trials == 5 && c.sweep_value == 600.0));
    assert!(stdout.contains("5 trials per point"));
    assert!(stdout.contains("successive-rejects"));
}

#[test]
fn seed_override_changes_the_echoed_config() {
    let dir = tempfile::tempdir().unwrap();
    let (a, _) = sweep_to(dir.path(), "s.csv", &["--budget", "300", "--seed", "99"]);
    let side = causal_bandits::harness::sidecar_path(&a);
    let json: serde_json::Value =
        serde_json::from_str(&std::fs::read_to_string(side).unwrap()).unwrap();
    assert_eq!(json["config"]["seed"], 99);
    assert_eq!(json["config"]["trials"], 5);
}

#[test]
fn binary_exit_codes() {
    let bin = env!("CARGO_BIN_EXE_causal-bandits");
    let ok = Command::new(bin)
        .args(["inspect-graph", "front-door"])
        .output()
        .unwrap();
    assert_eq!(ok.status.code(), Some(EXIT_OK));
    assert!(String::from_utf8_lossy(&ok.stdout).contains("c-components"));
    let usage = Command::new(bin).arg("--nope").output().unwrap();
    assert_eq!(usage.status.code(), Some(EXIT_USAGE));
    let config = Command::new(bin)
        .args(["sweep", "/nonexistent.cfg"])
        .output()
        .unwrap();
    assert_eq!(config.status.code(), Some(EXIT_CONFIG));
    let help = Command::new(bin).arg("--help").output().unwrap();
    assert_eq!(help.status.code(), Some(EXIT_OK));
}
