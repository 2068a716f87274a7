use std::process::{Command, Output};

fn wbell(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_wbell"))
        .args(args)
        .env_remove("WBELL_SEED")
        .output()
        .expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8_lossy(&o.stdout).into_owned()
}

#[test]
fn bound_and_oracle_checks_exit_zero() {
    let o = wbell(&["bell-bound", "--ineq", "b4zb"]);
    assert_eq!(o.status.code(), Some(0));
    assert!(stdout(&o).contains("enumerated LHV bound 4"));

    let o = wbell(&["verify-oracle", "--trials", "50", "--seed", "4"]);
    assert_eq!(o.status.code(), Some(0));
    assert!(stdout(&o).contains("PASS"));
}

#[test]
fn usage_errors_exit_two() {
    assert_eq!(
        wbell(&["bell-bound", "--ineq", "nope"]).status.code(),
        Some(2)
    );
    assert_eq!(
        wbell(&["correlate", "--n", "3", "--alphas", "x"])
            .status
            .code(),
        Some(2)
    );
    assert_eq!(wbell(&["source", "--n", "1"]).status.code(), Some(2));
}

#[test]
fn correlate_with_subset_and_complex_alpha() {
    let o = wbell(&[
        "correlate",
        "--n",
        "3",
        "--alphas",
        "0.3,-0.2:0.1",
        "--subset",
        "0,2",
        "--eta",
        "0.9",
        "--check-oracle",
    ]);
    assert_eq!(o.status.code(), Some(0), "{}", stdout(&o));
    assert!(stdout(&o).contains("oracle:"));
}

#[test]
fn optimize_output_round_trips_through_bell_eval() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("run.json");
    let out_s = out.to_str().unwrap();
    let o = wbell(&[
        "optimize",
        "--ineq",
        "b3prime",
        "--restarts",
        "8",
        "--seed",
        "2",
        "--output",
        out_s,
    ]);
    assert_eq!(o.status.code(), Some(0));

    let doc: serde_json::Value =
        serde_json::from_str(&std::fs::read_to_string(&out).unwrap()).unwrap();
    assert_eq!(doc["command"], "optimize");
    assert_eq!(doc["config"]["seed"], 2);
    let best = doc["results"]["best_value"].as_f64().unwrap();

    let again = dir.path().join("again.json");
    let o = wbell(&[
        "bell-eval",
        "--ineq",
        "b3prime",
        "--settings",
        out_s,
        "--output",
        again.to_str().unwrap(),
    ]);
    assert_eq!(o.status.code(), Some(0));
    let doc: serde_json::Value =
        serde_json::from_str(&std::fs::read_to_string(&again).unwrap()).unwrap();
    assert_eq!(doc["results"]["value"].as_f64().unwrap(), best);
}

#[test]
fn seed_comes_from_environment() {
    let run = |seed: &str| {
        Command::new(env!("CARGO_BIN_EXE_wbell"))
            .args(["optimize", "--ineq", "b3zb", "--restarts", "3"])
            .env("WBELL_SEED", seed)
            .output()
            .unwrap()
    };
    let a = stdout(&run("7"));
    assert_eq!(a, stdout(&run("7")));
    assert!(a.contains("seed 7"));
}

#[test]
fn threshold_without_violation_is_a_check_failure() {
    // the three-mode generator expression never exceeds its bound
    let o = wbell(&["threshold", "--ineq", "b3zb", "--restarts", "5"]);
    assert_eq!(o.status.code(), Some(1));
}
