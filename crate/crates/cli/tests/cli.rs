use std::path::PathBuf;
use std::process::{Command, Output};

fn data(name: &str) -> String {
    let p: PathBuf = [env!("CARGO_MANIFEST_DIR"), "..", "..", "data", name]
        .iter()
        .collect();
    p.to_string_lossy().into_owned()
}

fn qge(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_qge"))
        .args(args)
        .env_remove("QGE_SEED")
        .output()
        .expect("binary runs")
}

fn code(out: &Output) -> i32 {
    out.status.code().expect("exit code")
}

fn stdout(out: &Output) -> String {
    String::from_utf8_lossy(&out.stdout).into_owned()
}

#[test]
fn diagonal_half_is_a_classical_ce() {
    let out = qge(&[
        "verify",
        &data("coordination_game.json"),
        "--mode",
        "classical-ce",
        "--profile",
        &data("diagonal_half.json"),
    ]);
    assert_eq!(code(&out), 0, "{}", stdout(&out));
}

#[test]
fn pure_lift_of_skewed_ce_fails_quantum_check() {
    let dir = tempfile::tempdir().unwrap();
    let state = dir.path().join("state.json");
    let state = state.to_str().unwrap();
    let lift = qge(&[
        "lift",
        &data("skewed_distribution.json"),
        "--kind",
        "pure",
        "--dims",
        "2,2",
        "-o",
        state,
    ]);
    assert_eq!(code(&lift), 0);
    let out = qge(&[
        "--json",
        "verify",
        &data("skewed_game.json"),
        "--mode",
        "quantum-ce",
        "--state",
        state,
    ]);
    assert_eq!(code(&out), 1);
    let v: serde_json::Value = serde_json::from_slice(&out.stdout).unwrap();
    let regret = v["quantum"][0]["regret"].as_f64().unwrap();
    // At least the 206 - 201 gain of the explicit rotation.
    assert!(regret >= 5.0 - 1e-6, "regret {regret}");
    assert_eq!(v["verdict"], false);
}

#[test]
fn malformed_and_mismatched_inputs_exit_2() {
    let dir = tempfile::tempdir().unwrap();
    let bad = dir.path().join("bad.json");
    std::fs::write(&bad, "{\"players\": 2").unwrap();
    let out = qge(&[
        "verify",
        bad.to_str().unwrap(),
        "--mode",
        "classical-ce",
        "--profile",
        &data("diagonal_half.json"),
    ]);
    assert_eq!(code(&out), 2);
    // 4-entry distribution against a 2x2 game is fine; a 3x3 profile is not.
    let big = dir.path().join("big.json");
    std::fs::write(&big, r#"{"distribution": [1,0,0,0,0,0,0,0,0]}"#).unwrap();
    let out = qge(&[
        "verify",
        &data("coordination_game.json"),
        "--mode",
        "classical-ce",
        "--profile",
        big.to_str().unwrap(),
    ]);
    assert_eq!(code(&out), 2);
    let out = qge(&[
        "verify",
        &data("coordination_game.json"),
        "--mode",
        "quantum-ce",
    ]);
    assert_eq!(code(&out), 2);
    let out = qge(&["frobnicate"]);
    assert_eq!(code(&out), 2);
}

#[test]
fn nash_mode_rejects_joint_distributions() {
    let out = qge(&[
        "verify",
        &data("coordination_game.json"),
        "--mode",
        "classical-nash",
        "--profile",
        &data("diagonal_half.json"),
    ]);
    assert_eq!(code(&out), 2);
    let out = qge(&[
        "verify",
        &data("matching_pennies.json"),
        "--mode",
        "classical-nash",
        "--profile",
        &data("uniform_profile.json"),
    ]);
    assert_eq!(code(&out), 0);
}

#[test]
fn querysim_boundary_on_k() {
    assert_eq!(code(&qge(&["querysim", "-n", "16", "-k", "14"])), 0);
    assert_eq!(code(&qge(&["querysim", "-n", "16", "-k", "15"])), 2);
    assert_eq!(code(&qge(&["querysim", "-n", "512", "-k", "4"])), 2);
    assert_eq!(code(&qge(&["querysim", "-n", "64", "-k", "33"])), 2);
}

#[test]
fn querysim_pairwise_bound_holds_for_grover() {
    let out = qge(&["--json", "querysim", "-n", "64", "-k", "4"]);
    let v: serde_json::Value = serde_json::from_slice(&out.stdout).unwrap();
    let rows = v["inequalities"].as_array().unwrap();
    let row = |name: &str| rows.iter().find(|r| r["name"] == name).unwrap()["holds"].clone();
    assert_eq!(row("pairwise"), true);
    assert_eq!(row("magnitude_sum"), true);
    assert_eq!(row("grover_closed_form"), true);
}

#[test]
fn seeded_csv_is_byte_identical() {
    let args = [
        "querysim",
        "-n",
        "32",
        "-k",
        "5",
        "--algorithm",
        "random",
        "--seed",
        "17",
        "--csv",
        "-",
    ];
    let a = qge(&args);
    let b = qge(&args);
    assert_eq!(a.stdout, b.stdout);
    assert!(stdout(&a).starts_with("inequality,lhs,rhs,holds\n"));
}

#[test]
fn seed_falls_back_to_environment() {
    let run = |env: Option<&str>, flag: Option<&str>| {
        let mut c = Command::new(env!("CARGO_BIN_EXE_qge"));
        c.args([
            "querysim",
            "-n",
            "16",
            "-k",
            "3",
            "--algorithm",
            "random",
            "--csv",
            "-",
        ]);
        if let Some(s) = flag {
            c.args(["--seed", s]);
        }
        match env {
            Some(s) => c.env("QGE_SEED", s),
            None => c.env_remove("QGE_SEED"),
        };
        c.output().unwrap().stdout
    };
    assert_eq!(run(Some("9"), None), run(None, Some("9")));
    assert_ne!(run(Some("9"), None), run(None, Some("10")));
}

#[test]
fn reduce_trials_write_csv() {
    let dir = tempfile::tempdir().unwrap();
    let csv = dir.path().join("trials.csv");
    let out = qge(&[
        "reduce",
        &data("matching_pennies.json"),
        "--budget",
        "hoeffding:0.01",
        "--trials",
        "10",
        "--csv",
        csv.to_str().unwrap(),
    ]);
    assert_eq!(code(&out), 0);
    assert_eq!(std::fs::read_to_string(csv).unwrap().lines().count(), 11);
    assert_eq!(
        code(&qge(&[
            "reduce",
            &data("matching_pennies.json"),
            "--budget",
            "bogus"
        ])),
        2
    );
}

#[test]
fn reduce_requires_normalized_game() {
    let out = qge(&["reduce", &data("skewed_game.json"), "--budget", "fixed:100"]);
    assert_eq!(code(&out), 2);
    let out = qge(&[
        "reduce",
        &data("skewed_game.json"),
        "--budget",
        "fixed:100",
        "--rescale",
    ]);
    assert_ne!(code(&out), 2);
}

#[test]
fn solve_ce_reports_optimal_welfare() {
    let out = qge(&[
        "--json",
        "solve",
        &data("coordination_game.json"),
        "--method",
        "ce",
    ]);
    assert_eq!(code(&out), 0);
    let v: serde_json::Value = serde_json::from_slice(&out.stdout).unwrap();
    assert!((v["objective"].as_f64().unwrap() - 4.0).abs() < 1e-9);
}

#[test]
fn repro_json_and_tamper() {
    let out = qge(&["--json", "repro", "--trials", "0", "--ceiling-states", "1"]);
    assert_eq!(code(&out), 0);
    let v: serde_json::Value = serde_json::from_slice(&out.stdout).unwrap();
    assert_eq!(v["passed"], true);
    let keys: Vec<_> = v["records"][0]
        .as_object()
        .unwrap()
        .keys()
        .cloned()
        .collect();
    assert!(keys.contains(&"claim_id".to_string()));

    let out = qge(&[
        "repro",
        "--trials",
        "0",
        "--ceiling-states",
        "1",
        "--tamper",
        "1e-3",
    ]);
    assert_eq!(code(&out), 1);
    assert!(stdout(&out).contains("skewed.mu1"));
}
