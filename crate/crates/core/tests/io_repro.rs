use qge::io::{self, CircuitFile, DensityFile, GameFile, Profile};
use qge::query::{self, Oracle};
use qge::repro::{self, ReproOptions};
use qge::{examples, Error};

#[test]
fn game_file_accepts_rational_strings() {
    let text = r#"{"players": 2, "strategy_counts": [2, 2],
        "utilities": [[1, "1/2", 0, "3/4"], [0.25, 0, 1, 1]],
        "positively_normalized": true}"#;
    let g = io::parse_game(text).unwrap();
    assert_eq!(g.utility(0, 1), 0.5);
    assert_eq!(g.utility(0, 3), 0.75);
    assert!(g.positively_normalized());
}

#[test]
fn game_file_errors_are_parse_or_game_errors() {
    assert!(matches!(io::parse_game("{"), Err(Error::Parse(_))));
    let extra = r#"{"players": 1, "strategy_counts": [2], "utilities": [[0, 1]], "x": 1}"#;
    assert!(matches!(io::parse_game(extra), Err(Error::Parse(_))));
    let wrong = r#"{"players": 2, "strategy_counts": [2], "utilities": [[0, 1]]}"#;
    assert!(matches!(io::parse_game(wrong), Err(Error::InvalidGame(_))));
    let not_unit = r#"{"players": 1, "strategy_counts": [2], "utilities": [[0, 3]],
        "positively_normalized": true}"#;
    assert!(io::parse_game(not_unit).is_err());
    let bad_ratio = r#"{"players": 1, "strategy_counts": [2], "utilities": [[0, "1/0"]]}"#;
    assert!(io::parse_game(bad_ratio).is_err());
}

#[test]
fn game_round_trips_through_json() {
    let g = examples::skewed_coordination();
    let back = io::parse_game(&io::to_json(&GameFile::from_game(&g))).unwrap();
    assert_eq!(back, g);
}

#[test]
fn state_round_trips_and_validates() {
    let rho = examples::entangled_state(0.7).unwrap();
    let back = io::parse_state(&io::to_json(&DensityFile::from_state(&rho))).unwrap();
    assert!(qge::linalg::max_abs_diff(back.matrix(), rho.matrix()) < 1e-15);
    let bad = r#"{"dims": [1, 2], "entries": [[1, 0], [0, 0], [0, 0], [1, 0]]}"#;
    assert!(matches!(io::parse_state(bad), Err(Error::InvalidState(_))));
    let short = r#"{"dims": [1, 2], "entries": [[1, 0]]}"#;
    assert!(matches!(
        io::parse_state(short),
        Err(Error::DimensionMismatch(_))
    ));
}

#[test]
fn profiles_parse_in_both_shapes() {
    let mixed = io::parse_profile(r#"{"profile": [["1/3", "2/3"], [1, 0]]}"#).unwrap();
    assert!(matches!(mixed, Profile::Mixed(_)));
    assert!((mixed.joint().probs()[2] - 2.0 / 3.0).abs() < 1e-15);
    let joint = io::parse_profile(r#"{"distribution": [0.5, 0, 0, 0.5]}"#).unwrap();
    assert!(matches!(joint, Profile::Joint(_)));
    assert!(io::parse_profile(r#"{"distribution": [0.5, 0.6]}"#).is_err());
}

#[test]
fn circuits_round_trip_with_identical_behaviour() {
    let marked = std::collections::BTreeSet::from([3]);
    let alg = query::grover(8, 2, &marked).unwrap();
    let text = io::to_json(&CircuitFile::from_algorithm(&alg));
    let back = io::parse_circuit(&text).unwrap();
    assert_eq!(back.queries(), 2);
    let oracle = Oracle::single(8, 3).unwrap();
    let a = query::success_probability(&alg, &oracle).unwrap();
    let b = query::success_probability(&back, &oracle).unwrap();
    assert!((a - b).abs() < 1e-12);
}

#[test]
fn circuit_with_unknown_token_is_rejected() {
    let text = r#"{"n": 2, "blocks": ["querry"]}"#;
    assert!(matches!(io::parse_circuit(text), Err(Error::Parse(_))));
    let huge = r#"{"n": 257, "blocks": []}"#;
    assert!(io::parse_circuit(huge).is_err());
}

#[test]
fn repro_report_is_stable_and_serializable() {
    let opts = ReproOptions {
        sampling_trials: 0,
        ceiling_states: 1,
        ..ReproOptions::default()
    };
    let a = repro::run(&opts).unwrap();
    let b = repro::run(&opts).unwrap();
    assert_eq!(a, b);
    assert!(a.passed);
    let json = io::to_json(&a);
    let back: repro::ReproReport = serde_json::from_str(&json).unwrap();
    assert_eq!(back.records.len(), a.records.len());
    assert!(a.find("skewed.mu1_after_rotation").is_some());
}

#[test]
fn tampering_fails_only_the_affected_group() {
    let opts = ReproOptions {
        sampling_trials: 0,
        ceiling_states: 1,
        tamper: Some(0.5),
        ..ReproOptions::default()
    };
    let r = repro::run(&opts).unwrap();
    assert!(!r.passed);
    assert!(r.failures().all(|f| f.group == "skewed-coordination"));
}
