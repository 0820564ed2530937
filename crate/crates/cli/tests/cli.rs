//! End-to-end tests of the experiment runner and the `hausdorff` binary.

use std::io::Write;
use std::process::Command as Process;

use hausdorff_cli::{any_failure, emit_csv, run_experiment, ExperimentConfig};

fn c12_constant_config() -> &'static str {
    r#"{
      "v": 1,
      "command": "constant",
      "payload": {
        "theorem": "C3.1.2",
        "n": 1,
        "index": [{"beta": 0, "gamma": 0, "lambda": -0.25, "q": 2, "p": 2}],
        "operator": {
          "m": 1, "n": 1,
          "kernel": {"kind": "closed", "expr": "1", "support": {"cube": [0, 1]}, "convention": "hardy_cesaro_psi"},
          "families": [{"kind": "diag_scalar", "expr": "y1"}]
        }
      }
    }"#
}

#[test]
fn constant_record_value() {
    let cfg = ExperimentConfig::from_json(c12_constant_config()).unwrap();
    let records = run_experiment(&cfg).unwrap();
    assert_eq!(records.len(), 1);
    assert_eq!(records[0].id, "C1.2");
    assert!((records[0].value - 4.0 / 3.0).abs() < 1e-12);
    assert_eq!(records[0].verdict, "ok");
    assert!(!any_failure(&records));
}

#[test]
fn empty_batch_gives_header_only_csv() {
    let cfg =
        ExperimentConfig::from_json(r#"{"v": 1, "command": "constant", "payload": []}"#).unwrap();
    let records = run_experiment(&cfg).unwrap();
    assert!(records.is_empty());
    let mut buf = Vec::new();
    emit_csv(&records, &mut buf).unwrap();
    let text = String::from_utf8(buf).unwrap();
    assert_eq!(
        text,
        "command,id,value,error,verdict,seed,elapsed_ms,inputs_json\n"
    );
}

#[test]
fn missing_field_is_named_in_the_error() {
    let cfg = ExperimentConfig::from_json(
        r#"{
          "v": 1,
          "command": "constant",
          "payload": {
            "theorem": "C3.1.2",
            "n": 1,
            "index": [{"beta": 0, "gamma": 0, "lambda": -0.25}],
            "operator": {
              "m": 1, "n": 1,
              "kernel": {"kind": "closed", "expr": "1", "support": {"cube": [0, 1]}, "convention": "hardy_cesaro_psi"},
              "families": [{"kind": "diag_scalar", "expr": "y1"}]
            }
          }
        }"#,
    )
    .unwrap();
    let err = run_experiment(&cfg).unwrap_err();
    assert!(err.to_string().contains('q'), "error was: {err}");
}

#[test]
fn schema_version_is_mandatory() {
    let err = ExperimentConfig::from_json(r#"{"v": 2, "command": "constant", "payload": []}"#)
        .unwrap_err();
    assert!(err.to_string().contains("version"));
    let err = ExperimentConfig::from_json(r#"{"command": "constant", "payload": []}"#).unwrap_err();
    assert!(err.to_string().contains('v'), "error was: {err}");
}

/// Strip the elapsed_ms column (the one wall-clock field) for determinism
/// comparisons.
fn strip_elapsed(csv: &str) -> String {
    csv.lines()
        .map(|line| {
            let fields: Vec<&str> = line.split(',').collect();
            // inputs_json may contain commas, so only normalize rows that
            // parse cleanly; column 6 is elapsed_ms
            if fields.len() >= 8 && fields[6].chars().all(|c| c.is_ascii_digit()) {
                let mut fields = fields;
                fields[6] = "-";
                fields.join(",")
            } else {
                line.to_string()
            }
        })
        .collect::<Vec<_>>()
        .join("\n")
}

#[test]
fn identical_config_and_seed_reproduce_the_csv() {
    let cfg = ExperimentConfig::from_json(c12_constant_config()).unwrap();
    let mut a = Vec::new();
    emit_csv(&run_experiment(&cfg).unwrap(), &mut a).unwrap();
    let mut b = Vec::new();
    emit_csv(&run_experiment(&cfg).unwrap(), &mut b).unwrap();
    assert_eq!(
        strip_elapsed(&String::from_utf8(a).unwrap()),
        strip_elapsed(&String::from_utf8(b).unwrap())
    );
}

#[test]
fn inputs_json_round_trips_into_the_payload() {
    let cfg = ExperimentConfig::from_json(c12_constant_config()).unwrap();
    let records = run_experiment(&cfg).unwrap();
    let parsed: serde_json::Value = serde_json::from_str(&records[0].inputs_json).unwrap();
    // the echoed inputs re-parse into the originating payload type
    let theorem: hausdorff_cli::config::TheoremConfig = serde_json::from_value(parsed).unwrap();
    assert_eq!(theorem.theorem, "C3.1.2");
    assert!(theorem.build().is_ok());
}

#[test]
fn norm_and_weights_commands() {
    let cfg = ExperimentConfig::from_json(
        r#"{
          "v": 1,
          "command": "norm",
          "payload": {
            "space": {"kind": "central_morrey", "q": 2, "lambda": -0.25,
                      "v": {"kind": "power", "gamma": 0, "n": 1},
                      "omega": {"kind": "power", "gamma": 0, "n": 1}},
            "f": {"kind": "power", "a": -0.25}
          }
        }"#,
    )
    .unwrap();
    let records = run_experiment(&cfg).unwrap();
    assert!((records[0].value - 2f64.powf(0.75)).abs() < 1e-10);

    let cfg = ExperimentConfig::from_json(
        r#"{
          "v": 1,
          "command": "weights",
          "payload": [
            {"op": "ap_characteristic", "weight": {"kind": "power", "gamma": 0.5, "n": 1},
             "xi": 2, "grid": "unit_ball"},
            {"op": "critical_index", "weight": {"kind": "power", "gamma": -0.5, "n": 1}}
          ]
        }"#,
    )
    .unwrap();
    let records = run_experiment(&cfg).unwrap();
    assert!((records[0].value - 4.0 / 3.0).abs() < 1e-10);
    assert!((records[1].value - 2.0).abs() < 1e-12);
}

#[test]
fn apply_command_matches_hardy_average() {
    let cfg = ExperimentConfig::from_json(
        r#"{
          "v": 1,
          "command": "apply",
          "payload": {
            "operator": {
              "m": 1, "n": 1,
              "kernel": {"kind": "closed", "expr": "1", "support": {"cube": [0, 1]}, "convention": "hybrid_phi"},
              "families": [{"kind": "diag_scalar", "expr": "y1"}]
            },
            "functions": [{"kind": "indicator", "shape": "ball", "R": 1}],
            "points": [[2.0]]
          }
        }"#,
    )
    .unwrap();
    let records = run_experiment(&cfg).unwrap();
    assert_eq!(records.len(), 1);
    assert!((records[0].value - 0.5).abs() < 1e-10);
}

#[test]
fn sweep_command_emits_per_eps_rows_and_summary() {
    let cfg = ExperimentConfig::from_json(
        r#"{
          "v": 1,
          "command": "sweep",
          "payload": {
            "params": {
              "theorem": "C3.2.2",
              "n": 1,
              "index": [{"beta": 0, "gamma": 0, "alpha": -0.25, "q": 2, "p": 2}],
              "operator": {
                "m": 1, "n": 1,
                "kernel": {"kind": "closed", "expr": "1", "support": {"cube": [0, 1]}, "convention": "hardy_cesaro_psi"},
                "families": [{"kind": "diag_scalar", "expr": "y1"}]
              }
            },
            "eps_list": [0.2, 0.1]
          }
        }"#,
    )
    .unwrap();
    let records = run_experiment(&cfg).unwrap();
    assert_eq!(records.len(), 3); // one per eps + summary
    assert!(records[0].value <= records[1].value);
    assert!(records[2].id.ends_with("summary"));
    assert_eq!(records[2].verdict, "nondecreasing");
    assert!(!any_failure(&records));
}

#[test]
fn sampled_weight_table_and_rh_command() {
    let dir = std::env::temp_dir().join(format!("hausdorff-table-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let table = dir.join("weight.csv");
    // a flat tabulated weight: one column of x, one of omega(x)
    let mut f = std::fs::File::create(&table).unwrap();
    for i in -50..=50 {
        writeln!(f, "{},1.0", i as f64 / 10.0).unwrap();
    }
    drop(f);
    let cfg_text = format!(
        r#"{{
          "v": 1,
          "command": "weights",
          "payload": [
            {{"op": "ball_mass", "weight": {{"kind": "sampled", "table": "{}", "n": 1}},
              "center": [0.0], "radius": 1.0}},
            {{"op": "rh_constant", "weight": {{"kind": "power", "gamma": 1.0, "n": 1}},
              "r": 2.0, "grid": "unit_ball"}}
          ]
        }}"#,
        table.display()
    );
    let cfg = ExperimentConfig::from_json(&cfg_text).unwrap();
    let records = run_experiment(&cfg).unwrap();
    // quasi-Monte-Carlo mass of the constant weight over (-1, 1)
    assert!(
        (records[0].value - 2.0).abs() < 1e-6,
        "mass = {}",
        records[0].value
    );
    // (mean x^2)^{1/2} / mean |x| = 2/sqrt(3)
    assert!((records[1].value - 2.0 / 3f64.sqrt()).abs() < 1e-10);
    std::fs::remove_dir_all(&dir).ok();
}

#[test]
fn binary_end_to_end() {
    let dir = std::env::temp_dir().join(format!("hausdorff-cli-test-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let config_path = dir.join("config.json");
    let out_path = dir.join("out.csv");
    std::fs::File::create(&config_path)
        .unwrap()
        .write_all(c12_constant_config().as_bytes())
        .unwrap();

    let status = Process::new(env!("CARGO_BIN_EXE_hausdorff"))
        .args([
            "--config",
            config_path.to_str().unwrap(),
            "--out",
            out_path.to_str().unwrap(),
        ])
        .status()
        .unwrap();
    assert!(status.success());
    let text = std::fs::read_to_string(&out_path).unwrap();
    assert!(text.starts_with("command,id,value"));
    assert!(text.contains("C1.2"));
    assert!(text.contains("1.3333333333333"));

    // config errors exit with code 2
    let status = Process::new(env!("CARGO_BIN_EXE_hausdorff"))
        .args(["--config", dir.join("missing.json").to_str().unwrap()])
        .status()
        .unwrap();
    assert_eq!(status.code(), Some(2));

    // unwritable output path exits with code 1
    let status = Process::new(env!("CARGO_BIN_EXE_hausdorff"))
        .args([
            "--config",
            config_path.to_str().unwrap(),
            "--out",
            "/nonexistent-dir/x.csv",
        ])
        .status()
        .unwrap();
    assert_eq!(status.code(), Some(1));

    std::fs::remove_dir_all(&dir).ok();
}

#[test]
fn verify_command_exit_path() {
    let cfg = ExperimentConfig::from_json(
        r#"{
          "v": 1,
          "command": "verify",
          "payload": {
            "params": {
              "theorem": "C3.1.2",
              "n": 1,
              "index": [{"beta": 0, "gamma": 0, "lambda": -0.25, "q": 2, "p": 2}],
              "operator": {
                "m": 1, "n": 1,
                "kernel": {"kind": "closed", "expr": "1", "support": {"cube": [0, 1]}, "convention": "hardy_cesaro_psi"},
                "families": [{"kind": "diag_scalar", "expr": "y1"}]
              }
            }
          }
        }"#,
    )
    .unwrap();
    let records = run_experiment(&cfg).unwrap();
    assert_eq!(records[0].verdict, "exact_match");
    assert!(!any_failure(&records));
    // constant and gap ride along in the record echo
    let extra: serde_json::Value = serde_json::from_str(&records[0].inputs_json).unwrap();
    assert!((extra["constant"].as_f64().unwrap() - 4.0 / 3.0).abs() < 1e-12);
}
