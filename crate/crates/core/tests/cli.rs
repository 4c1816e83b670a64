use hksym::cli::{run_with, EXIT_CONFIG, EXIT_FAILED, EXIT_IO, EXIT_OK};

fn run(args: &[&str]) -> (i32, String, String) {
    let mut out = Vec::new();
    let mut err = Vec::new();
    let argv = std::iter::once("hksym").chain(args.iter().copied());
    let code = run_with(argv, &mut out, &mut err);
    (code, String::from_utf8(out).unwrap(), String::from_utf8(err).unwrap())
}

#[test]
fn verify_clean_run_exits_zero() {
    let (code, out, _) = run(&["verify", "--space", "su:1,1", "--params", "1,0,0,+1", "--samples", "5"]);
    assert_eq!(code, EXIT_OK, "{out}");
    assert!(out.contains("0 unexpected"));
}

#[test]
fn verify_json_is_parseable_and_lists_the_manifest() {
    let (code, out, _) = run(&[
        "verify",
        "--space",
        "su:1,2",
        "--params",
        "1,0,0,-1",
        "--samples",
        "3",
        "--seed",
        "42",
        "--format",
        "json",
    ]);
    assert_eq!(code, EXIT_OK);
    let v: serde_json::Value = serde_json::from_str(&out).unwrap();
    assert_eq!(v["seed"], 42);
    assert!(v["coverage_manifest"]["hk.integrability"].is_string());
    let checks = v["checks"].as_array().unwrap();
    assert!(checks.iter().any(|c| c["check_id"] == "control.eps_flip"));
    for c in checks {
        let passed = c["passed"].as_bool().unwrap();
        let control = c["role"] == "control";
        assert_ne!(passed, control, "{c}");
        if !passed {
            assert!(!c["details"].as_array().unwrap().is_empty());
        }
    }
}

#[test]
fn inadmissible_params_exit_two() {
    let (code, _, err) = run(&["verify", "--space", "su:1,2", "--params", "1,0.1,0,+1"]);
    assert_eq!(code, EXIT_CONFIG);
    assert!(err.contains("a1 = a2 = 0"), "{err}");
    let (code, _, _) = run(&["verify", "--space", "su:1,1", "--params", "1,0,0,-1"]);
    assert_eq!(code, EXIT_CONFIG);
}

#[test]
fn usage_errors_exit_two() {
    assert_eq!(run(&["frobnicate"]).0, EXIT_CONFIG);
    assert_eq!(run(&["verify"]).0, EXIT_CONFIG);
    assert_eq!(run(&["verify", "--space", "xx:3"]).0, EXIT_CONFIG);
    assert_eq!(run(&["verify", "--space", "su:1,1", "--samples", "0"]).0, EXIT_CONFIG);
    assert_eq!(run(&["verify", "--space", "su:1,1", "--tol-alg", "-1"]).0, EXIT_CONFIG);
    assert_eq!(run(&["--help"]).0, EXIT_OK);
}

#[test]
fn unwritable_output_exits_three() {
    let (code, _, err) = run(&[
        "verify",
        "--space",
        "su:1,1",
        "--samples",
        "2",
        "--out",
        "/nonexistent-dir/report.json",
    ]);
    assert_eq!(code, EXIT_IO, "{err}");
    let (code, _, _) = run(&["verify", "--config", "/nonexistent-dir/cfg.json"]);
    assert_eq!(code, EXIT_IO);
}

#[test]
fn disarmed_controls_make_the_run_fail() {
    let (code, out, _) = run(&[
        "verify",
        "--space",
        "su:1,1",
        "--params",
        "1,0,0,+1",
        "--samples",
        "3",
        "--control-amplitude",
        "0",
    ]);
    assert_eq!(code, EXIT_FAILED);
    assert!(out.contains("CTL!"));
}

#[test]
fn config_file_supplies_defaults_and_flags_override() {
    let dir = std::env::temp_dir().join(format!("hksym-cli-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let cfg = dir.join("cfg.json");
    std::fs::write(
        &cfg,
        r#"{"spaces": ["su:1,1"], "params": ["1,0,0,+1"], "samples": 2, "seed": 5, "format": "json"}"#,
    )
    .unwrap();
    let out_path = dir.join("r.json");
    let (code, _, err) = run(&[
        "verify",
        "--config",
        cfg.to_str().unwrap(),
        "--seed",
        "9",
        "--out",
        out_path.to_str().unwrap(),
    ]);
    assert_eq!(code, EXIT_OK, "{err}");
    let v: serde_json::Value = serde_json::from_str(&std::fs::read_to_string(&out_path).unwrap()).unwrap();
    assert_eq!(v["seed"], 9);
    std::fs::write(&cfg, r#"{"spaces": ["su:1,1"], "bogus": 1}"#).unwrap();
    assert_eq!(run(&["verify", "--config", cfg.to_str().unwrap()]).0, EXIT_CONFIG);
    std::fs::remove_dir_all(&dir).unwrap();
}

#[test]
fn roots_prints_the_restricted_root_table() {
    let (code, out, _) = run(&["roots", "--space", "sp:2"]);
    assert_eq!(code, EXIT_OK);
    assert!(out.contains("type C2"), "{out}");
    let (_, out, _) = run(&["roots", "--space", "su:1,2"]);
    assert!(out.contains("type BC1") && out.contains("½ε1"), "{out}");
}

#[test]
fn eval_prints_operators_and_rejects_points_outside_the_domain() {
    let (code, out, _) = run(&["eval", "--space", "su:1,1", "--params", "1,0.5,0,+1", "--x", "1.2"]);
    assert_eq!(code, EXIT_OK);
    assert!(out.contains('R') && out.contains('S'), "{out}");
    let (code, _, _) = run(&["eval", "--space", "su:1,1", "--params", "-1,0,0,+1", "--x", "0.5"]);
    assert_eq!(code, EXIT_CONFIG);
}
