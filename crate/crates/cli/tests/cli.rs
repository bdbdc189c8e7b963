use std::process::{Command, Output};

use serde_json::Value;

fn powerq(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_powerq")).args(args).env_remove("POWERQ_TOL").output().unwrap()
}

fn json(bytes: &[u8]) -> Value {
    serde_json::from_slice(bytes).unwrap_or_else(|e| panic!("{e}: {}", String::from_utf8_lossy(bytes)))
}

fn code(out: &Output) -> i32 {
    out.status.code().unwrap()
}

#[test]
fn derive_reports_the_quotient() {
    let out = powerq(&["derive", "--n", "1", "--q", "0.5", "--f", "t^2", "--at", "2"]);
    assert_eq!(code(&out), 0);
    assert_eq!(json(&out.stdout)["value"], 3.0);
    let out = powerq(&["derive", "--n", "3", "--q", "0.5", "--f", "t^2", "--at", "2"]);
    assert_eq!(json(&out.stdout)["value"], 6.0);
}

#[test]
fn integrate_matches_geometric_sum() {
    let out = powerq(&["integrate", "--n", "1", "--q", "0.5", "--f", "t", "--a", "0", "--b", "1"]);
    assert_eq!(code(&out), 0);
    let v = json(&out.stdout);
    assert_eq!(v["converged"], true);
    assert!((v["value"].as_f64().unwrap() - 2.0 / 3.0).abs() < 1e-10);
}

#[test]
fn extremal_lattice_matches_closed_form() {
    let out = powerq(&["extremal", "--n", "1", "--q", "0.5", "--beta", "0.6666666667", "--emit-lattice"]);
    assert_eq!(code(&out), 0);
    let text = String::from_utf8(out.stdout).unwrap();
    let mut lines = text.lines();
    assert_eq!(lines.next(), Some("t,y"));
    let mut rows = 0;
    for line in lines {
        let (t, y) = line.split_once(',').unwrap();
        let (t, y): (f64, f64) = (t.parse().unwrap(), y.parse().unwrap());
        assert!((y - t * t / 1.5).abs() < 1e-8, "{t}: {y}");
        rows += 1;
    }
    assert!(rows > 10);
}

#[test]
fn ftc_and_leitmann_report_small_residuals() {
    let out = powerq(&["ftc", "--n", "3", "--q", "0.9", "--f", "sin(t)", "--a", "-0.7", "--b", "0.9"]);
    assert_eq!(code(&out), 0);
    assert!(json(&out.stdout)["residual"].as_f64().unwrap() <= 1e-8);

    let out = powerq(&[
        "leitmann", "--n", "1", "--q", "0.5", "--g", "1+t^2", "--a", "0", "--b", "1", "--alpha", "1", "--beta", "2",
    ]);
    assert_eq!(code(&out), 0);
    let v = json(&out.stdout);
    assert_eq!(v["y_a"], 1.0);
    assert_eq!(v["y_b"], 2.0);
    assert!(v["identity_residual"].as_f64().unwrap() <= 1e-9);
}

#[test]
fn lattice_and_euler_lagrange() {
    let out = powerq(&["lattice", "--n", "3", "--q", "0.9", "--at", "1", "--points", "3"]);
    let v = json(&out.stdout);
    assert_eq!(v["lattice_points"].as_array().unwrap().len(), 3);
    assert_eq!(v["singular_set"].as_array().unwrap().len(), 3);

    let out = powerq(&[
        "euler-lagrange", "--n", "1", "--q", "0.5", "--lagrangian", "u + 0.5*v^2", "--f", "t^2/1.5", "--a", "0", "--b", "1",
    ]);
    assert_eq!(code(&out), 0);
    assert!(json(&out.stdout)["max_residual"].as_f64().unwrap() <= 1e-10);
}

#[test]
fn output_is_byte_deterministic() {
    let args = ["check", "counterexample", "--seed", "7"];
    assert_eq!(powerq(&args).stdout, powerq(&args).stdout);
    let args = ["integrate", "--n", "3", "--q", "0.9", "--f", "exp(t)", "--a", "-0.3", "--b", "0.8"];
    assert_eq!(powerq(&args).stdout, powerq(&args).stdout);
}

#[test]
fn errors_are_structured_with_documented_exit_codes() {
    let cases: [(&[&str], i32, &str); 6] = [
        (&["derive", "--n", "2", "--q", "0.5", "--f", "t", "--at", "1"], 2, "invalid_params"),
        (&["derive", "--n", "1", "--q", "1.5", "--f", "t", "--at", "1"], 2, "invalid_params"),
        (&["integrate", "--n", "3", "--q", "0.5", "--f", "t", "--a", "0", "--b", "3"], 2, "horizon"),
        (&["derive", "--n", "1", "--q", "0.5", "--f", "t +", "--at", "1"], 4, "syntax"),
        (&["derive", "--n", "1", "--q", "0.5", "--f", "foo(t)", "--at", "1"], 4, "unknown_identifier"),
        (&["integrate", "--n", "1", "--q", "0.9", "--f", "t", "--a", "0", "--b", "1", "--max-terms", "10"], 3, "non_convergence"),
    ];
    for (args, exit, kind) in cases {
        let out = powerq(args);
        assert_eq!(code(&out), exit, "{args:?}");
        let err = json(&out.stderr);
        assert_eq!(err["error_kind"], kind, "{args:?}");
        assert!(err["message"].is_string());
    }
    let out = powerq(&["derive", "--nonsense"]);
    assert_eq!(code(&out), 2);
    assert_eq!(json(&out.stderr)["error_kind"], "usage");
}

#[test]
fn tolerance_flag_beats_environment() {
    let base = ["integrate", "--n", "1", "--q", "0.9", "--f", "t", "--a", "0", "--b", "1"];
    let run = |env: Option<&str>, extra: &[&str]| {
        let mut cmd = Command::new(env!("CARGO_BIN_EXE_powerq"));
        cmd.args(base).args(extra).env_remove("POWERQ_TOL");
        if let Some(v) = env {
            cmd.env("POWERQ_TOL", v);
        }
        json(&cmd.output().unwrap().stdout)["terms_used"].as_u64().unwrap()
    };
    let default = run(None, &[]);
    let loose = run(Some("1e-3"), &[]);
    let explicit = run(Some("1e-3"), &["--tol", "1e-12"]);
    assert!(loose < default);
    assert_eq!(explicit, default);
}

#[test]
fn check_suites_pass_and_fault_injection_is_caught() {
    let out = powerq(&["check", "counterexample"]);
    assert_eq!(code(&out), 0);
    assert_eq!(json(&out.stdout)["passed"], true);

    let out = powerq(&["check", "all"]);
    assert_eq!(code(&out), 0, "{}", String::from_utf8_lossy(&out.stdout));

    let out = powerq(&["check", "all", "--inject-fault"]);
    assert_ne!(code(&out), 0);
    let v = json(&out.stdout);
    assert_eq!(v["failing"], serde_json::json!(["product rule, first form"]));
}
