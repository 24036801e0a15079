use std::process::Command;

use serde_json::Value;

fn run(args: &[&str]) -> (i32, String, String) {
    let out = Command::new(env!("CARGO_BIN_EXE_cherednik")).args(args).output().expect("binary runs");
    (
        out.status.code().expect("exit code"),
        String::from_utf8(out.stdout).expect("utf8"),
        String::from_utf8(out.stderr).expect("utf8"),
    )
}

fn reports(stdout: &str) -> Vec<Value> {
    stdout.lines().map(|l| serde_json::from_str(l).expect("one JSON object per line")).collect()
}

#[test]
fn dunkl_s3_passes() {
    let (code, out, _) = run(&["--json", "verify", "dunkl", "--group", "S3", "--deg", "6"]);
    assert_eq!(code, 0);
    let r = reports(&out);
    assert_eq!(r.len(), 1);
    assert_eq!(r[0]["check"], "dunkl/S3");
    assert_eq!(r[0]["status"], "pass");
    assert!(r[0]["wall_time_ms"].is_number());
}

#[test]
fn obstruction_coefficients() {
    let (code, out, _) = run(&["--json", "hecke", "obstruction", "--signature", "g=0;2,3,3"]);
    assert_eq!(code, 0);
    let r = reports(&out);
    let coeffs: Vec<i64> =
        r[0]["witness"]["coefficients"].as_array().unwrap().iter().map(|v| v.as_i64().unwrap()).collect();
    assert_eq!(coeffs, vec![6, 6, 4, 4, 4, 4, 4, 4]);
}

#[test]
fn monodromy_deviation() {
    let (code, out, _) = run(&["--json", "kz", "monodromy", "--n", "2", "--c", "0.1", "--eta", "0", "--steps", "4096"]);
    assert_eq!(code, 0);
    let r = reports(&out);
    assert!(r[0]["witness"]["monodromy"]["max_deviation"].as_f64().unwrap() < 1e-8);
}

#[test]
fn negative_and_fractional_inputs() {
    let (code, out, _) = run(&["--json", "kz", "tau", "--n", "3", "--c", "1/10,-0.2", "--eta", "-1/3"]);
    assert_eq!(code, 0, "{out}");
    assert_eq!(reports(&out)[0]["witness"]["round_trip"], true);
}

#[test]
fn usage_errors_exit_2() {
    assert_eq!(run(&["verify", "dunkl", "--group", "Q8"]).0, 2);
    assert_eq!(run(&["hecke", "verdict", "--signature", "g=0;2,x"]).0, 2);
    assert_eq!(run(&["kz", "monodromy", "--n", "3", "--c", "0.1"]).0, 2);
    assert_eq!(run(&["hecke", "obstruction", "--signature", "g=0;2,3,7"]).0, 2);
    assert_eq!(run(&["frobnicate"]).0, 2);
}

#[test]
fn failing_check_exits_1() {
    // resonant parameters give colliding characters
    let (code, out, _) = run(&["--json", "kz", "monodromy", "--n", "2", "--c", "1/2", "--eta", "0"]);
    assert_eq!(code, 1, "{out}");
    assert_eq!(reports(&out)[0]["status"], "inconclusive");
}

#[test]
fn hyperbolic_group_overflows() {
    let (code, out, _) = run(&["--json", "hecke", "group", "--signature", "g=0;2,3,7"]);
    assert_eq!(code, 0);
    assert_eq!(reports(&out)[0]["witness"]["group_order"], "infinite");
    let (_, out, _) = run(&["--json", "hecke", "verdict", "--signature", "g=0;2,3,5"]);
    assert_eq!(reports(&out)[0]["witness"]["verdict"], "expected-not-flat");
}

#[test]
fn quick_suite_is_deterministic_and_passes() {
    let (code, first, _) = run(&["--json", "verify", "all", "--quick"]);
    assert_eq!(code, 0);
    let (_, second, _) = run(&["--json", "verify", "all", "--quick"]);
    let strip = |s: &str| -> Vec<(Value, Value, Value)> {
        reports(s).into_iter().map(|r| (r["check"].clone(), r["status"].clone(), r["witness"].clone())).collect()
    };
    assert_eq!(strip(&first), strip(&second));
    assert!(reports(&first).iter().all(|r| r["status"] == "pass"));
}
