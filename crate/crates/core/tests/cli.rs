use std::process::Command;

use serde_json::{json, Value};

fn cominv(args: &[&str]) -> (Value, i32) {
    let out = Command::new(env!("CARGO_BIN_EXE_cominv"))
        .args(args)
        .output()
        .unwrap();
    let report = serde_json::from_slice(&out.stdout).unwrap_or(Value::Null);
    (report, out.status.code().unwrap())
}

fn payload(args: &[&str]) -> Value {
    let (r, code) = cominv(args);
    assert_eq!(code, 0, "{args:?}: {r}");
    assert_eq!(r["status"], "ok");
    r["payload"].clone()
}

#[test]
fn report_shape() {
    let (r, _) = cominv(&["dim", "--n", "2", "--m", "3"]);
    let keys: Vec<_> = r.as_object().unwrap().keys().cloned().collect();
    assert_eq!(keys, ["command", "elapsed_ms", "payload", "status"]);
    assert_eq!(
        r["command"],
        json!({"name": "dim", "args": {"n": 2, "m": 3}})
    );
    assert_eq!(r["elapsed_ms"], Value::Null);

    let (timed, _) = cominv(&["--timing", "dim", "--n", "2", "--m", "3"]);
    assert!(timed["elapsed_ms"].is_u64());
}

#[test]
fn dim_lists_partitions() {
    assert_eq!(
        payload(&["dim", "--n", "2", "--m", "3"]),
        json!({"dimension": 4, "partitions": ["{1,2,3}", "{1|2,3}", "{1,2|3}", "{1,3|2}"]})
    );
    assert_eq!(payload(&["dim", "--n", "3", "--m", "4"])["dimension"], 14);
}

#[test]
fn tbasis_pairs_partitions_with_words() {
    let p = payload(&["tbasis", "--n", "2", "--m", "2"]);
    assert_eq!(p["dimension"], 2);
    assert_eq!(
        p["basis"][1],
        json!({"partition": "{1|2}", "t": "tr(X1)*tr(X2)", "word": "(1,2)"})
    );
}

#[test]
fn restrict_renders_power_sum() {
    let p = payload(&["restrict", "--n", "2", "--expr", "tr(X2*X1)"]);
    assert_eq!(p["polynomial"], "x[1,1]*x[2,1] + x[1,2]*x[2,2]");
    assert_eq!(p["sn_invariant"], true);
}

#[test]
fn reduce_bounds_factor_count() {
    let p = payload(&["reduce", "--n", "1", "--expr", "tr(X1)*tr(X2)"]);
    assert_eq!(p["output"], "tr(X1*X2)");
    assert_eq!(p["max_factors"], 1);
}

#[test]
fn express_examples() {
    let p = payload(&["express", "--n", "2", "--m", "2", "--expr", "tr(X1)*tr(X2)"]);
    assert_eq!(p["coefficients"], json!({"{1|2}": "1"}));
    assert_eq!(p["residual"], "0");

    // at n = 1 only the one-block partition remains, and tr(X1)*tr(X2) = tr(X1*X2)
    let p = payload(&["express", "--n", "1", "--m", "2", "--expr", "tr(X1)*tr(X2)"]);
    assert_eq!(p["coefficients"], json!({"{1,2}": "1"}));
}

#[test]
fn polarize_and_restitute() {
    let p = payload(&[
        "polarize",
        "--n",
        "2",
        "--m",
        "3",
        "--family",
        "abstract",
        "--poly",
        "x[1]^2",
        "--source",
        "1",
        "--targets",
        "2,3",
    ]);
    assert_eq!(p["output"], "2*x[2]*x[3]");
    let p = payload(&[
        "restitute",
        "--n",
        "2",
        "--m",
        "3",
        "--family",
        "abstract",
        "--poly",
        "2*x[2]*x[3]",
        "--sources",
        "2,3",
        "--target",
        "1",
    ]);
    assert_eq!(p["output"], "2*x[1]^2");
}

#[test]
fn verify_fundamental_payload() {
    let p = payload(&["verify", "fundamental", "--n", "2"]);
    assert_eq!(p["zero"], true);
    assert_eq!(p["variables"], 12);
}

#[test]
fn failures_exit_nonzero() {
    for args in [
        &["dim", "--n", "5", "--m", "2"][..],
        &["express", "--n", "2", "--m", "2", "--expr", "tr(X1)"],
        &["reduce", "--n", "2", "--expr", "tr(X1"],
        &[
            "polarize",
            "--n",
            "2",
            "--m",
            "3",
            "--family",
            "abstract",
            "--poly",
            "x[1]",
            "--source",
            "1",
            "--targets",
            "2,3",
        ],
    ] {
        let (r, code) = cominv(args);
        assert_eq!(code, 1, "{args:?}");
        assert_eq!(r["status"], "fail");
        assert!(r["payload"]["error"].is_string());
    }
}

#[test]
fn guardrail_override() {
    let p = payload(&["--allow-large", "dim", "--n", "5", "--m", "2"]);
    assert_eq!(p["dimension"], 2);
}

#[test]
fn usage_errors_come_from_argument_parsing() {
    let (_, code) = cominv(&["dim", "--n", "two"]);
    assert_eq!(code, 2);
}
