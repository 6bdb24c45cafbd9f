use std::path::PathBuf;
use std::process::{Command, Output};

use serde_json::Value;

fn bin() -> Command {
    Command::new(env!("CARGO_BIN_EXE_zonotope"))
}

fn data(name: &str) -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR"))
        .join("tests/data")
        .join(name)
}

fn run_ok(args: &[&str]) -> String {
    let out = bin().args(args).output().unwrap();
    assert!(
        out.status.success(),
        "{args:?} failed: {}",
        String::from_utf8_lossy(&out.stderr)
    );
    String::from_utf8(out.stdout).unwrap()
}

fn json(args: &[&str]) -> Value {
    serde_json::from_str(&run_ok(args)).unwrap()
}

fn failed(out: &Output) -> bool {
    !out.status.success() && !out.stderr.is_empty()
}

#[test]
fn count_examples() {
    for (dim, n, z) in [
        ("2", "2", "10"),
        ("2", "0", "1"),
        ("1", "7", "1"),
        ("2", "1", "3"),
    ] {
        let v = json(&["count", "--dim", dim, "--n", n]);
        assert_eq!(v[0]["z_exact"], z, "d={dim} n={n}");
    }
}

#[test]
fn count_ranges_and_csv() {
    let csv = run_ok(&["count", "--dim", "2", "--n", "0..=3", "--format", "csv"]);
    let lines: Vec<&str> = csv.lines().collect();
    assert_eq!(lines[0], "dim,n,mode,z_exact,ln_z");
    assert_eq!(lines.len(), 5);
    assert!(lines[3].starts_with("2,2,coefficient,10,"));
    let cum = json(&["count", "--dim", "2", "--n", "1", "--cumulative"]);
    // empty, (1,0), (0,1), (1,1) twice, (1,-1)
    assert_eq!(cum[0]["mode"], "cumulative");
    assert_eq!(cum[0]["z_exact"], "6");
}

#[test]
fn big_counts_are_strings() {
    let v = json(&["count", "--dim", "2", "--n", "60"]);
    let z = v[0]["z_exact"].as_str().unwrap();
    assert!(z.len() > 17, "{z}");
    let ln = v[0]["ln_z"].as_f64().unwrap();
    assert!((ln - (z.len() as f64 - 1.0) * 10f64.ln()).abs() < 2.31);
}

#[test]
fn moments_examples() {
    let v = json(&["moments", "--dim", "2", "--n", "1", "--param", "diameter"]);
    assert_eq!(v[0]["mean"], "4/3");
    assert_eq!(v[0]["count"], "3");
    let occ = json(&[
        "moments",
        "--dim",
        "2",
        "--n",
        "2",
        "--param",
        "occurrence",
        "--v0",
        "1,1",
    ]);
    assert_eq!(occ[0]["class"], "1,1:0");
    let missing = bin()
        .args(["moments", "--dim", "2", "--n", "2", "--param", "occurrence"])
        .output()
        .unwrap();
    assert!(failed(&missing));
}

fn collect_numbers(v: &Value, out: &mut Vec<String>) {
    match v {
        Value::Number(n) => out.push(n.to_string()),
        Value::Array(a) => a.iter().for_each(|x| collect_numbers(x, out)),
        Value::Object(m) => m.values().for_each(|x| collect_numbers(x, out)),
        _ => {}
    }
}

#[test]
fn json_round_trip() {
    for args in [
        &["count", "--dim", "3", "--n", "0..4"][..],
        &["asympt", "--dim", "2", "--n", "1000,1e4"],
        &["icrit", "--dim", "3", "--n", "100"],
        &[
            "sample",
            "--dim",
            "2",
            "--n",
            "500",
            "--samples",
            "3",
            "--track",
            "1,0",
        ],
    ] {
        let text = run_ok(args);
        let v: Value = serde_json::from_str(&text).unwrap();
        let again = serde_json::to_string(&v).unwrap();
        assert_eq!(
            serde_json::from_str::<Value>(&again).unwrap(),
            v,
            "{args:?}"
        );
        let mut numbers = Vec::new();
        collect_numbers(&v, &mut numbers);
        for x in numbers {
            assert!(text.contains(&x), "{args:?}: {x} not emitted verbatim");
        }
    }
}

#[test]
fn compare_header_is_fixed() {
    let golden = std::fs::read_to_string(data("compare_header.csv")).unwrap();
    let csv = run_ok(&["compare", "--dim", "2", "--n", "8,16", "--format", "csv"]);
    assert_eq!(csv.lines().next().unwrap(), golden.trim_end());
    let bad = bin()
        .args(["compare", "--dim", "2", "--n", "2.5"])
        .output()
        .unwrap();
    assert!(failed(&bad));
}

#[test]
fn icrit_matches_its_decomposition() {
    let zeros = data("zeros.txt");
    let v = json(&[
        "icrit",
        "--dim",
        "2",
        "--n",
        "1e6",
        "--zeros",
        zeros.to_str().unwrap(),
        "--m",
        "1",
    ]);
    let row = &v[0];
    let f = |k: &str| row[k].as_f64().unwrap();
    let n: f64 = 1e6;
    let phase = f("frequency") * (f("scale") * n).ln();
    let form = n.powf(f("exponent")) * (f("a") * phase.cos() + f("b") * phase.sin());
    assert!(((f("icrit") - form) / form).abs() < 0.01);
    let m5 = json(&[
        "icrit",
        "--dim",
        "2",
        "--n",
        "1e6",
        "--zeros",
        zeros.to_str().unwrap(),
        "--m",
        "5",
    ]);
    assert_ne!(m5[0]["icrit"], row["icrit"]);
}

#[test]
fn sample_is_deterministic() {
    let args = [
        "sample",
        "--dim",
        "2",
        "--n",
        "10000",
        "--samples",
        "400",
        "--seed",
        "7",
        "--format",
        "csv",
        "--track",
        "1,1",
    ];
    let a = run_ok(&args);
    let b = run_ok(&args);
    assert_eq!(a, b);
    let lines: Vec<&str> = a.lines().collect();
    assert_eq!(
        lines[0],
        "seed,direction_count,endpoint_1,endpoint_2,omega_1_1_s0"
    );
    assert_eq!(lines.len(), 401);
    assert!(lines[1].starts_with("7,"));
}

#[test]
fn output_file() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("poly.csv");
    run_ok(&[
        "polygon",
        "--dim",
        "2",
        "--theta",
        "0.3",
        "--seed",
        "3",
        "--format",
        "csv",
        "--output",
        path.to_str().unwrap(),
    ]);
    let text = std::fs::read_to_string(&path).unwrap();
    assert!(text.starts_with("x,y\n0,0\n"));
    let three_d = bin()
        .args(["polygon", "--dim", "3", "--theta", "0.5"])
        .output()
        .unwrap();
    assert!(failed(&three_d));
}

#[test]
fn rejects_bad_flags() {
    assert!(failed(
        &bin()
            .args(["count", "--dim", "2", "--n", "2", "--bogus"])
            .output()
            .unwrap()
    ));
    assert!(failed(
        &bin()
            .args(["count", "--dim", "0", "--n", "2"])
            .output()
            .unwrap()
    ));
    assert!(failed(
        &bin()
            .args(["asympt", "--dim", "2", "--n", "10", "--m", "0"])
            .output()
            .unwrap()
    ));
    assert!(failed(
        &bin()
            .args(["sample", "--dim", "2", "--n", "10", "--theta", "1"])
            .output()
            .unwrap()
    ));
    let help = run_ok(&["sample", "--help"]);
    for flag in [
        "--dim",
        "--n",
        "--theta",
        "--cutoff",
        "--seed",
        "--samples",
        "--track",
        "--format",
        "--output",
    ] {
        assert!(help.contains(flag), "{flag}");
    }
}

#[test]
fn memory_guard_env_override() {
    let out = bin()
        .env("ZONOTOPE_MEMORY_LIMIT", "1000")
        .args(["count", "--dim", "3", "--n", "20"])
        .output()
        .unwrap();
    assert!(failed(&out));
    assert!(String::from_utf8_lossy(&out.stderr).contains("memory budget"));
}

#[test]
fn self_test_passes() {
    let out = bin().arg("--self-test").output().unwrap();
    assert!(out.status.success());
    let text = String::from_utf8(out.stdout).unwrap();
    assert!(text.lines().all(|l| l.starts_with("ok ")), "{text}");
}
