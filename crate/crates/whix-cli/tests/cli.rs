//! End-to-end tests driving the `whix` binary: file formats, exit codes,
//! report round-trips, and the built-in example.

use std::path::PathBuf;
use std::process::{Command, Output};

use num_complex::Complex64;
use whix::numerics::CMatrix;
use whix::realization::{blaschke_realization, diag_inner, monomial_realization, Realization};
use whix::testgen::{example_v, example_w, random_blaschke, random_realization, rng};
use whix_cli::input::parse_pair;
use whix_cli::report::{to_json, IndicesReportDoc, ScalarReportDoc, VerifyReportDoc};

const GKR_ASSET: &str = include_str!("../assets/gkr.json");

fn run(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_whix"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn exit_code(out: &Output) -> i32 {
    out.status.code().expect("no signal")
}

fn stdout(out: &Output) -> String {
    String::from_utf8_lossy(&out.stdout).into_owned()
}

fn stderr(out: &Output) -> String {
    String::from_utf8_lossy(&out.stderr).into_owned()
}

fn temp_path(name: &str) -> PathBuf {
    std::env::temp_dir().join(format!("whix-cli-test-{}-{name}", std::process::id()))
}

fn complex_json(z: Complex64) -> serde_json::Value {
    serde_json::json!([z.re, z.im])
}

fn matrix_json(m: &CMatrix) -> serde_json::Value {
    let rows: Vec<serde_json::Value> = (0..m.nrows())
        .map(|i| {
            let row: Vec<serde_json::Value> = (0..m.ncols()).map(|j| complex_json(m[(i, j)])).collect();
            serde_json::Value::Array(row)
        })
        .collect();
    serde_json::Value::Array(rows)
}

fn realization_json(r: &Realization) -> serde_json::Value {
    serde_json::json!({
        "A": matrix_json(r.a()),
        "B": matrix_json(r.b()),
        "C": matrix_json(r.c()),
        "D": matrix_json(r.d()),
    })
}

fn problem_json(v: &Realization, w: &Realization) -> String {
    serde_json::json!({ "V": realization_json(v), "W": realization_json(w) }).to_string()
}

#[test]
fn builtin_example_matches_published_indices() {
    let json_path = temp_path("gkr.json");
    let out = run(&[
        "indices",
        "--example",
        "gkr",
        "--json-out",
        json_path.to_str().unwrap(),
    ]);
    assert_eq!(exit_code(&out), 0, "stderr: {}", stderr(&out));
    let text = stdout(&out);
    assert!(text.contains("Wiener-Hopf indices: {-4, -2, 0, 3, 5}"), "{text}");
    assert!(text.contains("Fredholm index = -2"), "{text}");

    let bytes = std::fs::read(&json_path).unwrap();
    let doc: IndicesReportDoc = serde_json::from_slice(&bytes).unwrap();
    assert_eq!(doc.report.negative_indices, vec![-4, -2]);
    assert_eq!(doc.report.positive_indices, vec![3, 5]);
    assert_eq!(doc.report.zero_count, 1);
    assert_eq!(doc.report.kernel_dims, vec![6, 4, 2, 1, 0]);
    assert_eq!(doc.report.fredholm_index, -2);
    std::fs::remove_file(&json_path).ok();
}

#[test]
fn json_report_round_trips_byte_identical() {
    let json_path = temp_path("roundtrip.json");
    let out = run(&[
        "indices",
        "--example",
        "gkr",
        "--json-out",
        json_path.to_str().unwrap(),
    ]);
    assert_eq!(exit_code(&out), 0);
    let bytes = std::fs::read(&json_path).unwrap();
    let doc: IndicesReportDoc = serde_json::from_slice(&bytes).unwrap();
    assert_eq!(to_json(&doc).as_bytes(), &bytes[..]);
    std::fs::remove_file(&json_path).ok();
}

#[test]
fn builtin_example_asset_parses_to_the_library_pair() {
    let (v, w) = parse_pair(GKR_ASSET).unwrap();
    assert_eq!(v, example_v());
    assert_eq!(w, example_w());
}

#[test]
fn output_is_deterministic() {
    let a = run(&["indices", "--example", "gkr"]);
    let b = run(&["indices", "--example", "gkr"]);
    assert_eq!(a.stdout, b.stdout);
}

#[test]
fn identical_factors_from_file_give_zero_indices() {
    let mut g = rng(404);
    let v = random_realization(&mut g, 4, 2);
    let path = temp_path("identity-pair.json");
    std::fs::write(&path, problem_json(&v, &v)).unwrap();
    let out = run(&["indices", path.to_str().unwrap()]);
    assert_eq!(exit_code(&out), 0, "stderr: {}", stderr(&out));
    assert!(stdout(&out).contains("Wiener-Hopf indices: {0, 0}"), "{}", stdout(&out));
    std::fs::remove_file(&path).ok();
}

#[test]
fn corrupted_unitarity_exits_with_validation_failure() {
    let mut doc: serde_json::Value = serde_json::from_str(GKR_ASSET).unwrap();
    let d = doc["V"]["D"].as_array_mut().unwrap();
    for row in d {
        for entry in row.as_array_mut().unwrap() {
            let pair = entry.as_array_mut().unwrap();
            let re = pair[0].as_f64().unwrap();
            pair[0] = serde_json::json!(2.0 * re);
        }
    }
    let path = temp_path("corrupted.json");
    std::fs::write(&path, doc.to_string()).unwrap();
    let out = run(&["indices", path.to_str().unwrap()]);
    assert_eq!(exit_code(&out), 2, "stderr: {}", stderr(&out));
    assert!(stdout(&out).contains("validate V"), "{}", stdout(&out));
    assert!(stderr(&out).contains("validation failed"), "{}", stderr(&out));
    std::fs::remove_file(&path).ok();
}

#[test]
fn malformed_file_exits_with_parse_error() {
    let path = temp_path("garbage.json");
    std::fs::write(&path, "this is not json").unwrap();
    let out = run(&["indices", path.to_str().unwrap()]);
    assert_eq!(exit_code(&out), 1);
    assert!(stderr(&out).contains("invalid problem file"), "{}", stderr(&out));
    std::fs::remove_file(&path).ok();
}

#[test]
fn missing_input_exits_with_parse_error() {
    let out = run(&["indices"]);
    assert_eq!(exit_code(&out), 1);
}

#[test]
fn scalar_monomials_via_flags() {
    let json_path = temp_path("scalar.json");
    let out = run(&[
        "scalar",
        "--phi-zeros",
        "0;0",
        "--m-zeros",
        "0;0;0",
        "--cross-check",
        "--json-out",
        json_path.to_str().unwrap(),
    ]);
    assert_eq!(exit_code(&out), 0, "stderr: {}", stderr(&out));
    let text = stdout(&out);
    assert!(text.contains("winding number: -1"), "{text}");
    assert!(text.contains("Fredholm index: 1"), "{text}");
    assert!(text.contains("cross-check vs matrix pipeline: agree"), "{text}");

    let doc: ScalarReportDoc =
        serde_json::from_slice(&std::fs::read(&json_path).unwrap()).unwrap();
    assert_eq!(doc.winding_number, -1);
    assert_eq!(doc.report.n_tr, 1);
    assert!(doc.cross_check.is_some());
    std::fs::remove_file(&json_path).ok();
}

#[test]
fn scalar_equal_degrees_is_invertible() {
    let out = run(&["scalar", "--phi-zeros", "0.5,0.1;0", "--m-zeros", "0;0.3"]);
    assert_eq!(exit_code(&out), 0);
    let text = stdout(&out);
    assert!(text.contains("winding number: 0"), "{text}");
    assert!(text.contains("dim ker = 0, codim ran = 0"), "{text}");
}

#[test]
fn scalar_from_problem_file() {
    let path = temp_path("scalar-problem.json");
    std::fs::write(
        &path,
        r#"{"phi": {"zeta": [1, 0], "zeros": [[0, 0], [0, 0], [0, 0], [0, 0], [0, 0]]},
            "m": {"zeta": [0, 1], "zeros": [[0.2, 0], [0, -0.4]]}}"#,
    )
    .unwrap();
    let out = run(&["scalar", path.to_str().unwrap(), "--cross-check"]);
    assert_eq!(exit_code(&out), 0, "stderr: {}", stderr(&out));
    assert!(stdout(&out).contains("winding number: 3"), "{}", stdout(&out));
    std::fs::remove_file(&path).ok();
}

#[test]
fn scalar_constants_are_invertible() {
    // No zeros at all: both factors are unimodular constants.
    let out = run(&["scalar"]);
    assert_eq!(exit_code(&out), 0);
    let text = stdout(&out);
    assert!(text.contains("winding number: 0"), "{text}");
    assert!(text.contains("Wiener-Hopf indices: {0}"), "{text}");
}

#[test]
fn scalar_zero_outside_disc_fails_validation() {
    let out = run(&["scalar", "--phi-zeros", "2"]);
    assert_eq!(exit_code(&out), 2);
    assert!(stderr(&out).contains("unit disc"), "{}", stderr(&out));
}

#[test]
fn verify_builtin_example_passes() {
    let json_path = temp_path("verify.json");
    let out = run(&[
        "verify",
        "--example",
        "gkr",
        "--json-out",
        json_path.to_str().unwrap(),
    ]);
    assert_eq!(exit_code(&out), 0, "stderr: {}", stderr(&out));
    assert!(stdout(&out).contains("all checks passed"), "{}", stdout(&out));
    let doc: VerifyReportDoc =
        serde_json::from_slice(&std::fs::read(&json_path).unwrap()).unwrap();
    assert!(doc.pass);
    assert!(doc.checks.iter().all(|c| c.pass));
    std::fs::remove_file(&json_path).ok();
}

#[test]
fn verify_seeded_random_pair_passes() {
    // A seed-controlled pair with geometric coefficient decay fast enough
    // for the finite-section oracle to settle well inside its level cap.
    let mut g = rng(2718);
    let v = diag_inner(&[
        blaschke_realization(&random_blaschke(&mut g, 2, 0.5)).unwrap(),
        monomial_realization(3),
    ])
    .unwrap();
    let w = diag_inner(&[
        monomial_realization(1),
        blaschke_realization(&random_blaschke(&mut g, 1, 0.5)).unwrap(),
    ])
    .unwrap();
    let path = temp_path("random-pair.json");
    std::fs::write(&path, problem_json(&v, &w)).unwrap();
    let out = run(&["verify", path.to_str().unwrap()]);
    assert_eq!(exit_code(&out), 0, "stdout: {}\nstderr: {}", stdout(&out), stderr(&out));
    assert!(stdout(&out).contains("all checks passed"));
    std::fs::remove_file(&path).ok();
}
