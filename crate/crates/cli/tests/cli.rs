use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use serde_json::Value;

fn sample(name: &str) -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("samples").join(name)
}

fn logres(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_logres"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn code(out: &Output) -> i32 {
    out.status.code().expect("exit code")
}

fn json(args: &[&str]) -> (i32, Value) {
    let mut all = vec!["--json"];
    all.extend_from_slice(args);
    let out = logres(&all);
    let doc = serde_json::from_slice(&out.stdout).unwrap_or_else(|e| {
        panic!("stdout is not JSON ({e}): {}", String::from_utf8_lossy(&out.stdout))
    });
    (code(&out), doc)
}

fn route_values(doc: &Value, label: &str) -> Vec<(String, f64, f64)> {
    doc["routes"]
        .as_array()
        .unwrap()
        .iter()
        .map(|r| {
            let v = r["values"]
                .as_array()
                .unwrap()
                .iter()
                .find(|pair| pair[0].as_str().unwrap().starts_with(label))
                .expect("label present");
            (
                v[1]["exact"].as_str().unwrap().to_string(),
                v[1]["approx_re"].as_f64().unwrap(),
                v[1]["approx_im"].as_f64().unwrap(),
            )
        })
        .collect()
}

#[test]
fn zero_symbol_has_zero_residue() {
    let s = sample("zero_symbol.json");
    let (c, doc) = json(&["residue", "--input", s.to_str().unwrap()]);
    assert_eq!(c, 0);
    let vals = route_values(&doc, "res_log");
    assert_eq!(vals.len(), 3);
    assert!(vals.iter().all(|(e, _, _)| e == "0"));
    assert_eq!(doc["routes_agree"], true);
}

#[test]
fn constant_potential_matches_closed_form() {
    // log(|xi|^2 + c) = log|xi|^2 + c|xi|^-2 - c^2/2 |xi|^-4 + ..., integrated over S^3
    // with spinor trace 4: -c^2/2 * 2 pi^2 / (2 pi)^4 * 4.
    let c0 = 3.0_f64;
    let pi = std::f64::consts::PI;
    let expected = -c0 * c0 / 2.0 * 2.0 * pi * pi / (2.0 * pi).powi(4) * 4.0;
    let s = sample("constant_symbol.json");
    let (c, doc) = json(&["residue", "--input", s.to_str().unwrap()]);
    assert_eq!(c, 0);
    for (_, re, im) in route_values(&doc, "res_log") {
        assert!((re - expected).abs() < 1e-12, "{re} vs {expected}");
        assert_eq!(im, 0.0);
    }
    let z = route_values(&doc, "zeta(0)");
    assert!((z[0].1 + expected / 2.0).abs() < 1e-12);
}

#[test]
fn single_method_runs_one_route() {
    let s = sample("laplacian2.json");
    for m in ["ch", "taylor", "seeley"] {
        let (c, doc) = json(&["residue", "--input", s.to_str().unwrap(), "--method", m]);
        assert_eq!(c, 0);
        let routes = doc["routes"].as_array().unwrap();
        assert_eq!(routes.len(), 1);
        assert_eq!(routes[0]["method"], m);
    }
}

#[test]
fn emitted_dirac_symbol_reproduces_supertrace_residue() {
    let dir = tempfile::tempdir().unwrap();
    let emitted = dir.path().join("d4.json");
    let r = sample("dirac4_R.json");
    let (_, idx) = json(&[
        "index-dirac4",
        "--input",
        r.to_str().unwrap(),
        "--emit-symbol",
        emitted.to_str().unwrap(),
    ]);
    let (c, res) = json(&["residue", "--input", emitted.to_str().unwrap(), "--trace", "str"]);
    assert_eq!(c, 0);
    let a = route_values(&idx, "sres_log");
    let b = route_values(&res, "res_log");
    assert_eq!(a.len(), b.len());
    for (x, y) in a.iter().zip(&b) {
        assert_eq!(x.0, y.0);
    }
}

#[test]
fn flat_curvature_is_the_zero_case() {
    let r = sample("zero_R.json");
    let out = logres(&["index-dirac4", "--input", r.to_str().unwrap()]);
    assert_eq!(code(&out), 0);
    let text = String::from_utf8(out.stdout.clone()).unwrap();
    assert!(text.contains("PASS"), "{text}");
}

#[test]
fn sample_curvature_reports_both_sides() {
    let r = sample("dirac4_R.json");
    let out = logres(&["index-dirac4", "--input", r.to_str().unwrap()]);
    let text = String::from_utf8(out.stdout.clone()).unwrap();
    assert!(text.contains("sres_log"));
    assert!(text.contains("comparator"));
    assert!(text.contains("routes: agree"));
    assert!(text.contains("pontryagin_density"));
    // The computed residue is half the comparator for every nonzero tensor.
    assert!(text.contains("FAIL"), "{text}");
    assert_eq!(code(&out), 3);

    let (_, doc) = json(&["index-dirac4", "--input", r.to_str().unwrap()]);
    let s = route_values(&doc, "sres_log")[0].1;
    let cmp = doc["comparator"]["approx_re"].as_f64().unwrap();
    assert!(cmp != 0.0);
    assert!((s / cmp - 0.5).abs() < 1e-12);
}

#[test]
fn flat_twisted_samples_pass() {
    for f in ["flat2_F.json", "flat4_A.json"] {
        let p = sample(f);
        let (c, doc) = json(&["index-flat", "--input", p.to_str().unwrap()]);
        assert_eq!(c, 0, "{f}");
        assert_eq!(doc["comparison"], true);
        assert_eq!(doc["routes_agree"], true);
        let s = &route_values(&doc, "sres_log")[0];
        assert_eq!(s.0, doc["comparator"]["exact"].as_str().unwrap());
    }
}

#[test]
fn bad_input_exits_with_code_two() {
    let dir = tempfile::tempdir().unwrap();
    let write = |name: &str, body: &str| {
        let p = dir.path().join(name);
        std::fs::write(&p, body).unwrap();
        p
    };
    let cases = [
        write("garbage.json", "{ not json"),
        write("degree.json", r#"{"n": 2, "d_W": 1, "terms": [{"xi": [2], "scalar": 1}]}"#),
        write("index.json", r#"{"n": 2, "d_W": 1, "terms": [{"clifford": [3], "scalar": 1}]}"#),
        write("both.json", r#"{"n": 2, "d_W": 1, "terms": [{"scalar": 1, "matrix": [[1]]}]}"#),
        dir.path().join("missing.json"),
    ];
    for p in &cases {
        let out = logres(&["residue", "--input", p.to_str().unwrap()]);
        assert_eq!(code(&out), 2, "{}", p.display());
        assert!(!out.stderr.is_empty());
    }

    let asym = write(
        "asym.json",
        &format!(
            r#"{{"n": 4, "R": {}}}"#,
            serde_json::to_string(&{
                let mut r = vec![vec![vec![vec!["0"; 4]; 4]; 4]; 4];
                r[0][1][0][1] = "1";
                r
            })
            .unwrap()
        ),
    );
    assert_eq!(code(&logres(&["index-dirac4", "--input", asym.to_str().unwrap()])), 2);

    let lap = sample("laplacian2.json");
    assert_eq!(code(&logres(&["residue", "--input", lap.to_str().unwrap(), "--floor", "-1"])), 2);
    assert_eq!(code(&logres(&["residue", "--input", lap.to_str().unwrap(), "--method", "nope"])), 2);
}

#[test]
fn floor_below_minus_n_is_accepted_with_a_note() {
    let lap = sample("laplacian2.json");
    let (c, doc) = json(&["residue", "--input", lap.to_str().unwrap(), "--floor", "-5"]);
    assert_eq!(c, 0);
    assert!(!doc["notes"].as_array().unwrap().is_empty());
}

#[test]
fn selftest_is_deterministic_and_passes() {
    let (c1, a) = json(&["selftest", "--seed", "5"]);
    let (c2, b) = json(&["selftest", "--seed", "5"]);
    assert_eq!(c1, 0);
    assert_eq!(c2, 0);
    assert_eq!(a, b);
    assert_eq!(a["passed"], true);
}

#[test]
fn tampered_moments_are_caught() {
    let out = logres(&["selftest", "--tamper-moments"]);
    assert_eq!(code(&out), 4);
    let text = String::from_utf8(out.stdout.clone()).unwrap();
    assert!(text.contains("sphere_moments"), "{text}");
}
