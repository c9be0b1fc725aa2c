use std::path::PathBuf;

use ginfan_cli::{run, Outcome, EXIT_FAIL, EXIT_PASS, EXIT_USAGE};
use ginfan_core::family::family_ideal;
use ginfan_core::{Exponent, IdealSpec};
use serde_json::Value;
use tempfile::TempDir;

fn ginfan(args: &[&str]) -> Outcome {
    run(std::iter::once("ginfan").chain(args.iter().copied()))
}

fn json(out: &Outcome) -> Value {
    serde_json::from_str(&out.stdout).expect("json output")
}

fn write_ideal(dir: &TempDir, name: &str, ideal: &IdealSpec) -> PathBuf {
    let path = dir.path().join(name);
    std::fs::write(&path, ideal.to_json().unwrap()).unwrap();
    path
}

fn family_file(dir: &TempDir, d: u32) -> PathBuf {
    write_ideal(dir, &format!("i{d}.json"), &family_ideal(d).unwrap().to_ideal())
}

#[test]
fn usage_errors_exit_two() {
    assert_eq!(ginfan(&["verify-vertices", "--dmax", "2"]).code, EXIT_USAGE);
    assert_eq!(ginfan(&["verify-appendix"]).code, EXIT_USAGE);
    assert_eq!(ginfan(&["family-bound", "--d", "2"]).code, EXIT_USAGE);
    assert_eq!(ginfan(&["family-bound", "--d", "4", "--samples", "0"]).code, EXIT_USAGE);
    assert_eq!(ginfan(&["random-q", "--d", "4", "--height", "0"]).code, EXIT_USAGE);
    assert_eq!(ginfan(&["no-such-command"]).code, EXIT_USAGE);
    let help = ginfan(&["--help"]);
    assert_eq!(help.code, EXIT_PASS);
    assert!(help.stdout.contains("verify-vertices"));
}

#[test]
fn verify_vertices_outputs() {
    let out = ginfan(&["verify-vertices", "--dmax", "9"]);
    assert_eq!(out.code, EXIT_PASS);
    let v = json(&out);
    assert_eq!(v["command"], "verify-vertices");
    assert_eq!(v["verdict"], "pass");
    let rows = v["results"]["rows"].as_array().unwrap();
    let d7n2 = rows.iter().find(|r| r["d"] == 7 && r["n"] == 2).unwrap();
    assert_eq!(d7n2["lambda"], -20);
    assert!(d7n2["boundary"].as_array().unwrap().contains(&serde_json::json!([2, 5, 0])));

    let quiet = ginfan(&["--quiet", "verify-vertices", "--dmax", "5"]);
    assert_eq!(quiet.stdout, "pass\n");
    let csv = ginfan(&["--format", "csv", "verify-vertices", "--dmax", "4"]);
    let lines: Vec<&str> = csv.stdout.lines().collect();
    assert_eq!(lines[0], "d,n,omega,lambda,m_j,boundary,passed");
    assert_eq!(lines.len(), 1 + 1 + 2);
}

#[test]
fn verify_appendix_rows() {
    let out = ginfan(&["verify-appendix", "--dmax", "5"]);
    let v = json(&out);
    let rows = v["results"]["rows"].as_array().unwrap();
    let row = |d: u32, n: u32| rows.iter().find(|r| r["d"] == d && r["n"] == n).unwrap();
    assert_eq!(row(3, 1)["det_b"], "3");
    assert_eq!(row(3, 1)["det_e"], "-1");
    assert_eq!(row(5, 4)["det_b_nonzero"], true);
    // the block determinant vanishes for 2 <= n <= d - 2
    assert_eq!(row(4, 2)["det_b"], "0");
    assert_eq!(row(5, 3)["det_b"], "0");
    assert_eq!(out.code, EXIT_FAIL);
    assert_eq!(v["verdict"], "fail");
}

#[test]
fn family_bound_small_cases() {
    let out = ginfan(&["family-bound", "--d", "3"]);
    assert_eq!(out.code, EXIT_PASS);
    let v = json(&out);
    assert!(v["results"]["count"].as_u64().unwrap() >= 1);
    assert_eq!(v["results"]["agreement"], true);

    let a = json(&ginfan(&["family-bound", "--d", "4", "--seed", "1"]));
    let b = json(&ginfan(&["family-bound", "--d", "4", "--seed", "99"]));
    let points = |v: &Value| {
        let mut p: Vec<String> = v["results"]["vertices"]
            .as_array()
            .unwrap()
            .iter()
            .map(|x| x["m"].to_string())
            .collect();
        p.sort();
        p
    };
    assert_eq!(points(&a), points(&b));
    assert_eq!(a["verdict"], "pass");
}

#[test]
fn low_height_reports_instability() {
    let out = ginfan(&["family-bound", "--d", "3", "--height", "10"]);
    assert_eq!(out.code, EXIT_FAIL);
    let v = json(&out);
    assert_eq!(v["results"]["agreement"], false);
    assert!(v["results"]["error"].as_str().unwrap().contains("per-sample"));
}

#[test]
fn fan_command() {
    let dir = TempDir::new().unwrap();
    let mono = write_ideal(&dir, "z2.json", &IdealSpec::monomial(&[Exponent::new(0, 0, 2)]).unwrap());
    let out = ginfan(&["fan", "--ideal", mono.to_str().unwrap(), "--degree", "2"]);
    assert_eq!(out.code, EXIT_PASS);
    assert_eq!(json(&out)["results"]["count"], 3);

    let i4 = family_file(&dir, 4);
    let out = ginfan(&["fan", "--ideal", i4.to_str().unwrap(), "--degree", "4", "--brute"]);
    assert_eq!(out.code, EXIT_PASS);
    let v = json(&out);
    assert_eq!(v["results"]["brute"]["equal"], true);
    assert_eq!(v["results"]["brute"]["count"], v["results"]["count"]);

    let i7 = family_file(&dir, 7);
    let v = json(&ginfan(&["fan", "--ideal", i7.to_str().unwrap(), "--degree", "7"]));
    let verts = v["results"]["vertices"].as_array().unwrap();
    assert!(verts.len() >= 3);
    for vert in verts {
        assert_eq!(vert["m"].as_array().unwrap().len(), 3);
        assert_eq!(vert["omega"].as_array().unwrap().len(), 3);
        assert_eq!(vert["strict"], true);
    }

    let csv = ginfan(&["--format", "csv", "fan", "--ideal", i7.to_str().unwrap(), "--degree", "7"]);
    assert_eq!(csv.stdout.lines().count(), verts.len() + 1);
}

#[test]
fn fan_input_errors() {
    let dir = TempDir::new().unwrap();
    let bad = dir.path().join("bad.json");
    std::fs::write(&bad, "{\"generators\": [[[1, 1, [1, 0, 0]], [1, 1, [0, 2, 0]]]]}").unwrap();
    let out = ginfan(&["fan", "--ideal", bad.to_str().unwrap(), "--degree", "2"]);
    assert_eq!(out.code, EXIT_USAGE);
    let out = ginfan(&["fan", "--ideal", "/definitely/missing.json", "--degree", "2"]);
    assert_eq!(out.code, EXIT_USAGE);

    let i3 = family_file(&dir, 3);
    let out = ginfan(&["fan", "--ideal", i3.to_str().unwrap(), "--degree", "3", "--brute", "--brute-limit", "100"]);
    assert_eq!(out.code, EXIT_USAGE);
    assert!(out.stderr.contains("210"));
    let out = ginfan(&["fan", "--ideal", i3.to_str().unwrap(), "--degree", "2"]);
    assert_eq!(out.code, EXIT_USAGE);
}

#[test]
fn refine_command() {
    let dir = TempDir::new().unwrap();
    let i4 = family_file(&dir, 4);
    let single = json(&ginfan(&["refine", "--ideal", i4.to_str().unwrap(), "--degrees", "4..4"]));
    let fan = json(&ginfan(&["fan", "--ideal", i4.to_str().unwrap(), "--degree", "4"]));
    assert_eq!(single["results"]["count"], fan["results"]["count"]);

    let out = ginfan(&["refine", "--ideal", i4.to_str().unwrap(), "--degrees", "4..6"]);
    assert_eq!(out.code, EXIT_PASS);
    let v = json(&out);
    let cumulative: Vec<u64> = v["results"]["cumulative"]
        .as_array()
        .unwrap()
        .iter()
        .map(|c| c.as_u64().unwrap())
        .collect();
    assert!(cumulative.windows(2).all(|w| w[0] <= w[1]));
    assert!(*cumulative.last().unwrap() >= 2);

    assert_eq!(ginfan(&["refine", "--ideal", i4.to_str().unwrap(), "--degrees", "6..4"]).code, EXIT_USAGE);
    assert_eq!(ginfan(&["refine", "--ideal", i4.to_str().unwrap(), "--degrees", "3..5"]).code, EXIT_USAGE);
}

#[test]
fn random_q_command() {
    let out = ginfan(&["random-q", "--d", "3", "--trials", "5"]);
    assert_eq!(out.code, EXIT_PASS);
    let v = json(&out);
    for c in v["results"]["counts"].as_array().unwrap() {
        assert!(c.as_u64().unwrap() >= 1);
    }
    let out = ginfan(&["random-q", "--d", "4", "--trials", "3", "--degenerate"]);
    assert_eq!(out.code, EXIT_PASS);
    let v = json(&out);
    assert_eq!(v["results"]["passes"], 0);
    for t in v["results"]["trials"].as_array().unwrap() {
        assert_eq!(t["dimension_ok"], false);
        assert_eq!(t["dimension"], 1);
    }
}

#[test]
fn results_are_reproducible() {
    for args in [
        &["family-bound", "--d", "5", "--seed", "7"][..],
        &["random-q", "--d", "4", "--trials", "4", "--seed", "3"][..],
        &["verify-appendix", "--dmax", "6"][..],
    ] {
        let a = json(&ginfan(args));
        let b = json(&ginfan(args));
        assert_eq!(a["results"].to_string(), b["results"].to_string());
        assert_eq!(a["params"], b["params"]);
        for key in ["command", "params", "results", "verdict", "timings"] {
            assert!(a.get(key).is_some(), "missing {key}");
        }
    }
}
