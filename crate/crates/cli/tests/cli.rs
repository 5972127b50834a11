use std::fs;

use circunit_cli::{certificate_file_name, main_with_args, CliError, EXIT_DISAGREEMENT, EXIT_NEGATIVE, EXIT_OK, EXIT_USAGE};
use circunit_core::congruence::Certificate;
use circunit_core::Error;

fn run(args: &[&str]) -> (i32, String, String) {
    let mut out = Vec::new();
    let mut err = Vec::new();
    let mut full = vec!["circunit"];
    full.extend_from_slice(args);
    let code = main_with_args(full, &mut out, &mut err);
    (code, String::from_utf8(out).unwrap(), String::from_utf8(err).unwrap())
}

#[test]
fn default_verify_writes_four_certificates() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().to_str().unwrap();
    let (code, out, _) = run(&["verify", "--json", path]);
    assert_eq!(code, EXIT_OK);
    assert_eq!(out.lines().count(), 4);
    assert!(out.lines().all(|l| l.ends_with("verdict=trivial_only")));
    for n in 4..=7 {
        let text = fs::read_to_string(dir.path().join(certificate_file_name(n))).unwrap();
        let cert: Certificate = serde_json::from_str(&text).unwrap();
        assert_eq!(cert.n, n);
        assert!(cert.trivial_only);
        assert!(cert.replay().unwrap());
    }
    let (code, out, _) = run(&[]);
    assert_eq!(code, EXIT_OK);
    assert_eq!(out.lines().count(), 4);
}

#[test]
fn single_level_certificate_file() {
    let dir = tempfile::tempdir().unwrap();
    let file = dir.path().join("c.json");
    let (code, _, _) = run(&["verify", "--n", "5", "--json", file.to_str().unwrap()]);
    assert_eq!(code, EXIT_OK);
    let v: serde_json::Value = serde_json::from_str(&fs::read_to_string(file).unwrap()).unwrap();
    assert_eq!(v["n"], 5);
    assert_eq!(v["verdict"], "trivial_only");
    assert_eq!(v["generators"][2]["label"], "q(1,1)");
    assert!(v["matrix_rows_hex"].is_array());
}

#[test]
fn level_errors_are_usage_errors() {
    let (code, _, err) = run(&["verify", "--n", "3"]);
    assert_eq!(code, EXIT_USAGE);
    assert!(err.contains("n >= 4"), "{err}");
    assert_eq!(run(&["verify", "--n", "8"]).0, EXIT_USAGE);
    assert_eq!(run(&["verify", "--n", "13", "--explore"]).0, EXIT_USAGE);
    assert_eq!(run(&["bogus"]).0, EXIT_USAGE);
    assert_eq!(run(&["tables"]).0, EXIT_USAGE);
    assert_eq!(run(&["--help"]).0, EXIT_OK);
}

#[test]
fn explore_levels() {
    let (code, out, _) = run(&["verify", "--n", "8", "--explore", "--spot-checks", "50"]);
    assert_eq!(code, EXIT_OK);
    assert!(out.contains("trivial_only (exploratory)"));
}

#[test]
fn certificates_are_byte_reproducible() {
    let a = tempfile::tempdir().unwrap();
    let b = tempfile::tempdir().unwrap();
    for d in [&a, &b] {
        let p = d.path().to_str().unwrap();
        let args = ["verify", "--n", "6", "--n", "8", "--explore", "--seed", "5", "--spot-checks", "64", "--no-timing", "--json", p];
        assert_eq!(run(&args).0, EXIT_OK);
    }
    for n in [6, 8] {
        let x = fs::read(a.path().join(certificate_file_name(n))).unwrap();
        let y = fs::read(b.path().join(certificate_file_name(n))).unwrap();
        assert_eq!(x, y, "n={n}");
    }
}

#[test]
fn tables_output() {
    let (code, out, _) = run(&["tables", "--n", "5"]);
    assert_eq!(code, EXIT_OK);
    assert!(out.lines().any(|l| l == "0 r_1 r_2 r_3 0 r_3 r_2 r_1"), "{out}");
    assert!(out.lines().any(|l| l == "0 s_1 s_2 s_3 √2 s_5 s_6 s_7 0 s_7 s_6 s_5 √2 s_3 s_2 s_1"), "{out}");
    let (code, out, _) = run(&["tables", "--n", "4", "--json"]);
    assert_eq!(code, EXIT_OK);
    let v: serde_json::Value = serde_json::from_str(&out).unwrap();
    assert_eq!(v[1]["entries"][1], "r_1");
}

#[test]
fn unit_subcommand() {
    let (code, out, _) = run(&["unit", "--n", "4", "--word", "a^8", "--json"]);
    assert_eq!(code, EXIT_OK);
    let v: serde_json::Value = serde_json::from_str(&out).unwrap();
    let gammas: Vec<&str> = v["gammas"].as_array().unwrap().iter().map(|g| g.as_str().unwrap()).collect();
    assert_eq!(gammas.len(), 16);
    assert!(gammas.iter().enumerate().all(|(j, g)| *g == if j == 8 { "1" } else { "0" }));
    let (code, out, _) = run(&["unit", "--n", "5", "--word", "d1"]);
    assert_eq!(code, EXIT_NEGATIVE);
    assert!(out.contains("not integral"));
    let (code, out, _) = run(&["unit", "--n", "5", "--word", "a"]);
    assert_eq!(code, EXIT_NEGATIVE);
    assert!(out.contains("not real"));
    assert_eq!(run(&["unit", "--n", "5", "--word", "d2"]).0, EXIT_USAGE);
}

#[test]
fn identities_and_funnel() {
    let (code, out, _) = run(&["identities"]);
    assert_eq!(code, EXIT_OK);
    assert!(!out.contains("FAIL"));
    assert!(out.contains("q(4,1)^8 = 1 + P(4) r_8: 1+r_8"), "{out}");
    let (code, out, _) = run(&["funnel", "--n", "5"]);
    assert_eq!(code, EXIT_OK);
    let v: serde_json::Value = serde_json::from_str(&out).unwrap();
    assert_eq!(v["f_generators"].as_array().unwrap().len(), 7);
    assert_eq!(v["sqrt_over_f_generators"][2]["coords"], "1+r_2+r_3");
    assert_eq!(v["index_sqrtf_f"], "16");
}

#[test]
fn exit_code_mapping() {
    assert_eq!(CliError::Core(Error::Disagreement("x".into())).exit_code(), EXIT_DISAGREEMENT);
    assert_eq!(CliError::Core(Error::LevelTooSmall { n: 3, min: 4 }).exit_code(), EXIT_USAGE);
}
