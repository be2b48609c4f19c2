use std::fs;
use std::process::Command;

use linid::terms::{canonicalize, parse_system};
use linid_cli::{certificate_name, recheck_file, run, EXIT_MISMATCH, EXIT_OK, EXIT_USAGE};
use serde_json::Value;

const FOUR: &str = "p(x,x,y)=p(x,y,y); p(x,y,x)=q(x,x,y)=q(x,y,x)=q(y,x,x)";

fn linid(args: &[&str]) -> (i32, String, String) {
    let mut out = Vec::new();
    let mut err = Vec::new();
    let argv = std::iter::once("linid").chain(args.iter().copied());
    let code = run(argv, &mut out, &mut err);
    (code, String::from_utf8(out).unwrap(), String::from_utf8(err).unwrap())
}

fn json(args: &[&str]) -> Value {
    let (code, out, err) = linid(args);
    assert_eq!(code, EXIT_OK, "{err}");
    serde_json::from_str(&out).unwrap()
}

#[test]
fn check_reports_a_candidate() {
    let v = json(&["check", FOUR]);
    assert_eq!(v["status"], "UnsatisfiableAllFiniteRings");
    assert_eq!(v["is_candidate"], true);
    assert_eq!(v["solvable_moduli"].as_array().unwrap().len(), 0);
    assert!(v["snf"]["diag"].is_array());
    let keys: Vec<&String> = v.as_object().unwrap().keys().take(3).collect();
    assert_eq!(keys, ["system", "canonical_system", "status"]);
}

#[test]
fn check_trivial_system() {
    let (code, out, err) = linid(&["check", "x=x"]);
    assert_eq!(code, EXIT_OK);
    assert!(err.contains("trivial identity"));
    let v: Value = serde_json::from_str(&out).unwrap();
    assert_eq!(v["status"], "SatisfiableIn");
    assert_eq!(v["is_candidate"], false);
}

#[test]
fn check_reads_files() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("sys.txt");
    fs::write(&path, "x=p(x,x,y);\np(x,y,x)=p(y,x,x)=q(y,x,x)=q(x,y,x)=q(x,x,y)\n").unwrap();
    let v = json(&["check", path.to_str().unwrap(), "--bound", "16"]);
    assert_eq!(v["is_candidate"], true);
    assert_eq!(v["modulus_bound"], 16);
}

#[test]
fn usage_errors_exit_2() {
    for args in [
        &["check", "p(x,y"][..],
        &["frobnicate"],
        &["minimal", "Nope"],
        &["clone", "c", "2"],
        &["reduct-terms", "1"],
        &["check", "x=y", "--bound", "1"],
        &["check", "x=y", "--jobs", "0"],
    ] {
        let (code, _, err) = linid(args);
        assert_eq!(code, EXIT_USAGE, "{args:?}");
        assert!(!err.is_empty());
    }
}

#[test]
fn reduct_terms_and_clones() {
    let v = json(&["reduct-terms", "5"]);
    assert_eq!(v["count"], 25);
    assert_eq!(v["listed"]["distinct_listed"], 21);
    assert_eq!(v["listed"]["missing"].as_array().unwrap().len(), 4);
    assert_eq!(json(&["clone", "a", "2"])["count"], 2);
    assert_eq!(json(&["clone", "a:3", "3"])["wnu_bridge"], true);
    assert_eq!(json(&["clone", "b", "3"])["count"], 7);
    assert_eq!(json(&["clone", "reduct:3", "3"])["count"], 9);
}

#[test]
fn minimal_families() {
    let v = json(&["minimal", "TwoTernary"]);
    assert_eq!(v["minimal"].as_array().unwrap().len(), 3);
    for family in ["SingleBinary", "TwoBinary", "SingleTernary", "BinaryPlusTernary"] {
        assert_eq!(json(&["minimal", family])["candidates"].as_array().unwrap().len(), 0, "{family}");
    }
}

#[test]
fn manifest_verification_exit_codes() {
    let (code, out, _) = linid(&["verify-paper", "--format", "markdown"]);
    assert_eq!(code, EXIT_OK);
    assert!(out.contains("## Two ternary terms"));
    assert!(out.contains("## Witness ledger"));

    let dir = tempfile::tempdir().unwrap();
    let wrong = dir.path().join("wrong.txt");
    fs::write(&wrong, "TwoTernary | x=p(x,x,y)=p(x,y,y)=p(x,y,x)=q(x,x,y)=q(x,y,x)=q(y,x,x) | candidate\n").unwrap();
    let (code, _, err) = linid(&["verify-paper", "--manifest", wrong.to_str().unwrap()]);
    assert_eq!(code, EXIT_MISMATCH);
    assert!(err.contains("finding: line 1 [candidate]"));

    let broken = dir.path().join("broken.txt");
    fs::write(&broken, "TwoTernary | x=p(x,x,y) | sometimes\n").unwrap();
    let (code, _, err) = linid(&["verify-paper", "--manifest", broken.to_str().unwrap()]);
    assert_eq!(code, EXIT_USAGE);
    assert!(err.contains("manifest line 1"));
}

#[test]
fn certificates_are_named_by_canonical_form_and_recheck() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().to_str().unwrap();
    let (code, _, err) = linid(&["minimal", "TwoTernary", "--out-dir", out, "--recheck", "--format", "both"]);
    assert_eq!(code, EXIT_OK, "{err}");
    assert!(dir.path().join("minimal-TwoTernary.json").is_file());
    assert!(dir.path().join("minimal-TwoTernary.md").is_file());
    let certs: Vec<_> = fs::read_dir(dir.path().join("certificates")).unwrap().collect();
    assert_eq!(certs.len(), 5);

    let canonical = canonicalize(&parse_system(FOUR).unwrap().system).0;
    let path = dir.path().join("certificates").join(certificate_name(&canonical));
    assert!(recheck_file(&path).is_ok());
    let mut v: Value = serde_json::from_str(&fs::read_to_string(&path).unwrap()).unwrap();
    v["snf"]["diag"][0] = Value::from(7);
    fs::write(&path, serde_json::to_string(&v).unwrap()).unwrap();
    assert!(recheck_file(&path).is_err());

    let (code, _, _) = linid(&["check", "p(x,y,x)=q(x,x,y)=q(x,y,x)=q(y,x,x)", "--out-dir", out, "--recheck"]);
    assert_eq!(code, EXIT_OK);
    let canonical = canonicalize(&parse_system("p(x,y,x)=q(x,x,y)=q(x,y,x)=q(y,x,x)").unwrap().system).0;
    let sat = dir.path().join("certificates").join(certificate_name(&canonical));
    assert!(recheck_file(&sat).is_ok());
    let mut v: Value = serde_json::from_str(&fs::read_to_string(&sat).unwrap()).unwrap();
    v["witness"]["p"] = serde_json::json!([1, 0, 0]);
    fs::write(&sat, serde_json::to_string(&v).unwrap()).unwrap();
    assert!(recheck_file(&sat).is_err());
}

#[test]
fn binary_output_is_deterministic_and_honours_the_environment() {
    let exe = env!("CARGO_BIN_EXE_linid");
    let dir = tempfile::tempdir().unwrap();
    let runs: Vec<Vec<u8>> = ["1", "4"]
        .iter()
        .map(|jobs| {
            let o = Command::new(exe)
                .args(["verify-paper", "--format", "both", "--jobs", jobs])
                .env("LINID_OUT_DIR", dir.path())
                .output()
                .unwrap();
            assert!(o.status.success());
            o.stdout
        })
        .collect();
    assert_eq!(runs[0], runs[1]);
    let saved = fs::read(dir.path().join("verify-paper.json")).unwrap();
    assert!(runs[0].starts_with(&saved));

    let o = Command::new(exe).args(["check", "p(x,"]).output().unwrap();
    assert_eq!(o.status.code(), Some(EXIT_USAGE));
    assert!(o.stdout.is_empty());
}
