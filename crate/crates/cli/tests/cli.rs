use std::fs;
use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use serde_json::Value;
use tempfile::TempDir;

const FIG12: &str = include_str!("../../core/cases/fig12.json");
const FIG42: &str = include_str!("../../core/cases/fig42.json");
const FIG1: &str = include_str!("../../core/cases/fig1.json");

fn arrmod(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_arrmod")).args(args).output().expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn json(args: &[&str]) -> (Value, i32) {
    let mut a = args.to_vec();
    a.push("--json");
    let o = arrmod(&a);
    (serde_json::from_slice(&o.stdout).expect("stdout is JSON"), o.status.code().unwrap())
}

fn write(dir: &TempDir, name: &str, text: &str) -> PathBuf {
    let p = dir.path().join(name);
    fs::write(&p, text).unwrap();
    p
}

fn s(p: &Path) -> &str {
    p.to_str().unwrap()
}

fn case_field(case: &str, field: &str) -> String {
    let v: Value = serde_json::from_str(case).unwrap();
    v[field].to_string()
}

fn case_spec(case: &str) -> String {
    let v: Value = serde_json::from_str(case).unwrap();
    serde_json::json!({"n_lines": 12, "points": v["points"]}).to_string()
}

#[test]
fn lattice_of_sextic_equation() {
    let dir = TempDir::new().unwrap();
    let f = write(&dir, "eq.json", &case_field(FIG12, "paper_equation"));
    let o = arrmod(&["lattice", s(&f)]);
    assert!(o.status.success());
    let out = stdout(&o);
    assert!(out.contains("n_4=1 n_5=0 n_6=1"), "{out}");
    assert!(out.contains("counting identity: 66 = 66 (holds)"));
    let (v, _) = json(&["lattice", s(&f)]);
    assert_eq!(v["branches"][0]["profile"]["n6"], 1);
    assert_eq!(v["branches"][0]["counting_identity"]["holds"], true);
}

#[test]
fn lattice_of_pencil_and_errors() {
    let dir = TempDir::new().unwrap();
    let f = write(&dir, "p.json", r#"{"lines": ["X", "Y", "X-Y"]}"#);
    assert!(stdout(&arrmod(&["lattice", s(&f)])).contains("n_2=0 n_3=1"));

    let f = write(&dir, "c.json", r#"{"lines": ["X", "Y", "2*X"]}"#);
    let o = arrmod(&["lattice", s(&f)]);
    assert_eq!(o.status.code(), Some(1));
    assert!(String::from_utf8_lossy(&o.stderr).contains("L1 and L3 coincide"));

    let f = write(&dir, "b.json", r#"{"lines": ["X", "Y", "X+"]}"#);
    let err = String::from_utf8_lossy(&arrmod(&["lattice", s(&f)]).stderr).to_string();
    assert!(err.contains("line 3: column 3"), "{err}");
}

#[test]
fn realize_exit_codes() {
    let dir = TempDir::new().unwrap();
    let empty = write(&dir, "fig1.json", &case_spec(FIG1));
    let o = arrmod(&["realize", s(&empty)]);
    assert_eq!(o.status.code(), Some(2));
    assert!(stdout(&o).contains("certificate:"));

    let finite = write(&dir, "fig42.json", &case_spec(FIG42));
    let (v, code) = json(&["realize", s(&finite)]);
    assert_eq!(code, 0);
    assert_eq!(v["kind"], "Finite");
    assert_eq!(v["moduli_points"], 2);
    assert_eq!(v["quotient_points"], 2);

    let pencil = write(&dir, "pencil.json", r#"{"n_lines": 3, "points": [[1, 2, 3]]}"#);
    let o = arrmod(&["realize", s(&pencil)]);
    assert_eq!(o.status.code(), Some(3));
    assert!(stdout(&o).starts_with("NoPencilPair"));
}

#[test]
fn profiles_subcommand() {
    let out = stdout(&arrmod(&["profiles", "--lines", "3"]));
    assert!(out.contains("n_2=0 n_3=1") && out.contains("n_2=3 n_3=0") && out.contains("2 profiles"));

    let (v, code) = json(&["profiles", "--lines", "12", "--fix", "n7>=1", "--nonreductive"]);
    assert_eq!(code, 0);
    assert_eq!(v["profiles"].as_array().unwrap().len(), 0);

    let (v, _) = json(&["profiles", "--lines", "12", "--fix", "n6=1", "--nonreductive"]);
    let ps = v["profiles"].as_array().unwrap();
    assert!(!ps.is_empty());
    for p in ps {
        assert_eq!(p["n6"], 1);
        assert_eq!(p["n5"], 0);
        assert!(p["n4"].as_u64().unwrap() <= 1);
    }

    let o = arrmod(&["profiles", "--lines", "12", "--fix", "m6=1"]);
    assert_eq!(o.status.code(), Some(1));
}

#[test]
fn verify_paper_bundled_and_directory() {
    let (v, code) = json(&["verify-paper"]);
    assert_eq!(code, 0);
    assert_eq!(v["mismatches"], 0);
    assert!(v["flagged"].as_u64().unwrap() >= 3);

    let o = arrmod(&["verify-paper", "--case", "thm5.4"]);
    assert!(stdout(&o).contains("1 cases: 1 Match, 0 Mismatch, 0 FlaggedDiscrepancy"));

    let dir = TempDir::new().unwrap();
    write(&dir, "x.json", r#"{"id": "x", "n_lines": 3, "points": [[1, 2, 3]], "paper_claim": {"kind": "bogus"}}"#);
    let (v, code) = json(&["verify-paper", "--dir", s(dir.path())]);
    assert_eq!(code, 1);
    assert!(v["errors"][0].as_str().unwrap().contains("x.json"));
}

#[test]
fn isomorphic_subcommand() {
    let dir = TempDir::new().unwrap();
    let a = write(&dir, "a.json", r#"{"n_lines": 4, "points": [[1, 2, 3]]}"#);
    let b = write(&dir, "b.json", r#"{"n_lines": 4, "points": [[2, 3, 4]]}"#);
    let c = write(&dir, "c.json", r#"{"lines": ["X", "Y", "Z", "X+Y+Z"]}"#);
    let (v, code) = json(&["isomorphic", s(&a), s(&b)]);
    assert_eq!(code, 0);
    let perm: Vec<u64> = v["permutation"].as_array().unwrap().iter().map(|x| x.as_u64().unwrap()).collect();
    assert_eq!(perm[3], 1);
    let o = arrmod(&["isomorphic", s(&a), s(&c)]);
    assert_eq!(o.status.code(), Some(2));
    assert!(stdout(&o).contains("different profiles"));
}

#[test]
fn render_subcommand() {
    let dir = TempDir::new().unwrap();
    let out = dir.path().join("f.svg");
    let eq = write(&dir, "eq42.json", &case_field(FIG42, "paper_equation"));
    let (v, code) = json(&["render", s(&eq), "--out", s(&out), "--root-index", "1"]);
    assert_eq!(code, 0);
    assert!((v["root"].as_f64().unwrap() - 0.5f64.sqrt()).abs() < 1e-12);
    assert!(v["points"].as_array().unwrap().iter().any(|p| p["lines"].as_array().unwrap().len() == 6));
    let svg = fs::read_to_string(&out).unwrap();
    assert_eq!(svg.matches("<path").count(), 12);
    assert!(svg.contains(">6</text>"));

    let three = write(&dir, "three.json", r#"{"lines": ["X", "Y", "X-Y"]}"#);
    let o = arrmod(&["render", s(&three), "--out", s(&out)]);
    assert!(o.status.success());
    let svg = fs::read_to_string(&out).unwrap();
    assert_eq!(svg.matches("<path").count(), 3);
    assert!(svg.contains(">3</text>"));
    let again = fs::read_to_string(&out).unwrap();
    arrmod(&["render", s(&three), "--out", s(&out)]);
    assert_eq!(fs::read_to_string(&out).unwrap(), again);

    let eq12 = write(&dir, "eq12.json", &case_field(FIG12, "paper_equation"));
    let o = arrmod(&["render", s(&eq12), "--out", s(&out), "--root-index", "1"]);
    assert_eq!(o.status.code(), Some(1));
    assert!(String::from_utf8_lossy(&o.stderr).contains("is not real"));

    let o = arrmod(&["render", s(&three), "--out", s(&out), "--window", "1", "-1", "0", "1"]);
    assert!(String::from_utf8_lossy(&o.stderr).contains("window must be finite"));
}

#[test]
fn distribution_subcommand() {
    let (v, code) = json(&["distribution", "--pool", "6", "--total", "28", "--weights", "3,4,5"]);
    assert_eq!(code, 0);
    assert_eq!(v["solutions"], serde_json::json!([[0, 2, 4], [1, 0, 5]]));
    let out = stdout(&arrmod(&["distribution", "--pool", "6", "--total", "30"]));
    assert!(out.contains("(0,0,6,0)") && out.ends_with("7 solutions\n"));
}
