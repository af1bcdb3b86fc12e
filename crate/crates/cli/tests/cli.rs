//! End-to-end tests of the `stallings` binary: file round-trips, exit
//! codes, and byte-stable output.

use std::path::{Path, PathBuf};
use std::process::{Command, Output};

fn bin() -> Command {
    Command::new(env!("CARGO_BIN_EXE_stallings"))
}

fn write(dir: &Path, name: &str, contents: &str) -> PathBuf {
    let path = dir.join(name);
    std::fs::write(&path, contents).unwrap();
    path
}

fn stdout(output: &Output) -> String {
    String::from_utf8(output.stdout.clone()).unwrap()
}

const FLOWER: &str =
    r#"{"alphabet":["a","b","c"],"generators":["c","b a^-1 c^-1","a c a^-1"]}"#;
const KERNEL: &str = r#"{"alphabet":["a","b"],"generators":["b","a^2","a b a^-1"]}"#;
const AB: &str = r#"{"alphabet":["a","b"],"generators":["a b"]}"#;

#[test]
fn build_writes_the_two_state_automaton() {
    let dir = tempfile::tempdir().unwrap();
    let input = write(dir.path(), "k.json", FLOWER);
    let out = dir.path().join("aut.json");
    let result = bin()
        .args(["build", "--input"])
        .arg(&input)
        .arg("--out")
        .arg(&out)
        .output()
        .unwrap();
    assert!(result.status.success());
    let text = std::fs::read_to_string(&out).unwrap();
    let parsed: serde_json::Value = serde_json::from_str(&text).unwrap();
    assert_eq!(parsed["states"], 2);
    assert_eq!(parsed["basepoint"], 0);
    assert_eq!(parsed["edges"].as_array().unwrap().len(), 4);

    // building from the built file round-trips byte for byte
    let out2 = dir.path().join("aut2.json");
    let result = bin()
        .args(["build", "--input"])
        .arg(&out)
        .arg("--out")
        .arg(&out2)
        .output()
        .unwrap();
    assert!(result.status.success());
    assert_eq!(text, std::fs::read_to_string(&out2).unwrap());
}

#[test]
fn build_empty_generators_gives_one_state() {
    let dir = tempfile::tempdir().unwrap();
    let input = write(dir.path(), "k.json", r#"{"alphabet":["a","b"],"generators":[]}"#);
    let out = dir.path().join("aut.json");
    assert!(bin()
        .args(["build", "--input"])
        .arg(&input)
        .arg("--out")
        .arg(&out)
        .status()
        .unwrap()
        .success());
    let parsed: serde_json::Value =
        serde_json::from_str(&std::fs::read_to_string(&out).unwrap()).unwrap();
    assert_eq!(parsed["states"], 1);
    assert_eq!(parsed["edges"].as_array().unwrap().len(), 0);
}

#[test]
fn build_collapse_to_full_group() {
    let dir = tempfile::tempdir().unwrap();
    let input =
        write(dir.path(), "k.json", r#"{"alphabet":["a","b"],"generators":["a b","b"]}"#);
    let out = dir.path().join("aut.json");
    assert!(bin()
        .args(["build", "--input"])
        .arg(&input)
        .arg("--out")
        .arg(&out)
        .status()
        .unwrap()
        .success());
    let parsed: serde_json::Value =
        serde_json::from_str(&std::fs::read_to_string(&out).unwrap()).unwrap();
    assert_eq!(parsed["states"], 1);
    assert_eq!(parsed["edges"].as_array().unwrap().len(), 2);
}

#[test]
fn exit_codes() {
    let dir = tempfile::tempdir().unwrap();
    // malformed JSON → 2
    let bad = write(dir.path(), "bad.json", "{ not json");
    let result = bin().args(["index", "--input"]).arg(&bad).output().unwrap();
    assert_eq!(result.status.code(), Some(2));
    let err = String::from_utf8(result.stderr).unwrap();
    assert!(err.contains("line"), "parse error names a position: {err}");

    // unknown generator in a word → 2
    let input = write(dir.path(), "k.json", AB);
    let result = bin()
        .args(["member", "--input"])
        .arg(&input)
        .args(["--word", "a z"])
        .output()
        .unwrap();
    assert_eq!(result.status.code(), Some(2));

    // invariant violation (nondeterministic edges) → 3
    let nondet = write(
        dir.path(),
        "nondet.json",
        r#"{"alphabet":["a"],"states":2,"basepoint":0,"edges":[[0,"a",0],[0,"a",1]]}"#,
    );
    let result = bin().args(["index", "--input"]).arg(&nondet).output().unwrap();
    assert_eq!(result.status.code(), Some(3));

    // monoid cap → 4 naming the cap
    let result = bin()
        .args(["monoid", "--input"])
        .arg(write(dir.path(), "cap.json", FLOWER))
        .args(["--monoid-cap", "2"])
        .output()
        .unwrap();
    assert_eq!(result.status.code(), Some(4));
    assert!(String::from_utf8(result.stderr).unwrap().contains('2'));
}

#[test]
fn member_and_index() {
    let dir = tempfile::tempdir().unwrap();
    let input = write(dir.path(), "k.json", FLOWER);
    let result = bin()
        .args(["member", "--input"])
        .arg(&input)
        .args(["--word", "b c b^-1"])
        .output()
        .unwrap();
    assert_eq!(stdout(&result), "member: true\n");
    let result = bin()
        .args(["member", "--input"])
        .arg(&input)
        .args(["--word", "a"])
        .output()
        .unwrap();
    assert_eq!(stdout(&result), "member: false\n");
    let result = bin().args(["index", "--input"]).arg(&input).output().unwrap();
    assert_eq!(stdout(&result), "index: infinite\n");
    let kernel = write(dir.path(), "kernel.json", KERNEL);
    let result = bin().args(["index", "--input"]).arg(&kernel).output().unwrap();
    assert_eq!(stdout(&result), "index: 2\n");
}

#[test]
fn analyze_reports() {
    let dir = tempfile::tempdir().unwrap();
    let kernel = write(dir.path(), "kernel.json", KERNEL);
    let result = bin().arg("analyze").arg(&kernel).output().unwrap();
    assert!(result.status.success());
    let text = stdout(&result);
    assert!(text.contains("index: 2"));
    assert!(text.contains("normal: true"));
    assert!(text.contains("pure: false"));
    assert!(text.contains("burnside exponent 2: true"));
    assert!(text.contains("burnside exponent 3: false"));
    assert!(text.contains("cyclonormal: false"));

    let ab = write(dir.path(), "ab.json", AB);
    let result = bin().arg("analyze").arg(&ab).output().unwrap();
    let text = stdout(&result);
    assert!(text.contains("index: infinite"));
    assert!(text.contains("malnormal: true"));
    assert!(text.contains("cyclonormal: true"));
    assert!(text.contains("pure: true"));

    let flower = write(dir.path(), "flower.json", FLOWER);
    let result = bin().arg("analyze").arg(&flower).output().unwrap();
    let text = stdout(&result);
    assert!(text.contains("pure: true"));
    assert!(text.contains("monoid size: 6"));

    // json format carries the schema marker
    let result = bin()
        .arg("analyze")
        .arg(&kernel)
        .args(["--format", "json"])
        .output()
        .unwrap();
    let parsed: serde_json::Value = serde_json::from_str(&stdout(&result)).unwrap();
    assert_eq!(parsed["schema"], "stallings-report/1");
    assert_eq!(parsed["index"], 2);
    assert_eq!(parsed["normal"], true);
}

#[test]
fn analyze_is_deterministic_and_parallel_order_is_stable() {
    let dir = tempfile::tempdir().unwrap();
    let a = write(dir.path(), "a.json", KERNEL);
    let b = write(dir.path(), "b.json", AB);
    let c = write(dir.path(), "c.json", FLOWER);
    let serial = bin().arg("analyze").args([&a, &b, &c]).output().unwrap();
    let again = bin().arg("analyze").args([&a, &b, &c]).output().unwrap();
    assert_eq!(serial.stdout, again.stdout);
    let parallel = bin()
        .arg("analyze")
        .args([&a, &b, &c])
        .args(["--jobs", "3"])
        .output()
        .unwrap();
    assert_eq!(serial.stdout, parallel.stdout);
}

#[test]
fn apply_endomorphisms() {
    let dir = tempfile::tempdir().unwrap();
    let single = write(dir.path(), "a.json", r#"{"alphabet":["a","b"],"generators":["a"]}"#);
    let out = dir.path().join("image.json");
    assert!(bin()
        .args(["apply", "--input"])
        .arg(&single)
        .args(["--nielsen", "beta a b", "--out"])
        .arg(&out)
        .status()
        .unwrap()
        .success());
    let parsed: serde_json::Value =
        serde_json::from_str(&std::fs::read_to_string(&out).unwrap()).unwrap();
    assert_eq!(parsed["states"], 2);

    // the identity leaves the file unchanged
    let built = dir.path().join("built.json");
    assert!(bin()
        .args(["build", "--input"])
        .arg(&single)
        .arg("--out")
        .arg(&built)
        .status()
        .unwrap()
        .success());
    let out2 = dir.path().join("same.json");
    let endo = write(
        dir.path(),
        "endo.json",
        r#"{"alphabet":["a","b"],"images":["a","b"]}"#,
    );
    assert!(bin()
        .args(["apply", "--input"])
        .arg(&single)
        .arg("--endo")
        .arg(&endo)
        .arg("--out")
        .arg(&out2)
        .status()
        .unwrap()
        .success());
    assert_eq!(
        std::fs::read_to_string(&built).unwrap(),
        std::fs::read_to_string(&out2).unwrap()
    );
}

#[test]
fn export_dot() {
    let dir = tempfile::tempdir().unwrap();
    let single = write(dir.path(), "a.json", r#"{"alphabet":["a","b"],"generators":["a"]}"#);
    let result = bin().args(["export-dot", "--input"]).arg(&single).output().unwrap();
    let text = stdout(&result);
    assert!(text.contains("digraph"));
    assert!(text.contains("doublecircle"));
    assert!(text.contains("q0 -> q0 [label=\"a\"]"));

    let flower = write(dir.path(), "k.json", FLOWER);
    let result = bin().args(["export-dot", "--input"]).arg(&flower).output().unwrap();
    let text = stdout(&result);
    assert_eq!(text.matches("->").count(), 4);
}

#[test]
fn conjugate_and_conjugacy_test() {
    let dir = tempfile::tempdir().unwrap();
    let k = write(dir.path(), "k.json", r#"{"alphabet":["a","b"],"generators":["a b a^-1"]}"#);
    let conj = dir.path().join("conj.json");
    assert!(bin()
        .args(["conjugate", "--input"])
        .arg(&k)
        .args(["--word", "a^-1", "--out"])
        .arg(&conj)
        .status()
        .unwrap()
        .success());
    let parsed: serde_json::Value =
        serde_json::from_str(&std::fs::read_to_string(&conj).unwrap()).unwrap();
    assert_eq!(parsed["states"], 1);

    let result = bin()
        .args(["conjugacy-test", "--input"])
        .arg(&k)
        .arg("--other")
        .arg(&conj)
        .output()
        .unwrap();
    let text = stdout(&result);
    assert!(text.starts_with("conjugate: true"));
    assert!(text.contains("witness:"));

    let other = write(dir.path(), "other.json", AB);
    let result = bin()
        .args(["conjugacy-test", "--input"])
        .arg(&k)
        .arg("--other")
        .arg(&other)
        .output()
        .unwrap();
    assert_eq!(stdout(&result), "conjugate: false\n");
}

#[test]
fn intersect_cyclic_powers() {
    let dir = tempfile::tempdir().unwrap();
    let a2 = write(dir.path(), "a2.json", r#"{"alphabet":["a"],"generators":["a^2"]}"#);
    let a3 = write(dir.path(), "a3.json", r#"{"alphabet":["a"],"generators":["a^3"]}"#);
    let out = dir.path().join("meet.json");
    assert!(bin()
        .args(["intersect", "--input"])
        .arg(&a2)
        .arg("--other")
        .arg(&a3)
        .arg("--out")
        .arg(&out)
        .status()
        .unwrap()
        .success());
    let parsed: serde_json::Value =
        serde_json::from_str(&std::fs::read_to_string(&out).unwrap()).unwrap();
    assert_eq!(parsed["states"], 6);
}

#[test]
fn monoid_listing() {
    let dir = tempfile::tempdir().unwrap();
    let ab = write(dir.path(), "ab.json", AB);
    let result = bin().args(["monoid", "--input"]).arg(&ab).output().unwrap();
    let text = stdout(&result);
    assert!(text.contains("monoid size: 6"));
    assert!(text.contains("green R:"));
    assert!(text.contains("green D:"));
    assert!(text.contains("reduced-realizable idempotents: 3"));
    assert!(text.contains("idempotent chain length: 2"));
}

#[test]
fn group_identities() {
    let dir = tempfile::tempdir().unwrap();
    let kernel = write(dir.path(), "kernel.json", KERNEL);
    let result = bin()
        .args(["identities", "--input"])
        .arg(&kernel)
        .args(["--identity", "x y x^-1 y^-1", "--identity", "x^2"])
        .output()
        .unwrap();
    assert_eq!(stdout(&result), "satisfied: true\n");

    // infinite index is an invariant violation
    let ab = write(dir.path(), "ab.json", AB);
    let result = bin()
        .args(["identities", "--input"])
        .arg(&ab)
        .args(["--identity", "x^2"])
        .output()
        .unwrap();
    assert_eq!(result.status.code(), Some(3));

    // more than three variables triggers a cost warning
    let result = bin()
        .args(["identities", "--input"])
        .arg(&kernel)
        .args(["--variables", "x,y,z,w", "--identity", "x y z w x^-1 y^-1 z^-1 w^-1"])
        .output()
        .unwrap();
    assert!(result.status.success());
    assert!(String::from_utf8(result.stderr).unwrap().contains("warning"));
}

#[test]
fn automorphism_detection() {
    let result = bin()
        .args(["is-automorphism", "--alphabet", "a,b", "--nielsen", "beta a b; alpha b"])
        .output()
        .unwrap();
    assert_eq!(stdout(&result), "automorphism: true\n");
    let dir = tempfile::tempdir().unwrap();
    let endo = write(
        dir.path(),
        "endo.json",
        r#"{"alphabet":["a","b"],"images":["a^2","b"]}"#,
    );
    let result = bin()
        .args(["is-automorphism", "--endo"])
        .arg(&endo)
        .output()
        .unwrap();
    assert_eq!(stdout(&result), "automorphism: false\n");
}
