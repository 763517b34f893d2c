//! Runs the example binaries that `cargo test` builds alongside the tests.

use std::path::PathBuf;
use std::process::Command;

fn example(name: &str) -> PathBuf {
    let deps = std::env::current_exe().unwrap();
    let dir = deps.parent().unwrap().parent().unwrap().join("examples");
    dir.join(format!("{name}{}", std::env::consts::EXE_SUFFIX))
}

fn run(name: &str, args: &[&str]) -> String {
    let path = example(name);
    assert!(path.exists(), "{} not built; run through `cargo test`", path.display());
    let out = Command::new(&path).args(args).output().unwrap();
    assert!(out.status.success(), "{name}: {}", String::from_utf8_lossy(&out.stderr));
    String::from_utf8(out.stdout).unwrap()
}

#[test]
fn learn_envelope_example() {
    let out = run("learn_envelope", &[]);
    assert!(out.contains("models(H) == closure(models(phi)): true"));
    assert!(out.contains("H saturated: true"));
    assert!(out.contains("bounds ok: true, invariant violations: 0"));
}

#[test]
fn classic_nontermination_example() {
    let out = run("classic_nontermination", &["9"]);
    assert!(out.contains("H emptied 3 times"));
    assert!(out.contains("period-3 pattern [4, 1, 0]: true"));
}

#[test]
fn closure_and_envelope_example() {
    let out = run("closure_and_envelope", &[]);
    assert!(out.contains("added by the envelope  {} {d}"));
    assert!(out.contains("make_horn({d}) = d -> T, trivial: true"));
}

#[test]
fn cnf_reduction_example() {
    let out = run("cnf_reduction", &[]);
    assert!(out.contains("dec(enc(phi)) equivalent to phi: true"));
    assert!(out.contains("equivalent: true"));
}

#[test]
fn wire_oracle_example() {
    let out = run("wire_oracle", &[]);
    assert!(out.contains("c d =>"));
    assert!(out.contains("0 protocol errors"));
}

#[test]
fn planted_rules_example() {
    let out = run("planted_rules", &["7"]);
    for rule in [
        "nurse & male -> F",
        "priest & female -> F",
        "mathematician & female -> F",
        "footballer & female -> F",
        "banker & female -> F",
    ] {
        assert!(out.contains(rule), "{rule} missing:\n{out}");
    }
}
