//! End-to-end tests of the binary: exit codes, file round trips, and
//! byte-deterministic output.

use std::path::{Path, PathBuf};
use std::process::{Command, Output};

fn bin() -> Command {
    Command::new(env!("CARGO_BIN_EXE_fockex"))
}

fn write(dir: &Path, name: &str, content: &str) -> PathBuf {
    let path = dir.join(name);
    std::fs::write(&path, content).unwrap();
    path
}

fn run(args: &[&str]) -> Output {
    bin().args(args).output().expect("binary runs")
}

const IDENTITY_D4: &str = r#"{"kind":"matrix","parity":"even","blocks":[
 {"out_degree":0,"in_degree":0,"entries":[{"row":[],"col":[],"value":"1"}]},
 {"out_degree":2,"in_degree":2,"entries":[
   {"row":[1,2],"col":[1,2],"value":"1"},{"row":[1,3],"col":[1,3],"value":"1"},
   {"row":[1,4],"col":[1,4],"value":"1"},{"row":[2,3],"col":[2,3],"value":"1"},
   {"row":[2,4],"col":[2,4],"value":"1"},{"row":[3,4],"col":[3,4],"value":"1"}]},
 {"out_degree":4,"in_degree":4,"entries":[{"row":[1,2,3,4],"col":[1,2,3,4],"value":"1"}]}]}"#;

#[test]
fn identity_expands_to_scalar_kernel_with_zero_residual() {
    let dir = tempfile::tempdir().unwrap();
    let op = write(dir.path(), "id.json", IDENTITY_D4);
    let out = dir.path().join("kernels.json");
    let res = run(&[
        "expand",
        "--operator",
        op.to_str().unwrap(),
        "--out",
        out.to_str().unwrap(),
    ]);
    assert!(
        res.status.success(),
        "stderr: {}",
        String::from_utf8_lossy(&res.stderr)
    );
    let parsed: serde_json::Value =
        serde_json::from_str(&std::fs::read_to_string(&out).unwrap()).unwrap();
    assert_eq!(parsed["kind"], "kernels");
    assert_eq!(parsed["residual"], "0");
    assert_eq!(parsed["terms"].as_array().unwrap().len(), 1);
    assert_eq!(parsed["terms"][0]["l"], 0);
    assert_eq!(parsed["terms"][0]["m"], 0);

    // reconstruct returns the identity matrix file
    let back = dir.path().join("back.json");
    let res = run(&[
        "reconstruct",
        "--kernels",
        out.to_str().unwrap(),
        "--out",
        back.to_str().unwrap(),
    ]);
    assert!(res.status.success());
    let parsed: serde_json::Value =
        serde_json::from_str(&std::fs::read_to_string(&back).unwrap()).unwrap();
    assert_eq!(parsed["kind"], "matrix");
    assert_eq!(parsed["parity"], "even");
}

#[test]
fn apply_scalar_kernel_is_identity_map() {
    let dir = tempfile::tempdir().unwrap();
    let kernels = write(
        dir.path(),
        "k.json",
        r#"{"kind":"kernels","terms":[{"l":0,"m":0,"entries":[{"left":[],"right":[],"value":"1"}]}]}"#,
    );
    let phi = write(
        dir.path(),
        "phi.json",
        r#"{"components":[{"degree":2,"entries":[{"modes":[1,2],"value":"3/2"}]}]}"#,
    );
    let res = run(&[
        "apply",
        "--kernels",
        kernels.to_str().unwrap(),
        "--vector",
        phi.to_str().unwrap(),
    ]);
    assert!(res.status.success());
    let parsed: serde_json::Value = serde_json::from_slice(&res.stdout).unwrap();
    assert_eq!(parsed["components"][0]["degree"], 2);
    assert_eq!(parsed["components"][0]["entries"][0]["value"], "3/2");
}

#[test]
fn symbol_and_s_transform_values() {
    let dir = tempfile::tempdir().unwrap();
    let op = write(dir.path(), "id.json", IDENTITY_D4);
    let zeta = write(
        dir.path(),
        "zeta.json",
        r#"{"components":[{"degree":2,"entries":[{"modes":[1,2],"value":"1"}]}]}"#,
    );
    let zero = write(dir.path(), "zero.json", r#"{"components":[]}"#);
    let vac = write(
        dir.path(),
        "vac.json",
        r#"{"components":[{"degree":0,"entries":[{"modes":[],"value":"1"}]}]}"#,
    );

    let res = run(&[
        "symbol",
        "--operator",
        op.to_str().unwrap(),
        "--zeta",
        zero.to_str().unwrap(),
        "--eta",
        zero.to_str().unwrap(),
    ]);
    assert!(res.status.success());
    assert_eq!(String::from_utf8_lossy(&res.stdout).trim(), "1");

    let res = run(&[
        "symbol",
        "--operator",
        op.to_str().unwrap(),
        "--zeta",
        zeta.to_str().unwrap(),
        "--eta",
        zeta.to_str().unwrap(),
    ]);
    assert_eq!(String::from_utf8_lossy(&res.stdout).trim(), "5/4");

    let res = run(&[
        "symbol",
        "--phi",
        vac.to_str().unwrap(),
        "--zeta",
        zeta.to_str().unwrap(),
    ]);
    assert_eq!(String::from_utf8_lossy(&res.stdout).trim(), "1");
}

#[test]
fn full_parity_expand_round_trips() {
    let dir = tempfile::tempdir().unwrap();
    // a'(e1) at d = 3
    let op = write(
        dir.path(),
        "adag.json",
        r#"{"kind":"matrix","parity":"full","blocks":[
        {"out_degree":1,"in_degree":0,"entries":[{"row":[1],"col":[],"value":"1"}]},
        {"out_degree":2,"in_degree":1,"entries":[{"row":[1,2],"col":[2],"value":"1"},{"row":[1,3],"col":[3],"value":"1"}]},
        {"out_degree":3,"in_degree":2,"entries":[{"row":[1,2,3],"col":[2,3],"value":"1"}]}]}"#,
    );
    let kernels = dir.path().join("kernels.json");
    let res = run(&[
        "expand",
        "--modes",
        "3",
        "--operator",
        op.to_str().unwrap(),
        "--out",
        kernels.to_str().unwrap(),
    ]);
    assert!(
        res.status.success(),
        "stderr: {}",
        String::from_utf8_lossy(&res.stderr)
    );
    let parsed: serde_json::Value =
        serde_json::from_str(&std::fs::read_to_string(&kernels).unwrap()).unwrap();
    assert_eq!(parsed["kind"], "kernels_full");
    assert_eq!(parsed["residual"], "0");
    // parity-flipping: the even->even and odd->odd families are empty
    assert!(parsed["families"]["pp"]["terms"]
        .as_array()
        .unwrap()
        .is_empty());
    assert!(parsed["families"]["mm"]["terms"]
        .as_array()
        .unwrap()
        .is_empty());

    let back = dir.path().join("back.json");
    let res = run(&[
        "reconstruct",
        "--modes",
        "3",
        "--kernels",
        kernels.to_str().unwrap(),
        "--out",
        back.to_str().unwrap(),
    ]);
    assert!(res.status.success());
    let parsed: serde_json::Value =
        serde_json::from_str(&std::fs::read_to_string(&back).unwrap()).unwrap();
    assert_eq!(parsed["parity"], "full");
}

#[test]
fn usage_and_format_errors_exit_two() {
    let dir = tempfile::tempdir().unwrap();
    let bad = write(dir.path(), "bad.json", "{\"kind\":");
    let res = run(&["validate", bad.to_str().unwrap()]);
    assert_eq!(res.status.code(), Some(2));

    let res = run(&["verify", "--modes", "0", "--suite", "wedge"]);
    assert_eq!(res.status.code(), Some(2));

    let res = run(&["verify", "--suite", "nonsense"]);
    assert_eq!(res.status.code(), Some(2));

    // unsorted eigenvalues
    let res = run(&[
        "verify",
        "--suite",
        "wedge",
        "--modes",
        "2",
        "--lambdas",
        "3,2",
    ]);
    assert_eq!(res.status.code(), Some(2));
}

#[test]
fn verify_suites_pass_and_are_deterministic() {
    let dir = tempfile::tempdir().unwrap();
    let out1 = dir.path().join("v1.json");
    let out2 = dir.path().join("v2.json");
    for out in [&out1, &out2] {
        let res = run(&[
            "verify",
            "--suite",
            "car",
            "--report",
            "json",
            "--out",
            out.to_str().unwrap(),
        ]);
        assert!(
            res.status.success(),
            "stderr: {}",
            String::from_utf8_lossy(&res.stderr)
        );
    }
    assert_eq!(std::fs::read(&out1).unwrap(), std::fs::read(&out2).unwrap());
    let parsed: serde_json::Value =
        serde_json::from_str(&std::fs::read_to_string(&out1).unwrap()).unwrap();
    assert_eq!(parsed["pass"], true);
}

#[test]
fn float_mode_accepts_numbers() {
    let dir = tempfile::tempdir().unwrap();
    let op = write(
        dir.path(),
        "f.json",
        r#"{"kind":"matrix","parity":"even","blocks":[
        {"out_degree":0,"in_degree":0,"entries":[{"row":[],"col":[],"value":1.5}]}]}"#,
    );
    let res = run(&[
        "--arith",
        "float",
        "expand",
        "--operator",
        op.to_str().unwrap(),
    ]);
    assert!(
        res.status.success(),
        "stderr: {}",
        String::from_utf8_lossy(&res.stderr)
    );
    let parsed: serde_json::Value = serde_json::from_slice(&res.stdout).unwrap();
    assert_eq!(parsed["terms"][0]["entries"][0]["value"], 1.5);
    // rational mode rejects non-exact numbers
    let res = run(&["validate", op.to_str().unwrap()]);
    assert_eq!(res.status.code(), Some(2));
}
