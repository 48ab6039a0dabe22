//! Black-box tests for the command-line interface: exit codes, JSON
//! output shape, and gauge round trips.

use std::io::Write;
use std::process::{Command, Output, Stdio};

fn bin() -> Command {
    Command::new(env!("CARGO_BIN_EXE_affsurf"))
}

fn write_temp(name: &str, contents: &str) -> std::path::PathBuf {
    let path = std::env::temp_dir().join(format!("affsurf-cli-{}-{}", std::process::id(), name));
    std::fs::write(&path, contents).unwrap();
    path
}

fn run(args: &[&str]) -> Output {
    bin().args(args).output().unwrap()
}

fn stdout(out: &Output) -> String {
    String::from_utf8_lossy(&out.stdout).into_owned()
}

#[test]
fn syntax_error_exits_2() {
    let path = write_temp("bad.conn", "kind: A\nbackend: exact\nGamma 1 1 1 = )\n");
    let out = run(&["tensors", path.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(2), "{}", String::from_utf8_lossy(&out.stderr));
}

#[test]
fn missing_file_exits_2() {
    let out = run(&["tensors", "/nonexistent/file.conn"]);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn torsion_free_classify_exits_3() {
    let path = write_temp(
        "tf.conn",
        "kind: A\nbackend: exact\nGamma 1 1 1 = 1\nGamma 2 2 1 = 1\n",
    );
    let out = run(&["classify", path.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(3));
}

#[test]
fn non_symmetric_classify_exits_4() {
    // torsion present but the Ricci tensor is not parallel
    let path = write_temp(
        "ns.conn",
        "kind: A\nbackend: exact\nGamma 1 2 1 = 1\nGamma 2 2 1 = 1\nGamma 1 1 2 = 1\n",
    );
    let out = run(&["classify", path.to_str().unwrap()]);
    assert_eq!(
        out.status.code(),
        Some(4),
        "{}",
        String::from_utf8_lossy(&out.stderr)
    );
}

#[test]
fn general_kind_classify_exits_5() {
    let path = write_temp(
        "gen.conn",
        "kind: general\nbackend: exact\nGamma 1 2 1 = x1\n",
    );
    let out = run(&["classify", path.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(5));
}

#[test]
fn tensors_json_shape() {
    let path = write_temp(
        "m21.conn",
        "kind: A\nbackend: exact\nGamma 1 1 1 = 1\nGamma 1 2 1 = 4\nGamma 2 2 1 = 1\n",
    );
    let out = run(&["tensors", path.to_str().unwrap(), "--json"]);
    assert_eq!(out.status.code(), Some(0));
    let v: serde_json::Value = serde_json::from_str(&stdout(&out)).unwrap();
    assert_eq!(v["kind"], "A");
    assert_eq!(v["backend"], "exact");
    let t = &v["tensors"];
    assert_eq!(t["torsion"][0], "2");
    assert_eq!(t["curvature_12"][0][0], "0");
    assert_eq!(t["ricci"][1][1], "1");
    assert_eq!(t["ricci_cd"].as_array().unwrap().len(), 2);
    assert_eq!(t["torsion_cd"][0][0], "0");
}

#[test]
fn classify_json_shape() {
    let path = write_temp(
        "m21b.conn",
        "kind: A\nbackend: exact\nGamma 1 1 1 = 1\nGamma 1 2 1 = 4\nGamma 2 2 1 = 1\n",
    );
    let out = run(&["classify", path.to_str().unwrap(), "--json"]);
    assert_eq!(out.status.code(), Some(0));
    let v: serde_json::Value = serde_json::from_str(&stdout(&out)).unwrap();
    let c = &v["classification"];
    assert_eq!(c["theorem"], "Thm2");
    assert_eq!(c["family"], 2);
    assert_eq!(c["params"]["u"], "2");
    assert_eq!(c["params"]["v"], "1");
    assert_eq!(c["signature"]["rank"], 1);
    assert_eq!(c["signature"]["class"], "positive-semidefinite");
    assert!(c["witness"].is_array());
}

#[test]
fn catalog_gauge_classify_pipeline() {
    // Emit a family, distort it with a shear and a flip, and check the
    // classifier undoes the damage.
    let out = run(&["catalog", "Thm4", "6", "--params", "omega=2,eta=3,eps=-1"]);
    assert_eq!(out.status.code(), Some(0));
    let path = write_temp("t46.conn", &stdout(&out));

    let sheared = run(&["gauge", path.to_str().unwrap(), "--linear", "2,0,1,3"]);
    assert_eq!(sheared.status.code(), Some(0));
    let path2 = write_temp("t46g.conn", &stdout(&sheared));

    let classified = run(&["classify", path2.to_str().unwrap(), "--json"]);
    assert_eq!(
        classified.status.code(),
        Some(0),
        "{}",
        String::from_utf8_lossy(&classified.stderr)
    );
    let v: serde_json::Value = serde_json::from_str(&stdout(&classified)).unwrap();
    let c = &v["classification"];
    assert_eq!(c["theorem"], "Thm4");
    assert_eq!(c["family"], 6);
    assert_eq!(c["params"]["omega"], "2");
    assert_eq!(c["params"]["eta"], "3");
    assert_eq!(c["params"]["eps"], "-1");
}

#[test]
fn gauge_requires_exactly_one_transform() {
    let path = write_temp(
        "g1.conn",
        "kind: A\nbackend: exact\nGamma 1 2 1 = 1\n",
    );
    let none = run(&["gauge", path.to_str().unwrap()]);
    assert_eq!(none.status.code(), Some(2));
    let both = run(&["gauge", path.to_str().unwrap(), "--flip", "--shear", "1,0"]);
    assert_eq!(both.status.code(), Some(2));
}

#[test]
fn gauge_round_trip_is_identity() {
    let out = run(&["catalog", "Thm4", "2", "--params", "alpha=5"]);
    let path = write_temp("t42.conn", &stdout(&out));
    let fwd = run(&["gauge", path.to_str().unwrap(), "--shear", "3,2"]);
    assert_eq!(fwd.status.code(), Some(0));
    let path2 = write_temp("t42f.conn", &stdout(&fwd));
    let back = run(&["gauge", path2.to_str().unwrap(), "--shear", "1/3,-2/3"]);
    assert_eq!(back.status.code(), Some(0));
    // (y1,y2) = (x1, (x2-b x1)/a) composes to the identity for
    // (a,b) then (1/a, -b/a); compare against an identity shear so both
    // sides have bound parameters flattened to their values
    let ident = run(&["gauge", path.to_str().unwrap(), "--shear", "1,0"]);
    assert_eq!(stdout(&back), stdout(&ident));
}

#[test]
fn killing_command_reports_both_ways() {
    let out = run(&["catalog", "Example1", "1"]);
    let path = write_temp("ex1.conn", &stdout(&out));
    let yes = run(&["killing", path.to_str().unwrap(), "--field", "0, x1"]);
    assert_eq!(yes.status.code(), Some(0));
    assert!(stdout(&yes).contains("yes"));
    let no = run(&["killing", path.to_str().unwrap(), "--field", "1, 0"]);
    assert_eq!(no.status.code(), Some(0));
    assert!(stdout(&no).contains("no"));
}

#[test]
fn verify_paper_json_status_ok() {
    let out = run(&["verify-paper", "--json"]);
    assert_eq!(out.status.code(), Some(0));
    let v: serde_json::Value = serde_json::from_str(&stdout(&out)).unwrap();
    assert_eq!(v["status"], "ok");
    assert_eq!(v["families_total"], 17);
    assert_eq!(v["families_verified"], 17);
}

#[test]
fn classify_reads_stdin_via_dash_path() {
    // /dev/stdin keeps the CLI scriptable in pipelines
    let mut child = bin()
        .args(["classify", "/dev/stdin", "--json"])
        .stdin(Stdio::piped())
        .stdout(Stdio::piped())
        .stderr(Stdio::piped())
        .spawn()
        .unwrap();
    child
        .stdin
        .as_mut()
        .unwrap()
        .write_all(b"kind: A\nbackend: exact\nGamma 1 1 1 = 1\nGamma 1 2 1 = 2\n")
        .unwrap();
    let out = child.wait_with_output().unwrap();
    assert_eq!(out.status.code(), Some(0));
    let v: serde_json::Value = serde_json::from_str(&stdout(&out)).unwrap();
    assert_eq!(v["classification"]["theorem"], "Thm2");
    assert_eq!(v["classification"]["family"], 1);
}
