use std::fs;
use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use decospan::cli::{Network, NetworkDocument};
use decospan::cospan::associator;
use tempfile::TempDir;

fn data(name: &str) -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR"))
        .join("examples/data")
        .join(name)
}

fn decospan(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_decospan"))
        .args(args)
        .output()
        .unwrap()
}

fn path_str(p: &Path) -> &str {
    p.to_str().unwrap()
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn stderr(o: &Output) -> String {
    String::from_utf8(o.stderr.clone()).unwrap()
}

fn write(dir: &TempDir, name: &str, body: &str) -> PathBuf {
    let p = dir.path().join(name);
    fs::write(&p, body).unwrap();
    p
}

#[test]
fn single_network_round_trips_byte_for_byte() {
    let dir = TempDir::new().unwrap();
    let canonical = Network::load(&data("first_circuit.json"))
        .unwrap()
        .to_document()
        .to_canonical();
    let net = write(&dir, "net.json", &canonical);
    let pipeline = write(
        &dir,
        "p.json",
        r#"{"networks": {"n": "net.json"}, "expr": "n"}"#,
    );
    let out = decospan(&["compose", path_str(&pipeline)]);
    assert!(out.status.success(), "{}", stderr(&out));
    assert_eq!(stdout(&out), canonical);
    assert_eq!(fs::read_to_string(net).unwrap(), canonical);
}

#[test]
fn compose_writes_output_file() {
    let dir = TempDir::new().unwrap();
    let target = dir.path().join("out.json");
    let out = decospan(&[
        "compose",
        path_str(&data("compose_pipeline.json")),
        "--output",
        path_str(&target),
    ]);
    assert!(out.status.success());
    let doc = NetworkDocument::parse(&fs::read_to_string(&target).unwrap(), "out").unwrap();
    assert_eq!(
        (doc.apex, doc.in_leg, doc.out_leg),
        (4, vec![0], vec![3, 1])
    );
}

#[test]
fn bracketings_agree_up_to_the_associator() {
    let dir = TempDir::new().unwrap();
    let left = format!(
        r#"{{"networks": {{"t": "{}", "d": "{}"}}, "expr": {{"compose": [{{"compose": ["t", "t"]}}, "d"]}}}}"#,
        path_str(&data("leaky_tank.json")),
        path_str(&data("drain.json"))
    );
    let right = left.replace(
        r#"[{"compose": ["t", "t"]}, "d"]"#,
        r#"["t", {"compose": ["t", "d"]}]"#,
    );
    assert_ne!(left, right);
    let (left, right) = (write(&dir, "l.json", &left), write(&dir, "r.json", &right));

    let l = decospan(&["compose", path_str(&left)]);
    let r = decospan(&["compose", path_str(&right)]);
    assert!(l.status.success() && r.status.success());

    // related by the associator, checked with the check subcommand
    let tank = Network::load(&data("leaky_tank.json")).unwrap();
    let drain = Network::load(&data("drain.json")).unwrap();
    let alpha = associator(tank.cospan(), tank.cospan(), drain.cospan()).unwrap();
    let map = write(
        &dir,
        "alpha.json",
        &format!(r#"{{"apex_map": {:?}}}"#, alpha.apex_bijection().table()),
    );
    let (lo, ro) = (
        write(&dir, "lo.json", &stdout(&l)),
        write(&dir, "ro.json", &stdout(&r)),
    );
    let check = decospan(&["check", path_str(&lo), path_str(&ro), path_str(&map)]);
    assert_eq!(check.status.code(), Some(0), "{}", stderr(&check));

    let l = decospan(&["compose", "--normalize", path_str(&left)]);
    let r = decospan(&["compose", "--normalize", path_str(&right)]);
    assert_eq!(l.stdout, r.stdout);
}

#[test]
fn foot_mismatch_is_a_type_error_with_position() {
    let dir = TempDir::new().unwrap();
    let p = write(
        &dir,
        "p.json",
        &format!(
            r#"{{"networks": {{"a": "{}", "b": "{}"}}, "expr": {{"compose": ["a", "a", "b"]}}}}"#,
            path_str(&data("second_circuit.json")),
            path_str(&data("first_circuit.json"))
        ),
    );
    let out = decospan(&["compose", path_str(&p)]);
    assert_eq!(out.status.code(), Some(2));
    let err = stderr(&out);
    assert!(
        err.starts_with("error[E_FOOT_MISMATCH]: expr.compose[2]"),
        "{err}"
    );
}

#[test]
fn malformed_input_exits_two() {
    let dir = TempDir::new().unwrap();
    let p = write(&dir, "bad.json", "{ not json");
    let out = decospan(&["export", path_str(&p)]);
    assert_eq!(out.status.code(), Some(2));
    assert!(stderr(&out).starts_with("error[E_PARSE]"));
    let out = decospan(&["export", path_str(&dir.path().join("missing.json"))]);
    assert!(stderr(&out).starts_with("error[E_IO]"));
    let out = decospan(&[
        "compose",
        path_str(&data("tensor_pipeline.json")),
        "--bogus",
    ]);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn check_exit_codes() {
    let first = data("first_circuit.json");
    let out = decospan(&[
        "check",
        path_str(&first),
        path_str(&first),
        path_str(&data("identity_map.json")),
    ]);
    assert_eq!(out.status.code(), Some(0));
    let out = decospan(&[
        "check",
        path_str(&first),
        path_str(&data("relabeled_circuit.json")),
        path_str(&data("relabel_map.json")),
    ]);
    assert_eq!(out.status.code(), Some(0));
    let out = decospan(&[
        "check",
        path_str(&first),
        path_str(&data("corrupted_label.json")),
        path_str(&data("relabel_map.json")),
    ]);
    assert_eq!(out.status.code(), Some(1));
    assert!(stderr(&out).contains("decoration not preserved"));
    let out = decospan(&[
        "check",
        path_str(&first),
        path_str(&data("growth.json")),
        path_str(&data("identity_map.json")),
    ]);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn tensor_subcommand_matches_pipeline() {
    let direct = decospan(&[
        "tensor",
        path_str(&data("first_circuit_one_output.json")),
        path_str(&data("second_circuit.json")),
    ]);
    let piped = decospan(&["compose", path_str(&data("tensor_pipeline.json"))]);
    assert!(direct.status.success());
    assert_eq!(direct.stdout, piped.stdout);
}

#[test]
fn export_is_deterministic() {
    let first = path_str(&data("first_circuit.json")).to_owned();
    let a = decospan(&["export", &first, "--format", "dot"]);
    let b = decospan(&["export", &first, "--format", "dot"]);
    assert_eq!(a.stdout, b.stdout);
    let dot = stdout(&a);
    assert!(dot.contains("n0 -> n1 [label=\"1.3\"];"));
    assert!(dot.contains("y1 -> n1 [color=gray, penwidth=2];"));
    let csv = stdout(&decospan(&["export", &first, "--format", "csv"]));
    assert_eq!(csv, "src,tgt,label\n0,1,1.3\n0,2,0.8\n1,0,0.2\n2,1,2.0\n");

    let dir = TempDir::new().unwrap();
    let empty = write(
        &dir,
        "empty.json",
        r#"{"backend": "circuit", "left_foot": 0, "right_foot": 0, "apex": 0, "in_leg": [], "out_leg": [], "decoration": {"edges": []}}"#,
    );
    let out = decospan(&["export", path_str(&empty)]);
    assert_eq!(stdout(&out).lines().count(), 4);
}

#[test]
fn simulate_exponential_growth() {
    let out = decospan(&[
        "simulate",
        path_str(&data("growth.json")),
        "--start",
        "1",
        "--step",
        "1/10",
        "--steps",
        "3",
    ]);
    assert_eq!(
        stdout(&out),
        "step,x0\n0,1\n1,11/10\n2,121/100\n3,1331/1000\n"
    );
    let out = decospan(&[
        "simulate",
        path_str(&data("growth.json")),
        "--start",
        "-2",
        "--step",
        "0.5",
        "--steps",
        "2",
        "--float",
    ]);
    assert_eq!(stdout(&out), "step,x0\n0,-2\n1,-3\n2,-4.5\n");
}

#[test]
fn simulate_zero_field_stays_put() {
    let dir = TempDir::new().unwrap();
    let zero = write(
        &dir,
        "zero.json",
        r#"{"backend": "vectfield", "left_foot": 1, "right_foot": 1, "apex": 2, "in_leg": [0], "out_leg": [1], "decoration": {"components": ["0", "0"]}}"#,
    );
    let out = decospan(&[
        "simulate",
        path_str(&zero),
        "--start",
        "1/3,2",
        "--step",
        "1",
        "--steps",
        "2",
    ]);
    assert_eq!(stdout(&out), "step,x0,x1\n0,1/3,2\n1,1/3,2\n2,1/3,2\n");
    let out = decospan(&[
        "simulate",
        path_str(&zero),
        "--start",
        "1",
        "--step",
        "1",
        "--steps",
        "2",
    ]);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn simulating_a_composite_uses_the_composite_field() {
    let dir = TempDir::new().unwrap();
    let composite = decospan(&["compose", path_str(&data("tank_pipeline.json"))]);
    let file = write(&dir, "composite.json", &stdout(&composite));
    let out = decospan(&[
        "simulate",
        path_str(&file),
        "--start",
        "4,0,0,0",
        "--step",
        "1/4",
        "--steps",
        "2",
    ]);
    assert_eq!(
        stdout(&out),
        "step,x0,x1,x2,x3\n0,4,0,0,0\n1,3,1,0,0\n2,5/2,5/4,1/4,0\n"
    );
}

#[test]
fn laws_subcommand_writes_reports() {
    let dir = TempDir::new().unwrap();
    let out_dir = dir.path().join("reports");
    let run = || {
        decospan(&[
            "laws",
            "--seed",
            "3",
            "--cases",
            "20",
            "--max-size",
            "3",
            "--output",
            path_str(&out_dir),
        ])
    };
    let out = run();
    assert_eq!(out.status.code(), Some(0), "{}", stdout(&out));
    let json: serde_json::Value =
        serde_json::from_str(&fs::read_to_string(out_dir.join("laws.json")).unwrap()).unwrap();
    assert_eq!(json["generator"]["seed"], 3);
    assert!(json["reports"]
        .as_array()
        .unwrap()
        .iter()
        .all(|r| r["failures"].as_array().unwrap().is_empty()));
    let text = fs::read_to_string(out_dir.join("laws.txt")).unwrap();
    assert!(text.ends_with("laws, 0 failed\n"));
    let strip = |s: String| {
        s.lines()
            .map(|l| l.split("checks").next().unwrap().to_owned())
            .collect::<Vec<_>>()
    };
    assert_eq!(strip(stdout(&run())), strip(text));
}
