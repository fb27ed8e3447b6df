use std::path::PathBuf;
use std::process::{Command, Output};

use serde_json::Value;

fn data(name: &str) -> String {
    let p: PathBuf = [env!("CARGO_MANIFEST_DIR"), "..", "..", "data", name]
        .iter()
        .collect();
    p.to_string_lossy().into_owned()
}

fn omkit(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_omkit"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8_lossy(&o.stdout).into_owned()
}

fn write_temp(contents: &str) -> tempfile::NamedTempFile {
    let f = tempfile::NamedTempFile::new().unwrap();
    std::fs::write(f.path(), contents).unwrap();
    f
}

#[test]
fn check_four_lines() {
    let o = omkit(&["check", "--input", &data("four_lines.covectors.json")]);
    assert_eq!(o.status.code(), Some(0));
    let out = stdout(&o);
    assert!(out.contains("AOM: yes, OM: no"), "{out}");
    assert!(out.lines().any(|l| l.starts_with("0 ") && l.contains("no")));
}

#[test]
fn check_arrangement_directly() {
    let a = omkit(&[
        "check",
        "--input",
        &data("four_lines.json"),
        "--format",
        "json",
    ]);
    let b = omkit(&[
        "check",
        "--input",
        &data("four_lines.covectors.json"),
        "--format",
        "json",
    ]);
    assert_eq!(a.status.code(), Some(0));
    assert_eq!(stdout(&a), stdout(&b));
}

#[test]
fn wrong_length_covector_is_an_input_error() {
    let f = write_temp(r#"{"ground": ["a", "b"], "covectors": ["+0-"]}"#);
    let o = omkit(&["check", "--input", f.path().to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&o.stderr).starts_with("error:"));
}

#[test]
fn bad_inputs_exit_two() {
    let garbage = write_temp("not json");
    let unknown = write_temp(r#"{"what": 1}"#);
    for f in [&garbage, &unknown] {
        assert_eq!(
            omkit(&["check", "--input", f.path().to_str().unwrap()])
                .status
                .code(),
            Some(2)
        );
    }
    assert_eq!(
        omkit(&["check", "--input", "/nonexistent/file.json"])
            .status
            .code(),
        Some(2)
    );
    // Periodic input without a window.
    assert_eq!(
        omkit(&["realize", "--input", &data("grid.json")])
            .status
            .code(),
        Some(2)
    );
    // Non-lattice translation.
    let o = omkit(&[
        "tutte",
        "--input",
        &data("grid.json"),
        "--gamma",
        "1/2,0;0,1",
    ]);
    assert_eq!(o.status.code(), Some(2));
}

#[test]
fn non_aom_exits_one() {
    // Composition fails: +0 ∘ 0+ = ++ is missing.
    let f = write_temp(r#"{"ground": ["a", "b"], "covectors": ["+0", "0+"]}"#);
    let o = omkit(&["check", "--input", f.path().to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(1));
    assert!(stdout(&o).contains("AOM: no"));
}

#[test]
fn toric_count_triangle_matches() {
    let o = omkit(&[
        "toric-count",
        "--input",
        &data("triangle_torus.json"),
        "--verify",
    ]);
    assert_eq!(o.status.code(), Some(0));
    assert_eq!(
        stdout(&o).lines().next(),
        Some("chambers=2, T(1,0)=2, MATCH")
    );
}

#[test]
fn toric_count_with_sublattice() {
    let o = omkit(&[
        "toric-count",
        "--input",
        &data("grid.json"),
        "--gamma",
        "2,0;0,1",
        "--verify",
    ]);
    assert_eq!(o.status.code(), Some(0));
    assert_eq!(
        stdout(&o).lines().next(),
        Some("chambers=2, T(1,0)=2, MATCH")
    );
}

#[test]
fn tutte_from_characters_agrees_with_matrix() {
    let o = omkit(&["tutte", "--input", &data("characters.json")]);
    assert_eq!(o.status.code(), Some(0));
    assert!(stdout(&o).contains("MATCH"));
}

#[test]
fn table_round_trip() {
    let o = omkit(&["tutte", "--input", &data("tilted.json"), "--format", "json"]);
    let v: Value = serde_json::from_slice(&o.stdout).unwrap();
    assert_eq!(v["polynomial"], "x^2 + x + y + 1");
    let f = write_temp(&serde_json::to_string(&v["table"]).unwrap());
    let again = omkit(&[
        "tutte",
        "--input",
        f.path().to_str().unwrap(),
        "--format",
        "json",
    ]);
    let w: Value = serde_json::from_slice(&again.stdout).unwrap();
    assert_eq!(w["table"], v["table"]);
    assert_eq!(w["polynomial"], v["polynomial"]);
}

#[test]
fn realize_round_trip() {
    let o = omkit(&[
        "realize",
        "--input",
        &data("grid.json"),
        "--window",
        "-1,1;-1,1",
        "--format",
        "json",
    ]);
    assert_eq!(o.status.code(), Some(0));
    let f = write_temp(&stdout(&o));
    let again = omkit(&[
        "realize",
        "--input",
        f.path().to_str().unwrap(),
        "--format",
        "json",
    ]);
    assert_eq!(stdout(&again), stdout(&o));
    let v: Value = serde_json::from_slice(&o.stdout).unwrap();
    assert_eq!(v["covectors"].as_array().unwrap().len(), 49);
}

#[test]
fn minor_of_four_lines() {
    let o = omkit(&[
        "minor",
        "--input",
        &data("four_lines.covectors.json"),
        "--delete",
        "H4",
        "--contract",
        "H3",
        "--format",
        "json",
    ]);
    let v: Value = serde_json::from_slice(&o.stdout).unwrap();
    assert_eq!(v["ground"], serde_json::json!(["H1", "H2"]));
    assert_eq!(v["covectors"], serde_json::json!(["-+", "00", "+-"]));
    let bad = omkit(&[
        "minor",
        "--input",
        &data("four_lines.covectors.json"),
        "--delete",
        "H9",
    ]);
    assert_eq!(bad.status.code(), Some(2));
}

#[test]
fn frames_and_fiber() {
    let o = omkit(&[
        "frames",
        "--input",
        &data("triangle_torus.json"),
        "--window",
        "-1,2;-1,2",
        "--basis",
        "x,y",
        "--fiber",
        "1/2,1/2",
        "--format",
        "json",
    ]);
    assert_eq!(o.status.code(), Some(0));
    let v: Value = serde_json::from_slice(&o.stdout).unwrap();
    assert_eq!(v["isomorphism"], true);
    assert_eq!(v["fiber"]["members"].as_array().unwrap().len(), 3);
    assert_eq!(v["fiber"]["length"], 2);
}

#[test]
fn posets_graphs_and_semimatroids() {
    let p = omkit(&[
        "poset",
        "--input",
        &data("four_lines.json"),
        "--format",
        "json",
    ]);
    let v: Value = serde_json::from_slice(&p.stdout).unwrap();
    assert_eq!(v["reduced_euler_characteristic"], 0);
    assert_eq!(v["dual_thinness"], "subthin");
    let f = omkit(&["flats", "--input", &data("four_lines.json")]);
    assert!(stdout(&f).contains("chi(t) = t^2 - 4t + 4"));
    let g = omkit(&[
        "tope-graph",
        "--input",
        &data("four_lines.json"),
        "--format",
        "json",
    ]);
    assert_eq!(g.status.code(), Some(0));
    let v: Value = serde_json::from_slice(&g.stdout).unwrap();
    assert_eq!(v["partial_cube"], true);
    let s = omkit(&["semimatroid", "--input", &data("four_lines.json")]);
    assert_eq!(s.status.code(), Some(0));
    assert!(stdout(&s).contains("round trip: yes"));
    let dot = omkit(&[
        "poset",
        "--input",
        &data("four_lines.json"),
        "--kind",
        "flats",
        "--dot",
    ]);
    assert!(stdout(&dot).starts_with("digraph"));
}

#[test]
fn output_is_deterministic() {
    let args = [
        "toric-count",
        "--input",
        &data("tilted.json"),
        "--verify",
        "--format",
        "json",
    ];
    let a = omkit(&args);
    let b = omkit(&[&args[..], &["--jobs", "1"]].concat());
    assert_eq!(stdout(&a), stdout(&b));
    let v: Value = serde_json::from_slice(&a.stdout).unwrap();
    assert_eq!(v["chambers"], 3);
    assert_eq!(v["match"], true);
}
