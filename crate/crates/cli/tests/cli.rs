use std::path::Path;
use std::process::{Command, Output};

use tilehull::report::PipelineReport;

const SQUARE: &str = r#"{
    "inflation": "2",
    "prototiles": [{"label": "S", "oriented": true,
                    "vertices": [["0","0"],["1","0"],["1","1"],["0","1"]]}],
    "rules": {"S": [{"tile": "S"},
                    {"tile": "S", "translation": ["1","0"]},
                    {"tile": "S", "translation": ["0","1"]},
                    {"tile": "S", "translation": ["1","1"]}]}
}"#;

fn run(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_tilehull")).args(args).output().expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn stderr(o: &Output) -> String {
    String::from_utf8(o.stderr.clone()).unwrap()
}

fn write(dir: &Path, name: &str, text: &str) -> String {
    let p = dir.join(name);
    std::fs::write(&p, text).unwrap();
    p.to_str().unwrap().to_string()
}

#[test]
fn exit_codes() {
    assert_eq!(run(&["--system", "toy", "limit"]).status.code(), Some(0));
    assert_eq!(run(&["--system", "no-such-system", "collar"]).status.code(), Some(2));
    assert_eq!(run(&["--system", "toy", "--power", "0", "collar"]).status.code(), Some(2));
    assert_eq!(run(&["--system", "toy", "--frobnicate", "collar"]).status.code(), Some(2));
    // the square torus has no cone points, so the hull formula does not apply
    let o = run(&["--system", "toy", "hull"]);
    assert_eq!(o.status.code(), Some(1));
    assert!(stderr(&o).contains("supported regime"), "{}", stderr(&o));
}

#[test]
fn malformed_system_file_names_the_field() {
    let dir = tempfile::tempdir().unwrap();
    let bad = SQUARE.replace(r#""translation": ["1","1"]"#, r#""translation": ["1","y"]"#);
    let path = write(dir.path(), "bad.json", &bad);
    let o = run(&["--system", &path, "collar"]);
    assert_eq!(o.status.code(), Some(2));
    assert!(stderr(&o).contains("rules.S[3].translation[1]"), "{}", stderr(&o));

    let good = write(dir.path(), "good.json", SQUARE);
    let o = run(&["--system", &good, "cohomology", "--format", "csv"]);
    assert_eq!(o.status.code(), Some(0));
    assert_eq!(stdout(&o), "degree,free_rank,torsion\n0,1,\n1,2,\n2,1,\n");
}

#[test]
fn render_counts_tiles() {
    let o = run(&["--system", "triangle", "render", "--level", "3"]);
    assert_eq!(o.status.code(), Some(0));
    assert_eq!(stdout(&o).matches("<polygon").count(), 125);
    let o = run(&["--system", "toy", "render", "--tile", "Q"]);
    assert_eq!(o.status.code(), Some(2));
}

#[test]
fn report_round_trips_and_is_deterministic() {
    let a = run(&["--system", "toy", "report"]);
    let b = run(&["--system", "toy", "report"]);
    assert_eq!(a.status.code(), Some(0));
    let ra: PipelineReport = serde_json::from_str(&stdout(&a)).unwrap();
    let rb: PipelineReport = serde_json::from_str(&stdout(&b)).unwrap();
    assert_eq!(ra.without_timing(), rb.without_timing());
    let again: PipelineReport = serde_json::from_str(&serde_json::to_string(&ra).unwrap()).unwrap();
    assert_eq!(again, ra);
    let limits = ra.limits.unwrap();
    assert_eq!(limits.h1.display, "Z[1/2]^2");
    assert!(ra.hull.is_none());
    assert_eq!(ra.census.unwrap().total, 1);
}

#[test]
fn matrices_are_exported() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("m");
    let o = run(&["--system", "toy", "export-matrices", "--format", "csv", "--out", out.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(0), "{}", stderr(&o));
    for name in ["substitution", "delta0", "delta1", "a0", "a1", "a2"] {
        assert!(out.join(format!("{name}.csv")).exists(), "{name}");
    }
    assert_eq!(std::fs::read_to_string(out.join("a2.csv")).unwrap().trim(), "4");
    assert_eq!(run(&["--system", "toy", "export-matrices"]).status.code(), Some(2));
}

#[test]
fn pinwheel_census_as_json() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("collar.json");
    let o = run(&["collar", "--out", path.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(0), "{}", stderr(&o));
    let r: PipelineReport = serde_json::from_str(&std::fs::read_to_string(&path).unwrap()).unwrap();
    let census = r.census.unwrap();
    assert_eq!(census.tiles.len(), 83);
    assert_eq!(census.by_base["K"], 31);
    assert!(census.tiles.iter().all(|t| t.children.len() == 25));
}
