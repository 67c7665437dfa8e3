use std::path::PathBuf;
use std::process::{Command, Output};

use jsonschema::JSONSchema;
use serde_json::Value;

fn run(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_quiver-stability")).args(args).output().expect("binary runs")
}

fn json(out: &Output) -> Value {
    serde_json::from_slice(&out.stdout).unwrap_or_else(|e| panic!("stdout is not JSON ({e}): {}", String::from_utf8_lossy(&out.stdout)))
}

fn schema(name: &str) -> JSONSchema {
    let path: PathBuf = [env!("CARGO_MANIFEST_DIR"), "schemas", &format!("{name}.schema.json")].iter().collect();
    let doc: Value = serde_json::from_str(&std::fs::read_to_string(&path).unwrap()).unwrap();
    JSONSchema::compile(&doc).unwrap()
}

fn assert_valid(name: &str, doc: &Value) {
    let s = schema(name);
    let msgs: Vec<String> = match s.validate(doc) {
        Ok(()) => return,
        Err(errors) => errors.map(|e| format!("{} at {}", e, e.instance_path)).collect(),
    };
    panic!("{name} document violates its schema: {msgs:?}\n{doc:#}");
}

fn ok(args: &[&str]) -> Value {
    let out = run(args);
    assert_eq!(out.status.code(), Some(0), "{args:?}: {}", String::from_utf8_lossy(&out.stdout));
    json(&out)
}

fn strings(v: &Value) -> Vec<&str> {
    v.as_array().unwrap().iter().map(|x| x.as_str().unwrap()).collect()
}

#[test]
fn mgs_on_the_a2_three_step_path() {
    let doc = ok(&["mgs", "--algebra", "builtin:A2", "--path", "a2-mgs3.path"]);
    assert_eq!(doc["mgs"], true);
    assert_eq!(doc["steps"], 3);
    assert_eq!(strings(&doc["phases"]), ["1", "3/4", "1/2", "1/4"]);
    let sizes: Vec<usize> = doc["classes"].as_array().unwrap().iter().map(|c| c.as_array().unwrap().len()).collect();
    assert_eq!(sizes, [0, 1, 2, 3]);
    assert_eq!(doc["certificates"].as_array().unwrap().len(), 3);
}

#[test]
fn mgs_on_the_a2_two_step_path() {
    let doc = ok(&["mgs", "--path", "a2-mgs2"]);
    assert_eq!(doc["mgs"], true);
    assert_eq!(doc["steps"], 2);
}

#[test]
fn king_on_a2() {
    let doc = ok(&["king", "--algebra", "builtin:A2", "--theta", "1,-1", "--bound", "1,1"]);
    let status = |name: &str| {
        doc["modules"].as_array().unwrap().iter().find(|m| m["name"] == name).unwrap()["status"].clone()
    };
    assert_eq!(status("P1"), "stable");
    assert_eq!(status("S1"), "not");
    assert_eq!(status("S2"), "not");
}

#[test]
fn kronecker_has_five_indecomposables_at_bound_one() {
    let doc = ok(&["indec", "--algebra", "builtin:kronecker", "--bound", "1,1"]);
    assert_eq!(doc["count"], 5);
}

#[test]
fn a2_walls_chambers_and_path() {
    let walls = ok(&["walls"]);
    assert_eq!(walls["walls"].as_array().unwrap().len(), 3);
    let chambers = ok(&["chambers"]);
    assert_eq!(chambers["count"], 5);
    assert_eq!(chambers["exact"], true);
    let path = ok(&["path", "--path", "a2-mgs3"]);
    assert_eq!(path["valid"], true);
    assert_eq!(path["phases"]["P1"], "1/2");
    let times: Vec<&str> = path["crossings"].as_array().unwrap().iter().map(|c| c["t"].as_str().unwrap()).collect();
    assert_eq!(times, ["1/4", "1/2", "3/4"]);
}

#[test]
fn a3_chambers_are_sampled_and_labelled_inexact() {
    let doc = ok(&["chambers", "--algebra", "builtin:A3"]);
    assert_eq!(doc["exact"], false);
    assert_eq!(doc["count"], 14);
}

#[test]
fn render_draws_walls_chambers_and_crossings() {
    let out = run(&["render", "--path", "a2-mgs3"]);
    assert_eq!(out.status.code(), Some(0));
    let svg = String::from_utf8(out.stdout).unwrap();
    assert!(svg.starts_with("<svg") && svg.contains(r#"viewBox="-2 -2 4 4""#));
    assert_eq!(svg.matches(r#"class="wall""#).count(), 3);
    assert_eq!(svg.matches(r#"class="chamber""#).count(), 5);
    assert_eq!(svg.matches(r#"class="crossing""#).count(), 3);
    for t in ["t = 1/4", "t = 1/2", "t = 3/4"] {
        assert!(svg.contains(t), "missing {t}");
    }
}

#[test]
fn exit_codes_and_error_documents() {
    let cases: [(&[&str], i32, &str); 7] = [
        (&["hn", "--stability", "nonsense"], 2, "Usage"),
        (&["indec", "--bound", "0,1"], 2, "Usage"),
        (&["frobnicate"], 2, "Usage"),
        (&["king", "--theta", "1/0,1"], 2, "Usage"),
        (&["render", "--algebra", "builtin:A3"], 1, "RankUnsupported"),
        (&["mgs", "--algebra", "builtin:kronecker", "--bound", "2,2", "--stability", "starred:0"], 1, "InvalidStabilityFunction"),
        (&["indec", "--algebra", "builtin:B7"], 1, "UnknownBuiltin"),
    ];
    for (args, code, kind) in cases {
        let out = run(args);
        assert_eq!(out.status.code(), Some(code), "{args:?}");
        let doc = json(&out);
        assert_eq!(doc["error"]["kind"], kind, "{args:?}");
        assert_valid("error", &doc);
    }
}

#[test]
fn malformed_path_file_is_a_parse_error() {
    let dir = std::env::temp_dir().join(format!("qs-badpath-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let file = dir.join("bad.path");
    std::fs::write(&file, "0 1 1\n1 -1 x\n").unwrap();
    let out = run(&["path", "--path", file.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(2));
    let doc = json(&out);
    assert_eq!(doc["error"]["kind"], "Parse");
    assert!(doc["error"]["message"].as_str().unwrap().contains("line 2"));
}

#[test]
fn out_flag_writes_the_document() {
    let dir = std::env::temp_dir().join(format!("qs-out-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let file = dir.join("indec.json");
    let out = run(&["indec", "--out", file.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(0));
    assert!(out.stdout.is_empty());
    let doc: Value = serde_json::from_str(&std::fs::read_to_string(&file).unwrap()).unwrap();
    assert_eq!(doc["count"], 3);
}

#[test]
fn output_is_byte_identical_across_runs() {
    let commands: [&[&str]; 3] = [
        &["chambers", "--algebra", "builtin:A3", "--seed", "7"],
        &["mgs", "--algebra", "builtin:kronecker", "--bound", "2,2", "--stability", "kronecker-slope"],
        &["render", "--path", "a2-mgs2"],
    ];
    for args in commands {
        assert_eq!(run(args).stdout, run(args).stdout, "{args:?}");
    }
}

#[test]
fn documents_validate_against_shipped_schemas() {
    let cases: [(&str, &[&str]); 14] = [
        ("indec", &["indec", "--algebra", "builtin:kronecker", "--bound", "2,2"]),
        ("king", &["king", "--theta", "1,-1"]),
        ("king", &["king", "--algebra", "builtin:A3", "--theta", "1,0,-1", "--module", "S1+S3"]),
        ("hn", &["hn", "--algebra", "builtin:kronecker", "--bound", "2,2", "--stability", "kronecker-slope"]),
        ("hn", &["hn", "--stability", "charge:1,0:1,1", "--module", "S1+S2"]),
        ("torsion", &["torsion", "--algebra", "builtin:kronecker", "--bound", "2,2", "--stability", "kronecker-slope", "--phase", "1"]),
        ("chain", &["chain", "--algebra", "builtin:A3", "--path", "a3-staircase"]),
        ("chain", &["chain", "--algebra", "builtin:kronecker", "--bound", "2,2", "--stability", "starred-unchecked:0:below"]),
        ("mgs", &["mgs", "--algebra", "builtin:A3", "--path", "a3-staircase"]),
        ("mgs", &["mgs", "--algebra", "builtin:A2", "--stability", "slope:1,0:1,1"]),
        ("walls", &["walls", "--algebra", "builtin:A3"]),
        ("chambers", &["chambers"]),
        ("chambers", &["chambers", "--algebra", "builtin:A3"]),
        ("path", &["path", "--algebra", "builtin:A3", "--path", "diagonal3"]),
    ];
    for (name, args) in cases {
        let doc = ok(args);
        assert_eq!(doc["command"], name);
        assert_valid(name, &doc);
    }
}

#[test]
fn table_stability_from_a_file() {
    let dir = std::env::temp_dir().join(format!("qs-table-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let file = dir.join("a2.table");
    std::fs::write(&file, "# slope n1/(n1+n2)\nS2 0\nS1 1\nP1 1/2\nS2+S1 1/2\n").unwrap();
    let doc = ok(&["mgs", "--stability", &format!("table:{}", file.display())]);
    assert_eq!(doc["mgs"], true);
    assert_eq!(doc["steps"], 3);

    std::fs::write(&file, "S2 0\nS1 oops\n").unwrap();
    let out = run(&["chain", "--stability", &format!("table:{}", file.display())]);
    assert_eq!(out.status.code(), Some(2));
    assert!(json(&out)["error"]["message"].as_str().unwrap().contains("line 2, column 4"));
}
