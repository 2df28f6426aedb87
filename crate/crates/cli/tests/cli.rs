use std::path::Path;
use std::process::Command;

use jsonschema::{Draft, JSONSchema};
use serde_json::Value;

const DATA: &str = concat!(env!("CARGO_MANIFEST_DIR"), "/../../data");

const COMMON: &str = include_str!("../schemas/common.schema.json");
const ENVELOPE: &str = include_str!("../schemas/run-report.schema.json");

fn schema_text(name: &str) -> &'static str {
    match name {
        "validate" => include_str!("../schemas/validate.schema.json"),
        "ksp" => include_str!("../schemas/ksp.schema.json"),
        "diverse" => include_str!("../schemas/diverse.schema.json"),
        "spdag" => include_str!("../schemas/spdag.schema.json"),
        "disjoint" => include_str!("../schemas/disjoint.schema.json"),
        "gen" => include_str!("../schemas/gen.schema.json"),
        "oracle-ksp" => include_str!("../schemas/oracle-ksp.schema.json"),
        "oracle-spdag" => include_str!("../schemas/oracle-spdag.schema.json"),
        "oracle-disjoint" => include_str!("../schemas/oracle-disjoint.schema.json"),
        "claims" => include_str!("../schemas/claims.schema.json"),
        other => panic!("no schema {other}"),
    }
}

fn compile(text: &str) -> JSONSchema {
    let schema: Value = serde_json::from_str(text).unwrap();
    let common: Value = serde_json::from_str(COMMON).unwrap();
    JSONSchema::options()
        .with_draft(Draft::Draft202012)
        .with_document("https://kdsp.local/schemas/common.schema.json".into(), common)
        .compile(&schema)
        .expect("schema compiles")
}

fn assert_valid(schema: &JSONSchema, value: &Value, what: &str) {
    if let Err(errors) = schema.validate(value) {
        let msgs: Vec<String> = errors.map(|e| format!("{} at {}", e, e.instance_path)).collect();
        panic!("{what} does not match its schema: {msgs:?}\n{value:#}");
    }
}

struct Run {
    code: i32,
    report: Value,
}

fn kdsp(dir: &Path, args: &[&str]) -> Run {
    let out = Command::new(env!("CARGO_BIN_EXE_kdsp")).current_dir(dir).args(args).output().unwrap();
    let report: Value = serde_json::from_slice(&out.stdout)
        .unwrap_or_else(|e| panic!("{args:?}: stdout is not JSON ({e}): {}", String::from_utf8_lossy(&out.stdout)));
    Run { code: out.status.code().unwrap(), report }
}

/// Runs a command that must succeed and checks both schema layers.
fn ok(dir: &Path, schema: &str, args: &[&str]) -> Value {
    let run = kdsp(dir, args);
    assert_eq!(run.code, 0, "{args:?}: {:#}", run.report);
    assert_valid(&compile(ENVELOPE), &run.report, "envelope");
    assert_valid(&compile(schema_text(schema)), &run.report["results"], schema);
    run.report["results"].clone()
}

fn data() -> &'static Path {
    Path::new(DATA)
}

#[test]
fn validate_reports_no_violations() {
    let r = ok(data(), "validate", &["validate", "tri.graph"]);
    assert_eq!(r["violations"], serde_json::json!([]));
    assert_eq!(r["nodes"], 3);
}

#[test]
fn validate_lists_every_violation() {
    let dir = tempfile::tempdir().unwrap();
    std::fs::write(dir.path().join("bad.graph"), "p dsp undirected 3 3 1\na 1 2 1\na 2 1 4\na 3 3 0\n").unwrap();
    let run = kdsp(dir.path(), &["validate", "bad.graph"]);
    assert_eq!(run.code, 2);
    assert_valid(&compile(ENVELOPE), &run.report, "envelope");
    assert_valid(&compile(schema_text("validate")), &run.report["results"], "validate");
    let kinds: Vec<&str> = run.report["results"]["violations"]
        .as_array()
        .unwrap()
        .iter()
        .map(|v| v["kind"].as_str().unwrap())
        .collect();
    assert_eq!(kinds, vec!["parallel-edge", "self-loop", "non-positive-weight"]);
}

#[test]
fn ksp_and_oracle_agree() {
    let stream = ok(data(), "ksp", &["ksp", "tri.graph", "-s", "1", "-t", "3", "-k", "5"]);
    let oracle = ok(data(), "oracle-ksp", &["oracle", "ksp", "tri.graph", "-s", "1", "-t", "3"]);
    assert_eq!(stream["paths"], oracle["paths"]);
    assert_eq!(stream["count"], 2);
    assert_eq!(stream["paths"][0]["nodes"], serde_json::json!([1, 2, 3]));
}

#[test]
fn diverse_on_tri() {
    let r = ok(data(), "diverse", &["diverse", "tri.graph", "-s", "1", "-t", "3", "--prefix", "2"]);
    assert_eq!(r["claim1"]["status"], "holds");
    assert_eq!(r["claim1"]["edges"], 3);
    assert_eq!(r["claim1"]["nodes"], 1);
    assert_eq!(r["claim2"]["status"], "vacuous");
    let one = ok(data(), "diverse", &["diverse", "tri.graph", "--measure", "edge-set-difference"]);
    assert_eq!(one["best_pairs"].as_array().unwrap().len(), 1);
}

#[test]
fn spdag_and_oracle_agree() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("d.graph");
    let r = ok(data(), "spdag", &["spdag", "diamond.graph", "-o", out.to_str().unwrap()]);
    assert_eq!(r["arcs"].as_array().unwrap().len(), 4);
    assert_eq!(r["path_count"], "2");
    assert!(std::fs::read_to_string(out).unwrap().contains("c d(s,2)=1 d(2,t)=1"));
    let o = ok(data(), "oracle-spdag", &["oracle", "spdag", "diamond.graph"]);
    assert_eq!(o["count"], 2);
    assert_eq!(o["total"], r["total"]);
}

#[test]
fn disjoint_fan_examples() {
    let fan = ["fan.graph", "-s", "1", "-t", "6", "--sensitive", "fan.sensitive"];
    let args = |extra: &[&'static str]| -> Vec<&str> {
        let mut v = vec!["disjoint"];
        v.extend_from_slice(&fan);
        v.extend_from_slice(extra);
        v
    };
    let n3 = ok(data(), "disjoint", &args(&["--variant", "n3", "-r", "2"]));
    assert_eq!(n3["objective"]["value"], 1);
    let n2 = ok(data(), "disjoint", &args(&["--variant", "n2"]));
    assert_eq!(n2["objective"]["value"], 1);
    let n4 = ok(data(), "disjoint", &args(&["--variant", "n4", "-r", "3"]));
    assert_eq!(n4["objective"]["levels"], serde_json::json!([{ "level": 3, "members": 1 }, { "level": 2, "members": 1 }]));
    let lex = ok(data(), "disjoint", &args(&["--variant", "n4", "-r", "3", "--cost-mode", "lex"]));
    assert_eq!(lex["objective"]["levels"], n4["objective"]["levels"]);
    let oracle = ok(data(), "oracle-disjoint", &{
        let mut v = vec!["oracle"];
        v.extend(args(&["--variant", "n4", "-r", "3"]));
        v
    });
    assert_eq!(oracle["objective"]["levels"], n4["objective"]["levels"]);
    let n1 = ok(data(), "disjoint", &["disjoint", "diamond.graph", "--variant", "n1"]);
    assert_eq!(n1["objective"]["value"], 2);
}

#[test]
fn gen_writes_headers_and_terminals() {
    let dir = tempfile::tempdir().unwrap();
    let r = ok(dir.path(), "gen", &["gen", "example1b", "--n-prime", "3", "-o", "out.graph"]);
    assert_eq!(r["nodes"], 10);
    let text = std::fs::read_to_string(dir.path().join("out.graph")).unwrap();
    assert!(text.starts_with("c provenance example1b diamonds=3\nc terminals s=1 t=10\np dsp undirected 10 12 1\n"));
    // terminals come from the header when -s/-t are omitted
    let k = ok(dir.path(), "ksp", &["ksp", "out.graph", "-k", "1"]);
    assert_eq!(k["paths"][0]["length"], serde_json::json!(["6"]));

    ok(dir.path(), "gen", &["gen", "--family", "example1a", "--q-bar", "2", "--tower-width", "3", "-o", "a.graph"]);
    ok(dir.path(), "gen", &["gen", "example2-boundary", "--q-bar", "3", "-o", "k.graph"]);
    ok(dir.path(), "gen", &["gen", "random", "--nodes", "8", "--seed", "5", "--directed", "-o", "r.graph"]);
    std::fs::write(dir.path().join("base.graph"), "c terminals s=1 t=5\np dsp undirected 5 5 1\na 1 2 1\na 2 3 1\na 3 4 1\na 4 5 1\na 1 5 5\n").unwrap();
    let e2 = ok(
        dir.path(),
        "gen",
        &["gen", "example2", "--base", "base.graph", "--split-node", "3", "--q-bar", "4", "-o", "e2.graph"],
    );
    assert_eq!(e2["nodes"], 10);
    let oracle = ok(dir.path(), "oracle-ksp", &["oracle", "ksp", "e2.graph", "-k", "1"]);
    assert_eq!(oracle["paths"][0]["length"], serde_json::json!(["25/6"]));
}

#[test]
fn claims_over_directory() {
    let dir = tempfile::tempdir().unwrap();
    let corpus = dir.path().join("corpus");
    std::fs::create_dir(&corpus).unwrap();
    for name in ["tri.graph", "diamond.graph", "fan.graph"] {
        std::fs::copy(data().join(name), corpus.join(name)).unwrap();
    }
    std::fs::write(corpus.join("broken.graph"), "p dsp directed 2 1 1\na 1 1 1\n").unwrap();
    std::fs::write(corpus.join("ignored.txt"), "not a graph").unwrap();
    let r = ok(dir.path(), "claims", &["claims", "corpus"]);
    assert_eq!(r["summary"]["instances"], 4);
    assert_eq!(r["summary"]["errors"], 1);
    assert_eq!(r["summary"]["claim1"]["violated"], 0);
    let files: Vec<&str> = r["instances"].as_array().unwrap().iter().map(|i| i["file"].as_str().unwrap()).collect();
    assert_eq!(files, vec!["broken.graph", "diamond.graph", "fan.graph", "tri.graph"]);
}

#[test]
fn exit_codes() {
    let run = kdsp(data(), &["ksp", "tri.graph", "--bogus"]);
    assert_eq!(run.code, 1);
    assert_eq!(run.report["error"]["kind"], "usage");

    let dir = tempfile::tempdir().unwrap();
    std::fs::write(dir.path().join("x.graph"), "p dsp directed 2 1 1\na 1 3 1\n").unwrap();
    let run = kdsp(dir.path(), &["ksp", "x.graph"]);
    assert_eq!(run.code, 2);
    assert_eq!(run.report["error"]["kind"], "parse");

    let run = kdsp(data(), &["disjoint", "fan.graph", "--variant", "n3", "--sensitive", "fan.sensitive", "-r", "3"]);
    assert_eq!(run.code, 3);
    assert_eq!(run.report["results"]["achievable"], 2);
    assert_valid(&compile(ENVELOPE), &run.report, "envelope");

    let run = kdsp(data(), &["ksp", "tri.graph", "-s", "3", "-t", "1"]);
    assert_eq!(run.code, 0);
    assert_eq!(run.report["results"]["count"], 0);

    let run = kdsp(data(), &["spdag", "tri.graph", "-s", "3", "-t", "1"]);
    assert_eq!(run.code, 3);

    let run = kdsp(data(), &["oracle", "--max-nodes", "2", "ksp", "tri.graph"]);
    assert_eq!(run.code, 4);
    assert_eq!(run.report["error"]["kind"], "budget");

    let run = kdsp(data(), &["disjoint", "fan.graph", "--variant", "n4", "--sensitive", "fan.sensitive"]);
    assert_eq!(run.code, 1);
}

#[test]
fn timing_is_opt_in() {
    let plain = kdsp(data(), &["ksp", "tri.graph"]);
    assert!(plain.report.get("timing").is_none());
    let timed = kdsp(data(), &["ksp", "tri.graph", "--timing"]);
    assert!(timed.report["timing"]["elapsed_ms"].as_f64().unwrap() >= 0.0);
    assert_valid(&compile(ENVELOPE), &timed.report, "envelope");
    assert_eq!(plain.report["results"], timed.report["results"]);
}

#[test]
fn schemas_reject_malformed_reports() {
    let mut r = kdsp(data(), &["ksp", "tri.graph"]).report;
    let ksp = compile(schema_text("ksp"));
    assert!(ksp.is_valid(&r["results"]));
    r["results"]["paths"][0]["length"] = serde_json::json!([2]);
    assert!(!ksp.is_valid(&r["results"]));
    r["status"] = serde_json::json!("maybe");
    assert!(!compile(ENVELOPE).is_valid(&r));
}
