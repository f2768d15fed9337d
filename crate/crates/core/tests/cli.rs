use std::process::{Command, Output};

use serde_json::Value;

const BIN: &str = env!("CARGO_BIN_EXE_scaffold-order");

fn run(args: &[&str]) -> Output {
    Command::new(BIN).args(args).output().unwrap()
}

fn json(args: &[&str]) -> (i32, Value) {
    let mut full = args.to_vec();
    full.extend(["--format", "json"]);
    let out = run(&full);
    let doc = serde_json::from_slice(&out.stdout).unwrap_or(Value::Null);
    (out.status.code().unwrap(), doc)
}

fn schema() -> Value {
    let text = std::fs::read_to_string(concat!(
        env!("CARGO_MANIFEST_DIR"),
        "/../../docs/report.schema.json"
    ))
    .unwrap();
    serde_json::from_str(&text).unwrap()
}

/// Checks the required keys the documented schema declares for the document
/// and for the rows of its command.
fn assert_conforms(doc: &Value) {
    let schema = schema();
    let required = |v: &Value| -> Vec<String> {
        v["required"]
            .as_array()
            .unwrap()
            .iter()
            .map(|k| k.as_str().unwrap().to_string())
            .collect()
    };
    let obj = doc.as_object().unwrap();
    let top = required(&schema);
    assert_eq!(obj.len(), top.len());
    for key in &top {
        assert!(obj.contains_key(key), "missing {key}");
    }
    assert_eq!(
        doc["schema_version"],
        schema["properties"]["schema_version"]["const"]
    );
    let command = doc["command"].as_str().unwrap();
    let def = format!("{}_row", command.replace('-', "_"));
    let row_keys = required(&schema["$defs"][def.as_str()]);
    for row in doc["rows"].as_array().unwrap() {
        let row = row.as_object().unwrap();
        assert_eq!(row.len(), row_keys.len(), "{command} row {row:?}");
        for key in &row_keys {
            assert!(row.contains_key(key), "{command} row lacks {key}");
        }
    }
}

#[test]
fn check_command() {
    let (code, doc) = json(&["check", "--p", "2", "--n", "1", "--b", "3"]);
    assert_eq!(code, 0);
    assert_eq!(doc["summary"]["free"], true);
    assert_eq!(doc["rows"][0]["divisibility"], "divides_q_minus_1");
    assert_conforms(&doc);

    let (code, doc) = json(&["check", "--p", "3", "--n", "1", "--b", "5"]);
    assert_eq!(code, 1);
    assert_eq!(doc["rows"][0]["witness_miyata"]["h"], 2);
    assert_eq!(doc["rows"][0]["witness_sq"]["u"], 1);
    assert_eq!(doc["rows"][0]["failing_j"], 1);
    assert_conforms(&doc);

    // b is reduced mod q first
    let (code, doc) = json(&[
        "check", "--p", "3", "--n", "1", "--b", "95", "--method", "miyata",
    ]);
    assert_eq!(code, 1);
    assert_eq!(doc["rows"][0]["c"], 5);
    assert_eq!(doc["rows"][0]["verdict_w"], Value::Null);

    let out = run(&["check", "--p", "2", "--n", "1", "--b", "4"]);
    assert_eq!(out.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&out.stderr).contains("b must be coprime to p"));
    assert_eq!(
        run(&["check", "--p", "2", "--n", "1", "--b", "-3"])
            .status
            .code(),
        Some(2)
    );
    assert_eq!(
        run(&["check", "--p", "6", "--n", "1", "--b", "5"])
            .status
            .code(),
        Some(2)
    );
    assert_eq!(
        run(&["check", "--p", "2", "--n", "1", "--b", "3", "--method", "x"])
            .status
            .code(),
        Some(2)
    );
}

#[test]
fn sq_command() {
    let members = |p: &str, n: &str| {
        let (code, doc) = json(&["sq", "--p", p, "--n", n]);
        assert_eq!(code, 0);
        assert_conforms(&doc);
        doc["summary"]["members"].clone()
    };
    assert_eq!(members("2", "1"), serde_json::json!([1, 3]));
    assert_eq!(members("3", "1"), serde_json::json!([1, 2, 4, 8]));
    assert_eq!(members("2", "0"), serde_json::json!([1]));

    let out = run(&["sq", "--p", "2", "--n", "20"]);
    assert_eq!(out.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&out.stderr).contains("--allow-large"));
}

#[test]
fn breaks_command() {
    let (code, doc) = json(&[
        "breaks", "--p", "2", "--n", "1", "--b", "3", "--omega", "0,-1",
    ]);
    assert_eq!(code, 0);
    assert_eq!(doc["summary"]["breaks"], serde_json::json!([3, 7]));
    assert_eq!(
        doc["summary"]["thresholds"],
        serde_json::json!(["-3/2", "-7/2"])
    );
    assert_conforms(&doc);

    let (_, doc) = json(&[
        "breaks", "--p", "2", "--n", "1", "--b", "3", "--omega", "0,0",
    ]);
    assert_eq!(doc["summary"]["distinct_breaks"], serde_json::json!([3]));

    let out = run(&[
        "breaks", "--p", "2", "--n", "1", "--b", "3", "--omega", "0,1",
    ]);
    assert_eq!(out.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&out.stderr).contains("must be <= 0"));
    assert_eq!(
        run(&["breaks", "--p", "3", "--n", "2", "--b", "2", "--omega", "0,-2,-1"])
            .status
            .code(),
        Some(2)
    );
    assert_eq!(
        run(&["breaks", "--p", "2", "--n", "1", "--b", "3", "--omega", "0"])
            .status
            .code(),
        Some(2)
    );
}

#[test]
fn basis_command() {
    let (code, doc) = json(&["basis", "--p", "2", "--n", "1", "--b", "3"]);
    assert_eq!(code, 0);
    assert_eq!(doc["summary"]["w"], serde_json::json!([0, 1, 2, 3]));
    assert_eq!(doc["summary"]["generator_valuation"], 3);
    assert_conforms(&doc);

    let (code, doc) = json(&["basis", "--p", "3", "--n", "1", "--b", "5"]);
    assert_eq!(code, 1);
    assert_eq!(doc["summary"]["failing_j"], 1);
    assert_eq!(doc["summary"]["generator_valuation"], Value::Null);

    let (code, doc) = json(&["basis", "--p", "2", "--n", "0", "--b", "1"]);
    assert_eq!(code, 0);
    assert_eq!(doc["summary"]["w"], serde_json::json!([0, 1]));

    // b_max = 7 from the Ω valuations
    let (code, doc) = json(&[
        "basis", "--p", "2", "--n", "1", "--b", "3", "--omega", "0,-1",
    ]);
    assert_eq!(code, 0);
    assert_eq!(doc["summary"]["b_max"], 7);
    assert_eq!(doc["summary"]["w"], serde_json::json!([0, 2, 4, 6]));
    assert_eq!(doc["rows"][2]["digits"], "10");
}

#[test]
fn search_converse_command() {
    let (code, doc) = json(&["search-converse", "--p", "2,3", "--q-max", "1024"]);
    assert_eq!(code, 0);
    assert_conforms(&doc);
    assert_eq!(doc["summary"]["smallest"]["q"], 243);
    assert_eq!(doc["summary"]["smallest"]["c"], 7);
    // every witness survives an independent check run
    for row in doc["rows"].as_array().unwrap() {
        let (p, n, c) = (
            row["p"].to_string(),
            row["n"].to_string(),
            row["c"].to_string(),
        );
        let (code, _) = json(&["check", "--p", &p, "--n", &n, "--b", &c]);
        assert_eq!(code, 0);
    }

    let out = run(&[
        "search-converse",
        "--p",
        "2",
        "--q-max",
        "64",
        "--format",
        "json",
    ]);
    assert_eq!(out.status.code(), Some(1));
    assert!(String::from_utf8_lossy(&out.stderr).contains("no converse witness"));
    let doc: Value = serde_json::from_slice(&out.stdout).unwrap();
    assert_eq!(doc["summary"]["smallest"], "none in range");

    assert_eq!(
        run(&["search-converse", "--p", "2", "--q-max", "4"])
            .status
            .code(),
        Some(2)
    );
    assert_eq!(
        run(&["search-converse", "--p", "2", "--q-max", "4000000"])
            .status
            .code(),
        Some(2)
    );
}

#[test]
fn output_formats_and_file() {
    let out = run(&["sq", "--p", "3", "--n", "1", "--format", "csv"]);
    let text = String::from_utf8(out.stdout).unwrap();
    assert!(text.starts_with("c,h_c,in_sq,divisibility,witness_sq\n"));
    assert!(text.contains("5,7,false,none,\"(1,1)\"\n"));

    let dir = std::env::temp_dir().join(format!("scaffold-order-test-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let path = dir.join("report.json");
    let out = run(&[
        "basis",
        "--p",
        "2",
        "--n",
        "1",
        "--b",
        "3",
        "--format",
        "json",
        "--out",
        path.to_str().unwrap(),
    ]);
    assert_eq!(out.status.code(), Some(0));
    assert!(out.stdout.is_empty());
    let written = std::fs::read(&path).unwrap();
    let (_, doc) = json(&["basis", "--p", "2", "--n", "1", "--b", "3"]);
    assert_eq!(serde_json::from_slice::<Value>(&written).unwrap(), doc);
    std::fs::remove_dir_all(&dir).unwrap();
}

#[test]
fn thread_count_does_not_change_output() {
    let args = [
        "search-converse",
        "--p",
        "2,3,5",
        "--q-max",
        "1024",
        "--format",
        "json",
    ];
    let serial = Command::new(BIN)
        .args(args)
        .env("SCAFFOLD_ORDER_THREADS", "1")
        .output()
        .unwrap();
    let parallel = Command::new(BIN)
        .args(args)
        .env("SCAFFOLD_ORDER_THREADS", "4")
        .output()
        .unwrap();
    assert_eq!(serial.status.code(), Some(0));
    assert_eq!(serial.stdout, parallel.stdout);

    let bad = Command::new(BIN)
        .args(args)
        .env("SCAFFOLD_ORDER_THREADS", "zero")
        .output()
        .unwrap();
    assert_eq!(bad.status.code(), Some(2));
}
