use std::path::Path;
use std::process::{Command, Output};

use serde_json::Value;
use tempfile::TempDir;

fn annmax(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_annmax")).args(args).output().expect("binary runs")
}

fn write(dir: &TempDir, name: &str, text: &str) -> String {
    let path = dir.path().join(name);
    std::fs::write(&path, text).unwrap();
    path_str(&path)
}

fn path_str(p: &Path) -> String {
    p.to_str().unwrap().to_string()
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn stderr(o: &Output) -> String {
    String::from_utf8(o.stderr.clone()).unwrap()
}

/// Result records with the timing field removed.
fn untimed(text: &str) -> Vec<Value> {
    text.lines()
        .map(|l| {
            let mut v: Value = serde_json::from_str(l).unwrap();
            v["stats"].as_object_mut().unwrap().remove("time_ns");
            v
        })
        .collect()
}

#[test]
fn query_answers_the_three_point_example() {
    let dir = TempDir::new().unwrap();
    let p = write(&dir, "p.csv", "x,y\n1,1\n5,0\n0,6\n");
    let q = write(&dir, "q.jsonl", "{\"q\": [[0,0],[2,2]]}\n");
    let o = annmax(&["query", "--points", &p, "--queries", &q, "--metric", "l1"]);
    assert!(o.status.success(), "{}", stderr(&o));
    let recs = untimed(&stdout(&o));
    assert_eq!(recs.len(), 1);
    assert_eq!(recs[0]["query_index"], 0);
    assert_eq!(recs[0]["answers"], serde_json::json!([{"id": 0, "x": 1.0, "y": 1.0, "g": 2.0}]));
    assert!(recs[0]["stats"]["drag_queries"].as_u64().unwrap() > 0);
}

#[test]
fn l2_and_top_k_records() {
    let dir = TempDir::new().unwrap();
    let p = write(&dir, "p.csv", "1,0\n3,0\n");
    let q = write(&dir, "q.jsonl", "{\"q\": [[0,0],[4,0]], \"metric\": \"l2\"}\n{\"q\": [[0,0],[4,0]], \"k\": 5}\n");
    let o = annmax(&["query", "--points", &p, "--queries", &q]);
    assert!(o.status.success(), "{}", stderr(&o));
    let recs = untimed(&stdout(&o));
    assert_eq!(recs[0]["answers"][0]["id"], 0);
    assert_eq!(recs[0]["answers"][0]["g"], 3.0);
    assert!(recs[0]["stats"]["nodes_visited"].as_u64().unwrap() > 0);
    // without --topk every record gets its single best point
    assert_eq!(recs[1]["answers"].as_array().unwrap().len(), 1);

    let topk = write(&dir, "k.jsonl", "{\"q\": [[0,0],[4,0]], \"k\": 5}\n");
    let o = annmax(&["query", "--points", &p, "--queries", &topk, "--topk"]);
    assert_eq!(untimed(&stdout(&o))[0]["answers"].as_array().unwrap().len(), 2);
}

#[test]
fn empty_query_file_gives_empty_output() {
    let dir = TempDir::new().unwrap();
    let p = write(&dir, "p.csv", "1,1\n");
    let q = write(&dir, "q.jsonl", "");
    let o = annmax(&["query", "--points", &p, "--queries", &q]);
    assert!(o.status.success());
    assert!(o.stdout.is_empty());
}

#[test]
fn malformed_point_line_is_cited() {
    let dir = TempDir::new().unwrap();
    let p = write(&dir, "p.csv", "x,y\n0,0\n1,1\n2,2\n3,3\n4,4\n5;5\n");
    let q = write(&dir, "q.jsonl", "{\"q\": [[0,0]]}\n");
    let o = annmax(&["query", "--points", &p, "--queries", &q]);
    assert_eq!(o.status.code(), Some(2));
    assert!(stderr(&o).contains("p.csv:7:"), "{}", stderr(&o));
}

#[test]
fn malformed_query_line_is_cited() {
    let dir = TempDir::new().unwrap();
    let p = write(&dir, "p.csv", "0,0\n");
    let q = write(&dir, "q.jsonl", "{\"q\": [[0,0]]}\n{\"q\": [[0,0]\n");
    let o = annmax(&["query", "--points", &p, "--queries", &q]);
    assert_eq!(o.status.code(), Some(2));
    assert!(stderr(&o).contains("q.jsonl:2:"), "{}", stderr(&o));
}

#[test]
fn l2_top_k_is_a_usage_error() {
    let dir = TempDir::new().unwrap();
    let p = write(&dir, "p.csv", "0,0\n");
    let q = write(&dir, "q.jsonl", "{\"q\": [[0,0]]}\n");
    let o = annmax(&["query", "--points", &p, "--queries", &q, "--metric", "l2", "--topk"]);
    assert_eq!(o.status.code(), Some(2));
    assert!(stderr(&o).contains("l1"));
    let o = annmax(&["query", "--points", &p, "--queries", &q, "--metric", "l3"]);
    assert_eq!(o.status.code(), Some(2));
}

#[test]
fn threads_do_not_change_results() {
    let dir = TempDir::new().unwrap();
    let pts: String = (0..300).map(|i| format!("{},{}\n", (i * 37) % 101, (i * 53) % 97)).collect();
    let p = write(&dir, "p.csv", &pts);
    let qs: String = (0..40)
        .map(|i| format!("{{\"q\": [[{},{}],[{},{}]], \"k\": 4}}\n", i, 2 * i, 90 - i, i % 7))
        .collect();
    let q = write(&dir, "q.jsonl", &qs);
    let one = annmax(&["query", "--points", &p, "--queries", &q, "--topk"]);
    let four = annmax(&["query", "--points", &p, "--queries", &q, "--topk", "--threads", "4"]);
    assert!(one.status.success() && four.status.success());
    assert_eq!(untimed(&stdout(&one)), untimed(&stdout(&four)));
}

#[test]
fn verify_random_instances() {
    let a = annmax(&["verify", "--seed", "42", "--random", "1000"]);
    assert!(a.status.success(), "{}", stdout(&a));
    assert!(stdout(&a).contains("1000/1000 ok"));
    let b = annmax(&["verify", "--seed", "42", "--random", "1000", "--threads", "3"]);
    assert_eq!(a.stdout, b.stdout);
}

#[test]
fn verify_l2_and_files() {
    let o = annmax(&["verify", "--metric", "l2", "--random", "100"]);
    assert!(stdout(&o).contains("100/100 ok"), "{}", stdout(&o));
    let dir = TempDir::new().unwrap();
    let p = write(&dir, "p.csv", "1,1\n5,0\n0,6\n2,2\n");
    let q = write(&dir, "q.jsonl", "{\"q\": [[0,0],[2,2]], \"k\": 3}\n{\"q\": [[1,5]], \"metric\": \"l2\"}\n");
    let o = annmax(&["verify", "--points", &p, "--queries", &q]);
    assert!(o.status.success());
    assert!(stdout(&o).contains("2/2 ok"));
}

#[test]
fn injected_fault_fails_with_a_reproducer() {
    let o = annmax(&["verify", "--seed", "5", "--random", "10", "--inject-fault"]);
    assert_eq!(o.status.code(), Some(1));
    let out = stdout(&o);
    assert!(out.contains("--seed 5, instance index 0"), "{out}");
    assert!(out.contains("0/10 ok"));
}

#[test]
fn bench_prints_a_table_or_ndjson() {
    let o = annmax(&["bench", "--n", "1", "--m", "1", "--queries", "3"]);
    assert!(o.status.success(), "{}", stderr(&o));
    let out = stdout(&o);
    assert!(out.lines().next().unwrap().starts_with("metric"));
    assert_eq!(out.lines().count(), 3);

    let o = annmax(&["bench", "--n", "100,400", "--m", "5", "--metric", "l2", "--queries", "10", "--json"]);
    let rows: Vec<Value> = stdout(&o).lines().map(|l| serde_json::from_str(l).unwrap()).collect();
    assert_eq!(rows.len(), 2);
    assert_eq!(rows[1]["n"], 400);
    assert!(rows[1]["ops_growth"].as_f64().is_some());
}
