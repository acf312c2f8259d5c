// Licensed under the Apache License, Version 2.0 (the "License"); you may
// not use this file except in compliance with the License. You may obtain
// a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS, WITHOUT
// WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied. See the
// License for the specific language governing permissions and limitations
// under the License.


use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use plb_algebra::{PrimeField, SparseMatrix, MERSENNE_61};
use serde_json::Value;
use tempfile::TempDir;

fn plb(dir: &Path, args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_plb"))
        .current_dir(dir)
        .args(args)
        .output()
        .expect("spawn plb")
}

fn ok_report(dir: &Path, args: &[&str]) -> Value {
    let out = plb(dir, args);
    assert_eq!(
        out.status.code(),
        Some(0),
        "plb {args:?} failed: {}",
        String::from_utf8_lossy(&out.stderr)
    );
    serde_json::from_slice(&out.stdout).expect("report is JSON")
}

/// Report with the timing-derived fields removed.
fn stable(mut v: Value) -> Value {
    let o = v.as_object_mut().unwrap();
    o.remove("wall_time_ms");
    o.remove("peak_memory_kb");
    if let Some(r) = o.get_mut("result").and_then(Value::as_object_mut) {
        r.remove("slopes");
    }
    if let Some(rows) = o
        .get_mut("result")
        .and_then(|r| r.get_mut("rows"))
        .and_then(Value::as_array_mut)
    {
        for row in rows {
            row.as_object_mut().unwrap().remove("wall_time_ms");
        }
    }
    v
}

fn schema() -> jsonschema::Validator {
    let path = PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("schema/run_report.schema.json");
    let text = std::fs::read_to_string(path).unwrap();
    let schema: Value = serde_json::from_str(&text).unwrap();
    jsonschema::validator_for(&schema).expect("schema compiles")
}

fn assert_valid(v: &jsonschema::Validator, report: &Value) {
    let errors: Vec<String> = v.iter_errors(report).map(|e| e.to_string()).collect();
    assert!(errors.is_empty(), "{errors:?}\n{report:#}");
}

struct Fixture {
    dir: TempDir,
}

impl Fixture {
    fn new() -> Fixture {
        let dir = tempfile::tempdir().unwrap();
        let p = dir.path();
        ok_report(p, &["gen", "--n", "400", "--alpha", "2.2", "--seed", "5", "-o", "u.txt"]);
        ok_report(
            p,
            &["gen", "--n", "400", "--alpha", "2.2", "--seed", "5", "--directed", "-o", "d.txt"],
        );
        // a small graph with a perfect matching
        let ladder: String = (0..10)
            .flat_map(|i| {
                let mut e = vec![format!("{} {}", 2 * i, 2 * i + 1)];
                if i + 1 < 10 {
                    e.push(format!("{} {}", 2 * i, 2 * i + 2));
                    e.push(format!("{} {}", 2 * i + 1, 2 * i + 3));
                }
                e
            })
            .collect::<Vec<_>>()
            .join("\n");
        std::fs::write(p.join("ladder.txt"), ladder).unwrap();
        Fixture { dir }
    }

    fn path(&self) -> &Path {
        self.dir.path()
    }
}

fn all_verbs() -> Vec<Vec<&'static str>> {
    vec![
        vec!["fit", "u.txt", "--with-c2", "--plot", "plot.csv"],
        vec!["check", "u.txt", "--alpha", "2.0", "--c1", "5"],
        vec!["c2", "u.txt"],
        vec!["gen", "--n", "300", "--alpha", "2.5", "--seed", "9", "-o", "g.txt"],
        vec!["triangles", "u.txt"],
        vec!["triangles", "u.txt", "--hybrid", "--alpha", "2.2", "--per-vertex", "tri.csv"],
        vec!["clique", "u.txt"],
        vec!["tc", "d.txt", "-o", "tc.txt"],
        vec!["det", "u.txt", "--seed", "3"],
        vec!["det", "d.txt", "--mode", "directed", "--seed", "3", "--k", "4"],
        vec!["solve", "u.txt", "--seed", "3", "-o", "x.txt"],
        vec!["inverse", "ladder.txt", "--seed", "3", "-o", "inv.mtx"],
        vec!["matching", "ladder.txt", "--find", "-o", "m.txt"],
        vec!["pagerank", "d.txt", "-o", "pr.csv"],
        vec!["bench", "--suite", "triangles", "--n", "256,512", "--alpha", "2.5", "--reps", "1"],
    ]
}

#[test]
fn gen_then_triangles_is_deterministic() {
    let dir = tempfile::tempdir().unwrap();
    let p = dir.path();
    let gen_a = ok_report(p, &["gen", "--n", "10000", "--alpha", "2.5", "--seed", "1", "-o", "a.txt"]);
    let gen_b = ok_report(p, &["gen", "--n", "10000", "--alpha", "2.5", "--seed", "1", "-o", "b.txt"]);
    assert_eq!(
        std::fs::read(p.join("a.txt")).unwrap(),
        std::fs::read(p.join("b.txt")).unwrap()
    );
    assert_eq!(gen_a["result"]["m"], gen_b["result"]["m"]);
    let sidecar: Value =
        serde_json::from_slice(&std::fs::read(p.join("a.txt.json")).unwrap()).unwrap();
    assert_eq!(sidecar["n_requested"], 10000);
    assert_eq!(sidecar["seed"], 1);

    let ta = ok_report(p, &["triangles", "a.txt"]);
    let tb = ok_report(p, &["triangles", "b.txt"]);
    assert!(ta["result"]["count"].is_u64());
    assert_eq!(ta["result"]["count"], tb["result"]["count"]);
}

#[test]
fn check_with_alpha_at_most_one_exits_2() {
    let f = Fixture::new();
    for alpha in ["1.0", "0.5"] {
        let out = plb(f.path(), &["check", "u.txt", "--alpha", alpha]);
        assert_eq!(out.status.code(), Some(2));
        let err = String::from_utf8_lossy(&out.stderr);
        assert!(err.contains("alpha > 1"), "{err}");
        assert!(out.stdout.is_empty());
    }
}

#[test]
fn usage_errors_exit_1() {
    let f = Fixture::new();
    let cases: Vec<Vec<&str>> = vec![
        vec![],
        vec!["frobnicate"],
        vec!["check"],
        vec!["triangles", "u.txt", "--bogus"],
        vec!["gen", "--n", "ten", "--alpha", "2", "-o", "x"],
        vec!["triangles", "missing.txt"],
        vec!["check", "u.txt"],
        vec!["fit", "hist.txt", "--histogram", "--with-c2"],
    ];
    for args in cases {
        let out = plb(f.path(), &args);
        assert_eq!(out.status.code(), Some(1), "{args:?}");
    }
    for args in [["--help"], ["--version"]] {
        assert_eq!(plb(f.path(), &args).status.code(), Some(0));
    }
}

#[test]
fn domain_and_parse_errors_exit_2() {
    let f = Fixture::new();
    std::fs::write(f.path().join("bad.txt"), "0 1\n1 x\n").unwrap();
    let cases: Vec<Vec<&str>> = vec![
        vec!["triangles", "bad.txt"],
        vec!["pagerank", "d.txt", "--c", "1.5", "-o", "pr.csv"],
        vec!["gen", "--n", "100", "--alpha", "0.9", "-o", "g.txt"],
        vec!["det", "u.txt", "--field-p", "12"],
        vec!["triangles", "u.txt", "--delta", "4", "--omega", "3.5"],
        vec!["triangles", "u.txt", "--hybrid", "--alpha", "2.5", "--neighborhoods"],
    ];
    for args in cases {
        let out = plb(f.path(), &args);
        assert_eq!(out.status.code(), Some(2), "{args:?}: {}", String::from_utf8_lossy(&out.stderr));
    }
}

#[test]
fn resource_cap_exits_3() {
    let dir = tempfile::tempdir().unwrap();
    let mut edges = String::new();
    for u in 0..12 {
        for v in u + 1..12 {
            edges.push_str(&format!("{u} {v}\n"));
        }
    }
    std::fs::write(dir.path().join("k12.txt"), edges).unwrap();
    let out = plb(dir.path(), &["clique", "k12.txt", "--cap", "4"]);
    assert_eq!(out.status.code(), Some(3));
    let r = ok_report(dir.path(), &["clique", "k12.txt"]);
    assert_eq!(r["result"]["size"], 12);
}

#[test]
fn every_verb_validates_against_schema() {
    let f = Fixture::new();
    let v = schema();
    let mut seen = std::collections::BTreeSet::new();
    for args in all_verbs() {
        let report = ok_report(f.path(), &args);
        assert_valid(&v, &report);
        seen.insert(report["command"].as_str().unwrap().to_string());
    }
    assert_eq!(seen.len(), 13);

    // the schema is not vacuous
    let mut broken = ok_report(f.path(), &["triangles", "u.txt"]);
    broken["result"]["count"] = Value::from(-1);
    assert!(!v.is_valid(&broken));
    broken["result"] = serde_json::json!({});
    assert!(!v.is_valid(&broken));
}

#[test]
fn every_verb_is_reproducible() {
    let f = Fixture::new();
    let payloads = ["plot.csv", "g.txt", "tri.csv", "tc.txt", "x.txt", "inv.mtx", "m.txt", "pr.csv"];
    let mut first = Vec::new();
    for args in all_verbs() {
        first.push(stable(ok_report(f.path(), &args)));
    }
    let saved: Vec<Vec<u8>> = payloads
        .iter()
        .map(|p| std::fs::read(f.path().join(p)).unwrap())
        .collect();
    for (args, a) in all_verbs().into_iter().zip(&first) {
        let b = stable(ok_report(f.path(), &args));
        assert_eq!(a, &b, "{args:?}");
    }
    for (p, bytes) in payloads.iter().zip(&saved) {
        assert_eq!(&std::fs::read(f.path().join(p)).unwrap(), bytes, "{p}");
    }
}

#[test]
fn bench_single_point_has_no_slope() {
    let dir = tempfile::tempdir().unwrap();
    let r = ok_report(
        dir.path(),
        &[
            "bench", "--suite", "triangles", "--n", "512", "--alpha", "2.5", "--reps", "1",
            "-o", "rows.csv", "--slopes", "slopes.csv",
        ],
    );
    assert_eq!(r["result"]["points"], 1);
    assert_eq!(r["result"]["slopes"].as_array().unwrap().len(), 0);
    let rows = std::fs::read_to_string(dir.path().join("rows.csv")).unwrap();
    let lines: Vec<&str> = rows.lines().collect();
    assert_eq!(lines.len(), 2);
    assert!(lines[0].starts_with("algorithm,n,"));
    assert!(lines[1].starts_with("triangles,512,"));
    assert!(lines[1].ends_with(",ok"));
    let slopes = std::fs::read_to_string(dir.path().join("slopes.csv")).unwrap();
    assert_eq!(slopes.lines().count(), 1);
}

#[test]
fn bench_failures_become_rows() {
    let dir = tempfile::tempdir().unwrap();
    let r = ok_report(
        dir.path(),
        &["bench", "--suite", "clique", "--n", "128,256", "--alpha", "0.5,2.5", "--reps", "1"],
    );
    assert_eq!(r["result"]["points"], 4);
    assert_eq!(r["result"]["failures"], 2);
    let rows = r["result"]["rows"].as_array().unwrap();
    assert!(rows[0]["status"].as_str().unwrap().starts_with("error"));
    assert!(rows[0]["wall_time_ms"].is_null());
    let slopes = r["result"]["slopes"].as_array().unwrap();
    assert_eq!(slopes.len(), 1);
    assert_eq!(slopes[0]["alpha"], 2.5);
}

#[test]
fn solve_with_matrix_market_input() {
    let dir = tempfile::tempdir().unwrap();
    let p = dir.path();
    let f = PrimeField::new(MERSENNE_61).unwrap();
    // tridiagonal plus a dense first row and column
    let n = 40;
    let mut entries = Vec::new();
    for i in 0..n {
        entries.push((i, i, 4 + i as u64));
        if i + 1 < n {
            entries.push((i, i + 1, 1));
            entries.push((i + 1, i, f.neg(1)));
        }
        if i > 1 {
            entries.push((0, i, 7));
            entries.push((i, 0, 3));
        }
    }
    let m = SparseMatrix::from_triplets(&f, n, n, entries).unwrap();
    let mut buf = Vec::new();
    m.write_matrix_market(&f, &mut buf).unwrap();
    std::fs::write(p.join("m.mtx"), buf).unwrap();
    let rhs: Vec<String> = (0..n).map(|i| format!("{}", i as i64 - 20)).collect();
    std::fs::write(p.join("rhs.txt"), rhs.join("\n")).unwrap();

    let r = ok_report(p, &["solve", "m.mtx", "--rhs", "rhs.txt", "--k", "3", "-o", "x.txt"]);
    assert_eq!(r["input"]["format"], "matrix-market");
    assert_eq!(r["result"]["pipeline"], "general");
    let x: Vec<u64> = std::fs::read_to_string(p.join("x.txt"))
        .unwrap()
        .lines()
        .map(|l| l.parse().unwrap())
        .collect();
    let v: Vec<u64> = (0..n).map(|i| f.from_i64(i as i64 - 20)).collect();
    assert_eq!(m.mul_vec(&f, &x), v);

    let d = ok_report(p, &["det", "m.mtx", "--k", "3"]);
    let dense = m.to_dense().det(&f).unwrap();
    assert_eq!(d["result"]["det"].as_u64().unwrap(), dense);
}

#[test]
fn matching_output_is_a_perfect_matching() {
    let f = Fixture::new();
    let r = ok_report(f.path(), &["matching", "ladder.txt", "-o", "m.txt"]);
    assert_eq!(r["result"]["exists"], true);
    assert_eq!(r["result"]["matching_size"], 10);
    let text = std::fs::read_to_string(f.path().join("m.txt")).unwrap();
    let mut covered = [false; 20];
    for line in text.lines() {
        let mut it = line.split_whitespace().map(|t| t.parse::<usize>().unwrap());
        let (u, v) = (it.next().unwrap(), it.next().unwrap());
        assert!(u.abs_diff(v) == 1 || u.abs_diff(v) == 2);
        assert!(!covered[u] && !covered[v]);
        covered[u] = true;
        covered[v] = true;
    }
    assert!(covered.iter().all(|&c| c));
}

#[test]
fn pagerank_csv_uses_original_ids() {
    let dir = tempfile::tempdir().unwrap();
    std::fs::write(dir.path().join("g.txt"), "10 20\n20 30\n30 10\n30 40\n").unwrap();
    let r = ok_report(dir.path(), &["pagerank", "g.txt", "-o", "pr.csv"]);
    assert!((r["result"]["sum"].as_f64().unwrap() - 1.0).abs() < 1e-12);
    let text = std::fs::read_to_string(dir.path().join("pr.csv")).unwrap();
    let ids: Vec<&str> = text.lines().skip(1).map(|l| l.split(',').next().unwrap()).collect();
    let mut sorted = ids.clone();
    sorted.sort();
    assert_eq!(sorted, ["10", "20", "30", "40"]);
}

#[test]
fn fit_on_histogram_input() {
    let dir = tempfile::tempdir().unwrap();
    // counts proportional to k^-2.5
    let lines: Vec<String> = (1..=60)
        .map(|k| format!("{k} {}", (20000.0 * (k as f64).powf(-2.5)).round() as u64))
        .filter(|l| !l.ends_with(" 0"))
        .collect();
    std::fs::write(dir.path().join("h.txt"), lines.join("\n")).unwrap();
    let r = ok_report(dir.path(), &["fit", "h.txt", "--histogram"]);
    assert_eq!(r["input"]["format"], "histogram");
    assert_eq!(r["result"]["feasible"], true);
    let alpha = r["plb_params"]["alpha"].as_f64().unwrap();
    let c1 = r["plb_params"]["c1"].as_f64().unwrap();
    assert!((alpha - 2.5).abs() < 0.3, "{alpha}");
    assert!(c1 <= 5.0);
}
