use std::fs;
use std::path::{Path, PathBuf};
use std::process::Command;

use eulertrail::cli::{run, EXIT_NOT_EULERIAN, EXIT_OK, EXIT_PARSE};
use eulertrail::oracle::brute_edge;
use eulertrail::{Multigraph, VertexId};
use tempfile::TempDir;

const TRIANGLE: &str = "# triangle\n3 3\n0 1\n1 2\n2 0\n";
const PAIR: &str = "2 2\n0 1\n0 1\n";
const BOWTIE: &str = "5 6\n0 1\n1 2\n2 0\n0 3\n3 4\n4 0\n";

fn write(dir: &TempDir, name: &str, text: &str) -> PathBuf {
    let p = dir.path().join(name);
    fs::write(&p, text).unwrap();
    p
}

fn call(args: &[&str]) -> (i32, String, String) {
    let mut out = Vec::new();
    let mut err = Vec::new();
    let argv = std::iter::once("eulertrail").chain(args.iter().copied());
    let code = run(argv, &mut out, &mut err);
    (code, String::from_utf8(out).unwrap(), String::from_utf8(err).unwrap())
}

fn s(p: &Path) -> &str {
    p.to_str().unwrap()
}

#[test]
fn counts() {
    let dir = TempDir::new().unwrap();
    let tri = write(&dir, "tri.txt", TRIANGLE);
    let pair = write(&dir, "pair.txt", PAIR);
    assert_eq!(
        call(&["--input", s(&tri), "--mode", "edge", "--output", "count"]).1,
        "2\n"
    );
    assert_eq!(
        call(&["--input", s(&pair), "--mode", "vertex", "--output", "count"]).1,
        "1\n"
    );
    assert_eq!(
        call(&["--input", s(&pair), "--mode", "edge", "--output", "count"]).1,
        "2\n"
    );
}

#[test]
fn full_output_lists_every_trail() {
    let dir = TempDir::new().unwrap();
    let bow = write(&dir, "bow.txt", BOWTIE);
    let (code, out, _) = call(&["--input", s(&bow), "--output", "full", "--source", "0"]);
    assert_eq!(code, EXIT_OK);
    let mut lines: Vec<Vec<u32>> = out
        .lines()
        .map(|l| l.split(' ').map(|x| x.parse().unwrap()).collect())
        .collect();
    assert_eq!(lines.len(), 8);
    lines.sort();
    let g = Multigraph::from_edges(5, &[(0, 1), (1, 2), (2, 0), (0, 3), (3, 4), (4, 0)]);
    assert_eq!(lines, brute_edge(&g, VertexId(0), VertexId(0)).unwrap());
}

#[test]
fn diff_stream_replays_to_full_output() {
    let dir = TempDir::new().unwrap();
    for (name, text) in [("tri.txt", TRIANGLE), ("bow.txt", BOWTIE), ("pair.txt", PAIR)] {
        let g = write(&dir, name, text);
        for mode in ["edge", "vertex"] {
            let (code, diff, _) = call(&["--input", s(&g), "--mode", mode, "--output", "diff"]);
            assert_eq!(code, EXIT_OK);
            assert!(diff
                .lines()
                .all(|l| l == "#" || l.starts_with("+ ") || l.starts_with("- ")));
            let stream = write(&dir, "stream.txt", &diff);
            let (_, full, _) = call(&["--input", s(&g), "--mode", mode, "--output", "full"]);
            let (code, replayed, err) = call(&["--input", s(&g), "--mode", mode, "--replay", s(&stream)]);
            assert_eq!(code, EXIT_OK, "{err}");
            assert_eq!(replayed, full, "{name} {mode}");
        }
    }
}

#[test]
fn triangle_diff_stream_has_two_solutions() {
    let dir = TempDir::new().unwrap();
    let tri = write(&dir, "tri.txt", TRIANGLE);
    let (_, diff, _) = call(&["--input", s(&tri), "--output", "diff"]);
    assert_eq!(diff.lines().filter(|l| *l == "#").count(), 2);
}

#[test]
fn reordered_stream_is_rejected() {
    let dir = TempDir::new().unwrap();
    let bow = write(&dir, "bow.txt", BOWTIE);
    let (_, diff, _) = call(&["--input", s(&bow), "--output", "diff"]);
    let mut lines: Vec<&str> = diff.lines().collect();
    let first_pop = lines.iter().position(|l| l.starts_with("- ")).unwrap();
    lines.swap(0, first_pop);
    let stream = write(&dir, "bad.txt", &(lines.join("\n") + "\n"));
    let (code, _, err) = call(&["--input", s(&bow), "--replay", s(&stream)]);
    assert_ne!(code, EXIT_OK);
    assert!(err.contains("line"), "{err}");
    let garbage = write(&dir, "garbage.txt", "+ x []\n");
    let (code, _, err) = call(&["--input", s(&bow), "--replay", s(&garbage)]);
    assert_eq!(code, EXIT_PARSE);
    assert!(err.contains("line 1"), "{err}");
}

#[test]
fn exit_codes() {
    let dir = TempDir::new().unwrap();
    let bad = write(&dir, "bad.txt", "3 2\n0 1\n");
    let (code, _, err) = call(&["--input", s(&bad)]);
    assert_eq!(code, EXIT_PARSE);
    assert!(err.contains("line"), "{err}");
    let star = write(&dir, "star.txt", "4 3\n0 1\n0 2\n0 3\n");
    assert_eq!(call(&["--input", s(&star)]).0, EXIT_NOT_EULERIAN);
    let split = write(&dir, "split.txt", "4 4\n0 1\n1 0\n2 3\n3 2\n");
    assert_eq!(call(&["--input", s(&split)]).0, EXIT_NOT_EULERIAN);
    let tri = write(&dir, "tri.txt", TRIANGLE);
    assert_eq!(
        call(&["--input", s(&tri), "--source", "0", "--target", "1"]).0,
        EXIT_NOT_EULERIAN
    );
    assert_eq!(call(&["--input", s(&tri), "--oracle-check"]).0, EXIT_OK);
    let missing = dir.path().join("missing.txt");
    assert_ne!(call(&["--input", s(&missing)]).0, EXIT_OK);
}

#[test]
fn stats_file_is_json() {
    let dir = TempDir::new().unwrap();
    let bow = write(&dir, "bow.txt", BOWTIE);
    let stats = dir.path().join("stats.json");
    let (code, _, _) = call(&["--input", s(&bow), "--output", "count", "--stats", s(&stats)]);
    assert_eq!(code, EXIT_OK);
    let v: serde_json::Value = serde_json::from_str(&fs::read_to_string(&stats).unwrap()).unwrap();
    assert_eq!(v["solutions"], 8);
    for key in [
        "nodes",
        "nodes_per_solution",
        "max_cost_ratio",
        "max_frame_len",
        "min_beta_alpha2",
        "wall_time_ms",
        "peak_live_edges",
    ] {
        assert!(!v[key].is_null(), "missing {key}");
    }
    assert!(v["nodes"].as_u64().unwrap() <= 15);
}

#[test]
fn solution_limit() {
    let dir = TempDir::new().unwrap();
    let bow = write(&dir, "bow.txt", BOWTIE);
    let (code, out, _) = call(&["--input", s(&bow), "--max-solutions", "3", "--oracle-check"]);
    assert_eq!(code, EXIT_OK);
    assert_eq!(out.lines().count(), 3);
    assert_eq!(
        call(&["--input", s(&bow), "--max-solutions", "3", "--output", "count"]).1,
        "3\n"
    );
}

#[test]
fn binary_runs() {
    let dir = TempDir::new().unwrap();
    let tri = write(&dir, "tri.txt", TRIANGLE);
    let out = Command::new(env!("CARGO_BIN_EXE_eulertrail"))
        .args(["--input", s(&tri), "--output", "count"])
        .output()
        .unwrap();
    assert!(out.status.success());
    assert_eq!(String::from_utf8_lossy(&out.stdout), "2\n");
    let bad = write(&dir, "bad.txt", "1 1\n0 7\n");
    let out = Command::new(env!("CARGO_BIN_EXE_eulertrail"))
        .args(["--input", s(&bad)])
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(EXIT_PARSE));
}
