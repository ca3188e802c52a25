use std::path::Path;
use std::process::{Command, Output};

fn bfs1d(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_bfs1d"))
        .args(args)
        .env("RUST_LOG", "off")
        .output()
        .expect("run bfs1d")
}

fn path(p: &Path) -> &str {
    p.to_str().unwrap()
}

#[test]
fn gen_writes_edge_list() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("star.txt");
    let res = bfs1d(&[
        "gen",
        "--family",
        "star",
        "--n",
        "3",
        "--seed",
        "1",
        "--out",
        path(&out),
    ]);
    assert!(
        res.status.success(),
        "{}",
        String::from_utf8_lossy(&res.stderr)
    );
    assert_eq!(std::fs::read_to_string(&out).unwrap(), "3 2\n0 1\n0 2\n");
}

#[test]
fn run_then_summarize() {
    let dir = tempfile::tempdir().unwrap();
    let graph = dir.path().join("ws.txt");
    let csv = dir.path().join("out.csv");
    let res = bfs1d(&[
        "gen",
        "--family",
        "ws",
        "--n",
        "200",
        "--k",
        "4",
        "--rewire-prob",
        "0.2",
        "--seed",
        "5",
        "--out",
        path(&graph),
    ]);
    assert!(res.status.success());

    let res = bfs1d(&[
        "run",
        "--graph",
        path(&graph),
        "--source",
        "3",
        "--ranks",
        "1,2,4",
        "--strategy",
        "baseline,optimized",
        "--frontier",
        "master,distributed",
        "--backend",
        "inproc",
        "--reps",
        "2",
        "--csv",
        path(&csv),
    ]);
    assert!(
        res.status.success(),
        "{}",
        String::from_utf8_lossy(&res.stderr)
    );
    let stdout = String::from_utf8(res.stdout).unwrap();
    assert!(stdout.contains("master_merge / distributed"));

    let text = std::fs::read_to_string(&csv).unwrap();
    assert_eq!(text.lines().count(), 1 + 3 * 2 * 2 * 2);

    let res = bfs1d(&["summarize", "--csv", path(&csv)]);
    assert!(res.status.success());
    assert!(String::from_utf8(res.stdout).unwrap().contains("speedup"));
}

#[test]
fn weak_scaling_over_sockets() {
    let res = bfs1d(&[
        "run",
        "--family",
        "er",
        "--mode",
        "weak",
        "--per-rank-n",
        "300",
        "--ranks",
        "1,3",
        "--backend",
        "socket",
        "--reps",
        "1",
        "--strategy",
        "optimized",
        "--frontier",
        "distributed",
    ]);
    assert!(
        res.status.success(),
        "{}",
        String::from_utf8_lossy(&res.stderr)
    );
    let stdout = String::from_utf8(res.stdout).unwrap();
    assert!(stdout.contains("weak scaling, socket backend"));
    assert!(stdout.contains("900"));
}

#[test]
fn exit_codes() {
    assert_eq!(bfs1d(&["run", "--bogus"]).status.code(), Some(1));
    assert_eq!(
        bfs1d(&[
            "run",
            "--family",
            "er",
            "--n",
            "10",
            "--strategy",
            "fastest"
        ])
        .status
        .code(),
        Some(1)
    );
    assert_eq!(
        bfs1d(&["run", "--family", "star", "--n", "10", "--source", "10"])
            .status
            .code(),
        Some(1)
    );
    assert_eq!(
        bfs1d(&["run", "--family", "ws", "--n", "10", "--k", "3"])
            .status
            .code(),
        Some(1)
    );
    assert_eq!(
        bfs1d(&["run", "--graph", "/nonexistent/graph.txt"])
            .status
            .code(),
        Some(2)
    );
    assert_eq!(
        bfs1d(&["summarize", "--csv", "/nonexistent/out.csv"])
            .status
            .code(),
        Some(2)
    );

    let dir = tempfile::tempdir().unwrap();
    let bad = dir.path().join("bad.txt");
    std::fs::write(&bad, "3 1\n0 9\n").unwrap();
    let res = bfs1d(&["run", "--graph", path(&bad)]);
    assert_eq!(res.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&res.stderr).contains(":2:"));

    let empty = dir.path().join("empty.csv");
    std::fs::write(&empty, "mode,family\n").unwrap();
    assert_ne!(
        bfs1d(&["summarize", "--csv", path(&empty)]).status.code(),
        Some(0)
    );
}
