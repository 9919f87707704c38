use std::path::Path;
use std::process::{Command, Output};

use tempfile::TempDir;

fn rpq(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_rpq"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn text(b: &[u8]) -> String {
    String::from_utf8_lossy(b).into_owned()
}

fn write(dir: &TempDir, name: &str, contents: &str) -> String {
    let p = dir.path().join(name);
    std::fs::write(&p, contents).unwrap();
    p.to_str().unwrap().to_owned()
}

fn data(name: &str) -> String {
    Path::new(env!("CARGO_MANIFEST_DIR"))
        .join("tests/data")
        .join(name)
        .to_str()
        .unwrap()
        .to_owned()
}

#[test]
fn eval_on_path_is_empty() {
    let dir = TempDir::new().unwrap();
    let graph = dir.path().join("path.tsv");
    let g = graph.to_str().unwrap();
    let gen = rpq(&["gen", "--family", "path", "--params", "200,b", "--out", g]);
    assert!(gen.status.success(), "{}", text(&gen.stderr));
    let out = rpq(&["eval", "--graph", g, "--query", "b*c", "--engine", "ospg"]);
    assert!(out.status.success());
    assert!(out.stdout.is_empty());
    assert!(text(&out.stderr).contains("OUT=0"));
}

#[test]
fn eval_single_edge() {
    let dir = TempDir::new().unwrap();
    let g = write(&dir, "g.tsv", "x\td\ty\n");
    for engine in ["ospg", "pg", "pg-bidi", "oracle"] {
        let out = rpq(&["eval", "--graph", &g, "--query", "d", "--engine", engine]);
        assert!(out.status.success());
        assert_eq!(text(&out.stdout), "x\ty\n", "{engine}");
        assert!(text(&out.stderr).contains("OUT=1"));
    }
}

#[test]
fn eval_counters_and_output_file() {
    let dir = TempDir::new().unwrap();
    let g = write(&dir, "g.tsv", "1\ta\t2\n2\tb\t3\n3\tc\t4\n");
    let listing = dir.path().join("out.tsv");
    let out = rpq(&[
        "eval",
        "--graph",
        &g,
        "--query",
        "ab*c",
        "--out",
        listing.to_str().unwrap(),
        "--counters",
    ]);
    assert!(out.status.success());
    assert_eq!(std::fs::read_to_string(listing).unwrap(), "1\t4\n");
    assert!(text(&out.stderr).contains("step1_edge_checks="));
}

#[test]
fn bad_engine_is_usage_error() {
    let dir = TempDir::new().unwrap();
    let g = write(&dir, "g.tsv", "1\ta\t2\n");
    let out = rpq(&["eval", "--graph", &g, "--query", "a", "--engine", "bogus"]);
    assert_eq!(out.status.code(), Some(1));
    assert!(text(&out.stderr).contains("unknown engine"));
}

#[test]
fn parse_error_exit_code() {
    let dir = TempDir::new().unwrap();
    let g = write(&dir, "g.tsv", "1\ta\t2\n");
    let out = rpq(&["eval", "--graph", &g, "--query", "(ab"]);
    assert_eq!(out.status.code(), Some(1));
    assert!(text(&out.stderr).contains("position 3"));
    let bad = write(&dir, "bad.tsv", "1\ta\n");
    let out = rpq(&["eval", "--graph", &bad, "--query", "a"]);
    assert_eq!(out.status.code(), Some(1));
    assert!(text(&out.stderr).contains("line 1"));
}

#[test]
fn query_and_automaton_are_exclusive() {
    let dir = TempDir::new().unwrap();
    let g = write(&dir, "g.tsv", "1\ta\t2\n");
    let m = data("dfgs_dfa.txt");
    let out = rpq(&["eval", "--graph", &g, "--query", "a", "--automaton", &m]);
    assert_eq!(out.status.code(), Some(1));
    let out = rpq(&["eval", "--graph", &g]);
    assert_eq!(out.status.code(), Some(1));
}

#[test]
fn oracle_capacity_exit_code() {
    let dir = TempDir::new().unwrap();
    let graph = dir.path().join("big.tsv");
    let g = graph.to_str().unwrap();
    assert!(
        rpq(&["gen", "--family", "path", "--params", "5000", "--out", g])
            .status
            .success()
    );
    let out = rpq(&["eval", "--graph", g, "--query", "b", "--engine", "oracle"]);
    assert_eq!(out.status.code(), Some(2));
    let out = rpq(&["verify", "--graph", g, "--query", "b"]);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn automaton_and_abc_dump() {
    let dir = TempDir::new().unwrap();
    let dump = dir.path().join("abc.tsv");
    let out = rpq(&[
        "eval",
        "--graph",
        &data("dfgs_graph.tsv"),
        "--automaton",
        &data("dfgs_dfa.txt"),
        "--dump-abc",
        dump.to_str().unwrap(),
    ]);
    assert!(out.status.success(), "{}", text(&out.stderr));
    let dumped = std::fs::read_to_string(dump).unwrap();
    assert_eq!(dumped.lines().count(), 22);
    assert!(dumped.contains("3@q1\tb\t1@q2\n"));
    let oracle = rpq(&[
        "eval",
        "--graph",
        &data("dfgs_graph.tsv"),
        "--automaton",
        &data("dfgs_dfa.txt"),
        "--engine",
        "oracle",
    ]);
    assert_eq!(oracle.stdout, out.stdout);
}

#[test]
fn verify_two_cycles_and_empty_graph() {
    let dir = TempDir::new().unwrap();
    let graph = dir.path().join("tc.tsv");
    let g = graph.to_str().unwrap();
    assert!(rpq(&[
        "gen",
        "--family",
        "two-cycles",
        "--params",
        "12",
        "--out",
        g
    ])
    .status
    .success());
    let out = rpq(&["verify", "--graph", g, "--query", "ab*c"]);
    assert!(out.status.success(), "{}", text(&out.stderr));
    let empty = write(&dir, "empty.tsv", "# nothing\n");
    let out = rpq(&["verify", "--graph", &empty, "--query", "a*"]);
    assert!(out.status.success());
}

#[test]
fn verify_random_instances() {
    let out = rpq(&["verify", "--seeds", "50"]);
    assert!(out.status.success(), "{}", text(&out.stderr));
    assert!(text(&out.stderr).contains("50 instance(s), all engines agree"));
}

#[test]
fn gen_random_is_deterministic() {
    let a = rpq(&["gen", "--family", "random", "--params", "5,10,a:b,42"]);
    let b = rpq(&["gen", "--family", "random", "--params", "5,10,a:b,42"]);
    assert!(a.status.success());
    assert_eq!(a.stdout, b.stdout);
    assert_eq!(text(&a.stdout).lines().count(), 10);
    let bad = rpq(&["gen", "--family", "random", "--params", "2,9,a:b,1"]);
    assert_eq!(bad.status.code(), Some(1));
}

#[test]
fn bench_writes_csv_even_with_failing_cells() {
    let out = rpq(&[
        "bench",
        "--family",
        "two-cycles",
        "--sizes",
        "1,8,16",
        "--engines",
        "ospg,pg-bidi",
        "--query",
        "ab*c",
    ]);
    assert!(out.status.success());
    let csv = text(&out.stdout);
    assert!(csv.starts_with("family,size,engine,out,counter_name,value,wall_ns\n"));
    assert!(csv.contains("two-cycles,1,ospg,,error,"));
    assert!(csv.contains("two-cycles,16,pg-bidi,0,forward_visits,"));
}

#[test]
fn tc_formulations() {
    let dir = TempDir::new().unwrap();
    let g = write(&dir, "g.tsv", "1\tx\t2\n2\ty\t3\n3\tz\t1\n");
    for f in ["linear", "binary"] {
        let out = rpq(&["tc", "--graph", &g, "--formulation", f, "--counters"]);
        assert!(out.status.success());
        assert_eq!(text(&out.stdout).lines().count(), 9);
        assert!(text(&out.stderr).contains("rule_work="));
    }
    let out = rpq(&["tc", "--graph", &g, "--formulation", "cubic"]);
    assert_eq!(out.status.code(), Some(1));
}
