use std::fs;
use std::path::Path;
use std::process::{Command, Output};

fn qobdd(args: &[&str], dir: &Path) -> Output {
    Command::new(env!("CARGO_BIN_EXE_qobdd"))
        .args(args)
        .current_dir(dir)
        .output()
        .expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

#[test]
fn eqprime_pipeline_ends_winning() {
    let dir = tempfile::tempdir().unwrap();
    let d = dir.path();
    assert!(qobdd(&["gen", "eqprime", "4", "-o", "f.q"], d).status.success());
    let solved = qobdd(
        &[
            "solve", "f.q", "--proof", "f.t", "--stats", "s.json", "--expect", "false",
        ],
        d,
    );
    assert_eq!(solved.status.code(), Some(0));
    assert!(stdout(&solved).starts_with("FALSE\n"));
    let stats: serde_json::Value = serde_json::from_str(&fs::read_to_string(d.join("s.json")).unwrap()).unwrap();
    for key in ["max_width", "trace_nodes", "eliminations", "wall_time_ms"] {
        assert!(stats.get(key).is_some(), "{key}");
    }
    let checked = qobdd(&["check", "f.q", "f.t"], d);
    assert_eq!(checked.status.code(), Some(0));
    assert!(stdout(&checked).starts_with("ACCEPTED refutation"));
    assert!(qobdd(&["extract", "f.q", "f.t", "-o", "f.s"], d).status.success());
    let verified = qobdd(&["verify", "f.q", "f.s"], d);
    assert_eq!(verified.status.code(), Some(0));
    assert_eq!(stdout(&verified), "WINNING\n");
}

#[test]
fn tampered_trace_exits_two() {
    let dir = tempfile::tempdir().unwrap();
    let d = dir.path();
    qobdd(&["gen", "quparity", "3", "-o", "f.q"], d);
    qobdd(&["solve", "f.q", "--proof", "f.t"], d);
    let text = fs::read_to_string(d.join("f.t")).unwrap();
    let hash_line = text.lines().nth(1).unwrap();
    let flipped = if hash_line.ends_with('0') { "1" } else { "0" };
    let tampered = text.replacen(hash_line, &format!("{}{flipped}", &hash_line[..hash_line.len() - 1]), 1);
    fs::write(d.join("bad.t"), tampered).unwrap();
    let o = qobdd(&["check", "f.q", "bad.t"], d);
    assert_eq!(o.status.code(), Some(2));
    assert!(stdout(&o).contains("hash-mismatch"));
    fs::write(d.join("cut.t"), &text[..text.len() / 2]).unwrap();
    let o = qobdd(&["--json", "check", "f.q", "cut.t"], d);
    assert_eq!(o.status.code(), Some(2));
    let v: serde_json::Value = serde_json::from_str(&stdout(&o)).unwrap();
    assert_eq!(v["reason"], "truncated");
    assert_eq!(qobdd(&["extract", "f.q", "cut.t"], d).status.code(), Some(2));
}

#[test]
fn expectation_mismatch_exits_three() {
    let dir = tempfile::tempdir().unwrap();
    let d = dir.path();
    fs::write(d.join("t.q"), "p cnf 2 1\na 1 0\ne 2 0\n1 2 0\n").unwrap();
    let o = qobdd(&["solve", "t.q", "--expect", "false"], d);
    assert_eq!(o.status.code(), Some(3));
    assert!(stdout(&o).starts_with("TRUE\n"));
    assert_eq!(qobdd(&["solve", "t.q", "--expect", "true"], d).status.code(), Some(0));
}

#[test]
fn usage_and_budget_codes() {
    let dir = tempfile::tempdir().unwrap();
    let d = dir.path();
    assert_eq!(qobdd(&["gen", "quparity", "1"], d).status.code(), Some(1));
    assert_eq!(qobdd(&["frobnicate"], d).status.code(), Some(1));
    assert_eq!(qobdd(&["solve", "missing.q"], d).status.code(), Some(1));
    qobdd(&["gen", "eqprime", "6", "-o", "f.q"], d);
    assert_eq!(qobdd(&["--budget", "8", "solve", "f.q"], d).status.code(), Some(4));
    assert_eq!(
        qobdd(&["solve", "f.q", "--order", "sideways"], d).status.code(),
        Some(1)
    );
}

#[test]
fn given_order_from_generator() {
    let dir = tempfile::tempdir().unwrap();
    let d = dir.path();
    qobdd(&["gen", "quparity", "6", "-o", "f.q", "--order-out", "f.o"], d);
    let o = qobdd(&["--json", "solve", "f.q", "--order", "given:f.o"], d);
    let v: serde_json::Value = serde_json::from_str(&stdout(&o)).unwrap();
    assert_eq!(v["value"], "FALSE");
    assert_eq!(v["max_width"], 5);
}

#[test]
fn losing_strategy_prints_counterexample() {
    let dir = tempfile::tempdir().unwrap();
    let d = dir.path();
    fs::write(d.join("f.q"), "p cnf 2 2\ne 1 0\na 2 0\n1 2 0\n-1 -2 0\n").unwrap();
    fs::write(
        d.join("s"),
        "p qobdd-strategy\no 1 2\nu 2 1\nentry 0\nobdd 1\n0 T1 - -\n",
    )
    .unwrap();
    let o = qobdd(&["verify", "f.q", "s"], d);
    assert_eq!(o.status.code(), Some(2));
    assert_eq!(stdout(&o), "COUNTEREXAMPLE 1 -2\n");
}

const BENCH_GOLDEN: &str = "family\tn\torder\tvalue\tlines\ttrace_nodes\tmax_width\n";

#[test]
fn bench_table_is_stable() {
    let dir = tempfile::tempdir().unwrap();
    let d = dir.path();
    let run = |threads: &str| {
        stdout(&qobdd(
            &["--threads", threads, "bench", "eqprime", "--from", "2", "--to", "8"],
            d,
        ))
    };
    let table = run("1");
    assert!(table.starts_with(BENCH_GOLDEN));
    assert_eq!(table, run("4"));
    let widths: Vec<&str> = table.lines().skip(1).map(|l| l.rsplit('\t').next().unwrap()).collect();
    assert!(widths.iter().all(|&w| w == widths[0]), "{widths:?}");

    let parity = stdout(&qobdd(&["bench", "quparity", "--from", "2", "--to", "12"], d));
    let sizes: Vec<usize> = parity
        .lines()
        .skip(1)
        .map(|l| l.split('\t').nth(5).unwrap().parse().unwrap())
        .collect();
    assert!(sizes.windows(2).all(|w| w[0] < w[1]), "{sizes:?}");

    let timed = stdout(&qobdd(
        &["bench", "quparity", "--from", "3", "--to", "3", "--timing"],
        d,
    ));
    assert!(timed.starts_with("family\tn\torder\tvalue\tlines\ttrace_nodes\tmax_width\ttime_ms\n"));
}

#[test]
fn rect_analyze_reports_bound() {
    let dir = tempfile::tempdir().unwrap();
    let d = dir.path();
    fs::write(d.join("g"), "1 2\n3 4\n5 6\n").unwrap();
    let o = qobdd(
        &[
            "rect",
            "analyze",
            "--graph",
            "g",
            "--partition",
            "pairs",
            "--report",
            "r.json",
        ],
        d,
    );
    assert_eq!(o.status.code(), Some(0));
    let v: serde_json::Value = serde_json::from_str(&fs::read_to_string(d.join("r.json")).unwrap()).unwrap();
    assert_eq!(v["n"], 6);
    assert_eq!(v["m"], 3);
    assert_eq!(v["bound"], 8);
    assert_eq!(v["oracle_max"], 8);
    assert!(v["witness"]["rows"].is_array());
    fs::write(d.join("p"), "1 3 5\n2 4 6\n").unwrap();
    let by_file = stdout(&qobdd(&["rect", "analyze", "--graph", "g", "--partition", "p"], d));
    let pairs = stdout(&qobdd(&["rect", "analyze", "--graph", "g", "--partition", "pairs"], d));
    assert_eq!(by_file, pairs);
    let a = stdout(&qobdd(
        &["rect", "analyze", "--graph", "g", "--partition", "random:7"],
        d,
    ));
    assert_eq!(
        a,
        stdout(&qobdd(
            &["rect", "analyze", "--graph", "g", "--partition", "random:7"],
            d
        ))
    );
}

#[test]
fn gen_ipg_is_seed_deterministic() {
    let dir = tempfile::tempdir().unwrap();
    let d = dir.path();
    let a = stdout(&qobdd(&["--seed", "9", "gen", "ipg", "--regular", "6"], d));
    let b = stdout(&qobdd(&["--seed", "9", "gen", "ipg", "--regular", "6"], d));
    assert_eq!(a, b);
    assert!(a.starts_with("p cnf "));
    fs::write(d.join("f.q"), &a).unwrap();
    assert_eq!(qobdd(&["solve", "f.q", "--expect", "false"], d).status.code(), Some(0));
}
