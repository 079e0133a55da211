use std::fs;
use std::path::Path;
use std::time::Instant;

use anyhow::{anyhow, bail, Context};
use qobdd_core::pcnf::{gen_ipg_qbf, parse_qdimacs, Family, Graph, Pcnf};
use qobdd_core::proof::{check_trace_text, CheckOptions, ProofTrace, RejectReason, Verdict};
use qobdd_core::rectangles::{check_rectanglesmall, pair_partition};
use qobdd_core::solver::{pathwidth_order, prefix_order, solve as run_solver, SolveOptions};
use qobdd_core::strategy::{extract as run_extract, verify_winning, StrategyFamily, VerifyOptions, WinVerdict};
use qobdd_core::{Partition, VarOrder};
use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde_json::{json, Value};

use crate::failure::Failure;
use crate::{BenchArgs, CheckArgs, ExtractArgs, GenArgs, GenFamily, Global, RectArgs, SolveArgs, VerifyArgs};

type Outcome = Result<(), Failure>;

fn read(path: &Path) -> anyhow::Result<String> {
    fs::read_to_string(path).with_context(|| format!("cannot read {}", path.display()))
}

fn write(path: &Path, text: &str) -> anyhow::Result<()> {
    fs::write(path, text).with_context(|| format!("cannot write {}", path.display()))
}

fn load_formula(path: &Path) -> anyhow::Result<Pcnf> {
    parse_qdimacs(&read(path)?).with_context(|| format!("in {}", path.display()))
}

fn emit(text: &str, output: Option<&Path>) -> anyhow::Result<()> {
    match output {
        Some(p) => write(p, text),
        None => {
            print!("{text}");
            Ok(())
        }
    }
}

fn print_json(v: &Value) {
    println!("{}", serde_json::to_string_pretty(v).expect("values serialize"));
}

fn order_text(order: &VarOrder) -> String {
    let vars: Vec<String> = order.vars().iter().map(u32::to_string).collect();
    format!("o {}\n", vars.join(" "))
}

/// Whitespace-separated variable ids, optionally preceded by `o`.
fn parse_order(text: &str) -> anyhow::Result<VarOrder> {
    let vars = text
        .split_whitespace()
        .filter(|t| *t != "o")
        .map(|t| {
            t.parse::<u32>()
                .map_err(|_| anyhow!("bad variable id `{t}` in order file"))
        })
        .collect::<anyhow::Result<Vec<_>>>()?;
    Ok(VarOrder::new(vars)?)
}

fn choose_order(choice: &str, f: &Pcnf) -> anyhow::Result<VarOrder> {
    match choice {
        "pathwidth" => Ok(pathwidth_order(f)),
        "prefix" => Ok(prefix_order(f)),
        other => match other.strip_prefix("given:") {
            Some(path) => parse_order(&read(Path::new(path))?),
            None => bail!("unknown order `{other}` (expected pathwidth, prefix or given:<file>)"),
        },
    }
}

fn family_of(name: &str) -> anyhow::Result<Family> {
    name.parse::<Family>().map_err(|e| anyhow!("{e}"))
}

pub fn gen(g: &Global, a: GenArgs) -> Outcome {
    let (f, extra, order) = match a.family {
        GenFamily::Quparity | GenFamily::Eqprime => {
            let fam = if a.family == GenFamily::Quparity {
                Family::QuParity
            } else {
                Family::EqPrime
            };
            let n = a.n.ok_or_else(|| Failure::usage("missing size parameter <N>"))?;
            let f = fam.generate(n).map_err(|e| Failure::usage(e.to_string()))?;
            (
                f,
                json!({ "family": fam.name(), "n": n }),
                Some(fam.decomposition(n).order()),
            )
        }
        GenFamily::Ipg => {
            let graph = match (&a.graph, a.regular) {
                (Some(p), None) => Graph::parse_edge_list(&read(p)?).map_err(|e| Failure::usage(e.to_string()))?,
                (None, Some(n)) => {
                    Graph::random_regular(n, a.degree, g.seed).map_err(|e| Failure::usage(e.to_string()))?
                }
                _ => return Err(Failure::usage("ipg needs --graph <edgelist> or --regular <n>")),
            };
            let ipg = gen_ipg_qbf(&graph).map_err(|e| Failure::usage(e.to_string()))?;
            let inputs: Vec<Value> = ipg
                .inputs
                .iter()
                .map(|&(v, x)| json!({ "vertex": v, "var": x }))
                .collect();
            (
                ipg.pcnf,
                json!({ "family": "ipg", "seed": g.seed, "inputs": inputs, "output": ipg.output }),
                None,
            )
        }
    };
    if let Some(path) = &a.order_out {
        let order = order.ok_or_else(|| Failure::usage("--order-out needs quparity or eqprime"))?;
        write(path, &order_text(&order))?;
    }
    let text = f.to_qdimacs();
    if g.json && a.output.is_none() {
        let mut v = extra;
        v["vars"] = json!(f.num_vars());
        v["clauses"] = json!(f.clauses().len());
        v["hash"] = json!(f.content_hash());
        v["qdimacs"] = json!(text);
        print_json(&v);
    } else {
        emit(&text, a.output.as_deref())?;
    }
    Ok(())
}

pub fn solve(g: &Global, a: SolveArgs) -> Outcome {
    let f = load_formula(&a.formula)?;
    let order = choose_order(&a.order, &f)?;
    let opts = SolveOptions {
        emit_trace: a.proof.is_some(),
        budget: g.budget,
    };
    let r = run_solver(&f, &order, &opts)?;
    if let (Some(path), Some(trace)) = (&a.proof, &r.trace) {
        write(path, &trace.to_text())?;
    }
    let s = &r.stats;
    let value = if r.value { "TRUE" } else { "FALSE" };
    let report = json!({
        "value": value,
        "max_width": s.max_width,
        "trace_nodes": s.trace_nodes,
        "eliminations": s.eliminations.len(),
        "lines": s.lines,
        "manager_nodes": s.manager_nodes,
        "wall_time_ms": s.wall_time.as_millis() as u64,
    });
    if let Some(path) = &a.stats {
        write(
            path,
            &(serde_json::to_string_pretty(&report).expect("values serialize") + "\n"),
        )?;
    }
    if g.json {
        print_json(&report);
    } else {
        println!("{value}");
        println!("max_width {}", s.max_width);
        println!("trace_nodes {}", s.trace_nodes);
        println!("eliminations {}", s.eliminations.len());
        println!("lines {}", s.lines);
    }
    match a.expect {
        Some(want) if want != r.value => Err(Failure::expectation(format!("expected {want}, formula is {}", r.value))),
        _ => Ok(()),
    }
}

fn check_options(g: &Global, require_refutation: bool) -> CheckOptions {
    CheckOptions {
        budget: g.budget,
        require_refutation,
    }
}

pub fn check(g: &Global, a: CheckArgs) -> Outcome {
    let f = load_formula(&a.formula)?;
    let text = read(&a.trace)?;
    let verdict = check_trace_text(&f, &text, &check_options(g, a.require_refutation));
    if g.json {
        let v = match &verdict {
            Verdict::Accepted { refutation, lines } => {
                json!({ "verdict": "accepted", "refutation": refutation, "lines": lines })
            }
            Verdict::Rejected(r) => {
                json!({ "verdict": "rejected", "line": r.line, "reason": r.reason.code(), "detail": r.detail })
            }
        };
        print_json(&v);
    } else {
        println!("{verdict}");
    }
    match verdict {
        Verdict::Accepted { .. } => Ok(()),
        Verdict::Rejected(r) if r.reason == RejectReason::BudgetExceeded => Err(Failure::budget(String::new())),
        Verdict::Rejected(_) => Err(Failure::check(String::new())),
    }
}

fn load_trace(path: &Path) -> Result<ProofTrace, Failure> {
    ProofTrace::parse(&read(path)?).map_err(|e| Failure::check(format!("{}: {e}", path.display())))
}

pub fn extract(g: &Global, a: ExtractArgs) -> Outcome {
    let f = load_formula(&a.formula)?;
    let t = load_trace(&a.trace)?;
    let fam = run_extract(&f, &t, &check_options(g, true))?;
    let text = fam.to_text();
    if g.json && a.output.is_none() {
        let lists: Vec<Value> = fam
            .lists()
            .iter()
            .map(|(u, dl)| json!({ "universal": u, "entries": dl.len(), "guard_sizes": dl.guard_sizes(fam.manager()) }))
            .collect();
        print_json(&json!({ "lists": lists, "width": fam.width(), "strategy": text }));
    } else {
        emit(&text, a.output.as_deref())?;
    }
    Ok(())
}

fn signed(a: &[bool]) -> String {
    a.iter()
        .enumerate()
        .skip(1)
        .map(|(v, &b)| if b { v.to_string() } else { format!("-{v}") })
        .collect::<Vec<_>>()
        .join(" ")
}

pub fn verify(g: &Global, a: VerifyArgs) -> Outcome {
    let f = load_formula(&a.formula)?;
    let fam = StrategyFamily::parse(&read(&a.strategy)?).map_err(|e| Failure::usage(e.to_string()))?;
    let opts = VerifyOptions {
        limit: a.limit,
        samples: a.samples,
        seed: g.seed,
    };
    match verify_winning(&f, &fam, &opts)? {
        WinVerdict::Winning {
            assignments,
            exhaustive,
        } => {
            if g.json {
                print_json(
                    &json!({ "verdict": "winning", "assignments": assignments, "exhaustive": exhaustive, "seed": g.seed }),
                );
            } else {
                println!("WINNING");
            }
            Ok(())
        }
        WinVerdict::Counterexample(cex) => {
            if g.json {
                print_json(&json!({ "verdict": "counterexample", "assignment": signed(&cex) }));
            } else {
                println!("COUNTEREXAMPLE {}", signed(&cex));
            }
            Err(Failure::check(String::new()))
        }
    }
}

/// Column names of the bench table; `time_ms` is appended with `--timing`.
pub const BENCH_COLUMNS: [&str; 7] = ["family", "n", "order", "value", "lines", "trace_nodes", "max_width"];

struct BenchRow {
    n: usize,
    order: &'static str,
    value: bool,
    lines: usize,
    trace_nodes: usize,
    max_width: usize,
    time_ms: f64,
}

pub fn bench(g: &Global, a: BenchArgs) -> Outcome {
    let fam = family_of(&a.family)?;
    if a.step == 0 || a.from > a.to {
        return Err(Failure::usage("empty size range"));
    }
    let mut orders = Vec::new();
    for o in a.orders.split(',') {
        orders.push(match o.trim() {
            "decomposition" => "decomposition",
            "pathwidth" => "pathwidth",
            "prefix" => "prefix",
            other => return Err(Failure::usage(format!("unknown order `{other}`"))),
        });
    }
    let jobs: Vec<(usize, &'static str)> = (a.from..=a.to)
        .step_by(a.step)
        .flat_map(|n| orders.iter().map(move |&o| (n, o)))
        .collect();
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(g.threads)
        .build()
        .map_err(|e| Failure::usage(e.to_string()))?;
    let opts = SolveOptions {
        emit_trace: true,
        budget: g.budget,
    };
    let rows: Vec<Result<BenchRow, Failure>> = pool.install(|| {
        jobs.par_iter()
            .map(|&(n, order)| {
                let f = fam.generate(n).map_err(|e| Failure::usage(e.to_string()))?;
                let pi = match order {
                    "decomposition" => fam.decomposition(n).order(),
                    "pathwidth" => pathwidth_order(&f),
                    _ => prefix_order(&f),
                };
                let start = Instant::now();
                let r = run_solver(&f, &pi, &opts)?;
                Ok(BenchRow {
                    n,
                    order,
                    value: r.value,
                    lines: r.stats.lines,
                    trace_nodes: r.stats.trace_nodes,
                    max_width: r.stats.max_width,
                    time_ms: start.elapsed().as_secs_f64() * 1e3,
                })
            })
            .collect()
    });
    let rows = rows.into_iter().collect::<Result<Vec<_>, _>>()?;
    if g.json {
        let items: Vec<Value> = rows
            .iter()
            .map(|r| {
                let mut v = json!({
                    "family": fam.name(), "n": r.n, "order": r.order, "value": r.value,
                    "lines": r.lines, "trace_nodes": r.trace_nodes, "max_width": r.max_width,
                });
                if a.timing {
                    v["time_ms"] = json!(r.time_ms);
                }
                v
            })
            .collect();
        print_json(&Value::Array(items));
        return Ok(());
    }
    let mut header = BENCH_COLUMNS.join("\t");
    if a.timing {
        header.push_str("\ttime_ms");
    }
    println!("{header}");
    for r in &rows {
        let mut line = format!(
            "{}\t{}\t{}\t{}\t{}\t{}\t{}",
            fam.name(),
            r.n,
            r.order,
            r.value,
            r.lines,
            r.trace_nodes,
            r.max_width
        );
        if a.timing {
            line.push_str(&format!("\t{:.3}", r.time_ms));
        }
        println!("{line}");
    }
    Ok(())
}

fn parse_vertex_line(line: &str) -> anyhow::Result<Vec<u32>> {
    line.split_whitespace()
        .map(|t| {
            t.parse::<u32>()
                .map_err(|_| anyhow!("bad vertex id `{t}` in partition file"))
        })
        .collect()
}

fn choose_partition(choice: &str, graph: &Graph) -> anyhow::Result<Partition> {
    if choice == "pairs" {
        return Ok(pair_partition(graph));
    }
    let part = if let Some(seed) = choice.strip_prefix("random:") {
        let seed: u64 = seed.parse().map_err(|_| anyhow!("bad seed `{seed}`"))?;
        let mut verts: Vec<u32> = graph.vertices().collect();
        verts.shuffle(&mut ChaCha8Rng::seed_from_u64(seed));
        let half = verts.len() / 2;
        Partition::new(verts[..half].to_vec(), verts[half..].to_vec())
    } else {
        let text = read(Path::new(choice))?;
        let mut lines = text.lines().filter(|l| !l.trim().is_empty());
        let left = parse_vertex_line(lines.next().unwrap_or(""))?;
        let right = parse_vertex_line(lines.next().unwrap_or(""))?;
        Partition::new(left, right)
    };
    let part = part.ok_or_else(|| anyhow!("partition sides overlap"))?;
    let mut covered: Vec<u32> = part.left().iter().chain(part.right()).copied().collect();
    covered.sort_unstable();
    if covered != graph.vertices().collect::<Vec<_>>() {
        bail!("partition does not cover exactly the vertices of the graph");
    }
    Ok(part)
}

pub fn rect_analyze(g: &Global, a: RectArgs) -> Outcome {
    let graph = Graph::parse_edge_list(&read(&a.graph)?).map_err(|e| Failure::usage(e.to_string()))?;
    let part = choose_partition(&a.partition, &graph)?;
    let r = check_rectanglesmall(&graph, &part).map_err(|e| Failure::usage(e.to_string()))?;
    let report = json!({
        "n": r.n,
        "m": r.m,
        "bound": r.bound,
        "oracle_max": r.oracle_max,
        "holds": r.holds(),
        "balance": r.balance,
        "partition": { "left": part.left(), "right": part.right() },
        "matching": r.matching.edges,
        "witness": {
            "size": r.witness.size,
            "color": r.witness.color,
            "rows": r.witness.rows,
            "cols": r.witness.cols,
        },
    });
    if let Some(path) = &a.report {
        write(
            path,
            &(serde_json::to_string_pretty(&report).expect("values serialize") + "\n"),
        )?;
    }
    if g.json {
        print_json(&report);
    } else {
        println!("n {}", r.n);
        println!("m {}", r.m);
        println!("bound {}", r.bound);
        println!("oracle_max {}", r.oracle_max);
        println!(
            "witness color {} rows {:?} cols {:?}",
            r.witness.color as u8, r.witness.rows, r.witness.cols
        );
        println!("{}", if r.holds() { "HOLDS" } else { "VIOLATED" });
    }
    if r.holds() {
        Ok(())
    } else {
        Err(Failure::check(String::new()))
    }
}
