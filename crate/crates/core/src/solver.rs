//! Bucket elimination over OBDDs, eliminating prefix variables from the
//! innermost outwards and logging every step as a proof trace line.

use std::time::{Duration, Instant};

use thiserror::Error;

use crate::obdd::{BlockNode, Manager, NodeRef, ObddBlock, ObddError, Var, VarOrder, DEFAULT_NODE_BUDGET};
use crate::pcnf::{Family, PathDecomposition, Pcnf, PcnfError, Quant};
use crate::proof::{ProofTrace, Rule};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum SolveError {
    #[error("variable {0} is not in the variable order")]
    OrderMismatch(Var),
    #[error("node budget of {0} nodes exhausted")]
    BudgetExceeded(usize),
    #[error(transparent)]
    Obdd(ObddError),
    #[error(transparent)]
    Formula(#[from] PcnfError),
}

impl From<ObddError> for SolveError {
    fn from(e: ObddError) -> Self {
        match e {
            ObddError::BudgetExceeded(n) => SolveError::BudgetExceeded(n),
            other => SolveError::Obdd(other),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct SolveOptions {
    pub emit_trace: bool,
    pub budget: usize,
}

impl Default for SolveOptions {
    fn default() -> Self {
        SolveOptions {
            emit_trace: true,
            budget: DEFAULT_NODE_BUDGET,
        }
    }
}

#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct SolveStats {
    /// Complete-OBDD width of every derived line, in line order.
    pub line_widths: Vec<usize>,
    pub max_width: usize,
    /// Sum of the reduced sizes of all lines.
    pub trace_nodes: usize,
    /// Variables quantified away, in elimination order.
    pub eliminations: Vec<Var>,
    pub lines: usize,
    /// Nodes held by the manager at the end of the run.
    pub manager_nodes: usize,
    pub wall_time: Duration,
}

#[derive(Debug, Clone)]
pub struct SolveResult {
    pub value: bool,
    pub trace: Option<ProofTrace>,
    pub stats: SolveStats,
}

/// `tower(a, 1) = a`, `tower(a, q + 1) = 2^tower(a, q)`; `None` once the
/// value leaves `u128`. `q = 0` is treated as 1.
pub fn tower(a: u64, q: u32) -> Option<u128> {
    let mut v = a as u128;
    for _ in 1..q {
        if v >= 128 {
            return None;
        }
        v = 1u128 << v;
    }
    Some(v)
}

/// Bucket elimination state. Buckets are indexed by prefix position; every
/// OBDD in bucket `i` has the variable at prefix position `i` as its
/// rightmost support variable.
pub struct Solver<'f> {
    f: &'f Pcnf,
    mgr: Manager,
    buckets: Vec<Vec<(usize, NodeRef)>>,
    trace: Option<ProofTrace>,
    lines: usize,
    stats: SolveStats,
    next: usize,
    outcome: Option<bool>,
    last_node: Option<NodeRef>,
    last_line: usize,
}

impl<'f> Solver<'f> {
    /// Builds the clause OBDDs and fills the buckets.
    pub fn new(f: &'f Pcnf, order: &VarOrder, opts: &SolveOptions) -> Result<Self, SolveError> {
        if let Some(v) = f.vars().into_iter().find(|&v| !order.contains(v)) {
            return Err(SolveError::OrderMismatch(v));
        }
        let mut s = Solver {
            f,
            mgr: Manager::with_budget(order.clone(), opts.budget),
            buckets: vec![Vec::new(); f.prefix().len()],
            trace: opts
                .emit_trace
                .then(|| ProofTrace::new(order.clone(), f.content_hash())),
            lines: 0,
            stats: SolveStats::default(),
            next: f.prefix().len(),
            outcome: None,
            last_node: None,
            last_line: 0,
        };
        let mut axioms = Vec::with_capacity(f.clauses().len());
        for (i, c) in f.clauses().iter().enumerate() {
            let node = s.mgr.mk_clause(c.lits().iter().map(|l| (l.var(), l.is_positive())))?;
            let line = s.emit(Rule::Axiom { clause: i + 1 }, node);
            axioms.push((line, node));
        }
        for (line, node) in axioms {
            if node.is_zero() {
                if s.last_line != line {
                    s.emit(
                        Rule::Conj {
                            left: line,
                            right: line,
                        },
                        node,
                    );
                }
                s.outcome = Some(false);
                return Ok(s);
            }
            s.insert(line, node);
        }
        Ok(s)
    }

    fn emit(&mut self, rule: Rule, node: NodeRef) -> usize {
        self.lines += 1;
        if let Some(t) = self.trace.as_mut() {
            t.push(rule);
        }
        let w = self.mgr.complete_width(node);
        self.stats.line_widths.push(w);
        self.stats.max_width = self.stats.max_width.max(w);
        self.stats.trace_nodes += self.mgr.size(node);
        self.last_node = Some(node);
        self.last_line = self.lines;
        self.lines
    }

    /// Prefix position of the rightmost support variable; `None` for constants.
    pub fn bucket_of(&self, node: NodeRef) -> Option<usize> {
        self.mgr
            .support(node)
            .into_iter()
            .filter_map(|v| self.f.prefix_index(v))
            .max()
    }

    fn insert(&mut self, line: usize, node: NodeRef) {
        if let Some(b) = self.bucket_of(node) {
            self.buckets[b].push((line, node));
        }
    }

    pub fn bucket_sizes(&self) -> Vec<usize> {
        self.buckets.iter().map(Vec::len).collect()
    }

    /// OBDDs currently stored in bucket `i`.
    pub fn bucket(&self, i: usize) -> Vec<NodeRef> {
        self.buckets[i].iter().map(|&(_, n)| n).collect()
    }

    pub fn manager(&self) -> &Manager {
        &self.mgr
    }

    /// The truth value, once decided.
    pub fn outcome(&self) -> Option<bool> {
        self.outcome
    }

    /// Prefix position of the next bucket to eliminate.
    pub fn next_position(&self) -> Option<usize> {
        (self.outcome.is_none() && self.next > 0).then(|| self.next - 1)
    }

    /// Conjoins the next bucket (smallest first), quantifies its variable
    /// and files the result. Returns `false` once the value is decided.
    pub fn step(&mut self) -> Result<bool, SolveError> {
        if self.outcome.is_some() {
            return Ok(false);
        }
        if self.next == 0 {
            self.outcome = Some(true);
            return Ok(false);
        }
        self.next -= 1;
        let i = self.next;
        let mut bucket = std::mem::take(&mut self.buckets[i]);
        if bucket.is_empty() {
            return Ok(true);
        }
        bucket.sort_by_key(|&(line, n)| (self.mgr.size(n), line));
        let (mut line, mut acc) = bucket[0];
        for &(l, n) in &bucket[1..] {
            acc = self.mgr.and(acc, n)?;
            line = self.emit(Rule::Conj { left: line, right: l }, acc);
            if acc.is_zero() {
                self.outcome = Some(false);
                return Ok(false);
            }
        }
        let (q, x) = self.f.prefix()[i];
        if self.mgr.support(acc).contains(&x) {
            self.stats.eliminations.push(x);
            match q {
                Quant::Exists => {
                    acc = self.mgr.exists(acc, x)?;
                    line = self.emit(Rule::Proj { var: x, premise: line }, acc);
                }
                Quant::Forall => {
                    let lo = self.mgr.restrict(acc, x, false)?;
                    let lo_line = self.emit(
                        Rule::URed {
                            var: x,
                            value: false,
                            premise: line,
                        },
                        lo,
                    );
                    let hi = self.mgr.restrict(acc, x, true)?;
                    let hi_line = self.emit(
                        Rule::URed {
                            var: x,
                            value: true,
                            premise: line,
                        },
                        hi,
                    );
                    acc = self.mgr.and(lo, hi)?;
                    line = self.emit(
                        Rule::Conj {
                            left: lo_line,
                            right: hi_line,
                        },
                        acc,
                    );
                }
            }
        }
        if acc.is_zero() {
            self.outcome = Some(false);
            return Ok(false);
        }
        self.insert(line, acc);
        Ok(true)
    }

    /// Runs to completion. A true formula's trace is closed with a line for
    /// the 1-sink.
    pub fn finish(mut self, started: Instant) -> Result<SolveResult, SolveError> {
        while self.step()? {}
        let value = self.outcome.expect("decided after the last step");
        if value && !self.last_node.is_some_and(NodeRef::is_one) {
            let one = self.mgr.one();
            let claim = ObddBlock {
                nodes: vec![BlockNode::Sink(true)],
            };
            self.emit(
                Rule::Entail {
                    premises: Vec::new(),
                    claim,
                },
                one,
            );
        }
        self.stats.lines = self.lines;
        self.stats.manager_nodes = self.mgr.node_count();
        self.stats.wall_time = started.elapsed();
        Ok(SolveResult {
            value,
            trace: self.trace,
            stats: self.stats,
        })
    }
}

/// Decides `f` by bucket elimination with OBDDs over `order`.
pub fn solve(f: &Pcnf, order: &VarOrder, opts: &SolveOptions) -> Result<SolveResult, SolveError> {
    let started = Instant::now();
    Solver::new(f, order, opts)?.finish(started)
}

/// Order of the prefix itself.
pub fn prefix_order(f: &Pcnf) -> VarOrder {
    VarOrder::new(f.prefix().iter().map(|&(_, v)| v).collect()).expect("prefix variables are distinct")
}

/// Order read off a heuristic path decomposition of the primal graph.
pub fn pathwidth_order(f: &Pcnf) -> VarOrder {
    PathDecomposition::heuristic(&f.primal_graph()).order()
}

/// Observed widths next to the bound `tower(k, q + 1)` for decomposition
/// width `k` and `q` quantifier blocks.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct WidthReport {
    pub max_width: usize,
    pub decomposition_width: usize,
    pub blocks: usize,
    pub bound: Option<u128>,
}

impl WidthReport {
    /// True when the observed width respects the bound (vacuous if the bound overflows).
    pub fn within_bound(&self) -> bool {
        self.bound.is_none_or(|b| self.max_width as u128 <= b)
    }
}

pub fn width_probe(stats: &SolveStats, f: &Pcnf, pd: &PathDecomposition) -> WidthReport {
    let k = pd.width() as u64;
    let q = f.num_blocks() as u32;
    WidthReport {
        max_width: stats.max_width,
        decomposition_width: pd.width(),
        blocks: f.num_blocks(),
        bound: tower(k, q + 1),
    }
}

/// One solved instance of a family series.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SeriesPoint {
    pub n: usize,
    pub value: bool,
    pub max_width: usize,
    pub trace_nodes: usize,
    pub lines: usize,
}

/// Solves `family` at each `n` under its known decomposition order.
pub fn family_series(family: Family, ns: &[usize], opts: &SolveOptions) -> Result<Vec<SeriesPoint>, SolveError> {
    ns.iter()
        .map(|&n| {
            let f = family.generate(n)?;
            let r = solve(&f, &family.decomposition(n).order(), opts)?;
            Ok(SeriesPoint {
                n,
                value: r.value,
                max_width: r.stats.max_width,
                trace_nodes: r.stats.trace_nodes,
                lines: r.stats.lines,
            })
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::pcnf::{gen_eqprime, parse_qdimacs};
    use crate::proof::{check_trace, CheckOptions};

    #[test]
    fn tower_values() {
        assert_eq!(tower(3, 1), Some(3));
        assert_eq!(tower(3, 2), Some(8));
        assert_eq!(tower(2, 3), Some(16));
        assert_eq!(tower(2, 4), Some(65536));
        assert_eq!(tower(2, 5), None);
    }

    #[test]
    fn trivial_instances() {
        let t = parse_qdimacs("p cnf 1 1\ne 1 0\n1 0\n").unwrap();
        let r = solve(&t, &prefix_order(&t), &SolveOptions::default()).unwrap();
        assert!(r.value);
        let trace = r.trace.unwrap();
        let v = check_trace(&t, &trace, &CheckOptions::default());
        assert_eq!(
            v,
            crate::proof::Verdict::Accepted {
                refutation: false,
                lines: trace.len()
            }
        );

        let u = parse_qdimacs("p cnf 1 1\na 1 0\n1 0\n").unwrap();
        let r = solve(&u, &prefix_order(&u), &SolveOptions::default()).unwrap();
        assert!(!r.value);
        assert!(check_trace(&u, &r.trace.unwrap(), &CheckOptions::default()).is_accepted_refutation());

        let empty = parse_qdimacs("p cnf 1 2\ne 1 0\n0\n1 0\n").unwrap();
        let r = solve(&empty, &prefix_order(&empty), &SolveOptions::default()).unwrap();
        assert!(!r.value);
        assert!(check_trace(&empty, &r.trace.unwrap(), &CheckOptions::default()).is_accepted_refutation());
    }

    #[test]
    fn bucket_is_rightmost_prefix_position() {
        let f = parse_qdimacs("p cnf 3 1\ne 1 2 3 0\n1 3 0\n").unwrap();
        let s = Solver::new(&f, &prefix_order(&f), &SolveOptions::default()).unwrap();
        assert_eq!(s.bucket_sizes(), vec![0, 0, 1]);
    }

    #[test]
    fn eqprime_traces_check() {
        for n in 2..=6 {
            let f = gen_eqprime(n).unwrap();
            let r = solve(&f, &Family::EqPrime.decomposition(n).order(), &SolveOptions::default()).unwrap();
            assert!(!r.value);
            assert!(check_trace(&f, r.trace.as_ref().unwrap(), &CheckOptions::default()).is_accepted_refutation());
            assert_eq!(r.stats.line_widths.len(), r.stats.lines);
        }
    }

    #[test]
    fn budget_is_reported() {
        let f = gen_eqprime(4).unwrap();
        let opts = SolveOptions {
            emit_trace: false,
            budget: 8,
        };
        assert!(matches!(
            solve(&f, &prefix_order(&f), &opts),
            Err(SolveError::BudgetExceeded(8))
        ));
    }
}
