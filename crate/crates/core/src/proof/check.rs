use std::fmt;

use super::{ProofTrace, Rule};
use crate::error::ParseError;
use crate::obdd::{Manager, NodeRef, ObddError, DEFAULT_NODE_BUDGET};
use crate::pcnf::Pcnf;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct CheckOptions {
    /// Node budget of the replay manager.
    pub budget: usize,
    /// Also reject traces whose last line is not the 0-sink.
    pub require_refutation: bool,
}

impl Default for CheckOptions {
    fn default() -> Self {
        CheckOptions {
            budget: DEFAULT_NODE_BUDGET,
            require_refutation: false,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum RejectReason {
    OrderMismatch,
    HashMismatch,
    AxiomMismatch,
    BadReference,
    UredNotRightmost,
    UredNotUniversal,
    EntailmentFailed,
    BudgetExceeded,
    Truncated,
    Malformed,
    NotRefutation,
}

impl RejectReason {
    pub fn code(self) -> &'static str {
        match self {
            RejectReason::OrderMismatch => "order-mismatch",
            RejectReason::HashMismatch => "hash-mismatch",
            RejectReason::AxiomMismatch => "axiom-mismatch",
            RejectReason::BadReference => "bad-reference",
            RejectReason::UredNotRightmost => "ured-not-rightmost",
            RejectReason::UredNotUniversal => "ured-not-universal",
            RejectReason::EntailmentFailed => "entailment-failed",
            RejectReason::BudgetExceeded => "budget-exceeded",
            RejectReason::Truncated => "truncated",
            RejectReason::Malformed => "malformed",
            RejectReason::NotRefutation => "not-refutation",
        }
    }
}

impl fmt::Display for RejectReason {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.code())
    }
}

/// Why a trace was rejected. `line` is 0 for header-level problems.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Rejection {
    pub line: usize,
    pub reason: RejectReason,
    pub detail: String,
}

impl Rejection {
    fn new(line: usize, reason: RejectReason, detail: impl Into<String>) -> Self {
        Rejection {
            line,
            reason,
            detail: detail.into(),
        }
    }
}

impl fmt::Display for Rejection {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "line {}: {}: {}", self.line, self.reason, self.detail)
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Verdict {
    Accepted { refutation: bool, lines: usize },
    Rejected(Rejection),
}

impl Verdict {
    pub fn is_accepted(&self) -> bool {
        matches!(self, Verdict::Accepted { .. })
    }

    pub fn is_accepted_refutation(&self) -> bool {
        matches!(self, Verdict::Accepted { refutation: true, .. })
    }

    pub fn reason(&self) -> Option<RejectReason> {
        match self {
            Verdict::Accepted { .. } => None,
            Verdict::Rejected(r) => Some(r.reason),
        }
    }
}

impl fmt::Display for Verdict {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Verdict::Accepted {
                refutation: true,
                lines,
            } => write!(f, "ACCEPTED refutation ({lines} lines)"),
            Verdict::Accepted {
                refutation: false,
                lines,
            } => write!(f, "ACCEPTED derivation ({lines} lines)"),
            Verdict::Rejected(r) => write!(f, "REJECTED {r}"),
        }
    }
}

/// A successfully replayed trace: the manager and the OBDD of every line.
pub struct Replay {
    pub manager: Manager,
    pub nodes: Vec<NodeRef>,
}

impl Replay {
    pub fn last(&self) -> Option<NodeRef> {
        self.nodes.last().copied()
    }

    /// Sum of the reduced sizes of all lines.
    pub fn node_count(&self) -> usize {
        self.nodes.iter().map(|&n| self.manager.size(n)).sum()
    }
}

fn budget_or(line: usize, reason: RejectReason, e: ObddError) -> Rejection {
    match e {
        ObddError::BudgetExceeded(n) => {
            Rejection::new(line, RejectReason::BudgetExceeded, format!("node budget {n} exhausted"))
        }
        other => Rejection::new(line, reason, other.to_string()),
    }
}

/// Recomputes every line of `t` in a fresh manager, checking each rule's
/// side conditions against `f`.
pub fn replay(f: &Pcnf, t: &ProofTrace, opts: &CheckOptions) -> Result<Replay, Rejection> {
    if t.formula_hash != f.content_hash() {
        return Err(Rejection::new(
            0,
            RejectReason::HashMismatch,
            "trace is bound to a different formula",
        ));
    }
    if let Some(v) = f.vars().into_iter().find(|&v| !t.order.contains(v)) {
        return Err(Rejection::new(
            0,
            RejectReason::OrderMismatch,
            format!("order omits variable {v}"),
        ));
    }
    let m = f.clauses().len();
    let mut mgr = Manager::with_budget(t.order.clone(), opts.budget);
    let mut nodes: Vec<NodeRef> = Vec::with_capacity(t.lines.len());

    for (i, line) in t.lines.iter().enumerate() {
        let id = i + 1;
        if line.id != id {
            return Err(Rejection::new(
                id,
                RejectReason::BadReference,
                format!("line carries id {}", line.id),
            ));
        }
        if i < m && line.rule != (Rule::Axiom { clause: id }) {
            return Err(Rejection::new(
                id,
                RejectReason::AxiomMismatch,
                format!("line {id} must be axiom {id}"),
            ));
        }
        for p in line.rule.premises() {
            if p == 0 || p >= id {
                return Err(Rejection::new(
                    id,
                    RejectReason::BadReference,
                    format!("premise {p} is not an earlier line"),
                ));
            }
        }
        let get = |j: usize| nodes[j - 1];
        let node = match &line.rule {
            Rule::Axiom { clause } => {
                let c = clause
                    .checked_sub(1)
                    .and_then(|k| f.clauses().get(k))
                    .ok_or_else(|| Rejection::new(id, RejectReason::AxiomMismatch, format!("no clause {clause}")))?;
                mgr.mk_clause(c.lits().iter().map(|l| (l.var(), l.is_positive())))
                    .map_err(|e| budget_or(id, RejectReason::OrderMismatch, e))?
            }
            Rule::Conj { left, right } => mgr
                .and(get(*left), get(*right))
                .map_err(|e| budget_or(id, RejectReason::Malformed, e))?,
            Rule::Proj { var, premise } => {
                if !t.order.contains(*var) {
                    return Err(Rejection::new(
                        id,
                        RejectReason::OrderMismatch,
                        format!("variable {var} not in order"),
                    ));
                }
                mgr.exists(get(*premise), *var)
                    .map_err(|e| budget_or(id, RejectReason::Malformed, e))?
            }
            Rule::URed { var, value, premise } => {
                if !f.is_universal(*var) {
                    return Err(Rejection::new(
                        id,
                        RejectReason::UredNotUniversal,
                        format!("variable {var} is not universal"),
                    ));
                }
                let src = get(*premise);
                let pos = f.prefix_index(*var).expect("universal variables are quantified");
                let support = mgr.support(src);
                if let Some(&w) = support
                    .iter()
                    .find(|&&w| w != *var && f.prefix_index(w).is_none_or(|p| p > pos))
                {
                    return Err(Rejection::new(
                        id,
                        RejectReason::UredNotRightmost,
                        format!("variable {w} of line {premise} is right of {var}"),
                    ));
                }
                mgr.restrict(src, *var, *value)
                    .map_err(|e| budget_or(id, RejectReason::Malformed, e))?
            }
            Rule::Entail { premises, claim } => {
                let claimed = mgr.deserialize(claim).map_err(|e| match e {
                    ObddError::UnknownVar(_) | ObddError::OrderViolation { .. } => {
                        Rejection::new(id, RejectReason::OrderMismatch, e.to_string())
                    }
                    e => budget_or(id, RejectReason::Malformed, e),
                })?;
                let mut conj = mgr.one();
                for &p in premises {
                    conj = mgr
                        .and(conj, get(p))
                        .map_err(|e| budget_or(id, RejectReason::Malformed, e))?;
                }
                let missing = mgr
                    .apply(crate::obdd::BinOp::from_table(0b0100), conj, claimed)
                    .map_err(|e| budget_or(id, RejectReason::Malformed, e))?;
                if !missing.is_zero() {
                    return Err(Rejection::new(
                        id,
                        RejectReason::EntailmentFailed,
                        "premises do not imply the claim",
                    ));
                }
                claimed
            }
        };
        nodes.push(node);
    }
    Ok(Replay { manager: mgr, nodes })
}

/// Checks a trace against its formula.
pub fn check_trace(f: &Pcnf, t: &ProofTrace, opts: &CheckOptions) -> Verdict {
    match replay(f, t, opts) {
        Ok(r) => {
            let refutation = r.last().is_some_and(NodeRef::is_zero);
            if opts.require_refutation && !refutation {
                return Verdict::Rejected(Rejection::new(
                    t.lines.len(),
                    RejectReason::NotRefutation,
                    "last line is not the 0-sink",
                ));
            }
            Verdict::Accepted {
                refutation,
                lines: t.lines.len(),
            }
        }
        Err(r) => Verdict::Rejected(r),
    }
}

/// Parses and checks trace text; parse failures become `truncated` or
/// `malformed` rejections.
pub fn check_trace_text(f: &Pcnf, text: &str, opts: &CheckOptions) -> Verdict {
    match ProofTrace::parse(text) {
        Ok(t) => check_trace(f, &t, opts),
        Err(e) => Verdict::Rejected(parse_rejection(&e)),
    }
}

fn parse_rejection(e: &ParseError) -> Rejection {
    let reason = if e.is_eof() {
        RejectReason::Truncated
    } else {
        RejectReason::Malformed
    };
    Rejection::new(e.line, reason, e.to_string())
}

/// True iff `t` is an accepted trace whose last line is the 0-sink.
pub fn is_refutation(f: &Pcnf, t: &ProofTrace) -> bool {
    check_trace(f, t, &CheckOptions::default()).is_accepted_refutation()
}
