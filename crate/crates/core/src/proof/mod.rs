//! OBDD derivations: lines are OBDDs over one variable order, each either a
//! matrix clause or obtained by conjunction, projection, entailment or
//! universal reduction.

mod check;
mod qures;
mod text;

pub use check::{
    check_trace, check_trace_text, is_refutation, replay, CheckOptions, RejectReason, Rejection, Replay, Verdict,
};
pub use qures::{parse_qures, simulate_qures, QuResError, QuResProof, QuResStep};

use crate::obdd::{ObddBlock, Var, VarOrder};

/// Derivation rule of one line. Line and clause references are 1-based.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Rule {
    /// The OBDD of matrix clause `clause`.
    Axiom { clause: usize },
    /// `L_left ∧ L_right`.
    Conj { left: usize, right: usize },
    /// `∃var. L_premise`.
    Proj { var: Var, premise: usize },
    /// An OBDD entailed by the conjunction of the premises, given explicitly.
    Entail { premises: Vec<usize>, claim: ObddBlock },
    /// `L_premise[var/value]` for a universal `var` rightmost in the premise.
    URed { var: Var, value: bool, premise: usize },
}

impl Rule {
    /// Lines this rule refers to.
    pub fn premises(&self) -> Vec<usize> {
        match self {
            Rule::Axiom { .. } => Vec::new(),
            Rule::Conj { left, right } => vec![*left, *right],
            Rule::Proj { premise, .. } | Rule::URed { premise, .. } => vec![*premise],
            Rule::Entail { premises, .. } => premises.clone(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ProofLine {
    pub id: usize,
    pub rule: Rule,
}

/// An OBDD derivation bound to a formula by its content hash.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ProofTrace {
    pub order: VarOrder,
    pub formula_hash: String,
    pub lines: Vec<ProofLine>,
}

impl ProofTrace {
    pub fn new(order: VarOrder, formula_hash: String) -> Self {
        ProofTrace {
            order,
            formula_hash,
            lines: Vec::new(),
        }
    }

    /// Appends a line and returns its id.
    pub fn push(&mut self, rule: Rule) -> usize {
        let id = self.lines.len() + 1;
        self.lines.push(ProofLine { id, rule });
        id
    }

    pub fn len(&self) -> usize {
        self.lines.len()
    }

    pub fn is_empty(&self) -> bool {
        self.lines.is_empty()
    }

    pub fn line(&self, id: usize) -> Option<&ProofLine> {
        id.checked_sub(1).and_then(|i| self.lines.get(i))
    }
}
