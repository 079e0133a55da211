//! Prenex CNF formulas, their primal graphs and path decompositions, and the
//! formula families used throughout the toolkit.

mod decomposition;
mod generators;
mod graph;
mod qdimacs;

use std::collections::BTreeSet;
use std::fmt;

use sha2::{Digest, Sha256};
use thiserror::Error;

pub use decomposition::{DecompositionError, PathDecomposition};
pub use generators::{
    eqprime_vars, gen_eqprime, gen_ipg_qbf, gen_quparity, quparity_vars, EqPrimeVars, Family, IpgFormula, QuParityVars,
};
pub use graph::{Graph, GraphError, EXPANSION_LIMIT};
pub use qdimacs::parse_qdimacs;

use crate::error::ParseError;
pub use crate::obdd::Var;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum PcnfError {
    #[error(transparent)]
    Parse(#[from] ParseError),
    #[error("variable {0} is quantified more than once")]
    DuplicateQuantifier(Var),
    #[error("variable {0} exceeds the declared variable count")]
    VarOutOfRange(Var),
    #[error("variable {0} occurs in the matrix but not in the prefix")]
    Unquantified(Var),
    #[error("clause {0} contains a variable in both polarities")]
    Tautology(usize),
    #[error("invalid parameter: {0}")]
    InvalidParameter(String),
}

/// A literal in DIMACS convention: the sign is the polarity.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Lit(i32);

impl Lit {
    pub fn new(var: Var, positive: bool) -> Lit {
        assert!(var > 0 && var <= i32::MAX as u32, "variable ids are positive");
        let v = var as i32;
        Lit(if positive { v } else { -v })
    }

    pub fn from_dimacs(value: i32) -> Option<Lit> {
        (value != 0 && value != i32::MIN).then_some(Lit(value))
    }

    pub fn to_dimacs(self) -> i32 {
        self.0
    }

    pub fn var(self) -> Var {
        self.0.unsigned_abs()
    }

    pub fn is_positive(self) -> bool {
        self.0 > 0
    }

    pub fn negated(self) -> Lit {
        Lit(-self.0)
    }

    /// Truth value under an assignment indexed by variable id.
    pub fn eval(self, a: &[bool]) -> bool {
        a[self.var() as usize] == self.is_positive()
    }
}

impl fmt::Display for Lit {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Quant {
    Exists,
    Forall,
}

impl Quant {
    pub fn symbol(self) -> char {
        match self {
            Quant::Exists => 'e',
            Quant::Forall => 'a',
        }
    }
}

/// A disjunction of literals without repeated or complementary literals.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Clause {
    lits: Vec<Lit>,
}

impl Clause {
    /// Drops repeated literals, keeping first occurrences; `None` for tautologies.
    pub fn new(lits: impl IntoIterator<Item = Lit>) -> Option<Clause> {
        let mut out: Vec<Lit> = Vec::new();
        for l in lits {
            if out.contains(&l.negated()) {
                return None;
            }
            if !out.contains(&l) {
                out.push(l);
            }
        }
        Some(Clause { lits: out })
    }

    pub fn lits(&self) -> &[Lit] {
        &self.lits
    }

    pub fn len(&self) -> usize {
        self.lits.len()
    }

    pub fn is_empty(&self) -> bool {
        self.lits.is_empty()
    }

    pub fn vars(&self) -> impl Iterator<Item = Var> + '_ {
        self.lits.iter().map(|l| l.var())
    }

    pub fn eval(&self, a: &[bool]) -> bool {
        self.lits.iter().any(|l| l.eval(a))
    }

    /// Literal set, for order-insensitive comparison.
    pub fn lit_set(&self) -> BTreeSet<Lit> {
        self.lits.iter().copied().collect()
    }
}

/// A QBF in prenex conjunctive normal form.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Pcnf {
    num_vars: u32,
    prefix: Vec<(Quant, Var)>,
    clauses: Vec<Clause>,
    position: Vec<Option<usize>>,
}

impl Pcnf {
    /// Validates that every prefix variable is bound once, lies within
    /// `num_vars`, and every matrix variable is bound.
    pub fn new(num_vars: u32, prefix: Vec<(Quant, Var)>, clauses: Vec<Clause>) -> Result<Pcnf, PcnfError> {
        let mut position = vec![None; num_vars as usize + 1];
        for (i, &(_, v)) in prefix.iter().enumerate() {
            if v == 0 || v > num_vars {
                return Err(PcnfError::VarOutOfRange(v));
            }
            if position[v as usize].is_some() {
                return Err(PcnfError::DuplicateQuantifier(v));
            }
            position[v as usize] = Some(i);
        }
        for c in &clauses {
            for v in c.vars() {
                if v > num_vars {
                    return Err(PcnfError::VarOutOfRange(v));
                }
                if position[v as usize].is_none() {
                    return Err(PcnfError::Unquantified(v));
                }
            }
        }
        Ok(Pcnf {
            num_vars,
            prefix,
            clauses,
            position,
        })
    }

    pub fn num_vars(&self) -> u32 {
        self.num_vars
    }

    pub fn prefix(&self) -> &[(Quant, Var)] {
        &self.prefix
    }

    pub fn clauses(&self) -> &[Clause] {
        &self.clauses
    }

    /// Quantified variables in prefix order.
    pub fn vars(&self) -> Vec<Var> {
        self.prefix.iter().map(|&(_, v)| v).collect()
    }

    pub fn prefix_index(&self, v: Var) -> Option<usize> {
        self.position.get(v as usize).copied().flatten()
    }

    pub fn quant(&self, v: Var) -> Option<Quant> {
        self.prefix_index(v).map(|i| self.prefix[i].0)
    }

    pub fn is_universal(&self, v: Var) -> bool {
        self.quant(v) == Some(Quant::Forall)
    }

    pub fn existential_vars(&self) -> Vec<Var> {
        self.prefix
            .iter()
            .filter(|(q, _)| *q == Quant::Exists)
            .map(|&(_, v)| v)
            .collect()
    }

    pub fn universal_vars(&self) -> Vec<Var> {
        self.prefix
            .iter()
            .filter(|(q, _)| *q == Quant::Forall)
            .map(|&(_, v)| v)
            .collect()
    }

    /// Variables left of `v` in the prefix.
    pub fn dependencies(&self, v: Var) -> &[(Quant, Var)] {
        match self.prefix_index(v) {
            Some(i) => &self.prefix[..i],
            None => &[],
        }
    }

    /// Number of maximal same-quantifier blocks.
    pub fn num_blocks(&self) -> usize {
        let mut blocks = 0;
        let mut last = None;
        for &(q, _) in &self.prefix {
            if Some(q) != last {
                blocks += 1;
                last = Some(q);
            }
        }
        blocks
    }

    /// The variable of `vars` that is rightmost in the prefix.
    pub fn rightmost<I: IntoIterator<Item = Var>>(&self, vars: I) -> Option<Var> {
        vars.into_iter()
            .filter_map(|v| self.prefix_index(v).map(|i| (i, v)))
            .max()
            .map(|(_, v)| v)
    }

    /// Evaluates the matrix under an assignment indexed by variable id.
    pub fn eval_matrix(&self, a: &[bool]) -> bool {
        self.clauses.iter().all(|c| c.eval(a))
    }

    /// Well-formedness audit: no tautological clauses, every matrix variable
    /// quantified exactly once.
    pub fn audit(&self) -> Result<(), PcnfError> {
        for (i, c) in self.clauses.iter().enumerate() {
            for l in c.lits() {
                if c.lits().contains(&l.negated()) {
                    return Err(PcnfError::Tautology(i + 1));
                }
                if self.prefix_index(l.var()).is_none() {
                    return Err(PcnfError::Unquantified(l.var()));
                }
            }
        }
        let mut seen = BTreeSet::new();
        for &(_, v) in &self.prefix {
            if !seen.insert(v) {
                return Err(PcnfError::DuplicateQuantifier(v));
            }
        }
        Ok(())
    }

    /// Canonical QDIMACS text: adjacent same-quantifier variables share a line.
    pub fn to_qdimacs(&self) -> String {
        use std::fmt::Write;
        let mut out = String::new();
        let _ = writeln!(out, "p cnf {} {}", self.num_vars, self.clauses.len());
        let mut i = 0;
        while i < self.prefix.len() {
            let q = self.prefix[i].0;
            out.push(q.symbol());
            while i < self.prefix.len() && self.prefix[i].0 == q {
                let _ = write!(out, " {}", self.prefix[i].1);
                i += 1;
            }
            out.push_str(" 0\n");
        }
        for c in &self.clauses {
            for l in c.lits() {
                let _ = write!(out, "{l} ");
            }
            out.push_str("0\n");
        }
        out
    }

    /// SHA-256 (hex) of the canonical QDIMACS emission.
    pub fn content_hash(&self) -> String {
        hex::encode(Sha256::digest(self.to_qdimacs().as_bytes()))
    }

    /// Graph on the quantified variables linking variables that share a clause.
    pub fn primal_graph(&self) -> Graph {
        let mut g = Graph::new();
        for &(_, v) in &self.prefix {
            g.add_vertex(v);
        }
        for c in &self.clauses {
            let vs: Vec<Var> = c.vars().collect();
            for (i, &a) in vs.iter().enumerate() {
                for &b in &vs[i + 1..] {
                    g.add_edge(a, b).expect("clauses have no repeated variables");
                }
            }
        }
        g
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn clause_normalization() {
        let c = Clause::new([Lit::new(1, true), Lit::new(2, false), Lit::new(1, true)]).unwrap();
        assert_eq!(c.len(), 2);
        assert!(Clause::new([Lit::new(1, true), Lit::new(1, false)]).is_none());
        assert_eq!(Lit::from_dimacs(-4).unwrap().var(), 4);
        assert!(Lit::from_dimacs(0).is_none());
    }

    #[test]
    fn pcnf_validation() {
        let c = Clause::new([Lit::new(3, true)]).unwrap();
        assert_eq!(
            Pcnf::new(3, vec![(Quant::Exists, 1)], vec![c.clone()]),
            Err(PcnfError::Unquantified(3))
        );
        assert_eq!(
            Pcnf::new(2, vec![(Quant::Exists, 1), (Quant::Forall, 1)], vec![]),
            Err(PcnfError::DuplicateQuantifier(1))
        );
        assert_eq!(
            Pcnf::new(2, vec![(Quant::Exists, 3)], vec![]),
            Err(PcnfError::VarOutOfRange(3))
        );
    }

    #[test]
    fn blocks_and_rightmost() {
        let f = Pcnf::new(
            4,
            vec![
                (Quant::Exists, 1),
                (Quant::Exists, 2),
                (Quant::Forall, 3),
                (Quant::Exists, 4),
            ],
            vec![],
        )
        .unwrap();
        assert_eq!(f.num_blocks(), 3);
        assert_eq!(f.rightmost([1, 3]), Some(3));
        assert_eq!(f.rightmost([]), None);
        assert_eq!(f.dependencies(3).len(), 2);
    }

    #[test]
    fn primal_graph_of_single_clause_is_triangle() {
        let c = Clause::new([Lit::new(1, true), Lit::new(2, false), Lit::new(3, true)]).unwrap();
        let f = Pcnf::new(3, (1..=3).map(|v| (Quant::Exists, v)).collect(), vec![c]).unwrap();
        let g = f.primal_graph();
        assert_eq!(g.num_edges(), 3);
        let empty = Pcnf::new(3, (1..=3).map(|v| (Quant::Exists, v)).collect(), vec![]).unwrap();
        assert_eq!(empty.primal_graph().num_edges(), 0);
        assert_eq!(empty.primal_graph().num_vertices(), 3);
    }
}
