use std::collections::BTreeSet;
use std::fmt::Write;

use thiserror::Error;

use super::{ProofTrace, Rule};
use crate::error::{Lines, ParseError};
use crate::obdd::{parse_tok, Var, VarOrder};
use crate::pcnf::{Lit, Pcnf, Quant};

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum QuResStep {
    /// A matrix clause, given by its literals.
    Axiom(Vec<Lit>),
    /// Resolvent of lines `left` (pivot positive) and `right` (pivot negative).
    Resolve { left: usize, right: usize, pivot: Var },
    /// Removal of universal literal `lit` from line `premise`.
    Reduce { premise: usize, lit: Lit },
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum QuResError {
    #[error("line {0}: axiom is not a matrix clause")]
    NotAxiom(usize),
    #[error("line {0}: reference to a missing or later line")]
    BadReference(usize),
    #[error("line {line}: pivot {pivot} does not occur with the required polarities")]
    BadPivot { line: usize, pivot: Var },
    #[error("line {0}: resolvent is tautological")]
    Tautology(usize),
    #[error("line {line}: literal {lit} cannot be reduced")]
    BadReduction { line: usize, lit: Lit },
    #[error("proof does not end with the empty clause")]
    NotRefutation,
    #[error("variable {0} is not in the trace order")]
    OrderMismatch(Var),
}

/// A QU-Resolution proof; line `i` (1-based) is `steps[i - 1]`.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct QuResProof {
    pub steps: Vec<QuResStep>,
}

impl QuResProof {
    pub fn push(&mut self, step: QuResStep) -> usize {
        self.steps.push(step);
        self.steps.len()
    }

    /// One line per step: `<id> A <lits> 0`, `<id> R <j> <k> <pivot>`, `<id> U <j> <lit>`.
    pub fn to_text(&self) -> String {
        let mut out = String::new();
        for (i, step) in self.steps.iter().enumerate() {
            let id = i + 1;
            match step {
                QuResStep::Axiom(lits) => {
                    let _ = write!(out, "{id} A");
                    for l in lits {
                        let _ = write!(out, " {l}");
                    }
                    out.push_str(" 0\n");
                }
                QuResStep::Resolve { left, right, pivot } => {
                    let _ = writeln!(out, "{id} R {left} {right} {pivot}");
                }
                QuResStep::Reduce { premise, lit } => {
                    let _ = writeln!(out, "{id} U {premise} {lit}");
                }
            }
        }
        out
    }

    /// Clause derived by each line, validating every step against `f`.
    pub fn derive(&self, f: &Pcnf) -> Result<Vec<BTreeSet<Lit>>, QuResError> {
        let matrix: Vec<BTreeSet<Lit>> = f.clauses().iter().map(|c| c.lit_set()).collect();
        let mut derived: Vec<BTreeSet<Lit>> = Vec::with_capacity(self.steps.len());
        for (i, step) in self.steps.iter().enumerate() {
            let id = i + 1;
            let get = |j: usize| {
                if j == 0 || j >= id {
                    Err(QuResError::BadReference(id))
                } else {
                    Ok(&derived[j - 1])
                }
            };
            let clause = match step {
                QuResStep::Axiom(lits) => {
                    let set: BTreeSet<Lit> = lits.iter().copied().collect();
                    if !matrix.contains(&set) {
                        return Err(QuResError::NotAxiom(id));
                    }
                    set
                }
                QuResStep::Resolve { left, right, pivot } => {
                    let (a, b) = (get(*left)?, get(*right)?);
                    let (pos, neg) = (Lit::new(*pivot, true), Lit::new(*pivot, false));
                    if !a.contains(&pos) || !b.contains(&neg) {
                        return Err(QuResError::BadPivot {
                            line: id,
                            pivot: *pivot,
                        });
                    }
                    let res: BTreeSet<Lit> = a.iter().chain(b).copied().filter(|l| l.var() != *pivot).collect();
                    if res.iter().any(|l| res.contains(&l.negated())) {
                        return Err(QuResError::Tautology(id));
                    }
                    res
                }
                QuResStep::Reduce { premise, lit } => {
                    let c = get(*premise)?;
                    let bad = QuResError::BadReduction { line: id, lit: *lit };
                    if !c.contains(lit) || !f.is_universal(lit.var()) {
                        return Err(bad);
                    }
                    let pos = f.prefix_index(lit.var()).unwrap();
                    let blocked = c.iter().any(|l| {
                        f.quant(l.var()) == Some(Quant::Exists) && f.prefix_index(l.var()).is_some_and(|p| p > pos)
                    });
                    if blocked {
                        return Err(bad);
                    }
                    let mut c = c.clone();
                    c.remove(lit);
                    c
                }
            };
            derived.push(clause);
        }
        Ok(derived)
    }
}

/// Parses the QU-Resolution text format written by [`QuResProof::to_text`].
pub fn parse_qures(text: &str) -> Result<QuResProof, ParseError> {
    let mut lines = Lines::new(text, true);
    let mut proof = QuResProof::default();
    while let Some((ln, line)) = lines.next_line()? {
        if line.trim_start().starts_with('c') {
            continue;
        }
        let toks: Vec<&str> = line.split_whitespace().collect();
        if toks.len() < 2 {
            return Err(ParseError::syntax(ln, "expected `<id> <rule> ...`"));
        }
        let id: usize = parse_tok(ln, Some(toks[0]))?;
        if id != proof.steps.len() + 1 {
            return Err(ParseError::syntax(
                ln,
                format!("expected line id {}", proof.steps.len() + 1),
            ));
        }
        let args = &toks[2..];
        let lit = |t: &str| -> Result<Lit, ParseError> {
            Lit::from_dimacs(parse_tok(ln, Some(t))?).ok_or_else(|| ParseError::syntax(ln, "invalid literal"))
        };
        let step = match (toks[1], args.len()) {
            ("A", n) if n >= 1 => {
                if args[n - 1] != "0" {
                    return Err(ParseError::syntax(ln, "axiom literals must end with 0"));
                }
                QuResStep::Axiom(args[..n - 1].iter().map(|t| lit(t)).collect::<Result<_, _>>()?)
            }
            ("R", 3) => QuResStep::Resolve {
                left: parse_tok(ln, Some(args[0]))?,
                right: parse_tok(ln, Some(args[1]))?,
                pivot: parse_tok(ln, Some(args[2]))?,
            },
            ("U", 2) => QuResStep::Reduce {
                premise: parse_tok(ln, Some(args[0]))?,
                lit: lit(args[1])?,
            },
            _ => {
                return Err(ParseError::syntax(
                    ln,
                    "expected `A <lits> 0`, `R <j> <k> <pivot>` or `U <j> <lit>`",
                ))
            }
        };
        proof.steps.push(step);
    }
    Ok(proof)
}

/// Translates a QU-Resolution refutation of `f` into an OBDD refutation over
/// `order`.
///
/// Resolution becomes conjunction followed by projection of the pivot.
/// Reducing literal `l` of universal `u` becomes `URed(u, c)` with `c` the
/// constant falsifying `l`. Each trace line tracks a subclause of the
/// corresponding QU-Res clause, so universals right of `u` still present in
/// that subclause are reduced first.
pub fn simulate_qures(f: &Pcnf, p: &QuResProof, order: &VarOrder) -> Result<ProofTrace, QuResError> {
    let derived = p.derive(f)?;
    if derived.last().is_none_or(|c| !c.is_empty()) {
        return Err(QuResError::NotRefutation);
    }
    if let Some(v) = f.vars().into_iter().find(|&v| !order.contains(v)) {
        return Err(QuResError::OrderMismatch(v));
    }
    let mut trace = ProofTrace::new(order.clone(), f.content_hash());
    let matrix: Vec<BTreeSet<Lit>> = f.clauses().iter().map(|c| c.lit_set()).collect();
    for i in 0..matrix.len() {
        trace.push(Rule::Axiom { clause: i + 1 });
    }
    // (trace line, clause that line represents)
    let mut tracked: Vec<(usize, BTreeSet<Lit>)> = Vec::with_capacity(p.steps.len());
    for step in &p.steps {
        let entry = match step {
            QuResStep::Axiom(lits) => {
                let set: BTreeSet<Lit> = lits.iter().copied().collect();
                let idx = matrix.iter().position(|c| *c == set).expect("validated axiom");
                (idx + 1, set)
            }
            QuResStep::Resolve { left, right, pivot } => {
                let (a_line, a) = &tracked[left - 1];
                let (b_line, b) = &tracked[right - 1];
                if !a.contains(&Lit::new(*pivot, true)) {
                    (*a_line, a.clone())
                } else if !b.contains(&Lit::new(*pivot, false)) {
                    (*b_line, b.clone())
                } else {
                    let resolvent: BTreeSet<Lit> = a.iter().chain(b).copied().filter(|l| l.var() != *pivot).collect();
                    let conj = trace.push(Rule::Conj {
                        left: *a_line,
                        right: *b_line,
                    });
                    let proj = trace.push(Rule::Proj {
                        var: *pivot,
                        premise: conj,
                    });
                    (proj, resolvent)
                }
            }
            QuResStep::Reduce { premise, lit } => {
                let (mut line, clause) = tracked[premise - 1].clone();
                let mut clause = clause;
                if clause.contains(lit) {
                    let pos = f.prefix_index(lit.var()).unwrap();
                    let mut right: Vec<(usize, Lit)> = clause
                        .iter()
                        .filter_map(|&l| f.prefix_index(l.var()).filter(|&q| q > pos).map(|q| (q, l)))
                        .collect();
                    right.sort_unstable_by_key(|x| std::cmp::Reverse(x.0));
                    right.push((pos, *lit));
                    for (_, l) in right {
                        debug_assert!(f.is_universal(l.var()));
                        line = trace.push(Rule::URed {
                            var: l.var(),
                            value: !l.is_positive(),
                            premise: line,
                        });
                        clause.remove(&l);
                    }
                }
                (line, clause)
            }
        };
        tracked.push(entry);
    }
    let (final_line, _) = tracked.last().expect("non-empty proof");
    if *final_line != trace.len() {
        trace.push(Rule::Conj {
            left: *final_line,
            right: *final_line,
        });
    }
    Ok(trace)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::pcnf::parse_qdimacs;
    use crate::proof::{check_trace, CheckOptions};

    fn lits(vs: &[i32]) -> Vec<Lit> {
        vs.iter().map(|&v| Lit::from_dimacs(v).unwrap()).collect()
    }

    #[test]
    fn resolution_becomes_conj_and_proj() {
        // ∀u ∃x. (x ∨ u)(¬x ∨ u)(¬u)
        let f = parse_qdimacs("p cnf 2 3\na 1 0\ne 2 0\n2 1 0\n-2 1 0\n-1 0\n").unwrap();
        let mut p = QuResProof::default();
        p.push(QuResStep::Axiom(lits(&[2, 1])));
        p.push(QuResStep::Axiom(lits(&[-2, 1])));
        p.push(QuResStep::Resolve {
            left: 1,
            right: 2,
            pivot: 2,
        });
        p.push(QuResStep::Reduce {
            premise: 3,
            lit: Lit::new(1, true),
        });
        let order = VarOrder::new(vec![1, 2]).unwrap();
        let t = simulate_qures(&f, &p, &order).unwrap();
        let rules: Vec<&Rule> = t.lines.iter().map(|l| &l.rule).collect();
        assert_eq!(rules[3], &Rule::Conj { left: 1, right: 2 });
        assert_eq!(rules[4], &Rule::Proj { var: 2, premise: 4 });
        assert_eq!(
            rules[5],
            &Rule::URed {
                var: 1,
                value: false,
                premise: 5
            }
        );
        assert!(check_trace(&f, &t, &CheckOptions::default()).is_accepted_refutation());
    }

    #[test]
    fn invalid_steps_are_rejected() {
        let f = parse_qdimacs("p cnf 2 2\na 1 0\ne 2 0\n2 1 0\n-2 1 0\n").unwrap();
        let bad_axiom = QuResProof {
            steps: vec![QuResStep::Axiom(lits(&[1]))],
        };
        assert_eq!(bad_axiom.derive(&f), Err(QuResError::NotAxiom(1)));
        let blocked = QuResProof {
            steps: vec![
                QuResStep::Axiom(lits(&[2, 1])),
                QuResStep::Reduce {
                    premise: 1,
                    lit: Lit::new(1, true),
                },
            ],
        };
        assert!(matches!(blocked.derive(&f), Err(QuResError::BadReduction { .. })));
        let pivot = QuResProof {
            steps: vec![
                QuResStep::Axiom(lits(&[2, 1])),
                QuResStep::Axiom(lits(&[-2, 1])),
                QuResStep::Resolve {
                    left: 2,
                    right: 1,
                    pivot: 2,
                },
            ],
        };
        assert!(matches!(pivot.derive(&f), Err(QuResError::BadPivot { .. })));
        let forward = QuResProof {
            steps: vec![QuResStep::Resolve {
                left: 1,
                right: 2,
                pivot: 2,
            }],
        };
        assert_eq!(forward.derive(&f), Err(QuResError::BadReference(1)));
    }

    #[test]
    fn text_round_trip() {
        let text = "1 A 2 1 0\n2 A -2 1 0\n3 R 1 2 2\n4 U 3 1\n";
        let p = parse_qures(text).unwrap();
        assert_eq!(p.steps.len(), 4);
        assert_eq!(p.to_text(), text);
        assert!(parse_qures("1 A 2 1 0\n3 R 1 1 2\n").is_err());
        assert!(parse_qures("1 A 2 1 0").unwrap_err().is_eof());
    }
}
