use std::collections::BTreeSet;

use super::{Clause, Lit, Pcnf, PcnfError, Quant, Var};
use crate::error::ParseError;

/// Parses QDIMACS text.
///
/// Variables occurring in clauses without a quantifier are bound
/// existentially in an outermost block.
pub fn parse_qdimacs(text: &str) -> Result<Pcnf, PcnfError> {
    let mut header: Option<(u32, usize)> = None;
    let mut prefix: Vec<(Quant, Var)> = Vec::new();
    let mut clauses: Vec<Clause> = Vec::new();
    let mut pending: Vec<Lit> = Vec::new();
    let mut pending_line = 0;
    let mut last_line = 0;

    for (idx, raw) in text.lines().enumerate() {
        let ln = idx + 1;
        last_line = ln;
        let line = raw.trim();
        if line.is_empty() || line.starts_with('c') {
            continue;
        }
        let mut toks = line.split_whitespace();
        let first = toks.next().unwrap();
        if first == "p" {
            if header.is_some() {
                return Err(ParseError::syntax(ln, "duplicate problem line").into());
            }
            if toks.next() != Some("cnf") {
                return Err(ParseError::syntax(ln, "expected `p cnf <vars> <clauses>`").into());
            }
            let n: u32 = num(ln, toks.next())?;
            let m: usize = num(ln, toks.next())?;
            if toks.next().is_some() {
                return Err(ParseError::syntax(ln, "trailing tokens in problem line").into());
            }
            header = Some((n, m));
            continue;
        }
        let Some((n, _)) = header else {
            return Err(ParseError::syntax(ln, "content before problem line").into());
        };
        if first == "a" || first == "e" {
            if !clauses.is_empty() || !pending.is_empty() {
                return Err(ParseError::syntax(ln, "quantifier line after clauses").into());
            }
            let q = if first == "a" { Quant::Forall } else { Quant::Exists };
            let mut terminated = false;
            for tok in toks {
                if terminated {
                    return Err(ParseError::syntax(ln, "tokens after terminating 0").into());
                }
                let v: Var = num(ln, Some(tok))?;
                if v == 0 {
                    terminated = true;
                    continue;
                }
                if v > n {
                    return Err(PcnfError::VarOutOfRange(v));
                }
                prefix.push((q, v));
            }
            if !terminated {
                return Err(ParseError::syntax(ln, "quantifier line must end with 0").into());
            }
            continue;
        }
        for tok in std::iter::once(first).chain(toks) {
            let value: i32 = num(ln, Some(tok))?;
            if value == 0 {
                let clause = Clause::new(pending.drain(..)).ok_or(PcnfError::Tautology(clauses.len() + 1))?;
                clauses.push(clause);
                continue;
            }
            let lit = Lit::from_dimacs(value).ok_or_else(|| ParseError::syntax(ln, "invalid literal"))?;
            if lit.var() > n {
                return Err(PcnfError::VarOutOfRange(lit.var()));
            }
            if pending.is_empty() {
                pending_line = ln;
            }
            pending.push(lit);
        }
    }

    let Some((n, m)) = header else {
        return Err(ParseError::syntax(last_line, "missing problem line").into());
    };
    if !pending.is_empty() {
        return Err(ParseError::syntax(pending_line, "clause not terminated by 0").into());
    }
    if clauses.len() != m {
        return Err(ParseError::syntax(
            last_line,
            format!("header declares {m} clauses, found {}", clauses.len()),
        )
        .into());
    }

    let bound: BTreeSet<Var> = prefix.iter().map(|&(_, v)| v).collect();
    let free: BTreeSet<Var> = clauses
        .iter()
        .flat_map(|c| c.vars())
        .filter(|v| !bound.contains(v))
        .collect();
    if !free.is_empty() {
        let mut full: Vec<(Quant, Var)> = free.into_iter().map(|v| (Quant::Exists, v)).collect();
        full.extend(prefix);
        prefix = full;
    }
    Pcnf::new(n, prefix, clauses)
}

fn num<T: std::str::FromStr>(line: usize, tok: Option<&str>) -> Result<T, ParseError> {
    crate::obdd::parse_tok(line, tok)
}
