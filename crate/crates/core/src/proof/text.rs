use std::fmt::Write;

use super::{ProofLine, ProofTrace, Rule};
use crate::error::{Lines, ParseError};
use crate::obdd::{parse_tok, ObddBlock, Var, VarOrder};

impl ProofTrace {
    /// Trace text:
    ///
    /// ```text
    /// p qobdd-trace <nvars> <nlines>
    /// h <formula-sha256>
    /// o <v1> ... <vn>
    /// <id> A <clause>  |  <id> C <j> <k>  |  <id> P <var> <j>
    /// <id> U <var> <0|1> <j>  |  <id> E <j1> ... <jk> 0  followed by an obdd block
    /// ```
    pub fn to_text(&self) -> String {
        let mut out = String::new();
        let _ = writeln!(out, "p qobdd-trace {} {}", self.order.len(), self.lines.len());
        let _ = writeln!(out, "h {}", self.formula_hash);
        out.push('o');
        for v in self.order.vars() {
            let _ = write!(out, " {v}");
        }
        out.push('\n');
        for line in &self.lines {
            let id = line.id;
            match &line.rule {
                Rule::Axiom { clause } => {
                    let _ = writeln!(out, "{id} A {clause}");
                }
                Rule::Conj { left, right } => {
                    let _ = writeln!(out, "{id} C {left} {right}");
                }
                Rule::Proj { var, premise } => {
                    let _ = writeln!(out, "{id} P {var} {premise}");
                }
                Rule::URed { var, value, premise } => {
                    let _ = writeln!(out, "{id} U {var} {} {premise}", *value as u8);
                }
                Rule::Entail { premises, claim } => {
                    let _ = write!(out, "{id} E");
                    for p in premises {
                        let _ = write!(out, " {p}");
                    }
                    out.push_str(" 0\n");
                    claim.write_text(&mut out);
                }
            }
        }
        out
    }

    /// Parses trace text. A file ending before the declared number of lines,
    /// or whose last line lacks its newline, is reported as end of input.
    pub fn parse(text: &str) -> Result<ProofTrace, ParseError> {
        let mut lines = Lines::new(text, true);
        let (ln, header) = lines.expect_line()?;
        let toks: Vec<&str> = header.split_whitespace().collect();
        if toks.len() != 4 || toks[0] != "p" || toks[1] != "qobdd-trace" {
            return Err(ParseError::syntax(ln, "expected `p qobdd-trace <nvars> <nlines>`"));
        }
        let nvars: usize = parse_tok(ln, Some(toks[2]))?;
        let nlines: usize = parse_tok(ln, Some(toks[3]))?;

        let (ln, hash_line) = lines.expect_line()?;
        let toks: Vec<&str> = hash_line.split_whitespace().collect();
        if toks.len() != 2 || toks[0] != "h" {
            return Err(ParseError::syntax(ln, "expected `h <formula-sha256>`"));
        }
        let formula_hash = toks[1].to_string();

        let (ln, order_line) = lines.expect_line()?;
        let mut toks = order_line.split_whitespace();
        if toks.next() != Some("o") {
            return Err(ParseError::syntax(ln, "expected `o <v1> ... <vn>`"));
        }
        let vars: Vec<Var> = toks.map(|t| parse_tok(ln, Some(t))).collect::<Result<_, _>>()?;
        if vars.len() != nvars {
            return Err(ParseError::syntax(
                ln,
                format!("order lists {} of {nvars} variables", vars.len()),
            ));
        }
        let order = VarOrder::new(vars).map_err(|e| ParseError::syntax(ln, e.to_string()))?;

        let mut trace = ProofTrace::new(order, formula_hash);
        for expected in 1..=nlines {
            let (ln, line) = lines.expect_line()?;
            let toks: Vec<&str> = line.split_whitespace().collect();
            if toks.len() < 2 {
                return Err(ParseError::syntax(ln, "expected `<id> <rule> ...`"));
            }
            let id: usize = parse_tok(ln, Some(toks[0]))?;
            if id != expected {
                return Err(ParseError::syntax(ln, format!("expected line id {expected}")));
            }
            let args = &toks[2..];
            let arity = |n: usize| {
                if args.len() == n {
                    Ok(())
                } else {
                    Err(ParseError::syntax(ln, format!("rule {} takes {n} arguments", toks[1])))
                }
            };
            let rule = match toks[1] {
                "A" => {
                    arity(1)?;
                    Rule::Axiom {
                        clause: parse_tok(ln, Some(args[0]))?,
                    }
                }
                "C" => {
                    arity(2)?;
                    Rule::Conj {
                        left: parse_tok(ln, Some(args[0]))?,
                        right: parse_tok(ln, Some(args[1]))?,
                    }
                }
                "P" => {
                    arity(2)?;
                    Rule::Proj {
                        var: parse_tok(ln, Some(args[0]))?,
                        premise: parse_tok(ln, Some(args[1]))?,
                    }
                }
                "U" => {
                    arity(3)?;
                    let value = match args[1] {
                        "0" => false,
                        "1" => true,
                        _ => return Err(ParseError::syntax(ln, "reduction constant must be 0 or 1")),
                    };
                    Rule::URed {
                        var: parse_tok(ln, Some(args[0]))?,
                        value,
                        premise: parse_tok(ln, Some(args[2]))?,
                    }
                }
                "E" => {
                    if args.last() != Some(&"0") {
                        return Err(ParseError::syntax(ln, "entailment premises must end with 0"));
                    }
                    let premises = args[..args.len() - 1]
                        .iter()
                        .map(|t| parse_tok(ln, Some(t)))
                        .collect::<Result<Vec<usize>, _>>()?;
                    if premises.contains(&0) {
                        return Err(ParseError::syntax(ln, "line ids are positive"));
                    }
                    let claim = ObddBlock::read(&mut lines)?;
                    Rule::Entail { premises, claim }
                }
                other => return Err(ParseError::syntax(ln, format!("unknown rule `{other}`"))),
            };
            trace.lines.push(ProofLine { id, rule });
        }
        if let Some((ln, _)) = lines.next_line()? {
            return Err(ParseError::syntax(ln, "content after the declared lines"));
        }
        Ok(trace)
    }
}
