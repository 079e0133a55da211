use std::fmt::Write;

use super::{DecisionList, StrategyError, StrategyFamily};
use crate::error::{Lines, ParseError};
use crate::obdd::{parse_tok, Manager, ObddBlock, Var, VarOrder};

impl StrategyFamily {
    /// Strategy text:
    ///
    /// ```text
    /// p qobdd-strategy
    /// o <v1> ... <vn>
    /// u <var> <s>          then s times:
    /// entry <0|1>
    /// <obdd block>
    /// ```
    pub fn to_text(&self) -> String {
        let mut out = String::from("p qobdd-strategy\no");
        for v in self.mgr.order().vars() {
            let _ = write!(out, " {v}");
        }
        out.push('\n');
        for (u, dl) in &self.lists {
            let _ = writeln!(out, "u {u} {}", dl.len());
            for &(g, c) in &dl.entries {
                let _ = writeln!(out, "entry {}", c as u8);
                self.mgr.serialize(g).write_text(&mut out);
            }
        }
        out
    }

    pub fn parse(text: &str) -> Result<StrategyFamily, StrategyError> {
        let mut lines = Lines::new(text, true);
        let (ln, header) = lines.expect_line()?;
        if header.split_whitespace().collect::<Vec<_>>() != ["p", "qobdd-strategy"] {
            return Err(ParseError::syntax(ln, "expected `p qobdd-strategy`").into());
        }
        let (ln, order_line) = lines.expect_line()?;
        let mut toks = order_line.split_whitespace();
        if toks.next() != Some("o") {
            return Err(ParseError::syntax(ln, "expected `o <v1> ... <vn>`").into());
        }
        let vars: Vec<Var> = toks.map(|t| parse_tok(ln, Some(t))).collect::<Result<_, _>>()?;
        let order = VarOrder::new(vars).map_err(|e| ParseError::syntax(ln, e.to_string()))?;
        let mut mgr = Manager::new(order);
        let mut lists = Vec::new();
        while let Some((ln, line)) = lines.next_line()? {
            let toks: Vec<&str> = line.split_whitespace().collect();
            if toks.len() != 3 || toks[0] != "u" {
                return Err(ParseError::syntax(ln, "expected `u <var> <entries>`").into());
            }
            let u: Var = parse_tok(ln, Some(toks[1]))?;
            let s: usize = parse_tok(ln, Some(toks[2]))?;
            let mut entries = Vec::with_capacity(s);
            for _ in 0..s {
                let (ln, line) = lines.expect_line()?;
                let c = match line.split_whitespace().collect::<Vec<_>>().as_slice() {
                    ["entry", "0"] => false,
                    ["entry", "1"] => true,
                    _ => return Err(ParseError::syntax(ln, "expected `entry <0|1>`").into()),
                };
                let block = ObddBlock::read(&mut lines)?;
                entries.push((mgr.deserialize(&block)?, c));
            }
            if entries.last().is_none_or(|(g, _)| !g.is_one()) {
                return Err(StrategyError::MissingTerminal(u));
            }
            lists.push((u, DecisionList { entries }));
        }
        Ok(StrategyFamily { mgr, lists })
    }
}
