//! Small DPLL used to decide the innermost existential block.

use crate::pcnf::{Lit, Var};

/// Extends `base` (indexed by variable id) over `free` so that every clause
/// holds, or returns `None`. Variables outside `free` keep their values.
pub(crate) fn complete(clauses: &[Vec<Lit>], base: &[bool], free: &[Var]) -> Option<Vec<bool>> {
    let mut value: Vec<Option<bool>> = base.iter().map(|&b| Some(b)).collect();
    for &v in free {
        value[v as usize] = None;
    }
    let mut open: Vec<Vec<Lit>> = Vec::new();
    for c in clauses {
        if c.iter().any(|l| value[l.var() as usize] == Some(l.is_positive())) {
            continue;
        }
        let rest: Vec<Lit> = c
            .iter()
            .copied()
            .filter(|l| value[l.var() as usize].is_none())
            .collect();
        if rest.is_empty() {
            return None;
        }
        open.push(rest);
    }
    if dpll(&open, &mut value) {
        Some(value.into_iter().map(|v| v.unwrap_or(false)).collect())
    } else {
        None
    }
}

fn dpll(clauses: &[Vec<Lit>], value: &mut Vec<Option<bool>>) -> bool {
    let mut trail: Vec<Var> = Vec::new();
    // unit propagation to fixpoint
    loop {
        let mut unit = None;
        for c in clauses {
            let mut unassigned = None;
            let mut count = 0;
            let mut sat = false;
            for &l in c {
                match value[l.var() as usize] {
                    Some(b) if b == l.is_positive() => {
                        sat = true;
                        break;
                    }
                    Some(_) => {}
                    None => {
                        count += 1;
                        unassigned = Some(l);
                    }
                }
            }
            if sat {
                continue;
            }
            if count == 0 {
                undo(value, &trail);
                return false;
            }
            if count == 1 {
                unit = unassigned;
                break;
            }
        }
        match unit {
            Some(l) => {
                value[l.var() as usize] = Some(l.is_positive());
                trail.push(l.var());
            }
            None => break,
        }
    }
    let branch = clauses.iter().find_map(|c| {
        if c.iter().any(|l| value[l.var() as usize] == Some(l.is_positive())) {
            return None;
        }
        c.iter().find(|l| value[l.var() as usize].is_none()).copied()
    });
    let Some(l) = branch else {
        return true;
    };
    for b in [l.is_positive(), !l.is_positive()] {
        value[l.var() as usize] = Some(b);
        if dpll(clauses, value) {
            return true;
        }
    }
    value[l.var() as usize] = None;
    undo(value, &trail);
    false
}

fn undo(value: &mut [Option<bool>], trail: &[Var]) {
    for &v in trail {
        value[v as usize] = None;
    }
}
