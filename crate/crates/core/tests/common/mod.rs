//! Independent oracles shared by the integration tests. Nothing here calls
//! into the OBDD engine.
#![allow(dead_code)]

use qobdd_core::pcnf::{Clause, Lit, Pcnf, Quant};
use rand::seq::SliceRandom;
use rand::Rng;

/// Game-tree value of `f`: branch on the prefix left to right, evaluate the
/// matrix at the leaves.
pub fn qbf_value(f: &Pcnf) -> bool {
    let mut a = vec![false; f.num_vars() as usize + 1];
    game(f, 0, &mut a)
}

fn game(f: &Pcnf, depth: usize, a: &mut Vec<bool>) -> bool {
    if let Some(&(q, v)) = f.prefix().get(depth) {
        let branch = |b: bool, a: &mut Vec<bool>| {
            a[v as usize] = b;
            game(f, depth + 1, a)
        };
        match q {
            Quant::Exists => branch(false, a) || branch(true, a),
            Quant::Forall => branch(false, a) && branch(true, a),
        }
    } else {
        f.clauses()
            .iter()
            .all(|c| c.lits().iter().any(|l| a[l.var() as usize] == l.is_positive()))
    }
}

/// Value of `Q. ⋀ lines` where each line is given as a predicate over full
/// assignments (indexed by variable id).
pub fn qbf_value_of(f: &Pcnf, matrix: &dyn Fn(&[bool]) -> bool) -> bool {
    fn go(f: &Pcnf, depth: usize, a: &mut Vec<bool>, m: &dyn Fn(&[bool]) -> bool) -> bool {
        match f.prefix().get(depth) {
            None => m(a),
            Some(&(q, v)) => {
                a[v as usize] = false;
                let lo = go(f, depth + 1, a, m);
                if (q == Quant::Exists && lo) || (q == Quant::Forall && !lo) {
                    return lo;
                }
                a[v as usize] = true;
                go(f, depth + 1, a, m)
            }
        }
    }
    let mut a = vec![false; f.num_vars() as usize + 1];
    go(f, 0, &mut a, matrix)
}

/// Random PCNF over `1..=n` with `blocks` alternating quantifier blocks and
/// up to `max_clauses` clauses of width 1..=4.
pub fn random_pcnf(rng: &mut impl Rng, n: u32, max_clauses: usize, blocks: usize) -> Pcnf {
    let mut vars: Vec<u32> = (1..=n).collect();
    vars.shuffle(rng);
    let first = if rng.gen() { Quant::Exists } else { Quant::Forall };
    let mut cuts: Vec<usize> = (1..n as usize).collect();
    cuts.shuffle(rng);
    let mut cuts: Vec<usize> = cuts.into_iter().take(blocks.saturating_sub(1)).collect();
    cuts.sort_unstable();
    let mut prefix = Vec::new();
    let mut q = first;
    for (i, &v) in vars.iter().enumerate() {
        if cuts.contains(&i) {
            q = if q == Quant::Exists {
                Quant::Forall
            } else {
                Quant::Exists
            };
        }
        prefix.push((q, v));
    }
    let m = rng.gen_range(1..=max_clauses);
    let mut clauses = Vec::new();
    while clauses.len() < m {
        let width = rng.gen_range(1..=4.min(n as usize));
        let mut vs: Vec<u32> = (1..=n).collect();
        vs.shuffle(rng);
        let lits = vs[..width].iter().map(|&v| Lit::new(v, rng.gen()));
        clauses.push(Clause::new(lits).unwrap());
    }
    Pcnf::new(n, prefix, clauses).unwrap()
}

/// Every assignment of variables `1..=n`, as vectors indexed by variable id.
pub fn assignments(n: usize) -> impl Iterator<Item = Vec<bool>> {
    (0u64..1 << n).map(move |m| (0..=n).map(|v| v > 0 && m >> (v - 1) & 1 == 1).collect())
}

/// Truth table (indexed by the bits of the assignment) of a predicate on `n` variables.
pub fn table(n: usize, f: impl Fn(&[bool]) -> bool) -> Vec<bool> {
    assignments(n).map(|a| f(&a)).collect()
}

/// Largest monochromatic rectangle by enumerating every row subset and every
/// column subset.
pub fn naive_max_rectangle(m: &[Vec<bool>]) -> u64 {
    let (nr, nc) = (m.len(), m[0].len());
    let mut best = 0;
    for rows in 1u64..1 << nr {
        for cols in 1u64..1 << nc {
            let cells = (0..nr)
                .filter(|r| rows >> r & 1 == 1)
                .flat_map(|r| (0..nc).filter(move |c| cols >> c & 1 == 1).map(move |c| m[r][c]));
            let mut cells = cells.peekable();
            let first = *cells.peek().unwrap();
            if cells.all(|b| b == first) {
                best = best.max((rows.count_ones() * cols.count_ones()) as u64);
            }
        }
    }
    best
}

use qobdd_core::obdd::{Manager, NodeRef, Var};
use qobdd_core::pcnf::parse_qdimacs;
use qobdd_core::proof::{parse_qures, QuResProof};

/// OBDD of a truth table over variables `1..=n` (bit `v-1` of the index is
/// variable `v`), built by Shannon expansion along the manager's order.
pub fn build(mgr: &mut Manager, n: usize, table: &[bool]) -> NodeRef {
    fn go(mgr: &mut Manager, level: usize, mask: usize, n: usize, table: &[bool]) -> NodeRef {
        if level == mgr.order().len() {
            return mgr.mk_const(table[mask]);
        }
        let v: Var = mgr.order().var_at(level);
        if v as usize > n {
            return go(mgr, level + 1, mask, n, table);
        }
        let lo = go(mgr, level + 1, mask, n, table);
        let hi = go(mgr, level + 1, mask | 1 << (v - 1), n, table);
        mgr.mk_node(v, lo, hi).unwrap()
    }
    go(mgr, 0, 0, n, table)
}

/// Hand-built QU-Resolution refutations: `(name, qdimacs, proof)`.
pub fn qures_fixtures() -> Vec<(&'static str, qobdd_core::Pcnf, QuResProof)> {
    let raw = [
        (
            // both resolvents meet on the universal pivot u
            "all-four-clauses",
            "p cnf 2 4\na 1 0\ne 2 0\n1 2 0\n1 -2 0\n-1 2 0\n-1 -2 0\n",
            "1 A 1 2 0\n2 A 1 -2 0\n3 R 1 2 2\n4 A -1 2 0\n5 A -1 -2 0\n6 R 4 5 2\n7 R 3 6 1\n",
        ),
        (
            "universal-pivot",
            "p cnf 2 3\na 1 0\ne 2 0\n1 2 0\n-1 2 0\n-2 0\n",
            "1 A 1 2 0\n2 A -1 2 0\n3 A -2 0\n4 R 1 2 1\n5 R 4 3 2\n",
        ),
        (
            "equality-gadget",
            "p cnf 3 3\ne 1 0\na 2 0\ne 3 0\n1 2 -3 0\n-1 -2 -3 0\n3 0\n",
            "1 A 1 2 -3 0\n2 A -1 -2 -3 0\n3 A 3 0\n4 R 3 1 3\n5 U 4 2\n6 R 3 2 3\n7 U 6 -2\n8 R 5 7 1\n",
        ),
    ];
    raw.iter()
        .map(|&(name, f, p)| (name, parse_qdimacs(f).unwrap(), parse_qures(p).unwrap()))
        .collect()
}
