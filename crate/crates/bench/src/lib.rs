//! Inputs shared by the criterion benchmarks in `benches/`.

use qobdd_core::obdd::{BinOp, Manager, NodeRef, VarOrder};
use qobdd_core::pcnf::{Family, Pcnf};
use qobdd_core::proof::ProofTrace;
use qobdd_core::solver::{solve, SolveOptions};

/// A family instance with its refutation under the decomposition order.
pub fn refuted(family: Family, n: usize) -> (Pcnf, ProofTrace) {
    let f = family.generate(n).expect("valid size");
    let r = solve(&f, &family.decomposition(n).order(), &SolveOptions::default()).expect("within budget");
    (f, r.trace.expect("trace requested"))
}

/// Inner product over `n` pairs, interleaved order `x1 y1 x2 y2 ...`.
pub fn inner_product(n: u32) -> (Manager, NodeRef) {
    let mut mgr = Manager::new(VarOrder::new((1..=2 * n).collect()).expect("distinct"));
    let mut acc = mgr.zero();
    for i in 0..n {
        let x = mgr.mk_var(2 * i + 1).expect("in order");
        let y = mgr.mk_var(2 * i + 2).expect("in order");
        let xy = mgr.and(x, y).expect("within budget");
        acc = mgr.apply(BinOp::XOR, acc, xy).expect("within budget");
    }
    (mgr, acc)
}
