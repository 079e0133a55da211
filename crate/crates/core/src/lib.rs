//! Symbolic QBF solving and proof tooling on ordered binary decision diagrams.
//!
//! * [`obdd`]: canonical OBDD manager (apply, restrict, quantification, completion).
//! * [`pcnf`]: PCNF formulas, QDIMACS, primal graphs, path decompositions, generators.
//! * [`proof`]: OBDD derivation traces, an independent checker, QU-Resolution translation.
//! * [`solver`]: bucket-elimination solver emitting traces.
//! * [`strategy`]: winning-strategy extraction, verification, rectangle decision lists.
//! * [`rectangles`]: monochromatic-rectangle oracle and graph inner product bounds.

pub mod error;
pub mod obdd;
pub mod partition;
pub mod pcnf;
pub mod proof;
pub mod rectangles;
pub mod solver;
pub mod strategy;

pub use error::ParseError;
pub use obdd::{BinOp, CompleteObdd, Manager, NodeRef, ObddBlock, ObddError, Var, VarOrder};
pub use partition::Partition;
pub use pcnf::{Clause, Graph, Lit, PathDecomposition, Pcnf, PcnfError, Quant};
pub use proof::{check_trace, CheckOptions, ProofLine, ProofTrace, RejectReason, Rule, Verdict};
pub use solver::{solve, SolveOptions, SolveResult, SolveStats};
pub use strategy::{extract, verify_winning, DecisionList, StrategyFamily, WinVerdict};
