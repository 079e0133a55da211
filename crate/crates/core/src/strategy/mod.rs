//! Universal winning strategies as OBDD decision lists, read off refutations.

mod rect;
mod sat;
mod text;

pub use rect::{
    and_protocol_run, obdd_to_rectangles, to_rectangle_list, ProtocolRun, Rectangle, RectangleDecisionList,
};

use std::collections::HashSet;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use thiserror::Error;

use crate::error::ParseError;
use crate::obdd::{Manager, NodeRef, ObddError, Var, VarOrder};
use crate::pcnf::{Lit, Pcnf, Quant};
use crate::proof::{replay, CheckOptions, ProofTrace, Rejection, Rule};

pub const DEFAULT_EXHAUSTIVE_LIMIT: usize = 16;
pub const DEFAULT_SAMPLES: usize = 100_000;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum StrategyError {
    #[error("trace is not a refutation")]
    NotRefutation,
    #[error("trace rejected: {0}")]
    Rejected(Rejection),
    #[error("guard for universal {universal} depends on variable {var}, which is not to its left")]
    Dependency { universal: Var, var: Var },
    #[error("decision list for {0} does not end with the constant-1 guard")]
    MissingTerminal(Var),
    #[error("variable {0} is not a universal of the formula")]
    UnknownUniversal(Var),
    #[error("strategy does not cover universal {0}")]
    MissingUniversal(Var),
    #[error("{vars} variables exceed the enumeration limit of {limit}")]
    TooLarge { vars: usize, limit: usize },
    #[error("cut {cut} is not a prefix length of an order of {len} variables")]
    BadCut { cut: usize, len: usize },
    #[error("assignment covers {got} variables, partition side has {expected}")]
    PartitionMismatch { expected: usize, got: usize },
    #[error(transparent)]
    Obdd(#[from] ObddError),
    #[error(transparent)]
    Parse(#[from] ParseError),
}

/// `(guard, value)` pairs evaluated first-match; the last guard is the 1-sink.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DecisionList {
    pub entries: Vec<(NodeRef, bool)>,
}

impl DecisionList {
    /// Terminal-only list with value `c`.
    pub fn constant(mgr: &Manager, c: bool) -> DecisionList {
        DecisionList {
            entries: vec![(mgr.one(), c)],
        }
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    /// Value and index of the first guard satisfied by `a` (indexed by variable id).
    pub fn eval_indexed(&self, mgr: &Manager, a: &[bool]) -> (bool, usize) {
        for (i, &(g, c)) in self.entries.iter().enumerate() {
            if mgr.evaluate(g, a) {
                return (c, i);
            }
        }
        unreachable!("decision lists end with the constant-1 guard")
    }

    pub fn eval(&self, mgr: &Manager, a: &[bool]) -> bool {
        self.eval_indexed(mgr, a).0
    }

    /// Largest complete width among the guards.
    pub fn width(&self, mgr: &Manager) -> usize {
        self.entries
            .iter()
            .map(|&(g, _)| mgr.complete_width(g))
            .max()
            .unwrap_or(0)
    }

    /// Reduced size of each guard.
    pub fn guard_sizes(&self, mgr: &Manager) -> Vec<usize> {
        self.entries.iter().map(|&(g, _)| mgr.size(g)).collect()
    }
}

/// One decision list per universal variable, in prefix order, sharing a manager.
pub struct StrategyFamily {
    mgr: Manager,
    lists: Vec<(Var, DecisionList)>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum WinVerdict {
    Winning {
        assignments: u64,
        exhaustive: bool,
    },
    /// A full assignment consistent with the strategy that satisfies the matrix.
    Counterexample(Vec<bool>),
}

impl WinVerdict {
    pub fn is_winning(&self) -> bool {
        matches!(self, WinVerdict::Winning { .. })
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct VerifyOptions {
    /// Largest number of outer existential variables enumerated exhaustively.
    pub limit: usize,
    /// Sampled assignments when the limit is exceeded.
    pub samples: usize,
    pub seed: u64,
}

impl Default for VerifyOptions {
    fn default() -> Self {
        VerifyOptions {
            limit: DEFAULT_EXHAUSTIVE_LIMIT,
            samples: DEFAULT_SAMPLES,
            seed: 0,
        }
    }
}

/// Reads a strategy off an accepted refutation: every reduction
/// `L_i = L_j[u/c]` contributes `(¬L_i, c)` to the list of `u`, in order of
/// appearance, and each list is closed by `(1, 1)`.
pub fn extract(f: &Pcnf, t: &ProofTrace, opts: &CheckOptions) -> Result<StrategyFamily, StrategyError> {
    let r = replay(f, t, opts).map_err(StrategyError::Rejected)?;
    if !r.last().is_some_and(NodeRef::is_zero) {
        return Err(StrategyError::NotRefutation);
    }
    let mut mgr = r.manager;
    let universals = f.universal_vars();
    let mut lists: Vec<(Var, DecisionList)> = universals
        .iter()
        .map(|&u| (u, DecisionList { entries: Vec::new() }))
        .collect();
    for (line, &node) in t.lines.iter().zip(&r.nodes) {
        if let Rule::URed { var, value, .. } = line.rule {
            let slot = universals.iter().position(|&u| u == var).expect("checked universal");
            let guard = mgr.negate(node)?;
            lists[slot].1.entries.push((guard, value));
        }
    }
    let one = mgr.one();
    for (_, dl) in &mut lists {
        dl.entries.push((one, true));
    }
    Ok(StrategyFamily { mgr, lists })
}

impl StrategyFamily {
    /// Builds a family from explicit lists; universals must follow the prefix.
    pub fn new(mgr: Manager, lists: Vec<(Var, DecisionList)>) -> StrategyFamily {
        StrategyFamily { mgr, lists }
    }

    /// Every universal answers `c` regardless of the play.
    pub fn constant(f: &Pcnf, order: &VarOrder, c: bool) -> StrategyFamily {
        let mgr = Manager::new(order.clone());
        let lists = f
            .universal_vars()
            .into_iter()
            .map(|u| (u, DecisionList::constant(&mgr, c)))
            .collect();
        StrategyFamily { mgr, lists }
    }

    pub fn manager(&self) -> &Manager {
        &self.mgr
    }

    pub fn manager_mut(&mut self) -> &mut Manager {
        &mut self.mgr
    }

    pub fn lists(&self) -> &[(Var, DecisionList)] {
        &self.lists
    }

    pub fn list(&self, u: Var) -> Option<&DecisionList> {
        self.lists.iter().find(|(v, _)| *v == u).map(|(_, dl)| dl)
    }

    pub fn universals(&self) -> Vec<Var> {
        self.lists.iter().map(|&(u, _)| u).collect()
    }

    /// Largest guard width over all lists.
    pub fn width(&self) -> usize {
        self.lists.iter().map(|(_, dl)| dl.width(&self.mgr)).max().unwrap_or(0)
    }

    /// Checks that the lists cover exactly the universals of `f` in prefix
    /// order, end with the 1-sink, and only test variables left of their universal.
    pub fn audit(&self, f: &Pcnf) -> Result<(), StrategyError> {
        let universals = f.universal_vars();
        for &(u, _) in &self.lists {
            if !universals.contains(&u) {
                return Err(StrategyError::UnknownUniversal(u));
            }
        }
        for (i, &u) in universals.iter().enumerate() {
            if self.lists.get(i).map(|&(v, _)| v) != Some(u) {
                return Err(StrategyError::MissingUniversal(u));
            }
        }
        for (u, dl) in &self.lists {
            if dl.entries.last().is_none_or(|&(g, _)| !g.is_one()) {
                return Err(StrategyError::MissingTerminal(*u));
            }
            let pos = f.prefix_index(*u).unwrap();
            for &(g, _) in &dl.entries {
                if let Some(v) = self
                    .mgr
                    .support(g)
                    .into_iter()
                    .find(|&v| f.prefix_index(v).is_none_or(|p| p >= pos))
                {
                    return Err(StrategyError::Dependency { universal: *u, var: v });
                }
            }
        }
        Ok(())
    }

    /// Value of `f_u` under `a` (indexed by variable id).
    pub fn eval_list(&self, u: Var, a: &[bool]) -> Option<bool> {
        self.list(u).map(|dl| dl.eval(&self.mgr, a))
    }

    /// Fills in the universal variables of `tau` in prefix order.
    pub fn respond(&self, tau: &[bool]) -> Vec<bool> {
        let mut a = tau.to_vec();
        for (u, dl) in &self.lists {
            a[*u as usize] = dl.eval(&self.mgr, &a);
        }
        a
    }
}

/// Existentials left of the last universal (the strategy's inputs) and those right of it.
fn split_existentials(f: &Pcnf) -> (Vec<Var>, Vec<Var>) {
    let last_universal = f.prefix().iter().rposition(|&(q, _)| q == Quant::Forall);
    let mut outer = Vec::new();
    let mut inner = Vec::new();
    for (i, &(q, v)) in f.prefix().iter().enumerate() {
        if q == Quant::Exists {
            if last_universal.is_some_and(|l| i < l) {
                outer.push(v);
            } else {
                inner.push(v);
            }
        }
    }
    (outer, inner)
}

fn matrix(f: &Pcnf) -> Vec<Vec<Lit>> {
    f.clauses().iter().map(|c| c.lits().to_vec()).collect()
}

/// Checks that `tau ∪ fam(tau)` falsifies the matrix for every existential
/// assignment `tau`. Outer existentials are enumerated (or sampled past
/// `opts.limit`); the innermost existential block is decided by search.
pub fn verify_winning(f: &Pcnf, fam: &StrategyFamily, opts: &VerifyOptions) -> Result<WinVerdict, StrategyError> {
    fam.audit(f)?;
    let (outer, inner) = split_existentials(f);
    let clauses = matrix(f);
    let n = f.num_vars() as usize;
    let check = |bits: &dyn Fn(usize) -> bool| -> Option<Vec<bool>> {
        let mut tau = vec![false; n + 1];
        for (i, &v) in outer.iter().enumerate() {
            tau[v as usize] = bits(i);
        }
        let a = fam.respond(&tau);
        sat::complete(&clauses, &a, &inner)
    };
    if outer.len() <= opts.limit {
        let total = 1u64 << outer.len();
        for mask in 0..total {
            if let Some(cex) = check(&|i| mask >> i & 1 == 1) {
                return Ok(WinVerdict::Counterexample(cex));
            }
        }
        return Ok(WinVerdict::Winning {
            assignments: total,
            exhaustive: true,
        });
    }
    let mut rng = ChaCha8Rng::seed_from_u64(opts.seed);
    for _ in 0..opts.samples {
        let bits: Vec<bool> = (0..outer.len()).map(|_| rng.gen()).collect();
        if let Some(cex) = check(&|i| bits[i]) {
            return Ok(WinVerdict::Counterexample(cex));
        }
    }
    Ok(WinVerdict::Winning {
        assignments: opts.samples as u64,
        exhaustive: false,
    })
}

/// Number of distinct universal response vectors over all assignments of
/// the existentials the strategy can observe.
pub fn strategy_range_size(f: &Pcnf, fam: &StrategyFamily, limit: usize) -> Result<u64, StrategyError> {
    fam.audit(f)?;
    let (outer, _) = split_existentials(f);
    if outer.len() > limit {
        return Err(StrategyError::TooLarge {
            vars: outer.len(),
            limit,
        });
    }
    let universals = fam.universals();
    let mut seen: HashSet<Vec<bool>> = HashSet::new();
    let mut tau = vec![false; f.num_vars() as usize + 1];
    for mask in 0u64..1 << outer.len() {
        for (i, &v) in outer.iter().enumerate() {
            tau[v as usize] = mask >> i & 1 == 1;
        }
        let a = fam.respond(&tau);
        seen.insert(universals.iter().map(|&u| a[u as usize]).collect());
    }
    Ok(seen.len() as u64)
}
