//! Reduced ordered binary decision diagrams over one fixed variable order.
//!
//! A [`Manager`] owns a hash-consed node store. Every node is created through
//! [`Manager::mk_node`], which drops redundant tests and returns the already
//! stored node for a known `(var, lo, hi)` triple, so the store is reduced at
//! all times and two [`NodeRef`]s of one manager are equal exactly when they
//! denote the same Boolean function.
//!
//! There are no complement edges. Negation is a memoized sink swap.

use std::collections::{BTreeSet, HashMap, HashSet};
use std::sync::atomic::{AtomicU32, Ordering};

use thiserror::Error;

use crate::error::{Lines, ParseError};

/// Variable identifier, 1-based as in QDIMACS.
pub type Var = u32;

/// Default per-manager node budget.
pub const DEFAULT_NODE_BUDGET: usize = 10_000_000;

static NEXT_MANAGER_ID: AtomicU32 = AtomicU32::new(1);

const ZERO: u32 = 0;
const ONE: u32 = 1;
const SINK_LEVEL: u32 = u32::MAX;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum ObddError {
    #[error("variable {0} is not part of the variable order")]
    UnknownVar(Var),
    #[error("variable {0} occurs more than once in the order")]
    DuplicateVar(Var),
    #[error("variable {var} does not precede the variables of its children")]
    OrderViolation { var: Var },
    #[error("node reference belongs to a different manager")]
    ForeignRef,
    #[error("node budget of {0} nodes exhausted")]
    BudgetExceeded(usize),
    #[error("malformed obdd block: {0}")]
    MalformedBlock(String),
    #[error("structural audit failed: {0}")]
    Audit(String),
}

/// A variable order π together with its inverse.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct VarOrder {
    vars: Vec<Var>,
    position: Vec<u32>,
}

impl VarOrder {
    pub fn new(vars: Vec<Var>) -> Result<Self, ObddError> {
        let max = vars.iter().copied().max().unwrap_or(0) as usize;
        let mut position = vec![u32::MAX; max + 1];
        for (rank, &v) in vars.iter().enumerate() {
            if position[v as usize] != u32::MAX {
                return Err(ObddError::DuplicateVar(v));
            }
            position[v as usize] = rank as u32;
        }
        Ok(VarOrder { vars, position })
    }

    pub fn vars(&self) -> &[Var] {
        &self.vars
    }

    pub fn len(&self) -> usize {
        self.vars.len()
    }

    pub fn is_empty(&self) -> bool {
        self.vars.is_empty()
    }

    pub fn rank(&self, v: Var) -> Option<usize> {
        match self.position.get(v as usize) {
            Some(&p) if p != u32::MAX => Some(p as usize),
            _ => None,
        }
    }

    pub fn contains(&self, v: Var) -> bool {
        self.rank(v).is_some()
    }

    pub fn var_at(&self, rank: usize) -> Var {
        self.vars[rank]
    }
}

/// Handle to a node of one [`Manager`].
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct NodeRef {
    manager: u32,
    index: u32,
}

impl NodeRef {
    pub fn is_zero(self) -> bool {
        self.index == ZERO
    }

    pub fn is_one(self) -> bool {
        self.index == ONE
    }

    pub fn is_const(self) -> bool {
        self.index <= ONE
    }
}

/// A binary Boolean connective given by its truth table.
///
/// Bit `2a + b` of the table holds `op(a, b)`, so all 16 connectives are
/// `BinOp::from_table(0..16)`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct BinOp(u8);

impl BinOp {
    pub const AND: BinOp = BinOp(0b1000);
    pub const OR: BinOp = BinOp(0b1110);
    pub const XOR: BinOp = BinOp(0b0110);
    pub const XNOR: BinOp = BinOp(0b1001);
    pub const NAND: BinOp = BinOp(0b0111);
    pub const NOR: BinOp = BinOp(0b0001);
    /// `a → b`, i.e. `a ≤ b`.
    pub const IMP: BinOp = BinOp(0b1011);

    pub fn from_table(table: u8) -> BinOp {
        BinOp(table & 0xF)
    }

    pub fn table(self) -> u8 {
        self.0
    }

    pub fn all() -> impl Iterator<Item = BinOp> {
        (0u8..16).map(BinOp)
    }

    pub fn eval(self, a: bool, b: bool) -> bool {
        let idx = ((a as u8) << 1) | b as u8;
        (self.0 >> idx) & 1 == 1
    }

    fn is_commutative(self) -> bool {
        self.eval(false, true) == self.eval(true, false)
    }

    fn fix_left(self, a: bool) -> Unary {
        Unary::from_values(self.eval(a, false), self.eval(a, true))
    }

    fn fix_right(self, b: bool) -> Unary {
        Unary::from_values(self.eval(false, b), self.eval(true, b))
    }

    fn diagonal(self) -> Unary {
        Unary::from_values(self.eval(false, false), self.eval(true, true))
    }
}

#[derive(Clone, Copy)]
enum Unary {
    Const(bool),
    Identity,
    Negate,
}

impl Unary {
    fn from_values(at0: bool, at1: bool) -> Unary {
        match (at0, at1) {
            (false, true) => Unary::Identity,
            (true, false) => Unary::Negate,
            (v, _) => Unary::Const(v),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
struct Node {
    level: u32,
    lo: u32,
    hi: u32,
}

/// Canonical OBDD node store for a single variable order.
#[derive(Debug)]
pub struct Manager {
    id: u32,
    order: VarOrder,
    nodes: Vec<Node>,
    unique: HashMap<Node, u32>,
    apply_cache: HashMap<(u8, u32, u32), u32>,
    not_cache: HashMap<u32, u32>,
    budget: usize,
}

impl Manager {
    pub fn new(order: VarOrder) -> Self {
        Self::with_budget(order, DEFAULT_NODE_BUDGET)
    }

    pub fn with_budget(order: VarOrder, budget: usize) -> Self {
        let sink = Node {
            level: SINK_LEVEL,
            lo: 0,
            hi: 0,
        };
        Manager {
            id: NEXT_MANAGER_ID.fetch_add(1, Ordering::Relaxed),
            order,
            nodes: vec![sink, sink],
            unique: HashMap::new(),
            apply_cache: HashMap::new(),
            not_cache: HashMap::new(),
            budget,
        }
    }

    pub fn order(&self) -> &VarOrder {
        &self.order
    }

    pub fn budget(&self) -> usize {
        self.budget
    }

    /// Number of stored nodes, sinks included.
    pub fn node_count(&self) -> usize {
        self.nodes.len()
    }

    pub fn clear_caches(&mut self) {
        self.apply_cache.clear();
        self.not_cache.clear();
    }

    fn wrap(&self, index: u32) -> NodeRef {
        NodeRef {
            manager: self.id,
            index,
        }
    }

    fn own(&self, f: NodeRef) -> Result<u32, ObddError> {
        if f.manager != self.id || f.index as usize >= self.nodes.len() {
            return Err(ObddError::ForeignRef);
        }
        Ok(f.index)
    }

    pub fn owns(&self, f: NodeRef) -> bool {
        self.own(f).is_ok()
    }

    pub fn zero(&self) -> NodeRef {
        self.wrap(ZERO)
    }

    pub fn one(&self) -> NodeRef {
        self.wrap(ONE)
    }

    pub fn mk_const(&self, b: bool) -> NodeRef {
        self.wrap(b as u32)
    }

    /// Variable tested at the root of `f`, `None` for sinks.
    pub fn top_var(&self, f: NodeRef) -> Option<Var> {
        let n = self.nodes[f.index as usize];
        (n.level != SINK_LEVEL).then(|| self.order.var_at(n.level as usize))
    }

    /// `(lo, hi)` children of a decision node.
    pub fn children(&self, f: NodeRef) -> Option<(NodeRef, NodeRef)> {
        let n = self.nodes[f.index as usize];
        (n.level != SINK_LEVEL).then(|| (self.wrap(n.lo), self.wrap(n.hi)))
    }

    fn level(&self, idx: u32) -> u32 {
        self.nodes[idx as usize].level
    }

    fn mk_raw(&mut self, level: u32, lo: u32, hi: u32) -> Result<u32, ObddError> {
        if lo == hi {
            return Ok(lo);
        }
        let key = Node { level, lo, hi };
        if let Some(&idx) = self.unique.get(&key) {
            return Ok(idx);
        }
        if self.nodes.len() >= self.budget {
            return Err(ObddError::BudgetExceeded(self.budget));
        }
        let idx = self.nodes.len() as u32;
        self.nodes.push(key);
        self.unique.insert(key, idx);
        Ok(idx)
    }

    /// The unique node testing `var` with the given children.
    pub fn mk_node(&mut self, var: Var, lo: NodeRef, hi: NodeRef) -> Result<NodeRef, ObddError> {
        let level = self.order.rank(var).ok_or(ObddError::UnknownVar(var))? as u32;
        let (lo, hi) = (self.own(lo)?, self.own(hi)?);
        if self.level(lo) <= level || self.level(hi) <= level {
            return Err(ObddError::OrderViolation { var });
        }
        let idx = self.mk_raw(level, lo, hi)?;
        Ok(self.wrap(idx))
    }

    pub fn mk_var(&mut self, var: Var) -> Result<NodeRef, ObddError> {
        self.mk_literal(var, true)
    }

    pub fn mk_literal(&mut self, var: Var, positive: bool) -> Result<NodeRef, ObddError> {
        let (lo, hi) = if positive {
            (self.zero(), self.one())
        } else {
            (self.one(), self.zero())
        };
        self.mk_node(var, lo, hi)
    }

    /// OBDD of the disjunction of `(var, polarity)` literals; the empty clause is 0.
    ///
    /// Complementary literals yield the 1-sink.
    pub fn mk_clause<I>(&mut self, lits: I) -> Result<NodeRef, ObddError>
    where
        I: IntoIterator<Item = (Var, bool)>,
    {
        let mut ranked = Vec::new();
        for (v, pos) in lits {
            let r = self.order.rank(v).ok_or(ObddError::UnknownVar(v))?;
            ranked.push((r, pos));
        }
        ranked.sort_unstable();
        ranked.dedup();
        for w in ranked.windows(2) {
            if w[0].0 == w[1].0 {
                return Ok(self.one());
            }
        }
        let mut acc = ZERO;
        for &(rank, pos) in ranked.iter().rev() {
            acc = if pos {
                self.mk_raw(rank as u32, acc, ONE)?
            } else {
                self.mk_raw(rank as u32, ONE, acc)?
            };
        }
        Ok(self.wrap(acc))
    }

    pub fn apply(&mut self, op: BinOp, f: NodeRef, g: NodeRef) -> Result<NodeRef, ObddError> {
        let (f, g) = (self.own(f)?, self.own(g)?);
        let r = self.apply_rec(op, f, g)?;
        Ok(self.wrap(r))
    }

    pub fn and(&mut self, f: NodeRef, g: NodeRef) -> Result<NodeRef, ObddError> {
        self.apply(BinOp::AND, f, g)
    }

    pub fn or(&mut self, f: NodeRef, g: NodeRef) -> Result<NodeRef, ObddError> {
        self.apply(BinOp::OR, f, g)
    }

    fn unary(&mut self, u: Unary, x: u32) -> Result<u32, ObddError> {
        match u {
            Unary::Const(b) => Ok(b as u32),
            Unary::Identity => Ok(x),
            Unary::Negate => self.not_rec(x),
        }
    }

    fn apply_rec(&mut self, op: BinOp, f: u32, g: u32) -> Result<u32, ObddError> {
        if f <= ONE && g <= ONE {
            return Ok(op.eval(f == ONE, g == ONE) as u32);
        }
        if f <= ONE {
            return self.unary(op.fix_left(f == ONE), g);
        }
        if g <= ONE {
            return self.unary(op.fix_right(g == ONE), f);
        }
        if f == g {
            return self.unary(op.diagonal(), f);
        }
        let (f, g) = if op.is_commutative() && f > g { (g, f) } else { (f, g) };
        let key = (op.0, f, g);
        if let Some(&r) = self.apply_cache.get(&key) {
            return Ok(r);
        }
        let (nf, ng) = (self.nodes[f as usize], self.nodes[g as usize]);
        let top = nf.level.min(ng.level);
        let (f0, f1) = if nf.level == top { (nf.lo, nf.hi) } else { (f, f) };
        let (g0, g1) = if ng.level == top { (ng.lo, ng.hi) } else { (g, g) };
        let lo = self.apply_rec(op, f0, g0)?;
        let hi = self.apply_rec(op, f1, g1)?;
        let r = self.mk_raw(top, lo, hi)?;
        self.apply_cache.insert(key, r);
        Ok(r)
    }

    pub fn negate(&mut self, f: NodeRef) -> Result<NodeRef, ObddError> {
        let f = self.own(f)?;
        let r = self.not_rec(f)?;
        Ok(self.wrap(r))
    }

    fn not_rec(&mut self, f: u32) -> Result<u32, ObddError> {
        if f <= ONE {
            return Ok(f ^ 1);
        }
        if let Some(&r) = self.not_cache.get(&f) {
            return Ok(r);
        }
        let n = self.nodes[f as usize];
        let lo = self.not_rec(n.lo)?;
        let hi = self.not_rec(n.hi)?;
        let r = self.mk_raw(n.level, lo, hi)?;
        self.not_cache.insert(f, r);
        self.not_cache.insert(r, f);
        Ok(r)
    }

    /// `f[x/c]`. Variables outside the order or outside the support leave `f` unchanged.
    pub fn restrict(&mut self, f: NodeRef, x: Var, c: bool) -> Result<NodeRef, ObddError> {
        let f = self.own(f)?;
        let Some(level) = self.order.rank(x) else {
            return Ok(self.wrap(f));
        };
        let mut memo = HashMap::new();
        let r = self.restrict_rec(f, level as u32, c, &mut memo)?;
        Ok(self.wrap(r))
    }

    fn restrict_rec(&mut self, f: u32, level: u32, c: bool, memo: &mut HashMap<u32, u32>) -> Result<u32, ObddError> {
        let n = self.nodes[f as usize];
        if n.level > level {
            return Ok(f);
        }
        if n.level == level {
            return Ok(if c { n.hi } else { n.lo });
        }
        if let Some(&r) = memo.get(&f) {
            return Ok(r);
        }
        let lo = self.restrict_rec(n.lo, level, c, memo)?;
        let hi = self.restrict_rec(n.hi, level, c, memo)?;
        let r = self.mk_raw(n.level, lo, hi)?;
        memo.insert(f, r);
        Ok(r)
    }

    /// `∃x. f = f[x/0] ∨ f[x/1]`.
    pub fn exists(&mut self, f: NodeRef, x: Var) -> Result<NodeRef, ObddError> {
        let f0 = self.restrict(f, x, false)?;
        let f1 = self.restrict(f, x, true)?;
        self.apply(BinOp::OR, f0, f1)
    }

    /// `∀x. f = f[x/0] ∧ f[x/1]`.
    pub fn forall(&mut self, f: NodeRef, x: Var) -> Result<NodeRef, ObddError> {
        let f0 = self.restrict(f, x, false)?;
        let f1 = self.restrict(f, x, true)?;
        self.apply(BinOp::AND, f0, f1)
    }

    /// Quantifies a set of variables one at a time, innermost (last in π) first.
    pub fn exists_all(&mut self, f: NodeRef, vars: &[Var]) -> Result<NodeRef, ObddError> {
        let mut acc = f;
        for v in self.sorted_desc(vars) {
            acc = self.exists(acc, v)?;
        }
        Ok(acc)
    }

    pub fn forall_all(&mut self, f: NodeRef, vars: &[Var]) -> Result<NodeRef, ObddError> {
        let mut acc = f;
        for v in self.sorted_desc(vars) {
            acc = self.forall(acc, v)?;
        }
        Ok(acc)
    }

    fn sorted_desc(&self, vars: &[Var]) -> Vec<Var> {
        let mut vs: Vec<Var> = vars.iter().copied().filter(|&v| self.order.contains(v)).collect();
        vs.sort_by_key(|&v| std::cmp::Reverse(self.order.rank(v)));
        vs.dedup();
        vs
    }

    fn reachable(&self, f: u32) -> Vec<u32> {
        let mut seen = HashSet::new();
        let mut stack = vec![f];
        let mut out = Vec::new();
        while let Some(n) = stack.pop() {
            if !seen.insert(n) {
                continue;
            }
            out.push(n);
            if n > ONE {
                let node = self.nodes[n as usize];
                stack.push(node.lo);
                stack.push(node.hi);
            }
        }
        out
    }

    /// Number of nodes reachable from `f`, sinks included.
    pub fn size(&self, f: NodeRef) -> usize {
        self.reachable(f.index).len()
    }

    /// Variables tested somewhere in `f`.
    pub fn support(&self, f: NodeRef) -> BTreeSet<Var> {
        self.reachable(f.index)
            .into_iter()
            .filter(|&n| n > ONE)
            .map(|n| self.order.var_at(self.nodes[n as usize].level as usize))
            .collect()
    }

    /// Evaluates `f`; `a` is indexed by variable id.
    pub fn evaluate(&self, f: NodeRef, a: &[bool]) -> bool {
        self.evaluate_with(f, |v| a[v as usize])
    }

    pub fn evaluate_with(&self, f: NodeRef, mut value: impl FnMut(Var) -> bool) -> bool {
        let mut n = f.index;
        while n > ONE {
            let node = self.nodes[n as usize];
            let v = self.order.var_at(node.level as usize);
            n = if value(v) { node.hi } else { node.lo };
        }
        n == ONE
    }

    /// Checks that no node is redundant, no triple is stored twice and ranks
    /// strictly increase along every edge.
    pub fn audit(&self) -> Result<(), ObddError> {
        let mut seen = HashSet::new();
        for (i, n) in self.nodes.iter().enumerate().skip(2) {
            if n.lo == n.hi {
                return Err(ObddError::Audit(format!("node {i} has identical children")));
            }
            if self.level(n.lo) <= n.level || self.level(n.hi) <= n.level {
                return Err(ObddError::Audit(format!("node {i} violates the order")));
            }
            if !seen.insert(*n) {
                return Err(ObddError::Audit(format!("node {i} duplicates a stored triple")));
            }
        }
        Ok(())
    }

    /// The quasi-reduced complete OBDD of `f` over every variable of the order.
    pub fn complete(&self, f: NodeRef) -> CompleteObdd {
        let n = self.order.len();
        let mut layers: Vec<Vec<CompleteNode>> = Vec::with_capacity(n);
        let mut current: Vec<u32> = vec![f.index];
        for level in 0..n as u32 {
            let mut next: Vec<u32> = Vec::new();
            let mut slot: HashMap<u32, usize> = HashMap::new();
            let mut layer = Vec::with_capacity(current.len());
            for &func in &current {
                let node = self.nodes[func as usize];
                let (c0, c1) = if node.level == level {
                    (node.lo, node.hi)
                } else {
                    (func, func)
                };
                let mut place = |c: u32| {
                    *slot.entry(c).or_insert_with(|| {
                        next.push(c);
                        next.len() - 1
                    })
                };
                let lo = place(c0);
                let hi = place(c1);
                layer.push(CompleteNode {
                    func: self.wrap(func),
                    lo,
                    hi,
                });
            }
            layers.push(layer);
            current = next;
        }
        CompleteObdd {
            vars: self.order.vars().to_vec(),
            layers,
            bottom: current.into_iter().map(|s| self.wrap(s)).collect(),
        }
    }

    /// Width of the complete OBDD of `f`.
    pub fn complete_width(&self, f: NodeRef) -> usize {
        self.complete(f).width()
    }

    /// Block encoding of `f`: sinks first, then decision nodes in post-order.
    pub fn serialize(&self, f: NodeRef) -> ObddBlock {
        let mut index: HashMap<u32, usize> = HashMap::new();
        let mut nodes = Vec::new();
        let mut reach: Vec<u32> = self.reachable(f.index);
        reach.retain(|&n| n <= ONE);
        reach.sort_unstable();
        for s in reach {
            index.insert(s, nodes.len());
            nodes.push(BlockNode::Sink(s == ONE));
        }
        // iterative post-order, lo before hi
        let mut stack = vec![(f.index, false)];
        while let Some((n, expanded)) = stack.pop() {
            if index.contains_key(&n) {
                continue;
            }
            let node = self.nodes[n as usize];
            if expanded {
                nodes.push(BlockNode::Branch {
                    var: self.order.var_at(node.level as usize),
                    lo: index[&node.lo],
                    hi: index[&node.hi],
                });
                index.insert(n, nodes.len() - 1);
            } else {
                stack.push((n, true));
                stack.push((node.hi, false));
                stack.push((node.lo, false));
            }
        }
        ObddBlock { nodes }
    }

    /// Rebuilds a block in this manager; the result is the canonical node.
    pub fn deserialize(&mut self, block: &ObddBlock) -> Result<NodeRef, ObddError> {
        if block.nodes.is_empty() {
            return Err(ObddError::MalformedBlock("empty block".into()));
        }
        let mut refs: Vec<NodeRef> = Vec::with_capacity(block.nodes.len());
        for (i, node) in block.nodes.iter().enumerate() {
            let r = match *node {
                BlockNode::Sink(b) => self.mk_const(b),
                BlockNode::Branch { var, lo, hi } => {
                    if lo >= i || hi >= i {
                        return Err(ObddError::MalformedBlock(format!("node {i} references a later node")));
                    }
                    self.mk_node(var, refs[lo], refs[hi])?
                }
            };
            refs.push(r);
        }
        Ok(*refs.last().unwrap())
    }
}

/// One node of a [`CompleteObdd`] layer.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct CompleteNode {
    /// The reduced node computing the same subfunction.
    pub func: NodeRef,
    /// Index of the 0-child in the next layer (or in the sink layer).
    pub lo: usize,
    pub hi: usize,
}

/// An OBDD in which every root-to-sink path tests every variable in order.
#[derive(Debug, Clone)]
pub struct CompleteObdd {
    vars: Vec<Var>,
    layers: Vec<Vec<CompleteNode>>,
    bottom: Vec<NodeRef>,
}

impl CompleteObdd {
    pub fn vars(&self) -> &[Var] {
        &self.vars
    }

    /// Nodes labeled with the `level`-th variable.
    pub fn layer(&self, level: usize) -> &[CompleteNode] {
        &self.layers[level]
    }

    /// Sinks reached after the last variable.
    pub fn sinks(&self) -> &[NodeRef] {
        &self.bottom
    }

    pub fn num_layers(&self) -> usize {
        self.layers.len()
    }

    pub fn width(&self) -> usize {
        self.layers.iter().map(Vec::len).max().unwrap_or(0)
    }

    pub fn size(&self) -> usize {
        self.layers.iter().map(Vec::len).sum::<usize>() + self.bottom.len()
    }

    /// The subfunction (as a reduced node) at each position of `level`;
    /// `level == num_layers()` addresses the sink layer.
    pub fn functions_at(&self, level: usize) -> Vec<NodeRef> {
        if level == self.layers.len() {
            self.bottom.clone()
        } else {
            self.layers[level].iter().map(|n| n.func).collect()
        }
    }

    pub fn evaluate(&self, a: &[bool]) -> bool {
        let mut pos = 0usize;
        for (level, layer) in self.layers.iter().enumerate() {
            let node = layer[pos];
            pos = if a[self.vars[level] as usize] { node.hi } else { node.lo };
        }
        self.bottom[pos].is_one()
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum BlockNode {
    Sink(bool),
    Branch { var: Var, lo: usize, hi: usize },
}

/// Manager-independent OBDD encoding; children precede parents, the root is last.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ObddBlock {
    pub nodes: Vec<BlockNode>,
}

impl ObddBlock {
    pub fn to_text(&self) -> String {
        let mut out = String::new();
        self.write_text(&mut out);
        out
    }

    pub fn write_text(&self, out: &mut String) {
        use std::fmt::Write;
        let _ = writeln!(out, "obdd {}", self.nodes.len());
        for (i, n) in self.nodes.iter().enumerate() {
            let _ = match n {
                BlockNode::Sink(false) => writeln!(out, "{i} T0 - -"),
                BlockNode::Sink(true) => writeln!(out, "{i} T1 - -"),
                BlockNode::Branch { var, lo, hi } => writeln!(out, "{i} {var} {lo} {hi}"),
            };
        }
    }

    pub fn parse(text: &str) -> Result<ObddBlock, ParseError> {
        let mut lines = Lines::new(text, false);
        let block = Self::read(&mut lines)?;
        if let Some((n, _)) = lines.next_line()? {
            return Err(ParseError::syntax(n, "trailing content after obdd block"));
        }
        Ok(block)
    }

    pub(crate) fn read(lines: &mut Lines<'_>) -> Result<ObddBlock, ParseError> {
        let (ln, header) = lines.expect_line()?;
        let mut toks = header.split_whitespace();
        if toks.next() != Some("obdd") {
            return Err(ParseError::syntax(ln, "expected `obdd <k>`"));
        }
        let k: usize = parse_tok(ln, toks.next())?;
        if toks.next().is_some() {
            return Err(ParseError::syntax(ln, "trailing tokens after node count"));
        }
        if k == 0 {
            return Err(ParseError::syntax(ln, "obdd block must contain at least one node"));
        }
        let mut nodes = Vec::with_capacity(k);
        for i in 0..k {
            let (ln, line) = lines.expect_line()?;
            let toks: Vec<&str> = line.split_whitespace().collect();
            if toks.len() != 4 {
                return Err(ParseError::syntax(ln, "expected `<idx> <var|T0|T1> <lo> <hi>`"));
            }
            let idx: usize = parse_tok(ln, Some(toks[0]))?;
            if idx != i {
                return Err(ParseError::syntax(ln, format!("expected node index {i}")));
            }
            let node = match toks[1] {
                "T0" | "T1" => {
                    if toks[2] != "-" || toks[3] != "-" {
                        return Err(ParseError::syntax(ln, "sinks take `-` children"));
                    }
                    BlockNode::Sink(toks[1] == "T1")
                }
                v => {
                    let var: Var = parse_tok(ln, Some(v))?;
                    let lo: usize = parse_tok(ln, Some(toks[2]))?;
                    let hi: usize = parse_tok(ln, Some(toks[3]))?;
                    if lo >= i || hi >= i {
                        return Err(ParseError::syntax(ln, "children must precede their parent"));
                    }
                    BlockNode::Branch { var, lo, hi }
                }
            };
            nodes.push(node);
        }
        Ok(ObddBlock { nodes })
    }
}

pub(crate) fn parse_tok<T: std::str::FromStr>(line: usize, tok: Option<&str>) -> Result<T, ParseError> {
    let tok = tok.ok_or_else(|| ParseError::syntax(line, "missing token"))?;
    tok.parse()
        .map_err(|_| ParseError::syntax(line, format!("invalid token `{tok}`")))
}
