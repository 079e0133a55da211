//! Graph inner product, an exact maximum monochromatic rectangle oracle,
//! and the induced-matching bound on rectangle size.

use std::collections::BTreeSet;

use thiserror::Error;

use crate::obdd::Var;
use crate::partition::Partition;
use crate::pcnf::Graph;

/// Largest number of variables on one side of a [`TruthTable`].
pub const SIDE_LIMIT: usize = 16;
/// Largest total number of variables of a [`TruthTable`].
pub const TABLE_LIMIT: usize = 24;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum RectError {
    #[error("table with sides {left}|{right} exceeds the limits ({SIDE_LIMIT} per side, {TABLE_LIMIT} total)")]
    TooLarge { left: usize, right: usize },
    #[error("assignment does not cover variable {0}")]
    Uncovered(Var),
    #[error("edge {0}-{1} is not a matching edge crossing the partition")]
    NotCrossing(Var, Var),
    #[error("per-edge form disagrees with direct evaluation on edge {0}-{1}")]
    FormMismatch(Var, Var),
}

/// `⊕_{uv ∈ E} a(u)·a(v)` for `a` indexed by vertex id.
pub fn eval_ipg(g: &Graph, a: &[bool]) -> bool {
    g.edges()
        .into_iter()
        .fold(false, |acc, (u, v)| acc ^ (a[u as usize] && a[v as usize]))
}

/// The perfect matching `{2i-1, 2i}` for `i = 1..=n`; its inner product is the classical one.
pub fn matching_graph(n: usize) -> Graph {
    Graph::from_edges((1..=n as Var).map(|i| (2 * i - 1, 2 * i))).expect("no self-loops")
}

/// Odd vertices on the left, even vertices on the right.
pub fn pair_partition(g: &Graph) -> Partition {
    let (left, right): (Vec<Var>, Vec<Var>) = g.vertices().partition(|v| v % 2 == 1);
    Partition::new(left, right).expect("sides are disjoint")
}

/// Communication matrix of a function under a variable split: row `r`
/// assigns bit `j` of `r` to `rows[j]`, column `c` likewise for `cols`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TruthTable {
    rows: Vec<Var>,
    cols: Vec<Var>,
    words: usize,
    bits: Vec<u64>,
}

impl TruthTable {
    pub fn from_fn(rows: Vec<Var>, cols: Vec<Var>, f: impl Fn(&[bool]) -> bool) -> Result<TruthTable, RectError> {
        if rows.len() > SIDE_LIMIT || cols.len() > SIDE_LIMIT || rows.len() + cols.len() > TABLE_LIMIT {
            return Err(RectError::TooLarge {
                left: rows.len(),
                right: cols.len(),
            });
        }
        let top = rows.iter().chain(&cols).copied().max().unwrap_or(0) as usize;
        let (nr, nc) = (1usize << rows.len(), 1usize << cols.len());
        let words = nc.div_ceil(64);
        let mut bits = vec![0u64; nr * words];
        let mut a = vec![false; top + 1];
        for r in 0..nr {
            for (j, &v) in rows.iter().enumerate() {
                a[v as usize] = r >> j & 1 == 1;
            }
            for c in 0..nc {
                for (j, &v) in cols.iter().enumerate() {
                    a[v as usize] = c >> j & 1 == 1;
                }
                if f(&a) {
                    bits[r * words + c / 64] |= 1 << (c % 64);
                }
            }
        }
        Ok(TruthTable {
            rows,
            cols,
            words,
            bits,
        })
    }

    /// Table of `IP_G` under `part`.
    pub fn ipg(g: &Graph, part: &Partition) -> Result<TruthTable, RectError> {
        Self::from_fn(part.left().to_vec(), part.right().to_vec(), |a| eval_ipg(g, a))
    }

    pub fn row_vars(&self) -> &[Var] {
        &self.rows
    }

    pub fn col_vars(&self) -> &[Var] {
        &self.cols
    }

    pub fn num_rows(&self) -> usize {
        1 << self.rows.len()
    }

    pub fn num_cols(&self) -> usize {
        1 << self.cols.len()
    }

    pub fn get(&self, r: usize, c: usize) -> bool {
        self.bits[r * self.words + c / 64] >> (c % 64) & 1 == 1
    }

    pub fn transpose(&self) -> TruthTable {
        let (nr, nc) = (self.num_rows(), self.num_cols());
        let words = nr.div_ceil(64);
        let mut bits = vec![0u64; nc * words];
        for r in 0..nr {
            for c in 0..nc {
                if self.get(r, c) {
                    bits[c * words + r / 64] |= 1 << (r % 64);
                }
            }
        }
        TruthTable {
            rows: self.cols.clone(),
            cols: self.rows.clone(),
            words,
            bits,
        }
    }

    /// Column set of row `r` holding `color`.
    fn row_set(&self, r: usize, color: bool) -> Vec<u64> {
        let nc = self.num_cols();
        let mut out: Vec<u64> = self.bits[r * self.words..(r + 1) * self.words].to_vec();
        if !color {
            for w in &mut out {
                *w = !*w;
            }
        }
        mask_tail(&mut out, nc);
        out
    }
}

fn mask_tail(set: &mut [u64], len: usize) {
    if !len.is_multiple_of(64) {
        if let Some(last) = set.last_mut() {
            *last &= (1u64 << (len % 64)) - 1;
        }
    }
}

fn count(set: &[u64]) -> u64 {
    set.iter().map(|w| w.count_ones() as u64).sum()
}

fn members(set: &[u64]) -> Vec<usize> {
    let mut out = Vec::new();
    for (i, &w) in set.iter().enumerate() {
        let mut w = w;
        while w != 0 {
            out.push(i * 64 + w.trailing_zeros() as usize);
            w &= w - 1;
        }
    }
    out
}

fn contains(set: &[u64], i: usize) -> bool {
    set[i / 64] >> (i % 64) & 1 == 1
}

/// A largest monochromatic rectangle: row and column indices of the table.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MonoRect {
    pub size: u64,
    pub color: bool,
    pub rows: Vec<usize>,
    pub cols: Vec<usize>,
}

struct Search<'a> {
    sets: &'a [Vec<u64>],
    nrows: usize,
    best: u64,
    witness: (Vec<u64>, Vec<u64>),
}

impl Search<'_> {
    /// Rows whose set contains all of `cols`.
    fn closure(&self, cols: &[u64]) -> Vec<u64> {
        let mut rows = vec![0u64; self.nrows.div_ceil(64)];
        for (r, set) in self.sets.iter().enumerate() {
            if set.iter().zip(cols).all(|(s, c)| c & !s == 0) {
                rows[r / 64] |= 1 << (r % 64);
            }
        }
        rows
    }

    fn record(&mut self, rows: &[u64], cols: &[u64]) {
        let size = count(rows) * count(cols);
        if size > self.best {
            self.best = size;
            self.witness = (rows.to_vec(), cols.to_vec());
        }
    }

    // closed-set enumeration over rows, each closed set visited once
    fn expand(&mut self, rows: &[u64], cols: &[u64], start: usize) {
        self.record(rows, cols);
        for j in start..self.nrows {
            if contains(rows, j) {
                continue;
            }
            let next_cols: Vec<u64> = cols.iter().zip(&self.sets[j]).map(|(a, b)| a & b).collect();
            let width = count(&next_cols);
            if width == 0 {
                continue;
            }
            let next_rows = self.closure(&next_cols);
            let canonical = (0..j).all(|r| contains(&next_rows, r) == contains(rows, r));
            if !canonical {
                continue;
            }
            let ceiling = (count(&next_rows) + (self.nrows - j - 1) as u64) * width;
            if ceiling <= self.best {
                continue;
            }
            self.expand(&next_rows, &next_cols, j + 1);
        }
    }
}

/// Exact maximum `|A|·|B|` over monochromatic rectangles `A × B` of the table.
pub fn max_mono_rectangle(tt: &TruthTable) -> MonoRect {
    let transposed = tt.num_rows() > tt.num_cols();
    let table = if transposed { tt.transpose() } else { tt.clone() };
    let (nr, nc) = (table.num_rows(), table.num_cols());
    let mut best = MonoRect {
        size: 0,
        color: false,
        rows: Vec::new(),
        cols: Vec::new(),
    };
    for color in [false, true] {
        let sets: Vec<Vec<u64>> = (0..nr).map(|r| table.row_set(r, color)).collect();
        let mut all = vec![u64::MAX; nc.div_ceil(64)];
        mask_tail(&mut all, nc);
        let mut search = Search {
            sets: &sets,
            nrows: nr,
            best: 0,
            witness: (Vec::new(), Vec::new()),
        };
        let start_rows = search.closure(&all);
        search.expand(&start_rows, &all, 0);
        if search.best > best.size {
            let (rows, cols) = (members(&search.witness.0), members(&search.witness.1));
            best = MonoRect {
                size: search.best,
                color,
                rows,
                cols,
            };
        }
    }
    if transposed {
        std::mem::swap(&mut best.rows, &mut best.cols);
    }
    best
}

/// A set of pairwise disjoint edges `(x, y)` with `x ∈ X₁`, `y ∈ X₂`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Matching {
    pub edges: Vec<(Var, Var)>,
}

impl Matching {
    pub fn len(&self) -> usize {
        self.edges.len()
    }

    pub fn is_empty(&self) -> bool {
        self.edges.is_empty()
    }

    /// Edges of `g`, disjoint, and no edge of `g` joins endpoints of two different edges.
    pub fn is_induced(&self, g: &Graph) -> bool {
        let mut ends = BTreeSet::new();
        for &(x, y) in &self.edges {
            if !g.has_edge(x, y) || !ends.insert(x) || !ends.insert(y) {
                return false;
            }
        }
        self.edges.iter().enumerate().all(|(i, &(a, b))| {
            self.edges[i + 1..]
                .iter()
                .all(|&(c, d)| !g.has_edge(a, c) && !g.has_edge(a, d) && !g.has_edge(b, c) && !g.has_edge(b, d))
        })
    }

    pub fn crosses(&self, part: &Partition) -> bool {
        self.edges
            .iter()
            .all(|&(x, y)| part.side_of(x) == Some(0) && part.side_of(y) == Some(1))
    }
}

/// Greedy cross-partition induced matching: repeatedly match the lowest
/// remaining `x ∈ X₁` having a remaining neighbour in `X₂` to its lowest such
/// neighbour `y`, then delete `N[x] ∪ N[y]`.
pub fn induced_matching(g: &Graph, part: &Partition) -> Matching {
    let mut alive: BTreeSet<Var> = g.vertices().collect();
    let mut left: Vec<Var> = part.left().to_vec();
    left.sort_unstable();
    let mut edges = Vec::new();
    for &x in &left {
        if !alive.contains(&x) {
            continue;
        }
        let y = g
            .neighbors(x)
            .filter(|w| alive.contains(w) && part.side_of(*w) == Some(1))
            .min();
        let Some(y) = y else {
            continue;
        };
        edges.push((x, y));
        for v in [x, y] {
            alive.remove(&v);
            for w in g.neighbors(v) {
                alive.remove(&w);
            }
        }
    }
    Matching { edges }
}

/// What a matching edge contributes to `IP_G` once the unmatched vertices are fixed.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum EdgeForm {
    And,
    NotXAndY,
    XAndNotY,
    Or,
}

impl EdgeForm {
    pub fn eval(self, x: bool, y: bool) -> bool {
        match self {
            EdgeForm::And => x && y,
            EdgeForm::NotXAndY => !x && y,
            EdgeForm::XAndNotY => x && !y,
            EdgeForm::Or => x || y,
        }
    }

    pub const ALL: [EdgeForm; 4] = [EdgeForm::And, EdgeForm::NotXAndY, EdgeForm::XAndNotY, EdgeForm::Or];
}

/// Per-edge form of each matching edge under an assignment `a` of the
/// unmatched vertices, chosen from the parities of the outside neighbours of
/// each endpoint and checked against the direct edge-parity count.
pub fn gi_decomposition(g: &Graph, m: &Matching, a: &[bool]) -> Result<Vec<EdgeForm>, RectError> {
    let matched: BTreeSet<Var> = m.edges.iter().flat_map(|&(x, y)| [x, y]).collect();
    for v in g.vertices().filter(|v| !matched.contains(v)) {
        if v as usize >= a.len() {
            return Err(RectError::Uncovered(v));
        }
    }
    let mut forms = Vec::with_capacity(m.len());
    for &(x, y) in &m.edges {
        if !g.has_edge(x, y) {
            return Err(RectError::NotCrossing(x, y));
        }
        let outside = |v: Var, other: Var| g.neighbors(v).filter(|&w| w != other).collect::<Vec<_>>();
        let (nx, ny) = (outside(x, y), outside(y, x));
        let value = |w: Var| !matched.contains(&w) && a[w as usize];
        let parity = |ns: &[Var]| ns.iter().filter(|&&w| value(w)).count() % 2 == 1;
        let form = match (parity(&nx), parity(&ny)) {
            (false, false) => EdgeForm::And,
            (true, false) => EdgeForm::XAndNotY,
            (false, true) => EdgeForm::NotXAndY,
            (true, true) => EdgeForm::Or,
        };
        for (bx, by) in [(false, false), (false, true), (true, false), (true, true)] {
            let direct = (bx && by)
                ^ (bx && nx.iter().filter(|&&w| value(w)).count() % 2 == 1)
                ^ (by && ny.iter().filter(|&&w| value(w)).count() % 2 == 1);
            if direct != form.eval(bx, by) {
                return Err(RectError::FormMismatch(x, y));
            }
        }
        forms.push(form);
    }
    Ok(forms)
}

/// Induced-matching bound check for `IP_G` under `part`.
#[derive(Debug, Clone, PartialEq)]
pub struct RectReport {
    pub n: usize,
    pub m: usize,
    /// `2^(n-m)`.
    pub bound: u64,
    pub oracle_max: u64,
    pub witness: MonoRect,
    pub matching: Matching,
    pub balance: f64,
}

impl RectReport {
    pub fn holds(&self) -> bool {
        self.oracle_max <= self.bound
    }
}

pub fn check_rectanglesmall(g: &Graph, part: &Partition) -> Result<RectReport, RectError> {
    let tt = TruthTable::ipg(g, part)?;
    let matching = induced_matching(g, part);
    let witness = max_mono_rectangle(&tt);
    let n = g.num_vertices();
    Ok(RectReport {
        n,
        m: matching.len(),
        bound: 1u64 << (n - matching.len()),
        oracle_max: witness.size,
        witness,
        matching,
        balance: part.balance(),
    })
}

/// Protocol length forced by a largest monochromatic rectangle of size
/// `max_rect` on `num_vars` variables: `2^num_vars / (4e · max_rect)`.
pub fn protocol_length_lower_bound(num_vars: usize, max_rect: u64) -> f64 {
    2f64.powi(num_vars as i32) / (4.0 * std::f64::consts::E * max_rect as f64)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn ipg_values() {
        let g = matching_graph(1);
        assert!(eval_ipg(&g, &[false, true, true]));
        assert!(!eval_ipg(&g, &[false, false, true]));
    }

    #[test]
    fn single_pair_inner_product() {
        let g = matching_graph(1);
        let tt = TruthTable::ipg(&g, &pair_partition(&g)).unwrap();
        let r = max_mono_rectangle(&tt);
        assert_eq!(r.size, 2);
        assert!(!r.color);
    }

    #[test]
    fn constant_function_is_one_rectangle() {
        let tt = TruthTable::from_fn(vec![1, 2], vec![3], |_| false).unwrap();
        assert_eq!(max_mono_rectangle(&tt).size, 8);
    }

    #[test]
    fn witness_is_monochromatic() {
        let g = Graph::from_edges([(1, 2), (2, 3), (3, 4), (1, 4), (1, 5)]).unwrap();
        let part = Partition::new(vec![1, 3, 5], vec![2, 4]).unwrap();
        let tt = TruthTable::ipg(&g, &part).unwrap();
        let r = max_mono_rectangle(&tt);
        assert_eq!(r.size, (r.rows.len() * r.cols.len()) as u64);
        for &i in &r.rows {
            for &j in &r.cols {
                assert_eq!(tt.get(i, j), r.color);
            }
        }
    }

    #[test]
    fn matchings() {
        let edge = Graph::from_edges([(1, 2)]).unwrap();
        let m = induced_matching(&edge, &Partition::new(vec![1], vec![2]).unwrap());
        assert_eq!(m.edges, vec![(1, 2)]);
        let c4 = Graph::from_edges([(1, 2), (2, 3), (3, 4), (4, 1)]).unwrap();
        let part = Partition::new(vec![1, 3], vec![2, 4]).unwrap();
        let m = induced_matching(&c4, &part);
        assert_eq!(m.len(), 1);
        assert!(m.is_induced(&c4) && m.crosses(&part));
    }

    #[test]
    fn edge_forms() {
        // path 1-2-3 matched on (2, 3): x = 2 sees vertex 1
        let g = Graph::from_edges([(1, 2), (2, 3)]).unwrap();
        let m = Matching { edges: vec![(2, 3)] };
        assert_eq!(
            gi_decomposition(&g, &m, &[false, true, false, false]).unwrap(),
            vec![EdgeForm::XAndNotY]
        );
        assert_eq!(
            gi_decomposition(&g, &m, &[false, false, false, false]).unwrap(),
            vec![EdgeForm::And]
        );
        // 4-vertex path 1-2-3-4 matched on (2, 3): both endpoints see a 1
        let p4 = Graph::from_edges([(1, 2), (2, 3), (3, 4)]).unwrap();
        assert_eq!(
            gi_decomposition(&p4, &m, &[false, true, false, false, true]).unwrap(),
            vec![EdgeForm::Or]
        );
        assert_eq!(gi_decomposition(&p4, &m, &[false, true]), Err(RectError::Uncovered(4)));
    }

    #[test]
    fn edgeless_graph_has_trivial_bound() {
        let mut g = Graph::new();
        g.add_vertex(1);
        g.add_vertex(2);
        let r = check_rectanglesmall(&g, &Partition::new(vec![1], vec![2]).unwrap()).unwrap();
        assert_eq!((r.m, r.bound, r.oracle_max), (0, 4, 4));
    }
}
