use std::collections::{BTreeMap, BTreeSet, HashMap};

use thiserror::Error;

use super::{Graph, Var};
use crate::obdd::VarOrder;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum DecompositionError {
    #[error("vertex {0} is in no bag")]
    UncoveredVertex(Var),
    #[error("edge {0}-{1} is in no bag")]
    UncoveredEdge(Var, Var),
    #[error("bags containing vertex {0} are not contiguous")]
    Disconnected(Var),
}

/// A sequence of bags `λ(p_1), …, λ(p_n)`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PathDecomposition {
    bags: Vec<BTreeSet<Var>>,
}

impl PathDecomposition {
    pub fn new(bags: Vec<BTreeSet<Var>>) -> Self {
        PathDecomposition { bags }
    }

    pub fn bags(&self) -> &[BTreeSet<Var>] {
        &self.bags
    }

    /// Largest bag size minus one.
    pub fn width(&self) -> usize {
        self.bags.iter().map(BTreeSet::len).max().unwrap_or(0).saturating_sub(1)
    }

    /// Checks vertex coverage, edge coverage and contiguity of each vertex's bags.
    pub fn validate(&self, g: &Graph) -> Result<(), DecompositionError> {
        let mut span: HashMap<Var, (usize, usize, usize)> = HashMap::new();
        for (i, bag) in self.bags.iter().enumerate() {
            for &v in bag {
                let e = span.entry(v).or_insert((i, i, 0));
                e.1 = i;
                e.2 += 1;
            }
        }
        for v in g.vertices() {
            if !span.contains_key(&v) {
                return Err(DecompositionError::UncoveredVertex(v));
            }
        }
        for (&v, &(first, last, count)) in &span {
            if last - first + 1 != count {
                return Err(DecompositionError::Disconnected(v));
            }
        }
        for (u, v) in g.edges() {
            let (a, b) = (span[&u], span[&v]);
            if a.1 < b.0 || b.1 < a.0 {
                return Err(DecompositionError::UncoveredEdge(u, v));
            }
        }
        Ok(())
    }

    /// Orders variables by the index of the first bag containing them, ties
    /// by ascending id.
    pub fn order(&self) -> VarOrder {
        let mut seen = BTreeSet::new();
        let mut vars = Vec::new();
        for bag in &self.bags {
            for &v in bag {
                if seen.insert(v) {
                    vars.push(v);
                }
            }
        }
        VarOrder::new(vars).expect("first occurrences are distinct")
    }

    /// Bags of a linear vertex layout: position `i` holds its vertex plus all
    /// earlier vertices that still have a neighbour at position `i` or later.
    pub fn from_layout(g: &Graph, layout: &[Var]) -> PathDecomposition {
        let pos: HashMap<Var, usize> = layout.iter().enumerate().map(|(i, &v)| (v, i)).collect();
        let last_needed: HashMap<Var, usize> = layout
            .iter()
            .map(|&v| {
                let reach = g.neighbors(v).map(|w| pos[&w]).max().unwrap_or(0);
                (v, reach.max(pos[&v]))
            })
            .collect();
        let mut bags = Vec::with_capacity(layout.len());
        let mut active: BTreeSet<Var> = BTreeSet::new();
        for (i, &v) in layout.iter().enumerate() {
            active.retain(|u| last_needed[u] >= i);
            active.insert(v);
            bags.push(active.clone());
        }
        PathDecomposition { bags }
    }

    /// Heuristic decomposition: the better of a greedy frontier layout and a
    /// min-fill elimination layout.
    pub fn heuristic(g: &Graph) -> PathDecomposition {
        let a = Self::from_layout(g, &greedy_frontier_layout(g));
        let b = Self::from_layout(g, &min_fill_layout(g));
        if b.width() < a.width() {
            b
        } else {
            a
        }
    }

    /// Width-4 decomposition of the parity family over `x_1..x_n, z_1, z_2, t_2..t_n`.
    pub fn quparity(n: usize) -> PathDecomposition {
        let v = super::quparity_vars(n);
        let mut bags = vec![BTreeSet::from([v.x(1), v.x(2), v.t(2), v.z1(), v.z2()])];
        for i in 2..n {
            bags.push(BTreeSet::from([v.t(i), v.x(i + 1), v.t(i + 1), v.z1(), v.z2()]));
        }
        bags.push(BTreeSet::from([v.z1(), v.z2(), v.t(n)]));
        PathDecomposition { bags }
    }

    /// Width-4 decomposition of the split equality family.
    pub fn eqprime(n: usize) -> PathDecomposition {
        let v = super::eqprime_vars(n);
        let mut bags = vec![BTreeSet::from([v.x(1), v.u(1), v.t(1), v.e(1)])];
        for i in 2..n {
            bags.push(BTreeSet::from([v.e(i - 1), v.x(i), v.u(i), v.t(i), v.e(i)]));
        }
        bags.push(BTreeSet::from([v.e(n - 1), v.x(n), v.u(n), v.t(n)]));
        PathDecomposition { bags }
    }
}

fn greedy_frontier_layout(g: &Graph) -> Vec<Var> {
    let verts: Vec<Var> = g.vertices().collect();
    let mut unplaced_deg: BTreeMap<Var, usize> = verts.iter().map(|&v| (v, g.degree(v))).collect();
    let mut placed: BTreeSet<Var> = BTreeSet::new();
    let mut frontier: BTreeSet<Var> = BTreeSet::new();
    let mut layout = Vec::with_capacity(verts.len());
    while layout.len() < verts.len() {
        let mut best: Option<(usize, usize, Var)> = None;
        for &v in &verts {
            if placed.contains(&v) {
                continue;
            }
            let closes = g
                .neighbors(v)
                .filter(|w| frontier.contains(w) && unplaced_deg[w] == 1)
                .count();
            let stays = usize::from(unplaced_deg[&v] > 0);
            let cost = frontier.len() + stays - closes;
            // prefer vertices touching the frontier, then low id
            let detached = usize::from(!g.neighbors(v).any(|w| frontier.contains(&w)));
            let key = (cost, detached, v);
            if best.is_none_or(|b| key < b) {
                best = Some(key);
            }
        }
        let (_, _, v) = best.unwrap();
        placed.insert(v);
        layout.push(v);
        for w in g.neighbors(v) {
            *unplaced_deg.get_mut(&w).unwrap() -= 1;
        }
        frontier.insert(v);
        frontier.retain(|u| unplaced_deg[u] > 0);
    }
    layout
}

fn min_fill_layout(g: &Graph) -> Vec<Var> {
    let mut adj: BTreeMap<Var, BTreeSet<Var>> = g.vertices().map(|v| (v, g.neighbors(v).collect())).collect();
    let mut order = Vec::with_capacity(adj.len());
    while !adj.is_empty() {
        let mut best: Option<(usize, usize, Var)> = None;
        for (&v, ns) in &adj {
            let nv: Vec<Var> = ns.iter().copied().collect();
            let mut fill = 0;
            for (i, a) in nv.iter().enumerate() {
                for b in &nv[i + 1..] {
                    if !adj[a].contains(b) {
                        fill += 1;
                    }
                }
            }
            let key = (fill, ns.len(), v);
            if best.is_none_or(|b| key < b) {
                best = Some(key);
            }
        }
        let (_, _, v) = best.unwrap();
        let ns: Vec<Var> = adj.remove(&v).unwrap().into_iter().collect();
        for (i, &a) in ns.iter().enumerate() {
            adj.get_mut(&a).unwrap().remove(&v);
            for &b in &ns[i + 1..] {
                adj.get_mut(&a).unwrap().insert(b);
                adj.get_mut(&b).unwrap().insert(a);
            }
        }
        order.push(v);
    }
    order
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn path_graph_has_width_one() {
        let g = Graph::from_edges([(1, 2), (2, 3)]).unwrap();
        let pd = PathDecomposition::heuristic(&g);
        pd.validate(&g).unwrap();
        assert_eq!(pd.width(), 1);
    }

    #[test]
    fn validation_detects_each_violation() {
        let g = Graph::from_edges([(1, 2), (2, 3)]).unwrap();
        let bag = |vs: &[Var]| vs.iter().copied().collect::<BTreeSet<_>>();
        let missing = PathDecomposition::new(vec![bag(&[1, 2])]);
        assert_eq!(missing.validate(&g), Err(DecompositionError::UncoveredVertex(3)));
        let edge = PathDecomposition::new(vec![bag(&[1, 2]), bag(&[3])]);
        assert_eq!(edge.validate(&g), Err(DecompositionError::UncoveredEdge(2, 3)));
        let gap = PathDecomposition::new(vec![bag(&[1, 2]), bag(&[1]), bag(&[2, 3])]);
        assert_eq!(gap.validate(&g), Err(DecompositionError::Disconnected(2)));
    }

    #[test]
    fn single_bag_order_is_ascending() {
        let pd = PathDecomposition::new(vec![BTreeSet::from([5, 2, 9])]);
        assert_eq!(pd.order().vars(), &[2, 5, 9]);
    }
}
