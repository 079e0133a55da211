use std::collections::{BTreeMap, BTreeSet};

use num_rational::Ratio;
use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use thiserror::Error;

use super::Var;
use crate::error::ParseError;

/// Largest vertex count for which [`Graph::expansion`] enumerates subsets.
pub const EXPANSION_LIMIT: usize = 20;

const PAIRING_ATTEMPTS: usize = 100_000;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum GraphError {
    #[error("self-loop on vertex {0}")]
    SelfLoop(Var),
    #[error("no {degree}-regular graph on {n} vertices")]
    NoRegularGraph { n: usize, degree: usize },
    #[error("pairing model found no simple graph after {0} attempts")]
    PairingFailed(usize),
    #[error("exhaustive expansion is limited to {limit} vertices, graph has {n}")]
    TooLarge { n: usize, limit: usize },
    #[error("expansion undefined for graphs with fewer than two vertices")]
    TooSmall,
    #[error(transparent)]
    Parse(#[from] ParseError),
}

/// Simple undirected graph with ordered vertex ids.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct Graph {
    adj: BTreeMap<Var, BTreeSet<Var>>,
}

impl Graph {
    pub fn new() -> Graph {
        Graph::default()
    }

    pub fn from_edges(edges: impl IntoIterator<Item = (Var, Var)>) -> Result<Graph, GraphError> {
        let mut g = Graph::new();
        for (u, v) in edges {
            g.add_edge(u, v)?;
        }
        Ok(g)
    }

    pub fn add_vertex(&mut self, v: Var) {
        self.adj.entry(v).or_default();
    }

    /// Adds `uv`; repeated edges are ignored.
    pub fn add_edge(&mut self, u: Var, v: Var) -> Result<(), GraphError> {
        if u == v {
            return Err(GraphError::SelfLoop(u));
        }
        self.adj.entry(u).or_default().insert(v);
        self.adj.entry(v).or_default().insert(u);
        Ok(())
    }

    pub fn vertices(&self) -> impl Iterator<Item = Var> + '_ {
        self.adj.keys().copied()
    }

    pub fn num_vertices(&self) -> usize {
        self.adj.len()
    }

    /// Edges `(u, v)` with `u < v`, lexicographically ordered.
    pub fn edges(&self) -> Vec<(Var, Var)> {
        self.adj
            .iter()
            .flat_map(|(&u, ns)| ns.iter().filter(move |&&v| u < v).map(move |&v| (u, v)))
            .collect()
    }

    pub fn num_edges(&self) -> usize {
        self.adj.values().map(BTreeSet::len).sum::<usize>() / 2
    }

    pub fn neighbors(&self, v: Var) -> impl Iterator<Item = Var> + '_ {
        self.adj.get(&v).into_iter().flat_map(|s| s.iter().copied())
    }

    pub fn has_edge(&self, u: Var, v: Var) -> bool {
        self.adj.get(&u).is_some_and(|s| s.contains(&v))
    }

    pub fn contains(&self, v: Var) -> bool {
        self.adj.contains_key(&v)
    }

    pub fn degree(&self, v: Var) -> usize {
        self.adj.get(&v).map_or(0, BTreeSet::len)
    }

    pub fn max_degree(&self) -> usize {
        self.adj.values().map(BTreeSet::len).max().unwrap_or(0)
    }

    /// Edge-list text: one `u v` pair per line. Blank lines and lines starting
    /// with `#` or `c` are skipped; a line with a single id declares an
    /// isolated vertex.
    pub fn parse_edge_list(text: &str) -> Result<Graph, GraphError> {
        let mut g = Graph::new();
        for (idx, line) in text.lines().enumerate() {
            let ln = idx + 1;
            let line = line.trim();
            if line.is_empty() || line.starts_with('#') || line.starts_with('c') {
                continue;
            }
            let toks: Vec<&str> = line.split_whitespace().collect();
            let ids: Vec<Var> = toks
                .iter()
                .map(|t| crate::obdd::parse_tok(ln, Some(t)))
                .collect::<Result<_, _>>()?;
            match ids.as_slice() {
                [v] => g.add_vertex(*v),
                [u, v] => g.add_edge(*u, *v)?,
                _ => return Err(ParseError::syntax(ln, "expected `<u> <v>`").into()),
            }
        }
        Ok(g)
    }

    pub fn to_edge_list(&self) -> String {
        let mut out = String::new();
        for v in self.vertices().filter(|&v| self.degree(v) == 0) {
            out.push_str(&format!("{v}\n"));
        }
        for (u, v) in self.edges() {
            out.push_str(&format!("{u} {v}\n"));
        }
        out
    }

    /// Random simple `degree`-regular graph on vertices `1..=n` via the
    /// pairing model, resampling until the pairing is simple.
    pub fn random_regular(n: usize, degree: usize, seed: u64) -> Result<Graph, GraphError> {
        if (n * degree) % 2 == 1 || (degree >= n && !(n == 0 || degree == 0)) {
            return Err(GraphError::NoRegularGraph { n, degree });
        }
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let mut points: Vec<Var> = (1..=n as Var).flat_map(|v| std::iter::repeat_n(v, degree)).collect();
        'attempt: for _ in 0..PAIRING_ATTEMPTS {
            points.shuffle(&mut rng);
            let mut g = Graph::new();
            for v in 1..=n as Var {
                g.add_vertex(v);
            }
            for pair in points.chunks(2) {
                let (u, v) = (pair[0], pair[1]);
                if u == v || g.has_edge(u, v) {
                    continue 'attempt;
                }
                g.add_edge(u, v)?;
            }
            return Ok(g);
        }
        Err(GraphError::PairingFailed(PAIRING_ATTEMPTS))
    }

    /// `min |N(S)| / |S|` over non-empty `S` with `|S| ≤ |V|/2`, where `N(S)`
    /// is the open neighbourhood (vertices outside `S` adjacent to `S`).
    pub fn expansion(&self) -> Result<Ratio<u64>, GraphError> {
        let n = self.num_vertices();
        if n > EXPANSION_LIMIT {
            return Err(GraphError::TooLarge {
                n,
                limit: EXPANSION_LIMIT,
            });
        }
        if n < 2 {
            return Err(GraphError::TooSmall);
        }
        let verts: Vec<Var> = self.vertices().collect();
        let masks: Vec<u32> = verts
            .iter()
            .map(|&v| {
                self.neighbors(v)
                    .map(|w| 1u32 << verts.iter().position(|&x| x == w).unwrap())
                    .fold(0, |a, b| a | b)
            })
            .collect();
        let mut best: Option<Ratio<u64>> = None;
        for s in 1u32..(1u32 << n) {
            let size = s.count_ones() as usize;
            if size > n / 2 {
                continue;
            }
            let mut nb = 0u32;
            let mut rest = s;
            while rest != 0 {
                let i = rest.trailing_zeros();
                nb |= masks[i as usize];
                rest &= rest - 1;
            }
            nb &= !s;
            let r = Ratio::new(nb.count_ones() as u64, size as u64);
            if best.is_none_or(|b| r < b) {
                best = Some(r);
            }
        }
        Ok(best.expect("at least one admissible subset"))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn edge_list_round_trip() {
        let g = Graph::parse_edge_list("# g\n1 2\n2 3\n\n5\n").unwrap();
        assert_eq!(g.num_vertices(), 4);
        assert_eq!(g.num_edges(), 2);
        assert_eq!(Graph::parse_edge_list(&g.to_edge_list()).unwrap(), g);
        assert!(matches!(Graph::parse_edge_list("1 1\n"), Err(GraphError::SelfLoop(1))));
    }

    #[test]
    fn expansion_small_graphs() {
        let edge = Graph::from_edges([(1, 2)]).unwrap();
        assert_eq!(edge.expansion().unwrap(), Ratio::from_integer(1));
        let c4 = Graph::from_edges([(1, 2), (2, 3), (3, 4), (4, 1)]).unwrap();
        assert_eq!(c4.expansion().unwrap(), Ratio::from_integer(1));
        let k4 = Graph::from_edges([(1, 2), (1, 3), (1, 4), (2, 3), (2, 4), (3, 4)]).unwrap();
        assert!(k4.expansion().unwrap() >= Ratio::from_integer(1));
    }

    #[test]
    fn random_regular_is_regular_and_reproducible() {
        let g = Graph::random_regular(10, 3, 7).unwrap();
        assert!(g.vertices().all(|v| g.degree(v) == 3));
        assert_eq!(g, Graph::random_regular(10, 3, 7).unwrap());
        assert!(matches!(
            Graph::random_regular(5, 3, 0),
            Err(GraphError::NoRegularGraph { .. })
        ));
        let big = Graph::random_regular(22, 3, 1).unwrap();
        assert!(matches!(big.expansion(), Err(GraphError::TooLarge { .. })));
    }
}
