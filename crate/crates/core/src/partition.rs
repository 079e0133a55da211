use std::collections::BTreeSet;

use crate::obdd::Var;

/// A bipartition `(X₁, X₂)` of a variable set.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Partition {
    left: Vec<Var>,
    right: Vec<Var>,
}

impl Partition {
    /// `None` when the sides overlap.
    pub fn new(left: Vec<Var>, right: Vec<Var>) -> Option<Partition> {
        let l: BTreeSet<Var> = left.iter().copied().collect();
        let r: BTreeSet<Var> = right.iter().copied().collect();
        if l.len() != left.len() || r.len() != right.len() || !l.is_disjoint(&r) {
            return None;
        }
        Some(Partition { left, right })
    }

    pub fn left(&self) -> &[Var] {
        &self.left
    }

    pub fn right(&self) -> &[Var] {
        &self.right
    }

    pub fn len(&self) -> usize {
        self.left.len() + self.right.len()
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    /// `min(|X₁|, |X₂|) / |X|`; a partition is `b`-balanced when this is at least `b`.
    pub fn balance(&self) -> f64 {
        if self.is_empty() {
            return 0.0;
        }
        self.left.len().min(self.right.len()) as f64 / self.len() as f64
    }

    /// `min(|X₁|, |X₂|) ≥ ⌊|X|/2⌋`.
    pub fn is_balanced(&self) -> bool {
        self.left.len().min(self.right.len()) >= self.len() / 2
    }

    pub fn side_of(&self, v: Var) -> Option<usize> {
        if self.left.contains(&v) {
            Some(0)
        } else if self.right.contains(&v) {
            Some(1)
        } else {
            None
        }
    }
}
