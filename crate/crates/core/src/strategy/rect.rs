use super::{DecisionList, StrategyError};
use crate::obdd::{Manager, NodeRef, Var};
use crate::partition::Partition;

/// `left(X1) ∧ right(X2)`, both halves stored as OBDDs in one manager.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Rectangle {
    pub left: NodeRef,
    pub right: NodeRef,
}

impl Rectangle {
    pub fn eval(&self, mgr: &Manager, a: &[bool]) -> bool {
        mgr.evaluate(self.left, a) && mgr.evaluate(self.right, a)
    }
}

/// Splits `f` at layer `cut` of its complete OBDD: each node `N` of that
/// layer with a non-zero subfunction yields the rectangle
/// `reach_N(π[..cut]) ∧ f_N(π[cut..])`. The rectangles are disjoint and
/// their union is `f`.
pub fn obdd_to_rectangles(mgr: &mut Manager, f: NodeRef, cut: usize) -> Result<Vec<Rectangle>, StrategyError> {
    let len = mgr.order().len();
    if cut > len {
        return Err(StrategyError::BadCut { cut, len });
    }
    let complete = mgr.complete(f);
    let targets = complete.functions_at(cut);
    let mut out = Vec::new();
    for (t, &right) in targets.iter().enumerate() {
        if right.is_zero() {
            continue;
        }
        // indicator of reaching position `t`, built from the cut upwards
        let mut below: Vec<NodeRef> = (0..targets.len()).map(|i| mgr.mk_const(i == t)).collect();
        for level in (0..cut).rev() {
            let var = mgr.order().var_at(level);
            let layer = complete.layer(level).to_vec();
            below = layer
                .iter()
                .map(|n| mgr.mk_node(var, below[n.lo], below[n.hi]))
                .collect::<Result<_, _>>()?;
        }
        out.push(Rectangle { left: below[0], right });
    }
    Ok(out)
}

/// A decision list whose guards are rectangles over one partition.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RectangleDecisionList {
    pub partition: Partition,
    pub entries: Vec<(Rectangle, bool)>,
}

impl RectangleDecisionList {
    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    /// First-match evaluation under `a` (indexed by variable id).
    pub fn eval(&self, mgr: &Manager, a: &[bool]) -> bool {
        self.entries
            .iter()
            .find(|(r, _)| r.eval(mgr, a))
            .map(|&(_, c)| c)
            .expect("the last rectangle is full")
    }
}

/// Replaces every non-terminal guard by its rectangles at `cut`, keeping the
/// value and the order; the terminal becomes the full rectangle. The result
/// has at most `w(s-1)+1` entries for guard width `w` and list length `s`.
pub fn to_rectangle_list(
    mgr: &mut Manager,
    dl: &DecisionList,
    cut: usize,
) -> Result<RectangleDecisionList, StrategyError> {
    let len = mgr.order().len();
    if cut > len {
        return Err(StrategyError::BadCut { cut, len });
    }
    let vars = mgr.order().vars();
    let partition = Partition::new(vars[..cut].to_vec(), vars[cut..].to_vec()).expect("order variables are distinct");
    let mut entries = Vec::new();
    let (body, terminal) = dl.entries.split_at(dl.entries.len() - 1);
    for &(g, c) in body {
        for r in obdd_to_rectangles(mgr, g, cut)? {
            entries.push((r, c));
        }
    }
    let one = mgr.one();
    entries.push((Rectangle { left: one, right: one }, terminal[0].1));
    Ok(RectangleDecisionList { partition, entries })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct ProtocolRun {
    pub value: bool,
    pub rounds: usize,
}

/// Two players holding `a1` (values of `partition.left()`, in order) and
/// `a2` (values of `partition.right()`) announce, per round, whether their
/// half of the next rectangle holds; the run ends at the first round whose
/// conjunction is 1 and outputs that rectangle's value.
pub fn and_protocol_run(
    mgr: &Manager,
    rdl: &RectangleDecisionList,
    a1: &[bool],
    a2: &[bool],
) -> Result<ProtocolRun, StrategyError> {
    let (left, right) = (rdl.partition.left(), rdl.partition.right());
    if a1.len() != left.len() {
        return Err(StrategyError::PartitionMismatch {
            expected: left.len(),
            got: a1.len(),
        });
    }
    if a2.len() != right.len() {
        return Err(StrategyError::PartitionMismatch {
            expected: right.len(),
            got: a2.len(),
        });
    }
    let top = left.iter().chain(right).copied().max().unwrap_or(0) as usize;
    let view = |vars: &[Var], vals: &[bool]| {
        let mut a = vec![false; top + 1];
        for (&v, &b) in vars.iter().zip(vals) {
            a[v as usize] = b;
        }
        a
    };
    let (alice, bob) = (view(left, a1), view(right, a2));
    for (i, (r, c)) in rdl.entries.iter().enumerate() {
        let bit1 = mgr.evaluate(r.left, &alice);
        let bit2 = mgr.evaluate(r.right, &bob);
        if bit1 && bit2 {
            return Ok(ProtocolRun {
                value: *c,
                rounds: i + 1,
            });
        }
    }
    unreachable!("the last rectangle is full")
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::obdd::{BinOp, VarOrder};

    /// IP on two pairs under order x1 y1 x2 y2 (vars 1 2 3 4).
    fn ip2(mgr: &mut Manager) -> NodeRef {
        let (x1, y1, x2, y2) = (
            mgr.mk_var(1).unwrap(),
            mgr.mk_var(2).unwrap(),
            mgr.mk_var(3).unwrap(),
            mgr.mk_var(4).unwrap(),
        );
        let a = mgr.and(x1, y1).unwrap();
        let b = mgr.and(x2, y2).unwrap();
        mgr.apply(BinOp::XOR, a, b).unwrap()
    }

    fn assignments(n: usize) -> impl Iterator<Item = Vec<bool>> {
        (0u32..1 << n).map(move |m| (0..=n).map(|v| v > 0 && m >> (v - 1) & 1 == 1).collect())
    }

    #[test]
    fn inner_product_split_in_the_middle() {
        let mut mgr = Manager::new(VarOrder::new(vec![1, 2, 3, 4]).unwrap());
        let f = ip2(&mut mgr);
        let rects = obdd_to_rectangles(&mut mgr, f, 2).unwrap();
        assert_eq!(rects.len(), 2);
        for a in assignments(4) {
            let hits = rects.iter().filter(|r| r.eval(&mgr, &a)).count();
            assert_eq!(hits > 0, mgr.evaluate(f, &a));
            assert!(hits <= 1);
        }
    }

    #[test]
    fn degenerate_cuts() {
        let mut mgr = Manager::new(VarOrder::new(vec![1, 2, 3, 4]).unwrap());
        let f = ip2(&mut mgr);
        let at0 = obdd_to_rectangles(&mut mgr, f, 0).unwrap();
        assert_eq!(
            at0,
            vec![Rectangle {
                left: mgr.one(),
                right: f
            }]
        );
        let at4 = obdd_to_rectangles(&mut mgr, f, 4).unwrap();
        assert_eq!(
            at4,
            vec![Rectangle {
                left: f,
                right: mgr.one()
            }]
        );
        let zero = mgr.zero();
        assert!(obdd_to_rectangles(&mut mgr, zero, 2).unwrap().is_empty());
        assert!(matches!(
            obdd_to_rectangles(&mut mgr, f, 5),
            Err(StrategyError::BadCut { .. })
        ));
    }

    #[test]
    fn protocol_matches_list() {
        let mut mgr = Manager::new(VarOrder::new(vec![1, 2, 3, 4]).unwrap());
        let f = ip2(&mut mgr);
        let x1 = mgr.mk_var(1).unwrap();
        let dl = DecisionList {
            entries: vec![(f, false), (x1, true), (mgr.one(), false)],
        };
        let w = dl.width(&mgr);
        let rdl = to_rectangle_list(&mut mgr, &dl, 2).unwrap();
        assert!(rdl.len() <= w * (dl.len() - 1) + 1);
        for a in assignments(4) {
            assert_eq!(rdl.eval(&mgr, &a), dl.eval(&mgr, &a));
            let run = and_protocol_run(&mgr, &rdl, &[a[1], a[2]], &[a[3], a[4]]).unwrap();
            assert_eq!(run.value, dl.eval(&mgr, &a));
            assert!(run.rounds <= rdl.len());
        }
        let terminal = DecisionList::constant(&mgr, true);
        let r = to_rectangle_list(&mut mgr, &terminal, 1).unwrap();
        assert_eq!(r.len(), 1);
        let run = and_protocol_run(&mgr, &r, &[true], &[false, false, true]).unwrap();
        assert_eq!(run, ProtocolRun { value: true, rounds: 1 });
        assert!(and_protocol_run(&mgr, &r, &[], &[false]).is_err());
    }
}
