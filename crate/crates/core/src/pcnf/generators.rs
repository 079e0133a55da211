use super::{Clause, Graph, Lit, PathDecomposition, Pcnf, PcnfError, Quant, Var};

/// Variable numbering of the parity family: `x_1..x_n = 1..n`, `z_1 = n+1`,
/// `z_2 = n+2`, `t_i = n+1+i` for `2 ≤ i ≤ n`.
#[derive(Debug, Clone, Copy)]
pub struct QuParityVars {
    n: usize,
}

pub fn quparity_vars(n: usize) -> QuParityVars {
    QuParityVars { n }
}

impl QuParityVars {
    pub fn x(&self, i: usize) -> Var {
        debug_assert!((1..=self.n).contains(&i));
        i as Var
    }
    pub fn z1(&self) -> Var {
        self.n as Var + 1
    }
    pub fn z2(&self) -> Var {
        self.n as Var + 2
    }
    pub fn t(&self, i: usize) -> Var {
        debug_assert!((2..=self.n).contains(&i));
        (self.n + 1 + i) as Var
    }
    pub fn num_vars(&self) -> u32 {
        2 * self.n as u32 + 1
    }
}

/// Variable numbering of the split equality family: `x_i = i`, `u_i = n+i`,
/// `t_i = 2n+i`, `e_i = 3n+i` for `1 ≤ i < n`.
#[derive(Debug, Clone, Copy)]
pub struct EqPrimeVars {
    n: usize,
}

pub fn eqprime_vars(n: usize) -> EqPrimeVars {
    EqPrimeVars { n }
}

impl EqPrimeVars {
    pub fn x(&self, i: usize) -> Var {
        i as Var
    }
    pub fn u(&self, i: usize) -> Var {
        (self.n + i) as Var
    }
    pub fn t(&self, i: usize) -> Var {
        (2 * self.n + i) as Var
    }
    pub fn e(&self, i: usize) -> Var {
        debug_assert!((1..self.n).contains(&i));
        (3 * self.n + i) as Var
    }
    pub fn num_vars(&self) -> u32 {
        4 * self.n as u32 - 1
    }
}

fn lit(v: Var, positive: bool) -> Lit {
    Lit::new(v, positive)
}

fn clause(lits: &[Lit]) -> Clause {
    Clause::new(lits.iter().copied()).expect("generated clauses are not tautological")
}

/// The four clauses forcing `o = o1 ⊕ o2` whenever `l1 ∨ l2` is false.
fn xor_u(o1: Var, o2: Var, o: Var, l1: Lit, l2: Lit, out: &mut Vec<Clause>) {
    out.push(clause(&[l1, l2, lit(o1, false), lit(o2, true), lit(o, true)]));
    out.push(clause(&[l1, l2, lit(o1, true), lit(o2, false), lit(o, true)]));
    out.push(clause(&[l1, l2, lit(o1, false), lit(o2, false), lit(o, false)]));
    out.push(clause(&[l1, l2, lit(o1, true), lit(o2, true), lit(o, false)]));
}

/// `∃x_1..x_n ∀z_1 z_2 ∃t_2..t_n` with guarded parity gadgets; `8n − 6` clauses.
pub fn gen_quparity(n: usize) -> Result<Pcnf, PcnfError> {
    if n < 2 {
        return Err(PcnfError::InvalidParameter(format!(
            "parity family needs n >= 2, got {n}"
        )));
    }
    let v = quparity_vars(n);
    let mut prefix: Vec<(Quant, Var)> = (1..=n).map(|i| (Quant::Exists, v.x(i))).collect();
    prefix.push((Quant::Forall, v.z1()));
    prefix.push((Quant::Forall, v.z2()));
    prefix.extend((2..=n).map(|i| (Quant::Exists, v.t(i))));

    let (z1, z2) = (v.z1(), v.z2());
    let mut clauses = Vec::with_capacity(8 * n - 6);
    xor_u(v.x(1), v.x(2), v.t(2), lit(z1, true), lit(z2, true), &mut clauses);
    xor_u(v.x(1), v.x(2), v.t(2), lit(z1, false), lit(z2, false), &mut clauses);
    for i in 3..=n {
        xor_u(v.t(i - 1), v.x(i), v.t(i), lit(z1, true), lit(z2, true), &mut clauses);
        xor_u(v.t(i - 1), v.x(i), v.t(i), lit(z1, false), lit(z2, false), &mut clauses);
    }
    clauses.push(clause(&[lit(z1, true), lit(z2, true), lit(v.t(n), true)]));
    clauses.push(clause(&[lit(z1, false), lit(z2, false), lit(v.t(n), false)]));
    Pcnf::new(v.num_vars(), prefix, clauses)
}

/// `∃x ∀u ∃t ∃e` split equality formula with `3n` clauses.
///
/// Only `e_1..e_{n-1}` are generated: `e_n` would occur in no clause.
pub fn gen_eqprime(n: usize) -> Result<Pcnf, PcnfError> {
    if n < 2 {
        return Err(PcnfError::InvalidParameter(format!(
            "equality family needs n >= 2, got {n}"
        )));
    }
    let v = eqprime_vars(n);
    let mut prefix: Vec<(Quant, Var)> = (1..=n).map(|i| (Quant::Exists, v.x(i))).collect();
    prefix.extend((1..=n).map(|i| (Quant::Forall, v.u(i))));
    prefix.extend((1..=n).map(|i| (Quant::Exists, v.t(i))));
    prefix.extend((1..n).map(|i| (Quant::Exists, v.e(i))));

    let mut clauses = Vec::with_capacity(3 * n);
    for i in 1..=n {
        clauses.push(clause(&[lit(v.x(i), true), lit(v.u(i), true), lit(v.t(i), false)]));
        clauses.push(clause(&[lit(v.x(i), false), lit(v.u(i), false), lit(v.t(i), false)]));
    }
    clauses.push(clause(&[lit(v.t(1), true), lit(v.e(1), true)]));
    for i in 2..n {
        clauses.push(clause(&[lit(v.e(i - 1), false), lit(v.t(i), true), lit(v.e(i), true)]));
    }
    clauses.push(clause(&[lit(v.e(n - 1), false), lit(v.t(n), true)]));
    Pcnf::new(v.num_vars(), prefix, clauses)
}

/// A formula `∃X ∀z ∃Y` whose matrix is the Tseitin encoding of a circuit
/// computing the graph inner product, with `z` the circuit output.
#[derive(Debug, Clone)]
pub struct IpgFormula {
    pub pcnf: Pcnf,
    /// `(graph vertex, formula variable)` for every input.
    pub inputs: Vec<(Var, Var)>,
    pub output: Var,
}

impl IpgFormula {
    /// Maps a graph assignment (indexed by vertex id) to one indexed by formula variable.
    pub fn formula_assignment(&self, graph_assignment: &[bool]) -> Vec<bool> {
        let mut a = vec![false; self.pcnf.num_vars() as usize + 1];
        for &(vertex, var) in &self.inputs {
            a[var as usize] = graph_assignment[vertex as usize];
        }
        a
    }
}

/// Encodes `IP_G = ⊕_{xy ∈ E} x·y` as a left-deep XOR chain over one AND gate
/// per edge. With an empty edge set the output is constrained to 0.
pub fn gen_ipg_qbf(g: &Graph) -> Result<IpgFormula, PcnfError> {
    let verts: Vec<Var> = g.vertices().collect();
    let n = verts.len() as Var;
    let index = |v: Var| verts.iter().position(|&w| w == v).unwrap() as Var + 1;
    let inputs: Vec<(Var, Var)> = verts.iter().map(|&v| (v, index(v))).collect();
    let z = n + 1;
    let edges = g.edges();
    let m = edges.len();

    let mut next = z + 1;
    let mut fresh = || {
        let v = next;
        next += 1;
        v
    };
    let mut clauses = Vec::new();
    let mut gates: Vec<Var> = Vec::new();

    let and_gate = |out: Var, a: Var, b: Var, clauses: &mut Vec<Clause>| {
        clauses.push(clause(&[lit(out, false), lit(a, true)]));
        clauses.push(clause(&[lit(out, false), lit(b, true)]));
        clauses.push(clause(&[lit(out, true), lit(a, false), lit(b, false)]));
    };
    let xor_gate = |out: Var, a: Var, b: Var, clauses: &mut Vec<Clause>| {
        clauses.push(clause(&[lit(out, false), lit(a, true), lit(b, true)]));
        clauses.push(clause(&[lit(out, false), lit(a, false), lit(b, false)]));
        clauses.push(clause(&[lit(out, true), lit(a, false), lit(b, true)]));
        clauses.push(clause(&[lit(out, true), lit(a, true), lit(b, false)]));
    };

    if m == 0 {
        clauses.push(clause(&[lit(z, false)]));
    } else if m == 1 {
        let (a, b) = edges[0];
        and_gate(z, index(a), index(b), &mut clauses);
    } else {
        for &(a, b) in &edges {
            let gvar = fresh();
            and_gate(gvar, index(a), index(b), &mut clauses);
            gates.push(gvar);
        }
        let mut acc = gates[0];
        for (k, &gk) in gates.iter().enumerate().skip(1) {
            let out = if k == m - 1 { z } else { fresh() };
            xor_gate(out, acc, gk, &mut clauses);
            acc = out;
        }
    }
    let total = next - 1;
    let mut prefix: Vec<(Quant, Var)> = (1..=n).map(|v| (Quant::Exists, v)).collect();
    prefix.push((Quant::Forall, z));
    prefix.extend((z + 1..=total).map(|v| (Quant::Exists, v)));
    let pcnf = Pcnf::new(total, prefix, clauses)?;
    Ok(IpgFormula {
        pcnf,
        inputs,
        output: z,
    })
}

/// Parameterized formula families with known width-4 path decompositions.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Family {
    QuParity,
    EqPrime,
}

impl Family {
    pub fn name(self) -> &'static str {
        match self {
            Family::QuParity => "quparity",
            Family::EqPrime => "eqprime",
        }
    }

    pub fn generate(self, n: usize) -> Result<Pcnf, PcnfError> {
        match self {
            Family::QuParity => gen_quparity(n),
            Family::EqPrime => gen_eqprime(n),
        }
    }

    pub fn decomposition(self, n: usize) -> PathDecomposition {
        match self {
            Family::QuParity => PathDecomposition::quparity(n),
            Family::EqPrime => PathDecomposition::eqprime(n),
        }
    }
}

impl std::str::FromStr for Family {
    type Err = PcnfError;
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "quparity" => Ok(Family::QuParity),
            "eqprime" => Ok(Family::EqPrime),
            other => Err(PcnfError::InvalidParameter(format!("unknown family `{other}`"))),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn quparity_counts() {
        for n in 2..=9 {
            let f = gen_quparity(n).unwrap();
            assert_eq!(f.prefix().len(), 2 * n + 1);
            assert_eq!(f.clauses().len(), 8 * n - 6);
            assert_eq!(f.num_blocks(), 3);
            f.audit().unwrap();
        }
        assert!(gen_quparity(1).is_err());
    }

    #[test]
    fn eqprime_counts() {
        for n in 2..=9 {
            let f = gen_eqprime(n).unwrap();
            assert_eq!(f.clauses().len(), 3 * n);
            assert_eq!(f.num_blocks(), 3);
            f.audit().unwrap();
        }
        assert!(gen_eqprime(0).is_err());
    }

    #[test]
    fn known_decompositions_are_valid_width_four() {
        for n in 2..=64 {
            for fam in [Family::QuParity, Family::EqPrime] {
                let f = fam.generate(n).unwrap();
                let pd = fam.decomposition(n);
                pd.validate(&f.primal_graph()).unwrap();
                assert!(pd.width() <= 4, "{} n={n}", fam.name());
                assert_eq!(pd.order().len(), f.prefix().len());
            }
        }
    }

    #[test]
    fn eqprime_order_interleaves_blocks() {
        let n = 3;
        let v = eqprime_vars(n);
        let order = PathDecomposition::eqprime(n).order();
        assert_eq!(
            order.vars(),
            &[
                v.x(1),
                v.u(1),
                v.t(1),
                v.e(1),
                v.x(2),
                v.u(2),
                v.t(2),
                v.e(2),
                v.x(3),
                v.u(3),
                v.t(3)
            ]
        );
    }

    #[test]
    fn ipg_encoding_shapes() {
        let empty = Graph::from_edges([]).unwrap();
        let f = gen_ipg_qbf(&empty).unwrap();
        assert_eq!(f.pcnf.clauses().len(), 1);
        let single = Graph::from_edges([(1, 2)]).unwrap();
        let f = gen_ipg_qbf(&single).unwrap();
        assert_eq!(f.output, 3);
        assert_eq!(f.pcnf.clauses().len(), 3);
        let matching = Graph::from_edges([(1, 2), (3, 4), (5, 6)]).unwrap();
        let f = gen_ipg_qbf(&matching).unwrap();
        assert_eq!(f.pcnf.clauses().len(), 3 * 3 + 4 * 2);
        assert_eq!(f.pcnf.num_blocks(), 3);
        f.pcnf.audit().unwrap();
    }
}
