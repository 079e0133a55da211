mod common;

use common::naive_max_rectangle;
use qobdd_core::pcnf::Graph;
use qobdd_core::rectangles::{
    check_rectanglesmall, eval_ipg, gi_decomposition, induced_matching, matching_graph, max_mono_rectangle,
    pair_partition, protocol_length_lower_bound, TruthTable,
};
use qobdd_core::Partition;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

fn rows_of(tt: &TruthTable) -> Vec<Vec<bool>> {
    (0..tt.num_rows())
        .map(|r| (0..tt.num_cols()).map(|c| tt.get(r, c)).collect())
        .collect()
}

fn assert_witness(tt: &TruthTable) -> u64 {
    let best = max_mono_rectangle(tt);
    assert_eq!(best.size, (best.rows.len() * best.cols.len()) as u64);
    for &r in &best.rows {
        for &c in &best.cols {
            assert_eq!(tt.get(r, c), best.color);
        }
    }
    best.size
}

#[test]
fn every_function_on_two_by_two_matches_brute_force() {
    for code in 0u32..1 << 16 {
        let tt = TruthTable::from_fn(vec![1, 2], vec![3, 4], |a| {
            let idx = a[1] as u32 | (a[2] as u32) << 1 | (a[3] as u32) << 2 | (a[4] as u32) << 3;
            code >> idx & 1 == 1
        })
        .unwrap();
        assert_eq!(
            assert_witness(&tt),
            naive_max_rectangle(&rows_of(&tt)),
            "function {code:016b}"
        );
    }
}

#[test]
fn random_three_by_three_and_lopsided_tables() {
    let mut rng = ChaCha8Rng::seed_from_u64(41);
    for (rows, cols) in [
        (vec![1, 2, 3], vec![4, 5, 6]),
        (vec![1], vec![2, 3, 4, 5]),
        (vec![1, 2, 3, 4], vec![5, 6]),
    ] {
        for _ in 0..15 {
            let n = rows.len() + cols.len();
            let table: Vec<bool> = (0..1 << n).map(|_| rng.gen()).collect();
            let tt = TruthTable::from_fn(rows.clone(), cols.clone(), |a| {
                table[(1..=n).fold(0, |acc, v| acc | (a[v] as usize) << (v - 1))]
            })
            .unwrap();
            let expect = naive_max_rectangle(&rows_of(&tt));
            assert_eq!(assert_witness(&tt), expect);
            assert_eq!(max_mono_rectangle(&tt.transpose()).size, expect);
        }
    }
}

#[test]
fn inner_product_is_symmetric_and_tight() {
    for n in 1..=5 {
        let g = matching_graph(n);
        let part = pair_partition(&g);
        let tt = TruthTable::ipg(&g, &part).unwrap();
        let flipped = TruthTable::ipg(
            &g,
            &Partition::new(part.right().to_vec(), part.left().to_vec()).unwrap(),
        )
        .unwrap();
        let best = max_mono_rectangle(&tt);
        assert_eq!(best.size, 1 << n);
        assert_eq!(max_mono_rectangle(&flipped).size, best.size);
    }
}

#[test]
fn decomposition_reproduces_ipg_on_the_matching() {
    let mut rng = ChaCha8Rng::seed_from_u64(42);
    for seed in 0..10 {
        let g = Graph::random_regular(8, 3, seed).unwrap();
        let part = Partition::new(vec![1, 2, 3, 4], vec![5, 6, 7, 8]).unwrap();
        let m = induced_matching(&g, &part);
        assert!(m.is_induced(&g) && m.crosses(&part));
        for _ in 0..20 {
            let mut a: Vec<bool> = (0..=8).map(|_| rng.gen()).collect();
            for &(x, y) in &m.edges {
                a[x as usize] = false;
                a[y as usize] = false;
            }
            let forms = gi_decomposition(&g, &m, &a).unwrap();
            let offset = eval_ipg(&g, &a);
            for flip in 0u32..1 << (2 * m.len()) {
                for (i, &(x, y)) in m.edges.iter().enumerate() {
                    a[x as usize] = flip >> (2 * i) & 1 == 1;
                    a[y as usize] = flip >> (2 * i + 1) & 1 == 1;
                }
                let mixed = forms
                    .iter()
                    .zip(&m.edges)
                    .fold(offset, |acc, (f, &(x, y))| acc ^ f.eval(a[x as usize], a[y as usize]));
                assert_eq!(eval_ipg(&g, &a), mixed);
            }
        }
    }
}

#[test]
fn small_rectangle_reports_hold() {
    let mut rng = ChaCha8Rng::seed_from_u64(43);
    for _ in 0..20 {
        let nv = rng.gen_range(2..=8u32);
        let mut g = Graph::new();
        for v in 1..=nv {
            g.add_vertex(v);
        }
        for u in 1..=nv {
            for v in u + 1..=nv {
                if rng.gen_bool(0.5) {
                    g.add_edge(u, v).unwrap();
                }
            }
        }
        let half = nv / 2;
        let part = Partition::new((1..=half).collect(), (half + 1..=nv).collect()).unwrap();
        let r = check_rectanglesmall(&g, &part).unwrap();
        assert!(r.holds());
        assert!(r.oracle_max <= r.bound);
    }
    let expect = 256.0 / (4.0 * std::f64::consts::E * 16.0);
    assert!((protocol_length_lower_bound(8, 16) - expect).abs() < 1e-9);
}
