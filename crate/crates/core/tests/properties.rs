use chargeplan::energetic::{mfc_all_pairs, step, StrictRelaxation};
use chargeplan::io::{read_matrix, write_matrix, MatrixFormat};
use chargeplan::minplus::{floyd_warshall, minplus_power, minplus_product, CostMatrix};
use chargeplan::oracle::oracle_mcp;
use chargeplan::random::{rng_from_seed, InstanceFamily};
use chargeplan::{mcp_all_pairs, mcp_bounded, parse_graph, Graph, Int, Scalar};
use proptest::prelude::*;

const INF: Int = Int::INFINITY;

fn no_neg_cycle_graph() -> impl Strategy<Value = Graph<Int>> {
    any::<u64>().prop_map(|seed| {
        let fam = InstanceFamily::small_signed();
        let mut rng = rng_from_seed(seed);
        loop {
            let g = fam.sample(&mut rng);
            if !g.has_negative_cycle() {
                return g;
            }
        }
    })
}

fn matrix(n: usize, m: usize) -> impl Strategy<Value = CostMatrix<Int>> {
    proptest::collection::vec(prop_oneof![4 => -5 as Int..20, 1 => Just(INF)], n * m)
        .prop_map(move |data| CostMatrix::from_vec(n, m, data).unwrap())
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn step_is_monotone(a in 0 as Int..=10, d in 0 as Int..=10, c in -10 as Int..=10, cap in 0 as Int..=10) {
        let (lo, hi) = (a.min(cap), (a + d).min(cap));
        prop_assert!(step(lo, c, cap) <= step(hi, c, cap));
    }

    #[test]
    fn reverse_is_an_involution(g in no_neg_cycle_graph()) {
        prop_assert_eq!(g.reverse().reverse().to_text(), g.to_text());
    }

    #[test]
    fn alpha_is_monotone_in_initial_charge(g in no_neg_cycle_graph()) {
        let mut prev: Option<CostMatrix<Int>> = None;
        for a in 0..=g.capacity() {
            let t = mfc_all_pairs(&g, a, &StrictRelaxation, false).unwrap();
            let cur = CostMatrix::from_rows(t.matrix.rows()).unwrap();
            if let Some(p) = &prev {
                prop_assert!(p.as_slice().iter().zip(cur.as_slice()).all(|(x, y)| x <= y));
            }
            prev = Some(cur);
        }
    }

    #[test]
    fn product_is_associative(a in matrix(3, 4), b in matrix(4, 2), c in matrix(2, 5)) {
        let left = minplus_product(&minplus_product(&a, &b).unwrap(), &c).unwrap();
        let right = minplus_product(&a, &minplus_product(&b, &c).unwrap()).unwrap();
        prop_assert_eq!(left, right);
    }

    #[test]
    fn long_powers_match_closure(d in matrix(5, 5)) {
        let d = CostMatrix::from_vec(5, 5, d.as_slice().iter().map(|&v| if v.is_finite() { v.abs() } else { v }).collect()).unwrap();
        prop_assert_eq!(minplus_power(&d, 4).unwrap(), floyd_warshall(&d).unwrap().dist);
    }

    #[test]
    fn plan_costs_compose(g in no_neg_cycle_graph()) {
        let rho = mcp_all_pairs(&g, &StrictRelaxation, false).unwrap().rho;
        let n = g.n();
        for s in 0..n {
            prop_assert_eq!(rho.get(s, s), 0);
            for x in 0..n {
                for t in 0..n {
                    prop_assert!(rho.get(s, t) <= rho.get(s, x).plus(rho.get(x, t)));
                }
            }
        }
    }

    #[test]
    fn plan_costs_shrink_with_budget_and_capacity(g in no_neg_cycle_graph()) {
        let base = mcp_bounded(&g, 2, &StrictRelaxation, false).unwrap().rho;
        let more_stops = mcp_bounded(&g, 3, &StrictRelaxation, false).unwrap().rho;
        let bigger = mcp_bounded(&g.with_capacity(g.capacity() + 2).unwrap(), 2, &StrictRelaxation, false).unwrap().rho;
        prop_assert!(more_stops.dominated_by(&base));
        prop_assert!(bigger.dominated_by(&base));
    }

    #[test]
    fn matrices_round_trip(m in matrix(4, 3)) {
        for format in [MatrixFormat::Tsv, MatrixFormat::Text] {
            prop_assert_eq!(read_matrix::<Int>(&write_matrix(&m, format), format).unwrap(), m.clone());
        }
    }
}

#[test]
fn relabeling_does_not_change_costs() {
    let g: Graph<Int> = parse_graph("4 5 6\n0 3\n1 inf\n2 1\n3 inf\n0 1 4\n1 2 -3\n2 3 5\n3 0 1\n1 3 6\n").unwrap();
    let perm = [2, 0, 3, 1];
    let mut prices = vec![0; 4];
    for v in 0..4 {
        prices[perm[v]] = g.price(v);
    }
    let arcs = g
        .arcs()
        .iter()
        .map(|a| chargeplan::Arc { tail: perm[a.tail], head: perm[a.head], cost: a.cost })
        .collect();
    let h = Graph::new(prices, g.capacity(), arcs).unwrap();
    let rg = mcp_all_pairs(&g, &StrictRelaxation, false).unwrap().rho;
    let rh = mcp_all_pairs(&h, &StrictRelaxation, false).unwrap().rho;
    for s in 0..4 {
        for t in 0..4 {
            assert_eq!(rg.get(s, t), rh.get(perm[s], perm[t]));
        }
        assert_eq!(oracle_mcp(&g, s, 10_000).unwrap(), rg.row(s));
    }
}
