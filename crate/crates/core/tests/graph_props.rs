mod common;

use promise_color::graph::proper_mass;
use promise_color::oracle::{exact_rho, OracleBudget};
use promise_color::{colouring_value, Colouring, Graph, ParseError, Value};
use proptest::prelude::*;

fn arb_graph(max_n: usize) -> impl Strategy<Value = Graph> {
    (2..=max_n).prop_flat_map(|n| {
        prop::collection::vec((1..=n, 1..=n, 1u64..4), 1..12)
            .prop_map(move |edges| Graph::from_edges(n, edges).unwrap())
    })
}

fn arb_graph_and_colouring(max_n: usize, palette: u32) -> impl Strategy<Value = (Graph, Colouring)> {
    arb_graph(max_n).prop_flat_map(move |g| {
        let n = g.n();
        (Just(g), prop::collection::vec(1..=palette, n))
            .prop_map(move |(g, cs)| (g, Colouring::new(cs, palette).unwrap()))
    })
}

proptest! {
    #[test]
    fn dimacs_round_trip(g in arb_graph(9)) {
        let back = Graph::parse(&g.to_dimacs()).unwrap();
        prop_assert_eq!(back, g);
    }

    #[test]
    fn value_is_a_fraction_of_edge_mass((g, c) in arb_graph_and_colouring(8, 3)) {
        let v = colouring_value(&g, &c).unwrap();
        prop_assert!(v <= Value::from_integer(1));
        prop_assert_eq!(v, Value::new(proper_mass(&g, &c).unwrap(), g.m()));
        // loops are never proper
        prop_assert!(v <= Value::new(g.m() - g.loop_mass(), g.m()));
    }

    #[test]
    fn relabelling_preserves_value((g, c) in arb_graph_and_colouring(7, 4), shift in 0usize..7) {
        let n = g.n();
        let perm: Vec<usize> = (0..n).map(|v| (v + shift) % n + 1).collect();
        let h = g.relabel(&perm).unwrap();
        let mut moved = vec![0u32; n];
        for v in 0..n {
            moved[perm[v] - 1] = c.colour(v + 1);
        }
        let d = Colouring::new(moved, c.palette()).unwrap();
        prop_assert_eq!(colouring_value(&g, &c).unwrap(), colouring_value(&h, &d).unwrap());
    }

    #[test]
    fn rho_is_monotone_in_palette(g in arb_graph(6)) {
        let budget = OracleBudget::default();
        let values: Vec<Value> = (1..=4).map(|k| exact_rho(&g, k, &budget).unwrap().0).collect();
        prop_assert!(values.windows(2).all(|w| w[0] <= w[1]));
    }

    #[test]
    fn oracle_colouring_attains_its_value(g in arb_graph(7), k in 2u32..4) {
        let (rho, c) = exact_rho(&g, k, &OracleBudget::default()).unwrap();
        prop_assert_eq!(colouring_value(&g, &c).unwrap(), rho);
    }
}

#[test]
fn union_mass_adds() {
    let g = Graph::complete(4).disjoint_union(&Graph::cycle(5));
    assert_eq!((g.n(), g.m()), (9, 11));
    let rho = exact_rho(&g, 3, &OracleBudget::default()).unwrap().0;
    assert_eq!(rho, Value::new(10, 11));
}

#[test]
fn parse_errors_carry_line_numbers() {
    let err = Graph::parse("p edge 3 1\ne 1 4\n").unwrap_err();
    assert!(matches!(err, ParseError::VertexOutOfRange { .. }));
    assert_eq!(err.line(), 2);
    assert!(Graph::parse("e 1 2\n").is_err());
}

#[test]
fn corpus_is_well_formed() {
    let corpus = common::small_corpus();
    assert!(corpus.len() >= 50);
    assert!(corpus.iter().all(|(_, g)| g.n() <= 11 && g.m() > 0));
}
