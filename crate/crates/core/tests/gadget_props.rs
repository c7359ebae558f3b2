mod common;

use promise_color::gadget::{
    bonami_beckner, completeness_value, pcp_reduce, scale_gadget, LabelAssignment, LabelCoverInstance, LabelEdge,
    MarkovOperator, PCP_VERTEX_BUDGET,
};
use promise_color::oracle::{exact_rho, OracleBudget};
use promise_color::{Error, Value};
use proptest::prelude::*;

/// Left-regular instance with planted labels; each edge swaps the two planted labels.
fn planted_instance(r: usize, left: &[usize], right: &[usize], degree: usize) -> LabelCoverInstance {
    let edges = (1..=left.len())
        .flat_map(|a| (0..degree).map(move |j| (a, (a + j - 1) % right.len() + 1)))
        .map(|(a, b)| {
            let mut perm: Vec<usize> = (1..=r).collect();
            perm.swap(right[b - 1] - 1, left[a - 1] - 1);
            LabelEdge { a, b, perm }
        })
        .collect();
    LabelCoverInstance::new(left.len(), right.len(), 1, r, edges).unwrap()
}

fn gcd(a: u64, b: u64) -> u64 {
    if b == 0 { a } else { gcd(b, a % b) }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn gadget_scales_the_optimum(n in 3usize..6, density in 0.3f64..1.0, seed in 0u64..200, p in 1u64..3, extra in 0u64..2, k in 2u32..4) {
        let g = common::random_graph(n, density, seed);
        let q = p + extra;
        let h = scale_gadget(&g, p, q).unwrap();
        let budget = OracleBudget::default();
        let rho_g = exact_rho(&g, k, &budget).unwrap().0;
        let rho_h = exact_rho(&h, k, &budget).unwrap().0;
        prop_assert_eq!(rho_h, rho_g * Value::new(p, q));
        prop_assert_eq!(h.m(), g.m() * q / gcd(p, q));
    }

    #[test]
    fn satisfiable_instances_are_complete(
        r in 1usize..3,
        labels in prop::collection::vec(1usize..3, 5),
        degree in 1usize..3,
    ) {
        let left: Vec<usize> = labels[..2].iter().map(|&x| x.min(r)).collect();
        let right: Vec<usize> = labels[2..].iter().map(|&x| x.min(r)).collect();
        let inst = planted_instance(r, &left, &right, degree);
        let sol = LabelAssignment { left, right };
        prop_assert_eq!(inst.value(&sol).unwrap(), Value::from_integer(1));
        let op = bonami_beckner(3).unwrap();
        let g = pcp_reduce(&inst, 3, &op, r, PCP_VERTEX_BUDGET).unwrap();
        prop_assert_eq!(completeness_value(&inst, &sol, 3, &g).unwrap(), Value::from_integer(1));
        prop_assert_eq!(LabelCoverInstance::parse(&inst.to_text()).unwrap(), inst);
    }
}

#[test]
fn scaled_triangle_has_six_edges() {
    let g = scale_gadget(&promise_color::Graph::complete(3), 1, 2).unwrap();
    assert_eq!(g.m(), 6);
    assert_eq!(exact_rho(&g, 3, &OracleBudget::default()).unwrap().0, Value::new(1, 2));
}

#[test]
fn reduction_preconditions() {
    let op = bonami_beckner(3).unwrap();
    let irregular = LabelCoverInstance::new(
        2,
        2,
        1,
        1,
        vec![
            LabelEdge { a: 1, b: 1, perm: vec![1] },
            LabelEdge { a: 1, b: 2, perm: vec![1] },
            LabelEdge { a: 2, b: 1, perm: vec![1] },
        ],
    )
    .unwrap();
    assert!(matches!(pcp_reduce(&irregular, 3, &op, 1, PCP_VERTEX_BUDGET), Err(Error::InvalidLabelCover(_))));
    let wide = planted_instance(2, &[1], &[1], 1);
    assert!(matches!(pcp_reduce(&wide, 4, &op, 2, PCP_VERTEX_BUDGET), Err(Error::InvalidOperator(_))));
    let big = planted_instance(2, &[1, 1], &[1, 2], 2);
    assert!(matches!(pcp_reduce(&big, 3, &op, 2, 17), Err(Error::BudgetExceeded(_))));
}

#[test]
fn operator_text_round_trip() {
    for k in 2..6 {
        let op = bonami_beckner(k).unwrap();
        let back = MarkovOperator::parse(&op.to_text(), k).unwrap();
        assert_eq!(back, op);
        assert!((back.spectral_radius() - 1.0 / (k as f64 - 1.0)).abs() < 1e-10);
    }
}
