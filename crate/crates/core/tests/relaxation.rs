mod common;

use promise_color::oracle::{exact_rho, OracleBudget};
use promise_color::round::value_to_f64;
use promise_color::rng::SeedStream;
use promise_color::sdp::{relaxation_objective, simplex_vectors};
use promise_color::{solve_relaxation, Error, GramSolution, Graph, SolverOptions};
use proptest::prelude::*;
use rand::Rng;

/// Random orthogonal matrix by Gram-Schmidt on a seeded Gaussian-ish draw.
fn random_rotation(dim: usize, seed: u64) -> Vec<Vec<f64>> {
    let mut rng = SeedStream::new(seed).rng("rotation", 0);
    let mut basis: Vec<Vec<f64>> = Vec::new();
    while basis.len() < dim {
        let mut v: Vec<f64> = (0..dim).map(|_| rng.random::<f64>() - 0.5).collect();
        for b in &basis {
            let proj: f64 = v.iter().zip(b).map(|(x, y)| x * y).sum();
            v.iter_mut().zip(b).for_each(|(x, y)| *x -= proj * y);
        }
        let norm = v.iter().map(|x| x * x).sum::<f64>().sqrt();
        if norm > 1e-3 {
            basis.push(v.into_iter().map(|x| x / norm).collect());
        }
    }
    basis
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn objective_is_rotation_invariant(n in 3usize..8, density in 0.3f64..0.9, seed in 0u64..1000) {
        let g = common::random_graph(n, density, seed);
        let dim = 4;
        let mut rng = SeedStream::new(seed).rng("vectors", 0);
        let vecs: Vec<Vec<f64>> = (0..n).map(|_| (0..dim).map(|_| rng.random::<f64>() - 0.5).collect()).collect();
        let sol = GramSolution::from_vectors(&g, 3, vecs.clone()).unwrap();
        let rot = random_rotation(dim, seed);
        let turned: Vec<Vec<f64>> = vecs
            .iter()
            .map(|v| rot.iter().map(|row| row.iter().zip(v).map(|(a, b)| a * b).sum()).collect())
            .collect();
        let other = GramSolution::from_vectors(&g, 3, turned).unwrap();
        prop_assert!((sol.objective - other.objective).abs() < 1e-12);
    }

    #[test]
    fn relaxation_dominates_exact_value(n in 3usize..9, density in 0.2f64..1.0, seed in 0u64..1000, k in 2u32..5) {
        let g = common::random_graph(n, density, seed);
        let sol = solve_relaxation(&g, k, &SolverOptions::default()).unwrap();
        let (rho, _) = exact_rho(&g, k, &OracleBudget::default()).unwrap();
        prop_assert!(sol.objective >= value_to_f64(&rho) - 1e-4);
        prop_assert!(sol.objective <= 1.0 + 1e-6);
        prop_assert!(sol.feasibility(&g).max_violation() <= 1e-6);
    }
}

#[test]
fn simplex_embedding_is_optimal_for_complete_graphs() {
    for k in 2..6 {
        let g = Graph::complete(k);
        let sol = GramSolution::from_vectors(&g, k as u32, simplex_vectors(k, k).unwrap()).unwrap();
        assert!((relaxation_objective(&g, &sol).unwrap() - 1.0).abs() < 1e-12);
        let solved = solve_relaxation(&g, k as u32, &SolverOptions::default()).unwrap();
        assert!((solved.objective - 1.0).abs() < 1e-4);
    }
}

#[test]
fn odd_cycles_and_bipartite_graphs() {
    let opts = SolverOptions::default();
    // C5 with two colours: vectors at angle 4 pi / 5
    let c5 = solve_relaxation(&Graph::cycle(5), 2, &opts).unwrap();
    let expected = 0.5 * (1.0 - (4.0 * std::f64::consts::PI / 5.0).cos());
    assert!((c5.objective - expected).abs() < 1e-4, "{}", c5.objective);
    let k33 = solve_relaxation(&Graph::complete_bipartite(3, 3), 2, &opts).unwrap();
    assert!((k33.objective - 1.0).abs() < 1e-4);
}

#[test]
fn planted_graphs_certify_at_full_value() {
    for seed in 0..3 {
        let g = common::planted(30, 3, 0.4, seed);
        let sol = solve_relaxation(&g, 3, &SolverOptions { seed, ..SolverOptions::default() }).unwrap();
        assert!(sol.objective >= 1.0 - 1e-4, "{}", sol.objective);
        assert!(sol.feasibility(&g).max_violation() <= 1e-6);
    }
}

#[test]
fn text_and_json_round_trip() {
    let g = common::random_graph(7, 0.6, 3);
    let sol = solve_relaxation(&g, 3, &SolverOptions::default()).unwrap();
    let back = GramSolution::from_text(&sol.to_text()).unwrap();
    assert_eq!(back.n(), sol.n());
    for (a, b) in back.vectors.iter().flatten().zip(sol.vectors.iter().flatten()) {
        assert!((a - b).abs() < 1e-15);
    }
    let json = GramSolution::from_json(&sol.to_json().unwrap()).unwrap();
    assert_eq!(json, sol);
}

#[test]
fn edgeless_input_is_rejected() {
    let g = Graph::from_edges(3, []).unwrap();
    assert!(matches!(solve_relaxation(&g, 3, &SolverOptions::default()), Err(Error::EmptyEdgeSet)));
}
