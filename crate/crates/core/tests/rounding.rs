mod common;

use promise_color::derand::{derand_round, derand_round_detailed, NBinSpec};
use promise_color::oracle::{exact_expected_round, OracleBudget};
use promise_color::round::{best_of, expected_fj_value, expected_kms_value, fj_round, kms_round, RoundingMethod};
use promise_color::{colouring_value, solve_relaxation, Error, GramSolution, Graph, SolverOptions};
use proptest::prelude::*;

fn solved(n: usize, density: f64, seed: u64) -> (Graph, GramSolution) {
    let g = common::random_graph(n, density, seed);
    let sol = solve_relaxation(&g, 3, &SolverOptions::default()).unwrap();
    (g, sol)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(16))]

    #[test]
    fn rounding_is_a_function_of_the_seed(n in 3usize..10, seed in any::<u64>(), ell in 3u32..7) {
        let (g, sol) = solved(n, 0.6, seed % 97);
        for round in [fj_round, kms_round] {
            let a = round(&g, &sol, ell, seed).unwrap();
            let b = round(&g, &sol, ell, seed).unwrap();
            prop_assert_eq!(&a, &b);
            prop_assert!(a.colouring.colours().iter().all(|&c| (1..=ell).contains(&c)));
            prop_assert_eq!(colouring_value(&g, &a.colouring).unwrap(), a.achieved_value);
        }
    }

    #[test]
    fn best_of_dominates_its_trials(n in 3usize..9, seed in 0u64..500, trials in 1u64..12) {
        let (g, sol) = solved(n, 0.7, seed);
        let best = best_of(&g, &sol, 3, RoundingMethod::Fj, trials, seed).unwrap();
        prop_assert_eq!(best.trials_used, trials);
        let first = fj_round(&g, &sol, 3, seed).unwrap();
        prop_assert!(best.achieved_value >= first.achieved_value);
    }

    #[test]
    fn derand_meets_its_target(n in 3usize..10, seed in 0u64..500, ell in 3u32..6) {
        let (g, sol) = solved(n, 0.6, seed);
        let eps = 0.05;
        let out = derand_round(&g, &sol, ell, eps, None).unwrap();
        let target = expected_fj_value(&g, &sol, ell).unwrap();
        prop_assert!(out.achieved_f64() >= target - eps);
        prop_assert_eq!(out, derand_round(&g, &sol, ell, eps, None).unwrap());
    }
}

#[test]
fn expectation_matches_simulation_oracle() {
    let (g, sol) = solved(8, 0.6, 11);
    let budget = OracleBudget {
        mc_samples: 200_000,
        seed: 5,
        ..OracleBudget::default()
    };
    for ell in [3, 5] {
        let exact = expected_fj_value(&g, &sol, ell).unwrap();
        let sim = exact_expected_round(&g, &sol, ell, &budget).unwrap();
        assert!((exact - sim.estimate).abs() <= 4.0 * sim.stderr + 1e-9, "{exact} vs {sim:?}");
    }
}

#[test]
fn triangle_and_bipartite_round_perfectly() {
    let opts = SolverOptions::default();
    let k3 = Graph::complete(3);
    let sol = solve_relaxation(&k3, 3, &opts).unwrap();
    let best = best_of(&k3, &sol, 3, RoundingMethod::Fj, 50, 1).unwrap();
    assert_eq!(best.achieved_f64(), 1.0);
    let k33 = Graph::complete_bipartite(3, 3);
    let sol = solve_relaxation(&k33, 2, &opts).unwrap();
    let out = fj_round(&k33, &sol, 2, 0).unwrap();
    assert_eq!(out.achieved_f64(), 1.0);
    assert!(expected_kms_value(&k33, &sol, 2).unwrap() > 0.999);
}

#[test]
fn explicit_discretisation_is_validated() {
    let (g, sol) = solved(9, 0.6, 4);
    let (_, report) = derand_round_detailed(&g, &sol, 4, 0.05, None).unwrap();
    assert!(report.discretisation_budget <= 0.025);
    let coarse = derand_round(&g, &sol, 4, 1e-4, Some(NBinSpec::new(1).unwrap()));
    assert!(matches!(coarse, Err(Error::DerandParameter { .. })));
    assert!(best_of(&g, &sol, 4, RoundingMethod::Derand, 3, 0).is_err());
}
