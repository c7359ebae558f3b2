//! Solve and round a random graph with a hidden proper 3-colouring.

use promise_color::alpha::alpha_kl;
use promise_color::derand::derand_round;
use promise_color::rng::SeedStream;
use promise_color::round::{best_of, RoundingMethod};
use promise_color::{solve_relaxation, Graph, SolverOptions};
use rand::Rng;

fn main() -> promise_color::Result<()> {
    let (n, k) = (40, 3);
    let mut rng = SeedStream::new(1).rng("planted", 0);
    let mut pairs = Vec::new();
    for u in 1..=n {
        for v in u + 1..=n {
            if u % k != v % k && rng.random::<f64>() < 0.3 {
                pairs.push((u, v));
            }
        }
    }
    let g = Graph::simple(n, &pairs)?;
    let sol = solve_relaxation(&g, k as u32, &SolverOptions::default())?;
    println!("n = {n}, m = {}, relaxation objective {:.6}", g.m(), sol.objective);
    for ell in [3u32, 4, 5] {
        let alpha = alpha_kl(k as u32, ell)?.value;
        let fj = best_of(&g, &sol, ell, RoundingMethod::Fj, 100, 7)?;
        let det = derand_round(&g, &sol, ell, 0.02, None)?;
        println!(
            "l = {ell}: alpha {alpha:.3}, best of 100 fj {}, derandomised {}",
            fj.achieved_value, det.achieved_value
        );
    }
    Ok(())
}
