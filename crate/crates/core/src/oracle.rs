//! Brute-force and Monte Carlo ground truth.

use num_rational::Ratio;
use rand::Rng;
use rand_distr::StandardNormal;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::graph::{Colouring, Graph, Value};
use crate::round::check_inputs;
use crate::rng::SeedStream;
use crate::sdp::GramSolution;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct OracleBudget {
    /// Most vertices with non-loop edges that `exact_rho` will search over.
    pub max_vertices: usize,
    pub max_palette: u32,
    pub mc_samples: u64,
    pub seed: u64,
}

impl Default for OracleBudget {
    fn default() -> Self {
        Self {
            max_vertices: 12,
            max_palette: 5,
            mc_samples: 1_000_000,
            seed: 0,
        }
    }
}

struct Search {
    /// For the vertex at each search position, `(earlier position, weight)` pairs.
    back_edges: Vec<Vec<(usize, u64)>>,
    /// Edge mass still undecided after positions `0..=p` are coloured.
    remaining_after: Vec<u64>,
    k: u32,
    target: u64,
    colours: Vec<u32>,
    best: u64,
    best_colours: Vec<u32>,
}

impl Search {
    fn descend(&mut self, pos: usize, used: u32, proper: u64) {
        if self.best == self.target {
            return;
        }
        if pos == self.colours.len() {
            if proper > self.best {
                self.best = proper;
                self.best_colours.copy_from_slice(&self.colours);
            }
            return;
        }
        // colour `used + 1` is the only new colour allowed here
        let limit = (used + 1).min(self.k);
        for c in 1..=limit {
            let gained: u64 = self.back_edges[pos]
                .iter()
                .filter(|&&(q, _)| self.colours[q] != c)
                .map(|&(_, w)| w)
                .sum();
            let now = proper + gained;
            if now + self.remaining_after[pos] <= self.best {
                continue;
            }
            self.colours[pos] = c;
            self.descend(pos + 1, used.max(c), now);
        }
    }
}

/// `rho_k(G)` exactly, with a witness colouring.
///
/// Branch and bound over vertices that carry non-loop edges, in order of
/// decreasing degree. Colours are canonical (a colour is introduced only
/// after all smaller ones), and a branch is cut once even colouring every
/// undecided edge properly could not beat the incumbent. Loops count as
/// improper mass; other vertices get colour 1.
pub fn exact_rho(g: &Graph, k: u32, budget: &OracleBudget) -> Result<(Value, Colouring)> {
    if k < 1 {
        return Err(Error::InvalidParameter("palette must be >= 1".into()));
    }
    if g.m() == 0 {
        return Err(Error::EmptyEdgeSet);
    }
    if k > budget.max_palette {
        return Err(Error::BudgetExceeded(format!(
            "palette {k} exceeds the oracle limit {}",
            budget.max_palette
        )));
    }
    let n = g.n();
    let mut degree = vec![0u64; n];
    for &(u, v, w) in g.non_loop_edges() {
        degree[u - 1] += w;
        degree[v - 1] += w;
    }
    let mut order: Vec<usize> = (0..n).filter(|&v| degree[v] > 0).collect();
    if order.len() > budget.max_vertices {
        return Err(Error::BudgetExceeded(format!(
            "{} vertices with edges exceed the oracle limit {}",
            order.len(),
            budget.max_vertices
        )));
    }
    order.sort_by_key(|&v| (std::cmp::Reverse(degree[v]), v));
    let mut position = vec![usize::MAX; n];
    for (p, &v) in order.iter().enumerate() {
        position[v] = p;
    }
    let mut back_edges = vec![Vec::new(); order.len()];
    for &(u, v, w) in g.non_loop_edges() {
        let (pu, pv) = (position[u - 1], position[v - 1]);
        back_edges[pu.max(pv)].push((pu.min(pv), w));
    }
    let target: u64 = g.non_loop_edges().map(|e| e.2).sum();
    let mut decided = 0;
    let remaining_after = back_edges
        .iter()
        .map(|edges| {
            decided += edges.iter().map(|e| e.1).sum::<u64>();
            target - decided
        })
        .collect();
    let mut search = Search {
        back_edges,
        remaining_after,
        k,
        target,
        colours: vec![0; order.len()],
        best: 0,
        best_colours: vec![1; order.len()],
    };
    if !order.is_empty() {
        search.descend(0, 0, 0);
    }
    let mut colours = vec![1u32; n];
    for (p, &v) in order.iter().enumerate() {
        colours[v] = search.best_colours[p];
    }
    Ok((Ratio::new(search.best, g.m()), Colouring::new(colours, k)?))
}

/// A Monte Carlo estimate with its binomial standard error.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct McEstimate {
    pub estimate: f64,
    pub stderr: f64,
}

const MC_CHUNK: u64 = 1 << 14;

/// Counts draws where index 0 is the argmax of both `a`-correlated families.
fn count_joint_wins(a: f64, ell: u32, samples: u64, streams: SeedStream, label: &str) -> u64 {
    let b = (1.0 - a * a).max(0.0).sqrt();
    let chunks = samples.div_ceil(MC_CHUNK);
    (0..chunks)
        .into_par_iter()
        .map(|chunk| {
            let mut rng = streams.rng(label, chunk);
            let draws = MC_CHUNK.min(samples - chunk * MC_CHUNK);
            let mut hits = 0;
            for _ in 0..draws {
                let x0: f64 = rng.sample(StandardNormal);
                let y0 = a * x0 + b * rng.sample::<f64, _>(StandardNormal);
                let mut wins = true;
                for _ in 1..ell {
                    let x: f64 = rng.sample(StandardNormal);
                    let y = a * x + b * rng.sample::<f64, _>(StandardNormal);
                    // keep drawing so each sample consumes a fixed amount of randomness
                    wins &= x < x0 && y < y0;
                }
                hits += u64::from(wins);
            }
            hits
        })
        .sum()
}

/// Direct simulation of `P_l(a)`.
pub fn mc_p_ell(a: f64, ell: u32, samples: u64, seed: u64) -> Result<McEstimate> {
    if samples < 1000 {
        return Err(Error::InvalidParameter("need at least 1000 samples".into()));
    }
    if ell < 2 || !(-1.0..=1.0).contains(&a) {
        return Err(Error::InvalidParameter(format!("bad arguments a = {a}, l = {ell}")));
    }
    let hits = count_joint_wins(a, ell, samples, SeedStream::new(seed), "mc-p-ell");
    let p = hits as f64 / samples as f64;
    Ok(McEstimate {
        estimate: p,
        stderr: (p * (1.0 - p) / samples as f64).sqrt(),
    })
}

/// Expected argmax-rounding value with every `P_l` replaced by a simulation.
pub fn exact_expected_round(
    g: &Graph,
    sol: &GramSolution,
    ell: u32,
    budget: &OracleBudget,
) -> Result<McEstimate> {
    check_inputs(g, sol, ell)?;
    let root = SeedStream::new(budget.seed);
    let m = g.m() as f64;
    let mut value = 0.0;
    let mut var = 0.0;
    for (idx, &(u, v, w)) in g.non_loop_edges().enumerate() {
        let a = sol.inner(u, v).clamp(-1.0, 1.0);
        let est = mc_p_ell(a, ell, budget.mc_samples, root.derive("edge", idx as u64))?;
        let scale = w as f64 * ell as f64 / m;
        value += w as f64 / m - scale * est.estimate;
        var += (scale * est.stderr).powi(2);
    }
    Ok(McEstimate {
        estimate: value,
        stderr: var.sqrt(),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::colouring_value;

    /// Plain enumeration of all `k^n` colourings.
    fn naive_rho(g: &Graph, k: u32) -> Value {
        let n = g.n();
        let mut colours = vec![1u32; n];
        let mut best = Value::from_integer(0);
        loop {
            let c = Colouring::new(colours.clone(), k).unwrap();
            best = best.max(colouring_value(g, &c).unwrap());
            let mut i = 0;
            while i < n && colours[i] == k {
                colours[i] = 1;
                i += 1;
            }
            if i == n {
                return best;
            }
            colours[i] += 1;
        }
    }

    #[test]
    fn examples() {
        let b = OracleBudget::default();
        let k3 = Graph::complete(3);
        assert_eq!(exact_rho(&k3, 2, &b).unwrap().0, Value::new(2, 3));
        assert_eq!(exact_rho(&k3, 3, &b).unwrap().0, Value::from_integer(1));
        let mut e: Vec<_> = Graph::complete(4).edges().to_vec();
        e.push((2, 2, 1));
        let g = Graph::from_edges(4, e).unwrap();
        let (v, witness) = exact_rho(&g, 3, &b).unwrap();
        assert_eq!(v, Value::new(5, 7));
        assert_eq!(colouring_value(&g, &witness).unwrap(), v);
    }

    #[test]
    fn agrees_with_naive_enumeration() {
        let b = OracleBudget::default();
        let graphs = [
            Graph::cycle(5),
            Graph::complete(5),
            Graph::complete_bipartite(2, 3),
            Graph::from_edges(6, [(1, 2, 3), (2, 3, 1), (3, 1, 2), (4, 5, 1), (5, 6, 4), (6, 4, 1), (1, 4, 2), (3, 3, 1)])
                .unwrap(),
        ];
        for g in &graphs {
            for k in 1..=4 {
                let (v, w) = exact_rho(g, k, &b).unwrap();
                assert_eq!(v, naive_rho(g, k), "k={k}");
                assert_eq!(colouring_value(g, &w).unwrap(), v);
            }
        }
    }

    #[test]
    fn budget_limits() {
        let b = OracleBudget {
            max_vertices: 4,
            ..Default::default()
        };
        assert!(matches!(exact_rho(&Graph::complete(5), 3, &b), Err(Error::BudgetExceeded(_))));
        assert!(matches!(
            exact_rho(&Graph::complete(3), 6, &OracleBudget::default()),
            Err(Error::BudgetExceeded(_))
        ));
        // isolated and loop-only vertices do not count
        let g = Graph::from_edges(30, [(1, 2, 1), (5, 5, 2)]).unwrap();
        assert_eq!(exact_rho(&g, 2, &b).unwrap().0, Value::new(1, 3));
    }

    #[test]
    fn twelve_vertices_four_colours_is_fast() {
        let g = Graph::complete(12);
        let start = std::time::Instant::now();
        let (v, _) = exact_rho(&g, 4, &OracleBudget::default()).unwrap();
        // balanced 3,3,3,3 split: 4 * 3 monochromatic edges of 66
        assert_eq!(v, Value::new(54, 66));
        assert!(start.elapsed().as_secs() < 30);
    }

    #[test]
    fn mc_anchors() {
        let one = mc_p_ell(1.0, 4, 200_000, 1).unwrap();
        assert!((one.estimate - 0.25).abs() < 3.0 * one.stderr);
        let zero = mc_p_ell(0.0, 3, 200_000, 2).unwrap();
        assert!((zero.estimate - 1.0 / 9.0).abs() < 3.0 * zero.stderr);
        assert!(mc_p_ell(0.0, 3, 10, 2).is_err());
        assert_eq!(mc_p_ell(0.3, 3, 5000, 9).unwrap(), mc_p_ell(0.3, 3, 5000, 9).unwrap());
    }

    #[test]
    fn expected_round_extremes() {
        let g = Graph::complete(3);
        let budget = OracleBudget {
            mc_samples: 100_000,
            ..Default::default()
        };
        let same = GramSolution::from_vectors(&g, 3, vec![vec![1.0, 0.0]; 3]).unwrap();
        let est = exact_expected_round(&g, &same, 3, &budget).unwrap();
        assert!(est.estimate.abs() < 3.0 * est.stderr);
        let eye = (0..3).map(|i| (0..3).map(|j| f64::from(u8::from(i == j))).collect()).collect();
        let orth = GramSolution::from_vectors(&g, 3, eye).unwrap();
        let est = exact_expected_round(&g, &orth, 2, &budget).unwrap();
        assert!((est.estimate - 0.5).abs() < 3.0 * est.stderr);
    }
}
