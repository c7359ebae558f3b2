//! Randomised roundings of a Gram solution to an `l`-colouring.

use std::f64::consts::PI;

use rand::Rng;
use rand_distr::StandardNormal;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::alpha::{p_ell, KmsConstants};
use crate::error::{Error, Result};
use crate::graph::{colouring_value, Colouring, Graph, Value};
use crate::rng::SeedStream;
use crate::sdp::GramSolution;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum RoundingMethod {
    Fj,
    Kms,
    Derand,
}

impl std::fmt::Display for RoundingMethod {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(match self {
            RoundingMethod::Fj => "fj",
            RoundingMethod::Kms => "kms",
            RoundingMethod::Derand => "derand",
        })
    }
}

impl std::str::FromStr for RoundingMethod {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "fj" => Ok(Self::Fj),
            "kms" => Ok(Self::Kms),
            "derand" => Ok(Self::Derand),
            other => Err(Error::InvalidParameter(format!("unknown rounding method `{other}`"))),
        }
    }
}

/// A rounded colouring with its exact value on the graph it was rounded for.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RoundingOutcome {
    pub colouring: Colouring,
    pub achieved_value: Value,
    pub method: RoundingMethod,
    pub trials_used: u64,
    /// Seed the caller supplied (for `best_of`, the base seed).
    pub seed: u64,
    /// Index of the winning trial within `best_of`; 0 otherwise.
    pub best_trial: u64,
}

#[derive(Serialize)]
struct OutcomeJson<'a> {
    method: RoundingMethod,
    seed: u64,
    palette: u32,
    colours: &'a [u32],
    achieved_value: String,
    achieved_value_float: f64,
    trials_used: u64,
    best_trial: u64,
}

/// Float image of an exact value.
pub fn value_to_f64(v: &Value) -> f64 {
    *v.numer() as f64 / *v.denom() as f64
}

impl RoundingOutcome {
    fn new(g: &Graph, colouring: Colouring, method: RoundingMethod, seed: u64) -> Result<Self> {
        let achieved_value = colouring_value(g, &colouring)?;
        Ok(Self {
            colouring,
            achieved_value,
            method,
            trials_used: 1,
            seed,
            best_trial: 0,
        })
    }

    pub fn achieved_f64(&self) -> f64 {
        value_to_f64(&self.achieved_value)
    }

    /// JSON view with the value both as an exact `p/q` string and a float.
    pub fn to_json_value(&self) -> serde_json::Value {
        serde_json::to_value(OutcomeJson {
            method: self.method,
            seed: self.seed,
            palette: self.colouring.palette(),
            colours: self.colouring.colours(),
            achieved_value: format!("{}/{}", self.achieved_value.numer(), self.achieved_value.denom()),
            achieved_value_float: self.achieved_f64(),
            trials_used: self.trials_used,
            best_trial: self.best_trial,
        })
        .expect("outcome serialises")
    }
}

pub(crate) fn check_inputs(g: &Graph, sol: &GramSolution, ell: u32) -> Result<()> {
    if ell < 2 {
        return Err(Error::InvalidParameter(format!("palette l = {ell} must be >= 2")));
    }
    if sol.n() != g.n() {
        return Err(Error::DimensionMismatch {
            expected: g.n(),
            found: sol.n(),
        });
    }
    if g.m() == 0 {
        return Err(Error::EmptyEdgeSet);
    }
    Ok(())
}

fn dot(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

/// Colour `c + 1` of each vertex, where `c` maximises `a_i . x_c`; ties go to the lowest `c`.
pub fn argmax_colours(sol: &GramSolution, directions: &[Vec<f64>]) -> Vec<u32> {
    sol.vectors
        .iter()
        .map(|a| {
            let mut best = 0;
            let mut best_score = f64::NEG_INFINITY;
            for (c, x) in directions.iter().enumerate() {
                let s = dot(a, x);
                if s > best_score {
                    best_score = s;
                    best = c;
                }
            }
            best as u32 + 1
        })
        .collect()
}

fn gaussian_vectors<R: Rng>(rng: &mut R, count: usize, dim: usize) -> Vec<Vec<f64>> {
    (0..count)
        .map(|_| (0..dim).map(|_| rng.sample(StandardNormal)).collect())
        .collect()
}

/// Argmax rounding with `l` independent standard normal directions.
pub fn fj_round(g: &Graph, sol: &GramSolution, ell: u32, seed: u64) -> Result<RoundingOutcome> {
    check_inputs(g, sol, ell)?;
    let mut rng = SeedStream::new(seed).rng("fj", 0);
    let directions = gaussian_vectors(&mut rng, ell as usize, sol.rank);
    let colouring = Colouring::new(argmax_colours(sol, &directions), ell)?;
    RoundingOutcome::new(g, colouring, RoundingMethod::Fj, seed)
}

/// Hyperplane rounding with `t = floor(log2 l)` cuts.
///
/// Cut `j` is the bisector of two normal vectors `x_j, y_j`; a vertex is on
/// side 0 iff `a . x_j >= a . y_j`. The side pattern, read with cut 0 as the
/// most significant bit, plus one is the colour.
pub fn kms_round(g: &Graph, sol: &GramSolution, ell: u32, seed: u64) -> Result<RoundingOutcome> {
    check_inputs(g, sol, ell)?;
    let t = KmsConstants::new(2, ell)?.t as usize;
    let mut rng = SeedStream::new(seed).rng("kms", 0);
    let cuts: Vec<(Vec<f64>, Vec<f64>)> = (0..t)
        .map(|_| {
            let mut pair = gaussian_vectors(&mut rng, 2, sol.rank);
            let y = pair.pop().expect("two vectors");
            let x = pair.pop().expect("two vectors");
            (x, y)
        })
        .collect();
    let colours = sol
        .vectors
        .iter()
        .map(|a| {
            cuts.iter()
                .fold(0u32, |acc, (x, y)| (acc << 1) | u32::from(dot(a, x) < dot(a, y)))
                + 1
        })
        .collect();
    let colouring = Colouring::new(colours, ell)?;
    RoundingOutcome::new(g, colouring, RoundingMethod::Kms, seed)
}

/// Exact expectation of the `fj_round` value: `(1/m) sum w (1 - l P_l(a_u . a_v))`.
pub fn expected_fj_value(g: &Graph, sol: &GramSolution, ell: u32) -> Result<f64> {
    check_inputs(g, sol, ell)?;
    let terms: Result<Vec<f64>> = g
        .non_loop_edges()
        .collect::<Vec<_>>()
        .par_iter()
        .map(|&&(u, v, w)| {
            let a = sol.inner(u, v).clamp(-1.0, 1.0);
            let p = p_ell(a, ell)?.value;
            Ok(w as f64 * (1.0 - ell as f64 * p).clamp(0.0, 1.0))
        })
        .collect();
    Ok(terms?.iter().sum::<f64>() / g.m() as f64)
}

/// Exact expectation of the `kms_round` value.
pub fn expected_kms_value(g: &Graph, sol: &GramSolution, ell: u32) -> Result<f64> {
    check_inputs(g, sol, ell)?;
    let t = KmsConstants::new(2, ell)?.t as i32;
    let total: f64 = g
        .non_loop_edges()
        .map(|&(u, v, w)| {
            let a = sol.inner(u, v).clamp(-1.0, 1.0);
            w as f64 * (1.0 - (1.0 - a.acos() / PI).powi(t))
        })
        .sum();
    Ok(total / g.m() as f64)
}

/// Seed used by trial `index` of `best_of`; trial 0 uses `seed` itself.
pub fn trial_seed(seed: u64, index: u64) -> u64 {
    if index == 0 {
        seed
    } else {
        SeedStream::new(seed).derive("trial", index)
    }
}

/// Best of `trials` independent roundings; ties keep the earliest trial.
pub fn best_of(
    g: &Graph,
    sol: &GramSolution,
    ell: u32,
    method: RoundingMethod,
    trials: u64,
    seed: u64,
) -> Result<RoundingOutcome> {
    if trials == 0 {
        return Err(Error::InvalidParameter("trials must be >= 1".into()));
    }
    let round = match method {
        RoundingMethod::Fj => fj_round,
        RoundingMethod::Kms => kms_round,
        RoundingMethod::Derand => {
            return Err(Error::InvalidParameter(
                "the derandomised rounding is deterministic; call derand_round".into(),
            ))
        }
    };
    let outcomes: Result<Vec<RoundingOutcome>> = (0..trials)
        .into_par_iter()
        .map(|i| round(g, sol, ell, trial_seed(seed, i)))
        .collect();
    let outcomes = outcomes?;
    let (idx, best) = outcomes
        .into_iter()
        .enumerate()
        .reduce(|best, cur| if cur.1.achieved_value > best.1.achieved_value { cur } else { best })
        .expect("at least one trial");
    Ok(RoundingOutcome {
        trials_used: trials,
        seed,
        best_trial: idx as u64,
        ..best
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn edge() -> Graph {
        Graph::simple(2, &[(1, 2)]).unwrap()
    }

    fn sol(g: &Graph, k: u32, v: Vec<Vec<f64>>) -> GramSolution {
        GramSolution::from_vectors(g, k, v).unwrap()
    }

    #[test]
    fn identical_vectors_give_one_colour() {
        let g = Graph::complete(4);
        let s = sol(&g, 3, vec![vec![0.6, 0.8]; 4]);
        for seed in 0..20 {
            let out = fj_round(&g, &s, 3, seed).unwrap();
            assert_eq!(out.achieved_value, Value::from_integer(0));
            let out = kms_round(&g, &s, 4, seed).unwrap();
            assert_eq!(out.achieved_value, Value::from_integer(0));
        }
        assert_eq!(expected_fj_value(&g, &s, 3).unwrap().abs() < 1e-7, true);
    }

    #[test]
    fn antipodal_pair_always_split_by_hyperplanes() {
        let g = edge();
        let s = sol(&g, 2, vec![vec![1.0, 0.0], vec![-1.0, 0.0]]);
        for seed in 0..50 {
            assert_eq!(kms_round(&g, &s, 2, seed).unwrap().achieved_value, Value::from_integer(1));
        }
        assert!((expected_kms_value(&g, &s, 2).unwrap() - 1.0).abs() < 1e-15);
    }

    #[test]
    fn orthogonal_edge_frequencies() {
        let g = edge();
        let s = sol(&g, 3, vec![vec![1.0, 0.0], vec![0.0, 1.0]]);
        let trials = 100_000u64;
        let fj_hits = (0..trials)
            .filter(|&t| fj_round(&g, &s, 3, t).unwrap().achieved_value == Value::from_integer(1))
            .count() as f64;
        let p = 2.0 / 3.0;
        let se = (p * (1.0 - p) / trials as f64).sqrt();
        assert!((fj_hits / trials as f64 - p).abs() < 3.0 * se);

        let kms_hits = (0..trials)
            .filter(|&t| kms_round(&g, &s, 4, t).unwrap().achieved_value == Value::from_integer(1))
            .count() as f64;
        let p = 0.75;
        let se = (p * (1.0 - p) / trials as f64).sqrt();
        assert!((kms_hits / trials as f64 - p).abs() < 3.0 * se);
    }

    #[test]
    fn expected_value_terms() {
        let g = edge();
        let orth = sol(&g, 3, vec![vec![1.0, 0.0], vec![0.0, 1.0]]);
        assert!((expected_fj_value(&g, &orth, 5).unwrap() - 0.8).abs() < 1e-6);
        let same = sol(&g, 3, vec![vec![1.0, 0.0], vec![1.0, 0.0]]);
        assert!(expected_fj_value(&g, &same, 4).unwrap().abs() < 1e-6);
        // a loop adds mass to m only
        let looped = Graph::from_edges(2, [(1, 2, 1), (2, 2, 1)]).unwrap();
        let orth2 = sol(&looped, 3, vec![vec![1.0, 0.0], vec![0.0, 1.0]]);
        assert!((expected_fj_value(&looped, &orth2, 5).unwrap() - 0.4).abs() < 1e-6);
    }

    #[test]
    fn best_of_single_trial_matches_direct_call() {
        let g = Graph::cycle(5);
        let s = crate::sdp::solve_relaxation(&g, 3, &Default::default()).unwrap();
        let direct = fj_round(&g, &s, 3, 77).unwrap();
        let best = best_of(&g, &s, 3, RoundingMethod::Fj, 1, 77).unwrap();
        assert_eq!(best.colouring, direct.colouring);
        let mut last = Value::from_integer(0);
        for trials in [1, 2, 5, 20] {
            let v = best_of(&g, &s, 3, RoundingMethod::Kms, trials, 5).unwrap().achieved_value;
            assert!(v >= last);
            last = v;
        }
        assert!(best_of(&g, &s, 3, RoundingMethod::Fj, 0, 1).is_err());
    }

    #[test]
    fn json_carries_exact_fraction() {
        let g = Graph::complete(3);
        let s = sol(&g, 3, crate::sdp::simplex_vectors(3, 3).unwrap());
        let out = fj_round(&g, &s, 3, 1).unwrap();
        let json = out.to_json_value();
        assert_eq!(json["method"], "fj");
        assert_eq!(json["palette"], 3);
        let frac = json["achieved_value"].as_str().unwrap();
        assert!(frac.contains('/'));
        assert_eq!(json["colours"].as_array().unwrap().len(), 3);
    }

    #[test]
    fn kms_colour_uses_msb_first_bits() {
        // a single cut (l = 2, 3) yields colours 1 and 2 only
        let g = Graph::complete(3);
        let s = sol(&g, 3, crate::sdp::simplex_vectors(3, 3).unwrap());
        for seed in 0..30 {
            let out = kms_round(&g, &s, 3, seed).unwrap();
            assert!(out.colouring.colours().iter().all(|&c| c == 1 || c == 2));
        }
    }
}
