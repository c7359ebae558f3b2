//! Deterministic rounding by the method of conditional expectations.
//!
//! The `l` Gaussian directions of the argmax rounding are replaced
//! coordinate-wise by normalised binomials `NBin(s)`, each a sum of `s`
//! Rademacher steps of size `1/sqrt(s)`. Coordinates are processed one at a
//! time and, within a coordinate, bits are fixed one at a time so that the
//! conditional expected proper-edge mass never decreases.
//!
//! For the current coordinate the remaining bits are averaged exactly: bits
//! are exchangeable, so a partial state is just the count of `+1` bits so far
//! and completions are weighted by binomial counts. The still unfixed other
//! coordinates are averaged over a fixed, seeded sample of `NBin(s)` values
//! shared by every decision (common random numbers). Per sample, the value as
//! a function of the current coordinate is a step function whose breakpoints
//! come from each vertex's score margin, so all `s + 1` candidate values are
//! scored in one sweep.
//!
//! The solution vectors are first rotated by a fixed random orthogonal matrix.
//! The Gaussian rounding is rotation invariant, while the rotation keeps the
//! lattice of binomial values from lining up with the vectors and creating
//! argmax ties.
//!
//! The result is checked against the target at the end; estimation error can
//! in principle defeat the greedy choice, in which case the run is repeated
//! once with four times the samples before reporting a shortfall.

use nalgebra::DMatrix;
use rand::Rng;
use rand_distr::StandardNormal;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::gaussian::norm_cdf;
use crate::graph::{Colouring, Graph};
use crate::rng::SeedStream;
use crate::round::{argmax_colours, check_inputs, expected_fj_value, RoundingMethod, RoundingOutcome};
use crate::sdp::GramSolution;

/// Fixed seed of all internal randomness, so that runs are reproducible.
pub const DERAND_SEED: u64 = 0x5eed_da7a;
/// Largest step count considered when choosing `s`.
pub const MAX_STEPS: u32 = 4096;
/// Coupled draws per discretisation budget estimate.
pub const BUDGET_SAMPLES: usize = 4096;
const MIN_SAMPLES: usize = 256;
const MAX_SAMPLES: usize = 4096;

/// `NBin(s)`: the sum of `s` independent `+-1/sqrt(s)` steps.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct NBinSpec {
    pub s: u32,
}

impl NBinSpec {
    pub fn new(s: u32) -> Result<Self> {
        if s == 0 {
            return Err(Error::InvalidParameter("NBin needs s >= 1".into()));
        }
        Ok(Self { s })
    }

    /// Value with `j` positive steps.
    pub fn support(&self, j: u32) -> f64 {
        (2.0 * j as f64 - self.s as f64) / (self.s as f64).sqrt()
    }

    /// Probability of exactly `j` positive steps.
    pub fn pmf(&self) -> Vec<f64> {
        binomial_pmf(self.s)
    }

    fn cdf(&self) -> Vec<f64> {
        let mut acc = 0.0;
        self.pmf()
            .into_iter()
            .map(|p| {
                acc += p;
                acc
            })
            .collect()
    }
}

fn ln_choose(n: u32, k: u32) -> f64 {
    libm::lgamma(n as f64 + 1.0) - libm::lgamma(k as f64 + 1.0) - libm::lgamma((n - k) as f64 + 1.0)
}

fn binomial_pmf(n: u32) -> Vec<f64> {
    let ln2 = std::f64::consts::LN_2;
    (0..=n).map(|k| (ln_choose(n, k) - n as f64 * ln2).exp()).collect()
}

/// Quantile map from a uniform to an index of `cdf`.
fn quantile(cdf: &[f64], u: f64) -> u32 {
    cdf.partition_point(|&c| c < u).min(cdf.len() - 1) as u32
}

/// Diagnostics of a derandomised rounding.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DerandReport {
    pub s: u32,
    pub samples: usize,
    pub discretisation_budget: f64,
    pub expected_value: f64,
    pub attempts: u32,
}

/// Proper edge mass divided by `m`, for 0-based colour vectors.
fn value_of(edges: &[(usize, usize, f64)], colours: &[u32]) -> f64 {
    edges
        .iter()
        .filter(|&&(u, v, _)| colours[u] != colours[v])
        .map(|e| e.2)
        .sum()
}

fn normalised_edges(g: &Graph) -> Vec<(usize, usize, f64)> {
    let m = g.m() as f64;
    g.non_loop_edges()
        .map(|&(u, v, w)| (u - 1, v - 1, w as f64 / m))
        .collect()
}

/// Haar-random orthogonal matrix from a seeded Gaussian matrix.
fn random_rotation(dim: usize, seed: u64) -> DMatrix<f64> {
    let mut rng = SeedStream::new(seed).rng("derand-rotation", 0);
    let gauss = DMatrix::from_fn(dim, dim, |_, _| rng.sample::<f64, _>(StandardNormal));
    let qr = gauss.qr();
    let (q, r) = (qr.q(), qr.r());
    // fix column signs so the distribution is Haar
    let signs = DMatrix::from_diagonal(&r.diagonal().map(|d| if d < 0.0 { -1.0 } else { 1.0 }));
    q * signs
}

fn rotate(sol: &GramSolution, rot: &DMatrix<f64>) -> Vec<Vec<f64>> {
    let r = sol.rank;
    sol.vectors
        .iter()
        .map(|a| (0..r).map(|row| (0..r).map(|c| rot[(row, c)] * a[c]).sum()).collect())
        .collect()
}

fn argmax_rows(vectors: &[Vec<f64>], directions: &[Vec<f64>]) -> Vec<u32> {
    vectors
        .iter()
        .map(|a| {
            let mut best = 0u32;
            let mut best_score = f64::NEG_INFINITY;
            for (c, x) in directions.iter().enumerate() {
                let s: f64 = a.iter().zip(x).map(|(p, q)| p * q).sum();
                if s > best_score {
                    best_score = s;
                    best = c as u32;
                }
            }
            best
        })
        .collect()
}

/// High-confidence bound on `|E V_gauss - E V_nbin|` from quantile-coupled draws.
fn discretisation_budget(
    vectors: &[Vec<f64>],
    edges: &[(usize, usize, f64)],
    ell: usize,
    nbin: NBinSpec,
    draws: usize,
) -> f64 {
    let rank = vectors.first().map_or(0, Vec::len);
    let cdf = nbin.cdf();
    let mut rng = SeedStream::new(DERAND_SEED).rng("derand-budget", nbin.s as u64);
    let mut sum = 0.0;
    let mut sum_sq = 0.0;
    for _ in 0..draws {
        let gauss: Vec<Vec<f64>> = (0..ell)
            .map(|_| (0..rank).map(|_| rng.sample(StandardNormal)).collect())
            .collect();
        let coupled: Vec<Vec<f64>> = gauss
            .iter()
            .map(|x| x.iter().map(|&z| nbin.support(quantile(&cdf, norm_cdf(z)))).collect())
            .collect();
        let diff = value_of(edges, &argmax_rows(vectors, &gauss))
            - value_of(edges, &argmax_rows(vectors, &coupled));
        sum += diff;
        sum_sq += diff * diff;
    }
    let n = draws as f64;
    let mean = sum / n;
    let var = (sum_sq / n - mean * mean).max(0.0);
    mean.abs() + 3.0 * (var / n).sqrt()
}

/// Smallest power of two `s <= MAX_STEPS` whose budget is at most `limit`.
fn minimal_steps(
    vectors: &[Vec<f64>],
    edges: &[(usize, usize, f64)],
    ell: usize,
    limit: f64,
) -> Option<(NBinSpec, f64)> {
    let mut s = 1;
    while s <= MAX_STEPS {
        let nbin_grid = NBinSpec { s };
        let budget = discretisation_budget(vectors, edges, ell, nbin_grid, BUDGET_SAMPLES);
        if budget <= limit {
            return Some((nbin_grid, budget));
        }
        s *= 2;
    }
    None
}

/// Inclusive index interval, empty when `lo > hi`.
#[derive(Clone, Copy)]
struct Span {
    lo: usize,
    hi: usize,
}

impl Span {
    const EMPTY: Span = Span { lo: 1, hi: 0 };

    fn meet(self, other: Span) -> Span {
        Span {
            lo: self.lo.max(other.lo),
            hi: self.hi.min(other.hi),
        }
    }
}

fn add_span(diff: &mut [f64], span: Span, w: f64) {
    if span.lo <= span.hi {
        diff[span.lo] += w;
        diff[span.hi + 1] -= w;
    }
}

/// First index in `0..len` where the monotone `pred` turns false.
fn partition(len: usize, pred: impl Fn(usize) -> bool) -> usize {
    let (mut lo, mut hi) = (0, len);
    while lo < hi {
        let mid = lo + (hi - lo) / 2;
        if pred(mid) {
            lo = mid + 1;
        } else {
            hi = mid;
        }
    }
    lo
}

struct Greedy<'a> {
    vectors: &'a [Vec<f64>],
    edges: &'a [(usize, usize, f64)],
    ell: usize,
    rank: usize,
    nbin: NBinSpec,
    values: Vec<f64>,
}

impl Greedy<'_> {
    /// Span of candidate indices `j` at which colour `c` wins for a vertex.
    fn winning_span(&self, base: f64, slope: f64, other: f64, other_idx: usize, c: usize) -> Span {
        let s = self.nbin.s as usize;
        let wins = |j: usize| {
            let score = base + slope * self.values[j];
            score > other || (score == other && c < other_idx)
        };
        if slope > 0.0 {
            Span { lo: partition(s + 1, |j| !wins(j)), hi: s }
        } else if slope < 0.0 {
            let cut = partition(s + 1, wins);
            if cut == 0 {
                Span::EMPTY
            } else {
                Span { lo: 0, hi: cut - 1 }
            }
        } else if wins(0) {
            Span { lo: 0, hi: s }
        } else {
            Span::EMPTY
        }
    }

    fn run(&self, samples: usize) -> Vec<Vec<f64>> {
        let (n, ell, rank) = (self.vectors.len(), self.ell, self.rank);
        let s = self.nbin.s as usize;
        let cdf = self.nbin.cdf();
        let mut rng = SeedStream::new(DERAND_SEED).rng("derand-samples", samples as u64);
        let coords = ell * rank;
        // sample t, coordinate (c, d) at t * coords + c * rank + d
        let mut draws: Vec<f64> = (0..samples * coords)
            .map(|_| self.values[quantile(&cdf, rng.random::<f64>()) as usize])
            .collect();
        // sample t, vertex i, colour c at (t * n + i) * ell + c
        let mut scores = vec![0.0; samples * n * ell];
        for t in 0..samples {
            for i in 0..n {
                for c in 0..ell {
                    let x = &draws[t * coords + c * rank..t * coords + (c + 1) * rank];
                    scores[(t * n + i) * ell + c] =
                        self.vectors[i].iter().zip(x).map(|(a, b)| a * b).sum();
                }
            }
        }

        let mut fixed = vec![vec![0.0; rank]; ell];
        let mut spans = vec![Span::EMPTY; n];
        let mut others = vec![0usize; n];
        for d in 0..rank {
            for c in 0..ell {
                let mut diff = vec![0.0; s + 2];
                for t in 0..samples {
                    let cur = draws[t * coords + c * rank + d];
                    for i in 0..n {
                        let row = &scores[(t * n + i) * ell..(t * n + i + 1) * ell];
                        let slope = self.vectors[i][d];
                        let base = row[c] - slope * cur;
                        let (mut other, mut other_idx) = (f64::NEG_INFINITY, usize::MAX);
                        for (c2, &sc) in row.iter().enumerate() {
                            if c2 != c && sc > other {
                                other = sc;
                                other_idx = c2;
                            }
                        }
                        spans[i] = self.winning_span(base, slope, other, other_idx, c);
                        others[i] = other_idx;
                    }
                    for &(u, v, w) in self.edges {
                        let both = spans[u].meet(spans[v]);
                        // proper iff exactly one endpoint takes c, or neither does and their other colours differ
                        add_span(&mut diff, spans[u], w);
                        add_span(&mut diff, spans[v], w);
                        add_span(&mut diff, both, -2.0 * w);
                        if others[u] != others[v] {
                            add_span(&mut diff, Span { lo: 0, hi: s }, w);
                            add_span(&mut diff, spans[u], -w);
                            add_span(&mut diff, spans[v], -w);
                            add_span(&mut diff, both, w);
                        }
                    }
                }
                let mut acc = 0.0;
                let gain: Vec<f64> = diff[..=s]
                    .iter()
                    .map(|&x| {
                        acc += x;
                        acc / samples as f64
                    })
                    .collect();
                let j = fix_bits(&gain, s as u32);
                let chosen = self.values[j];
                fixed[c][d] = chosen;
                for t in 0..samples {
                    let slot = t * coords + c * rank + d;
                    let delta = chosen - draws[slot];
                    draws[slot] = chosen;
                    if delta != 0.0 {
                        for i in 0..n {
                            scores[(t * n + i) * ell + c] += self.vectors[i][d] * delta;
                        }
                    }
                }
            }
        }
        fixed
    }
}

/// Fixes `s` exchangeable bits greedily; `gain[j]` is the estimated value with
/// `j` positive steps. Returns the final positive-step count.
fn fix_bits(gain: &[f64], s: u32) -> usize {
    let mut plus = 0usize;
    for remaining in (0..s).rev() {
        // conditional value after the next bit, remaining bits binomial
        let outlook = |start: usize| -> f64 {
            let r = remaining as f64;
            let spread = (10.0 * r.sqrt()).ceil() as i64 + 1;
            let mid = remaining as i64 / 2;
            let lo = (mid - spread).max(0) as u32;
            let hi = (mid + spread).min(remaining as i64) as u32;
            (lo..=hi)
                .map(|u| {
                    (ln_choose(remaining, u) - r * std::f64::consts::LN_2).exp()
                        * gain[start + u as usize]
                })
                .sum()
        };
        if outlook(plus + 1) >= outlook(plus) {
            plus += 1;
        }
    }
    plus
}

/// Deterministic rounding achieving at least `expected_fj_value - eps`.
///
/// `nbin = None` picks the smallest power-of-two `s` whose estimated
/// discretisation error is at most `eps / 2`; an explicit `s` whose estimate
/// exceeds that is rejected with the smallest feasible `s`.
pub fn derand_round(
    g: &Graph,
    sol: &GramSolution,
    ell: u32,
    eps: f64,
    nbin: Option<NBinSpec>,
) -> Result<RoundingOutcome> {
    derand_round_detailed(g, sol, ell, eps, nbin).map(|(out, _)| out)
}

pub fn derand_round_detailed(
    g: &Graph,
    sol: &GramSolution,
    ell: u32,
    eps: f64,
    nbin: Option<NBinSpec>,
) -> Result<(RoundingOutcome, DerandReport)> {
    check_inputs(g, sol, ell)?;
    if !(eps > 0.0) {
        return Err(Error::InvalidParameter(format!("eps = {eps} must be positive")));
    }
    let expected = expected_fj_value(g, sol, ell)?;
    let edges = normalised_edges(g);
    let rot = random_rotation(sol.rank, DERAND_SEED);
    let vectors = rotate(sol, &rot);
    let ell_us = ell as usize;
    let half_eps = eps / 2.0;

    let (nbin_grid, budget) = match nbin {
        Some(nbin_grid) => {
            NBinSpec::new(nbin_grid.s)?;
            let budget = discretisation_budget(&vectors, &edges, ell_us, nbin_grid, BUDGET_SAMPLES);
            if budget > half_eps {
                return Err(Error::DerandParameter {
                    s: nbin_grid.s,
                    budget,
                    half_eps,
                    min_feasible: minimal_steps(&vectors, &edges, ell_us, half_eps).map(|x| x.0.s),
                });
            }
            (nbin_grid, budget)
        }
        None => match minimal_steps(&vectors, &edges, ell_us, half_eps) {
            Some(found) => found,
            None => {
                let nbin_grid = NBinSpec { s: MAX_STEPS };
                return Err(Error::DerandParameter {
                    s: MAX_STEPS,
                    budget: discretisation_budget(&vectors, &edges, ell_us, nbin_grid, BUDGET_SAMPLES),
                    half_eps,
                    min_feasible: None,
                });
            }
        },
    };

    let values: Vec<f64> = (0..=nbin_grid.s).map(|j| nbin_grid.support(j)).collect();
    let greedy = Greedy {
        vectors: &vectors,
        edges: &edges,
        ell: ell_us,
        rank: sol.rank,
        nbin: nbin_grid,
        values,
    };
    let base_samples = ((36.0 / (eps * eps)).ceil() as usize).clamp(MIN_SAMPLES, MAX_SAMPLES);
    let target = expected - eps;
    let mut achieved = f64::NEG_INFINITY;
    for (attempt, samples) in [base_samples, 4 * base_samples].into_iter().enumerate() {
        let rotated_dirs = greedy.run(samples);
        // scores are invariant under rotating vectors and directions together
        let directions: Vec<Vec<f64>> = rotated_dirs
            .iter()
            .map(|x| {
                (0..sol.rank)
                    .map(|col| (0..sol.rank).map(|row| rot[(row, col)] * x[row]).sum())
                    .collect()
            })
            .collect();
        let colouring = Colouring::new(argmax_colours(sol, &directions), ell)?;
        let mut outcome = RoundingOutcome::new_derand(g, colouring, DERAND_SEED)?;
        achieved = outcome.achieved_f64();
        if achieved >= target {
            outcome.trials_used = attempt as u64 + 1;
            let report = DerandReport {
                s: nbin_grid.s,
                samples,
                discretisation_budget: budget,
                expected_value: expected,
                attempts: attempt as u32 + 1,
            };
            return Ok((outcome, report));
        }
        log::warn!("derandomised rounding reached {achieved} < {target} with {samples} samples");
    }
    Err(Error::DerandShortfall { achieved, target })
}

impl RoundingOutcome {
    fn new_derand(g: &Graph, colouring: Colouring, seed: u64) -> Result<Self> {
        let achieved_value = crate::graph::colouring_value(g, &colouring)?;
        Ok(Self {
            colouring,
            achieved_value,
            method: RoundingMethod::Derand,
            trials_used: 1,
            seed,
            best_trial: 0,
        })
    }
}
