//! The vector relaxation of maximum k-colouring and a low-rank solver for it.
//!
//! maximise `(1/m) sum_{(i,j) in E} ((k-1)/k) (1 - a_i . a_j)`
//! over unit vectors with `a_i . a_j >= -1/(k-1)` for all `i != j`.
//!
//! The solver factorises the Gram matrix as `Y Y^T` with `Y` of rank
//! `min(n, ceil(sqrt(2n)) + 2)`, keeps rows on the unit sphere, and handles the
//! inner-product floor with an augmented Lagrangian. Convergence is certified
//! by a dual bound built from the multipliers: if the dual bound minus the
//! primal objective is at most `target_eps`, the iterate is within
//! `target_eps` of the relaxation optimum.

use std::fmt::Write as _;
use std::collections::VecDeque;

use nalgebra::{DMatrix, SymmetricEigen};
use rand::Rng;
use rand_distr::StandardNormal;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::graph::Graph;
use crate::rng::SeedStream;

/// `k` unit vectors in `R^dim` with pairwise inner product `-1/(k-1)`.
///
/// Vector `i` is `(1, .., 1, 1-k, 1, .., 1, 0, .., 0) / sqrt(k(k-1))` with
/// `1-k` in position `i` and the first `k` coordinates populated.
pub fn simplex_vectors(k: usize, dim: usize) -> Result<Vec<Vec<f64>>> {
    if k < 2 {
        return Err(Error::InvalidParameter(format!("palette k = {k} must be >= 2")));
    }
    if dim < k {
        return Err(Error::InvalidParameter(format!(
            "dimension {dim} is smaller than palette {k}"
        )));
    }
    let scale = 1.0 / ((k * (k - 1)) as f64).sqrt();
    Ok((0..k)
        .map(|i| {
            (0..dim)
                .map(|c| match c {
                    c if c == i => (1.0 - k as f64) * scale,
                    c if c < k => scale,
                    _ => 0.0,
                })
                .collect()
        })
        .collect())
}

/// Constraint residuals of a set of vectors against the relaxation.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FeasibilityReport {
    /// `max |‖a_i‖ - 1|`
    pub max_norm_error: f64,
    /// Largest shortfall below `-1/(k-1)` over edge pairs.
    pub max_edge_violation: f64,
    /// Largest shortfall below `-1/(k-1)` over all pairs `i < j`.
    pub max_pair_violation: f64,
    pub pairs_checked: usize,
    /// Certified dual bound minus objective, when a certificate was computed.
    pub duality_gap: Option<f64>,
}

impl FeasibilityReport {
    pub fn max_violation(&self) -> f64 {
        self.max_norm_error
            .max(self.max_edge_violation)
            .max(self.max_pair_violation)
    }
}

/// Unit vectors `a_1..a_n` in `R^rank` with their relaxation value.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GramSolution {
    pub rank: usize,
    pub vectors: Vec<Vec<f64>>,
    pub objective: f64,
    pub k: u32,
    /// Achieved constraint tolerance.
    pub feas_tol: f64,
}

fn dot(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

fn floor_for(k: u32) -> f64 {
    -1.0 / (k as f64 - 1.0)
}

fn objective_of(g: &Graph, k: u32, inner: impl Fn(usize, usize) -> f64) -> f64 {
    let c = (k as f64 - 1.0) / k as f64;
    let total: f64 = g
        .non_loop_edges()
        .map(|&(u, v, w)| w as f64 * c * (1.0 - inner(u, v)))
        .sum();
    total / g.m() as f64
}

impl GramSolution {
    /// Wraps given vectors (normalised here) as a solution for `g`.
    pub fn from_vectors(g: &Graph, k: u32, vectors: Vec<Vec<f64>>) -> Result<Self> {
        if k < 2 {
            return Err(Error::InvalidParameter(format!("palette k = {k} must be >= 2")));
        }
        if vectors.len() != g.n() {
            return Err(Error::DimensionMismatch {
                expected: g.n(),
                found: vectors.len(),
            });
        }
        if g.m() == 0 {
            return Err(Error::EmptyEdgeSet);
        }
        let rank = vectors.first().map_or(0, Vec::len);
        let mut vectors = vectors;
        for v in &mut vectors {
            if v.len() != rank {
                return Err(Error::DimensionMismatch {
                    expected: rank,
                    found: v.len(),
                });
            }
            let norm = dot(v, v).sqrt();
            if !(norm > 0.0) || !norm.is_finite() {
                return Err(Error::InvalidParameter("zero or non-finite vector".into()));
            }
            v.iter_mut().for_each(|x| *x /= norm);
        }
        let mut sol = Self {
            rank,
            vectors,
            objective: 0.0,
            k,
            feas_tol: 0.0,
        };
        sol.objective = relaxation_objective(g, &sol)?;
        sol.feas_tol = sol.feasibility(g).max_violation();
        Ok(sol)
    }

    pub fn n(&self) -> usize {
        self.vectors.len()
    }

    /// Inner product of the vectors of vertices `u` and `v` (1-based).
    pub fn inner(&self, u: usize, v: usize) -> f64 {
        dot(&self.vectors[u - 1], &self.vectors[v - 1])
    }

    pub fn feasibility(&self, g: &Graph) -> FeasibilityReport {
        let floor = floor_for(self.k);
        let n = self.n();
        let max_norm_error = self
            .vectors
            .iter()
            .map(|v| (dot(v, v).sqrt() - 1.0).abs())
            .fold(0.0, f64::max);
        let max_edge_violation = g
            .non_loop_edges()
            .map(|&(u, v, _)| floor - self.inner(u, v))
            .fold(0.0, f64::max);
        let mut max_pair_violation: f64 = 0.0;
        for i in 0..n {
            for j in i + 1..n {
                max_pair_violation =
                    max_pair_violation.max(floor - dot(&self.vectors[i], &self.vectors[j]));
            }
        }
        FeasibilityReport {
            max_norm_error,
            max_edge_violation,
            max_pair_violation,
            pairs_checked: n * n.saturating_sub(1) / 2,
            duality_gap: None,
        }
    }

    /// Text form: `gram <n> <rank> <k>`, `n` rows of coordinates, then
    /// `objective` and `feas_tol` lines. Floats carry 17 significant digits.
    pub fn to_text(&self) -> String {
        let mut out = format!("gram {} {} {}\n", self.n(), self.rank, self.k);
        for v in &self.vectors {
            let row: Vec<String> = v.iter().map(|x| format!("{x:.16e}")).collect();
            out.push_str(&row.join(" "));
            out.push('\n');
        }
        writeln!(out, "objective {:.16e}", self.objective).unwrap();
        writeln!(out, "feas_tol {:.16e}", self.feas_tol).unwrap();
        out
    }

    pub fn from_text(text: &str) -> Result<Self> {
        let bad = |line: usize, reason: String| Error::Format {
            what: "gram",
            line,
            reason,
        };
        let mut lines = text
            .lines()
            .enumerate()
            .map(|(i, l)| (i + 1, l.trim()))
            .filter(|(_, l)| !l.is_empty());
        let (ln, header) = lines.next().ok_or_else(|| bad(0, "empty input".into()))?;
        let head: Vec<&str> = header.split_whitespace().collect();
        if head.len() != 4 || head[0] != "gram" {
            return Err(bad(ln, "expected `gram <n> <rank> <k>`".into()));
        }
        let num = |tok: &str, line: usize| -> Result<usize> {
            tok.parse().map_err(|_| bad(line, format!("bad integer `{tok}`")))
        };
        let n = num(head[1], ln)?;
        let rank = num(head[2], ln)?;
        let k = num(head[3], ln)? as u32;
        let float = |tok: &str, line: usize| -> Result<f64> {
            tok.parse().map_err(|_| bad(line, format!("bad float `{tok}`")))
        };
        let mut vectors = Vec::with_capacity(n);
        for _ in 0..n {
            let (ln, row) = lines.next().ok_or_else(|| bad(0, "missing vector rows".into()))?;
            let v = row
                .split_whitespace()
                .map(|t| float(t, ln))
                .collect::<Result<Vec<_>>>()?;
            if v.len() != rank {
                return Err(bad(ln, format!("expected {rank} coordinates, found {}", v.len())));
            }
            vectors.push(v);
        }
        let mut keyed = |key: &str| -> Result<f64> {
            let (ln, l) = lines.next().ok_or_else(|| bad(0, format!("missing `{key}` line")))?;
            match l.split_whitespace().collect::<Vec<_>>().as_slice() {
                [kw, val] if *kw == key => float(val, ln),
                _ => Err(bad(ln, format!("expected `{key} <value>`"))),
            }
        };
        let objective = keyed("objective")?;
        let feas_tol = keyed("feas_tol")?;
        Ok(Self {
            rank,
            vectors,
            objective,
            k,
            feas_tol,
        })
    }

    pub fn to_json(&self) -> Result<String> {
        Ok(serde_json::to_string(self)?)
    }

    pub fn from_json(text: &str) -> Result<Self> {
        Ok(serde_json::from_str(text)?)
    }
}

/// Recomputes the relaxation objective of `sol` on `g` from the vectors.
pub fn relaxation_objective(g: &Graph, sol: &GramSolution) -> Result<f64> {
    if sol.n() != g.n() {
        return Err(Error::DimensionMismatch {
            expected: g.n(),
            found: sol.n(),
        });
    }
    if g.m() == 0 {
        return Err(Error::EmptyEdgeSet);
    }
    Ok(objective_of(g, sol.k, |u, v| sol.inner(u, v)))
}

/// Penalty growth for the augmented Lagrangian.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PenaltySchedule {
    pub initial: f64,
    pub growth: f64,
    pub max: f64,
    /// Penalty grows when the violation fails to shrink by this factor.
    pub required_decrease: f64,
}

impl Default for PenaltySchedule {
    fn default() -> Self {
        Self {
            initial: 1.0,
            growth: 10.0,
            max: 1e9,
            required_decrease: 0.25,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SolverOptions {
    pub target_eps: f64,
    pub feas_tol: f64,
    /// Gradient steps per restart, across all outer rounds.
    pub max_iters: usize,
    pub restarts: usize,
    pub seed: u64,
    /// Overrides the default factorisation rank.
    pub rank: Option<usize>,
    pub penalty: PenaltySchedule,
}

impl Default for SolverOptions {
    fn default() -> Self {
        Self {
            target_eps: 1e-4,
            feas_tol: 1e-6,
            max_iters: 100_000,
            restarts: 4,
            seed: 0,
            rank: None,
            penalty: PenaltySchedule::default(),
        }
    }
}

impl SolverOptions {
    fn validate(&self) -> Result<()> {
        if !(self.target_eps > 0.0) || !(self.feas_tol > 0.0) {
            return Err(Error::InvalidParameter(
                "target_eps and feas_tol must be positive".into(),
            ));
        }
        if self.restarts == 0 || self.max_iters == 0 {
            return Err(Error::InvalidParameter("restarts and max_iters must be >= 1".into()));
        }
        let p = &self.penalty;
        if !(p.initial > 0.0) || !(p.growth > 1.0) || !(p.max >= p.initial) {
            return Err(Error::InvalidParameter("bad penalty schedule".into()));
        }
        Ok(())
    }
}

pub fn default_rank(n: usize) -> usize {
    n.min(((2 * n) as f64).sqrt().ceil() as usize + 2).max(1)
}

/// State of one augmented-Lagrangian run, `Y` stored row-major.
struct Factorised<'a> {
    n: usize,
    rank: usize,
    floor: f64,
    /// Symmetric, `c w / m` per edge entry.
    weights: &'a [f64],
    /// Multipliers for pairs, symmetric, zero diagonal.
    lambda: Vec<f64>,
    mu: f64,
}

impl Factorised<'_> {
    fn gram(&self, y: &[f64], out: &mut [f64]) {
        let (n, r) = (self.n, self.rank);
        for i in 0..n {
            let yi = &y[i * r..(i + 1) * r];
            for j in i..n {
                let v = dot(yi, &y[j * r..(j + 1) * r]);
                out[i * n + j] = v;
                out[j * n + i] = v;
            }
        }
    }

    /// Augmented Lagrangian value; fills `shift` with `max(0, lambda - mu g)`.
    fn value(&self, gram: &[f64], shift: &mut [f64]) -> f64 {
        let n = self.n;
        let mut total = 0.0;
        for i in 0..n {
            for j in i + 1..n {
                let idx = i * n + j;
                let g = gram[idx] - self.floor;
                let lam = self.lambda[idx];
                let s = (lam - self.mu * g).max(0.0);
                shift[idx] = s;
                shift[j * n + i] = s;
                total += self.weights[idx] * gram[idx] + (s * s - lam * lam) / (2.0 * self.mu);
            }
        }
        total
    }

    /// Riemannian gradient of the value at `y`, given the `shift` from `value`.
    fn gradient(&self, y: &[f64], shift: &[f64], out: &mut [f64]) {
        let (n, r) = (self.n, self.rank);
        out.iter_mut().for_each(|x| *x = 0.0);
        for i in 0..n {
            let row = &mut out[i * r..(i + 1) * r];
            for j in 0..n {
                let coef = self.weights[i * n + j] - shift[i * n + j];
                if coef != 0.0 {
                    for (o, &yj) in row.iter_mut().zip(&y[j * r..(j + 1) * r]) {
                        *o += coef * yj;
                    }
                }
            }
            let yi = &y[i * r..(i + 1) * r];
            let radial = dot(row, yi);
            for (o, &v) in row.iter_mut().zip(yi) {
                *o -= radial * v;
            }
        }
    }
}

/// Inner gradient steps before the first multiplier update, doubling after each;
/// early inexact solves keep the multipliers moving.
const INNER_CAP: usize = 5000;
/// Line-search reference is the worst of this many recent values, which suits BB steps.
const NONMONOTONE_WINDOW: usize = 10;

/// A run that ends within this multiple of `feas_tol` is repaired rather than discarded.
const REPAIR_FACTOR: f64 = 100.0;

/// Weight sending a pair at `floor - violation` exactly to `floor` under `repair`.
fn repair_weight(violation: f64, floor: f64) -> f64 {
    violation / (1.0 - floor + violation)
}

/// Appends a shared coordinate: rows become `(sqrt(1 - theta) y_i, sqrt(theta))`,
/// so every inner product `g` becomes `(1 - theta) g + theta`. The map is
/// increasing in `g`, so with `repair_weight` every pair becomes feasible.
fn repair(y: &[f64], rank: usize, theta: f64) -> Vec<f64> {
    let (scale, lift) = ((1.0 - theta).sqrt(), theta.sqrt());
    y.chunks(rank)
        .flat_map(|row| row.iter().map(move |x| x * scale).chain(std::iter::once(lift)))
        .collect()
}

fn normalise_rows(y: &mut [f64], rank: usize) {
    for row in y.chunks_mut(rank) {
        let norm = dot(row, row).sqrt();
        row.iter_mut().for_each(|x| *x /= norm);
    }
}

/// Dual bound `objective + sum lambda g + n * shift` where `shift` makes the
/// dual slack matrix positive semidefinite.
fn dual_bound(
    n: usize,
    weights: &[f64],
    lambda: &[f64],
    gram: &[f64],
    floor: f64,
    objective: f64,
) -> f64 {
    // slack = A - Lambda/2 + Diag(z) with A = weights/2
    let mut slack = DMatrix::<f64>::zeros(n, n);
    let mut comp = 0.0;
    for i in 0..n {
        let mut zi = 0.0;
        for j in 0..n {
            if i != j {
                let entry = 0.5 * (weights[i * n + j] - lambda[i * n + j]);
                slack[(i, j)] = entry;
                zi -= entry * gram[i * n + j];
                if j > i {
                    comp += lambda[i * n + j] * (gram[i * n + j] - floor);
                }
            }
        }
        slack[(i, i)] = zi;
    }
    let min_eig = SymmetricEigen::new(slack)
        .eigenvalues
        .iter()
        .copied()
        .fold(f64::INFINITY, f64::min);
    objective + comp + n as f64 * (-min_eig).max(0.0)
}

struct RunResult {
    /// Row-major with `rank` columns; a repaired iterate has one more than the solver rank.
    y: Vec<f64>,
    rank: usize,
    violation: f64,
    gap: Option<f64>,
    objective: f64,
}

fn run_restart(g: &Graph, k: u32, rank: usize, opts: &SolverOptions, restart: usize) -> RunResult {
    let n = g.n();
    let floor = floor_for(k);
    let c = (k as f64 - 1.0) / k as f64;
    let mut weights = vec![0.0; n * n];
    for &(u, v, w) in g.non_loop_edges() {
        let x = c * w as f64 / g.m() as f64;
        weights[(u - 1) * n + (v - 1)] += x;
        weights[(v - 1) * n + (u - 1)] += x;
    }
    // the value minimises sum_{i<j} weights_ij <a_i, a_j>, i.e. maximises the objective
    // every edge contributes at most 1 on the feasible set, loops nothing
    let ceiling = (g.m() - g.loop_mass()) as f64 / g.m() as f64;
    let objective_at = |gram: &[f64]| -> f64 {
        objective_of(g, k, |u, v| gram[(u - 1) * n + (v - 1)])
    };

    let mut rng = SeedStream::new(opts.seed).rng("sdp-restart", restart as u64);
    let mut y: Vec<f64> = (0..n * rank).map(|_| rng.sample(StandardNormal)).collect();
    normalise_rows(&mut y, rank);

    let mut state = Factorised {
        n,
        rank,
        floor,
        weights: &weights,
        lambda: vec![0.0; n * n],
        mu: opts.penalty.initial,
    };
    let mut gram = vec![0.0; n * n];
    let mut shift = vec![0.0; n * n];
    let mut grad = vec![0.0; n * rank];
    let mut y_new = vec![0.0; n * rank];
    let mut gram_new = vec![0.0; n * n];
    let mut shift_new = vec![0.0; n * n];
    let mut grad_new = vec![0.0; n * rank];

    let mut iters_left = opts.max_iters;
    let mut prev_violation = f64::INFINITY;
    let mut best = RunResult {
        y: y.clone(),
        rank,
        violation: f64::INFINITY,
        gap: None,
        objective: f64::NEG_INFINITY,
    };
    let mut inner_tol = 1e-4;
    let mut inner_cap = INNER_CAP;

    while iters_left > 0 {
        // inner loop: Riemannian gradient descent with BB steps and Armijo backtracking
        state.gram(&y, &mut gram);
        let mut val = state.value(&gram, &mut shift);
        state.gradient(&y, &shift, &mut grad);
        let mut step = 1.0;
        let mut recent: VecDeque<f64> = VecDeque::from([val]);
        let mut inner_left = inner_cap;
        inner_cap = inner_cap.saturating_mul(2);
        while iters_left > 0 && inner_left > 0 {
            iters_left -= 1;
            inner_left -= 1;
            let gnorm2 = dot(&grad, &grad);
            if gnorm2.sqrt() <= inner_tol {
                break;
            }
            let mut accepted = false;
            let mut t = step;
            for _ in 0..40 {
                for ((yn, &yo), &gr) in y_new.iter_mut().zip(&y).zip(&grad) {
                    *yn = yo - t * gr;
                }
                normalise_rows(&mut y_new, rank);
                state.gram(&y_new, &mut gram_new);
                let val_new = state.value(&gram_new, &mut shift_new);
                let reference = recent.iter().copied().fold(f64::NEG_INFINITY, f64::max);
                if val_new <= reference - 1e-4 * t * gnorm2 {
                    state.gradient(&y_new, &shift_new, &mut grad_new);
                    let mut ss = 0.0;
                    let mut sy = 0.0;
                    for i in 0..y.len() {
                        let s = y_new[i] - y[i];
                        ss += s * s;
                        sy += s * (grad_new[i] - grad[i]);
                    }
                    step = if sy.abs() > 0.0 { (ss / sy.abs()).clamp(1e-10, 1e10) } else { t * 2.0 };
                    std::mem::swap(&mut y, &mut y_new);
                    std::mem::swap(&mut gram, &mut gram_new);
                    std::mem::swap(&mut shift, &mut shift_new);
                    std::mem::swap(&mut grad, &mut grad_new);
                    val = val_new;
                    if recent.len() == NONMONOTONE_WINDOW {
                        recent.pop_front();
                    }
                    recent.push_back(val);
                    accepted = true;
                    break;
                }
                t *= 0.5;
            }
            if !accepted {
                break;
            }
        }

        let mut violation: f64 = 0.0;
        for i in 0..n {
            for j in i + 1..n {
                violation = violation.max(floor - gram[i * n + j]);
            }
        }
        // multiplier update: lambda <- max(0, lambda - mu g), which is `shift`
        state.lambda.copy_from_slice(&shift);
        let objective = objective_at(&gram);

        if violation <= opts.feas_tol {
            let bound = dual_bound(n, &weights, &state.lambda, &gram, floor, objective).min(ceiling);
            let gap = (bound - objective).max(0.0);
            if best.gap.is_none_or(|bg| gap < bg) || objective > best.objective {
                best = RunResult {
                    y: y.clone(),
                    rank,
                    violation,
                    gap: Some(gap),
                    objective,
                };
            }
            if gap <= opts.target_eps {
                return best;
            }
        } else if best.gap.is_none() && violation < best.violation {
            best = RunResult {
                y: y.clone(),
                rank,
                violation,
                gap: None,
                objective,
            };
        }

        if violation > opts.penalty.required_decrease * prev_violation {
            state.mu = (state.mu * opts.penalty.growth).min(opts.penalty.max);
        }
        prev_violation = violation;
        inner_tol = (inner_tol * 0.3).max(1e-10);
    }
    if best.gap.is_none() && best.violation <= REPAIR_FACTOR * opts.feas_tol {
        // stalled just outside the feasible set, typically at an optimum on the boundary
        state.gram(&best.y, &mut gram);
        let theta = repair_weight(best.violation, floor);
        gram.iter_mut().for_each(|x| *x = (1.0 - theta) * *x + theta);
        let objective = objective_at(&gram);
        let bound = dual_bound(n, &weights, &state.lambda, &gram, floor, objective).min(ceiling);
        return RunResult {
            y: repair(&best.y, rank, theta),
            rank: rank + 1,
            violation: 0.0,
            gap: Some((bound - objective).max(0.0)),
            objective,
        };
    }
    best
}

/// Solves the relaxation of `g` with palette `k`.
///
/// Restarts run sequentially from seeded random starts; the first restart
/// whose iterate is feasible to `feas_tol` and certified within `target_eps`
/// of optimal is returned. Otherwise the error carries the best iterate.
pub fn solve_relaxation(g: &Graph, k: u32, opts: &SolverOptions) -> Result<GramSolution> {
    opts.validate()?;
    if k < 2 {
        return Err(Error::InvalidParameter(format!("palette k = {k} must be >= 2")));
    }
    if g.m() == 0 {
        return Err(Error::EmptyEdgeSet);
    }
    let n = g.n();
    let rank = opts.rank.unwrap_or_else(|| default_rank(n)).clamp(1, n.max(1));

    if g.non_loop_edges().next().is_none() {
        // only loops: every feasible point has objective 0, identical vectors included
        let mut e = vec![0.0; rank];
        e[0] = 1.0;
        return GramSolution::from_vectors(g, k, vec![e; n]);
    }

    let mut best: Option<RunResult> = None;
    for restart in 0..opts.restarts {
        let run = run_restart(g, k, rank, opts, restart);
        if run.gap.is_some_and(|gap| gap <= opts.target_eps) {
            return Ok(assemble(g, k, run.rank, &run.y));
        }
        let better = match &best {
            None => true,
            Some(b) => match (run.gap, b.gap) {
                (Some(x), Some(y)) => x < y,
                (Some(_), None) => true,
                (None, Some(_)) => false,
                (None, None) => run.violation < b.violation,
            },
        };
        if better {
            best = Some(run);
        }
    }
    let best = best.expect("at least one restart");
    let sol = assemble(g, k, best.rank, &best.y);
    let mut report = sol.feasibility(g);
    report.duality_gap = best.gap;
    Err(Error::NonConvergence {
        best: Box::new(sol),
        report,
    })
}

fn assemble(g: &Graph, k: u32, rank: usize, y: &[f64]) -> GramSolution {
    let vectors: Vec<Vec<f64>> = y.chunks(rank).map(<[f64]>::to_vec).collect();
    let mut sol = GramSolution {
        rank,
        vectors,
        objective: 0.0,
        k,
        feas_tol: 0.0,
    };
    sol.objective = objective_of(g, k, |u, v| sol.inner(u, v));
    sol.feas_tol = sol.feasibility(g).max_violation();
    sol
}
