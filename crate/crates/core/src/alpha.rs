//! The rounding constants: `P_l(a)`, `N_l(a)`, `alpha_kl`, `alpha'_kl`, the
//! tabulated constants, and the `F_T` simplex inequality audit.
//!
//! `P_l(a)` is the probability that index 1 wins the argmax in both of two
//! families of `l` standard normals, where the families are `a`-correlated
//! coordinate-wise. Conditioning on the winner's pair `(x, a x + b y)` with
//! `b = sqrt(1 - a^2)`, every other index independently lands below it in both
//! families with probability `Phi2(x, a x + b y; a)`, so
//!
//! `P_l(a) = E[ Phi2(X, aX + bY; a)^(l-1) ]`
//!
//! which is evaluated by tensor Gauss-Legendre quadrature on `[-8, 8]^2`.

use std::f64::consts::PI;
use std::fmt::Write as _;
use std::path::{Path, PathBuf};
use std::sync::OnceLock;

use rand::Rng;
use rand_distr::{Distribution, Exp1};
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::gaussian::{bvn_cdf, norm_pdf};
use crate::quadrature::{composite_nodes, GaussLegendre};
use crate::rng::SeedStream;

/// Half-width of the truncated integration square.
pub const TRUNCATION: f64 = 8.0;
/// Default absolute tolerance for `p_ell`.
pub const P_ELL_TOL: f64 = 1e-7;
/// Required accuracy of `alpha_kl`.
pub const ALPHA_TOL: f64 = 5e-4;
/// Coarse grid size for the ratio minimisations.
pub const ALPHA_GRID: usize = 400;
/// The open endpoint `a < 1` is approached no closer than this.
pub const ENDPOINT_GAP: f64 = 1e-6;

/// Mass of the standard bivariate normal outside `[-8, 8]^2`.
fn truncation_tail() -> f64 {
    // Pr[|X| > 8] + Pr[|Y| > 8]
    4.0 * crate::gaussian::norm_cdf(-TRUNCATION)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum EstimateMethod {
    Quadrature,
    ClosedForm,
    Minimization,
}

#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
pub struct Diagnostics {
    /// Quadrature nodes per axis, or coarse grid size for minimisations.
    pub grid_size: usize,
    /// Minimiser of the ratio, for minimisation results.
    pub a_star: Option<f64>,
    /// `1 - X_k^t`, reported by `alpha_prime_kl`.
    pub closed_form: Option<f64>,
    pub minimizer_at_left_endpoint: Option<bool>,
}

/// A numerically computed constant with an absolute error bound.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct AlphaEstimate {
    pub value: f64,
    pub abs_error_bound: f64,
    pub method: EstimateMethod,
    pub diagnostics: Diagnostics,
}

/// Fixed tensor-product node set for the `P_l` integral.
#[derive(Debug, Clone)]
pub struct PellGrid {
    /// `(node, weight * phi(node))`, with negligible nodes dropped.
    nodes: Vec<(f64, f64)>,
    per_axis: usize,
}

impl PellGrid {
    pub fn new(panels: usize, order: usize) -> Self {
        let rule = GaussLegendre::new(order);
        let nodes: Vec<_> = composite_nodes(&rule, -TRUNCATION, TRUNCATION, panels)
            .into_iter()
            .map(|(x, w)| (x, w * norm_pdf(x)))
            .collect();
        let per_axis = nodes.len();
        Self { nodes, per_axis }
    }

    /// The grid used for minimisation sweeps (error around 1e-8).
    pub fn sweep() -> &'static PellGrid {
        static GRID: OnceLock<PellGrid> = OnceLock::new();
        GRID.get_or_init(|| PellGrid::new(8, 8))
    }

    pub fn per_axis(&self) -> usize {
        self.per_axis
    }

    /// `P_l(a)` for every `l` in `2..=max_ell`; index `l` of the result, entries 0 and 1 unused.
    pub fn p_ell_all(&self, a: f64, max_ell: u32) -> Vec<f64> {
        let a = a.clamp(-1.0, 1.0);
        let b = (1.0 - a * a).max(0.0).sqrt();
        let max_ell = max_ell as usize;
        let mut acc = vec![0.0; max_ell + 1];
        for &(x, wx) in &self.nodes {
            if wx < 1e-22 {
                continue;
            }
            for &(y, wy) in &self.nodes {
                let w = wx * wy;
                if w < 1e-22 {
                    continue;
                }
                let f = bvn_cdf(x, a * x + b * y, a);
                let mut term = w;
                for slot in acc.iter_mut().take(max_ell + 1).skip(2) {
                    term *= f;
                    *slot += term;
                }
            }
        }
        acc
    }

    pub fn p_ell(&self, a: f64, ell: u32) -> f64 {
        self.p_ell_all(a, ell)[ell as usize]
    }
}

fn refinement_grids() -> &'static [PellGrid] {
    static GRIDS: OnceLock<Vec<PellGrid>> = OnceLock::new();
    GRIDS.get_or_init(|| {
        [(6, 10), (10, 10), (16, 10), (24, 12)]
            .iter()
            .map(|&(p, o)| PellGrid::new(p, o))
            .collect()
    })
}

fn check_ell(ell: u32) -> Result<()> {
    if ell < 2 {
        return Err(Error::InvalidParameter(format!("palette l = {ell} must be >= 2")));
    }
    Ok(())
}

/// `P_l(a)` to absolute tolerance `tol`, refining the grid until two
/// successive estimates agree.
pub fn p_ell_with_tol(a: f64, ell: u32, tol: f64) -> Result<AlphaEstimate> {
    check_ell(ell)?;
    if !(-1.0..=1.0).contains(&a) {
        return Err(Error::InvalidParameter(format!("inner product {a} outside [-1, 1]")));
    }
    let grids = refinement_grids();
    let mut prev = grids[0].p_ell(a, ell);
    let mut best = (prev, f64::INFINITY, grids[0].per_axis());
    for grid in &grids[1..] {
        let cur = grid.p_ell(a, ell);
        let err = (cur - prev).abs() + truncation_tail();
        best = (cur, err, grid.per_axis());
        if err <= tol {
            return Ok(AlphaEstimate {
                value: cur,
                abs_error_bound: err,
                method: EstimateMethod::Quadrature,
                diagnostics: Diagnostics {
                    grid_size: grid.per_axis(),
                    ..Default::default()
                },
            });
        }
        prev = cur;
    }
    Err(Error::Quadrature {
        estimate: best.0,
        error: best.1,
        tolerance: tol,
    })
}

pub fn p_ell(a: f64, ell: u32) -> Result<AlphaEstimate> {
    p_ell_with_tol(a, ell, P_ELL_TOL)
}

/// `N_l(a) = l P_l(a)`.
pub fn n_ell(a: f64, ell: u32) -> Result<f64> {
    Ok(ell as f64 * p_ell(a, ell)?.value)
}

fn check_kl(k: u32, ell: u32) -> Result<()> {
    if k < 2 || ell < k {
        return Err(Error::InvalidParameter(format!(
            "need 2 <= k <= l, got k = {k}, l = {ell}"
        )));
    }
    Ok(())
}

/// Left end of the feasible inner-product range for palette `k`.
pub fn feasible_floor(k: u32) -> f64 {
    -1.0 / (k as f64 - 1.0)
}

fn fj_ratio(k: u32, ell: u32, a: f64, p: f64) -> f64 {
    let kf = k as f64;
    kf * (1.0 - ell as f64 * p) / ((kf - 1.0) * (1.0 - a))
}

fn coarse_grid(k: u32) -> Vec<f64> {
    let lo = feasible_floor(k);
    let hi = 1.0 - ENDPOINT_GAP;
    (0..ALPHA_GRID)
        .map(|i| lo + (hi - lo) * i as f64 / (ALPHA_GRID - 1) as f64)
        .collect()
}

/// Golden-section search for the minimum of `f` on `[lo, hi]`.
fn golden_min<F: FnMut(f64) -> f64>(mut f: F, lo: f64, hi: f64, tol: f64) -> (f64, f64) {
    let inv_phi = (5f64.sqrt() - 1.0) / 2.0;
    let (mut a, mut b) = (lo, hi);
    let mut c = b - inv_phi * (b - a);
    let mut d = a + inv_phi * (b - a);
    let mut fc = f(c);
    let mut fd = f(d);
    while b - a > tol {
        if fc <= fd {
            b = d;
            d = c;
            fd = fc;
            c = b - inv_phi * (b - a);
            fc = f(c);
        } else {
            a = c;
            c = d;
            fc = fd;
            d = a + inv_phi * (b - a);
            fd = f(d);
        }
    }
    let (fa, fb) = (f(a), f(b));
    [(a, fa), (b, fb), (c, fc), (d, fd)]
        .into_iter()
        .fold((f64::NAN, f64::INFINITY), |best, cand| if cand.1 < best.1 { cand } else { best })
}

/// Refines a coarse-grid minimum and attaches an error bound.
fn refine_alpha(k: u32, ell: u32, grid: &[f64], ratios: &[f64]) -> Result<AlphaEstimate> {
    let sweep = PellGrid::sweep();
    let (best_idx, _) = ratios
        .iter()
        .enumerate()
        .fold((0, f64::INFINITY), |b, (i, &r)| if r < b.1 { (i, r) } else { b });
    let lo = grid[best_idx.saturating_sub(1)];
    let hi = grid[(best_idx + 1).min(grid.len() - 1)];
    let (a_star, _) = golden_min(|a| fj_ratio(k, ell, a, sweep.p_ell(a, ell)), lo, hi, 1e-7);

    let precise = p_ell_with_tol(a_star, ell, 1e-9)?;
    let value = fj_ratio(k, ell, a_star, precise.value);
    let kf = k as f64;
    let scale = ell as f64 * kf / ((kf - 1.0) * (1.0 - a_star));
    // the minimum is flat to first order unless it sits on an endpoint, where a_star is exact
    let location = (fj_ratio(k, ell, a_star + 1e-7, sweep.p_ell(a_star + 1e-7, ell))
        - fj_ratio(k, ell, a_star, sweep.p_ell(a_star, ell)))
    .abs();
    let abs_error_bound = scale * precise.abs_error_bound + location;
    if abs_error_bound > ALPHA_TOL {
        return Err(Error::Quadrature {
            estimate: value,
            error: abs_error_bound,
            tolerance: ALPHA_TOL,
        });
    }
    Ok(AlphaEstimate {
        value,
        abs_error_bound,
        method: EstimateMethod::Minimization,
        diagnostics: Diagnostics {
            grid_size: grid.len(),
            a_star: Some(a_star),
            closed_form: None,
            minimizer_at_left_endpoint: Some((a_star - grid[0]).abs() < 1e-6),
        },
    })
}

/// `alpha_kl = min over -1/(k-1) <= a < 1 of k (1 - l P_l(a)) / ((k-1)(1-a))`.
///
/// Coarse sweep of `ALPHA_GRID` points, then golden-section refinement in the
/// bracket around the best sweep point. The ratio is smooth but not known to
/// be unimodal, so the sweep is what guards against a wrong basin.
pub fn alpha_kl(k: u32, ell: u32) -> Result<AlphaEstimate> {
    check_kl(k, ell)?;
    let sweep = PellGrid::sweep();
    let grid = coarse_grid(k);
    let ratios: Vec<f64> = grid
        .iter()
        .map(|&a| fj_ratio(k, ell, a, sweep.p_ell(a, ell)))
        .collect();
    refine_alpha(k, ell, &grid, &ratios)
}

/// Constants of the hyperplane rounding with `t = floor(log2 l)` cuts.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct KmsConstants {
    pub t: u32,
    /// `1 - arccos(-1/(k-1)) / pi`
    pub x_k: f64,
    /// `-log2(x_k)`
    pub u_k: f64,
}

impl KmsConstants {
    pub fn new(k: u32, ell: u32) -> Result<Self> {
        if k < 2 || ell < 2 {
            return Err(Error::InvalidParameter(format!(
                "need k, l >= 2, got k = {k}, l = {ell}"
            )));
        }
        let t = 31 - ell.leading_zeros();
        let x_k = 1.0 - feasible_floor(k).acos() / PI;
        Ok(Self {
            t,
            x_k,
            u_k: -x_k.log2(),
        })
    }

    /// Probability that `t` independent hyperplanes separate unit vectors at inner product `a`.
    pub fn separation_probability(&self, a: f64) -> f64 {
        1.0 - (1.0 - a.clamp(-1.0, 1.0).acos() / PI).powi(self.t as i32)
    }

    pub fn closed_form(&self) -> f64 {
        1.0 - self.x_k.powi(self.t as i32)
    }
}

/// `alpha'_kl`, the hyperplane-rounding ratio, minimised numerically.
pub fn alpha_prime_kl(k: u32, ell: u32) -> Result<AlphaEstimate> {
    if k <= 2 || ell < k {
        return Err(Error::InvalidParameter(format!(
            "need 2 < k <= l, got k = {k}, l = {ell}"
        )));
    }
    let consts = KmsConstants::new(k, ell)?;
    let kf = k as f64;
    let ratio = |a: f64| kf * consts.separation_probability(a) / ((kf - 1.0) * (1.0 - a));
    let grid = coarse_grid(k);
    let values: Vec<f64> = grid.iter().map(|&a| ratio(a)).collect();
    let (best_idx, _) = values
        .iter()
        .enumerate()
        .fold((0, f64::INFINITY), |b, (i, &r)| if r < b.1 { (i, r) } else { b });
    let lo = grid[best_idx.saturating_sub(1)];
    let hi = grid[(best_idx + 1).min(grid.len() - 1)];
    let (a_star, value) = golden_min(ratio, lo, hi, 1e-12);
    Ok(AlphaEstimate {
        value,
        abs_error_bound: 1e-10,
        method: EstimateMethod::Minimization,
        diagnostics: Diagnostics {
            grid_size: grid.len(),
            a_star: Some(a_star),
            closed_form: Some(consts.closed_form()),
            minimizer_at_left_endpoint: Some((a_star - grid[0]).abs() < 1e-9),
        },
    })
}

/// Upper-triangular table of `alpha_kl`; `cell(k, l)` is `None` for `l < k`.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct AlphaTable {
    pub ks: Vec<u32>,
    pub ells: Vec<u32>,
    cells: Vec<Vec<Option<AlphaEstimate>>>,
}

impl AlphaTable {
    pub fn cell(&self, k: u32, ell: u32) -> Option<&AlphaEstimate> {
        let i = self.ks.iter().position(|&x| x == k)?;
        let j = self.ells.iter().position(|&x| x == ell)?;
        self.cells[i][j].as_ref()
    }

    pub fn iter(&self) -> impl Iterator<Item = (u32, u32, &AlphaEstimate)> {
        self.ks.iter().enumerate().flat_map(move |(i, &k)| {
            self.ells
                .iter()
                .enumerate()
                .filter_map(move |(j, &l)| self.cells[i][j].as_ref().map(|e| (k, l, e)))
        })
    }

    /// `k,l,alpha,error_bound,a_star` rows.
    pub fn to_csv(&self) -> String {
        let mut out = String::from("k,l,alpha,error_bound,a_star\n");
        for (k, l, e) in self.iter() {
            writeln!(
                out,
                "{k},{l},{:.6},{:.3e},{:.6}",
                e.value,
                e.abs_error_bound,
                e.diagnostics.a_star.unwrap_or(f64::NAN)
            )
            .unwrap();
        }
        out
    }

    /// Text grid with rows `k` and columns `l`, three decimals, leading zero dropped.
    pub fn to_text(&self) -> String {
        let mut out = String::from("k\\l");
        for l in &self.ells {
            write!(out, " {l:>5}").unwrap();
        }
        out.push('\n');
        for (i, k) in self.ks.iter().enumerate() {
            write!(out, "{k:>3}").unwrap();
            for cell in &self.cells[i] {
                match cell {
                    Some(e) => {
                        let s = format!("{:.3}", e.value);
                        write!(out, " {:>5}", s.trim_start_matches('0')).unwrap();
                    }
                    None => write!(out, " {:>5}", "").unwrap(),
                }
            }
            out.push('\n');
        }
        out
    }
}

/// Computes the upper triangle of `alpha_kl` for the given ranges.
///
/// The sweep for one `k` evaluates `P_l` for all `l` at once (the bivariate
/// CDF grid does not depend on `l`), so a row costs about as much as a cell.
/// Every cell equals what `alpha_kl` returns for it.
pub fn alpha_table(ks: &[u32], ells: &[u32]) -> Result<AlphaTable> {
    let max_ell = ells.iter().copied().max().unwrap_or(2);
    for &k in ks {
        if k < 2 {
            return Err(Error::InvalidParameter(format!("k = {k} must be >= 2")));
        }
    }
    let rows: Result<Vec<Vec<Option<AlphaEstimate>>>> = ks
        .par_iter()
        .map(|&k| {
            let grid = coarse_grid(k);
            let sweep = PellGrid::sweep();
            let p_rows: Vec<Vec<f64>> = grid.iter().map(|&a| sweep.p_ell_all(a, max_ell)).collect();
            ells.par_iter()
                .map(|&l| {
                    if l < k {
                        return Ok(None);
                    }
                    let ratios: Vec<f64> = grid
                        .iter()
                        .zip(&p_rows)
                        .map(|(&a, ps)| fj_ratio(k, l, a, ps[l as usize]))
                        .collect();
                    refine_alpha(k, l, &grid, &ratios).map(Some)
                })
                .collect()
        })
        .collect();
    Ok(AlphaTable {
        ks: ks.to_vec(),
        ells: ells.to_vec(),
        cells: rows?,
    })
}

/// On-disk cache of `alpha_kl`, one JSON file per `(k, l, tolerance)`.
#[derive(Debug, Clone)]
pub struct AlphaCache {
    dir: PathBuf,
}

impl AlphaCache {
    pub const ENV_VAR: &'static str = "PROMISE_COLOR_CACHE";

    pub fn new(dir: impl Into<PathBuf>) -> Self {
        Self { dir: dir.into() }
    }

    pub fn from_env() -> Option<Self> {
        std::env::var_os(Self::ENV_VAR).map(Self::new)
    }

    pub fn dir(&self) -> &Path {
        &self.dir
    }

    fn path(&self, k: u32, ell: u32) -> PathBuf {
        self.dir.join(format!("alpha_k{k}_l{ell}_tol{ALPHA_TOL:e}.json"))
    }

    pub fn get(&self, k: u32, ell: u32) -> Option<AlphaEstimate> {
        let text = std::fs::read_to_string(self.path(k, ell)).ok()?;
        serde_json::from_str(&text).ok()
    }

    pub fn put(&self, k: u32, ell: u32, est: &AlphaEstimate) -> Result<()> {
        std::fs::create_dir_all(&self.dir)?;
        std::fs::write(self.path(k, ell), serde_json::to_string(est)?)?;
        Ok(())
    }

    /// Cached `alpha_kl`, computing and storing it on a miss.
    pub fn alpha_kl(&self, k: u32, ell: u32) -> Result<AlphaEstimate> {
        if let Some(hit) = self.get(k, ell) {
            return Ok(hit);
        }
        let est = alpha_kl(k, ell)?;
        if let Err(e) = self.put(k, ell, &est) {
            log::warn!("could not write alpha cache in {}: {e}", self.dir.display());
        }
        Ok(est)
    }
}

/// `alpha_kl` through the cache named by `PROMISE_COLOR_CACHE`, if set.
pub fn alpha_kl_cached(k: u32, ell: u32) -> Result<AlphaEstimate> {
    match AlphaCache::from_env() {
        Some(cache) => cache.alpha_kl(k, ell),
        None => alpha_kl(k, ell),
    }
}

/// `F_T(x) = x^2 (1 + T ln x)` with `F_T(0) = 0`.
pub fn f_t(t: f64, x: f64) -> f64 {
    if x <= 0.0 {
        0.0
    } else {
        x * x * (1.0 + t * x.ln())
    }
}

/// Right-hand side `1/l - T ln(l)/l - 4 l e^(-1/T)`.
pub fn ft_lower_bound(t: f64, ell: u32) -> f64 {
    let l = ell as f64;
    1.0 / l - t * l.ln() / l - 4.0 * l * (-1.0 / t).exp()
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FtReport {
    pub points_checked: usize,
    pub min_slack: f64,
    pub argmin: Vec<f64>,
}

fn structured_simplex_points(t: f64, ell: usize) -> Vec<Vec<f64>> {
    let mut pts = Vec::new();
    pts.push(vec![1.0 / ell as f64; ell]);
    let mut one_hot = vec![0.0; ell];
    one_hot[0] = 1.0;
    pts.push(one_hot);
    // two blocks: j coordinates share `mass`, the rest share `1 - mass`
    for j in 1..ell {
        for &mass in &[0.5, 0.75, 0.9, 0.99, 0.999, 1.0] {
            let mut p = vec![mass / j as f64; j];
            p.extend(std::iter::repeat_n((1.0 - mass) / (ell - j) as f64, ell - j));
            pts.push(p);
        }
    }
    // coordinates parked at the minimiser of F_T, the rest uniform
    let dust = (-1.0 / t - 1.5).exp();
    for j in 1..ell {
        let parked = dust * j as f64;
        if parked < 1.0 {
            let mut p = vec![dust; j];
            p.extend(std::iter::repeat_n((1.0 - parked) / (ell - j) as f64, ell - j));
            pts.push(p);
        }
    }
    pts
}

/// Audits `sum F_T(x_i) >= 1/l - T ln(l)/l - 4 l e^(-1/T)` on the simplex.
///
/// Structured points (uniform, one-hot, two-block, points at the minimiser
/// of `F_T`) plus `trials` random points drawn from Dirichlet(1) and
/// Dirichlet(0.2). A point fails only when its slack is negative beyond the
/// floating-point error of evaluating both sides, so `min_slack` may be a
/// few ulps below zero.
pub fn ft_bound_check(t: f64, ell: u32, trials: usize, seed: u64) -> Result<FtReport> {
    if !(t > 0.0) {
        return Err(Error::InvalidParameter(format!("T = {t} must be positive")));
    }
    if ell < 1 || (ell as f64) >= (1.0 / t).exp() {
        return Err(Error::InvalidParameter(format!("need 1 <= l < e^(1/T), got l = {ell}")));
    }
    let bound = ft_lower_bound(t, ell);
    let n = ell as usize;
    let mut report = FtReport {
        points_checked: 0,
        min_slack: f64::INFINITY,
        argmin: Vec::new(),
    };
    let l = ell as f64;
    let bound_scale = 1.0 / l + t * l.ln() / l;
    let mut check = |p: Vec<f64>| -> Result<()> {
        let lhs: f64 = p.iter().map(|&x| f_t(t, x)).sum();
        let magnitude: f64 = p.iter().map(|&x| f_t(t, x).abs()).sum();
        let slack = lhs - bound;
        // forward error of the two evaluations; at the uniform point the true
        // slack is 4 l e^(-1/T), far below one ulp for small T
        let rounding = 4.0 * f64::EPSILON * ((n as f64 + 2.0) * magnitude + bound_scale);
        report.points_checked += 1;
        if slack < -rounding {
            return Err(Error::FtViolation {
                witness: p,
                lhs,
                bound,
            });
        }
        if slack < report.min_slack {
            report.min_slack = slack;
            report.argmin = p;
        }
        Ok(())
    };
    for p in structured_simplex_points(t, n) {
        check(p)?;
    }
    let mut rng = SeedStream::new(seed).rng("ft-bound", 0);
    let gamma_small = rand_distr::Gamma::new(0.2, 1.0).expect("valid shape");
    for i in 0..trials {
        let raw: Vec<f64> = if i % 2 == 0 {
            (0..n).map(|_| Exp1.sample(&mut rng)).collect()
        } else {
            (0..n)
                .map(|_| gamma_small.sample(&mut rng) + 1e-300 * rng.random::<f64>())
                .collect()
        };
        let total: f64 = raw.iter().sum();
        check(raw.into_iter().map(|x| x / total).collect())?;
    }
    Ok(report)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn closed_form_anchors() {
        for ell in [2u32, 3, 7, 15] {
            let one = p_ell(1.0, ell).unwrap();
            assert!((one.value - 1.0 / ell as f64).abs() < 1e-7);
            let zero = p_ell(0.0, ell).unwrap();
            assert!((zero.value - 1.0 / (ell * ell) as f64).abs() < 1e-7);
            assert!(zero.abs_error_bound <= P_ELL_TOL);
        }
    }

    #[test]
    fn n_ell_examples() {
        assert!((n_ell(0.0, 6).unwrap() - 1.0 / 6.0).abs() < 1e-7);
        assert!((n_ell(1.0, 6).unwrap() - 1.0).abs() < 1e-7);
        assert!(n_ell(-0.3, 4).unwrap() < 0.25);
        // all the even Taylor mass sums to 1/2, so N(-1) = 0
        assert!(n_ell(-1.0, 5).unwrap().abs() < 1e-9);
    }

    #[test]
    fn rejects_bad_arguments() {
        assert!(p_ell(0.5, 1).is_err());
        assert!(p_ell(1.5, 3).is_err());
        assert!(alpha_kl(4, 3).is_err());
        assert!(alpha_kl(1, 3).is_err());
        assert!(alpha_prime_kl(2, 4).is_err());
    }

    #[test]
    fn golden_finds_parabola_minimum() {
        let (x, fx) = golden_min(|x| (x - 0.3).powi(2), -1.0, 1.0, 1e-10);
        assert!((x - 0.3).abs() < 1e-9 && fx < 1e-18);
        let (x, _) = golden_min(|x| x, 0.0, 1.0, 1e-10);
        assert!(x.abs() < 1e-9);
    }

    #[test]
    fn kms_constants_for_three_colours() {
        let c = KmsConstants::new(3, 1024).unwrap();
        assert_eq!(c.t, 10);
        assert!((c.x_k - 1.0 / 3.0).abs() < 1e-15);
        assert!((c.u_k - 3f64.log2()).abs() < 1e-12);
        assert!((c.closed_form() - (1.0 - 3f64.powi(-10))).abs() < 1e-15);
        for k in 3..20 {
            let c = KmsConstants::new(k, k).unwrap();
            assert!(c.x_k > 0.0 && c.x_k < 0.5 && c.u_k > 1.0, "k={k}");
        }
        assert_eq!(KmsConstants::new(3, 7).unwrap().t, 2);
        assert_eq!(KmsConstants::new(3, 8).unwrap().t, 3);
    }

    #[test]
    fn alpha_prime_matches_dense_grid() {
        let est = alpha_prime_kl(4, 16).unwrap();
        let c = KmsConstants::new(4, 16).unwrap();
        let lo = feasible_floor(4);
        let dense = (0..200_000)
            .map(|i| lo + (1.0 - 1e-6 - lo) * i as f64 / 199_999.0)
            .map(|a| 4.0 * c.separation_probability(a) / (3.0 * (1.0 - a)))
            .fold(f64::INFINITY, f64::min);
        assert!(est.value <= dense + 1e-12);
        assert!(dense - est.value < 1e-6);
        if est.diagnostics.minimizer_at_left_endpoint == Some(true) {
            assert!((est.value - c.closed_form()).abs() < 1e-9);
        }
    }

    #[test]
    fn ft_structured_points() {
        let (t, ell) = (0.05, 8u32);
        let uniform: f64 = (0..ell).map(|_| f_t(t, 1.0 / ell as f64)).sum();
        let l = ell as f64;
        assert!((uniform - (1.0 / l - t * l.ln() / l)).abs() < 1e-15);
        assert!((uniform - ft_lower_bound(t, ell) - 4.0 * l * (-1.0 / t).exp()).abs() < 1e-15);
        assert_eq!(f_t(t, 1.0), 1.0);
        assert_eq!(f_t(t, 0.0), 0.0);
        let rep = ft_bound_check(t, ell, 100, 3).unwrap();
        assert!(rep.min_slack >= 0.0);
        assert!(ft_bound_check(0.5, 8, 10, 1).is_err());
    }

    #[test]
    fn table_rendering() {
        let table = alpha_table(&[3, 4], &[3, 4]).unwrap();
        assert!(table.cell(4, 3).is_none());
        let direct = alpha_kl(3, 4).unwrap();
        assert_eq!(table.cell(3, 4).unwrap(), &direct);
        let csv = table.to_csv();
        assert_eq!(csv.lines().count(), 4);
        assert!(table.to_text().contains(".836"));
    }
}
