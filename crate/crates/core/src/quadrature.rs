//! Gauss-Legendre rules and a composite tensor-product grid helper.

use std::f64::consts::PI;

/// An `n`-point Gauss-Legendre rule on `[-1, 1]`.
#[derive(Debug, Clone)]
pub struct GaussLegendre {
    pub nodes: Vec<f64>,
    pub weights: Vec<f64>,
}

impl GaussLegendre {
    /// Nodes are found by Newton iteration on `P_n` from the Tricomi initial guess.
    pub fn new(n: usize) -> Self {
        assert!(n >= 1, "a Gauss-Legendre rule needs at least one node");
        let mut nodes = vec![0.0; n];
        let mut weights = vec![0.0; n];
        let nf = n as f64;
        for i in 0..(n + 1) / 2 {
            let mut x = (PI * (i as f64 + 0.75) / (nf + 0.5)).cos();
            let mut dp = 1.0;
            for _ in 0..100 {
                let (p, d) = legendre_with_derivative(n, x);
                dp = d;
                let dx = p / d;
                x -= dx;
                if dx.abs() < 1e-16 {
                    break;
                }
            }
            let (_, d) = legendre_with_derivative(n, x);
            dp = if d != 0.0 { d } else { dp };
            let w = 2.0 / ((1.0 - x * x) * dp * dp);
            nodes[i] = -x;
            nodes[n - 1 - i] = x;
            weights[i] = w;
            weights[n - 1 - i] = w;
        }
        if n % 2 == 1 {
            nodes[n / 2] = 0.0;
        }
        Self { nodes, weights }
    }

    pub fn len(&self) -> usize {
        self.nodes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.nodes.is_empty()
    }

    /// Integrates `f` over `[a, b]`.
    pub fn integrate<F: FnMut(f64) -> f64>(&self, a: f64, b: f64, mut f: F) -> f64 {
        let half = 0.5 * (b - a);
        let mid = 0.5 * (b + a);
        self.nodes
            .iter()
            .zip(&self.weights)
            .map(|(&x, &w)| w * f(mid + half * x))
            .sum::<f64>()
            * half
    }
}

fn legendre_with_derivative(n: usize, x: f64) -> (f64, f64) {
    let mut p0 = 1.0;
    let mut p1 = x;
    for k in 2..=n {
        let kf = k as f64;
        let p2 = ((2.0 * kf - 1.0) * x * p1 - (kf - 1.0) * p0) / kf;
        p0 = p1;
        p1 = p2;
    }
    if n == 0 {
        return (1.0, 0.0);
    }
    let nf = n as f64;
    let d = nf * (x * p1 - p0) / (x * x - 1.0);
    (p1, d)
}

/// Composite rule: `panels` equal panels on `[lo, hi]`, each with the given base rule.
/// Returns flattened `(node, weight)` pairs.
pub fn composite_nodes(rule: &GaussLegendre, lo: f64, hi: f64, panels: usize) -> Vec<(f64, f64)> {
    let width = (hi - lo) / panels as f64;
    let mut out = Vec::with_capacity(panels * rule.len());
    for p in 0..panels {
        let a = lo + width * p as f64;
        let half = 0.5 * width;
        let mid = a + half;
        for (&x, &w) in rule.nodes.iter().zip(&rule.weights) {
            out.push((mid + half * x, w * half));
        }
    }
    out
}

/// Adaptive Gauss-Kronrod-free bisection using two Gauss-Legendre orders.
///
/// Each interval is accepted once the `n`- and `2n`-point estimates agree to
/// `tol * width / total_width`. Returns `(estimate, error_estimate)`.
pub fn adaptive_integrate<F: Fn(f64) -> f64>(
    f: &F,
    a: f64,
    b: f64,
    tol: f64,
    max_depth: u32,
) -> (f64, f64) {
    let coarse = GaussLegendre::new(10);
    let fine = GaussLegendre::new(20);
    let total = b - a;
    let mut stack = vec![(a, b, 0u32)];
    let mut sum = 0.0;
    let mut err = 0.0;
    while let Some((lo, hi, depth)) = stack.pop() {
        let c = coarse.integrate(lo, hi, f);
        let fi = fine.integrate(lo, hi, f);
        let e = (fi - c).abs();
        if e <= tol * (hi - lo) / total || depth >= max_depth {
            sum += fi;
            err += e;
        } else {
            let mid = 0.5 * (lo + hi);
            stack.push((lo, mid, depth + 1));
            stack.push((mid, hi, depth + 1));
        }
    }
    (sum, err)
}
