//! Graph reductions: the scaling gadget and the label-cover construction.

use std::collections::BTreeMap;
use std::fmt::Write as _;

use nalgebra::{DMatrix, SymmetricEigen};
use num_integer::Integer;
use num_rational::Ratio;
use num_traits::{One, Zero};

use crate::error::{Error, Result};
use crate::graph::{colouring_value, Colouring, Graph, Value};

/// `p` disjoint copies of `g` plus `(q - p) m` looped vertices, with `p/q` in lowest terms.
///
/// The result has `q m` edges; a proper colouring of the copies has value
/// exactly `p/q`.
pub fn scale_gadget(g: &Graph, p: u64, q: u64) -> Result<Graph> {
    if p == 0 || p > q {
        return Err(Error::InvalidParameter(format!("need 0 < p <= q, got {p}/{q}")));
    }
    if g.m() == 0 {
        return Err(Error::EmptyEdgeSet);
    }
    let d = p.gcd(&q);
    let (p, q) = (p / d, q / d);
    let loops = usize::try_from((q - p) * g.m())
        .map_err(|_| Error::BudgetExceeded("too many loop vertices".into()))?;
    let copies = p as usize;
    let n = g.n() * copies + loops;
    let mut edges = Vec::with_capacity(g.edges().len() * copies + loops);
    for copy in 0..copies {
        let shift = copy * g.n();
        edges.extend(g.edges().iter().map(|&(u, v, w)| (u + shift, v + shift, w)));
    }
    let first_loop = g.n() * copies + 1;
    edges.extend((first_loop..=n).map(|v| (v, v, 1)));
    Graph::from_edges(n, edges)
}

pub type Prob = Ratio<u64>;

/// Symmetric stochastic matrix on `[k]^p` (`D = k^p` states) whose entries are
/// multiples of a grain `L` and which only connects tuples with disjoint
/// colour sets. Construction fails unless all of that holds.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MarkovOperator {
    k: usize,
    p: usize,
    entries: Vec<Vec<Prob>>,
    grain: Prob,
    /// `entries / grain`, all integral.
    counts: Vec<Vec<u64>>,
}

/// Colours of state `idx` in `[k]^p`, most significant first, 1-based.
fn tuple_of(idx: usize, k: usize, p: usize) -> Vec<usize> {
    let mut out = vec![0; p];
    let mut rest = idx;
    for slot in out.iter_mut().rev() {
        *slot = rest % k + 1;
        rest /= k;
    }
    out
}

impl MarkovOperator {
    pub fn new(k: usize, p: usize, entries: Vec<Vec<Prob>>, grain: Prob) -> Result<Self> {
        let bad = |msg: String| Err(Error::InvalidOperator(msg));
        if k < 2 || p == 0 {
            return bad(format!("need k >= 2 and p >= 1, got k = {k}, p = {p}"));
        }
        let d = k.checked_pow(p as u32).unwrap_or(usize::MAX);
        if entries.len() != d || entries.iter().any(|row| row.len() != d) {
            return bad(format!("expected a {d}x{d} matrix for k = {k}, p = {p}"));
        }
        if grain.is_zero() {
            return bad("grain must be positive".into());
        }
        let mut counts = vec![vec![0u64; d]; d];
        for i in 0..d {
            let total: Prob = entries[i].iter().copied().sum();
            if !total.is_one() {
                return bad(format!("row {} sums to {total}", i + 1));
            }
            for j in 0..d {
                let e = entries[i][j];
                if e != entries[j][i] {
                    return bad(format!("not symmetric at ({}, {})", i + 1, j + 1));
                }
                let units = e / grain;
                if !units.is_integer() {
                    return bad(format!("entry ({}, {}) = {e} is not a multiple of {grain}", i + 1, j + 1));
                }
                counts[i][j] = units.to_integer();
                if !e.is_zero() {
                    let (x, y) = (tuple_of(i, k, p), tuple_of(j, k, p));
                    if x.iter().any(|c| y.contains(c)) {
                        return bad(format!(
                            "not colourful: {x:?} and {y:?} share a colour but have transition {e}"
                        ));
                    }
                }
            }
        }
        Ok(Self {
            k,
            p,
            entries,
            grain,
            counts,
        })
    }

    pub fn domain(&self) -> usize {
        self.entries.len()
    }

    pub fn k(&self) -> usize {
        self.k
    }

    pub fn p(&self) -> usize {
        self.p
    }

    pub fn grain(&self) -> Prob {
        self.grain
    }

    pub fn entry(&self, i: usize, j: usize) -> Prob {
        self.entries[i][j]
    }

    /// Always true for a constructed operator; kept as an explicit check.
    pub fn is_colourful(&self) -> bool {
        let d = self.domain();
        (0..d).all(|i| {
            (0..d).all(|j| {
                self.entries[i][j].is_zero() || {
                    let (x, y) = (tuple_of(i, self.k, self.p), tuple_of(j, self.k, self.p));
                    !x.iter().any(|c| y.contains(c))
                }
            })
        })
    }

    /// Eigenvalues in ascending order.
    pub fn eigenvalues(&self) -> Vec<f64> {
        let d = self.domain();
        let m = DMatrix::from_fn(d, d, |i, j| {
            let e = self.entries[i][j];
            *e.numer() as f64 / *e.denom() as f64
        });
        let mut ev: Vec<f64> = SymmetricEigen::new(m).eigenvalues.iter().copied().collect();
        ev.sort_by(f64::total_cmp);
        ev
    }

    /// Largest eigenvalue magnitude once the stationary eigenvalue 1 is set aside.
    pub fn spectral_radius(&self) -> f64 {
        let mut ev = self.eigenvalues();
        ev.pop();
        ev.iter().map(|x| x.abs()).fold(0.0, f64::max)
    }

    /// `mo <D> <L>` followed by `D` rows of `D` fractions; `k` fixes how states are tuples.
    pub fn parse(text: &str, k: usize) -> Result<Self> {
        let bad = |line: usize, reason: String| Error::Format {
            what: "Markov operator",
            line,
            reason,
        };
        let mut lines = text
            .lines()
            .enumerate()
            .map(|(i, l)| (i + 1, l.trim()))
            .filter(|(_, l)| !l.is_empty() && !l.starts_with('#'));
        let (ln, header) = lines.next().ok_or_else(|| bad(0, "empty input".into()))?;
        let head: Vec<&str> = header.split_whitespace().collect();
        if head.len() != 3 || head[0] != "mo" {
            return Err(bad(ln, "expected `mo <D> <L>`".into()));
        }
        let d: usize = head[1].parse().map_err(|_| bad(ln, format!("bad size `{}`", head[1])))?;
        let frac = |tok: &str, line: usize| -> Result<Prob> {
            tok.parse::<Prob>().map_err(|_| bad(line, format!("bad fraction `{tok}`")))
        };
        let grain = frac(head[2], ln)?;
        let mut entries = Vec::with_capacity(d);
        for _ in 0..d {
            let (ln, row) = lines.next().ok_or_else(|| bad(0, format!("expected {d} rows")))?;
            let row = row
                .split_whitespace()
                .map(|t| frac(t, ln))
                .collect::<Result<Vec<_>>>()?;
            if row.len() != d {
                return Err(bad(ln, format!("expected {d} entries, found {}", row.len())));
            }
            entries.push(row);
        }
        if let Some((ln, _)) = lines.next() {
            return Err(bad(ln, "trailing content".into()));
        }
        let mut p = 0;
        let mut size = 1;
        while size < d {
            size *= k.max(2);
            p += 1;
        }
        if size != d {
            return Err(bad(1, format!("size {d} is not a power of k = {k}")));
        }
        Self::new(k, p, entries, grain)
    }

    pub fn to_text(&self) -> String {
        let mut out = format!("mo {} {}\n", self.domain(), self.grain);
        for row in &self.entries {
            let cells: Vec<String> = row.iter().map(ToString::to_string).collect();
            out.push_str(&cells.join(" "));
            out.push('\n');
        }
        out
    }
}

/// The colourful noise operator on `[k]`: zero diagonal, `1/(k-1)` elsewhere.
pub fn bonami_beckner(k: usize) -> Result<MarkovOperator> {
    if k < 2 {
        return Err(Error::InvalidParameter(format!("k = {k} must be >= 2")));
    }
    let off = Prob::new(1, k as u64 - 1);
    let entries = (0..k)
        .map(|i| (0..k).map(|j| if i == j { Prob::zero() } else { off }).collect())
        .collect();
    MarkovOperator::new(k, 1, entries, off)
}

/// One constraint: `c(a) = ceil(perm(c(b)) / p)`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LabelEdge {
    pub a: usize,
    pub b: usize,
    /// Permutation of `1..=p r`, `perm[i - 1]` is the image of `i`.
    pub perm: Vec<usize>,
}

/// Bipartite `p`-to-1 label cover with domain size `r`; vertices are 1-based.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LabelCoverInstance {
    left: usize,
    right: usize,
    p: usize,
    r: usize,
    edges: Vec<LabelEdge>,
}

/// Labels `1..=r` on the left and `1..=p r` on the right.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LabelAssignment {
    pub left: Vec<usize>,
    pub right: Vec<usize>,
}

impl LabelCoverInstance {
    pub fn new(left: usize, right: usize, p: usize, r: usize, edges: Vec<LabelEdge>) -> Result<Self> {
        let bad = |msg: String| Err(Error::InvalidLabelCover(msg));
        if !(1..=2).contains(&p) {
            return bad(format!("p = {p} must be 1 or 2"));
        }
        if r == 0 {
            return bad("domain size r must be positive".into());
        }
        for (idx, e) in edges.iter().enumerate() {
            if e.a == 0 || e.a > left || e.b == 0 || e.b > right {
                return bad(format!("edge {} joins ({}, {}) outside the vertex sets", idx + 1, e.a, e.b));
            }
            let mut seen = vec![false; p * r];
            if e.perm.len() != p * r
                || !e.perm.iter().all(|&x| (1..=p * r).contains(&x) && !std::mem::replace(&mut seen[x - 1], true))
            {
                return bad(format!("edge {} does not carry a permutation of 1..={}", idx + 1, p * r));
            }
        }
        Ok(Self {
            left,
            right,
            p,
            r,
            edges,
        })
    }

    pub fn left(&self) -> usize {
        self.left
    }

    pub fn right(&self) -> usize {
        self.right
    }

    pub fn p(&self) -> usize {
        self.p
    }

    pub fn r(&self) -> usize {
        self.r
    }

    pub fn edges(&self) -> &[LabelEdge] {
        &self.edges
    }

    pub fn is_left_regular(&self) -> bool {
        let mut deg = vec![0usize; self.left];
        for e in &self.edges {
            deg[e.a - 1] += 1;
        }
        deg.windows(2).all(|w| w[0] == w[1])
    }

    fn check_assignment(&self, sol: &LabelAssignment) -> Result<()> {
        let ok = sol.left.len() == self.left
            && sol.right.len() == self.right
            && sol.left.iter().all(|&x| (1..=self.r).contains(&x))
            && sol.right.iter().all(|&x| (1..=self.p * self.r).contains(&x));
        if ok {
            Ok(())
        } else {
            Err(Error::InvalidLabelCover("assignment has wrong length or out-of-range labels".into()))
        }
    }

    pub fn satisfies(&self, sol: &LabelAssignment, e: &LabelEdge) -> bool {
        sol.left[e.a - 1] == e.perm[sol.right[e.b - 1] - 1].div_ceil(self.p)
    }

    /// Fraction of constraints satisfied by `sol`.
    pub fn value(&self, sol: &LabelAssignment) -> Result<Value> {
        self.check_assignment(sol)?;
        if self.edges.is_empty() {
            return Err(Error::EmptyEdgeSet);
        }
        let good = self.edges.iter().filter(|e| self.satisfies(sol, e)).count();
        Ok(Value::new(good as u64, self.edges.len() as u64))
    }

    /// Best assignment by enumerating right labellings; each left label is then
    /// chosen independently as the most common demand of its edges.
    pub fn optimal_assignment(&self, max_candidates: u64) -> Result<(Value, LabelAssignment)> {
        if self.edges.is_empty() {
            return Err(Error::EmptyEdgeSet);
        }
        let domain = (self.p * self.r) as u64;
        let candidates = domain
            .checked_pow(self.right as u32)
            .filter(|&c| c <= max_candidates)
            .ok_or_else(|| {
                Error::BudgetExceeded(format!(
                    "{domain}^{} right labellings exceed the search budget {max_candidates}",
                    self.right
                ))
            })?;
        let mut best: Option<(usize, LabelAssignment)> = None;
        let mut right = vec![1usize; self.right];
        for code in 0..candidates {
            let mut rest = code;
            for label in right.iter_mut() {
                *label = (rest % domain) as usize + 1;
                rest /= domain;
            }
            let mut votes = vec![vec![0usize; self.r]; self.left];
            for e in &self.edges {
                votes[e.a - 1][e.perm[right[e.b - 1] - 1].div_ceil(self.p) - 1] += 1;
            }
            let (mut score, mut left) = (0, Vec::with_capacity(self.left));
            for row in &votes {
                // first maximum, so ties go to the smallest label
                let (idx, &count) = row
                    .iter()
                    .enumerate()
                    .fold((0, &0), |acc, cur| if cur.1 > acc.1 { cur } else { acc });
                score += count;
                left.push(idx + 1);
            }
            if best.as_ref().is_none_or(|(b, _)| score > *b) {
                best = Some((score, LabelAssignment { left, right: right.clone() }));
            }
        }
        let (score, sol) = best.expect("at least one candidate");
        Ok((Value::new(score as u64, self.edges.len() as u64), sol))
    }

    /// Header `lc <|V_A|> <|V_B|> <p> <r>`, then `pi <a> <b> <p r labels>` per edge.
    pub fn parse(text: &str) -> Result<Self> {
        let bad = |line: usize, reason: String| Error::Format {
            what: "label cover",
            line,
            reason,
        };
        let mut header = None;
        let mut edges = Vec::new();
        for (idx, raw) in text.lines().enumerate() {
            let ln = idx + 1;
            let toks: Vec<&str> = raw.split_whitespace().collect();
            let Some(&kind) = toks.first() else { continue };
            let nums = |toks: &[&str]| -> Result<Vec<usize>> {
                toks.iter()
                    .map(|t| t.parse().map_err(|_| bad(ln, format!("bad integer `{t}`"))))
                    .collect()
            };
            match kind {
                "c" | "#" => {}
                "lc" => {
                    if header.is_some() {
                        return Err(bad(ln, "second header".into()));
                    }
                    let v = nums(&toks[1..])?;
                    if v.len() != 4 {
                        return Err(bad(ln, "expected `lc <|V_A|> <|V_B|> <p> <r>`".into()));
                    }
                    header = Some((v[0], v[1], v[2], v[3]));
                }
                "pi" => {
                    let Some((_, _, p, r)) = header else {
                        return Err(bad(ln, "edge before header".into()));
                    };
                    let v = nums(&toks[1..])?;
                    if v.len() != 2 + p * r {
                        return Err(bad(ln, format!("expected a, b and {} labels", p * r)));
                    }
                    edges.push(LabelEdge {
                        a: v[0],
                        b: v[1],
                        perm: v[2..].to_vec(),
                    });
                }
                other => return Err(bad(ln, format!("unknown line type `{other}`"))),
            }
        }
        let (left, right, p, r) = header.ok_or_else(|| bad(0, "missing `lc` header".into()))?;
        Self::new(left, right, p, r, edges)
    }

    pub fn to_text(&self) -> String {
        let mut out = format!("lc {} {} {} {}\n", self.left, self.right, self.p, self.r);
        for e in &self.edges {
            let labels: Vec<String> = e.perm.iter().map(ToString::to_string).collect();
            writeln!(out, "pi {} {} {}", e.a, e.b, labels.join(" ")).unwrap();
        }
        out
    }
}

/// Default cap on the vertex count of `pcp_reduce`.
pub const PCP_VERTEX_BUDGET: usize = 100_000;

/// Vertex numbering of the reduction: `v_b(z)` for `z in [k]^{p r}`.
#[derive(Debug, Clone, Copy)]
struct Layout {
    k: usize,
    len: usize,
    block: usize,
}

impl Layout {
    /// 1-based graph vertex of `v_b(z)`, `z` read most significant first.
    fn vertex(&self, b: usize, z: &[usize]) -> usize {
        let rank = z.iter().fold(0, |acc, &c| acc * self.k + (c - 1));
        (b - 1) * self.block + rank + 1
    }

    fn word(&self, rank: usize) -> Vec<usize> {
        tuple_of(rank, self.k, self.len)
    }
}

/// The label-cover reduction at tensor power `r_blow` (which must equal the
/// instance's `r`).
///
/// Vertices are `v_b(x)` for `b` on the right and `x in [k]^{p r}`. For every
/// left vertex `a` and ordered pair of its edges `(a, b), (a, b')`, including
/// `b = b'`, and every `x, y`, the edge `v_b(x^pi) -- v_b'(y^pi')` gets
/// multiplicity `prod_t T(x_t, y_t) / L` over the `r` blocks of `p`
/// coordinates, where `x^pi = (x_{pi(1)}, ..)`.
pub fn pcp_reduce(
    inst: &LabelCoverInstance,
    k: usize,
    op: &MarkovOperator,
    r_blow: usize,
    max_vertices: usize,
) -> Result<Graph> {
    if r_blow != inst.r {
        return Err(Error::InvalidParameter(format!(
            "tensor power {r_blow} must equal the domain size r = {}",
            inst.r
        )));
    }
    if op.k() != k || op.p() != inst.p {
        return Err(Error::InvalidOperator(format!(
            "operator acts on [{}]^{} but the reduction needs [{k}]^{}",
            op.k(),
            op.p(),
            inst.p
        )));
    }
    if !op.is_colourful() {
        return Err(Error::InvalidOperator("operator is not colourful".into()));
    }
    if !inst.is_left_regular() {
        return Err(Error::InvalidLabelCover("instance is not left-regular".into()));
    }
    let len = inst.p * inst.r;
    let block = (k as u128).checked_pow(len as u32).unwrap_or(u128::MAX);
    let total = block.saturating_mul(inst.right as u128);
    if total > max_vertices as u128 {
        return Err(Error::BudgetExceeded(format!(
            "reduction needs {total} vertices, budget is {max_vertices}"
        )));
    }
    let layout = Layout {
        k,
        len,
        block: block as usize,
    };
    let p = inst.p;

    // nonzero transitions of T per state, with integral weights
    let d = op.domain();
    let moves: Vec<Vec<(usize, u64)>> = (0..d)
        .map(|i| (0..d).filter(|&j| op.counts[i][j] > 0).map(|j| (j, op.counts[i][j])).collect())
        .collect();
    let state_of = |word: &[usize], t: usize| -> usize {
        word[t * p..(t + 1) * p].iter().fold(0, |acc, &c| acc * k + (c - 1))
    };

    let mut by_left: BTreeMap<usize, Vec<&LabelEdge>> = BTreeMap::new();
    for e in &inst.edges {
        by_left.entry(e.a).or_default().push(e);
    }
    let mut mass: BTreeMap<(usize, usize), u64> = BTreeMap::new();
    let words: Vec<Vec<usize>> = (0..layout.block).map(|rank| layout.word(rank)).collect();
    for edges in by_left.values() {
        for e1 in edges {
            for e2 in edges {
                for x in &words {
                    let xp: Vec<usize> = e1.perm.iter().map(|&i| x[i - 1]).collect();
                    let u = layout.vertex(e1.b, &xp);
                    // enumerate y block by block over nonzero transitions
                    let mut partial: Vec<(Vec<usize>, u64)> = vec![(Vec::with_capacity(len), 1)];
                    for t in 0..inst.r {
                        let from = state_of(x, t);
                        let mut next = Vec::with_capacity(partial.len() * moves[from].len());
                        for (prefix, w) in &partial {
                            for &(to, c) in &moves[from] {
                                let mut y = prefix.clone();
                                y.extend(tuple_of(to, k, p));
                                next.push((y, w * c));
                            }
                        }
                        partial = next;
                    }
                    for (y, w) in partial {
                        let yp: Vec<usize> = e2.perm.iter().map(|&i| y[i - 1]).collect();
                        let v = layout.vertex(e2.b, &yp);
                        *mass.entry((u.min(v), u.max(v))).or_insert(0) += w;
                    }
                }
            }
        }
    }
    Graph::from_edges(total as usize, mass.into_iter().map(|((u, v), w)| (u, v, w)))
}

/// Value on `built` of the colouring `v_b(z) -> z_{c(b)}` induced by `sol`.
pub fn completeness_value(
    inst: &LabelCoverInstance,
    sol: &LabelAssignment,
    k: usize,
    built: &Graph,
) -> Result<Value> {
    inst.check_assignment(sol)?;
    let len = inst.p * inst.r;
    let block = k.pow(len as u32);
    if built.n() != block * inst.right {
        return Err(Error::DimensionMismatch {
            expected: block * inst.right,
            found: built.n(),
        });
    }
    let colours: Vec<u32> = (0..built.n())
        .map(|v| {
            let (b, rank) = (v / block, v % block);
            tuple_of(rank, k, len)[sol.right[b] - 1] as u32
        })
        .collect();
    colouring_value(built, &Colouring::new(colours, k as u32)?)
}
