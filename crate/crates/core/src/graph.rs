//! Multigraphs with loops, the DIMACS-like edge-list format, and exact colouring values.

use std::collections::BTreeMap;
use std::fmt::Write as _;

use num_rational::Ratio;
use serde::{Deserialize, Serialize};

use crate::error::{Error, ParseError, Result};

/// Exact value of a colouring: a fraction of edge mass.
pub type Value = Ratio<u64>;

/// A finite undirected multigraph on vertices `1..=n`. Loops are allowed.
///
/// Edges are stored once per unordered pair with `u <= v`, sorted, with their
/// accumulated multiplicity.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Graph {
    n: usize,
    edges: Vec<(usize, usize, u64)>,
    m: u64,
}

impl Graph {
    /// Builds a graph from `(u, v, multiplicity)` triples, merging duplicates.
    pub fn from_edges<I>(n: usize, edges: I) -> Result<Self>
    where
        I: IntoIterator<Item = (usize, usize, u64)>,
    {
        let mut merged: BTreeMap<(usize, usize), u64> = BTreeMap::new();
        for (u, v, mult) in edges {
            if u == 0 || v == 0 || u > n || v > n {
                return Err(Error::InvalidGraph(format!(
                    "edge ({u}, {v}) out of range for {n} vertices"
                )));
            }
            if mult == 0 {
                return Err(Error::InvalidGraph(format!("edge ({u}, {v}) has multiplicity 0")));
            }
            let key = (u.min(v), u.max(v));
            *merged.entry(key).or_insert(0) += mult;
        }
        let edges: Vec<_> = merged.into_iter().map(|((u, v), w)| (u, v, w)).collect();
        let m = edges.iter().map(|e| e.2).sum();
        Ok(Self { n, edges, m })
    }

    /// Simple-graph convenience constructor; every pair gets multiplicity one.
    pub fn simple(n: usize, pairs: &[(usize, usize)]) -> Result<Self> {
        Self::from_edges(n, pairs.iter().map(|&(u, v)| (u, v, 1)))
    }

    pub fn complete(n: usize) -> Self {
        let mut pairs = Vec::new();
        for u in 1..=n {
            for v in u + 1..=n {
                pairs.push((u, v, 1));
            }
        }
        Self::from_edges(n, pairs).expect("complete graph is well formed")
    }

    pub fn complete_bipartite(a: usize, b: usize) -> Self {
        let mut pairs = Vec::new();
        for u in 1..=a {
            for v in a + 1..=a + b {
                pairs.push((u, v, 1));
            }
        }
        Self::from_edges(a + b, pairs).expect("complete bipartite graph is well formed")
    }

    pub fn cycle(n: usize) -> Self {
        let pairs = (1..=n).map(|u| (u, u % n + 1, 1));
        Self::from_edges(n, pairs).expect("cycle is well formed")
    }

    pub fn n(&self) -> usize {
        self.n
    }

    /// Total edge mass, loops included.
    pub fn m(&self) -> u64 {
        self.m
    }

    pub fn edges(&self) -> &[(usize, usize, u64)] {
        &self.edges
    }

    /// Edge mass on loops.
    pub fn loop_mass(&self) -> u64 {
        self.edges.iter().filter(|e| e.0 == e.1).map(|e| e.2).sum()
    }

    pub fn non_loop_edges(&self) -> impl Iterator<Item = &(usize, usize, u64)> {
        self.edges.iter().filter(|e| e.0 != e.1)
    }

    /// Disjoint union; the vertices of `other` are shifted by `self.n()`.
    pub fn disjoint_union(&self, other: &Graph) -> Graph {
        let shift = self.n;
        let edges = self
            .edges
            .iter()
            .copied()
            .chain(other.edges.iter().map(|&(u, v, w)| (u + shift, v + shift, w)));
        Graph::from_edges(self.n + other.n, edges).expect("union of valid graphs is valid")
    }

    /// Relabels vertex `v` as `perm[v - 1]`.
    pub fn relabel(&self, perm: &[usize]) -> Result<Graph> {
        if perm.len() != self.n {
            return Err(Error::InvalidGraph("relabelling has wrong length".into()));
        }
        Graph::from_edges(
            self.n,
            self.edges.iter().map(|&(u, v, w)| (perm[u - 1], perm[v - 1], w)),
        )
    }

    /// Parses the edge-list format. Mismatches with the declared edge count
    /// are logged, not rejected.
    pub fn parse(text: &str) -> std::result::Result<Self, ParseError> {
        let mut header: Option<(usize, u64)> = None;
        let mut raw = Vec::new();
        let mut lines_seen = 0u64;
        for (idx, line) in text.lines().enumerate() {
            let line_no = idx + 1;
            let trimmed = line.trim();
            if trimmed.is_empty() || trimmed.starts_with('c') && is_comment(trimmed) {
                continue;
            }
            let mut parts = trimmed.split_whitespace();
            match parts.next() {
                Some("p") => {
                    if header.is_some() {
                        return Err(ParseError::DuplicateHeader { line: line_no });
                    }
                    let kind = parts.next();
                    if kind != Some("edge") && kind != Some("edges") && kind != Some("col") {
                        return Err(ParseError::Malformed {
                            line: line_no,
                            reason: "expected `p edge <n> <m>`".into(),
                        });
                    }
                    let n = parse_field::<usize>(parts.next(), line_no, "vertex count")?;
                    let m = parse_field::<u64>(parts.next(), line_no, "edge count")?;
                    if parts.next().is_some() {
                        return Err(ParseError::Malformed {
                            line: line_no,
                            reason: "trailing fields after header".into(),
                        });
                    }
                    header = Some((n, m));
                }
                Some("e") => {
                    let Some((n, _)) = header else {
                        return Err(ParseError::MissingHeader { line: line_no });
                    };
                    let u = parse_field::<i64>(parts.next(), line_no, "endpoint")?;
                    let v = parse_field::<i64>(parts.next(), line_no, "endpoint")?;
                    let mult = match parts.next() {
                        None => 1,
                        Some(tok) => {
                            let w: i64 = tok.parse().map_err(|_| ParseError::Malformed {
                                line: line_no,
                                reason: format!("bad multiplicity `{tok}`"),
                            })?;
                            if w <= 0 {
                                return Err(ParseError::BadMultiplicity {
                                    line: line_no,
                                    value: w,
                                });
                            }
                            w as u64
                        }
                    };
                    if parts.next().is_some() {
                        return Err(ParseError::Malformed {
                            line: line_no,
                            reason: "trailing fields after edge".into(),
                        });
                    }
                    for x in [u, v] {
                        if x < 1 || x as usize > n {
                            return Err(ParseError::VertexOutOfRange {
                                line: line_no,
                                vertex: x,
                                n,
                            });
                        }
                    }
                    lines_seen += 1;
                    raw.push((u as usize, v as usize, mult));
                }
                Some(tok) => {
                    return Err(ParseError::Malformed {
                        line: line_no,
                        reason: format!("unknown line type `{tok}`"),
                    })
                }
                None => unreachable!("blank lines are skipped"),
            }
        }
        let Some((n, declared)) = header else {
            return Err(ParseError::MissingHeader { line: 0 });
        };
        let graph = Graph::from_edges(n, raw).expect("edges validated while parsing");
        if declared != graph.m && declared != lines_seen {
            log::warn!(
                "header declares {declared} edges but {lines_seen} edge lines (mass {}) were read",
                graph.m
            );
        }
        Ok(graph)
    }

    /// Writes the graph in the edge-list format; multiplicity is omitted when 1.
    pub fn to_dimacs(&self) -> String {
        let mut out = String::new();
        writeln!(out, "p edge {} {}", self.n, self.m).unwrap();
        for &(u, v, w) in &self.edges {
            if w == 1 {
                writeln!(out, "e {u} {v}").unwrap();
            } else {
                writeln!(out, "e {u} {v} {w}").unwrap();
            }
        }
        out
    }
}

fn is_comment(line: &str) -> bool {
    line == "c" || line.starts_with("c ") || line.starts_with("c\t")
}

fn parse_field<T: std::str::FromStr>(
    tok: Option<&str>,
    line: usize,
    what: &str,
) -> std::result::Result<T, ParseError> {
    let tok = tok.ok_or_else(|| ParseError::Malformed {
        line,
        reason: format!("missing {what}"),
    })?;
    tok.parse().map_err(|_| ParseError::Malformed {
        line,
        reason: format!("bad {what} `{tok}`"),
    })
}

/// Assignment of colours `1..=palette` to vertices `1..=n` (stored 0-based by vertex).
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Colouring {
    colours: Vec<u32>,
    palette: u32,
}

impl Colouring {
    pub fn new(colours: Vec<u32>, palette: u32) -> Result<Self> {
        if let Some((i, &c)) = colours
            .iter()
            .enumerate()
            .find(|(_, &c)| c == 0 || c > palette)
        {
            return Err(Error::InvalidColouring(format!(
                "vertex {} has colour {c} outside 1..={palette}",
                i + 1
            )));
        }
        Ok(Self { colours, palette })
    }

    pub fn colours(&self) -> &[u32] {
        &self.colours
    }

    pub fn palette(&self) -> u32 {
        self.palette
    }

    pub fn len(&self) -> usize {
        self.colours.len()
    }

    pub fn is_empty(&self) -> bool {
        self.colours.is_empty()
    }

    /// Colour of vertex `v` (1-based).
    pub fn colour(&self, v: usize) -> u32 {
        self.colours[v - 1]
    }
}

/// Number of edges (with multiplicity) whose endpoints get different colours.
pub fn proper_mass(g: &Graph, c: &Colouring) -> Result<u64> {
    if c.len() != g.n() {
        return Err(Error::DimensionMismatch {
            expected: g.n(),
            found: c.len(),
        });
    }
    Ok(g.edges()
        .iter()
        .filter(|&&(u, v, _)| c.colour(u) != c.colour(v))
        .map(|e| e.2)
        .sum())
}

/// Fraction of edge mass properly coloured by `c`, as an exact rational.
pub fn colouring_value(g: &Graph, c: &Colouring) -> Result<Value> {
    if g.m() == 0 {
        return Err(Error::EmptyEdgeSet);
    }
    let good = proper_mass(g, c)?;
    Ok(Ratio::new(good, g.m()))
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn triangle() -> Graph {
        Graph::parse("p edge 3 3\ne 1 2\ne 2 3\ne 1 3\n").unwrap()
    }

    #[test]
    fn parses_triangle() {
        let g = triangle();
        assert_eq!(g.n(), 3);
        assert_eq!(g.m(), 3);
        assert_eq!(g, Graph::complete(3));
    }

    #[test]
    fn parses_single_loop() {
        let g = Graph::parse("p edge 1 1\ne 1 1\n").unwrap();
        assert_eq!((g.n(), g.m()), (1, 1));
        assert_eq!(g.loop_mass(), 1);
    }

    #[test]
    fn parses_multiplicity() {
        let g = Graph::parse("c a comment\np edge 2 5\ne 1 2 5\n").unwrap();
        assert_eq!((g.n(), g.m()), (2, 5));
        assert_eq!(g.edges(), &[(1, 2, 5)]);
    }

    #[test]
    fn duplicate_lines_accumulate() {
        let g = Graph::parse("p edge 2 3\ne 1 2\ne 2 1 2\n").unwrap();
        assert_eq!(g.edges(), &[(1, 2, 3)]);
    }

    #[test]
    fn parse_errors_name_the_line() {
        let cases = [
            ("p edge 2 1\ne 1 3\n", 2),
            ("p edge 2 1\ne 1 2 0\n", 2),
            ("p edge 2 1\ne 1 2 -4\n", 2),
            ("p edge 2 1\nc ok\ne 1 x\n", 3),
            ("e 1 2\n", 1),
            ("p edge 2 1\np edge 2 1\n", 2),
            ("p edge 2 1\nq 1 2\n", 2),
        ];
        for (text, line) in cases {
            let err = Graph::parse(text).unwrap_err();
            assert_eq!(err.line(), line, "{text:?} -> {err}");
        }
        assert!(matches!(
            Graph::parse("p edge 2 1\ne 1 3\n"),
            Err(ParseError::VertexOutOfRange { vertex: 3, .. })
        ));
        assert!(matches!(
            Graph::parse("p edge 2 1\ne 1 2 0\n"),
            Err(ParseError::BadMultiplicity { value: 0, .. })
        ));
        assert!(matches!(Graph::parse("c nothing\n"), Err(ParseError::MissingHeader { .. })));
    }

    #[test]
    fn triangle_value_two_thirds() {
        let c = Colouring::new(vec![1, 1, 2], 2).unwrap();
        assert_eq!(colouring_value(&triangle(), &c).unwrap(), Ratio::new(2, 3));
    }

    #[test]
    fn loops_are_never_proper() {
        let g = Graph::parse("p edge 1 1\ne 1 1\n").unwrap();
        let c = Colouring::new(vec![1], 3).unwrap();
        assert_eq!(colouring_value(&g, &c).unwrap(), Ratio::new(0, 1));
    }

    #[test]
    fn triangle_plus_three_loops_is_half() {
        let mut g = Graph::complete(3);
        for _ in 0..3 {
            g = g.disjoint_union(&Graph::from_edges(1, [(1, 1, 1)]).unwrap());
        }
        assert_eq!(g.m(), 6);
        let c = Colouring::new(vec![1, 2, 3, 1, 1, 1], 3).unwrap();
        assert_eq!(colouring_value(&g, &c).unwrap(), Ratio::new(1, 2));
    }

    #[test]
    fn empty_edge_set_and_length_mismatch() {
        let g = Graph::from_edges(3, []).unwrap();
        let c = Colouring::new(vec![1, 2, 3], 3).unwrap();
        assert!(matches!(colouring_value(&g, &c), Err(Error::EmptyEdgeSet)));
        let c2 = Colouring::new(vec![1, 2], 3).unwrap();
        assert!(matches!(
            colouring_value(&triangle(), &c2),
            Err(Error::DimensionMismatch { .. })
        ));
        assert!(Colouring::new(vec![0, 1], 2).is_err());
        assert!(Colouring::new(vec![3, 1], 2).is_err());
    }

    #[test]
    fn dimacs_round_trip() {
        let g = Graph::from_edges(4, [(1, 2, 3), (4, 4, 1), (2, 3, 1)]).unwrap();
        assert_eq!(Graph::parse(&g.to_dimacs()).unwrap(), g);
    }

    fn arb_graph() -> impl Strategy<Value = Graph> {
        (1usize..8).prop_flat_map(|n| {
            prop::collection::vec((1..=n, 1..=n, 1u64..4), 1..15)
                .prop_map(move |es| Graph::from_edges(n, es).unwrap())
        })
    }

    proptest! {
        #[test]
        fn value_in_unit_interval_and_one_iff_proper(
            g in arb_graph(),
            seed in prop::collection::vec(1u32..4, 8)
        ) {
            let c = Colouring::new(seed[..g.n()].to_vec(), 3).unwrap();
            let v = colouring_value(&g, &c).unwrap();
            prop_assert!(v <= Ratio::from_integer(1));
            let mono = g.edges().iter().any(|&(a, b, _)| c.colour(a) == c.colour(b));
            prop_assert_eq!(v == Ratio::from_integer(1), !mono);
        }

        #[test]
        fn value_invariant_under_colour_permutation(
            g in arb_graph(),
            seed in prop::collection::vec(1u32..5, 8),
            perm in Just(vec![1u32, 2, 3, 4]).prop_shuffle()
        ) {
            let c = Colouring::new(seed[..g.n()].to_vec(), 4).unwrap();
            let renamed = Colouring::new(
                c.colours().iter().map(|&x| perm[x as usize - 1]).collect(), 4).unwrap();
            prop_assert_eq!(colouring_value(&g, &c).unwrap(), colouring_value(&g, &renamed).unwrap());
        }

        #[test]
        fn split_lines_match_merged_multiplicity(
            g in arb_graph(),
            seed in prop::collection::vec(1u32..4, 8)
        ) {
            let mut text = format!("p edge {} {}\n", g.n(), g.m());
            for &(u, v, w) in g.edges() {
                for _ in 0..w {
                    text.push_str(&format!("e {v} {u}\n"));
                }
            }
            let split = Graph::parse(&text).unwrap();
            prop_assert_eq!(&split, &g);
            let c = Colouring::new(seed[..g.n()].to_vec(), 3).unwrap();
            prop_assert_eq!(colouring_value(&split, &c).unwrap(), colouring_value(&g, &c).unwrap());
        }
    }
}
