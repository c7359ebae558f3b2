//! Graph generators and reference data shared by the integration tests.
#![allow(dead_code)]

use promise_color::rng::SeedStream;
use promise_color::Graph;
use rand::Rng;

/// Printed approximations of `alpha_kl`, rows `k = 3..=15`, columns `l = k..=15`.
pub const PRINTED_ALPHA: [&[f64]; 13] = [
    &[0.836, 0.904, 0.938, 0.957, 0.969, 0.976, 0.982, 0.985, 0.988, 0.990, 0.992, 0.993, 0.994],
    &[0.858, 0.899, 0.924, 0.940, 0.952, 0.960, 0.967, 0.972, 0.975, 0.979, 0.981, 0.983],
    &[0.877, 0.904, 0.923, 0.936, 0.946, 0.954, 0.960, 0.964, 0.968, 0.972, 0.974],
    &[0.892, 0.911, 0.926, 0.936, 0.945, 0.952, 0.957, 0.961, 0.965, 0.968],
    &[0.903, 0.918, 0.930, 0.938, 0.945, 0.951, 0.956, 0.960, 0.963],
    &[0.913, 0.924, 0.934, 0.941, 0.947, 0.952, 0.956, 0.960],
    &[0.920, 0.930, 0.937, 0.944, 0.949, 0.953, 0.957],
    &[0.927, 0.935, 0.941, 0.946, 0.951, 0.954],
    &[0.932, 0.939, 0.944, 0.949, 0.953],
    &[0.937, 0.942, 0.947, 0.951],
    &[0.941, 0.946, 0.950],
    &[0.944, 0.949],
    &[0.948],
];

/// `(k, l, printed value)` for every cell.
pub fn printed_alpha_cells() -> Vec<(u32, u32, f64)> {
    PRINTED_ALPHA
        .iter()
        .enumerate()
        .flat_map(|(row, vals)| {
            let k = row as u32 + 3;
            vals.iter().enumerate().map(move |(col, &v)| (k, k + col as u32, v))
        })
        .collect()
}

/// Erdos-Renyi graph on `n` vertices; falls back to one edge if the draw is empty.
pub fn random_graph(n: usize, density: f64, seed: u64) -> Graph {
    let mut rng = SeedStream::new(seed).rng("random-graph", n as u64);
    let mut pairs = Vec::new();
    for u in 1..=n {
        for v in u + 1..=n {
            if rng.random::<f64>() < density {
                pairs.push((u, v));
            }
        }
    }
    if pairs.is_empty() {
        pairs.push((1, 2));
    }
    Graph::simple(n, &pairs).unwrap()
}

/// Random graph with a hidden proper `k`-colouring `v -> v mod k`.
pub fn planted(n: usize, k: usize, density: f64, seed: u64) -> Graph {
    let mut rng = SeedStream::new(seed).rng("planted", n as u64);
    let mut pairs = Vec::new();
    for u in 1..=n {
        for v in u + 1..=n {
            if u % k != v % k && rng.random::<f64>() < density {
                pairs.push((u, v));
            }
        }
    }
    Graph::simple(n, &pairs).unwrap()
}

/// Small named and random graphs, all on at most 11 vertices.
pub fn small_corpus() -> Vec<(String, Graph)> {
    let mut out = Vec::new();
    for n in 2..=8 {
        out.push((format!("K{n}"), Graph::complete(n)));
    }
    for n in 3..=11 {
        out.push((format!("C{n}"), Graph::cycle(n)));
    }
    for (a, b) in [(1, 3), (2, 2), (2, 3), (3, 3), (3, 4), (4, 5)] {
        out.push((format!("K{a},{b}"), Graph::complete_bipartite(a, b)));
    }
    let petersen = [
        (1, 2), (2, 3), (3, 4), (4, 5), (5, 1),
        (1, 6), (2, 7), (3, 8), (4, 9), (5, 10),
        (6, 8), (8, 10), (10, 7), (7, 9), (9, 6),
    ];
    out.push(("petersen".into(), Graph::simple(10, &petersen).unwrap()));
    let wheel: Vec<(usize, usize)> = (1..=6).flat_map(|i| [(i, i % 6 + 1), (i, 7)]).collect();
    out.push(("wheel6".into(), Graph::simple(7, &wheel).unwrap()));
    let prism = [(1, 2), (2, 3), (3, 1), (4, 5), (5, 6), (6, 4), (1, 4), (2, 5), (3, 6)];
    out.push(("prism".into(), Graph::simple(6, &prism).unwrap()));
    let mut seed = 0;
    for n in 5..=11 {
        for density in [0.3, 0.5, 0.8] {
            seed += 1;
            out.push((format!("gnp-{n}-{density}"), random_graph(n, density, seed)));
        }
    }
    for n in [6, 9, 11] {
        seed += 1;
        out.push((format!("planted3-{n}"), planted(n, 3, 0.7, seed)));
    }
    // a multigraph with loops
    let multi = Graph::from_edges(5, [(1, 2, 3), (2, 3, 1), (3, 1, 2), (4, 4, 1), (4, 5, 2)]).unwrap();
    out.push(("multi-loop".into(), multi));
    out
}

/// Every labelled simple graph on exactly `n` vertices with at least one edge.
pub fn all_graphs(n: usize) -> impl Iterator<Item = Graph> {
    let pairs: Vec<(usize, usize)> = (1..=n).flat_map(|u| (u + 1..=n).map(move |v| (u, v))).collect();
    (1u64..1 << pairs.len()).map(move |mask| {
        let chosen: Vec<(usize, usize)> =
            pairs.iter().enumerate().filter(|(i, _)| mask >> i & 1 == 1).map(|(_, &p)| p).collect();
        Graph::simple(n, &chosen).unwrap()
    })
}
