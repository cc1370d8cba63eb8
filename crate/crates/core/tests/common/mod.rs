//! Random graph generation and brute-force reference implementations.
//!
//! The oracles work on dense matrices with Floyd-Warshall distances and
//! explicit pair-by-pair path counting; they share no code with the
//! library's traversal routines.

#![allow(dead_code)]

use std::path::PathBuf;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use versenet::CoocGraph;

pub const INF: f64 = f64::INFINITY;

pub fn data_dir() -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("../../data")
}

/// Random weighted graph on at most `max_nodes` nodes. Isolated nodes are
/// dropped by construction, so the node count may be smaller.
pub fn random_graph(seed: u64, max_nodes: usize) -> CoocGraph {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    loop {
        let n = rng.gen_range(3..=max_nodes);
        let p: f64 = rng.gen_range(0.03..0.6);
        let max_w = if rng.gen_bool(0.5) { 1 } else { 5 };
        let mut edges = Vec::new();
        for i in 0..n {
            for j in i + 1..n {
                if rng.gen_bool(p) {
                    edges.push((
                        format!("v{i:02}"),
                        format!("v{j:02}"),
                        rng.gen_range(1..=max_w),
                    ));
                }
            }
        }
        if edges.len() >= 2 {
            return CoocGraph::from_edges(edges).unwrap();
        }
    }
}

pub fn weight_matrix(g: &CoocGraph) -> Vec<Vec<u32>> {
    let n = g.node_count();
    let mut a = vec![vec![0; n]; n];
    for &(i, j, w) in g.edges() {
        a[i][j] = w;
        a[j][i] = w;
    }
    a
}

/// Floyd-Warshall over an adjacency matrix; `weighted` uses 1/w lengths.
pub fn floyd(a: &[Vec<u32>], weighted: bool, alive: &[bool]) -> Vec<Vec<f64>> {
    let n = a.len();
    let mut d = vec![vec![INF; n]; n];
    for i in 0..n {
        if !alive[i] {
            continue;
        }
        d[i][i] = 0.0;
        for j in 0..n {
            if alive[j] && a[i][j] > 0 {
                d[i][j] = if weighted { 1.0 / a[i][j] as f64 } else { 1.0 };
            }
        }
    }
    for k in 0..n {
        for i in 0..n {
            for j in 0..n {
                let via = d[i][k] + d[k][j];
                if via < d[i][j] {
                    d[i][j] = via;
                }
            }
        }
    }
    d
}

pub fn close(a: f64, b: f64) -> bool {
    (a - b).abs() <= 1e-12 * a.abs().max(b.abs()).max(1.0)
}

/// Number of shortest s-t paths for every t, by processing nodes in
/// increasing distance from s.
fn path_counts(a: &[Vec<u32>], d: &[Vec<f64>], s: usize, weighted: bool) -> Vec<f64> {
    let n = a.len();
    let mut by_dist: Vec<usize> = (0..n).filter(|&v| d[s][v].is_finite()).collect();
    by_dist.sort_by(|&x, &y| d[s][x].total_cmp(&d[s][y]));
    let mut sigma = vec![0.0; n];
    sigma[s] = 1.0;
    for &v in &by_dist {
        if v == s {
            continue;
        }
        for u in 0..n {
            if a[u][v] > 0 && d[s][u].is_finite() {
                let len = if weighted { 1.0 / a[u][v] as f64 } else { 1.0 };
                if close(d[s][u] + len, d[s][v]) && !close(d[s][u], d[s][v]) {
                    sigma[v] += sigma[u];
                }
            }
        }
    }
    sigma
}

/// Betweenness by definition: for each unordered pair {s, t}, the share of
/// shortest s-t paths through v.
pub fn betweenness_oracle(g: &CoocGraph, weighted: bool) -> Vec<f64> {
    let a = weight_matrix(g);
    let n = a.len();
    let d = floyd(&a, weighted, &vec![true; n]);
    let sigma: Vec<Vec<f64>> = (0..n).map(|s| path_counts(&a, &d, s, weighted)).collect();
    let mut bc = vec![0.0; n];
    for s in 0..n {
        for t in s + 1..n {
            if !d[s][t].is_finite() {
                continue;
            }
            for v in 0..n {
                if v != s && v != t && close(d[s][v] + d[v][t], d[s][t]) {
                    bc[v] += sigma[s][v] * sigma[v][t] / sigma[s][t];
                }
            }
        }
    }
    bc
}

pub fn harmonic_oracle(g: &CoocGraph, weighted: bool) -> Vec<f64> {
    let a = weight_matrix(g);
    let n = a.len();
    let d = floyd(&a, weighted, &vec![true; n]);
    (0..n)
        .map(|v| {
            (0..n)
                .filter(|&u| u != v && d[v][u].is_finite())
                .map(|u| 1.0 / d[v][u])
                .sum()
        })
        .collect()
}

pub fn classic_closeness_oracle(g: &CoocGraph, weighted: bool) -> Vec<f64> {
    let a = weight_matrix(g);
    let n = a.len();
    let d = floyd(&a, weighted, &vec![true; n]);
    (0..n)
        .map(|v| {
            let reach: Vec<f64> = (0..n)
                .filter(|&u| u != v && d[v][u].is_finite())
                .map(|u| d[v][u])
                .collect();
            if reach.is_empty() {
                0.0
            } else {
                reach.len() as f64 / reach.iter().sum::<f64>()
            }
        })
        .collect()
}

/// Sum of 1/d over unordered pairs of alive nodes.
pub fn tic_oracle(a: &[Vec<u32>], alive: &[bool]) -> f64 {
    let d = floyd(a, false, alive);
    let n = a.len();
    let mut total = 0.0;
    for i in 0..n {
        for j in i + 1..n {
            if alive[i] && alive[j] && d[i][j].is_finite() {
                total += 1.0 / d[i][j];
            }
        }
    }
    total
}

/// Direct double sum over node pairs.
pub fn modularity_oracle(g: &CoocGraph, assignment: &[usize]) -> f64 {
    let a = weight_matrix(g);
    let n = a.len();
    let k: Vec<f64> = a
        .iter()
        .map(|row| row.iter().map(|&w| w as f64).sum())
        .collect();
    let two_m: f64 = k.iter().sum();
    let mut q = 0.0;
    for i in 0..n {
        for j in 0..n {
            if assignment[i] == assignment[j] {
                q += a[i][j] as f64 - k[i] * k[j] / two_m;
            }
        }
    }
    q / two_m
}

/// Calls `f` with every set partition of `0..n` as a restricted growth
/// string.
pub fn for_each_partition(n: usize, mut f: impl FnMut(&[usize])) {
    fn rec(labels: &mut Vec<usize>, n: usize, max: usize, f: &mut dyn FnMut(&[usize])) {
        if labels.len() == n {
            f(labels);
            return;
        }
        for c in 0..=max + 1 {
            if labels.is_empty() && c > 0 {
                break;
            }
            labels.push(c);
            let next_max = if labels.len() == 1 { 0 } else { max.max(c) };
            rec(labels, n, next_max, f);
            labels.pop();
        }
    }
    let mut labels = Vec::with_capacity(n);
    rec(&mut labels, n, 0, &mut f);
}

pub fn best_modularity(g: &CoocGraph) -> f64 {
    let mut best = f64::NEG_INFINITY;
    for_each_partition(g.node_count(), |p| {
        best = best.max(modularity_oracle(g, p));
    });
    best
}
