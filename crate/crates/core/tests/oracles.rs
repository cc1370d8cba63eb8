//! Library results checked against brute-force reference computations.

mod common;

use std::collections::BTreeMap;

use common::*;
use versenet::centrality::{betweenness, closeness, degree, weighted_degree};
use versenet::community::{best_of_seeds, louvain, modularity};
use versenet::corpus::{match_names, Lexicon};
use versenet::vulnerability::{node_deletion_loss, removal_curve, total_inverse_connectivity};
use versenet::{build_graph, ClosenessVariant, CoocGraph, LossMetric, PathMetric, Strategy, Verse};

fn assert_vec_close(got: &[f64], want: &[f64], what: &str, seed: u64) {
    assert_eq!(got.len(), want.len());
    for (i, (g, w)) in got.iter().zip(want).enumerate() {
        assert!(
            (g - w).abs() <= 1e-9 * w.abs().max(1.0),
            "{what} seed {seed} node {i}: got {g}, want {w}"
        );
    }
}

#[test]
fn betweenness_matches_pair_enumeration() {
    for seed in 0..60 {
        let g = random_graph(seed, 24);
        let hops = betweenness(&g, PathMetric::Hops);
        assert_vec_close(
            &hops.scores,
            &betweenness_oracle(&g, false),
            "hop betweenness",
            seed,
        );
        let weighted = betweenness(&g, PathMetric::InverseWeight);
        assert_vec_close(
            &weighted.scores,
            &betweenness_oracle(&g, true),
            "weighted betweenness",
            seed,
        );
    }
}

#[test]
fn betweenness_on_larger_graphs() {
    for seed in 100..106 {
        let g = random_graph(seed, 50);
        let got = betweenness(&g, PathMetric::Hops);
        assert_vec_close(
            &got.scores,
            &betweenness_oracle(&g, false),
            "hop betweenness",
            seed,
        );
    }
}

#[test]
fn degrees_are_matrix_row_counts_and_sums() {
    for seed in 0..30 {
        let g = random_graph(seed, 40);
        let a = weight_matrix(&g);
        let deg: Vec<f64> = a
            .iter()
            .map(|r| r.iter().filter(|&&w| w > 0).count() as f64)
            .collect();
        let wdeg: Vec<f64> = a
            .iter()
            .map(|r| r.iter().map(|&w| w as f64).sum())
            .collect();
        assert_eq!(degree(&g).scores, deg);
        assert_eq!(weighted_degree(&g).scores, wdeg);
    }
}

#[test]
fn closeness_matches_floyd_warshall() {
    for seed in 0..40 {
        let g = random_graph(seed, 30);
        for weighted in [false, true] {
            let metric = if weighted {
                PathMetric::InverseWeight
            } else {
                PathMetric::Hops
            };
            let h = closeness(&g, ClosenessVariant::Harmonic, metric);
            assert_vec_close(&h.scores, &harmonic_oracle(&g, weighted), "harmonic", seed);
            let c = closeness(&g, ClosenessVariant::ClassicWithinComponent, metric);
            assert_vec_close(
                &c.scores,
                &classic_closeness_oracle(&g, weighted),
                "classic",
                seed,
            );
        }
    }
}

#[test]
fn inverse_connectivity_matches_floyd_warshall() {
    for seed in 0..40 {
        let g = random_graph(seed, 40);
        let a = weight_matrix(&g);
        let want = tic_oracle(&a, &vec![true; a.len()]);
        let got = total_inverse_connectivity(&g);
        assert!(
            (got - want).abs() <= 1e-9 * want,
            "seed {seed}: {got} vs {want}"
        );
    }
}

/// Rebuilds the graph without `v` from its edge list rather than masking.
fn without(g: &CoocGraph, v: usize) -> Vec<Vec<u32>> {
    let mut a = weight_matrix(g);
    a.remove(v);
    for row in &mut a {
        row.remove(v);
    }
    a
}

#[test]
fn deletion_loss_matches_recomputation_from_scratch() {
    for seed in 0..25 {
        let g = random_graph(seed, 20);
        let n = g.node_count();
        let a = weight_matrix(&g);
        let full_d = floyd(&a, false, &vec![true; n]);
        let tic_full = tic_oracle(&a, &vec![true; n]);
        let inv = node_deletion_loss(&g, LossMetric::ClosenessSumInverseDistances).unwrap();
        let dist = node_deletion_loss(&g, LossMetric::ConnectivitySumDistances).unwrap();
        let pairs = |k: usize| (k * (k - 1) / 2) as f64;
        for v in 0..n {
            let b = without(&g, v);
            let tic_after = tic_oracle(&b, &vec![true; n - 1]);
            assert!(
                (inv.loss[v] - (tic_full - tic_after)).abs() < 1e-9,
                "seed {seed} v {v}"
            );
            let adj = tic_full / pairs(n) - tic_after / pairs(n - 1);
            assert!((inv.adjusted[v] - adj).abs() < 1e-9, "seed {seed} v {v}");

            let d = floyd(&b, false, &vec![true; n - 1]);
            let old = |i: usize| if i < v { i } else { i + 1 };
            let (mut inc, mut counted, mut lost) = (0.0, 0u64, 0u64);
            for i in 0..n - 1 {
                for j in i + 1..n - 1 {
                    let before = full_d[old(i)][old(j)];
                    if !before.is_finite() {
                        continue;
                    }
                    if d[i][j].is_finite() {
                        inc += d[i][j] - before;
                        counted += 1;
                    } else {
                        lost += 1;
                    }
                }
            }
            assert_eq!(dist.loss[v], inc, "seed {seed} v {v}");
            assert_eq!(dist.disconnected_pairs[v], lost, "seed {seed} v {v}");
            let mean = if counted == 0 {
                0.0
            } else {
                inc / counted as f64
            };
            assert!((dist.adjusted[v] - mean).abs() < 1e-12);
        }
    }
}

#[test]
fn removal_curve_points_match_recomputed_losses() {
    for seed in 0..15 {
        let g = random_graph(seed, 25);
        let n = g.node_count();
        let a = weight_matrix(&g);
        let tic0 = tic_oracle(&a, &vec![true; n]);
        for strategy in Strategy::ALL {
            let curve = removal_curve(&g, strategy, Some(seed)).unwrap();
            assert_eq!(curve.points.len(), n + 1);
            let mut alive = vec![true; n];
            for (k, name) in curve.order.iter().enumerate() {
                alive[g.index_of(name).unwrap()] = false;
                let want = if k + 1 == n {
                    1.0
                } else {
                    (1.0 - tic_oracle(&a, &alive) / tic0).clamp(0.0, 1.0)
                };
                let p = curve.points[k + 1];
                assert!(
                    (p.loss - want).abs() < 1e-9,
                    "{strategy} seed {seed} step {k}"
                );
                assert!((p.fraction_removed - (k + 1) as f64 / n as f64).abs() < 1e-12);
            }
        }
    }
}

#[test]
fn cascading_order_follows_recomputed_betweenness() {
    for seed in 0..10 {
        let g = random_graph(seed, 18);
        let curve = removal_curve(&g, Strategy::BetweennessCascading, None).unwrap();
        let mut edges: Vec<(String, String, u32)> = g
            .edges()
            .iter()
            .map(|&(i, j, w)| (g.name(i).to_string(), g.name(j).to_string(), w))
            .collect();
        let mut remaining: Vec<String> = g.names().to_vec();
        for name in &curve.order {
            // Recompute on the graph induced by remaining nodes, isolated ones included.
            let alive_edges: Vec<_> = edges.clone();
            let best = if alive_edges.is_empty() {
                remaining.iter().min().unwrap().clone()
            } else {
                let h = CoocGraph::from_edges(alive_edges).unwrap();
                let bc = betweenness_oracle(&h, false);
                let score = |n: &str| h.index_of(n).map(|i| bc[i]).unwrap_or(0.0);
                let max = remaining
                    .iter()
                    .map(|n| score(n))
                    .fold(f64::NEG_INFINITY, f64::max);
                remaining
                    .iter()
                    .filter(|n| (score(n) - max).abs() < 1e-9)
                    .min()
                    .unwrap()
                    .clone()
            };
            assert_eq!(name, &best, "seed {seed}");
            remaining.retain(|n| n != name);
            edges.retain(|(a, b, _)| a != name && b != name);
        }
    }
}

#[test]
fn modularity_matches_double_sum() {
    for seed in 0..30 {
        let g = random_graph(seed, 30);
        let p = louvain(&g, seed).unwrap();
        let want = modularity_oracle(&g, &p.assignment);
        assert!((p.modularity - want).abs() < 1e-12, "seed {seed}");
        let singletons: Vec<usize> = (0..g.node_count()).collect();
        let q = modularity(&g, &singletons).unwrap();
        assert!((q - modularity_oracle(&g, &singletons)).abs() < 1e-12);
    }
}

#[test]
fn louvain_is_close_to_exhaustive_optimum_on_small_graphs() {
    for seed in 0..25 {
        let g = random_graph(seed, 9);
        let best = best_modularity(&g);
        let (p, _) = best_of_seeds(&g, &(0..5).collect::<Vec<_>>()).unwrap();
        assert!(p.modularity <= best + 1e-12, "seed {seed}: above optimum");
        assert!(
            best - p.modularity <= 0.02,
            "seed {seed}: {} vs optimum {best}",
            p.modularity
        );
    }
}

/// A graph where standard Louvain stalls in a local optimum for every seed
/// (networkx's implementation stalls at the same value).
#[test]
fn louvain_local_optimum_counterexample() {
    let g = CoocGraph::from_edges([
        ("v00", "v04", 3),
        ("v00", "v05", 1),
        ("v00", "v06", 4),
        ("v01", "v02", 4),
        ("v01", "v03", 4),
        ("v02", "v06", 5),
        ("v03", "v06", 1),
        ("v04", "v06", 1),
    ])
    .unwrap();
    let optimum = best_modularity(&g);
    assert!((optimum - 0.238185255198).abs() < 1e-9);
    let (p, _) = best_of_seeds(&g, &(0..100).collect::<Vec<_>>()).unwrap();
    assert!((p.modularity - 0.216446124764).abs() < 1e-9);
    assert!(optimum - p.modularity > 0.02);
}

#[test]
fn two_triangles_reach_exhaustive_optimum_of_one_half() {
    let g = CoocGraph::from_edges([
        ("A", "B", 1),
        ("B", "C", 1),
        ("A", "C", 1),
        ("D", "E", 1),
        ("E", "F", 1),
        ("D", "F", 1),
    ])
    .unwrap();
    assert!((best_modularity(&g) - 0.5).abs() < 1e-12);
    let p = louvain(&g, 7).unwrap();
    assert!((p.modularity - 0.5).abs() < 1e-12);
    assert_eq!(p.n_clusters, 2);
}

#[test]
fn build_graph_matches_pairwise_recount() {
    let lexicon = Lexicon::new(
        ["Peter", "John", "James", "Simon Peter", "Mary"],
        Vec::<String>::new(),
    )
    .unwrap();
    let texts = [
        "Peter and John went up.",
        "Simon Peter said to John and James.",
        "Mary, Peter, Peter.",
        "nobody here",
        "James and John, and Mary.",
        "John alone.",
    ];
    let verses: Vec<Verse> = texts
        .iter()
        .enumerate()
        .map(|(i, t)| Verse::new("Mark", 1, i as u32 + 1, *t))
        .collect();
    let g = build_graph(&verses, &lexicon);

    let mut counts: BTreeMap<(String, String), u32> = BTreeMap::new();
    for v in &verses {
        let names: Vec<String> = match_names(v, &lexicon).into_iter().collect();
        for i in 0..names.len() {
            for j in i + 1..names.len() {
                *counts
                    .entry((names[i].clone(), names[j].clone()))
                    .or_default() += 1;
            }
        }
    }
    let got: BTreeMap<(String, String), u32> = g
        .edges()
        .iter()
        .map(|&(a, b, w)| ((g.name(a).to_string(), g.name(b).to_string()), w))
        .collect();
    assert_eq!(got, counts);
    assert_eq!(g.weight_by_name("John", "Simon Peter"), Some(1));
    assert_eq!(g.weight_by_name("John", "Peter"), Some(1));
    assert_eq!(g.weight_by_name("Mary", "Peter"), Some(1));
}

#[test]
fn partition_enumeration_counts_bell_numbers() {
    for (n, bell) in [(1, 1), (3, 5), (5, 52), (8, 4140)] {
        let mut count = 0;
        for_each_partition(n, |_| count += 1);
        assert_eq!(count, bell);
    }
}
