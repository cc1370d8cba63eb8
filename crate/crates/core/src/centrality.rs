//! Node centrality measures and rank tables.

use std::fmt;
use std::str::FromStr;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::graph::{CoocGraph, NodeId};
use crate::paths::{self, PathMetric};

/// Scores closer than this share a rank.
pub const RANK_RESOLUTION: f64 = 1e-9;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Measure {
    Degree,
    WeightedDegree,
    Betweenness,
    Closeness,
    /// Per-node loss in the sum of geodesic distances.
    LossConnectivity,
    /// Per-node loss in the sum of inverse distances.
    LossCloseness,
}

impl Measure {
    pub const ALL: [Measure; 6] = [
        Measure::Degree,
        Measure::WeightedDegree,
        Measure::Betweenness,
        Measure::Closeness,
        Measure::LossConnectivity,
        Measure::LossCloseness,
    ];

    pub fn as_str(self) -> &'static str {
        match self {
            Measure::Degree => "degree",
            Measure::WeightedDegree => "weighted_degree",
            Measure::Betweenness => "betweenness",
            Measure::Closeness => "closeness",
            Measure::LossConnectivity => "loss_connectivity",
            Measure::LossCloseness => "loss_closeness",
        }
    }
}

impl fmt::Display for Measure {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for Measure {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        Measure::ALL
            .into_iter()
            .find(|m| m.as_str() == s)
            .ok_or_else(|| format!("unknown measure {s:?}"))
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ClosenessVariant {
    /// Sum of inverse distances; unreachable nodes contribute 0.
    #[default]
    Harmonic,
    /// `(n_C - 1) / sum of distances` inside the node's component.
    ClassicWithinComponent,
}

impl FromStr for ClosenessVariant {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "harmonic" => Ok(ClosenessVariant::Harmonic),
            "classic" | "classic_within_component" => Ok(ClosenessVariant::ClassicWithinComponent),
            _ => Err(format!("unknown closeness variant {s:?}")),
        }
    }
}

/// Scores for one measure, with ranks (1 = most central).
///
/// Ties share the smallest rank of their group; within a group entries are
/// ordered by name.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CentralityTable {
    pub measure: Measure,
    pub names: Vec<String>,
    pub scores: Vec<f64>,
    pub ranks: Vec<usize>,
    order: Vec<NodeId>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RankedEntry {
    pub name: String,
    pub score: f64,
    pub rank: usize,
}

fn rank_key(score: f64) -> i64 {
    (score / RANK_RESOLUTION).round() as i64
}

/// Node ids sorted by decreasing score, ties by name.
pub(crate) fn ranking_order(names: &[String], scores: &[f64]) -> Vec<NodeId> {
    let mut order: Vec<NodeId> = (0..scores.len()).collect();
    order.sort_by(|&a, &b| {
        rank_key(scores[b])
            .cmp(&rank_key(scores[a]))
            .then_with(|| names[a].cmp(&names[b]))
    });
    order
}

impl CentralityTable {
    pub fn new(measure: Measure, names: Vec<String>, scores: Vec<f64>) -> Self {
        assert_eq!(names.len(), scores.len());
        let order = ranking_order(&names, &scores);
        let mut ranks = vec![0; scores.len()];
        for (pos, &id) in order.iter().enumerate() {
            ranks[id] = if pos > 0 && rank_key(scores[order[pos - 1]]) == rank_key(scores[id]) {
                ranks[order[pos - 1]]
            } else {
                pos + 1
            };
        }
        CentralityTable {
            measure,
            names,
            scores,
            ranks,
            order,
        }
    }

    pub fn len(&self) -> usize {
        self.names.len()
    }

    pub fn is_empty(&self) -> bool {
        self.names.is_empty()
    }

    pub fn score(&self, name: &str) -> Option<f64> {
        self.position(name).map(|i| self.scores[i])
    }

    pub fn rank(&self, name: &str) -> Option<usize> {
        self.position(name).map(|i| self.ranks[i])
    }

    fn position(&self, name: &str) -> Option<usize> {
        self.names.iter().position(|n| n == name)
    }

    /// Node ids in rank order.
    pub fn order(&self) -> &[NodeId] {
        &self.order
    }

    /// All entries in rank order.
    pub fn ranked(&self) -> Vec<RankedEntry> {
        self.top_k(self.len())
    }

    /// The first `k` entries by rank (all of them if `k` exceeds N).
    pub fn top_k(&self, k: usize) -> Vec<RankedEntry> {
        self.order
            .iter()
            .take(k)
            .map(|&i| RankedEntry {
                name: self.names[i].clone(),
                score: self.scores[i],
                rank: self.ranks[i],
            })
            .collect()
    }
}

pub fn top_k(table: &CentralityTable, k: usize) -> Vec<RankedEntry> {
    table.top_k(k)
}

/// Number of distinct neighbors.
pub fn degree(g: &CoocGraph) -> CentralityTable {
    let scores = (0..g.node_count()).map(|v| g.degree(v) as f64).collect();
    CentralityTable::new(Measure::Degree, g.names().to_vec(), scores)
}

/// Sum of incident edge weights.
pub fn weighted_degree(g: &CoocGraph) -> CentralityTable {
    let scores = (0..g.node_count())
        .map(|v| g.neighbors(v).iter().map(|&(_, w)| w as f64).sum())
        .collect();
    CentralityTable::new(Measure::WeightedDegree, g.names().to_vec(), scores)
}

/// Unnormalized shortest-path betweenness, each unordered pair counted once.
pub fn betweenness(g: &CoocGraph, metric: PathMetric) -> CentralityTable {
    let scores = betweenness_scores(g, &paths::all_alive(g), metric);
    CentralityTable::new(Measure::Betweenness, g.names().to_vec(), scores)
}

/// Betweenness restricted to the alive nodes; dead nodes score 0.
///
/// Sources are processed in parallel and their dependency vectors summed in
/// source order, so the result does not depend on thread scheduling.
pub(crate) fn betweenness_scores(g: &CoocGraph, alive: &[bool], metric: PathMetric) -> Vec<f64> {
    let n = g.node_count();
    let partials: Vec<Vec<f64>> = (0..n)
        .into_par_iter()
        .filter(|&s| alive[s])
        .map(|s| source_dependencies(g, s, alive, metric))
        .collect();
    let mut bc = vec![0.0; n];
    for partial in &partials {
        for (acc, d) in bc.iter_mut().zip(partial) {
            *acc += d;
        }
    }
    // every unordered pair was seen from both endpoints
    for x in &mut bc {
        *x /= 2.0;
    }
    bc
}

fn source_dependencies(g: &CoocGraph, s: NodeId, alive: &[bool], metric: PathMetric) -> Vec<f64> {
    let dag = paths::shortest_path_dag(g, s, alive, metric);
    let mut delta = vec![0.0; g.node_count()];
    for &w in dag.order.iter().rev() {
        let coeff = (1.0 + delta[w]) / dag.sigma[w];
        for &v in &dag.preds[w] {
            delta[v] += dag.sigma[v] * coeff;
        }
    }
    delta[s] = 0.0;
    delta
}

pub fn closeness(g: &CoocGraph, variant: ClosenessVariant, metric: PathMetric) -> CentralityTable {
    let alive = paths::all_alive(g);
    let scores = (0..g.node_count())
        .into_par_iter()
        .map(|v| {
            let dist = paths::distances(g, v, &alive, metric);
            let reachable = dist
                .iter()
                .enumerate()
                .filter(|&(u, d)| u != v && d.is_finite());
            match variant {
                ClosenessVariant::Harmonic => reachable.map(|(_, d)| 1.0 / d).sum(),
                ClosenessVariant::ClassicWithinComponent => {
                    let (count, total) =
                        reachable.fold((0usize, 0.0), |(c, t), (_, d)| (c + 1, t + d));
                    if count == 0 {
                        0.0
                    } else {
                        count as f64 / total
                    }
                }
            }
        })
        .collect();
    CentralityTable::new(Measure::Closeness, g.names().to_vec(), scores)
}
