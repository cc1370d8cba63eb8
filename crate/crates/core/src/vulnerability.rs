//! Network vulnerability: per-node deletion losses and sequential removal
//! curves.
//!
//! All quantities are computed on hop distances. The removal curves use the
//! normalized inverse-distance form `1 - TIC(g_k) / TIC(g_0)`, where TIC is
//! the sum of `1/d(u, v)` over unordered pairs (unreachable pairs add 0).

use std::fmt;
use std::io::Write;
use std::str::FromStr;

use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::centrality::{self, ranking_order, CentralityTable, Measure};
use crate::error::{Error, Result};
use crate::graph::{CoocGraph, NodeId};
use crate::paths::{self, PathMetric, UNREACHABLE};

/// Sum of inverse hop distances over unordered pairs of alive nodes.
pub(crate) fn tic_masked(g: &CoocGraph, alive: &[bool]) -> f64 {
    let partials: Vec<f64> = (0..g.node_count())
        .into_par_iter()
        .map(|s| {
            if !alive[s] {
                return 0.0;
            }
            paths::hop_distances(g, s, alive)
                .iter()
                .enumerate()
                .skip(s + 1)
                .filter(|&(_, &d)| d != UNREACHABLE)
                .map(|(_, &d)| 1.0 / d as f64)
                .sum()
        })
        .collect();
    partials.iter().sum()
}

/// Total inverse connectivity of the whole graph.
pub fn total_inverse_connectivity(g: &CoocGraph) -> f64 {
    tic_masked(g, &paths::all_alive(g))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum LossMetric {
    /// Change in the sum of geodesic distances.
    ConnectivitySumDistances,
    /// Change in the sum of inverse distances.
    ClosenessSumInverseDistances,
}

/// Per-node deletion losses.
///
/// For [`LossMetric::ClosenessSumInverseDistances`], `loss` is
/// `TIC(g) - TIC(g - v)` and `adjusted` is the change in the mean inverse
/// distance per pair (`TIC/C(N,2)` before, `TIC/C(N-1,2)` after).
///
/// For [`LossMetric::ConnectivitySumDistances`], `loss` sums the distance
/// increase over pairs that stay connected after deleting `v`; pairs that
/// become disconnected are counted in `disconnected_pairs` instead, and
/// `adjusted` is the mean increase over the counted pairs.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct NodeLossTable {
    pub metric: LossMetric,
    pub names: Vec<String>,
    pub loss: Vec<f64>,
    pub adjusted: Vec<f64>,
    pub disconnected_pairs: Vec<u64>,
}

impl NodeLossTable {
    pub fn loss_of(&self, name: &str) -> Option<f64> {
        self.names
            .iter()
            .position(|n| n == name)
            .map(|i| self.loss[i])
    }

    /// Rank table over the raw losses.
    pub fn to_table(&self) -> CentralityTable {
        let measure = match self.metric {
            LossMetric::ConnectivitySumDistances => Measure::LossConnectivity,
            LossMetric::ClosenessSumInverseDistances => Measure::LossCloseness,
        };
        CentralityTable::new(measure, self.names.clone(), self.loss.clone())
    }
}

fn hop_matrix(g: &CoocGraph, alive: &[bool]) -> Vec<Vec<u32>> {
    (0..g.node_count())
        .into_par_iter()
        .map(|s| paths::hop_distances(g, s, alive))
        .collect()
}

pub fn node_deletion_loss(g: &CoocGraph, metric: LossMetric) -> Result<NodeLossTable> {
    let n = g.node_count();
    if n < 3 {
        return Err(Error::DegenerateGraph {
            needed: 3,
            found: n,
        });
    }
    let full = hop_matrix(g, &paths::all_alive(g));
    let pairs = |k: usize| (k * (k - 1) / 2) as f64;
    let tic_full = if metric == LossMetric::ClosenessSumInverseDistances {
        total_inverse_connectivity(g)
    } else {
        0.0
    };

    let rows: Vec<(f64, f64, u64)> = (0..n)
        .into_par_iter()
        .map(|v| {
            let mut alive = paths::all_alive(g);
            alive[v] = false;
            match metric {
                LossMetric::ClosenessSumInverseDistances => {
                    let after = tic_masked(g, &alive);
                    let raw = tic_full - after;
                    let adjusted = tic_full / pairs(n) - after / pairs(n - 1);
                    (raw, adjusted, 0)
                }
                LossMetric::ConnectivitySumDistances => {
                    let mut increase = 0u64;
                    let mut counted = 0u64;
                    let mut lost = 0u64;
                    for s in (0..n).filter(|&s| s != v) {
                        let after = paths::hop_distances(g, s, &alive);
                        for t in (s + 1..n).filter(|&t| t != v) {
                            let before = full[s][t];
                            if before == UNREACHABLE {
                                continue;
                            }
                            if after[t] == UNREACHABLE {
                                lost += 1;
                            } else {
                                increase += (after[t] - before) as u64;
                                counted += 1;
                            }
                        }
                    }
                    let adjusted = if counted == 0 {
                        0.0
                    } else {
                        increase as f64 / counted as f64
                    };
                    (increase as f64, adjusted, lost)
                }
            }
        })
        .collect();

    Ok(NodeLossTable {
        metric,
        names: g.names().to_vec(),
        loss: rows.iter().map(|r| r.0).collect(),
        adjusted: rows.iter().map(|r| r.1).collect(),
        disconnected_pairs: rows.iter().map(|r| r.2).collect(),
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Strategy {
    BetweennessStatic,
    DegreeStatic,
    BetweennessCascading,
    Random,
}

impl Strategy {
    pub const ALL: [Strategy; 4] = [
        Strategy::BetweennessStatic,
        Strategy::DegreeStatic,
        Strategy::BetweennessCascading,
        Strategy::Random,
    ];

    pub fn as_str(self) -> &'static str {
        match self {
            Strategy::BetweennessStatic => "betweenness_static",
            Strategy::DegreeStatic => "degree_static",
            Strategy::BetweennessCascading => "betweenness_cascading",
            Strategy::Random => "random",
        }
    }
}

impl fmt::Display for Strategy {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for Strategy {
    type Err = String;

    fn from_str(s: &str) -> std::result::Result<Self, Self::Err> {
        Strategy::ALL
            .into_iter()
            .find(|m| m.as_str() == s)
            .ok_or_else(|| format!("unknown removal strategy {s:?}"))
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct CurvePoint {
    pub fraction_removed: f64,
    pub loss: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RemovalCurve {
    pub strategy: Strategy,
    pub seed: Option<u64>,
    /// Names in removal order.
    pub order: Vec<String>,
    /// `N + 1` points, from `(0, 0)` to `(1, 1)`.
    pub points: Vec<CurvePoint>,
}

impl RemovalCurve {
    /// Loss at the first point whose removed fraction reaches `fraction`.
    pub fn loss_at(&self, fraction: f64) -> f64 {
        self.points
            .iter()
            .find(|p| p.fraction_removed >= fraction - 1e-12)
            .map(|p| p.loss)
            .unwrap_or(1.0)
    }
}

/// Removes nodes one at a time and records the normalized loss in total
/// inverse connectivity after each removal.
pub fn removal_curve(g: &CoocGraph, strategy: Strategy, seed: Option<u64>) -> Result<RemovalCurve> {
    let n = g.node_count();
    if n < 3 {
        return Err(Error::DegenerateGraph {
            needed: 3,
            found: n,
        });
    }
    let seed = match (strategy, seed) {
        (Strategy::Random, None) => return Err(Error::MissingSeed),
        (Strategy::Random, s) => s,
        _ => None,
    };

    let static_order = |scores: Vec<f64>| ranking_order(g.names(), &scores);
    let mut order: Option<Vec<NodeId>> = match strategy {
        Strategy::BetweennessStatic => Some(static_order(
            centrality::betweenness(g, PathMetric::Hops).scores,
        )),
        Strategy::DegreeStatic => Some(static_order(centrality::degree(g).scores)),
        Strategy::Random => {
            let mut ids: Vec<NodeId> = (0..n).collect();
            let mut rng = ChaCha8Rng::seed_from_u64(seed.unwrap_or_default());
            ids.shuffle(&mut rng);
            Some(ids)
        }
        Strategy::BetweennessCascading => None,
    };

    let tic0 = total_inverse_connectivity(g);
    let mut alive = paths::all_alive(g);
    let mut removed = Vec::with_capacity(n);
    let mut points = vec![CurvePoint {
        fraction_removed: 0.0,
        loss: 0.0,
    }];
    for k in 1..=n {
        let victim = match &mut order {
            Some(o) => o[k - 1],
            None => cascading_pick(g, &alive),
        };
        alive[victim] = false;
        removed.push(g.name(victim).to_string());
        let loss = if k == n {
            1.0
        } else {
            let tic = tic_masked(g, &alive);
            (1.0 - tic / tic0).clamp(0.0, 1.0)
        };
        points.push(CurvePoint {
            fraction_removed: k as f64 / n as f64,
            loss,
        });
    }
    Ok(RemovalCurve {
        strategy,
        seed,
        order: removed,
        points,
    })
}

fn cascading_pick(g: &CoocGraph, alive: &[bool]) -> NodeId {
    let scores = centrality::betweenness_scores(g, alive, PathMetric::Hops);
    let masked: Vec<f64> = scores
        .iter()
        .zip(alive)
        .map(|(&s, &a)| if a { s } else { -1.0 })
        .collect();
    ranking_order(g.names(), &masked)[0]
}

/// Writes curves in long format: `strategy,fraction_removed,loss,seed`.
pub fn curve_report<W: Write>(curves: &[RemovalCurve], out: W) -> Result<()> {
    let mut w = csv::Writer::from_writer(out);
    w.write_record(["strategy", "fraction_removed", "loss", "seed"])?;
    for c in curves {
        let seed = c.seed.map(|s| s.to_string()).unwrap_or_default();
        for p in &c.points {
            w.write_record([
                c.strategy.as_str(),
                &p.fraction_removed.to_string(),
                &p.loss.to_string(),
                &seed,
            ])?;
        }
    }
    w.flush()?;
    Ok(())
}

pub fn curves_json<W: Write>(curves: &[RemovalCurve], out: W) -> Result<()> {
    serde_json::to_writer_pretty(out, curves)?;
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::tests::graph;

    fn star() -> CoocGraph {
        graph(&[
            ("c", "l1", 1),
            ("c", "l2", 1),
            ("c", "l3", 1),
            ("c", "l4", 1),
        ])
    }

    fn complete(n: usize) -> CoocGraph {
        let names: Vec<String> = (0..n).map(|i| format!("n{i}")).collect();
        let mut edges = Vec::new();
        for i in 0..n {
            for j in i + 1..n {
                edges.push((names[i].clone(), names[j].clone(), 1));
            }
        }
        CoocGraph::from_edges(edges).unwrap()
    }

    #[test]
    fn tic_small_graphs() {
        assert_eq!(total_inverse_connectivity(&complete(3)), 3.0);
        let path = graph(&[("a", "b", 1), ("b", "c", 1)]);
        assert_eq!(total_inverse_connectivity(&path), 2.5);
        assert_eq!(total_inverse_connectivity(&star()), 7.0);
    }

    #[test]
    fn star_center_inverse_loss() {
        let t = node_deletion_loss(&star(), LossMetric::ClosenessSumInverseDistances).unwrap();
        assert_eq!(t.loss_of("c"), Some(4.0 + 6.0 * 0.5));
        assert!(t.loss_of("l1").unwrap() < t.loss_of("c").unwrap());
        // leaf removal: 3 + 3 * 0.5 remain of 7
        assert_eq!(t.loss_of("l1"), Some(7.0 - 4.5));
    }

    #[test]
    fn star_center_distance_loss_counts_disconnections() {
        let t = node_deletion_loss(&star(), LossMetric::ConnectivitySumDistances).unwrap();
        let c = t.names.iter().position(|n| n == "c").unwrap();
        assert_eq!(t.loss[c], 0.0);
        assert_eq!(t.disconnected_pairs[c], 6);
        assert_eq!(t.disconnected_pairs[1], 0);
    }

    #[test]
    fn detour_raises_distance_loss() {
        // a-b-c with a longer detour a-x-y-c
        let g = graph(&[
            ("a", "b", 1),
            ("b", "c", 1),
            ("a", "x", 1),
            ("x", "y", 1),
            ("y", "c", 1),
        ]);
        let t = node_deletion_loss(&g, LossMetric::ConnectivitySumDistances).unwrap();
        // without b only a-c changes, 2 -> 3
        assert_eq!(t.loss_of("b"), Some(1.0));
    }

    #[test]
    fn degenerate_inputs() {
        let g = graph(&[("a", "b", 1)]);
        assert!(node_deletion_loss(&g, LossMetric::ConnectivitySumDistances).is_err());
        assert!(removal_curve(&g, Strategy::DegreeStatic, None).is_err());
        assert!(matches!(
            removal_curve(&star(), Strategy::Random, None),
            Err(Error::MissingSeed)
        ));
    }

    #[test]
    fn complete_graph_first_step() {
        for s in Strategy::ALL {
            let c = removal_curve(&complete(4), s, Some(7)).unwrap();
            assert_eq!(c.points[1].loss, 0.5, "{s}");
            assert_eq!(c.points.len(), 5);
        }
    }

    #[test]
    fn star_static_betweenness_removes_center_first() {
        let c = removal_curve(&star(), Strategy::BetweennessStatic, None).unwrap();
        assert_eq!(c.order[0], "c");
        assert_eq!(c.points[1].loss, 1.0);
    }

    #[test]
    fn curve_endpoints() {
        let c = removal_curve(&star(), Strategy::Random, Some(3)).unwrap();
        assert_eq!(c.points.first().unwrap().loss, 0.0);
        assert_eq!(c.points.last().unwrap().loss, 1.0);
        assert_eq!(c.points.last().unwrap().fraction_removed, 1.0);
        assert_eq!(c.seed, Some(3));
    }

    #[test]
    fn report_has_one_row_per_point() {
        let c = RemovalCurve {
            strategy: Strategy::DegreeStatic,
            seed: None,
            order: vec![],
            points: vec![
                CurvePoint {
                    fraction_removed: 0.0,
                    loss: 0.0,
                },
                CurvePoint {
                    fraction_removed: 0.5,
                    loss: 0.25,
                },
                CurvePoint {
                    fraction_removed: 1.0,
                    loss: 1.0,
                },
            ],
        };
        let mut buf = Vec::new();
        curve_report(&[c], &mut buf).unwrap();
        let text = String::from_utf8(buf).unwrap();
        let lines: Vec<&str> = text.lines().collect();
        assert_eq!(lines.len(), 4);
        assert_eq!(lines[2], "degree_static,0.5,0.25,");
    }

    #[test]
    fn loss_at_uses_first_point_reaching_fraction() {
        let c = removal_curve(&complete(5), Strategy::DegreeStatic, None).unwrap();
        assert_eq!(c.loss_at(0.2), c.points[1].loss);
        assert_eq!(c.loss_at(0.3), c.points[2].loss);
        assert_eq!(c.loss_at(0.0), 0.0);
    }
}
