//! Modularity, Louvain community detection and cluster reporting.

use std::collections::{BTreeMap, BTreeSet};

use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::graph::{CoocGraph, NodeId};

/// Louvain stops once a whole level improves modularity by less than this.
pub const MODULARITY_TOLERANCE: f64 = 1e-7;

/// Smallest gain over staying put that counts as an improving move.
const MOVE_EPS: f64 = 1e-12;

/// Newman modularity of `assignment` (community id per node id) with
/// weighted adjacency and resolution 1.
pub fn modularity(g: &CoocGraph, assignment: &[usize]) -> Result<f64> {
    if assignment.len() != g.node_count() {
        let missing = g.names().get(assignment.len()).cloned().unwrap_or_default();
        return Err(Error::IncompletePartition(missing));
    }
    let m = g.total_weight() as f64;
    if m == 0.0 {
        return Err(Error::UndefinedModularity);
    }
    let k = (assignment.iter().max().map_or(0, |&c| c + 1)).max(1);
    let mut internal = vec![0.0; k];
    let mut degree_sum = vec![0.0; k];
    for &(a, b, w) in g.edges() {
        let w = w as f64;
        if assignment[a] == assignment[b] {
            internal[assignment[a]] += w;
        }
        degree_sum[assignment[a]] += w;
        degree_sum[assignment[b]] += w;
    }
    Ok(internal
        .iter()
        .zip(&degree_sum)
        .map(|(&l, &d)| l / m - (d / (2.0 * m)).powi(2))
        .sum())
}

/// A node-to-community assignment with its modularity.
///
/// Community ids are dense and ordered by decreasing size; equal sizes are
/// ordered by their first member's name.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Partition {
    pub names: Vec<String>,
    pub assignment: Vec<usize>,
    pub modularity: f64,
    pub n_clusters: usize,
    pub seed: Option<u64>,
}

impl Partition {
    /// Renumbers `labels` canonically and scores it against `g`.
    pub fn from_labels(g: &CoocGraph, labels: &[usize], seed: Option<u64>) -> Result<Self> {
        if labels.len() != g.node_count() {
            let missing = g.names().get(labels.len()).cloned().unwrap_or_default();
            return Err(Error::IncompletePartition(missing));
        }
        let mut groups: BTreeMap<usize, Vec<NodeId>> = BTreeMap::new();
        for (v, &c) in labels.iter().enumerate() {
            groups.entry(c).or_default().push(v);
        }
        let mut groups: Vec<Vec<NodeId>> = groups.into_values().collect();
        // members are ascending node ids, i.e. ascending names
        groups.sort_by(|a, b| b.len().cmp(&a.len()).then_with(|| a[0].cmp(&b[0])));
        let mut assignment = vec![0; labels.len()];
        for (id, members) in groups.iter().enumerate() {
            for &v in members {
                assignment[v] = id;
            }
        }
        let modularity = modularity(g, &assignment)?;
        Ok(Partition {
            names: g.names().to_vec(),
            n_clusters: groups.len(),
            assignment,
            modularity,
            seed,
        })
    }

    pub fn community_of(&self, name: &str) -> Option<usize> {
        self.position(name).map(|i| self.assignment[i])
    }

    pub fn community_size(&self, community: usize) -> usize {
        self.assignment.iter().filter(|&&c| c == community).count()
    }

    pub fn members(&self, community: usize) -> Vec<&str> {
        self.assignment
            .iter()
            .zip(&self.names)
            .filter(|(&c, _)| c == community)
            .map(|(_, n)| n.as_str())
            .collect()
    }

    fn position(&self, name: &str) -> Option<usize> {
        self.names.binary_search_by(|n| n.as_str().cmp(name)).ok()
    }
}

/// Size of the community containing `name` over the node count; 0 when
/// `name` is not a node.
pub fn cluster_weight(p: &Partition, name: &str) -> f64 {
    match p.community_of(name) {
        Some(c) if !p.names.is_empty() => p.community_size(c) as f64 / p.names.len() as f64,
        _ => 0.0,
    }
}

/// Working graph for one Louvain level. Self-loop weights hold edges that
/// were collapsed inside a community.
struct Level {
    adj: Vec<Vec<(usize, f64)>>,
    self_loops: Vec<f64>,
}

impl Level {
    fn from_graph(g: &CoocGraph) -> Self {
        let adj = (0..g.node_count())
            .map(|v| g.neighbors(v).iter().map(|&(u, w)| (u, w as f64)).collect())
            .collect();
        Level {
            adj,
            self_loops: vec![0.0; g.node_count()],
        }
    }

    fn len(&self) -> usize {
        self.adj.len()
    }

    fn strength(&self, v: usize) -> f64 {
        self.adj[v].iter().map(|&(_, w)| w).sum::<f64>() + 2.0 * self.self_loops[v]
    }

    /// Local moving phase. Returns the community of each level node and
    /// whether anything moved.
    fn local_moves(&self, m: f64, rng: &mut ChaCha8Rng) -> (Vec<usize>, bool) {
        let n = self.len();
        let strength: Vec<f64> = (0..n).map(|v| self.strength(v)).collect();
        let mut community: Vec<usize> = (0..n).collect();
        let mut total = strength.clone();
        let mut order: Vec<usize> = (0..n).collect();
        order.shuffle(rng);

        let mut links: Vec<f64> = vec![0.0; n];
        let mut touched: Vec<usize> = Vec::new();
        let mut any_move = false;
        loop {
            let mut moved = false;
            for &v in &order {
                let own = community[v];
                let kv = strength[v];
                total[own] -= kv;

                for &(u, w) in &self.adj[v] {
                    let c = community[u];
                    if links[c] == 0.0 {
                        touched.push(c);
                    }
                    links[c] += w;
                }
                let gain = |c: usize| links[c] - total[c] * kv / (2.0 * m);
                let stay = gain(own);
                // ascending ids with a strict comparison: smallest id wins ties
                touched.sort_unstable();
                let mut best = own;
                let mut best_gain = f64::NEG_INFINITY;
                for &c in &touched {
                    let g = gain(c);
                    if g > best_gain + MOVE_EPS {
                        best = c;
                        best_gain = g;
                    }
                }
                if best_gain <= stay + MOVE_EPS {
                    best = own;
                }
                for &c in &touched {
                    links[c] = 0.0;
                }
                touched.clear();

                total[best] += kv;
                if best != own {
                    community[v] = best;
                    moved = true;
                    any_move = true;
                }
            }
            if !moved {
                break;
            }
        }
        (community, any_move)
    }

    /// Collapses communities into single nodes. Returns the new level and
    /// the dense community index of each old node.
    fn aggregate(&self, community: &[usize]) -> (Level, Vec<usize>) {
        let mut dense: BTreeMap<usize, usize> = BTreeMap::new();
        for &c in community {
            let next = dense.len();
            dense.entry(c).or_insert(next);
        }
        let map: Vec<usize> = community.iter().map(|c| dense[c]).collect();
        let k = dense.len();
        let mut self_loops = vec![0.0; k];
        let mut pairs: BTreeMap<(usize, usize), f64> = BTreeMap::new();
        for v in 0..self.len() {
            let cv = map[v];
            self_loops[cv] += self.self_loops[v];
            for &(u, w) in &self.adj[v] {
                if u < v {
                    continue;
                }
                let cu = map[u];
                if cu == cv {
                    self_loops[cv] += w;
                } else {
                    *pairs.entry((cv.min(cu), cv.max(cu))).or_insert(0.0) += w;
                }
            }
        }
        let mut adj = vec![Vec::new(); k];
        for (&(a, b), &w) in &pairs {
            adj[a].push((b, w));
            adj[b].push((a, w));
        }
        (Level { adj, self_loops }, map)
    }
}

/// Result of a Louvain run with the modularity reached after each level.
#[derive(Debug, Clone, PartialEq)]
pub struct LouvainRun {
    pub partition: Partition,
    pub level_modularity: Vec<f64>,
}

/// Two-phase Louvain: local moves until no improving move exists, then
/// aggregation, repeated until a level gains less than
/// [`MODULARITY_TOLERANCE`]. The seed fixes the node visiting order.
pub fn louvain(g: &CoocGraph, seed: u64) -> Result<Partition> {
    louvain_run(g, seed).map(|r| r.partition)
}

pub fn louvain_run(g: &CoocGraph, seed: u64) -> Result<LouvainRun> {
    if g.is_empty() {
        return Err(Error::EmptyGraph);
    }
    let m = g.total_weight() as f64;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut labels: Vec<usize> = (0..g.node_count()).collect();
    let mut level = Level::from_graph(g);
    let mut current = modularity(g, &labels)?;
    let mut trace = vec![current];

    loop {
        let (community, moved) = level.local_moves(m, &mut rng);
        if !moved {
            break;
        }
        let (next, map) = level.aggregate(&community);
        let candidate: Vec<usize> = labels.iter().map(|&l| map[l]).collect();
        let q = modularity(g, &candidate)?;
        if q < current {
            break;
        }
        labels = candidate;
        level = next;
        trace.push(q);
        let gain = q - current;
        current = q;
        if gain < MODULARITY_TOLERANCE {
            break;
        }
    }

    Ok(LouvainRun {
        partition: Partition::from_labels(g, &labels, Some(seed))?,
        level_modularity: trace,
    })
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SeedResult {
    pub seed: u64,
    pub modularity: f64,
    pub n_clusters: usize,
}

/// Runs Louvain once per seed (in parallel) and returns the partition with
/// the highest modularity, the lowest seed winning ties, along with every
/// seed's score in seed-list order.
pub fn best_of_seeds(g: &CoocGraph, seeds: &[u64]) -> Result<(Partition, Vec<SeedResult>)> {
    if seeds.is_empty() {
        return Err(Error::InvalidGraph("no Louvain seeds given".into()));
    }
    let runs: Vec<Partition> = seeds
        .par_iter()
        .map(|&s| louvain(g, s))
        .collect::<Result<_>>()?;
    let summary = runs
        .iter()
        .map(|p| SeedResult {
            seed: p.seed.unwrap_or_default(),
            modularity: p.modularity,
            n_clusters: p.n_clusters,
        })
        .collect();
    let best = runs
        .into_iter()
        .reduce(|best, p| {
            let better = p.modularity > best.modularity
                || (p.modularity == best.modularity && p.seed < best.seed);
            if better {
                p
            } else {
                best
            }
        })
        .expect("non-empty seed list");
    Ok((best, summary))
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CommunityRow {
    pub name: String,
    pub community: usize,
    pub community_size: usize,
    pub weight: f64,
}

/// Per-node community table plus the communities holding the focus names.
#[derive(Debug, Clone, PartialEq)]
pub struct CommunityReport {
    pub rows: Vec<CommunityRow>,
    pub highlighted: BTreeSet<usize>,
    pub unknown_focus: Vec<String>,
}

impl CommunityReport {
    pub fn is_highlighted(&self, community: usize) -> bool {
        self.highlighted.contains(&community)
    }
}

/// Builds the per-node report. Focus names that are not nodes are logged
/// and listed in `unknown_focus`.
pub fn community_report(p: &Partition, focus_names: &[String]) -> CommunityReport {
    let n = p.names.len() as f64;
    let sizes: Vec<usize> = (0..p.n_clusters).map(|c| p.community_size(c)).collect();
    let rows = p
        .names
        .iter()
        .zip(&p.assignment)
        .map(|(name, &c)| CommunityRow {
            name: name.clone(),
            community: c,
            community_size: sizes[c],
            weight: sizes[c] as f64 / n,
        })
        .collect();
    let mut highlighted = BTreeSet::new();
    let mut unknown_focus = Vec::new();
    for name in focus_names {
        match p.community_of(name) {
            Some(c) => {
                highlighted.insert(c);
            }
            None => {
                log::warn!("focus name {name:?} is not a node of this graph; no highlight for it");
                unknown_focus.push(name.clone());
            }
        }
    }
    CommunityReport {
        rows,
        highlighted,
        unknown_focus,
    }
}
