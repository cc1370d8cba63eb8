//! Shortest-path primitives shared by the centrality and vulnerability code.
//!
//! Every routine takes an `alive` mask so that node removal can be simulated
//! without rebuilding the graph. Dead nodes are neither sources, targets nor
//! intermediate hops.

use std::cmp::Ordering;
use std::collections::{BinaryHeap, VecDeque};

use crate::graph::{CoocGraph, NodeId};

/// Marker for "unreachable" in hop-count distance vectors.
pub const UNREACHABLE: u32 = u32::MAX;

/// Relative tolerance under which two weighted path lengths are equal.
pub(crate) const PATH_EPS: f64 = 1e-12;

/// How edge lengths are derived for shortest paths.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum PathMetric {
    /// Every edge has length 1.
    #[default]
    Hops,
    /// Edge length is `1 / weight`: stronger ties are shorter.
    InverseWeight,
}

pub(crate) fn all_alive(g: &CoocGraph) -> Vec<bool> {
    vec![true; g.node_count()]
}

/// BFS hop distances from `source`.
pub fn hop_distances(g: &CoocGraph, source: NodeId, alive: &[bool]) -> Vec<u32> {
    let mut dist = vec![UNREACHABLE; g.node_count()];
    if !alive[source] {
        return dist;
    }
    dist[source] = 0;
    let mut queue = VecDeque::from([source]);
    while let Some(v) = queue.pop_front() {
        for &(w, _) in g.neighbors(v) {
            if alive[w] && dist[w] == UNREACHABLE {
                dist[w] = dist[v] + 1;
                queue.push_back(w);
            }
        }
    }
    dist
}

/// Path lengths from `source` under `metric`; `f64::INFINITY` if unreachable.
pub fn distances(g: &CoocGraph, source: NodeId, alive: &[bool], metric: PathMetric) -> Vec<f64> {
    match metric {
        PathMetric::Hops => hop_distances(g, source, alive)
            .into_iter()
            .map(|d| {
                if d == UNREACHABLE {
                    f64::INFINITY
                } else {
                    d as f64
                }
            })
            .collect(),
        PathMetric::InverseWeight => dijkstra(g, source, alive).dist,
    }
}

#[derive(Clone, Copy, PartialEq)]
struct HeapItem {
    dist: f64,
    node: NodeId,
}

impl Eq for HeapItem {}

impl Ord for HeapItem {
    fn cmp(&self, other: &Self) -> Ordering {
        // min-heap on distance, then node id
        other
            .dist
            .total_cmp(&self.dist)
            .then_with(|| other.node.cmp(&self.node))
    }
}

impl PartialOrd for HeapItem {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

pub(crate) fn same_length(a: f64, b: f64) -> bool {
    (a - b).abs() <= PATH_EPS * a.abs().max(b.abs()).max(1.0)
}

/// Single-source shortest-path DAG: settle order, path counts and
/// predecessor lists.
pub(crate) struct ShortestPathDag {
    pub dist: Vec<f64>,
    pub order: Vec<NodeId>,
    pub sigma: Vec<f64>,
    pub preds: Vec<Vec<NodeId>>,
}

pub(crate) fn shortest_path_dag(
    g: &CoocGraph,
    source: NodeId,
    alive: &[bool],
    metric: PathMetric,
) -> ShortestPathDag {
    match metric {
        PathMetric::Hops => bfs_dag(g, source, alive),
        PathMetric::InverseWeight => dijkstra(g, source, alive),
    }
}

fn bfs_dag(g: &CoocGraph, source: NodeId, alive: &[bool]) -> ShortestPathDag {
    let n = g.node_count();
    let mut hops = vec![UNREACHABLE; n];
    let mut sigma = vec![0.0; n];
    let mut preds = vec![Vec::new(); n];
    let mut order = Vec::with_capacity(n);
    hops[source] = 0;
    sigma[source] = 1.0;
    let mut queue = VecDeque::from([source]);
    while let Some(v) = queue.pop_front() {
        order.push(v);
        for &(w, _) in g.neighbors(v) {
            if !alive[w] {
                continue;
            }
            if hops[w] == UNREACHABLE {
                hops[w] = hops[v] + 1;
                queue.push_back(w);
            }
            if hops[w] == hops[v] + 1 {
                sigma[w] += sigma[v];
                preds[w].push(v);
            }
        }
    }
    let dist = hops
        .into_iter()
        .map(|d| {
            if d == UNREACHABLE {
                f64::INFINITY
            } else {
                d as f64
            }
        })
        .collect();
    ShortestPathDag {
        dist,
        order,
        sigma,
        preds,
    }
}

fn dijkstra(g: &CoocGraph, source: NodeId, alive: &[bool]) -> ShortestPathDag {
    let n = g.node_count();
    let mut dist = vec![f64::INFINITY; n];
    let mut sigma = vec![0.0; n];
    let mut preds: Vec<Vec<NodeId>> = vec![Vec::new(); n];
    let mut settled = vec![false; n];
    let mut order = Vec::with_capacity(n);
    if !alive[source] {
        return ShortestPathDag {
            dist,
            order,
            sigma,
            preds,
        };
    }
    dist[source] = 0.0;
    sigma[source] = 1.0;
    let mut heap = BinaryHeap::from([HeapItem {
        dist: 0.0,
        node: source,
    }]);
    while let Some(HeapItem { dist: d, node: v }) = heap.pop() {
        if settled[v] || d > dist[v] {
            continue;
        }
        settled[v] = true;
        order.push(v);
        for &(w, weight) in g.neighbors(v) {
            if !alive[w] || settled[w] {
                continue;
            }
            let candidate = dist[v] + 1.0 / weight as f64;
            if dist[w].is_infinite() || (candidate < dist[w] && !same_length(candidate, dist[w])) {
                dist[w] = candidate;
                sigma[w] = sigma[v];
                preds[w].clear();
                preds[w].push(v);
                heap.push(HeapItem {
                    dist: candidate,
                    node: w,
                });
            } else if same_length(candidate, dist[w]) {
                sigma[w] += sigma[v];
                preds[w].push(v);
            }
        }
    }
    ShortestPathDag {
        dist,
        order,
        sigma,
        preds,
    }
}
