//! Weighted undirected co-occurrence graph.

use std::collections::BTreeMap;

use rayon::prelude::*;

use crate::corpus::{match_names, Lexicon, Verse};
use crate::error::{Error, Result};

/// Node index into [`CoocGraph::names`].
pub type NodeId = usize;

/// Weighted undirected graph over canonical names.
///
/// Nodes are sorted lexicographically by name and every node has at least
/// one incident edge. Edge weights count the verses in which both names
/// appear.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct CoocGraph {
    names: Vec<String>,
    adj: Vec<Vec<(NodeId, u32)>>,
    edges: Vec<(NodeId, NodeId, u32)>,
}

impl CoocGraph {
    /// Builds a graph from weighted name pairs.
    ///
    /// Pairs are unordered; repeated pairs are an error, as are self-loops
    /// and zero weights.
    pub fn from_edges<I, S>(edges: I) -> Result<Self>
    where
        I: IntoIterator<Item = (S, S, u32)>,
        S: Into<String>,
    {
        let mut pairs: BTreeMap<(String, String), u32> = BTreeMap::new();
        for (a, b, w) in edges {
            let (a, b) = (a.into(), b.into());
            if a == b {
                return Err(Error::InvalidGraph(format!("self-loop on {a:?}")));
            }
            if w == 0 {
                return Err(Error::InvalidGraph(format!("zero weight on {a:?}-{b:?}")));
            }
            let key = if a < b { (a, b) } else { (b, a) };
            if pairs.contains_key(&key) {
                return Err(Error::InvalidGraph(format!(
                    "duplicate edge {:?}-{:?}",
                    key.0, key.1
                )));
            }
            pairs.insert(key, w);
        }
        Ok(Self::from_pair_map(pairs))
    }

    fn from_pair_map(pairs: BTreeMap<(String, String), u32>) -> Self {
        let mut names: Vec<String> = pairs
            .keys()
            .flat_map(|(a, b)| [a.clone(), b.clone()])
            .collect();
        names.sort();
        names.dedup();

        let index = |n: &str| names.binary_search_by(|x| x.as_str().cmp(n)).unwrap();
        let mut adj = vec![Vec::new(); names.len()];
        let mut edges = Vec::with_capacity(pairs.len());
        for ((a, b), w) in &pairs {
            let (i, j) = (index(a), index(b));
            adj[i].push((j, *w));
            adj[j].push((i, *w));
            edges.push((i.min(j), i.max(j), *w));
        }
        for row in &mut adj {
            row.sort_unstable();
        }
        edges.sort_unstable();
        CoocGraph { names, adj, edges }
    }

    pub fn node_count(&self) -> usize {
        self.names.len()
    }

    pub fn edge_count(&self) -> usize {
        self.edges.len()
    }

    pub fn is_empty(&self) -> bool {
        self.names.is_empty()
    }

    pub fn names(&self) -> &[String] {
        &self.names
    }

    pub fn name(&self, id: NodeId) -> &str {
        &self.names[id]
    }

    pub fn index_of(&self, name: &str) -> Option<NodeId> {
        self.names.binary_search_by(|x| x.as_str().cmp(name)).ok()
    }

    /// Neighbors of `id` with edge weights, sorted by neighbor id.
    pub fn neighbors(&self, id: NodeId) -> &[(NodeId, u32)] {
        &self.adj[id]
    }

    /// Edges as `(a, b, weight)` with `a < b`, sorted.
    pub fn edges(&self) -> &[(NodeId, NodeId, u32)] {
        &self.edges
    }

    pub fn weight(&self, a: NodeId, b: NodeId) -> Option<u32> {
        self.adj[a]
            .binary_search_by_key(&b, |&(n, _)| n)
            .ok()
            .map(|i| self.adj[a][i].1)
    }

    pub fn weight_by_name(&self, a: &str, b: &str) -> Option<u32> {
        self.weight(self.index_of(a)?, self.index_of(b)?)
    }

    pub fn degree(&self, id: NodeId) -> usize {
        self.adj[id].len()
    }

    /// Sum of all edge weights.
    pub fn total_weight(&self) -> u64 {
        self.edges.iter().map(|&(_, _, w)| w as u64).sum()
    }

    /// Fraction of realized edges among all unordered node pairs.
    pub fn density(&self) -> Result<f64> {
        let n = self.node_count();
        if n < 2 {
            return Err(Error::UndefinedDensity(n));
        }
        let pairs = (n * (n - 1) / 2) as f64;
        Ok(self.edge_count() as f64 / pairs)
    }
}

/// Builds the co-occurrence graph: every unordered pair of distinct names
/// matched in the same verse adds one to that pair's weight. Names that
/// never co-occur with another name do not become nodes.
pub fn build_graph(verses: &[Verse], lexicon: &Lexicon) -> CoocGraph {
    let matched: Vec<Vec<String>> = verses
        .par_iter()
        .map(|v| match_names(v, lexicon).into_iter().collect())
        .collect();

    let mut pairs: BTreeMap<(String, String), u32> = BTreeMap::new();
    for names in &matched {
        // sorted, so (a, b) with a < b
        for (i, a) in names.iter().enumerate() {
            for b in &names[i + 1..] {
                *pairs.entry((a.clone(), b.clone())).or_insert(0) += 1;
            }
        }
    }
    CoocGraph::from_pair_map(pairs)
}

/// The graph of a single book.
pub fn subgraph_by_book(verses: &[Verse], lexicon: &Lexicon, book: &str) -> Result<CoocGraph> {
    let selected: Vec<Verse> = verses.iter().filter(|v| v.book == book).cloned().collect();
    if selected.is_empty() {
        return Err(Error::UnknownBook(book.to_string()));
    }
    Ok(build_graph(&selected, lexicon))
}

#[cfg(test)]
pub(crate) mod tests {
    use super::*;

    pub fn graph(edges: &[(&str, &str, u32)]) -> CoocGraph {
        CoocGraph::from_edges(edges.iter().map(|&(a, b, w)| (a, b, w))).unwrap()
    }

    #[test]
    fn density_of_small_graphs() {
        let tri = graph(&[("a", "b", 1), ("b", "c", 1), ("a", "c", 1)]);
        assert_eq!(tri.density().unwrap(), 1.0);
        let path = graph(&[("a", "b", 1), ("b", "c", 1)]);
        assert!((path.density().unwrap() - 2.0 / 3.0).abs() < 1e-15);
        assert!(matches!(
            CoocGraph::default().density(),
            Err(Error::UndefinedDensity(0))
        ));
    }

    #[test]
    fn rejects_malformed_edges() {
        assert!(CoocGraph::from_edges([("a", "a", 1)]).is_err());
        assert!(CoocGraph::from_edges([("a", "b", 0)]).is_err());
        assert!(CoocGraph::from_edges([("a", "b", 1), ("b", "a", 2)]).is_err());
    }

    #[test]
    fn symmetric_weights_and_sorted_nodes() {
        let g = graph(&[("z", "a", 3), ("m", "a", 1)]);
        assert_eq!(g.names(), ["a", "m", "z"]);
        assert_eq!(g.weight_by_name("a", "z"), Some(3));
        assert_eq!(g.weight_by_name("z", "a"), Some(3));
        assert_eq!(g.weight_by_name("m", "z"), None);
        assert_eq!(g.total_weight(), 4);
    }

    fn lex(names: &[&str]) -> Lexicon {
        Lexicon::new(names.iter(), std::iter::empty::<&str>()).unwrap()
    }

    #[test]
    fn single_name_gives_empty_graph() {
        let g = build_graph(&[Verse::new("John", 1, 1, "Jesus wept.")], &lex(&["Jesus"]));
        assert!(g.is_empty());
        assert_eq!(g.edge_count(), 0);
    }

    #[test]
    fn weights_add_over_verses() {
        let v = Verse::new("Mark", 1, 1, "A met B");
        let mut w = v.clone();
        w.verse = 2;
        let g = build_graph(&[v, w], &lex(&["A", "B"]));
        assert_eq!(g.weight_by_name("A", "B"), Some(2));
    }

    #[test]
    fn book_filter() {
        let verses = vec![
            Verse::new("Mark", 1, 1, "A and B"),
            Verse::new("John", 1, 1, "B and C"),
        ];
        let l = lex(&["A", "B", "C"]);
        let mark = subgraph_by_book(&verses, &l, "Mark").unwrap();
        assert_eq!(mark.names(), ["A", "B"]);
        assert!(matches!(
            subgraph_by_book(&verses, &l, "Acts"),
            Err(Error::UnknownBook(_))
        ));
    }
}
