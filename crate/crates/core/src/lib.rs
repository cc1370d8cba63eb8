//! Character and place co-occurrence networks from verse-structured texts.
//!
//! The pipeline reads a verse corpus and a name lexicon ([`corpus`]), links
//! names that share a verse ([`graph`]), and analyses the resulting weighted
//! network: centrality rankings ([`centrality`]), robustness under node
//! removal ([`vulnerability`]) and Louvain communities ([`community`]).
//! [`export`] writes graphs and reports.

pub mod centrality;
pub mod community;
pub mod corpus;
pub mod error;
pub mod export;
pub mod graph;
pub mod paths;
pub mod vulnerability;

pub use centrality::{CentralityTable, ClosenessVariant, Measure};
pub use community::{Partition, MODULARITY_TOLERANCE};
pub use corpus::{CorpusFormat, Lexicon, Verse};
pub use error::{Error, Result};
pub use graph::{build_graph, subgraph_by_book, CoocGraph};
pub use paths::PathMetric;
pub use vulnerability::{LossMetric, RemovalCurve, Strategy};
