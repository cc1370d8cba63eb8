use std::io;

use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("I/O error: {0}")]
    Io(#[from] io::Error),

    #[error("line {line}: {message}")]
    Parse { line: usize, message: String },

    #[error(
        "line {line}: duplicate verse {book} {chapter}:{verse} (first seen on line {first_line})"
    )]
    DuplicateVerse {
        line: usize,
        first_line: usize,
        book: String,
        chapter: u32,
        verse: u32,
    },

    #[error("book {0:?} not found in corpus")]
    UnknownBook(String),

    #[error("density is undefined for a graph with {0} node(s)")]
    UndefinedDensity(usize),

    #[error("modularity is undefined for a graph without edges")]
    UndefinedModularity,

    #[error("partition does not assign node {0:?}")]
    IncompletePartition(String),

    #[error("operation needs at least {needed} nodes, graph has {found}")]
    DegenerateGraph { needed: usize, found: usize },

    #[error("graph is empty")]
    EmptyGraph,

    #[error("the random removal strategy needs a seed")]
    MissingSeed,

    #[error("invalid graph data: {0}")]
    InvalidGraph(String),

    #[error("CSV error: {0}")]
    Csv(#[from] csv::Error),

    #[error("JSON error: {0}")]
    Json(#[from] serde_json::Error),
}
