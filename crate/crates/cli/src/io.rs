//! File access for the CLI: inputs with path context in every error, and
//! outputs written to a temporary file and renamed into place.

use std::fs::{self, File};
use std::io::{BufReader, BufWriter, Write};
use std::path::{Path, PathBuf};

use versenet::corpus::parse_corpus;
use versenet::export::{self, GraphFormat};
use versenet::{CoocGraph, CorpusFormat, Lexicon, Verse};

use crate::error::{runtime, validation, CliResult};

pub fn load_corpus(path: &Path) -> CliResult<Vec<Verse>> {
    let file =
        File::open(path).map_err(|e| validation(format!("--corpus {}: {e}", path.display())))?;
    parse_corpus(BufReader::new(file), &CorpusFormat::TSV)
        .map_err(|e| runtime(format!("{}: {e}", path.display())))
}

pub fn load_lexicon(path: &Path) -> CliResult<Lexicon> {
    let file =
        File::open(path).map_err(|e| validation(format!("--lexicon {}: {e}", path.display())))?;
    let (lexicon, warnings) = Lexicon::load_with_warnings(BufReader::new(file))
        .map_err(|e| runtime(format!("{}: {e}", path.display())))?;
    for w in warnings {
        log::warn!("{}: {w}", path.display());
    }
    Ok(lexicon)
}

/// File-name-safe form of a book label.
pub fn file_label(book: &str) -> String {
    book.chars()
        .map(|c| {
            if c.is_alphanumeric() || c == '-' || c == '_' {
                c
            } else {
                '_'
            }
        })
        .collect()
}

pub fn graph_path(out: &Path, book: &str, format: GraphFormat) -> PathBuf {
    out.join(format!("graph_{}.{}", file_label(book), format.extension()))
}

/// Writes `path` atomically: the content goes to a temporary file in the
/// same directory, which is renamed over the target once complete.
pub fn write_atomic<F>(path: &Path, fill: F) -> CliResult<()>
where
    F: FnOnce(&mut dyn Write) -> versenet::Result<()>,
{
    let dir = path
        .parent()
        .filter(|d| !d.as_os_str().is_empty())
        .unwrap_or(Path::new("."));
    let fail = |e: &dyn std::fmt::Display| runtime(format!("writing {}: {e}", path.display()));
    let tmp = tempfile::NamedTempFile::new_in(dir).map_err(|e| fail(&e))?;
    {
        let mut w = BufWriter::new(tmp.as_file());
        fill(&mut w).map_err(|e| fail(&e))?;
        w.flush().map_err(|e| fail(&e))?;
    }
    tmp.persist(path).map_err(|e| fail(&e.error))?;
    Ok(())
}

pub fn ensure_dir(dir: &Path) -> CliResult<()> {
    fs::create_dir_all(dir).map_err(|e| runtime(format!("--out {}: {e}", dir.display())))
}

/// Reads a graph written by `build`, preferring JSON over the edge list.
pub fn read_graph(out: &Path, book: &str) -> CliResult<CoocGraph> {
    for format in [GraphFormat::Json, GraphFormat::Csv] {
        let path = graph_path(out, book, format);
        if !path.exists() {
            continue;
        }
        let file = File::open(&path).map_err(|e| runtime(format!("{}: {e}", path.display())))?;
        let reader = BufReader::new(file);
        let g = match format {
            GraphFormat::Json => export::read_json(reader),
            _ => export::read_edge_list(reader),
        };
        return g.map_err(|e| runtime(format!("{}: {e}", path.display())));
    }
    Err(validation(format!(
        "no graph for book {book:?}: expected {} or {}; run `versenet build --out {} --format json` first",
        graph_path(out, book, GraphFormat::Json).display(),
        graph_path(out, book, GraphFormat::Csv).display(),
        out.display()
    )))
}

pub fn stats_path(out: &Path) -> PathBuf {
    out.join("stats.csv")
}

/// Book labels recorded by `build`, in the order it wrote them.
pub fn built_books(out: &Path) -> CliResult<Vec<String>> {
    let path = stats_path(out);
    let mut reader = csv::Reader::from_path(&path).map_err(|e| {
        validation(format!(
            "{}: {e}; run `versenet build --out {}` first or pass --books",
            path.display(),
            out.display()
        ))
    })?;
    let mut books = Vec::new();
    for (i, record) in reader.records().enumerate() {
        let record = record.map_err(|e| runtime(format!("{}: {e}", path.display())))?;
        match record.get(0) {
            Some(b) if !b.is_empty() => books.push(b.to_string()),
            _ => {
                return Err(runtime(format!(
                    "{} line {}: missing book column",
                    path.display(),
                    i + 2
                )))
            }
        }
    }
    if books.is_empty() {
        return Err(runtime(format!("{}: no books listed", path.display())));
    }
    Ok(books)
}
