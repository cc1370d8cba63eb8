use rayon::prelude::*;
use versenet::centrality::{self, CentralityTable, Measure};
use versenet::community::{best_of_seeds, community_report, Partition, SeedResult};
use versenet::corpus::books as corpus_books;
use versenet::export::{self, Annotations, GraphFormat};
use versenet::vulnerability::{self, node_deletion_loss, removal_curve, RemovalCurve};
use versenet::{build_graph, subgraph_by_book, CoocGraph, Error, LossMetric, PathMetric, Strategy};

use crate::config::{BookSelection, Settings, UNION};
use crate::error::{runtime, validation, CliError, CliResult};
use crate::io::{self, file_label, write_atomic};

fn context(book: &str) -> impl Fn(Error) -> CliError + '_ {
    move |e| runtime(format!("book {book:?}: {e}"))
}

/// Runs `f` for each book in parallel and returns results in book order.
fn per_book<T, F>(books: &[String], f: F) -> CliResult<Vec<T>>
where
    T: Send,
    F: Fn(&str) -> CliResult<T> + Sync,
{
    books.par_iter().map(|b| f(b)).collect()
}

/// Books for downstream commands: the explicit list, or whatever `build`
/// recorded in the stats table.
fn selected_books(s: &Settings) -> CliResult<Vec<String>> {
    match &s.books {
        BookSelection::All => io::built_books(&s.out),
        BookSelection::List(list) => Ok(list.clone()),
    }
}

fn load_graphs(s: &Settings) -> CliResult<Vec<(String, CoocGraph)>> {
    let books = selected_books(s)?;
    let graphs = per_book(&books, |b| io::read_graph(&s.out, b))?;
    Ok(books.into_iter().zip(graphs).collect())
}

pub fn build(s: &Settings) -> CliResult<()> {
    let verses = io::load_corpus(&s.corpus)?;
    let lexicon = io::load_lexicon(&s.lexicon)?;
    let available = corpus_books(&verses);
    if available.iter().any(|b| b == UNION) {
        return Err(runtime(format!(
            "{}: a book is labeled {UNION:?}, which is reserved for the union graph",
            s.corpus.display()
        )));
    }
    let books: Vec<String> = match &s.books {
        BookSelection::All => available
            .iter()
            .cloned()
            .chain([UNION.to_string()])
            .collect(),
        BookSelection::List(list) => {
            for b in list.iter().filter(|b| *b != UNION) {
                if !available.contains(b) {
                    return Err(validation(format!(
                        "--books: {b:?} is not in {} (available: {})",
                        s.corpus.display(),
                        available.join(", ")
                    )));
                }
            }
            list.clone()
        }
    };
    io::ensure_dir(&s.out)?;
    let format = s.format.unwrap_or(GraphFormat::Json);
    if matches!(format, GraphFormat::GraphMl | GraphFormat::Dot) {
        log::warn!(
            "graphs written as {} cannot be read back by the analysis commands",
            format.extension()
        );
    }

    let graphs = per_book(&books, |b| {
        let g = if b == UNION {
            build_graph(&verses, &lexicon)
        } else {
            subgraph_by_book(&verses, &lexicon, b).map_err(context(b))?
        };
        write_atomic(&io::graph_path(&s.out, b, format), |w| {
            export::write_graph(&g, format, None, w)
        })?;
        Ok(g)
    })?;

    write_atomic(&io::stats_path(&s.out), |w| {
        let mut csv = csv::Writer::from_writer(w);
        csv.write_record(["book", "nodes", "edges", "density"])?;
        for (book, g) in books.iter().zip(&graphs) {
            let density = g.density().map(|d| d.to_string()).unwrap_or_default();
            csv.write_record([
                book.as_str(),
                &g.node_count().to_string(),
                &g.edge_count().to_string(),
                &density,
            ])?;
        }
        csv.flush()?;
        Ok(())
    })?;
    log::info!("built {} graph(s) in {}", books.len(), s.out.display());
    Ok(())
}

fn measure_table(
    g: &CoocGraph,
    measure: Measure,
    s: &Settings,
) -> versenet::Result<CentralityTable> {
    let metric = if s.weighted {
        PathMetric::InverseWeight
    } else {
        PathMetric::Hops
    };
    Ok(match measure {
        Measure::Degree => centrality::degree(g),
        Measure::WeightedDegree => centrality::weighted_degree(g),
        Measure::Betweenness => centrality::betweenness(g, metric),
        Measure::Closeness => centrality::closeness(g, s.closeness_variant, metric),
        Measure::LossConnectivity => {
            node_deletion_loss(g, LossMetric::ConnectivitySumDistances)?.to_table()
        }
        Measure::LossCloseness => {
            node_deletion_loss(g, LossMetric::ClosenessSumInverseDistances)?.to_table()
        }
    })
}

pub fn centrality(s: &Settings) -> CliResult<()> {
    let graphs = load_graphs(s)?;
    let tables = per_book_graphs(&graphs, |book, g| {
        s.measures
            .iter()
            .map(|&m| measure_table(g, m, s).map_err(context(book)))
            .collect::<CliResult<Vec<_>>>()
    })?;
    for ((book, _), tables) in graphs.iter().zip(&tables) {
        for t in tables {
            let path = s
                .out
                .join(format!("centrality_{}_{}.csv", file_label(book), t.measure));
            write_atomic(&path, |w| export::write_centrality_csv(&[t], w))?;
        }
    }
    let columns: Vec<(String, &CentralityTable)> = graphs
        .iter()
        .zip(&tables)
        .flat_map(|((book, _), ts)| ts.iter().map(move |t| (book.clone(), t)))
        .collect();
    write_atomic(&s.out.join("rank_matrix.csv"), |w| {
        export::write_rank_matrix(&columns, s.top, w)
    })
}

fn per_book_graphs<T, F>(graphs: &[(String, CoocGraph)], f: F) -> CliResult<Vec<T>>
where
    T: Send,
    F: Fn(&str, &CoocGraph) -> CliResult<T> + Sync,
{
    graphs.par_iter().map(|(b, g)| f(b, g)).collect()
}

fn curves_for(g: &CoocGraph, s: &Settings) -> versenet::Result<Vec<RemovalCurve>> {
    let mut jobs: Vec<(Strategy, Option<u64>)> = Vec::new();
    for &strategy in &s.strategies {
        if strategy == Strategy::Random {
            jobs.extend(s.seed_list().into_iter().map(|seed| (strategy, Some(seed))));
        } else {
            jobs.push((strategy, None));
        }
    }
    jobs.par_iter()
        .map(|&(strategy, seed)| removal_curve(g, strategy, seed))
        .collect()
}

pub fn vulnerability(s: &Settings) -> CliResult<()> {
    let graphs = load_graphs(s)?;
    per_book_graphs(&graphs, |book, g| {
        let curves = curves_for(g, s).map_err(context(book))?;
        let label = file_label(book);
        if s.format == Some(GraphFormat::Json) {
            write_atomic(&s.out.join(format!("curves_{label}.json")), |w| {
                vulnerability::curves_json(&curves, w)
            })?;
        } else {
            write_atomic(&s.out.join(format!("curves_{label}.csv")), |w| {
                vulnerability::curve_report(&curves, w)
            })?;
        }
        let dist =
            node_deletion_loss(g, LossMetric::ConnectivitySumDistances).map_err(context(book))?;
        let inv = node_deletion_loss(g, LossMetric::ClosenessSumInverseDistances)
            .map_err(context(book))?;
        write_atomic(&s.out.join(format!("node_loss_{label}.csv")), |w| {
            let mut csv = csv::Writer::from_writer(w);
            csv.write_record([
                "name",
                "loss_connectivity",
                "adjusted_connectivity",
                "disconnected_pairs",
                "loss_closeness",
                "adjusted_closeness",
            ])?;
            for (i, name) in g.names().iter().enumerate() {
                csv.write_record([
                    name.clone(),
                    dist.loss[i].to_string(),
                    dist.adjusted[i].to_string(),
                    dist.disconnected_pairs[i].to_string(),
                    inv.loss[i].to_string(),
                    inv.adjusted[i].to_string(),
                ])?;
            }
            csv.flush()?;
            Ok(())
        })
    })?;
    Ok(())
}

fn partitions(
    graphs: &[(String, CoocGraph)],
    s: &Settings,
) -> CliResult<Vec<(Partition, Vec<SeedResult>)>> {
    let seeds = s.seed_list();
    per_book_graphs(graphs, |book, g| {
        best_of_seeds(g, &seeds).map_err(context(book))
    })
}

pub fn communities(s: &Settings) -> CliResult<()> {
    let graphs = load_graphs(s)?;
    let results = partitions(&graphs, s)?;
    for ((book, _), (p, _)) in graphs.iter().zip(&results) {
        let label = file_label(book);
        let report = community_report(p, &s.focus);
        warn_unknown_focus(book, &report.unknown_focus);
        write_atomic(&s.out.join(format!("communities_{label}.csv")), |w| {
            export::write_community_csv(&report, w)
        })?;
        write_atomic(&s.out.join(format!("partition_{label}.json")), |w| {
            export::write_partition_json(p, w)
        })?;
    }
    write_atomic(&s.out.join("communities_summary.csv"), |w| {
        let mut csv = csv::Writer::from_writer(w);
        csv.write_record(["book", "modularity", "n_nodes", "n_clusters"])?;
        for ((book, g), (p, _)) in graphs.iter().zip(&results) {
            csv.write_record([
                book.clone(),
                p.modularity.to_string(),
                g.node_count().to_string(),
                p.n_clusters.to_string(),
            ])?;
        }
        csv.flush()?;
        Ok(())
    })?;
    write_atomic(&s.out.join("communities_seeds.csv"), |w| {
        let mut csv = csv::Writer::from_writer(w);
        csv.write_record(["book", "seed", "modularity", "n_clusters"])?;
        for ((book, _), (_, runs)) in graphs.iter().zip(&results) {
            for r in runs {
                csv.write_record([
                    book.clone(),
                    r.seed.to_string(),
                    r.modularity.to_string(),
                    r.n_clusters.to_string(),
                ])?;
            }
        }
        csv.flush()?;
        Ok(())
    })
}

fn warn_unknown_focus(book: &str, unknown: &[String]) {
    if !unknown.is_empty() {
        log::warn!("--focus: not in the {book} graph: {}", unknown.join(", "));
    }
}

pub fn export(s: &Settings) -> CliResult<()> {
    let graphs = load_graphs(s)?;
    let results = partitions(&graphs, s)?;
    let format = s.format.unwrap_or(GraphFormat::Dot);
    for ((book, g), (p, _)) in graphs.iter().zip(&results) {
        let report = community_report(p, &s.focus);
        warn_unknown_focus(book, &report.unknown_focus);
        let path = s.out.join(format!(
            "export_{}.{}",
            file_label(book),
            format.extension()
        ));
        let notes = Annotations {
            partition: p,
            report: &report,
        };
        write_atomic(&path, |w| export::write_graph(g, format, Some(notes), w))?;
    }
    Ok(())
}

/// Full pipeline; graphs go through JSON so that every later stage reads
/// exactly what `build` wrote.
pub fn report(stages: &[(&str, Settings)]) -> CliResult<()> {
    for (stage, settings) in stages {
        log::info!("report: {stage}");
        match *stage {
            "build" => build(settings)?,
            "centrality" => centrality(settings)?,
            "vulnerability" => vulnerability(settings)?,
            "communities" => communities(settings)?,
            "export" => export(settings)?,
            other => unreachable!("unknown stage {other}"),
        }
    }
    Ok(())
}
