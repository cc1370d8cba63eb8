//! Graph and report serialization.
//!
//! Graphs are written as GraphML, DOT, a `source,target,weight` edge list
//! or JSON (`{"nodes": [...], "edges": [{"s", "t", "w"}]}`). The edge list
//! and JSON forms can be read back.

use std::collections::BTreeMap;
use std::io::{Read, Write};

use serde::{Deserialize, Serialize};

use crate::centrality::{CentralityTable, Measure};
use crate::community::{CommunityReport, Partition};
use crate::error::{Error, Result};
use crate::graph::CoocGraph;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum GraphFormat {
    Csv,
    Json,
    GraphMl,
    Dot,
}

impl GraphFormat {
    pub fn extension(self) -> &'static str {
        match self {
            GraphFormat::Csv => "csv",
            GraphFormat::Json => "json",
            GraphFormat::GraphMl => "graphml",
            GraphFormat::Dot => "dot",
        }
    }
}

impl std::str::FromStr for GraphFormat {
    type Err = String;

    fn from_str(s: &str) -> std::result::Result<Self, Self::Err> {
        match s {
            "csv" => Ok(GraphFormat::Csv),
            "json" => Ok(GraphFormat::Json),
            "graphml" => Ok(GraphFormat::GraphMl),
            "dot" => Ok(GraphFormat::Dot),
            _ => Err(format!(
                "unknown format {s:?} (expected csv, json, graphml or dot)"
            )),
        }
    }
}

/// Per-node community labels and highlight flags for annotated exports.
#[derive(Debug, Clone, Copy)]
pub struct Annotations<'a> {
    pub partition: &'a Partition,
    pub report: &'a CommunityReport,
}

impl Annotations<'_> {
    fn community(&self, node: usize) -> usize {
        self.partition.assignment[node]
    }

    /// `None` when no focus name resolved, so no highlight attribute is set.
    fn highlight(&self, node: usize) -> Option<bool> {
        if self.report.highlighted.is_empty() {
            None
        } else {
            Some(self.report.is_highlighted(self.community(node)))
        }
    }
}

pub fn write_graph<W: Write>(
    g: &CoocGraph,
    format: GraphFormat,
    annotations: Option<Annotations<'_>>,
    out: W,
) -> Result<()> {
    match format {
        GraphFormat::Csv => write_edge_list(g, out),
        GraphFormat::Json => write_json(g, out),
        GraphFormat::GraphMl => write_graphml(g, annotations, out),
        GraphFormat::Dot => write_dot(g, annotations, out),
    }
}

#[derive(Debug, Serialize, Deserialize)]
struct JsonEdge {
    s: String,
    t: String,
    w: u32,
}

#[derive(Debug, Serialize, Deserialize)]
struct JsonGraph {
    nodes: Vec<String>,
    edges: Vec<JsonEdge>,
}

pub fn write_json<W: Write>(g: &CoocGraph, mut out: W) -> Result<()> {
    let doc = JsonGraph {
        nodes: g.names().to_vec(),
        edges: g
            .edges()
            .iter()
            .map(|&(a, b, w)| JsonEdge {
                s: g.name(a).to_string(),
                t: g.name(b).to_string(),
                w,
            })
            .collect(),
    };
    serde_json::to_writer_pretty(&mut out, &doc)?;
    out.write_all(b"\n")?;
    Ok(())
}

pub fn read_json<R: Read>(input: R) -> Result<CoocGraph> {
    let doc: JsonGraph = serde_json::from_reader(input)?;
    let g = CoocGraph::from_edges(doc.edges.into_iter().map(|e| (e.s, e.t, e.w)))?;
    if g.names() != doc.nodes.as_slice() {
        let mut listed = doc.nodes;
        listed.sort();
        if g.names() != listed.as_slice() {
            return Err(Error::InvalidGraph(
                "node list does not match the nodes incident to edges".into(),
            ));
        }
    }
    Ok(g)
}

pub fn write_edge_list<W: Write>(g: &CoocGraph, out: W) -> Result<()> {
    let mut w = csv::Writer::from_writer(out);
    w.write_record(["source", "target", "weight"])?;
    for &(a, b, weight) in g.edges() {
        w.write_record([g.name(a), g.name(b), &weight.to_string()])?;
    }
    w.flush()?;
    Ok(())
}

pub fn read_edge_list<R: Read>(input: R) -> Result<CoocGraph> {
    let mut r = csv::Reader::from_reader(input);
    let mut edges = Vec::new();
    for (i, rec) in r.records().enumerate() {
        let rec = rec?;
        let line = i + 2;
        if rec.len() != 3 {
            return Err(Error::Parse {
                line,
                message: format!("expected source,target,weight, found {} fields", rec.len()),
            });
        }
        let w: u32 = rec[2].trim().parse().map_err(|_| Error::Parse {
            line,
            message: format!("bad weight {:?}", &rec[2]),
        })?;
        edges.push((rec[0].to_string(), rec[1].to_string(), w));
    }
    CoocGraph::from_edges(edges)
}

fn xml_escape(s: &str) -> String {
    let mut out = String::with_capacity(s.len());
    for c in s.chars() {
        match c {
            '&' => out.push_str("&amp;"),
            '<' => out.push_str("&lt;"),
            '>' => out.push_str("&gt;"),
            '"' => out.push_str("&quot;"),
            '\'' => out.push_str("&apos;"),
            _ => out.push(c),
        }
    }
    out
}

pub fn write_graphml<W: Write>(
    g: &CoocGraph,
    annotations: Option<Annotations<'_>>,
    mut out: W,
) -> Result<()> {
    writeln!(out, r#"<?xml version="1.0" encoding="UTF-8"?>"#)?;
    writeln!(
        out,
        r#"<graphml xmlns="http://graphml.graphdrawing.org/xmlns" xmlns:xsi="http://www.w3.org/2001/XMLSchema-instance" xsi:schemaLocation="http://graphml.graphdrawing.org/xmlns http://graphml.graphdrawing.org/xmlns/1.0/graphml.xsd">"#
    )?;
    writeln!(
        out,
        r#"  <key id="weight" for="edge" attr.name="weight" attr.type="int"/>"#
    )?;
    let with_highlight = annotations.is_some_and(|a| !a.report.highlighted.is_empty());
    if annotations.is_some() {
        writeln!(
            out,
            r#"  <key id="community" for="node" attr.name="community" attr.type="int"/>"#
        )?;
    }
    if with_highlight {
        writeln!(
            out,
            r#"  <key id="highlight" for="node" attr.name="highlight" attr.type="boolean"/>"#
        )?;
    }
    writeln!(out, r#"  <graph id="G" edgedefault="undirected">"#)?;
    for (i, name) in g.names().iter().enumerate() {
        let id = xml_escape(name);
        match annotations {
            None => writeln!(out, r#"    <node id="{id}"/>"#)?,
            Some(a) => {
                writeln!(out, r#"    <node id="{id}">"#)?;
                writeln!(
                    out,
                    r#"      <data key="community">{}</data>"#,
                    a.community(i)
                )?;
                if let Some(h) = a.highlight(i) {
                    writeln!(out, r#"      <data key="highlight">{h}</data>"#)?;
                }
                writeln!(out, "    </node>")?;
            }
        }
    }
    for &(a, b, w) in g.edges() {
        writeln!(
            out,
            r#"    <edge source="{}" target="{}"><data key="weight">{w}</data></edge>"#,
            xml_escape(g.name(a)),
            xml_escape(g.name(b))
        )?;
    }
    writeln!(out, "  </graph>")?;
    writeln!(out, "</graphml>")?;
    Ok(())
}

fn dot_quote(s: &str) -> String {
    format!("\"{}\"", s.replace('\\', "\\\\").replace('"', "\\\""))
}

/// Edge pen width grows with the log of the weight.
fn penwidth(w: u32) -> f64 {
    let p = 1.0 + (w as f64).ln();
    (p * 100.0).round() / 100.0
}

pub fn write_dot<W: Write>(
    g: &CoocGraph,
    annotations: Option<Annotations<'_>>,
    mut out: W,
) -> Result<()> {
    writeln!(out, "graph cooccurrence {{")?;
    for (i, name) in g.names().iter().enumerate() {
        match annotations {
            None => writeln!(out, "  {};", dot_quote(name))?,
            Some(a) => {
                let mut attrs = vec![format!("community={}", a.community(i))];
                if let Some(h) = a.highlight(i) {
                    attrs.push(format!("highlight={h}"));
                    if h {
                        attrs.push("style=filled".into());
                        attrs.push("fillcolor=gold".into());
                    }
                }
                writeln!(out, "  {} [{}];", dot_quote(name), attrs.join(", "))?;
            }
        }
    }
    for &(a, b, w) in g.edges() {
        let mut attrs = vec![format!("weight={w}"), format!("penwidth={}", penwidth(w))];
        if let Some(ann) = annotations {
            if ann.highlight(a) == Some(true) && ann.community(a) == ann.community(b) {
                attrs.push("color=gold".into());
            }
        }
        writeln!(
            out,
            "  {} -- {} [{}];",
            dot_quote(g.name(a)),
            dot_quote(g.name(b)),
            attrs.join(", ")
        )?;
    }
    writeln!(out, "}}")?;
    Ok(())
}

/// `measure,name,score,rank`, rows in rank order.
pub fn write_centrality_csv<W: Write>(tables: &[&CentralityTable], out: W) -> Result<()> {
    let mut w = csv::Writer::from_writer(out);
    w.write_record(["measure", "name", "score", "rank"])?;
    for t in tables {
        for e in t.ranked() {
            w.write_record([
                t.measure.as_str(),
                &e.name,
                &e.score.to_string(),
                &e.rank.to_string(),
            ])?;
        }
    }
    w.flush()?;
    Ok(())
}

/// Cross-book rank matrix: one row per name that reaches the top `k` of
/// any (book, measure) column; cells hold the rank, or are empty outside
/// the top `k`. Rows are sorted by name.
pub fn write_rank_matrix<W: Write>(
    columns: &[(String, &CentralityTable)],
    k: usize,
    out: W,
) -> Result<()> {
    let mut rows: BTreeMap<String, Vec<Option<usize>>> = BTreeMap::new();
    for (col, (_, table)) in columns.iter().enumerate() {
        for e in table.top_k(k) {
            rows.entry(e.name)
                .or_insert_with(|| vec![None; columns.len()])[col] = Some(e.rank);
        }
    }
    let mut w = csv::Writer::from_writer(out);
    let mut header = vec!["name".to_string()];
    header.extend(columns.iter().map(|(book, t)| rank_column(book, t.measure)));
    w.write_record(&header)?;
    for (name, cells) in rows {
        let mut rec = vec![name];
        rec.extend(
            cells
                .iter()
                .map(|c| c.map(|r| r.to_string()).unwrap_or_default()),
        );
        w.write_record(&rec)?;
    }
    w.flush()?;
    Ok(())
}

/// Column label used by the rank matrix.
pub fn rank_column(book: &str, measure: Measure) -> String {
    format!("{book}:{}", measure.as_str())
}

/// `name,community,community_size,weight`.
pub fn write_community_csv<W: Write>(report: &CommunityReport, out: W) -> Result<()> {
    let mut w = csv::Writer::from_writer(out);
    w.write_record(["name", "community", "community_size", "weight"])?;
    for r in &report.rows {
        w.write_record([
            r.name.as_str(),
            &r.community.to_string(),
            &r.community_size.to_string(),
            &r.weight.to_string(),
        ])?;
    }
    w.flush()?;
    Ok(())
}

#[derive(Serialize)]
struct PartitionDump<'a> {
    seed: Option<u64>,
    modularity: f64,
    assignment: BTreeMap<&'a str, usize>,
}

/// `{seed, modularity, assignment: {name: community}}`.
pub fn write_partition_json<W: Write>(p: &Partition, mut out: W) -> Result<()> {
    let dump = PartitionDump {
        seed: p.seed,
        modularity: p.modularity,
        assignment: p
            .names
            .iter()
            .map(String::as_str)
            .zip(p.assignment.iter().copied())
            .collect(),
    };
    serde_json::to_writer_pretty(&mut out, &dump)?;
    out.write_all(b"\n")?;
    Ok(())
}
