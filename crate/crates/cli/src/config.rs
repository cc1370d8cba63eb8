//! Settings resolution: command-line flag, then the subcommand's section of
//! the config file, then the file's top level, then built-in defaults.

use std::fs;
use std::path::{Path, PathBuf};

use serde::Deserialize;
use versenet::centrality::{ClosenessVariant, Measure};
use versenet::export::GraphFormat;
use versenet::Strategy;

use crate::args::Options;
use crate::error::{validation, CliResult};

pub const SECTIONS: [&str; 6] = [
    "build",
    "centrality",
    "vulnerability",
    "communities",
    "export",
    "report",
];

/// One layer of settings as written in the config file.
#[derive(Debug, Default, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
struct Layer {
    corpus: Option<PathBuf>,
    lexicon: Option<PathBuf>,
    books: Option<Vec<String>>,
    out: Option<PathBuf>,
    format: Option<String>,
    seed: Option<u64>,
    seeds: Option<usize>,
    weighted: Option<bool>,
    closeness_variant: Option<String>,
    focus: Option<Vec<String>>,
    measures: Option<Vec<String>>,
    strategies: Option<Vec<String>>,
    top: Option<usize>,
}

impl Layer {
    fn from_options(o: &Options) -> Layer {
        Layer {
            corpus: o.corpus.clone(),
            lexicon: o.lexicon.clone(),
            books: o.books.clone(),
            out: o.out.clone(),
            format: o.format.clone(),
            seed: o.seed,
            seeds: o.seeds,
            weighted: o.weighted.then_some(true),
            closeness_variant: o.closeness_variant.clone(),
            focus: o.focus.clone(),
            measures: o.measures.clone(),
            strategies: o.strategies.clone(),
            top: o.top,
        }
    }

    /// Fills every unset field from `lower`.
    fn over(self, lower: Layer) -> Layer {
        Layer {
            corpus: self.corpus.or(lower.corpus),
            lexicon: self.lexicon.or(lower.lexicon),
            books: self.books.or(lower.books),
            out: self.out.or(lower.out),
            format: self.format.or(lower.format),
            seed: self.seed.or(lower.seed),
            seeds: self.seeds.or(lower.seeds),
            weighted: self.weighted.or(lower.weighted),
            closeness_variant: self.closeness_variant.or(lower.closeness_variant),
            focus: self.focus.or(lower.focus),
            measures: self.measures.or(lower.measures),
            strategies: self.strategies.or(lower.strategies),
            top: self.top.or(lower.top),
        }
    }

    /// Makes relative paths relative to the config file's directory.
    fn rebase(mut self, dir: &Path) -> Layer {
        for p in [&mut self.corpus, &mut self.lexicon, &mut self.out]
            .into_iter()
            .flatten()
        {
            if p.is_relative() {
                *p = dir.join(&*p);
            }
        }
        self
    }
}

/// Parsed config file: top-level keys plus optional per-subcommand tables.
#[derive(Debug, Default)]
pub struct ConfigFile {
    top: Layer,
    sections: Vec<(String, Layer)>,
}

impl ConfigFile {
    pub fn load(path: &Path) -> CliResult<ConfigFile> {
        let text = fs::read_to_string(path)
            .map_err(|e| validation(format!("--config {}: {e}", path.display())))?;
        let mut table: toml::Table = text
            .parse()
            .map_err(|e| validation(format!("--config {}: {e}", path.display())))?;
        let dir = path.parent().unwrap_or(Path::new("."));
        let mut sections = Vec::new();
        for name in SECTIONS {
            if let Some(value) = table.remove(name) {
                let layer = Layer::deserialize(value).map_err(|e| {
                    validation(format!("--config {} [{name}]: {e}", path.display()))
                })?;
                sections.push((name.to_string(), layer.rebase(dir)));
            }
        }
        let top = Layer::deserialize(toml::Value::Table(table))
            .map_err(|e| validation(format!("--config {}: {e}", path.display())))?;
        Ok(ConfigFile {
            top: top.rebase(dir),
            sections,
        })
    }

    fn section(&self, name: &str) -> Layer {
        self.sections
            .iter()
            .find(|(n, _)| n == name)
            .map(|(_, l)| l.clone())
            .unwrap_or_default()
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum BookSelection {
    /// Every corpus book plus the union graph.
    All,
    List(Vec<String>),
}

/// Label used for the union of all books.
pub const UNION: &str = "all";

#[derive(Debug, Clone)]
pub struct Settings {
    pub corpus: PathBuf,
    pub lexicon: PathBuf,
    pub books: BookSelection,
    pub out: PathBuf,
    /// Explicitly requested format; each command has its own default.
    pub format: Option<GraphFormat>,
    pub seed: u64,
    pub seeds: usize,
    pub weighted: bool,
    pub closeness_variant: ClosenessVariant,
    pub focus: Vec<String>,
    pub measures: Vec<Measure>,
    pub strategies: Vec<Strategy>,
    pub top: usize,
}

impl Settings {
    /// Resolves settings for `command`. `sections` lists the config sections
    /// to consult, most specific first.
    pub fn resolve(command: &str, sections: &[&str], flags: &Options) -> CliResult<Settings> {
        let file = match &flags.config {
            Some(path) => ConfigFile::load(path)?,
            None => ConfigFile::default(),
        };
        let mut layer = Layer::from_options(flags);
        for s in sections {
            layer = layer.over(file.section(s));
        }
        let layer = layer.over(file.top.clone());
        Settings::from_layer(command, layer)
    }

    fn from_layer(command: &str, l: Layer) -> CliResult<Settings> {
        let format = l
            .format
            .map(|f| {
                f.parse::<GraphFormat>()
                    .map_err(|e| validation(format!("--format: {e}")))
            })
            .transpose()?;
        let seeds = l
            .seeds
            .unwrap_or(if command == "vulnerability" { 20 } else { 10 });
        if seeds == 0 {
            return Err(validation("--seeds: must be at least 1"));
        }
        let closeness_variant = match l.closeness_variant {
            Some(v) => v
                .parse()
                .map_err(|e| validation(format!("--closeness-variant: {e}")))?,
            None => ClosenessVariant::Harmonic,
        };
        let measures = match l.measures {
            Some(list) => parse_list(&list, "--measures")?,
            None => Measure::ALL.to_vec(),
        };
        if measures.is_empty() {
            return Err(validation("--measures: at least one measure is required"));
        }
        let strategies = match l.strategies {
            Some(list) => parse_list(&list, "--strategies")?,
            None => Strategy::ALL.to_vec(),
        };
        if strategies.is_empty() {
            return Err(validation(
                "--strategies: at least one strategy is required",
            ));
        }
        let books = match l.books {
            None => BookSelection::All,
            Some(list) if list.len() == 1 && list[0] == UNION => BookSelection::All,
            Some(list) if list.iter().any(|b| b.trim().is_empty()) => {
                return Err(validation("--books: empty book name"));
            }
            Some(list) if list.is_empty() => return Err(validation("--books: no books given")),
            Some(list) => BookSelection::List(list),
        };
        let top = l.top.unwrap_or(10);
        if top == 0 {
            return Err(validation("--top: must be at least 1"));
        }
        Ok(Settings {
            corpus: l.corpus.unwrap_or_else(|| PathBuf::from("data/web5.tsv")),
            lexicon: l.lexicon.unwrap_or_else(|| PathBuf::from("data/names.txt")),
            books,
            out: l.out.unwrap_or_else(|| PathBuf::from("out")),
            format,
            seed: l.seed.unwrap_or(0),
            seeds,
            weighted: l.weighted.unwrap_or(false),
            closeness_variant,
            focus: l.focus.unwrap_or_default(),
            measures,
            strategies,
            top,
        })
    }

    pub fn seed_list(&self) -> Vec<u64> {
        (0..self.seeds as u64).map(|i| self.seed + i).collect()
    }
}

fn parse_list<T: std::str::FromStr<Err = String>>(
    items: &[String],
    flag: &str,
) -> CliResult<Vec<T>> {
    let mut out = Vec::new();
    for item in items.iter().map(|s| s.trim()).filter(|s| !s.is_empty()) {
        out.push(
            item.parse()
                .map_err(|e| validation(format!("{flag}: {e}")))?,
        );
    }
    Ok(out)
}
