//! Verse corpus ingestion and lexicon name matching.
//!
//! A corpus is a flat delimited file (`book<TAB>chapter<TAB>verse<TAB>text`),
//! a lexicon is a list of canonical names, one per line, with `!`-prefixed
//! stop-names that must never be matched.

use std::collections::{BTreeSet, HashMap};
use std::fmt;
use std::io::BufRead;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Maximum number of words in a lexicon entry.
pub const MAX_ENTRY_WORDS: usize = 4;

/// Location of a verse inside a corpus.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct VerseKey {
    pub book: String,
    pub chapter: u32,
    pub verse: u32,
}

impl fmt::Display for VerseKey {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} {}:{}", self.book, self.chapter, self.verse)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Verse {
    pub book: String,
    pub chapter: u32,
    pub verse: u32,
    pub text: String,
}

impl Verse {
    pub fn new(book: impl Into<String>, chapter: u32, verse: u32, text: impl Into<String>) -> Self {
        Verse {
            book: book.into(),
            chapter,
            verse,
            text: text.into(),
        }
    }

    pub fn key(&self) -> VerseKey {
        VerseKey {
            book: self.book.clone(),
            chapter: self.chapter,
            verse: self.verse,
        }
    }
}

/// Field layout of a corpus file.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct CorpusFormat {
    pub delimiter: char,
    pub comment: char,
}

impl CorpusFormat {
    pub const TSV: CorpusFormat = CorpusFormat {
        delimiter: '\t',
        comment: '#',
    };
}

impl Default for CorpusFormat {
    fn default() -> Self {
        CorpusFormat::TSV
    }
}

/// Parses a corpus, returning verses in file order.
///
/// Blank lines and lines starting with the comment character are skipped.
/// The text field is everything after the third delimiter.
pub fn parse_corpus<R: BufRead>(input: R, format: &CorpusFormat) -> Result<Vec<Verse>> {
    let mut verses = Vec::new();
    let mut seen: HashMap<VerseKey, usize> = HashMap::new();

    for (idx, line) in input.lines().enumerate() {
        let line_no = idx + 1;
        let line = line.map_err(|e| match e.kind() {
            std::io::ErrorKind::InvalidData => Error::Parse {
                line: line_no,
                message: "input is not valid UTF-8".into(),
            },
            _ => Error::Io(e),
        })?;
        let line = line.strip_suffix('\r').unwrap_or(&line);
        if line.trim().is_empty() || line.starts_with(format.comment) {
            continue;
        }

        let fields: Vec<&str> = line.splitn(4, format.delimiter).collect();
        if fields.len() != 4 {
            return Err(Error::Parse {
                line: line_no,
                message: format!("expected 4 fields, found {}", fields.len()),
            });
        }
        let book = fields[0].trim();
        if book.is_empty() {
            return Err(Error::Parse {
                line: line_no,
                message: "empty book identifier".into(),
            });
        }
        let chapter = parse_positive(fields[1], "chapter", line_no)?;
        let verse = parse_positive(fields[2], "verse", line_no)?;
        let text = fields[3].trim();
        if text.is_empty() {
            return Err(Error::Parse {
                line: line_no,
                message: "empty verse text".into(),
            });
        }

        let v = Verse::new(book, chapter, verse, text);
        if let Some(&first_line) = seen.get(&v.key()) {
            return Err(Error::DuplicateVerse {
                line: line_no,
                first_line,
                book: v.book,
                chapter,
                verse,
            });
        }
        seen.insert(v.key(), line_no);
        verses.push(v);
    }
    Ok(verses)
}

fn parse_positive(field: &str, what: &str, line: usize) -> Result<u32> {
    match field.trim().parse::<u32>() {
        Ok(n) if n > 0 => Ok(n),
        _ => Err(Error::Parse {
            line,
            message: format!("{what} must be a positive integer, got {:?}", field.trim()),
        }),
    }
}

/// Distinct book identifiers in order of first appearance.
pub fn books(verses: &[Verse]) -> Vec<String> {
    let mut out: Vec<String> = Vec::new();
    for v in verses {
        if !out.iter().any(|b| b == &v.book) {
            out.push(v.book.clone());
        }
    }
    out
}

/// Canonical names to search for, plus stop-names that are never matched.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct Lexicon {
    entries: BTreeSet<String>,
    excluded: BTreeSet<String>,
    max_words: usize,
}

impl Lexicon {
    /// Builds a lexicon from in-memory lists. Exclusions win over entries.
    pub fn new<I, J, S, T>(entries: I, excluded: J) -> Result<Self>
    where
        I: IntoIterator<Item = S>,
        J: IntoIterator<Item = T>,
        S: AsRef<str>,
        T: AsRef<str>,
    {
        let mut lex = Lexicon::default();
        for (i, e) in excluded.into_iter().enumerate() {
            let name = normalize_entry(e.as_ref(), i + 1)?;
            lex.excluded.insert(name);
        }
        for (i, e) in entries.into_iter().enumerate() {
            let name = normalize_entry(e.as_ref(), i + 1)?;
            if !lex.excluded.contains(&name) {
                lex.insert(name);
            }
        }
        Ok(lex)
    }

    /// Reads the line-oriented lexicon format, logging a warning for every
    /// entry that is also excluded.
    pub fn load<R: BufRead>(input: R) -> Result<Self> {
        let (lex, warnings) = Self::load_with_warnings(input)?;
        for w in &warnings {
            log::warn!("{w}");
        }
        Ok(lex)
    }

    /// Like [`Lexicon::load`] but hands the warnings back to the caller.
    pub fn load_with_warnings<R: BufRead>(input: R) -> Result<(Self, Vec<String>)> {
        let mut plain: Vec<(String, usize)> = Vec::new();
        let mut excluded = BTreeSet::new();
        for (idx, line) in input.lines().enumerate() {
            let line_no = idx + 1;
            let line = line.map_err(|e| match e.kind() {
                std::io::ErrorKind::InvalidData => Error::Parse {
                    line: line_no,
                    message: "input is not valid UTF-8".into(),
                },
                _ => Error::Io(e),
            })?;
            let line = line.trim();
            if line.is_empty() || line.starts_with('#') {
                continue;
            }
            if let Some(stop) = line.strip_prefix('!') {
                excluded.insert(normalize_entry(stop, line_no)?);
            } else {
                plain.push((normalize_entry(line, line_no)?, line_no));
            }
        }

        let mut lex = Lexicon {
            excluded,
            ..Lexicon::default()
        };
        let mut warnings = Vec::new();
        for (name, line_no) in plain {
            if lex.excluded.contains(&name) {
                warnings.push(format!(
                    "line {line_no}: {name:?} is both listed and excluded; the exclusion wins"
                ));
            } else {
                lex.insert(name);
            }
        }
        Ok((lex, warnings))
    }

    fn insert(&mut self, name: String) {
        self.max_words = self.max_words.max(name.split(' ').count());
        self.entries.insert(name);
    }

    pub fn entries(&self) -> &BTreeSet<String> {
        &self.entries
    }

    pub fn excluded(&self) -> &BTreeSet<String> {
        &self.excluded
    }

    pub fn contains(&self, name: &str) -> bool {
        self.entries.contains(name)
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    /// Matches inside `text`, one per consumed token span, in text order.
    pub fn match_spans(&self, text: &str) -> Vec<NameMatch> {
        let tokens = tokenize(text);
        let mut out = Vec::new();
        let mut key = String::new();
        let mut i = 0;
        while i < tokens.len() {
            let longest = self.max_words.min(tokens.len() - i);
            let mut matched = 0;
            for n in (1..=longest).rev() {
                key.clear();
                for (j, t) in tokens[i..i + n].iter().enumerate() {
                    if j > 0 {
                        key.push(' ');
                    }
                    key.push_str(t);
                }
                if self.entries.contains(key.as_str()) {
                    out.push(NameMatch {
                        name: key.clone(),
                        tokens: i..i + n,
                    });
                    matched = n;
                    break;
                }
            }
            i += matched.max(1);
        }
        out
    }
}

fn normalize_entry(raw: &str, line: usize) -> Result<String> {
    let words: Vec<&str> = raw.split_whitespace().collect();
    if words.is_empty() {
        return Err(Error::Parse {
            line,
            message: "empty lexicon entry".into(),
        });
    }
    if words.len() > MAX_ENTRY_WORDS {
        return Err(Error::Parse {
            line,
            message: format!(
                "lexicon entry {raw:?} has {} words, at most {MAX_ENTRY_WORDS} are supported",
                words.len()
            ),
        });
    }
    Ok(words.join(" "))
}

/// One lexicon hit: the canonical name and the token positions it consumed.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct NameMatch {
    pub name: String,
    pub tokens: std::ops::Range<usize>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct NameOccurrence {
    pub name: String,
    pub location: VerseKey,
}

fn is_apostrophe(c: char) -> bool {
    c == '\'' || c == '\u{2019}'
}

/// Splits text into word tokens.
///
/// Any character other than a letter, digit or apostrophe separates tokens.
/// A trailing possessive `'s` / `’s` and leftover edge apostrophes are
/// removed, so `Jesus’s` and `James’` yield `Jesus` and `James`.
pub fn tokenize(text: &str) -> Vec<&str> {
    text.split(|c: char| !(c.is_alphanumeric() || is_apostrophe(c)))
        .filter_map(|raw| {
            let mut tok = raw;
            for suffix in ["'s", "\u{2019}s"] {
                if let Some(stripped) = tok.strip_suffix(suffix) {
                    tok = stripped;
                    break;
                }
            }
            let tok = tok.trim_matches(is_apostrophe);
            (!tok.is_empty()).then_some(tok)
        })
        .collect()
}

/// The set of lexicon names present in a verse. A name counts once per verse.
pub fn match_names(verse: &Verse, lexicon: &Lexicon) -> BTreeSet<String> {
    lexicon
        .match_spans(&verse.text)
        .into_iter()
        .map(|m| m.name)
        .collect()
}

/// Every (name, verse) incidence across the corpus, in corpus order.
pub fn occurrences(verses: &[Verse], lexicon: &Lexicon) -> Vec<NameOccurrence> {
    verses
        .iter()
        .flat_map(|v| {
            match_names(v, lexicon)
                .into_iter()
                .map(|name| NameOccurrence {
                    name,
                    location: v.key(),
                })
        })
        .collect()
}
