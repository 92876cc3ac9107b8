//! Membership-weight datasets, concept pairs, similarity tables and text corpora.
//!
//! All tabular formats are UTF-8 CSV with a mandatory header:
//!
//! | file        | header                                  |
//! |-------------|-----------------------------------------|
//! | membership  | `pair_id,exemplar,mu_a,mu_b,mu_or`      |
//! | pairs       | `pair_id,name_a,name_b`                 |
//! | similarity  | `pair_id,exemplar,s_a,s_b,s_or`         |
//!
//! Corpora are either a directory of `*.txt` files (one document per file,
//! id = file stem) or a line-oriented file where each line is
//! `doc_id<TAB>text`; lines without a tab get the id `line-<n>`.

use std::collections::HashSet;
use std::fmt;
use std::fs;
use std::io::{self, Read, Write};
use std::path::{Path, PathBuf};

use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use thiserror::Error;

pub const MEMBERSHIP_HEADER: [&str; 5] = ["pair_id", "exemplar", "mu_a", "mu_b", "mu_or"];
pub const PAIRS_HEADER: [&str; 3] = ["pair_id", "name_a", "name_b"];
pub const SIMILARITY_HEADER: [&str; 5] = ["pair_id", "exemplar", "s_a", "s_b", "s_or"];

#[derive(Debug, Error)]
pub enum DatasetError {
    #[error("i/o error on {path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: io::Error,
    },
    #[error("line {line}: {message}")]
    Parse { line: u64, message: String },
    #[error("line {line}: header must be `{expected}`, found `{found}`")]
    Header {
        line: u64,
        expected: String,
        found: String,
    },
    #[error("line {line}: field {field} = {value} is outside [0, 1]")]
    OutOfRange {
        line: u64,
        field: &'static str,
        value: f64,
    },
    #[error("line {line}: field {field} must not be empty")]
    EmptyField { line: u64, field: &'static str },
    #[error("line {line}: duplicate key ({pair_id}, {key})")]
    Duplicate {
        line: u64,
        pair_id: String,
        key: String,
    },
    #[error("line {line}: duplicate document id `{id}`")]
    DuplicateDocument { line: u64, id: String },
    #[error("csv write error: {0}")]
    Write(#[from] csv::Error),
}

/// One exemplar's measured weights for a concept pair and its disjunction.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MembershipTriple {
    pub pair_id: String,
    pub exemplar: String,
    pub mu_a: f64,
    pub mu_b: f64,
    pub mu_or: f64,
}

impl MembershipTriple {
    /// Builds a triple, rejecting weights outside `[0, 1]` (NaN included).
    pub fn new(
        pair_id: impl Into<String>,
        exemplar: impl Into<String>,
        mu_a: f64,
        mu_b: f64,
        mu_or: f64,
    ) -> Result<Self, DatasetError> {
        let triple = Self {
            pair_id: pair_id.into(),
            exemplar: exemplar.into(),
            mu_a,
            mu_b,
            mu_or,
        };
        triple.validate(0)?;
        Ok(triple)
    }

    /// Weights only; for callers that don't care about labels.
    pub fn weights(mu_a: f64, mu_b: f64, mu_or: f64) -> Self {
        Self {
            pair_id: String::new(),
            exemplar: String::new(),
            mu_a,
            mu_b,
            mu_or,
        }
    }

    fn validate(&self, line: u64) -> Result<(), DatasetError> {
        if self.pair_id.trim().is_empty() {
            return Err(DatasetError::EmptyField {
                line,
                field: "pair_id",
            });
        }
        if self.exemplar.trim().is_empty() {
            return Err(DatasetError::EmptyField {
                line,
                field: "exemplar",
            });
        }
        for (field, value) in [
            ("mu_a", self.mu_a),
            ("mu_b", self.mu_b),
            ("mu_or", self.mu_or),
        ] {
            if !(0.0..=1.0).contains(&value) {
                return Err(DatasetError::OutOfRange { line, field, value });
            }
        }
        Ok(())
    }

    /// Alignment key used when joining two datasets.
    pub fn key(&self) -> (String, String) {
        (self.pair_id.clone(), normalize_exemplar(&self.exemplar))
    }
}

/// The only connective supported so far.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum Connective {
    Or,
}

impl fmt::Display for Connective {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str("or")
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ConceptPair {
    pub pair_id: String,
    pub name_a: String,
    pub name_b: String,
    pub connective: Connective,
}

impl ConceptPair {
    /// Phrase naming the combined concept, e.g. `"Pet or Farmyard Animal"`.
    pub fn combined_phrase(&self) -> String {
        format!("{} {} {}", self.name_a, self.connective, self.name_b)
    }
}

/// Raw similarity of an exemplar to both concepts and to their combination.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SimilarityTriple {
    pub pair_id: String,
    pub exemplar: String,
    pub s_a: f64,
    pub s_b: f64,
    pub s_or: f64,
}

/// Exemplar names are matched case-insensitively with internal whitespace
/// collapsed, so `"Farm  Horse "` and `"farm horse"` align.
pub fn normalize_exemplar(name: &str) -> String {
    name.split_whitespace()
        .map(str::to_lowercase)
        .collect::<Vec<_>>()
        .join(" ")
}

fn io_err(path: &Path) -> impl FnOnce(io::Error) -> DatasetError + '_ {
    move |source| DatasetError::Io {
        path: path.to_path_buf(),
        source,
    }
}

fn csv_reader<R: Read>(input: R) -> csv::Reader<R> {
    csv::ReaderBuilder::new()
        .has_headers(false)
        .trim(csv::Trim::All)
        .flexible(true)
        .from_reader(input)
}

/// Reads records, checking the header against `expected` and the column
/// count of every data row. Yields `(line, record)` pairs.
fn read_records<R: Read>(
    input: R,
    expected: &[&str],
) -> Result<Vec<(u64, csv::StringRecord)>, DatasetError> {
    let mut reader = csv_reader(input);
    let mut rows = Vec::new();
    let mut saw_header = false;
    for result in reader.records() {
        let record = result.map_err(|e| DatasetError::Parse {
            line: e.position().map(|p| p.line()).unwrap_or(0),
            message: e.to_string(),
        })?;
        let line = record.position().map(|p| p.line()).unwrap_or(0);
        if !saw_header {
            let found: Vec<&str> = record.iter().collect();
            let mut first = found.clone();
            if let Some(f) = first.first_mut() {
                *f = f.trim_start_matches('\u{feff}');
            }
            if first != expected {
                return Err(DatasetError::Header {
                    line,
                    expected: expected.join(","),
                    found: found.join(","),
                });
            }
            saw_header = true;
            continue;
        }
        if record.len() == 1 && record.get(0) == Some("") {
            continue;
        }
        if record.len() != expected.len() {
            return Err(DatasetError::Parse {
                line,
                message: format!("expected {} fields, found {}", expected.len(), record.len()),
            });
        }
        rows.push((line, record));
    }
    if !saw_header {
        return Err(DatasetError::Header {
            line: 1,
            expected: expected.join(","),
            found: String::new(),
        });
    }
    Ok(rows)
}

fn parse_real(line: u64, field: &'static str, raw: &str) -> Result<f64, DatasetError> {
    raw.parse::<f64>().map_err(|_| DatasetError::Parse {
        line,
        message: format!("field {field}: `{raw}` is not a number"),
    })
}

/// Parses membership CSV text. Row order is preserved.
pub fn read_membership<R: Read>(input: R) -> Result<Vec<MembershipTriple>, DatasetError> {
    let mut seen = HashSet::new();
    let mut out = Vec::new();
    for (line, rec) in read_records(input, &MEMBERSHIP_HEADER)? {
        let triple = MembershipTriple {
            pair_id: rec[0].to_string(),
            exemplar: rec[1].to_string(),
            mu_a: parse_real(line, "mu_a", &rec[2])?,
            mu_b: parse_real(line, "mu_b", &rec[3])?,
            mu_or: parse_real(line, "mu_or", &rec[4])?,
        };
        triple.validate(line)?;
        let (pair_id, key) = triple.key();
        if !seen.insert((pair_id.clone(), key.clone())) {
            return Err(DatasetError::Duplicate { line, pair_id, key });
        }
        out.push(triple);
    }
    Ok(out)
}

pub fn parse_membership_csv(path: &Path) -> Result<Vec<MembershipTriple>, DatasetError> {
    let file = fs::File::open(path).map_err(io_err(path))?;
    read_membership(io::BufReader::new(file))
}

pub fn write_membership<W: Write>(
    output: W,
    triples: &[MembershipTriple],
) -> Result<(), DatasetError> {
    let mut w = csv::Writer::from_writer(output);
    w.write_record(MEMBERSHIP_HEADER)?;
    for t in triples {
        w.write_record([
            t.pair_id.as_str(),
            t.exemplar.as_str(),
            &t.mu_a.to_string(),
            &t.mu_b.to_string(),
            &t.mu_or.to_string(),
        ])?;
    }
    w.flush().map_err(csv::Error::from)?;
    Ok(())
}

pub fn read_pairs<R: Read>(input: R) -> Result<Vec<ConceptPair>, DatasetError> {
    let mut seen = HashSet::new();
    let mut out = Vec::new();
    for (line, rec) in read_records(input, &PAIRS_HEADER)? {
        for (i, field) in PAIRS_HEADER.iter().enumerate() {
            if rec[i].is_empty() {
                return Err(DatasetError::EmptyField { line, field });
            }
        }
        if !seen.insert(rec[0].to_string()) {
            return Err(DatasetError::Duplicate {
                line,
                pair_id: rec[0].to_string(),
                key: String::new(),
            });
        }
        out.push(ConceptPair {
            pair_id: rec[0].to_string(),
            name_a: rec[1].to_string(),
            name_b: rec[2].to_string(),
            connective: Connective::Or,
        });
    }
    Ok(out)
}

pub fn parse_pairs_csv(path: &Path) -> Result<Vec<ConceptPair>, DatasetError> {
    let file = fs::File::open(path).map_err(io_err(path))?;
    read_pairs(io::BufReader::new(file))
}

/// Similarities may be negative; only finiteness is checked.
pub fn read_similarities<R: Read>(input: R) -> Result<Vec<SimilarityTriple>, DatasetError> {
    let mut seen = HashSet::new();
    let mut out = Vec::new();
    for (line, rec) in read_records(input, &SIMILARITY_HEADER)? {
        for (i, field) in ["pair_id", "exemplar"].into_iter().enumerate() {
            if rec[i].is_empty() {
                return Err(DatasetError::EmptyField { line, field });
            }
        }
        let mut values = [0.0; 3];
        for (slot, (i, field)) in values.iter_mut().zip([(2, "s_a"), (3, "s_b"), (4, "s_or")]) {
            let v = parse_real(line, field, &rec[i])?;
            if !v.is_finite() {
                return Err(DatasetError::Parse {
                    line,
                    message: format!("field {field} is not finite"),
                });
            }
            *slot = v;
        }
        let pair_id = rec[0].to_string();
        let key = normalize_exemplar(&rec[1]);
        if !seen.insert((pair_id.clone(), key.clone())) {
            return Err(DatasetError::Duplicate { line, pair_id, key });
        }
        out.push(SimilarityTriple {
            pair_id,
            exemplar: rec[1].to_string(),
            s_a: values[0],
            s_b: values[1],
            s_or: values[2],
        });
    }
    Ok(out)
}

pub fn parse_similarity_csv(path: &Path) -> Result<Vec<SimilarityTriple>, DatasetError> {
    let file = fs::File::open(path).map_err(io_err(path))?;
    read_similarities(io::BufReader::new(file))
}

pub fn write_similarities<W: Write>(
    output: W,
    rows: &[SimilarityTriple],
) -> Result<(), DatasetError> {
    let mut w = csv::Writer::from_writer(output);
    w.write_record(SIMILARITY_HEADER)?;
    for r in rows {
        w.write_record([
            r.pair_id.as_str(),
            r.exemplar.as_str(),
            &r.s_a.to_string(),
            &r.s_b.to_string(),
            &r.s_or.to_string(),
        ])?;
    }
    w.flush().map_err(csv::Error::from)?;
    Ok(())
}

// ---------------------------------------------------------------------------
// Corpora

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub struct TokenizerOptions {
    /// English Snowball stemming after lowercasing.
    pub stem: bool,
}

/// Lowercases and splits on any non-alphanumeric character.
///
/// Applying the tokenizer to the space-joined output yields the same tokens.
pub fn tokenize(text: &str, opts: TokenizerOptions) -> Vec<String> {
    let lowered = text.to_lowercase();
    let tokens = lowered
        .split(|c: char| !c.is_alphanumeric())
        .filter(|t| !t.is_empty());
    if opts.stem {
        let stemmer = rust_stemmers::Stemmer::create(rust_stemmers::Algorithm::English);
        tokens.map(|t| stemmer.stem(t).into_owned()).collect()
    } else {
        tokens.map(str::to_owned).collect()
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Document {
    pub id: String,
    pub tokens: Vec<String>,
}

#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct Corpus {
    pub documents: Vec<Document>,
    /// Number of source documents that produced no tokens and were skipped.
    pub dropped_empty: usize,
}

impl Corpus {
    pub fn len(&self) -> usize {
        self.documents.len()
    }

    pub fn is_empty(&self) -> bool {
        self.documents.is_empty()
    }

    /// Builds a corpus from `(id, text)` pairs; empty documents are dropped,
    /// duplicate ids are an error.
    pub fn from_texts<I, S, T>(texts: I, opts: TokenizerOptions) -> Result<Self, DatasetError>
    where
        I: IntoIterator<Item = (S, T)>,
        S: Into<String>,
        T: AsRef<str>,
    {
        let mut corpus = Corpus::default();
        let mut ids = HashSet::new();
        for (n, (id, text)) in texts.into_iter().enumerate() {
            let id = id.into();
            if !ids.insert(id.clone()) {
                return Err(DatasetError::DuplicateDocument {
                    line: n as u64 + 1,
                    id,
                });
            }
            corpus.push(id, tokenize(text.as_ref(), opts));
        }
        Ok(corpus)
    }

    fn push(&mut self, id: String, tokens: Vec<String>) {
        if tokens.is_empty() {
            self.dropped_empty += 1;
        } else {
            self.documents.push(Document { id, tokens });
        }
    }
}

/// Parses line-oriented corpus text (`doc_id<TAB>text` or bare text).
pub fn read_corpus_lines(text: &str, opts: TokenizerOptions) -> Result<Corpus, DatasetError> {
    let mut corpus = Corpus::default();
    let mut ids = HashSet::new();
    for (n, line) in text.lines().enumerate() {
        let line_no = n as u64 + 1;
        let (id, body) = match line.split_once('\t') {
            Some((id, body)) => (id.trim().to_string(), body),
            None => (format!("line-{line_no}"), line),
        };
        if id.is_empty() {
            return Err(DatasetError::EmptyField {
                line: line_no,
                field: "doc_id",
            });
        }
        if !ids.insert(id.clone()) {
            return Err(DatasetError::Duplicate {
                line: line_no,
                pair_id: String::new(),
                key: id,
            });
        }
        corpus.push(id, tokenize(body, opts));
    }
    Ok(corpus)
}

/// Loads a corpus from a directory of `*.txt` files or a single line file.
pub fn parse_corpus(source: &Path, opts: TokenizerOptions) -> Result<Corpus, DatasetError> {
    let meta = fs::metadata(source).map_err(io_err(source))?;
    let corpus = if meta.is_dir() {
        let mut files = Vec::new();
        for entry in fs::read_dir(source).map_err(io_err(source))? {
            let path = entry.map_err(io_err(source))?.path();
            if path.is_file() && path.extension().is_some_and(|e| e == "txt") {
                files.push(path);
            }
        }
        files.sort();
        let texts = files
            .par_iter()
            .map(|p| {
                let text = fs::read_to_string(p).map_err(io_err(p))?;
                let id = p
                    .file_stem()
                    .map(|s| s.to_string_lossy().into_owned())
                    .unwrap_or_default();
                Ok((id, text))
            })
            .collect::<Result<Vec<_>, DatasetError>>()?;
        Corpus::from_texts(texts, opts)?
    } else {
        let text = fs::read_to_string(source).map_err(io_err(source))?;
        read_corpus_lines(&text, opts)?
    };
    if corpus.dropped_empty > 0 {
        log::warn!(
            "{}: dropped {} empty document(s)",
            source.display(),
            corpus.dropped_empty
        );
    }
    Ok(corpus)
}
