use std::collections::BTreeMap;
use std::fmt;
use std::str::FromStr;

use nalgebra::DMatrix;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::LsaError;
use crate::dataset::Corpus;

/// Sparse term × document count matrix with a lexicographic vocabulary.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TermDocumentMatrix {
    terms: Vec<String>,
    docs: Vec<String>,
    /// Per term: `(doc index, count)` sorted by doc index, counts > 0.
    rows: Vec<Vec<(u32, u32)>>,
}

impl TermDocumentMatrix {
    pub fn terms(&self) -> &[String] {
        &self.terms
    }

    pub fn docs(&self) -> &[String] {
        &self.docs
    }

    pub fn n_terms(&self) -> usize {
        self.terms.len()
    }

    pub fn n_docs(&self) -> usize {
        self.docs.len()
    }

    pub fn nnz(&self) -> usize {
        self.rows.iter().map(Vec::len).sum()
    }

    pub fn count(&self, term: usize, doc: usize) -> u32 {
        let row = &self.rows[term];
        match row.binary_search_by_key(&(doc as u32), |&(d, _)| d) {
            Ok(pos) => row[pos].1,
            Err(_) => 0,
        }
    }

    pub fn term_index(&self, term: &str) -> Option<usize> {
        self.terms.binary_search_by(|t| t.as_str().cmp(term)).ok()
    }

    /// Nonzero entries of one term row.
    pub fn row(&self, term: usize) -> &[(u32, u32)] {
        &self.rows[term]
    }

    pub fn to_dense(&self) -> DMatrix<f64> {
        let mut m = DMatrix::zeros(self.n_terms(), self.n_docs());
        for (i, row) in self.rows.iter().enumerate() {
            for &(j, c) in row {
                m[(i, j as usize)] = f64::from(c);
            }
        }
        m
    }
}

/// Counts terms per document. Terms whose corpus-wide count is below
/// `min_term_count` are left out.
pub fn build_matrix(corpus: &Corpus, min_term_count: u32) -> Result<TermDocumentMatrix, LsaError> {
    if corpus.is_empty() {
        return Err(LsaError::EmptyCorpus);
    }
    let per_doc: Vec<BTreeMap<&str, u32>> = corpus
        .documents
        .par_iter()
        .map(|doc| {
            let mut counts = BTreeMap::new();
            for tok in &doc.tokens {
                *counts.entry(tok.as_str()).or_insert(0u32) += 1;
            }
            counts
        })
        .collect();

    let mut merged: BTreeMap<&str, Vec<(u32, u32)>> = BTreeMap::new();
    for (j, counts) in per_doc.iter().enumerate() {
        for (&term, &c) in counts {
            merged.entry(term).or_default().push((j as u32, c));
        }
    }

    let mut terms = Vec::new();
    let mut rows = Vec::new();
    for (term, row) in merged {
        let total: u64 = row.iter().map(|&(_, c)| u64::from(c)).sum();
        if total >= u64::from(min_term_count) {
            terms.push(term.to_string());
            rows.push(row);
        }
    }
    if terms.is_empty() {
        return Err(LsaError::EmptyVocabulary { min_term_count });
    }
    Ok(TermDocumentMatrix {
        terms,
        docs: corpus.documents.iter().map(|d| d.id.clone()).collect(),
        rows,
    })
}

/// Cell weighting applied before factorisation.
///
/// * `Raw`: the counts.
/// * `LogEntropy`: `ln(1 + tf) · g`, with `g = 1 + Σ_j p_j ln p_j / ln n`
///   and `p_j = tf_j / Σ tf`. A term spread evenly over all documents gets
///   `g = 0`, a term confined to one document `g = 1`. With a single
///   document `g = 1`.
/// * `TfIdf`: `tf · ln(n / df)`.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Weighting {
    Raw,
    #[default]
    LogEntropy,
    TfIdf,
}

impl Weighting {
    pub(crate) fn code(self) -> u8 {
        match self {
            Self::Raw => 0,
            Self::LogEntropy => 1,
            Self::TfIdf => 2,
        }
    }

    pub(crate) fn from_code(code: u8) -> Option<Self> {
        match code {
            0 => Some(Self::Raw),
            1 => Some(Self::LogEntropy),
            2 => Some(Self::TfIdf),
            _ => None,
        }
    }
}

impl fmt::Display for Weighting {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Self::Raw => "raw",
            Self::LogEntropy => "log-entropy",
            Self::TfIdf => "tf-idf",
        })
    }
}

impl FromStr for Weighting {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s.to_ascii_lowercase().as_str() {
            "raw" => Ok(Self::Raw),
            "log-entropy" | "logentropy" => Ok(Self::LogEntropy),
            "tf-idf" | "tfidf" => Ok(Self::TfIdf),
            other => Err(format!("unknown weighting `{other}` (raw, log-entropy, tf-idf)")),
        }
    }
}

/// Global log-entropy weight of one term row.
pub fn entropy_weight(row: &[(u32, u32)], n_docs: usize) -> f64 {
    if n_docs <= 1 {
        return 1.0;
    }
    let total: f64 = row.iter().map(|&(_, c)| f64::from(c)).sum();
    let plogp: f64 = row
        .iter()
        .map(|&(_, c)| {
            let p = f64::from(c) / total;
            p * p.ln()
        })
        .sum();
    1.0 + plogp / (n_docs as f64).ln()
}

pub fn weight(m: &TermDocumentMatrix, scheme: Weighting) -> DMatrix<f64> {
    let n = m.n_docs();
    let mut out = DMatrix::zeros(m.n_terms(), n);
    for (i, row) in m.rows.iter().enumerate() {
        match scheme {
            Weighting::Raw => {
                for &(j, c) in row {
                    out[(i, j as usize)] = f64::from(c);
                }
            }
            Weighting::LogEntropy => {
                let g = entropy_weight(row, n);
                for &(j, c) in row {
                    out[(i, j as usize)] = f64::from(c).ln_1p() * g;
                }
            }
            Weighting::TfIdf => {
                let idf = (n as f64 / row.len() as f64).ln();
                for &(j, c) in row {
                    out[(i, j as usize)] = f64::from(c) * idf;
                }
            }
        }
    }
    out
}
