use std::collections::HashMap;

use nalgebra::{DMatrix, DVector, RowDVector};

use super::matrix::{build_matrix, weight, TermDocumentMatrix, Weighting};
use super::svd::{truncated_svd, SvdOptions};
use super::LsaError;
use crate::dataset::{tokenize, Corpus, TokenizerOptions};

/// Relative cut-off below which a singular value counts as zero.
const RANK_TOL: f64 = 1e-12;

#[derive(Debug, Clone, PartialEq)]
pub struct LsaConfig {
    pub rank: usize,
    pub weighting: Weighting,
    pub min_term_count: u32,
    pub svd: SvdOptions,
    /// Whether corpus tokens were stemmed; queries are stemmed to match.
    pub stemmed: bool,
}

impl Default for LsaConfig {
    fn default() -> Self {
        Self {
            rank: 100,
            weighting: Weighting::LogEntropy,
            min_term_count: 1,
            svd: SvdOptions::default(),
            stemmed: false,
        }
    }
}

/// Words dropped from query phrases by default: connectives name the
/// combination, they are not part of either concept.
pub const DEFAULT_STOP_WORDS: [&str; 2] = ["or", "and"];

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct QueryOptions {
    pub stop_words: Vec<String>,
}

impl Default for QueryOptions {
    fn default() -> Self {
        Self {
            stop_words: DEFAULT_STOP_WORDS.iter().map(|s| s.to_string()).collect(),
        }
    }
}

impl QueryOptions {
    pub fn without_stop_words() -> Self {
        Self {
            stop_words: Vec::new(),
        }
    }
}

/// Rank-`k` term space: one row `u_i · Σ_k` per vocabulary term.
#[derive(Debug, Clone, PartialEq)]
pub struct SemanticSpace {
    pub(crate) terms: Vec<String>,
    pub(crate) index: HashMap<String, usize>,
    pub(crate) term_vectors: DMatrix<f64>,
    pub(crate) singular_values: Vec<f64>,
    pub(crate) n_docs: usize,
    pub(crate) weighting: Weighting,
    pub(crate) stemmed: bool,
    pub(crate) seed: u64,
}

impl SemanticSpace {
    /// Builds a space from an already tokenized corpus.
    pub fn build(corpus: &Corpus, config: &LsaConfig) -> Result<Self, LsaError> {
        let tdm = build_matrix(corpus, config.min_term_count)?;
        Self::from_matrix(&tdm, config)
    }

    pub fn from_matrix(tdm: &TermDocumentMatrix, config: &LsaConfig) -> Result<Self, LsaError> {
        let weighted = weight(tdm, config.weighting);
        let svd = truncated_svd(&weighted, config.rank, &config.svd)?;
        let top = svd.singular_values[0];
        let effective = svd
            .singular_values
            .iter()
            .take_while(|s| **s > RANK_TOL * top)
            .count();
        if effective < config.rank {
            return Err(LsaError::RankDeficient {
                k: config.rank,
                effective,
            });
        }
        let mut term_vectors = svd.u;
        for (j, s) in svd.singular_values.iter().enumerate() {
            term_vectors.column_mut(j).scale_mut(*s);
        }
        Ok(Self::from_parts(
            tdm.terms().to_vec(),
            term_vectors,
            svd.singular_values.iter().copied().collect(),
            tdm.n_docs(),
            config.weighting,
            config.stemmed,
            config.svd.seed,
        ))
    }

    pub(crate) fn from_parts(
        terms: Vec<String>,
        term_vectors: DMatrix<f64>,
        singular_values: Vec<f64>,
        n_docs: usize,
        weighting: Weighting,
        stemmed: bool,
        seed: u64,
    ) -> Self {
        let index = terms
            .iter()
            .enumerate()
            .map(|(i, t)| (t.clone(), i))
            .collect();
        Self {
            terms,
            index,
            term_vectors,
            singular_values,
            n_docs,
            weighting,
            stemmed,
            seed,
        }
    }

    pub fn rank(&self) -> usize {
        self.singular_values.len()
    }

    pub fn vocabulary(&self) -> &[String] {
        &self.terms
    }

    pub fn singular_values(&self) -> &[f64] {
        &self.singular_values
    }

    pub fn term_vectors(&self) -> &DMatrix<f64> {
        &self.term_vectors
    }

    pub fn n_docs(&self) -> usize {
        self.n_docs
    }

    pub fn weighting(&self) -> Weighting {
        self.weighting
    }

    pub fn stemmed(&self) -> bool {
        self.stemmed
    }

    pub fn seed(&self) -> u64 {
        self.seed
    }

    pub fn term_vector(&self, term: &str) -> Option<RowDVector<f64>> {
        self.index
            .get(term)
            .map(|&i| self.term_vectors.row(i).into_owned())
    }

    /// Sum of the vectors of the phrase's in-vocabulary tokens.
    /// Out-of-vocabulary tokens are skipped with a warning.
    pub fn concept_vector(
        &self,
        phrase: &str,
        opts: &QueryOptions,
    ) -> Result<DVector<f64>, LsaError> {
        let tokens: Vec<String> = tokenize(phrase, TokenizerOptions { stem: self.stemmed })
            .into_iter()
            .filter(|t| !opts.stop_words.iter().any(|s| s == t))
            .collect();
        let mut sum = DVector::zeros(self.rank());
        let mut found = 0;
        let mut missing = Vec::new();
        for tok in &tokens {
            match self.index.get(tok) {
                Some(&i) => {
                    sum += self.term_vectors.row(i).transpose();
                    found += 1;
                }
                None => missing.push(tok.clone()),
            }
        }
        if found == 0 {
            return Err(LsaError::NoKnownTerms {
                phrase: phrase.to_string(),
                tokens,
            });
        }
        if !missing.is_empty() {
            log::warn!("`{phrase}`: skipped out-of-vocabulary token(s) {missing:?}");
        }
        Ok(sum)
    }

    /// Cosine of two phrase vectors, optionally clipped at zero.
    pub fn similarity_with(
        &self,
        phrase1: &str,
        phrase2: &str,
        opts: &QueryOptions,
        clip_negative: bool,
    ) -> Result<f64, LsaError> {
        let a = self.concept_vector(phrase1, opts)?;
        let b = self.concept_vector(phrase2, opts)?;
        let cos = cosine(&a, &b).ok_or_else(|| LsaError::ZeroVector {
            phrase: if a.norm() == 0.0 { phrase1 } else { phrase2 }.to_string(),
        })?;
        Ok(if clip_negative { cos.max(0.0) } else { cos })
    }
}

/// Cosine similarity in `[-1, 1]`; `None` if either vector is zero.
pub fn cosine(a: &DVector<f64>, b: &DVector<f64>) -> Option<f64> {
    let na = a.norm();
    let nb = b.norm();
    if na == 0.0 || nb == 0.0 || !na.is_finite() || !nb.is_finite() {
        return None;
    }
    Some((a.dot(b) / (na * nb)).clamp(-1.0, 1.0))
}

/// Similarity with the default query options.
pub fn similarity(
    space: &SemanticSpace,
    phrase1: &str,
    phrase2: &str,
    clip_negative: bool,
) -> Result<f64, LsaError> {
    space.similarity_with(phrase1, phrase2, &QueryOptions::default(), clip_negative)
}
