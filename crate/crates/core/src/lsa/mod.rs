//! Latent semantic analysis: counts, weighting, rank-`k` factorisation and
//! cosine similarity between phrase vectors.

mod format;
mod matrix;
mod space;
mod svd;

use thiserror::Error;

pub use format::{MAGIC, VERSION};
pub use matrix::{build_matrix, entropy_weight, weight, TermDocumentMatrix, Weighting};
pub use space::{
    cosine, similarity, LsaConfig, QueryOptions, SemanticSpace, DEFAULT_STOP_WORDS,
};
pub use svd::{truncated_svd, SvdMethod, SvdOptions, TruncatedSvd, DENSE_LIMIT};

#[derive(Debug, Clone, PartialEq, Error)]
pub enum LsaError {
    #[error("corpus has no documents")]
    EmptyCorpus,
    #[error("no term occurs at least {min_term_count} times")]
    EmptyVocabulary { min_term_count: u32 },
    #[error("rank {k} out of range 1..={max}")]
    RankOutOfRange { k: usize, max: usize },
    #[error("matrix is all zeros")]
    ZeroMatrix,
    #[error("matrix has non-finite entries")]
    NonFinite,
    #[error("requested rank {k} but only {effective} singular values are nonzero")]
    RankDeficient { k: usize, effective: usize },
    #[error("no token of `{phrase}` is in the vocabulary (tokens: {tokens:?})")]
    NoKnownTerms { phrase: String, tokens: Vec<String> },
    #[error("`{phrase}` maps to the zero vector")]
    ZeroVector { phrase: String },
    #[error("invalid space file: {0}")]
    Format(String),
}

impl LsaError {
    pub(crate) fn format(msg: impl Into<String>) -> Self {
        Self::Format(msg.into())
    }
}
