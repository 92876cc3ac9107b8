//! Quantum-cognition analysis of concept-combination membership data.
//!
//! * [`dataset`]: membership CSVs, concept pairs, similarity tables, corpora.
//! * [`classicality`]: Kolmogorovian representability and C/D/K labels.
//! * [`fock_model`]: the two-sector Fock-space disjunction model and its fits.
//! * [`state_reconstruction`]: concept states from collapse statistics.
//! * [`lsa`]: term-document matrices, weighting, truncated SVD, similarity.
//! * [`threshold_model`]: similarity-to-membership threshold curve.
//! * [`analysis`]: correlations and C/D/K transition graphs between datasets.
//! * [`report`]: the end-to-end LSA-versus-data comparison pipeline.

pub mod classicality;
pub mod dataset;
mod decimal;
pub mod fock_model;
pub mod lsa;
pub mod analysis;
pub mod report;
pub mod state_reconstruction;
pub mod threshold_model;
