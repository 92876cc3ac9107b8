//! End-to-end comparison of LSA-derived memberships with measured data.
//!
//! For every exemplar row the cosine to concept A, concept B and the
//! phrase "A or B" is computed in a semantic space. Three models are then
//! compared to the data: the clipped cosines used directly as memberships,
//! and the threshold curve with the wide and narrow parameter sets.

use std::collections::HashMap;

use rayon::prelude::*;
use serde::Serialize;
use thiserror::Error;

use crate::analysis::{compare_pipeline, AnalysisError, ClipStats, Comparison};
use crate::dataset::{normalize_exemplar, ConceptPair, MembershipTriple, SimilarityTriple};
use crate::lsa::{LsaError, QueryOptions, SemanticSpace};
use crate::threshold_model::{self, ThresholdParams};

#[derive(Debug, Error)]
pub enum ReportError {
    #[error("pair `{0}` appears in the data but not in the pair list")]
    UnknownPair(String),
    #[error("concept `{phrase}` of pair `{pair_id}` cannot be placed in the space: {source}")]
    Concept {
        pair_id: String,
        phrase: String,
        source: LsaError,
    },
    #[error("no exemplar could be placed in the space")]
    NothingToCompare,
    #[error(transparent)]
    Analysis(#[from] AnalysisError),
}

#[derive(Debug, Clone, PartialEq)]
pub struct ReportConfig {
    pub tol: f64,
    pub query: QueryOptions,
    pub wide: ThresholdParams,
    pub narrow: ThresholdParams,
}

impl Default for ReportConfig {
    fn default() -> Self {
        Self {
            tol: 0.0,
            query: QueryOptions::default(),
            wide: ThresholdParams::WIDE,
            narrow: ThresholdParams::NARROW,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct SkippedExemplar {
    pub pair_id: String,
    pub exemplar: String,
    pub reason: String,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ModelComparison {
    pub model: String,
    pub comparison: Comparison,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Report {
    /// Unclipped cosines, in data order.
    pub similarities: Vec<SimilarityTriple>,
    pub skipped: Vec<SkippedExemplar>,
    pub clipping: ClipStats,
    pub models: Vec<ModelComparison>,
}

impl Report {
    pub fn model(&self, name: &str) -> Option<&Comparison> {
        self.models
            .iter()
            .find(|m| m.model == name)
            .map(|m| &m.comparison)
    }
}

pub const MODEL_LSA: &str = "lsa";
pub const MODEL_WIDE: &str = "threshold-wide";
pub const MODEL_NARROW: &str = "threshold-narrow";

/// Cosines for every data row. Rows whose exemplar has no in-vocabulary
/// token (or a zero vector) are skipped and listed; an unplaceable concept
/// name is an error.
pub fn similarity_table(
    space: &SemanticSpace,
    pairs: &[ConceptPair],
    data: &[MembershipTriple],
    query: &QueryOptions,
) -> Result<(Vec<SimilarityTriple>, Vec<SkippedExemplar>), ReportError> {
    let by_id: HashMap<&str, &ConceptPair> =
        pairs.iter().map(|p| (p.pair_id.as_str(), p)).collect();
    let mut concept_vectors = HashMap::new();
    for row in data {
        if concept_vectors.contains_key(row.pair_id.as_str()) {
            continue;
        }
        let pair = by_id
            .get(row.pair_id.as_str())
            .ok_or_else(|| ReportError::UnknownPair(row.pair_id.clone()))?;
        let mut vecs = Vec::with_capacity(3);
        for phrase in [pair.name_a.clone(), pair.name_b.clone(), pair.combined_phrase()] {
            let v = space
                .concept_vector(&phrase, query)
                .map_err(|source| ReportError::Concept {
                    pair_id: pair.pair_id.clone(),
                    phrase: phrase.clone(),
                    source,
                })?;
            vecs.push(v);
        }
        concept_vectors.insert(row.pair_id.as_str(), vecs);
    }

    let results: Vec<Result<SimilarityTriple, SkippedExemplar>> = data
        .par_iter()
        .map(|row| {
            let skip = |reason: String| SkippedExemplar {
                pair_id: row.pair_id.clone(),
                exemplar: row.exemplar.clone(),
                reason,
            };
            let ex = space
                .concept_vector(&row.exemplar, query)
                .map_err(|e| skip(e.to_string()))?;
            let concepts = &concept_vectors[row.pair_id.as_str()];
            let mut s = [0.0; 3];
            for (out, c) in s.iter_mut().zip(concepts) {
                *out = crate::lsa::cosine(&ex, c)
                    .ok_or_else(|| skip("zero vector".to_string()))?;
            }
            Ok(SimilarityTriple {
                pair_id: row.pair_id.clone(),
                exemplar: row.exemplar.clone(),
                s_a: s[0],
                s_b: s[1],
                s_or: s[2],
            })
        })
        .collect();

    let mut sims = Vec::with_capacity(results.len());
    let mut skipped = Vec::new();
    for r in results {
        match r {
            Ok(s) => sims.push(s),
            Err(s) => {
                log::warn!("skipping `{}` in `{}`: {}", s.exemplar, s.pair_id, s.reason);
                skipped.push(s);
            }
        }
    }
    Ok((sims, skipped))
}

pub fn clip_stats(sims: &[SimilarityTriple]) -> ClipStats {
    let mut stats = ClipStats {
        values_total: 3 * sims.len(),
        exemplars_total: sims.len(),
        ..ClipStats::default()
    };
    for s in sims {
        let neg: Vec<f64> = [s.s_a, s.s_b, s.s_or].into_iter().filter(|v| *v < 0.0).collect();
        if !neg.is_empty() {
            stats.exemplars_clipped += 1;
            stats.values_clipped += neg.len();
            for v in neg {
                stats.most_negative = Some(stats.most_negative.map_or(v, |m: f64| m.min(v)));
            }
        }
    }
    stats
}

/// Clipped cosines taken directly as membership weights.
pub fn clipped_memberships(sims: &[SimilarityTriple]) -> Vec<MembershipTriple> {
    sims.iter()
        .map(|s| MembershipTriple {
            pair_id: s.pair_id.clone(),
            exemplar: s.exemplar.clone(),
            mu_a: s.s_a.clamp(0.0, 1.0),
            mu_b: s.s_b.clamp(0.0, 1.0),
            mu_or: s.s_or.clamp(0.0, 1.0),
        })
        .collect()
}

pub fn run(
    space: &SemanticSpace,
    pairs: &[ConceptPair],
    data: &[MembershipTriple],
    config: &ReportConfig,
) -> Result<Report, ReportError> {
    let (similarities, skipped) = similarity_table(space, pairs, data, &config.query)?;
    if similarities.is_empty() {
        return Err(ReportError::NothingToCompare);
    }
    let skipped_keys: std::collections::HashSet<(String, String)> = skipped
        .iter()
        .map(|s| (s.pair_id.clone(), normalize_exemplar(&s.exemplar)))
        .collect();
    let reference: Vec<MembershipTriple> = data
        .iter()
        .filter(|t| !skipped_keys.contains(&t.key()))
        .cloned()
        .collect();
    let clipping = clip_stats(&similarities);

    let candidates = [
        (MODEL_LSA, clipped_memberships(&similarities)),
        (MODEL_WIDE, threshold_model::apply(&similarities, &config.wide)),
        (MODEL_NARROW, threshold_model::apply(&similarities, &config.narrow)),
    ];
    let mut models = Vec::with_capacity(candidates.len());
    for (name, model) in candidates {
        let mut comparison = compare_pipeline(&reference, &model, config.tol)?;
        comparison.clipping = Some(clipping);
        models.push(ModelComparison {
            model: name.to_string(),
            comparison,
        });
    }
    Ok(Report {
        similarities,
        skipped,
        clipping,
        models,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::dataset::{Connective, Corpus, TokenizerOptions};
    use crate::lsa::LsaConfig;

    fn space() -> SemanticSpace {
        let c = Corpus::from_texts(
            [
                ("1", "pet dog cat goldfish home"),
                ("2", "farmyard animal cow pig donkey"),
                ("3", "pet animal dog donkey"),
                ("4", "home sofa cat"),
                ("5", "farmyard hay donkey horse"),
            ],
            TokenizerOptions::default(),
        )
        .unwrap();
        SemanticSpace::build(&c, &LsaConfig { rank: 3, ..LsaConfig::default() }).unwrap()
    }

    fn pairs() -> Vec<ConceptPair> {
        vec![ConceptPair {
            pair_id: "pf".into(),
            name_a: "Pet".into(),
            name_b: "Farmyard Animal".into(),
            connective: Connective::Or,
        }]
    }

    fn t(ex: &str, a: f64, b: f64, or: f64) -> MembershipTriple {
        MembershipTriple::new("pf", ex, a, b, or).unwrap()
    }

    #[test]
    fn runs_three_models_and_skips_unknown() {
        let data = vec![
            t("Dog", 0.9, 0.3, 0.9),
            t("Donkey", 0.5, 0.9, 0.7),
            t("Cow", 0.1, 0.9, 0.8),
            t("Unicorn", 0.1, 0.1, 0.2),
            t("Cat", 0.9, 0.2, 0.9),
        ];
        let r = run(&space(), &pairs(), &data, &ReportConfig::default()).unwrap();
        assert_eq!(r.skipped.len(), 1);
        assert_eq!(r.skipped[0].exemplar, "Unicorn");
        assert_eq!(r.similarities.len(), 4);
        assert_eq!(r.models.len(), 3);
        for m in &r.models {
            assert_eq!(m.comparison.graph.total(), 4);
        }
        assert!(r.model(MODEL_NARROW).is_some());
    }

    #[test]
    fn unknown_pair_is_error() {
        let data = vec![MembershipTriple::new("zz", "dog", 0.1, 0.1, 0.1).unwrap()];
        assert!(matches!(
            run(&space(), &pairs(), &data, &ReportConfig::default()),
            Err(ReportError::UnknownPair(_))
        ));
    }

    #[test]
    fn clipping_counted() {
        let sims = vec![
            SimilarityTriple { pair_id: "p".into(), exemplar: "x".into(), s_a: -0.2, s_b: 0.5, s_or: -0.1 },
            SimilarityTriple { pair_id: "p".into(), exemplar: "y".into(), s_a: 0.2, s_b: 0.5, s_or: 0.1 },
        ];
        let c = clip_stats(&sims);
        assert_eq!((c.values_total, c.values_clipped, c.exemplars_clipped), (6, 2, 1));
        assert_eq!(c.most_negative, Some(-0.2));
        let m = clipped_memberships(&sims);
        assert_eq!((m[0].mu_a, m[0].mu_or), (0.0, 0.0));
    }
}
