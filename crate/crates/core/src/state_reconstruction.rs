//! Concept states rebuilt from per-exemplar collapse statistics.
//!
//! Given the distributions `p_a`, `p_b`, `p_or` over `N` exemplars, the
//! states live in `C^(N+1)`: one basis vector per exemplar plus a slack
//! direction. `|A⟩` has real nonnegative amplitudes `√p_a(k)`; `|B⟩` carries
//! `√p_b(k)·e^{iφ_k}`. The relative phases are chosen per exemplar so that
//! the equal superposition `(|A⟩ + |B⟩)/√2` collapses onto exemplar `k`
//! with probability
//!
//! ```text
//! (p_a(k) + p_b(k))/2 + √(p_a(k)·p_b(k))·cos φ_k = p_or(k)
//! ```
//!
//! When every exemplar is attainable the overlap `Re⟨A|B⟩` cancels and the
//! superposition is already normalised. Exemplars outside the attainable
//! band are clamped to the nearest reachable value. The slack direction
//! then picks up any missing probability mass; excess mass (clamping from
//! above) is removed by rescaling the exemplar amplitudes, which is
//! reported through `superposition_scale`.
//!
//! The slack bookkeeping is one reading of how a 25-dimensional model
//! for 24 exemplars absorbs normalisation residue; other distributions of
//! the residue are possible.

use num_complex::Complex64;
use serde::{Deserialize, Serialize};
use thiserror::Error;

const NORM_TOL: f64 = 1e-10;
const INPUT_SUM_TOL: f64 = 1e-9;
const FEASIBILITY_SLACK: f64 = 1e-12;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum ReconstructionError {
    #[error("state is not normalised: squared norm {0}")]
    NotNormalized(f64),
    #[error("{name} sums to {sum}, expected 1")]
    BadSum { name: &'static str, sum: f64 },
    #[error("{name}[{index}] = {value} is negative or not finite")]
    BadEntry {
        name: &'static str,
        index: usize,
        value: f64,
    },
    #[error("distribution lengths differ: {0}, {1}, {2}")]
    LengthMismatch(usize, usize, usize),
    #[error("distributions are empty")]
    Empty,
}

/// Unit-norm amplitude vector; the last entry is the slack direction.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ConceptState {
    amplitudes: Vec<Complex64>,
}

impl ConceptState {
    pub fn new(amplitudes: Vec<Complex64>) -> Result<Self, ReconstructionError> {
        let norm2 = squared_norm(&amplitudes);
        if (norm2 - 1.0).abs() > NORM_TOL || !norm2.is_finite() {
            return Err(ReconstructionError::NotNormalized(norm2));
        }
        Ok(Self { amplitudes })
    }

    pub fn amplitudes(&self) -> &[Complex64] {
        &self.amplitudes
    }

    pub fn norm_sqr(&self) -> f64 {
        squared_norm(&self.amplitudes)
    }

    /// Number of exemplar dimensions (slack excluded).
    pub fn exemplars(&self) -> usize {
        self.amplitudes.len().saturating_sub(1)
    }
}

fn squared_norm(amps: &[Complex64]) -> f64 {
    amps.iter().map(|a| a.norm_sqr()).sum()
}

/// Outcome probabilities `|⟨e_k|ψ⟩|²` over all `N+1` directions.
pub fn collapse_probabilities(state: &[Complex64]) -> Result<Vec<f64>, ReconstructionError> {
    let norm2 = squared_norm(state);
    if (norm2 - 1.0).abs() > NORM_TOL || !norm2.is_finite() {
        return Err(ReconstructionError::NotNormalized(norm2));
    }
    Ok(state.iter().map(|a| a.norm_sqr()).collect())
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ReconstructionResult {
    pub state_a: ConceptState,
    pub state_b: ConceptState,
    /// Normalised `(|A⟩ + |B⟩)/√2` with slack bookkeeping.
    pub superposition: ConceptState,
    /// Relative phase `φ_k` per exemplar, radians in `[0, π]`.
    pub phases: Vec<f64>,
    pub infeasible_exemplars: Vec<usize>,
    /// `Σ_k √(p_a p_b)·cos φ_k`; zero when every exemplar is attainable.
    pub overlap_residual: f64,
    /// Factor applied to the exemplar amplitudes of the superposition; 1
    /// unless clamping left more than unit mass.
    pub superposition_scale: f64,
}

fn check_distribution(name: &'static str, p: &[f64]) -> Result<(), ReconstructionError> {
    for (index, &value) in p.iter().enumerate() {
        if !(value >= 0.0 && value.is_finite()) {
            return Err(ReconstructionError::BadEntry { name, index, value });
        }
    }
    let sum: f64 = p.iter().sum();
    if (sum - 1.0).abs() > INPUT_SUM_TOL {
        return Err(ReconstructionError::BadSum { name, sum });
    }
    Ok(())
}

/// Real state with amplitudes `√p` plus a slack entry absorbing rounding.
fn state_from_distribution(p: &[f64], phases: Option<&[f64]>) -> ConceptState {
    let sum: f64 = p.iter().sum();
    let scale = if sum > 1.0 { sum.sqrt().recip() } else { 1.0 };
    let mut amps: Vec<Complex64> = p
        .iter()
        .enumerate()
        .map(|(k, &pk)| {
            let phase = phases.map_or(0.0, |ph| ph[k]);
            Complex64::from_polar(pk.sqrt() * scale, phase)
        })
        .collect();
    amps.push(Complex64::new((1.0 - squared_norm(&amps)).max(0.0).sqrt(), 0.0));
    ConceptState { amplitudes: amps }
}

pub fn reconstruct_pair(
    p_a: &[f64],
    p_b: &[f64],
    p_or: &[f64],
) -> Result<ReconstructionResult, ReconstructionError> {
    if p_a.len() != p_b.len() || p_a.len() != p_or.len() {
        return Err(ReconstructionError::LengthMismatch(p_a.len(), p_b.len(), p_or.len()));
    }
    if p_a.is_empty() {
        return Err(ReconstructionError::Empty);
    }
    check_distribution("p_a", p_a)?;
    check_distribution("p_b", p_b)?;
    check_distribution("p_or", p_or)?;

    let n = p_a.len();
    let mut phases = Vec::with_capacity(n);
    let mut infeasible = Vec::new();
    let mut overlap = 0.0;
    for k in 0..n {
        let avg = (p_a[k] + p_b[k]) / 2.0;
        let cross = (p_a[k] * p_b[k]).sqrt();
        let gap = p_or[k] - avg;
        if gap.abs() > cross + FEASIBILITY_SLACK {
            infeasible.push(k);
        }
        let cos = if cross > 0.0 {
            (gap / cross).clamp(-1.0, 1.0)
        } else {
            0.0
        };
        overlap += cross * cos;
        phases.push(cos.acos());
    }

    let state_a = state_from_distribution(p_a, None);
    let state_b = state_from_distribution(p_b, Some(&phases));

    let mut sup: Vec<Complex64> = state_a.amplitudes[..n]
        .iter()
        .zip(&state_b.amplitudes[..n])
        .map(|(a, b)| (a + b) / std::f64::consts::SQRT_2)
        .collect();
    let mass = squared_norm(&sup);
    let scale = if mass > 1.0 { mass.sqrt().recip() } else { 1.0 };
    if scale != 1.0 {
        for amp in &mut sup {
            *amp *= scale;
        }
    }
    sup.push(Complex64::new((1.0 - squared_norm(&sup)).max(0.0).sqrt(), 0.0));

    Ok(ReconstructionResult {
        state_a,
        state_b,
        superposition: ConceptState { amplitudes: sup },
        phases,
        infeasible_exemplars: infeasible,
        overlap_residual: overlap,
        superposition_scale: scale,
    })
}

// ---------------------------------------------------------------------------
// JSON interchange

/// Input document: three distributions over the same exemplars.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ReconstructionRequest {
    pub p_a: Vec<f64>,
    pub p_b: Vec<f64>,
    pub p_or: Vec<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub labels: Option<Vec<String>>,
}

/// Output document. Amplitudes are `[re, im]` pairs, slack last.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ReconstructionReport {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub labels: Option<Vec<String>>,
    pub state_a: Vec<[f64; 2]>,
    pub state_b: Vec<[f64; 2]>,
    pub superposition: Vec<[f64; 2]>,
    pub phases_deg: Vec<f64>,
    pub infeasible_exemplars: Vec<usize>,
    pub overlap_residual: f64,
    pub superposition_scale: f64,
}

fn pairs(state: &ConceptState) -> Vec<[f64; 2]> {
    state.amplitudes.iter().map(|c| [c.re, c.im]).collect()
}

#[derive(Debug, Error)]
pub enum RequestError {
    #[error("malformed reconstruction request: {0}")]
    Json(#[from] serde_json::Error),
    #[error("{0} labels given for {1} exemplars")]
    Labels(usize, usize),
    #[error(transparent)]
    Reconstruction(#[from] ReconstructionError),
}

pub fn parse_request(bytes: &[u8]) -> Result<ReconstructionRequest, RequestError> {
    let req: ReconstructionRequest = serde_json::from_slice(bytes)?;
    if let Some(labels) = &req.labels {
        if labels.len() != req.p_a.len() {
            return Err(RequestError::Labels(labels.len(), req.p_a.len()));
        }
    }
    Ok(req)
}

impl ReconstructionRequest {
    pub fn solve(&self) -> Result<ReconstructionReport, ReconstructionError> {
        let r = reconstruct_pair(&self.p_a, &self.p_b, &self.p_or)?;
        Ok(ReconstructionReport {
            labels: self.labels.clone(),
            state_a: pairs(&r.state_a),
            state_b: pairs(&r.state_b),
            superposition: pairs(&r.superposition),
            phases_deg: r.phases.iter().map(|p| p.to_degrees()).collect(),
            infeasible_exemplars: r.infeasible_exemplars,
            overlap_residual: r.overlap_residual,
            superposition_scale: r.superposition_scale,
        })
    }
}
