//! Threshold model turning a similarity into a membership weight.
//!
//! Below `s_l` membership is 0, above `s_h` it is 1, and in between two
//! quadratic pieces meet at `s_t` with value ½:
//!
//! ```text
//! s ∈ (s_l, s_t]:  ½·((s − s_l)/(s_t − s_l))²
//! s ∈ (s_t, s_h):  1 − ½·((s_h − s)/(s_h − s_t))²
//! ```
//!
//! The curve is continuous and nondecreasing, and symmetric about `s_t` when
//! `s_t` is the midpoint. The exact quadratic of the classic threshold
//! model is not pinned down; other curves can be plugged in through
//! [`MembershipCurve`].

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::dataset::{MembershipTriple, SimilarityTriple};

#[derive(Debug, Clone, PartialEq, Error)]
pub enum ThresholdError {
    #[error("threshold parameters must satisfy s_l < s_t < s_h, got ({s_l}, {s_t}, {s_h})")]
    InvalidParams { s_l: f64, s_t: f64, s_h: f64 },
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ThresholdParams {
    s_l: f64,
    s_t: f64,
    s_h: f64,
}

impl ThresholdParams {
    /// `(0.1, 0.5, 0.9)`
    pub const WIDE: ThresholdParams = ThresholdParams {
        s_l: 0.1,
        s_t: 0.5,
        s_h: 0.9,
    };
    /// `(0.3, 0.5, 0.7)`
    pub const NARROW: ThresholdParams = ThresholdParams {
        s_l: 0.3,
        s_t: 0.5,
        s_h: 0.7,
    };

    pub fn new(s_l: f64, s_t: f64, s_h: f64) -> Result<Self, ThresholdError> {
        if s_l.is_finite() && s_h.is_finite() && s_l < s_t && s_t < s_h {
            Ok(Self { s_l, s_t, s_h })
        } else {
            Err(ThresholdError::InvalidParams { s_l, s_t, s_h })
        }
    }

    pub fn s_l(&self) -> f64 {
        self.s_l
    }

    pub fn s_t(&self) -> f64 {
        self.s_t
    }

    pub fn s_h(&self) -> f64 {
        self.s_h
    }
}

pub trait MembershipCurve {
    fn membership(&self, similarity: f64) -> f64;
}

impl MembershipCurve for ThresholdParams {
    fn membership(&self, similarity: f64) -> f64 {
        membership(similarity, self)
    }
}

pub fn membership(s: f64, p: &ThresholdParams) -> f64 {
    if s.is_nan() || s <= p.s_l {
        0.0
    } else if s >= p.s_h {
        1.0
    } else if s <= p.s_t {
        let r = (s - p.s_l) / (p.s_t - p.s_l);
        0.5 * r * r
    } else {
        let r = (p.s_h - s) / (p.s_h - p.s_t);
        1.0 - 0.5 * r * r
    }
}

/// Maps clipped similarities through `curve`. Negative similarities are
/// set to zero first.
pub fn apply<C: MembershipCurve + ?Sized>(
    rows: &[SimilarityTriple],
    curve: &C,
) -> Vec<MembershipTriple> {
    rows.iter()
        .map(|r| MembershipTriple {
            pair_id: r.pair_id.clone(),
            exemplar: r.exemplar.clone(),
            mu_a: curve.membership(r.s_a.max(0.0)).clamp(0.0, 1.0),
            mu_b: curve.membership(r.s_b.max(0.0)).clamp(0.0, 1.0),
            mu_or: curve.membership(r.s_or.max(0.0)).clamp(0.0, 1.0),
        })
        .collect()
}
