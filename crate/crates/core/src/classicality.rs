//! Kolmogorovian representability of disjunction membership triples.
//!
//! A triple `(μ(A), μ(B), μ(A or B))` has a classical probability model iff
//!
//! ```text
//! Δd = max(μ(A), μ(B)) − μ(A or B) ≤ 0
//! kd = μ(A) + μ(B) − μ(A or B)     ≥ 0
//! ```
//!
//! Exemplars violating the first are `D` (underextended), the second `K`;
//! the two violations cannot co-occur for weights in `[0, 1]`.

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::dataset::MembershipTriple;
use crate::decimal::signed_sum;

/// The C/D/K label of an exemplar.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub enum ExemplarType {
    #[serde(rename = "C")]
    Classical,
    #[serde(rename = "D")]
    DeltaType,
    #[serde(rename = "K")]
    KType,
}

impl ExemplarType {
    pub const ALL: [ExemplarType; 3] = [Self::Classical, Self::DeltaType, Self::KType];

    pub fn letter(self) -> char {
        match self {
            Self::Classical => 'C',
            Self::DeltaType => 'D',
            Self::KType => 'K',
        }
    }

    pub(crate) fn index(self) -> usize {
        self as usize
    }
}

impl fmt::Display for ExemplarType {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.letter())
    }
}

impl FromStr for ExemplarType {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "C" | "c" => Ok(Self::Classical),
            "D" | "d" => Ok(Self::DeltaType),
            "K" | "k" => Ok(Self::KType),
            other => Err(format!("unknown exemplar type `{other}`")),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ClassicalityReport {
    pub delta_d: f64,
    pub k_d: f64,
    #[serde(rename = "type")]
    pub kind: ExemplarType,
}

/// Disjunction maximum rule deviation.
pub fn delta_d(t: &MembershipTriple) -> f64 {
    signed_sum(&[(1, t.mu_a.max(t.mu_b)), (-1, t.mu_or)])
}

/// Kolmogorovian disjunction factor.
pub fn k_d(t: &MembershipTriple) -> f64 {
    signed_sum(&[(1, t.mu_a), (1, t.mu_b), (-1, t.mu_or)])
}

/// Labels a triple. Deviations within `tol` of zero count as classical;
/// a negative `tol` is treated as zero.
pub fn classify(t: &MembershipTriple, tol: f64) -> ClassicalityReport {
    let tol = tol.max(0.0);
    let delta_d = delta_d(t);
    let k_d = k_d(t);
    let kind = if delta_d > tol {
        ExemplarType::DeltaType
    } else if k_d < -tol {
        ExemplarType::KType
    } else {
        ExemplarType::Classical
    };
    ClassicalityReport { delta_d, k_d, kind }
}

/// Atom probabilities of a four-outcome sample space realising a triple:
/// `p11 = P(A∩B)`, `p10 = P(A∖B)`, `p01 = P(B∖A)`, `p00 = P(¬A∩¬B)`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct KolmogorovWitness {
    pub p11: f64,
    pub p10: f64,
    pub p01: f64,
    pub p00: f64,
}

impl KolmogorovWitness {
    pub fn mu_a(&self) -> f64 {
        self.p11 + self.p10
    }

    pub fn mu_b(&self) -> f64 {
        self.p11 + self.p01
    }

    pub fn mu_or(&self) -> f64 {
        self.p11 + self.p10 + self.p01
    }

    pub fn total(&self) -> f64 {
        self.p11 + self.p10 + self.p01 + self.p00
    }
}

/// Solves the atom system directly and returns it when every atom is a
/// probability. The system
///
/// ```text
/// p11 + p10             = μ(A)
/// p11       + p01       = μ(B)
/// p11 + p10 + p01       = μ(A or B)
/// p11 + p10 + p01 + p00 = 1
/// ```
///
/// has a unique solution, so existence reduces to its nonnegativity.
pub fn kolmogorov_oracle(t: &MembershipTriple) -> Option<KolmogorovWitness> {
    let w = KolmogorovWitness {
        p11: signed_sum(&[(1, t.mu_a), (1, t.mu_b), (-1, t.mu_or)]),
        p10: signed_sum(&[(1, t.mu_or), (-1, t.mu_b)]),
        p01: signed_sum(&[(1, t.mu_or), (-1, t.mu_a)]),
        p00: signed_sum(&[(1, 1.0), (-1, t.mu_or)]),
    };
    let atoms = [w.p11, w.p10, w.p01, w.p00];
    if atoms.iter().all(|p| (0.0..=1.0).contains(p)) && w.p11 <= t.mu_a.min(t.mu_b) {
        Some(w)
    } else {
        None
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn t(a: f64, b: f64, or: f64) -> MembershipTriple {
        MembershipTriple::weights(a, b, or)
    }

    #[test]
    fn donkey() {
        let donkey = t(0.5, 0.9, 0.7);
        assert_eq!(delta_d(&donkey), 0.2);
        assert_eq!(k_d(&donkey), 0.7);
        assert_eq!(classify(&donkey, 0.0).kind, ExemplarType::DeltaType);
        assert_eq!(kolmogorov_oracle(&donkey), None);
    }

    #[test]
    fn delta_examples() {
        assert_eq!(delta_d(&t(0.0, 0.0, 0.0)), 0.0);
        assert_eq!(delta_d(&t(0.3, 0.4, 0.4)), 0.0);
    }

    #[test]
    fn k_examples() {
        assert_eq!(k_d(&t(0.3, 0.4, 0.8)), -0.1);
        assert_eq!(k_d(&t(0.0, 0.0, 0.0)), 0.0);
    }

    #[test]
    fn classify_examples() {
        assert_eq!(classify(&t(0.3, 0.4, 0.8), 0.0).kind, ExemplarType::KType);
        let c = classify(&t(0.2, 0.3, 0.4), 0.0);
        assert_eq!(c.kind, ExemplarType::Classical);
        assert_eq!(c.delta_d, -0.1);
        assert_eq!(c.k_d, 0.1);
    }

    #[test]
    fn ties_are_classical() {
        assert_eq!(classify(&t(0.3, 0.4, 0.4), 0.0).kind, ExemplarType::Classical);
        assert_eq!(classify(&t(0.3, 0.4, 0.7), 0.0).kind, ExemplarType::Classical);
    }

    #[test]
    fn tolerance_absorbs_noise() {
        let noisy = t(0.5, 0.9, 0.9 - 1e-12);
        assert_eq!(classify(&noisy, 0.0).kind, ExemplarType::DeltaType);
        assert_eq!(classify(&noisy, 1e-9).kind, ExemplarType::Classical);
    }

    #[test]
    fn witness_examples() {
        let w = kolmogorov_oracle(&t(0.2, 0.3, 0.4)).unwrap();
        assert_eq!(
            w,
            KolmogorovWitness {
                p11: 0.1,
                p10: 0.1,
                p01: 0.2,
                p00: 0.6
            }
        );
        let w = kolmogorov_oracle(&t(1.0, 1.0, 1.0)).unwrap();
        assert_eq!((w.p11, w.p10, w.p01, w.p00), (1.0, 0.0, 0.0, 0.0));
    }

    #[test]
    fn letters_round_trip() {
        for ty in ExemplarType::ALL {
            assert_eq!(ty.letter().to_string().parse::<ExemplarType>().unwrap(), ty);
        }
    }

    proptest! {
        #[test]
        fn violations_are_exclusive(a in 0.0..=1.0f64, b in 0.0..=1.0f64, or in 0.0..=1.0f64) {
            let tr = t(a, b, or);
            prop_assert!(!(delta_d(&tr) > 0.0 && k_d(&tr) < 0.0));
        }

        #[test]
        fn oracle_matches_inequalities(a in 0.0..=1.0f64, b in 0.0..=1.0f64, or in 0.0..=1.0f64) {
            let tr = t(a, b, or);
            let classical = classify(&tr, 0.0).kind == ExemplarType::Classical;
            prop_assert_eq!(kolmogorov_oracle(&tr).is_some(), classical);
        }

        #[test]
        fn witness_reproduces_triple(a in 0.0..=1.0f64, b in 0.0..=1.0f64, or in 0.0..=1.0f64) {
            if let Some(w) = kolmogorov_oracle(&t(a, b, or)) {
                prop_assert!((w.mu_a() - a).abs() <= 1e-12);
                prop_assert!((w.mu_b() - b).abs() <= 1e-12);
                prop_assert!((w.mu_or() - or).abs() <= 1e-12);
                prop_assert!((w.total() - 1.0).abs() <= 1e-12);
            }
        }
    }
}
