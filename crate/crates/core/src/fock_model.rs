//! Two-sector Fock-space model of disjunction membership.
//!
//! ```text
//! μ(A or B) = m²·(μA + μB − μA·μB) + n²·((μA + μB)/2 + √(1−μA)·√(1−μB)·cos θ)
//! ```
//!
//! with `m² + n² = 1`. The first term is the sector-2 (classical union)
//! contribution, the second the sector-1 average plus interference.
//!
//! One equation fixes two unknowns, so fitting needs a selection rule; see
//! [`FitStrategy`].

use std::f64::consts::PI;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::dataset::MembershipTriple;

/// Slack applied when testing membership of the attainable interval.
const INTERVAL_EPS: f64 = 1e-12;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum FitError {
    #[error("μ(A or B) = {mu_or} lies outside the attainable interval [{mu_min}, {mu_max}]")]
    NotRepresentable { mu_or: f64, mu_min: f64, mu_max: f64 },
    #[error(
        "interference vanishes (a weight equals 1); the fixed parameters only reach {attainable}, not {mu_or}"
    )]
    DegenerateInterference { mu_or: f64, attainable: f64 },
    #[error("invalid parameter: {0}")]
    InvalidParameter(String),
}

/// Sector-1 interference term `√(1−μA)·√(1−μB)·cos θ`.
pub fn interference_term(mu_a: f64, mu_b: f64, theta: f64) -> f64 {
    interference_magnitude(mu_a, mu_b) * theta.cos()
}

fn interference_magnitude(mu_a: f64, mu_b: f64) -> f64 {
    (1.0 - mu_a).max(0.0).sqrt() * (1.0 - mu_b).max(0.0).sqrt()
}

fn classical_union(mu_a: f64, mu_b: f64) -> f64 {
    mu_a + mu_b - mu_a * mu_b
}

/// Model value of `μ(A or B)` for sector-2 weight `m2` and angle `theta`.
pub fn predict_disjunction(mu_a: f64, mu_b: f64, m2: f64, theta: f64) -> f64 {
    let sector1 = (mu_a + mu_b) / 2.0 + interference_term(mu_a, mu_b, theta);
    m2 * classical_union(mu_a, mu_b) + (1.0 - m2) * sector1
}

/// The range of `μ(A or B)` the model reaches for fixed `μA, μB`.
///
/// The prediction is affine in `m2` and in `cos θ`, so its extremes sit at
/// the corners: `X` (pure sector 2) or `Y ± Z` (pure sector 1, θ ∈ {0, π}).
/// `mu_min` can be negative when both weights are small; use
/// [`FeasibleRegion::clamped`] for the part inside `[0, 1]`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct FeasibleRegion {
    /// `X = μA + μB − μA·μB`
    pub sector2_value: f64,
    /// `Y = (μA + μB)/2`
    pub sector1_center: f64,
    /// `Z = √(1−μA)·√(1−μB)`
    pub sector1_halfwidth: f64,
    pub mu_min: f64,
    pub mu_max: f64,
}

impl FeasibleRegion {
    pub fn contains(&self, mu_or: f64) -> bool {
        mu_or >= self.mu_min - INTERVAL_EPS && mu_or <= self.mu_max + INTERVAL_EPS
    }

    /// Attainable interval intersected with `[0, 1]`.
    pub fn clamped(&self) -> (f64, f64) {
        (self.mu_min.clamp(0.0, 1.0), self.mu_max.clamp(0.0, 1.0))
    }
}

pub fn feasible_region(mu_a: f64, mu_b: f64) -> FeasibleRegion {
    let x = classical_union(mu_a, mu_b);
    let y = (mu_a + mu_b) / 2.0;
    let z = interference_magnitude(mu_a, mu_b);
    FeasibleRegion {
        sector2_value: x,
        sector1_center: y,
        sector1_halfwidth: z,
        mu_min: x.min(y - z),
        mu_max: x.max(y + z),
    }
}

/// How to pick one solution of the underdetermined model equation.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub enum FitStrategy {
    /// Smallest sector-2 weight; pure interference whenever that suffices.
    MinSector2,
    /// Angle fixed (radians, in `[0, π]`); solve for `m2`.
    FixedTheta(f64),
    /// Sector-2 weight fixed; solve for the angle.
    FixedM2(f64),
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct FockFit {
    pub m2: f64,
    pub n2: f64,
    /// Radians in `[0, π]`. Reported as 0 when it is unidentifiable.
    pub theta: f64,
    pub residual: f64,
}

impl FockFit {
    fn new(t: &MembershipTriple, m2: f64, theta: f64) -> Self {
        let m2 = m2.clamp(0.0, 1.0);
        let predicted = predict_disjunction(t.mu_a, t.mu_b, m2, theta);
        Self {
            m2,
            n2: 1.0 - m2,
            theta,
            residual: (predicted - t.mu_or).abs(),
        }
    }

    pub fn theta_degrees(&self) -> f64 {
        self.theta.to_degrees()
    }
}

fn acos_clamped(c: f64) -> f64 {
    c.clamp(-1.0, 1.0).acos()
}

/// Fits `(m2, θ)` to a triple.
pub fn fit(t: &MembershipTriple, strategy: FitStrategy) -> Result<FockFit, FitError> {
    let (a, b, target) = (t.mu_a, t.mu_b, t.mu_or);
    for (name, v) in [("mu_a", a), ("mu_b", b), ("mu_or", target)] {
        if !(0.0..=1.0).contains(&v) {
            return Err(FitError::InvalidParameter(format!("{name} = {v} outside [0, 1]")));
        }
    }
    let region = feasible_region(a, b);
    let x = region.sector2_value;
    let y = region.sector1_center;
    let z = region.sector1_halfwidth;
    let not_representable = || FitError::NotRepresentable {
        mu_or: target,
        mu_min: region.mu_min,
        mu_max: region.mu_max,
    };

    match strategy {
        FitStrategy::MinSector2 => {
            if !region.contains(target) {
                return Err(not_representable());
            }
            let fit = if z == 0.0 {
                // Sector 1 collapses to the single value Y.
                let m2 = if (target - y).abs() <= INTERVAL_EPS {
                    0.0
                } else {
                    (target - y) / (x - y)
                };
                FockFit::new(t, m2, 0.0)
            } else if target > y + z {
                let top = y + z;
                FockFit::new(t, (target - top) / (x - top), 0.0)
            } else if target < y - z {
                let bottom = y - z;
                FockFit::new(t, (bottom - target) / (bottom - x), PI)
            } else {
                FockFit::new(t, 0.0, acos_clamped((target - y) / z))
            };
            Ok(fit)
        }
        FitStrategy::FixedTheta(theta) => {
            if !(0.0..=PI).contains(&theta) {
                return Err(FitError::InvalidParameter(format!(
                    "theta = {theta} rad outside [0, π]"
                )));
            }
            let theta = if z == 0.0 { 0.0 } else { theta };
            let sector1 = y + z * theta.cos();
            let m2 = if (x - sector1).abs() <= INTERVAL_EPS {
                if (target - x).abs() > INTERVAL_EPS {
                    return Err(not_representable());
                }
                0.0
            } else {
                (target - sector1) / (x - sector1)
            };
            if !(-INTERVAL_EPS..=1.0 + INTERVAL_EPS).contains(&m2) {
                return Err(not_representable());
            }
            Ok(FockFit::new(t, m2, theta))
        }
        FitStrategy::FixedM2(m2) => {
            if !(0.0..=1.0).contains(&m2) {
                return Err(FitError::InvalidParameter(format!("m2 = {m2} outside [0, 1]")));
            }
            let n2 = 1.0 - m2;
            if n2 == 0.0 || z == 0.0 {
                let attainable = m2 * x + n2 * y;
                if (attainable - target).abs() > INTERVAL_EPS {
                    return Err(if z == 0.0 {
                        FitError::DegenerateInterference {
                            mu_or: target,
                            attainable,
                        }
                    } else {
                        not_representable()
                    });
                }
                return Ok(FockFit::new(t, m2, 0.0));
            }
            let cos = ((target - m2 * x) / n2 - y) / z;
            if !(-1.0 - INTERVAL_EPS..=1.0 + INTERVAL_EPS).contains(&cos) {
                return Err(not_representable());
            }
            Ok(FockFit::new(t, m2, acos_clamped(cos)))
        }
    }
}

/// Re-evaluation of a quoted parameter set for one triple.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ParameterAudit {
    pub mu_a: f64,
    pub mu_b: f64,
    pub m2: f64,
    pub theta_deg: f64,
    pub claimed_mu_or: f64,
    pub computed_mu_or: f64,
    pub abs_discrepancy: f64,
    /// Angle that would reproduce `claimed_mu_or` at the same `m2`, if any.
    pub matching_theta_deg: Option<f64>,
}

pub fn audit_parameters(
    mu_a: f64,
    mu_b: f64,
    m2: f64,
    theta_deg: f64,
    claimed_mu_or: f64,
) -> ParameterAudit {
    let computed = predict_disjunction(mu_a, mu_b, m2, theta_deg.to_radians());
    let probe = MembershipTriple::weights(mu_a, mu_b, claimed_mu_or);
    ParameterAudit {
        mu_a,
        mu_b,
        m2,
        theta_deg,
        claimed_mu_or,
        computed_mu_or: computed,
        abs_discrepancy: (computed - claimed_mu_or).abs(),
        matching_theta_deg: fit(&probe, FitStrategy::FixedM2(m2))
            .ok()
            .map(|f| f.theta_degrees()),
    }
}

/// The Donkey / Pet / Farmyard Animal parameters as usually quoted:
/// `m² = 0.26`, `θ = 77.34°`, claimed `μ(A or B) = 0.7`.
pub fn audit_donkey_example() -> ParameterAudit {
    audit_parameters(0.5, 0.9, 0.26, 77.34, 0.7)
}

#[cfg(test)]
#[allow(clippy::excessive_precision)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;
    use proptest::prelude::*;
    use std::f64::consts::FRAC_PI_2;

    fn t(a: f64, b: f64, or: f64) -> MembershipTriple {
        MembershipTriple::weights(a, b, or)
    }

    #[test]
    fn interference_examples() {
        assert_abs_diff_eq!(interference_term(0.5, 0.9, FRAC_PI_2), 0.0, epsilon = 1e-16);
        assert_eq!(interference_term(1.0, 0.3, 0.4), 0.0);
        assert_eq!(interference_term(0.2, 1.0, PI), 0.0);
        // high-precision evaluation: √0.5·√0.1·cos(77.34°)
        assert_abs_diff_eq!(
            interference_term(0.5, 0.9, 77.34f64.to_radians()),
            0.049_006_806_020_199_435,
            epsilon = 1e-15
        );
    }

    #[test]
    fn predict_examples() {
        assert_abs_diff_eq!(predict_disjunction(0.5, 0.9, 1.0, 1.234), 0.95, epsilon = 1e-15);
        assert_abs_diff_eq!(predict_disjunction(0.5, 0.9, 0.0, FRAC_PI_2), 0.7, epsilon = 1e-15);
        assert_abs_diff_eq!(
            predict_disjunction(0.5, 0.9, 0.26, 77.34f64.to_radians()),
            0.801_265_036_454_947_58,
            epsilon = 1e-14
        );
    }

    #[test]
    fn region_examples() {
        let r = feasible_region(0.5, 0.9);
        assert_abs_diff_eq!(r.sector2_value, 0.95, epsilon = 1e-15);
        assert_abs_diff_eq!(r.sector1_center, 0.7, epsilon = 1e-15);
        assert_abs_diff_eq!(r.sector1_halfwidth, 0.223_606_797_749_978_97, epsilon = 1e-15);
        assert_abs_diff_eq!(r.mu_min, 0.476_393_202_250_021_03, epsilon = 1e-15);
        assert_abs_diff_eq!(r.mu_max, 0.95, epsilon = 1e-15);

        let r = feasible_region(1.0, 1.0);
        assert_eq!((r.sector2_value, r.sector1_center, r.sector1_halfwidth), (1.0, 1.0, 0.0));
        assert_eq!((r.mu_min, r.mu_max), (1.0, 1.0));

        let r = feasible_region(0.0, 0.0);
        assert_eq!((r.sector2_value, r.sector1_center, r.sector1_halfwidth), (0.0, 0.0, 1.0));
        // θ = 0 in pure sector 1 reaches Y + Z = 1
        assert_eq!((r.mu_min, r.mu_max), (-1.0, 1.0));
        assert_eq!(r.clamped(), (0.0, 1.0));
        assert_eq!(predict_disjunction(0.0, 0.0, 0.0, 0.0), 1.0);
    }

    #[test]
    fn donkey_min_sector2() {
        let f = fit(&t(0.5, 0.9, 0.7), FitStrategy::MinSector2).unwrap();
        assert_eq!(f.m2, 0.0);
        assert_eq!(f.n2, 1.0);
        assert_abs_diff_eq!(f.theta, FRAC_PI_2, epsilon = 1e-12);
        assert!(f.residual <= 1e-15);
    }

    #[test]
    fn outside_interval_not_representable() {
        // interval for (0.9, 0.9) is [0.8, 1.0]
        assert!(matches!(
            fit(&t(0.9, 0.9, 0.05), FitStrategy::MinSector2),
            Err(FitError::NotRepresentable { .. })
        ));
    }

    #[test]
    fn fixed_theta_half_pi() {
        let f = fit(&t(0.5, 0.9, 0.95), FitStrategy::FixedTheta(FRAC_PI_2)).unwrap();
        assert_abs_diff_eq!(f.m2, 1.0, epsilon = 1e-12);
        assert!(f.residual <= 1e-12);
    }

    #[test]
    fn fixed_m2_solves_angle() {
        let f = fit(&t(0.5, 0.9, 0.7), FitStrategy::FixedM2(0.26)).unwrap();
        assert!(f.residual <= 1e-12);
        assert_abs_diff_eq!(f.theta_degrees(), 113.130_253_739_223_16, epsilon = 1e-9);
    }

    #[test]
    fn sector2_needed_above_sector1_range() {
        // Y + Z = 0.7 + 0.2236 < 0.94 <= X = 0.95
        let f = fit(&t(0.5, 0.9, 0.94), FitStrategy::MinSector2).unwrap();
        assert!(f.m2 > 0.0);
        assert_eq!(f.theta, 0.0);
        assert!(f.residual <= 1e-12);
    }

    #[test]
    fn degenerate_interference() {
        // μA = 1 gives Z = 0; with m2 fixed the value is pinned to m2·1 + n2·Y.
        assert!(matches!(
            fit(&t(1.0, 0.4, 0.5), FitStrategy::FixedM2(0.5)),
            Err(FitError::DegenerateInterference { .. })
        ));
        let f = fit(&t(1.0, 0.4, 0.85), FitStrategy::MinSector2).unwrap();
        assert_eq!(f.theta, 0.0);
        assert!(f.residual <= 1e-12);
        let f = fit(&t(1.0, 1.0, 1.0), FitStrategy::MinSector2).unwrap();
        assert_eq!((f.m2, f.theta), (0.0, 0.0));
    }

    #[test]
    fn bad_parameters() {
        assert!(matches!(
            fit(&t(0.5, 0.5, 0.5), FitStrategy::FixedTheta(4.0)),
            Err(FitError::InvalidParameter(_))
        ));
        assert!(matches!(
            fit(&t(0.5, 0.5, 0.5), FitStrategy::FixedM2(-0.1)),
            Err(FitError::InvalidParameter(_))
        ));
    }

    #[test]
    fn donkey_audit_reports_discrepancy() {
        let audit = audit_donkey_example();
        assert_abs_diff_eq!(audit.computed_mu_or, 0.801_265_036_454_947_58, epsilon = 1e-14);
        assert_abs_diff_eq!(audit.abs_discrepancy, 0.101_265_036_454_947_58, epsilon = 1e-14);
        assert_abs_diff_eq!(audit.matching_theta_deg.unwrap(), 113.130_253_739_223_16, epsilon = 1e-9);
    }

    proptest! {
        #[test]
        fn fit_round_trips(a in 0.0..=1.0f64, b in 0.0..=1.0f64, or in 0.0..=1.0f64) {
            let tr = t(a, b, or);
            match fit(&tr, FitStrategy::MinSector2) {
                Ok(f) => {
                    prop_assert!(f.residual <= 1e-9);
                    prop_assert!((predict_disjunction(a, b, f.m2, f.theta) - or).abs() <= 1e-9);
                    prop_assert!((f.m2 + f.n2 - 1.0).abs() <= 1e-12);
                    prop_assert!((0.0..=PI).contains(&f.theta));
                }
                Err(FitError::NotRepresentable { .. }) => {
                    prop_assert!(!feasible_region(a, b).contains(or));
                }
                Err(e) => prop_assert!(false, "unexpected {e}"),
            }
        }

        #[test]
        fn prediction_within_region(a in 0.0..=1.0f64, b in 0.0..=1.0f64, m2 in 0.0..=1.0f64, theta in 0.0..=PI) {
            let r = feasible_region(a, b);
            let p = predict_disjunction(a, b, m2, theta);
            prop_assert!(p >= r.mu_min - 1e-12 && p <= r.mu_max + 1e-12);
        }

        #[test]
        fn decreasing_in_theta(a in 0.0..0.99f64, b in 0.0..0.99f64, m2 in 0.0..0.99f64, t1 in 0.0..=PI, t2 in 0.0..=PI) {
            prop_assume!((t1 - t2).abs() > 1e-3);
            let (lo, hi) = if t1 < t2 { (t1, t2) } else { (t2, t1) };
            prop_assert!(predict_disjunction(a, b, m2, lo) > predict_disjunction(a, b, m2, hi));
        }

        #[test]
        fn pure_sector2_is_classical_union(a in 0.0..=1.0f64, b in 0.0..=1.0f64, theta in 0.0..=PI) {
            prop_assert_eq!(predict_disjunction(a, b, 1.0, theta), a + b - a * b);
        }
    }
}
