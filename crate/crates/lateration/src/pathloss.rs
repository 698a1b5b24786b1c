//! Log-distance path-loss arithmetic.
//!
//! Received power decays linearly in log-distance: moving from `r_i` to
//! `r_j` costs `10·α·log₁₀(r_j/r_i)` dB, where `α` is the path-loss
//! exponent of the medium (~2 in free space, higher indoors). This module
//! estimates `α` from pairs of reference measurements, inverts a received
//! power back into a distance against a reference, and provides the forward
//! model the simulator drives.
//!
//! Distances are in centimeters, powers in dBm, throughout.

use std::fmt;

/// Distances whose log₁₀ ratio is below this count as equal.
pub const EQUAL_DISTANCE_LOG_EPS: f64 = 1e-9;

/// Received signal power in dBm.
#[derive(Debug, Clone, Copy, PartialEq, PartialOrd)]
pub struct PowerDbm(pub f64);

/// A distance in centimeters, positive by contract.
#[derive(Debug, Clone, Copy, PartialEq, PartialOrd)]
pub struct DistanceCm(pub f64);

/// Dimensionless path-loss exponent α.
#[derive(Debug, Clone, Copy, PartialEq, PartialOrd)]
pub struct PathLossExponent(pub f64);

#[derive(Debug, Clone, PartialEq)]
pub enum PathLossError {
    /// Reference distances too close for the exponent quotient.
    EqualDistances,
    /// An aggregation received an empty list.
    EmptyInput,
    /// α must be > 0 to invert power into distance.
    NonPositiveAlpha,
    /// Distances must be > 0 in the log-distance model.
    NonPositiveDistance,
}

impl fmt::Display for PathLossError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            PathLossError::EqualDistances => {
                write!(f, "reference distances are equal; exponent is undefined")
            }
            PathLossError::EmptyInput => write!(f, "nothing to aggregate"),
            PathLossError::NonPositiveAlpha => write!(f, "path-loss exponent must be positive"),
            PathLossError::NonPositiveDistance => write!(f, "distance must be positive"),
        }
    }
}

impl std::error::Error for PathLossError {}

/// Path-loss exponent from two reference measurements:
/// `α = (P_i − P_j) / (10·log₁₀(r_j / r_i))`.
pub fn alpha_from_pair(
    p_i: PowerDbm,
    r_i: DistanceCm,
    p_j: PowerDbm,
    r_j: DistanceCm,
) -> Result<PathLossExponent, PathLossError> {
    if r_i.0 <= 0.0 || r_j.0 <= 0.0 {
        return Err(PathLossError::NonPositiveDistance);
    }
    let log_ratio = (r_j.0 / r_i.0).log10();
    if log_ratio.abs() <= EQUAL_DISTANCE_LOG_EPS {
        return Err(PathLossError::EqualDistances);
    }
    Ok(PathLossExponent((p_i.0 - p_j.0) / (10.0 * log_ratio)))
}

/// Arithmetic mean of per-pair exponent samples.
pub fn aggregate_alpha(alphas: &[PathLossExponent]) -> Result<PathLossExponent, PathLossError> {
    if alphas.is_empty() {
        return Err(PathLossError::EmptyInput);
    }
    let sum: f64 = alphas.iter().map(|a| a.0).sum();
    Ok(PathLossExponent(sum / alphas.len() as f64))
}

/// Retains only exponent samples inside `[min, max]`.
///
/// Noisy reference pairs can produce negative or implausibly large
/// exponents; callers may screen samples before aggregation. Off by
/// default in every pipeline.
pub fn filter_plausible_alphas(
    alphas: &[PathLossExponent],
    min: f64,
    max: f64,
) -> Vec<PathLossExponent> {
    alphas
        .iter()
        .copied()
        .filter(|a| a.0 >= min && a.0 <= max)
        .collect()
}

/// Distance behind a received power, against one reference measurement:
/// `r̂ = r_ref · 10^((P_ref − P_k) / (10·α̂))`.
pub fn distance_from_power(
    p_k: PowerDbm,
    ref_p: PowerDbm,
    ref_r: DistanceCm,
    alpha_hat: PathLossExponent,
) -> Result<DistanceCm, PathLossError> {
    if alpha_hat.0 <= 0.0 {
        return Err(PathLossError::NonPositiveAlpha);
    }
    if ref_r.0 <= 0.0 {
        return Err(PathLossError::NonPositiveDistance);
    }
    Ok(DistanceCm(
        ref_r.0 * 10f64.powf((ref_p.0 - p_k.0) / (10.0 * alpha_hat.0)),
    ))
}

/// Arithmetic mean of per-reference distance estimates.
pub fn aggregate_distance(estimates: &[DistanceCm]) -> Result<DistanceCm, PathLossError> {
    if estimates.is_empty() {
        return Err(PathLossError::EmptyInput);
    }
    let sum: f64 = estimates.iter().map(|d| d.0).sum();
    Ok(DistanceCm(sum / estimates.len() as f64))
}

/// Forward model: received power at distance `r` given a reference,
/// `P(r) = P_ref − 10·α·log₁₀(r / r_ref)`.
pub fn power_at_distance(
    ref_p: PowerDbm,
    ref_r: DistanceCm,
    r: DistanceCm,
    alpha: PathLossExponent,
) -> Result<PowerDbm, PathLossError> {
    if r.0 <= 0.0 || ref_r.0 <= 0.0 {
        return Err(PathLossError::NonPositiveDistance);
    }
    if alpha.0 <= 0.0 {
        return Err(PathLossError::NonPositiveAlpha);
    }
    Ok(PowerDbm(ref_p.0 - 10.0 * alpha.0 * (r.0 / ref_r.0).log10()))
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn exponent_from_decade_pairs() {
        let a = alpha_from_pair(
            PowerDbm(-40.0),
            DistanceCm(100.0),
            PowerDbm(-60.0),
            DistanceCm(1000.0),
        )
        .unwrap();
        assert!((a.0 - 2.0).abs() < 1e-12);

        let a = alpha_from_pair(
            PowerDbm(-40.0),
            DistanceCm(100.0),
            PowerDbm(-70.0),
            DistanceCm(1000.0),
        )
        .unwrap();
        assert!((a.0 - 3.0).abs() < 1e-12);
    }

    #[test]
    fn equal_distances_rejected() {
        let err = alpha_from_pair(
            PowerDbm(-40.0),
            DistanceCm(500.0),
            PowerDbm(-50.0),
            DistanceCm(500.0),
        )
        .unwrap_err();
        assert_eq!(err, PathLossError::EqualDistances);
    }

    #[test]
    fn alpha_aggregation_is_the_mean() {
        let mean = |xs: &[f64]| {
            aggregate_alpha(&xs.iter().map(|&x| PathLossExponent(x)).collect::<Vec<_>>())
                .unwrap()
                .0
        };
        assert_eq!(mean(&[2.0]), 2.0);
        assert_eq!(mean(&[2.0, 4.0]), 3.0);
        assert_eq!(mean(&[1.5, 2.5, 2.0]), 2.0);
        assert_eq!(aggregate_alpha(&[]), Err(PathLossError::EmptyInput));
    }

    #[test]
    fn distance_inversion_examples() {
        let d = |p_k: f64| {
            distance_from_power(
                PowerDbm(p_k),
                PowerDbm(-40.0),
                DistanceCm(100.0),
                PathLossExponent(2.0),
            )
            .unwrap()
            .0
        };
        assert!((d(-40.0) - 100.0).abs() < 1e-12);
        assert!((d(-60.0) - 1000.0).abs() < 1e-9);
        // 100·10^(−0.5), evaluated independently.
        assert!((d(-30.0) - 31.622776601683793).abs() < 1e-9);
    }

    #[test]
    fn distance_aggregation_is_the_mean() {
        let mean = |xs: &[f64]| {
            aggregate_distance(&xs.iter().map(|&x| DistanceCm(x)).collect::<Vec<_>>())
                .unwrap()
                .0
        };
        assert_eq!(mean(&[100.0]), 100.0);
        assert_eq!(mean(&[100.0, 300.0]), 200.0);
        assert_eq!(mean(&[50.0, 100.0, 150.0]), 100.0);
        assert_eq!(aggregate_distance(&[]), Err(PathLossError::EmptyInput));
    }

    #[test]
    fn forward_model_examples() {
        let p = |r: f64, alpha: f64| {
            power_at_distance(
                PowerDbm(-40.0),
                DistanceCm(100.0),
                DistanceCm(r),
                PathLossExponent(alpha),
            )
            .unwrap()
            .0
        };
        assert_eq!(p(100.0, 2.0), -40.0);
        assert!((p(1000.0, 2.0) - -60.0).abs() < 1e-12);
        // −40 − 30·log₁₀2, evaluated independently.
        assert!((p(200.0, 3.0) - -49.03089986991944).abs() < 1e-12);
    }

    #[test]
    fn guards_reject_bad_parameters() {
        assert_eq!(
            distance_from_power(
                PowerDbm(-50.0),
                PowerDbm(-40.0),
                DistanceCm(100.0),
                PathLossExponent(0.0)
            ),
            Err(PathLossError::NonPositiveAlpha)
        );
        assert_eq!(
            power_at_distance(
                PowerDbm(-40.0),
                DistanceCm(100.0),
                DistanceCm(0.0),
                PathLossExponent(2.0)
            ),
            Err(PathLossError::NonPositiveDistance)
        );
    }

    #[test]
    fn plausibility_filter_screens_outliers() {
        let samples: Vec<PathLossExponent> = [-0.5, 1.2, 2.4, 6.0, 17.0]
            .iter()
            .map(|&x| PathLossExponent(x))
            .collect();
        let kept = filter_plausible_alphas(&samples, 1.0, 6.0);
        assert_eq!(
            kept.iter().map(|a| a.0).collect::<Vec<_>>(),
            vec![1.2, 2.4, 6.0]
        );
    }

    proptest! {
        /// Inverting the forward model recovers the distance.
        #[test]
        fn roundtrip_recovers_distance(
            ref_p in -90.0f64..-20.0,
            ref_r in 1.0f64..10_000.0,
            r in 1.0f64..10_000.0,
            alpha in 0.5f64..6.0,
        ) {
            let p = power_at_distance(
                PowerDbm(ref_p), DistanceCm(ref_r), DistanceCm(r), PathLossExponent(alpha),
            ).unwrap();
            let back = distance_from_power(
                p, PowerDbm(ref_p), DistanceCm(ref_r), PathLossExponent(alpha),
            ).unwrap();
            prop_assert!((back.0 - r).abs() <= 1e-9 * r.max(1.0));
        }

        /// Powers generated with exponent α* hand back exactly α*.
        #[test]
        fn exponent_recovery(
            ref_p in -90.0f64..-20.0,
            r_i in 1.0f64..10_000.0,
            ratio in 1.01f64..100.0,
            alpha in 1.0f64..6.0,
        ) {
            let r_j = r_i * ratio;
            let a = PathLossExponent(alpha);
            let p_i = power_at_distance(PowerDbm(ref_p), DistanceCm(100.0), DistanceCm(r_i), a).unwrap();
            let p_j = power_at_distance(PowerDbm(ref_p), DistanceCm(100.0), DistanceCm(r_j), a).unwrap();
            let rec = alpha_from_pair(p_i, DistanceCm(r_i), p_j, DistanceCm(r_j)).unwrap();
            prop_assert!((rec.0 - alpha).abs() <= 1e-9 * alpha);
        }

        /// Swapping both measurement roles leaves the exponent unchanged.
        #[test]
        fn pair_order_is_irrelevant(
            p_i in -95.0f64..-30.0,
            p_j in -95.0f64..-30.0,
            r_i in 1.0f64..10_000.0,
            ratio in 1.01f64..100.0,
        ) {
            let r_j = r_i * ratio;
            let ab = alpha_from_pair(PowerDbm(p_i), DistanceCm(r_i), PowerDbm(p_j), DistanceCm(r_j)).unwrap();
            let ba = alpha_from_pair(PowerDbm(p_j), DistanceCm(r_j), PowerDbm(p_i), DistanceCm(r_i)).unwrap();
            prop_assert!((ab.0 - ba.0).abs() <= 1e-9 * ab.0.abs().max(1.0));
        }

        /// Stronger received power never maps to a larger distance.
        #[test]
        fn inversion_is_decreasing_in_power(
            ref_p in -90.0f64..-20.0,
            ref_r in 1.0f64..10_000.0,
            p_lo in -95.0f64..-31.0,
            step in 0.1f64..30.0,
            alpha in 0.5f64..6.0,
        ) {
            let p_hi = p_lo + step;
            let d_lo = distance_from_power(
                PowerDbm(p_lo), PowerDbm(ref_p), DistanceCm(ref_r), PathLossExponent(alpha),
            ).unwrap();
            let d_hi = distance_from_power(
                PowerDbm(p_hi), PowerDbm(ref_p), DistanceCm(ref_r), PathLossExponent(alpha),
            ).unwrap();
            prop_assert!(d_hi.0 < d_lo.0);
        }
    }
}
