//! Online position estimation: strongest-anchor selection, per-anchor range
//! estimation against the calibration database, and pairwise
//! circle-intersection lateration.
//!
//! For a scan the `n` strongest known anchors are chosen, each reading is
//! inverted into a range estimate averaged over every reference entry, and
//! all anchor pairs contribute one candidate point. The estimate is the
//! centroid of those points; every intermediate quantity is kept on the
//! result for error attribution.

use std::fmt;

use crate::calibration::{AnchorId, AnchorMap, CalibrationDatabase};
use crate::geometry::{
    centroid, circle_intersection, select_candidate_ranged, Circle, GeometryError, Point2D,
};
use crate::pathloss::{aggregate_distance, distance_from_power, DistanceCm, PowerDbm};
use crate::report::ScanRecord;

/// The single candidate tie-break rule: smaller y, then smaller x.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub enum TieBreakPolicy {
    #[default]
    LowerYThenLowerX,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct EstimatorConfig {
    /// Anchors used per scan (the strongest `n`).
    pub n: usize,
    /// Minimum usable anchor pairs required to produce an estimate.
    pub min_pairs: usize,
    pub tie_break: TieBreakPolicy,
}

impl Default for EstimatorConfig {
    fn default() -> Self {
        Self {
            n: 4,
            min_pairs: 1,
            tie_break: TieBreakPolicy::default(),
        }
    }
}

impl EstimatorConfig {
    pub fn with_n(n: usize) -> Self {
        Self {
            n,
            ..Self::default()
        }
    }
}

/// An anchor with an estimated range, ready for lateration.
#[derive(Debug, Clone, PartialEq)]
pub struct Target {
    pub anchor: AnchorId,
    pub position: Point2D,
    pub radius: DistanceCm,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum PairSkipReason {
    /// Both anchors of the pair sit at the same position.
    CoincidentCenters,
}

impl fmt::Display for PairSkipReason {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            PairSkipReason::CoincidentCenters => write!(f, "coincident centers"),
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct SkippedPair {
    pub anchors: (AnchorId, AnchorId),
    pub reason: PairSkipReason,
}

/// An estimated position with full per-pair diagnostics.
#[derive(Debug, Clone, PartialEq)]
pub struct PositionEstimate {
    pub position: Point2D,
    /// One selected point per usable anchor pair, in pair order.
    pub per_pair_points: Vec<((AnchorId, AnchorId), Point2D)>,
    /// The anchors that entered lateration with their estimated ranges.
    pub used_anchors: Vec<(AnchorId, DistanceCm)>,
    pub skipped_pairs: Vec<SkippedPair>,
    /// Scan readings dropped because the anchor is not in the anchor map.
    pub ignored_readings: usize,
}

#[derive(Debug, Clone, PartialEq)]
pub enum EstimateError {
    /// The calibration database has no reference entries.
    EmptyDatabase,
    /// The database exponent estimate is not positive.
    NonPositiveAlpha,
    /// Fewer than two targets to laterate from.
    TooFewTargets { found: usize },
    /// Usable pairs fell below the configured minimum.
    TooFewUsablePairs { usable: usize, required: usize },
}

impl fmt::Display for EstimateError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            EstimateError::EmptyDatabase => write!(f, "calibration database is empty"),
            EstimateError::NonPositiveAlpha => {
                write!(f, "calibration database alpha_hat is not positive")
            }
            EstimateError::TooFewTargets { found } => {
                write!(f, "need at least 2 targets, found {found}")
            }
            EstimateError::TooFewUsablePairs { usable, required } => {
                write!(f, "only {usable} usable anchor pairs, need {required}")
            }
        }
    }
}

impl std::error::Error for EstimateError {}

/// Picks the `n` strongest readings among anchors present in both the scan
/// and the anchor map, sorted by descending power with ties broken by
/// ascending id. Returns the selection and the count of ignored readings.
pub fn select_top_n(
    scan: &ScanRecord,
    anchors: &AnchorMap,
    n: usize,
) -> (Vec<(AnchorId, PowerDbm)>, usize) {
    let mut known: Vec<(AnchorId, PowerDbm)> = Vec::new();
    let mut ignored = 0;
    for (id, power) in &scan.readings {
        if anchors.contains(id) {
            known.push((id.clone(), *power));
        } else {
            ignored += 1;
        }
    }
    known.sort_by(|a, b| b.1 .0.total_cmp(&a.1 .0).then_with(|| a.0.cmp(&b.0)));
    known.truncate(n);
    (known, ignored)
}

/// Estimates the range behind one received power: inverts the reading
/// against every reference entry, then averages.
pub fn estimate_anchor_distance(
    p_k: PowerDbm,
    db: &CalibrationDatabase,
) -> Result<DistanceCm, EstimateError> {
    if db.entries.is_empty() {
        return Err(EstimateError::EmptyDatabase);
    }
    if db.alpha_hat.0 <= 0.0 {
        return Err(EstimateError::NonPositiveAlpha);
    }
    let mut estimates = Vec::with_capacity(db.entries.len());
    for entry in &db.entries {
        let d = distance_from_power(p_k, entry.power, entry.distance, db.alpha_hat)
            .expect("entry invariants guarantee positive distance and alpha");
        estimates.push(d);
    }
    Ok(aggregate_distance(&estimates).expect("entries are non-empty"))
}

/// Laterates a position from ranged targets.
///
/// Each unordered pair of targets contributes the circle-intersection
/// candidate most consistent with the remaining targets' estimated ranges;
/// the estimate is the centroid of those points in pair order. Pairs with
/// coincident centers are skipped and reported.
pub fn multilaterate(
    targets: &[Target],
    config: &EstimatorConfig,
) -> Result<PositionEstimate, EstimateError> {
    if targets.len() < 2 {
        return Err(EstimateError::TooFewTargets {
            found: targets.len(),
        });
    }

    let mut points = Vec::new();
    let mut skipped = Vec::new();
    for i in 0..targets.len() {
        for j in (i + 1)..targets.len() {
            let a = Circle::new(targets[i].position, targets[i].radius.0);
            let b = Circle::new(targets[j].position, targets[j].radius.0);
            let pair = (targets[i].anchor.clone(), targets[j].anchor.clone());
            match circle_intersection(a, b) {
                Ok(outcome) => {
                    let others: Vec<(Point2D, f64)> = targets
                        .iter()
                        .enumerate()
                        .filter(|(k, _)| *k != i && *k != j)
                        .map(|(_, t)| (t.position, t.radius.0))
                        .collect();
                    points.push((pair, select_candidate_ranged(&outcome, &others)));
                }
                Err(GeometryError::CoincidentCenters) => skipped.push(SkippedPair {
                    anchors: pair,
                    reason: PairSkipReason::CoincidentCenters,
                }),
                Err(other) => unreachable!("circle intersection cannot fail with {other}"),
            }
        }
    }

    let required = config.min_pairs.max(1);
    if points.len() < required {
        return Err(EstimateError::TooFewUsablePairs {
            usable: points.len(),
            required,
        });
    }

    let coords: Vec<Point2D> = points.iter().map(|(_, p)| *p).collect();
    let position = centroid(&coords).expect("at least one pair point");
    Ok(PositionEstimate {
        position,
        per_pair_points: points,
        used_anchors: targets
            .iter()
            .map(|t| (t.anchor.clone(), t.radius))
            .collect(),
        skipped_pairs: skipped,
        ignored_readings: 0,
    })
}

/// Full pipeline for one scan: select the strongest anchors, estimate a
/// range to each, laterate.
pub fn locate(
    scan: &ScanRecord,
    db: &CalibrationDatabase,
    anchors: &AnchorMap,
    config: &EstimatorConfig,
) -> Result<PositionEstimate, EstimateError> {
    if db.entries.is_empty() {
        return Err(EstimateError::EmptyDatabase);
    }
    let (selected, ignored) = select_top_n(scan, anchors, config.n);
    let mut targets = Vec::with_capacity(selected.len());
    for (id, power) in selected {
        let radius = estimate_anchor_distance(power, db)?;
        let position = anchors.get(&id).expect("selection filtered by anchor map");
        targets.push(Target {
            anchor: id,
            position,
            radius,
        });
    }
    let mut estimate = multilaterate(&targets, config)?;
    estimate.ignored_readings = ignored;
    Ok(estimate)
}
