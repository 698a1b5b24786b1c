//! RSSI multilateration engine with a deterministic indoor-testbed
//! simulator.
//!
//! The engine estimates where a mobile node is from the signal strengths of
//! fixed anchors in three stages: a calibration stage fits the path-loss
//! exponent of the medium from scans at known positions, an estimation
//! stage inverts each reading into a range against the calibration
//! references, and a coordinates stage intersects anchor-range circles
//! pairwise and averages the selected intersection points. The bundled
//! simulator emulates a floor of fixed anchors with a log-distance channel
//! (Gaussian shadowing plus reading dropout) so the whole pipeline can be
//! exercised and evaluated without hardware, with exact ground truth.
//!
//! Distances are in centimeters and powers in dBm throughout.
//!
//! ```
//! use lateration::calibration::{calibrate_at, merge_calibrations, AnchorId, AnchorMap};
//! use lateration::estimator::{locate, EstimatorConfig};
//! use lateration::geometry::Point2D;
//! use lateration::pathloss::PowerDbm;
//! use lateration::simulator::{simulate_scan, ChannelModel, TestbedConfig};
//!
//! let mut anchors = AnchorMap::new();
//! anchors.insert(AnchorId::new("ap00"), Point2D::new(0.0, 0.0));
//! anchors.insert(AnchorId::new("ap01"), Point2D::new(600.0, 0.0));
//! anchors.insert(AnchorId::new("ap02"), Point2D::new(0.0, 900.0));
//! anchors.insert(AnchorId::new("ap03"), Point2D::new(700.0, 800.0));
//! let testbed = TestbedConfig::new(
//!     anchors.clone(),
//!     Point2D::new(-100.0, -100.0),
//!     Point2D::new(1000.0, 1000.0),
//! )?;
//! let channel = ChannelModel {
//!     shadow_sigma_db: 0.0,
//!     dropout_prob: 0.0,
//!     rssi_floor: PowerDbm(-200.0),
//!     ..ChannelModel::default()
//! };
//!
//! // Calibrate at a known position, then locate an unknown one.
//! let known = Point2D::new(50.0, 120.0);
//! let scan = simulate_scan(known, &testbed, &channel, 0)?;
//! let db = merge_calibrations(&[calibrate_at(known, &scan, &anchors, 4)?])?;
//!
//! let truth = Point2D::new(300.0, 400.0);
//! let scan = simulate_scan(truth, &testbed, &channel, 1)?;
//! let estimate = locate(&scan, &db, &anchors, &EstimatorConfig::default())?;
//! assert!(estimate.position.distance_to(truth) < 1e-6);
//! # Ok::<(), Box<dyn std::error::Error>>(())
//! ```

pub mod calibration;
pub mod cli;
pub mod estimator;
pub mod geometry;
pub mod pathloss;
pub mod report;
pub mod rng;
pub mod simulator;

mod fsio;

pub use calibration::{AnchorId, AnchorMap, CalibrationDatabase, CalibrationEntry};
pub use estimator::{EstimatorConfig, PositionEstimate};
pub use geometry::{Circle, IntersectionOutcome, Point2D};
pub use pathloss::{DistanceCm, PathLossExponent, PowerDbm};
pub use report::{EvaluationReport, ScanRecord};
pub use simulator::{ChannelModel, TestbedConfig, Trajectory};
