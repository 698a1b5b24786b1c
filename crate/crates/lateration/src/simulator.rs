//! Deterministic testbed emulation: fixed anchors on a floor, a robot
//! sampled at waypoints, and a log-distance channel with Gaussian shadowing
//! and reading dropout.
//!
//! All randomness is counter-based and keyed by `(seed, draw index, anchor
//! id)`, so a scan is a pure function of its inputs: re-running a
//! configuration reproduces traces byte for byte, and adding or removing an
//! anchor never perturbs the draws of the others.

use std::fmt;
use std::path::Path;

use serde::Deserialize;

use crate::calibration::{AnchorId, AnchorMap};
use crate::geometry::{Point2D, COINCIDENT_CENTER_EPS_CM};
use crate::pathloss::{power_at_distance, DistanceCm, PathLossExponent, PowerDbm};
use crate::report::ScanRecord;
use crate::rng::Stream;

/// Seconds between consecutive scans in a trajectory run.
pub const SCAN_INTERVAL_S: f64 = 60.0;

const SHADOW_LANE: u64 = 0;
const DROPOUT_LANE: u64 = 1;

/// Anchor layout and floor bounds.
#[derive(Debug, Clone, PartialEq)]
pub struct TestbedConfig {
    anchors: AnchorMap,
    floor_min: Point2D,
    floor_max: Point2D,
}

impl TestbedConfig {
    /// Validates that the floor is non-degenerate, at least two anchors
    /// exist, and every anchor sits inside the floor.
    pub fn new(
        anchors: AnchorMap,
        floor_min: Point2D,
        floor_max: Point2D,
    ) -> Result<Self, SimulateError> {
        if !(floor_min.is_finite() && floor_max.is_finite())
            || floor_min.x >= floor_max.x
            || floor_min.y >= floor_max.y
        {
            return Err(SimulateError::InvalidTestbed(format!(
                "floor bounds {floor_min}..{floor_max} are degenerate"
            )));
        }
        if anchors.len() < 2 {
            return Err(SimulateError::InvalidTestbed(format!(
                "need at least 2 anchors, got {}",
                anchors.len()
            )));
        }
        let config = Self {
            anchors,
            floor_min,
            floor_max,
        };
        for (id, pos) in config.anchors.iter() {
            if !config.contains(*pos) {
                return Err(SimulateError::InvalidTestbed(format!(
                    "anchor {id} at {pos} is outside the floor"
                )));
            }
        }
        Ok(config)
    }

    pub fn anchors(&self) -> &AnchorMap {
        &self.anchors
    }

    pub fn floor_min(&self) -> Point2D {
        self.floor_min
    }

    pub fn floor_max(&self) -> Point2D {
        self.floor_max
    }

    pub fn contains(&self, p: Point2D) -> bool {
        p.is_finite()
            && p.x >= self.floor_min.x
            && p.x <= self.floor_max.x
            && p.y >= self.floor_min.y
            && p.y <= self.floor_max.y
    }
}

/// Log-distance channel with shadowing, dropout, and a sensitivity floor.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ChannelModel {
    pub alpha_true: PathLossExponent,
    pub ref_power: PowerDbm,
    pub ref_distance: DistanceCm,
    pub shadow_sigma_db: f64,
    pub dropout_prob: f64,
    pub rssi_floor: PowerDbm,
    pub seed: u64,
}

impl Default for ChannelModel {
    /// Plausible indoor defaults; not measured values.
    fn default() -> Self {
        Self {
            alpha_true: PathLossExponent(2.4),
            ref_power: PowerDbm(-40.0),
            ref_distance: DistanceCm(100.0),
            shadow_sigma_db: 3.0,
            dropout_prob: 0.05,
            rssi_floor: PowerDbm(-95.0),
            seed: 1,
        }
    }
}

impl ChannelModel {
    pub fn validate(&self) -> Result<(), SimulateError> {
        if self.alpha_true.0 <= 0.0 || !self.alpha_true.0.is_finite() {
            return Err(SimulateError::InvalidChannel(
                "alpha_true must be positive".into(),
            ));
        }
        if self.ref_distance.0 <= 0.0 {
            return Err(SimulateError::InvalidChannel(
                "ref_distance must be positive".into(),
            ));
        }
        if self.shadow_sigma_db < 0.0 || !self.shadow_sigma_db.is_finite() {
            return Err(SimulateError::InvalidChannel(
                "shadow_sigma_db must be >= 0".into(),
            ));
        }
        if !(0.0..=1.0).contains(&self.dropout_prob) {
            return Err(SimulateError::InvalidChannel(
                "dropout_prob must be in [0, 1]".into(),
            ));
        }
        if !self.ref_power.0.is_finite() || !self.rssi_floor.0.is_finite() {
            return Err(SimulateError::InvalidChannel(
                "powers must be finite".into(),
            ));
        }
        Ok(())
    }

    /// One-line summary for self-describing output headers.
    pub fn describe(&self) -> String {
        format!(
            "channel: alpha={} ref={}dBm@{}cm sigma={}dB dropout={} floor={}dBm seed={}",
            self.alpha_true.0,
            self.ref_power.0,
            self.ref_distance.0,
            self.shadow_sigma_db,
            self.dropout_prob,
            self.rssi_floor.0,
            self.seed
        )
    }
}

/// Waypoints the robot is sampled at, in order.
#[derive(Debug, Clone, PartialEq)]
pub struct Trajectory {
    pub waypoints: Vec<Point2D>,
    pub scans_per_waypoint: usize,
}

/// Simulated scans paired with the exact position they were taken at.
#[derive(Debug, Clone, PartialEq)]
pub struct GroundTruthTrace {
    pub records: Vec<(ScanRecord, Point2D)>,
}

impl GroundTruthTrace {
    pub fn scans(&self) -> Vec<ScanRecord> {
        self.records.iter().map(|(s, _)| s.clone()).collect()
    }

    pub fn ground_truth(&self) -> Vec<(f64, Point2D)> {
        self.records
            .iter()
            .map(|(s, p)| (s.timestamp_s, *p))
            .collect()
    }
}

#[derive(Debug, Clone, PartialEq)]
pub enum SimulateError {
    PositionOutOfBounds { position: Point2D },
    PositionOnAnchor { anchor: AnchorId },
    InvalidTestbed(String),
    InvalidChannel(String),
    InvalidTrajectory(String),
    MalformedConfig(String),
    Io(String),
}

impl fmt::Display for SimulateError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            SimulateError::PositionOutOfBounds { position } => {
                write!(f, "position {position} is outside the floor bounds")
            }
            SimulateError::PositionOnAnchor { anchor } => {
                write!(f, "position coincides with anchor {anchor}")
            }
            SimulateError::InvalidTestbed(msg) => write!(f, "invalid testbed: {msg}"),
            SimulateError::InvalidChannel(msg) => write!(f, "invalid channel: {msg}"),
            SimulateError::InvalidTrajectory(msg) => write!(f, "invalid trajectory: {msg}"),
            SimulateError::MalformedConfig(msg) => write!(f, "malformed config: {msg}"),
            SimulateError::Io(msg) => write!(f, "config i/o failed: {msg}"),
        }
    }
}

impl std::error::Error for SimulateError {}

/// Simulates one scan at `position`.
///
/// Per anchor, the noiseless log-distance power picks up one Gaussian
/// shadowing term; the reading is omitted with `dropout_prob` or when it
/// falls below the sensitivity floor. The scan's timestamp is
/// `SCAN_INTERVAL_S * draw_index`.
pub fn simulate_scan(
    position: Point2D,
    testbed: &TestbedConfig,
    channel: &ChannelModel,
    draw_index: u64,
) -> Result<ScanRecord, SimulateError> {
    channel.validate()?;
    if !testbed.contains(position) {
        return Err(SimulateError::PositionOutOfBounds { position });
    }
    for (id, pos) in testbed.anchors.iter() {
        if position.distance_to(*pos) <= COINCIDENT_CENTER_EPS_CM {
            return Err(SimulateError::PositionOnAnchor { anchor: id.clone() });
        }
    }

    let draw_stream = Stream::new(channel.seed).derive(draw_index);
    let mut scan = ScanRecord::new(SCAN_INTERVAL_S * draw_index as f64);
    for (id, anchor_pos) in testbed.anchors.iter() {
        let anchor_stream = draw_stream.derive_str(id.as_str());

        let dropped = anchor_stream
            .derive(DROPOUT_LANE)
            .next_bool(channel.dropout_prob);
        if dropped {
            continue;
        }

        let distance = DistanceCm(position.distance_to(*anchor_pos));
        let mean = power_at_distance(
            channel.ref_power,
            channel.ref_distance,
            distance,
            channel.alpha_true,
        )
        .expect("validated channel and positive distance");
        let shadow = if channel.shadow_sigma_db > 0.0 {
            channel.shadow_sigma_db * anchor_stream.derive(SHADOW_LANE).next_gaussian()
        } else {
            0.0
        };
        let power = PowerDbm(mean.0 + shadow);
        if power.0 >= channel.rssi_floor.0 {
            scan.set_reading(id.clone(), power);
        }
    }
    Ok(scan)
}

/// Runs a trajectory: `scans_per_waypoint` scans at each waypoint, with a
/// globally increasing draw index and timestamps at fixed intervals.
pub fn run_trajectory(
    trajectory: &Trajectory,
    testbed: &TestbedConfig,
    channel: &ChannelModel,
) -> Result<GroundTruthTrace, SimulateError> {
    if trajectory.waypoints.is_empty() {
        return Err(SimulateError::InvalidTrajectory("no waypoints".into()));
    }
    if trajectory.scans_per_waypoint == 0 {
        return Err(SimulateError::InvalidTrajectory(
            "scans_per_waypoint must be at least 1".into(),
        ));
    }
    let mut records =
        Vec::with_capacity(trajectory.waypoints.len() * trajectory.scans_per_waypoint);
    let mut draw_index = 0u64;
    for waypoint in &trajectory.waypoints {
        for _ in 0..trajectory.scans_per_waypoint {
            let scan = simulate_scan(*waypoint, testbed, channel, draw_index)?;
            records.push((scan, *waypoint));
            draw_index += 1;
        }
    }
    Ok(GroundTruthTrace { records })
}

// ---------------------------------------------------------------------------
// Simulation config file (TOML)
// ---------------------------------------------------------------------------

#[derive(Debug, Clone, PartialEq)]
pub struct SimulationConfig {
    pub testbed: TestbedConfig,
    pub channel: ChannelModel,
    pub trajectory: Trajectory,
}

#[derive(Deserialize)]
struct RawConfig {
    version: u32,
    testbed: RawTestbed,
    #[serde(default)]
    channel: RawChannel,
    trajectory: RawTrajectory,
}

#[derive(Deserialize)]
struct RawTestbed {
    floor_min_cm: [f64; 2],
    floor_max_cm: [f64; 2],
    anchors: Vec<RawAnchor>,
}

#[derive(Deserialize)]
struct RawAnchor {
    id: String,
    x_cm: f64,
    y_cm: f64,
}

#[derive(Deserialize)]
#[serde(default)]
struct RawChannel {
    alpha_true: f64,
    ref_power_dbm: f64,
    ref_distance_cm: f64,
    shadow_sigma_db: f64,
    dropout_prob: f64,
    rssi_floor_dbm: f64,
    seed: u64,
}

impl Default for RawChannel {
    fn default() -> Self {
        let c = ChannelModel::default();
        Self {
            alpha_true: c.alpha_true.0,
            ref_power_dbm: c.ref_power.0,
            ref_distance_cm: c.ref_distance.0,
            shadow_sigma_db: c.shadow_sigma_db,
            dropout_prob: c.dropout_prob,
            rssi_floor_dbm: c.rssi_floor.0,
            seed: c.seed,
        }
    }
}

#[derive(Deserialize)]
struct RawTrajectory {
    #[serde(default = "one")]
    scans_per_waypoint: usize,
    waypoints_cm: Vec<[f64; 2]>,
}

fn one() -> usize {
    1
}

/// Parses and validates the TOML simulation config.
pub fn parse_config(text: &str) -> Result<SimulationConfig, SimulateError> {
    let raw: RawConfig =
        toml::from_str(text).map_err(|e| SimulateError::MalformedConfig(e.to_string()))?;
    if raw.version != 1 {
        return Err(SimulateError::MalformedConfig(format!(
            "unsupported config version {}",
            raw.version
        )));
    }

    let mut anchors = AnchorMap::new();
    for a in &raw.testbed.anchors {
        if a.id.is_empty() || a.id.contains(',') || a.id.starts_with('#') {
            return Err(SimulateError::MalformedConfig(format!(
                "anchor id '{}' is empty or contains reserved characters",
                a.id
            )));
        }
        if !(a.x_cm.is_finite() && a.y_cm.is_finite()) {
            return Err(SimulateError::MalformedConfig(format!(
                "anchor {} has non-finite coordinates",
                a.id
            )));
        }
        if anchors
            .insert(AnchorId::new(a.id.clone()), Point2D::new(a.x_cm, a.y_cm))
            .is_some()
        {
            return Err(SimulateError::MalformedConfig(format!(
                "duplicate anchor id '{}'",
                a.id
            )));
        }
    }
    let testbed = TestbedConfig::new(
        anchors,
        Point2D::new(raw.testbed.floor_min_cm[0], raw.testbed.floor_min_cm[1]),
        Point2D::new(raw.testbed.floor_max_cm[0], raw.testbed.floor_max_cm[1]),
    )?;

    let channel = ChannelModel {
        alpha_true: PathLossExponent(raw.channel.alpha_true),
        ref_power: PowerDbm(raw.channel.ref_power_dbm),
        ref_distance: DistanceCm(raw.channel.ref_distance_cm),
        shadow_sigma_db: raw.channel.shadow_sigma_db,
        dropout_prob: raw.channel.dropout_prob,
        rssi_floor: PowerDbm(raw.channel.rssi_floor_dbm),
        seed: raw.channel.seed,
    };
    channel.validate()?;

    let waypoints: Vec<Point2D> = raw
        .trajectory
        .waypoints_cm
        .iter()
        .map(|w| Point2D::new(w[0], w[1]))
        .collect();
    for w in &waypoints {
        if !testbed.contains(*w) {
            return Err(SimulateError::InvalidTrajectory(format!(
                "waypoint {w} is outside the floor"
            )));
        }
    }
    if waypoints.is_empty() {
        return Err(SimulateError::InvalidTrajectory("no waypoints".into()));
    }
    if raw.trajectory.scans_per_waypoint == 0 {
        return Err(SimulateError::InvalidTrajectory(
            "scans_per_waypoint must be at least 1".into(),
        ));
    }

    Ok(SimulationConfig {
        testbed,
        channel,
        trajectory: Trajectory {
            waypoints,
            scans_per_waypoint: raw.trajectory.scans_per_waypoint,
        },
    })
}

/// Loads a simulation config from disk.
pub fn load_config(path: &Path) -> Result<SimulationConfig, SimulateError> {
    let text = std::fs::read_to_string(path).map_err(|e| SimulateError::Io(e.to_string()))?;
    parse_config(&text)
}
