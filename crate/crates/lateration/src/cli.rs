//! Command-line front end: calibrate, locate, simulate, evaluate, and
//! render-map over the text file formats.
//!
//! Exit codes: 0 success, 1 usage, 2 malformed input, 3 estimation failure,
//! 4 i/o failure. Failures print one line to stderr starting with
//! `error: <category>:`. Identical invocations over identical inputs
//! produce byte-identical outputs.

use std::fmt;
use std::path::{Path, PathBuf};

use clap::{Parser, Subcommand};

use crate::calibration::{
    calibrate_at, load_database, merge_calibrations, write_database, CalibrationBatch,
    CalibrationError, DatabaseError,
};
use crate::estimator::{locate, EstimateError, EstimatorConfig};
use crate::fsio;
use crate::pathloss::filter_plausible_alphas;
use crate::report::{
    evaluate_trace, load_anchors, load_ground_truth, load_trace, render_bubble_map, save_report,
    save_trace, write_bubble_table, write_ground_truth, ReportError,
};
use crate::simulator::{load_config, run_trajectory, SimulateError};

pub const HEADER_ESTIMATES: &str = "# lateration-estimates v1";
const ESTIMATES_COLUMNS: &str =
    "timestamp_s,est_x_cm,est_y_cm,used_anchors,used_pairs,skipped_pairs,ignored_readings";

#[derive(Parser, Debug)]
#[command(
    name = "lateration",
    version,
    about = "RSSI multilateration engine with a deterministic testbed simulator"
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Generate a scan trace and ground truth from a testbed config.
    Simulate {
        /// TOML testbed/channel/trajectory config.
        #[arg(long)]
        config: PathBuf,
        #[arg(long)]
        out_trace: PathBuf,
        #[arg(long)]
        out_truth: PathBuf,
    },
    /// Build a calibration database from scans at known positions.
    Calibrate {
        #[arg(long)]
        anchors: PathBuf,
        #[arg(long)]
        trace: PathBuf,
        /// Known positions matched to scans by exact timestamp.
        #[arg(long)]
        ground_truth: PathBuf,
        #[arg(long)]
        out: PathBuf,
        /// Anchors used per calibration point.
        #[arg(long, default_value_t = 4)]
        m: usize,
        /// Keep only exponent samples >= this value before averaging.
        #[arg(long, requires = "alpha_max")]
        alpha_min: Option<f64>,
        /// Keep only exponent samples <= this value before averaging.
        #[arg(long, requires = "alpha_min")]
        alpha_max: Option<f64>,
    },
    /// Estimate positions for every scan in a trace.
    Locate {
        #[arg(long)]
        db: PathBuf,
        #[arg(long)]
        anchors: PathBuf,
        #[arg(long)]
        trace: PathBuf,
        #[arg(long)]
        out: PathBuf,
        /// Anchors used per scan.
        #[arg(long, default_value_t = 4)]
        n: usize,
        #[arg(long, default_value_t = 1)]
        min_pairs: usize,
    },
    /// Compare estimates against ground truth, sorted by error.
    Evaluate {
        #[arg(long)]
        db: PathBuf,
        #[arg(long)]
        anchors: PathBuf,
        #[arg(long)]
        trace: PathBuf,
        #[arg(long)]
        ground_truth: PathBuf,
        #[arg(long)]
        out: PathBuf,
        #[arg(long, default_value_t = 4)]
        n: usize,
        #[arg(long, default_value_t = 1)]
        min_pairs: usize,
    },
    /// Render the mean-RSSI bubble map for a trace.
    RenderMap {
        #[arg(long)]
        anchors: PathBuf,
        #[arg(long)]
        trace: PathBuf,
        /// Optional ground truth for the robot marker.
        #[arg(long)]
        ground_truth: Option<PathBuf>,
        #[arg(long)]
        out_svg: PathBuf,
        #[arg(long)]
        out_table: PathBuf,
    },
}

/// A failure with a machine-parsable category and a process exit code.
#[derive(Debug)]
pub enum CliError {
    MalformedInput(String),
    EstimationFailure(String),
    IoFailure(String),
}

impl CliError {
    pub fn category(&self) -> &'static str {
        match self {
            CliError::MalformedInput(_) => "malformed-input",
            CliError::EstimationFailure(_) => "estimation-failure",
            CliError::IoFailure(_) => "io-failure",
        }
    }

    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::MalformedInput(_) => 2,
            CliError::EstimationFailure(_) => 3,
            CliError::IoFailure(_) => 4,
        }
    }
}

impl fmt::Display for CliError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            CliError::MalformedInput(m)
            | CliError::EstimationFailure(m)
            | CliError::IoFailure(m) => f.write_str(m),
        }
    }
}

impl std::error::Error for CliError {}

impl From<ReportError> for CliError {
    fn from(e: ReportError) -> Self {
        match e {
            ReportError::Io(io) => CliError::IoFailure(io.to_string()),
            other => CliError::MalformedInput(other.to_string()),
        }
    }
}

impl From<DatabaseError> for CliError {
    fn from(e: DatabaseError) -> Self {
        match e {
            DatabaseError::Io(io) => CliError::IoFailure(io.to_string()),
            other => CliError::MalformedInput(other.to_string()),
        }
    }
}

impl From<SimulateError> for CliError {
    fn from(e: SimulateError) -> Self {
        match e {
            SimulateError::Io(m) => CliError::IoFailure(m),
            other => CliError::MalformedInput(other.to_string()),
        }
    }
}

impl From<CalibrationError> for CliError {
    fn from(e: CalibrationError) -> Self {
        CliError::EstimationFailure(e.to_string())
    }
}

impl From<EstimateError> for CliError {
    fn from(e: EstimateError) -> Self {
        CliError::EstimationFailure(e.to_string())
    }
}

impl From<std::io::Error> for CliError {
    fn from(e: std::io::Error) -> Self {
        CliError::IoFailure(e.to_string())
    }
}

/// Runs one parsed invocation.
pub fn run(cli: Cli) -> Result<(), CliError> {
    match cli.command {
        Command::Simulate {
            config,
            out_trace,
            out_truth,
        } => cmd_simulate(&config, &out_trace, &out_truth),
        Command::Calibrate {
            anchors,
            trace,
            ground_truth,
            out,
            m,
            alpha_min,
            alpha_max,
        } => cmd_calibrate(
            &anchors,
            &trace,
            &ground_truth,
            &out,
            m,
            alpha_min.zip(alpha_max),
        ),
        Command::Locate {
            db,
            anchors,
            trace,
            out,
            n,
            min_pairs,
        } => cmd_locate(&db, &anchors, &trace, &out, n, min_pairs),
        Command::Evaluate {
            db,
            anchors,
            trace,
            ground_truth,
            out,
            n,
            min_pairs,
        } => cmd_evaluate(&db, &anchors, &trace, &ground_truth, &out, n, min_pairs),
        Command::RenderMap {
            anchors,
            trace,
            ground_truth,
            out_svg,
            out_table,
        } => cmd_render_map(
            &anchors,
            &trace,
            ground_truth.as_deref(),
            &out_svg,
            &out_table,
        ),
    }
}

fn cmd_simulate(config: &Path, out_trace: &Path, out_truth: &Path) -> Result<(), CliError> {
    let sim = load_config(config)?;
    let trace = run_trajectory(&sim.trajectory, &sim.testbed, &sim.channel)?;
    let header = vec![
        sim.channel.describe(),
        format!(
            "testbed: anchors={} floor={}..{}",
            sim.testbed.anchors().len(),
            sim.testbed.floor_min(),
            sim.testbed.floor_max()
        ),
        format!(
            "trajectory: waypoints={} scans_per_waypoint={}",
            sim.trajectory.waypoints.len(),
            sim.trajectory.scans_per_waypoint
        ),
    ];
    save_trace(out_trace, &trace.scans(), &header)?;
    fsio::write_atomic(
        out_truth,
        &write_ground_truth(&trace.ground_truth(), &header),
    )?;
    Ok(())
}

fn cmd_calibrate(
    anchors_path: &Path,
    trace_path: &Path,
    truth_path: &Path,
    out: &Path,
    m: usize,
    alpha_bounds: Option<(f64, f64)>,
) -> Result<(), CliError> {
    if let Some((lo, hi)) = alpha_bounds {
        if lo > hi {
            return Err(CliError::MalformedInput(format!(
                "alpha filter bounds [{lo}, {hi}] are inverted"
            )));
        }
    }
    let anchors = load_anchors(anchors_path)?;
    let trace = load_trace(trace_path)?;
    let truth = load_ground_truth(truth_path)?;
    let truth_by_ts: std::collections::HashMap<u64, crate::geometry::Point2D> =
        truth.iter().map(|(ts, p)| (ts.to_bits(), *p)).collect();

    let mut batches: Vec<CalibrationBatch> = Vec::new();
    for scan in &trace {
        let known = *truth_by_ts.get(&scan.timestamp_s.to_bits()).ok_or(
            ReportError::MissingGroundTruth {
                timestamp_s: scan.timestamp_s,
            },
        )?;
        let mut batch = calibrate_at(known, scan, &anchors, m)?;
        if let Some((lo, hi)) = alpha_bounds {
            batch.alpha_samples = filter_plausible_alphas(&batch.alpha_samples, lo, hi);
        }
        batches.push(batch);
    }
    let skipped: usize = batches.iter().map(|b| b.skipped_equal_distance_pairs).sum();
    let db = merge_calibrations(&batches)?;

    let mut header = vec![format!(
        "params: m={m} calibration_points={} alpha_samples={} skipped_equal_distance_pairs={skipped}",
        batches.len(),
        db.alpha_samples.len()
    )];
    match alpha_bounds {
        Some((lo, hi)) => header.push(format!("alpha_filter: [{lo}, {hi}]")),
        None => header.push("alpha_filter: none".to_string()),
    }
    let text = write_database(&db, &header);
    fsio::write_atomic(out, &text).map_err(|e| CliError::IoFailure(e.to_string()))?;
    Ok(())
}

fn cmd_locate(
    db_path: &Path,
    anchors_path: &Path,
    trace_path: &Path,
    out: &Path,
    n: usize,
    min_pairs: usize,
) -> Result<(), CliError> {
    let db = load_database(db_path)?;
    let anchors = load_anchors(anchors_path)?;
    let trace = load_trace(trace_path)?;
    let config = EstimatorConfig {
        n,
        min_pairs,
        ..EstimatorConfig::default()
    };

    let mut out_text = String::new();
    out_text.push_str(HEADER_ESTIMATES);
    out_text.push('\n');
    out_text.push_str(&format!(
        "# params: n={n} min_pairs={min_pairs} db_alpha_hat={} db_entries={}\n",
        db.alpha_hat.0,
        db.entries.len()
    ));
    out_text.push_str(ESTIMATES_COLUMNS);
    out_text.push('\n');

    let mut failures = 0usize;
    let mut last_error: Option<EstimateError> = None;
    for scan in &trace {
        match locate(scan, &db, &anchors, &config) {
            Ok(est) => out_text.push_str(&format!(
                "{},{},{},{},{},{},{}\n",
                scan.timestamp_s,
                est.position.x,
                est.position.y,
                est.used_anchors.len(),
                est.per_pair_points.len(),
                est.skipped_pairs.len(),
                est.ignored_readings
            )),
            Err(e) => {
                out_text.push_str(&format!(
                    "# skipped timestamp={} reason={}\n",
                    scan.timestamp_s, e
                ));
                failures += 1;
                last_error = Some(e);
            }
        }
    }
    out_text.push_str(&format!(
        "# scans={} estimated={} failed={failures}\n",
        trace.len(),
        trace.len() - failures
    ));

    if let (true, Some(e)) = (failures == trace.len() && !trace.is_empty(), last_error) {
        return Err(e.into());
    }
    fsio::write_atomic(out, &out_text).map_err(|e| CliError::IoFailure(e.to_string()))?;
    Ok(())
}

fn cmd_evaluate(
    db_path: &Path,
    anchors_path: &Path,
    trace_path: &Path,
    truth_path: &Path,
    out: &Path,
    n: usize,
    min_pairs: usize,
) -> Result<(), CliError> {
    let db = load_database(db_path)?;
    let anchors = load_anchors(anchors_path)?;
    let trace = load_trace(trace_path)?;
    let truth = load_ground_truth(truth_path)?;
    let config = EstimatorConfig {
        n,
        min_pairs,
        ..EstimatorConfig::default()
    };
    let report = evaluate_trace(&trace, &truth, &db, &anchors, &config)?;
    let header = vec![format!(
        "params: n={n} min_pairs={min_pairs} db_alpha_hat={} db_entries={}",
        db.alpha_hat.0,
        db.entries.len()
    )];
    save_report(out, &report, &header)?;
    Ok(())
}

fn cmd_render_map(
    anchors_path: &Path,
    trace_path: &Path,
    truth_path: Option<&Path>,
    out_svg: &Path,
    out_table: &Path,
) -> Result<(), CliError> {
    let anchors = load_anchors(anchors_path)?;
    let trace = load_trace(trace_path)?;
    let truth = match truth_path {
        Some(p) => Some(load_ground_truth(p)?),
        None => None,
    };
    let (svg, bubbles) = render_bubble_map(&trace, &anchors, truth.as_deref())?;
    fsio::write_atomic(out_svg, &svg).map_err(|e| CliError::IoFailure(e.to_string()))?;
    fsio::write_atomic(out_table, &write_bubble_table(&bubbles, &[]))
        .map_err(|e| CliError::IoFailure(e.to_string()))?;
    Ok(())
}
