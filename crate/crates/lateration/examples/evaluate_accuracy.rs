//! Accuracy evaluation under a noisy channel: calibrate from a handful of
//! known positions, localize a waypoint tour, and print the error table.
//!
//! Run with: cargo run -p lateration --example evaluate_accuracy

use lateration::calibration::{calibrate_at, merge_calibrations, AnchorId, AnchorMap};
use lateration::estimator::EstimatorConfig;
use lateration::geometry::Point2D;
use lateration::pathloss::filter_plausible_alphas;
use lateration::report::evaluate_trace;
use lateration::rng::Stream;
use lateration::simulator::{run_trajectory, ChannelModel, TestbedConfig, Trajectory};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    // 12 anchors on a grid over a 40 m x 20 m floor.
    let mut anchors = AnchorMap::new();
    let mut k = 0;
    for i in 0..4 {
        for j in 0..3 {
            anchors.insert(
                AnchorId::new(format!("ap{k:02}")),
                Point2D::new((i as f64 + 0.5) * 1000.0, (j as f64 + 0.5) * 667.0),
            );
            k += 1;
        }
    }
    let testbed = TestbedConfig::new(
        anchors.clone(),
        Point2D::new(0.0, 0.0),
        Point2D::new(4000.0, 2000.0),
    )?;
    let channel = ChannelModel {
        seed: 11,
        ..ChannelModel::default()
    };
    println!("{}\n", channel.describe());

    let mut rng = Stream::new(2025);
    let mut waypoint =
        || Point2D::new(rng.next_range(200.0, 3800.0), rng.next_range(200.0, 1800.0));

    // Calibration tour: 8 known positions, m = 4, implausible exponent
    // samples screened before aggregation.
    let calib = Trajectory {
        waypoints: (0..8).map(|_| waypoint()).collect(),
        scans_per_waypoint: 1,
    };
    let calib_trace = run_trajectory(&calib, &testbed, &channel)?;
    let batches: Vec<_> = calib_trace
        .records
        .iter()
        .map(|(scan, known)| {
            let mut batch = calibrate_at(*known, scan, &anchors, 4).unwrap();
            batch.alpha_samples = filter_plausible_alphas(&batch.alpha_samples, 1.0, 6.0);
            batch
        })
        .collect();
    let db = merge_calibrations(&batches)?;
    println!(
        "calibrated: alpha_hat = {:.3} from {} samples, {} reference entries\n",
        db.alpha_hat.0,
        db.alpha_samples.len(),
        db.entries.len()
    );

    // Evaluation tour: 20 fresh waypoints.
    let eval_channel = ChannelModel {
        seed: 12,
        ..channel
    };
    let tour = Trajectory {
        waypoints: (0..20).map(|_| waypoint()).collect(),
        scans_per_waypoint: 1,
    };
    let trace = run_trajectory(&tour, &testbed, &eval_channel)?;
    let report = evaluate_trace(
        &trace.scans(),
        &trace.ground_truth(),
        &db,
        &anchors,
        &EstimatorConfig::with_n(4),
    )?;

    println!(
        "{:>22} {:>22} {:>12}",
        "estimated (cm)", "actual (cm)", "error (cm)"
    );
    for row in &report.rows {
        println!(
            "{:>22} {:>22} {:>12.2}",
            format!("({:.1}, {:.1})", row.estimated.x, row.estimated.y),
            format!("({:.1}, {:.1})", row.actual.x, row.actual.y),
            row.error_cm
        );
    }
    if let Some(s) = &report.summary {
        println!(
            "\nmin {:.2} cm, median {:.2} cm, max {:.2} cm over {} waypoints ({} failures)",
            s.min_cm,
            s.median_cm,
            s.max_cm,
            report.rows.len(),
            report.failures.len()
        );
    }
    Ok(())
}
