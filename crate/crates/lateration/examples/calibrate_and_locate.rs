//! The full estimation pipeline on a noiseless channel: calibrate at known
//! positions, then locate an unknown one with per-pair diagnostics.
//!
//! Run with: cargo run -p lateration --example calibrate_and_locate

use lateration::calibration::{calibrate_at, merge_calibrations, AnchorId, AnchorMap};
use lateration::estimator::{locate, EstimatorConfig};
use lateration::geometry::Point2D;
use lateration::pathloss::PowerDbm;
use lateration::simulator::{simulate_scan, ChannelModel, TestbedConfig};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let mut anchors = AnchorMap::new();
    for (i, (x, y)) in [(0.0, 0.0), (600.0, 0.0), (0.0, 900.0), (700.0, 800.0)]
        .iter()
        .enumerate()
    {
        anchors.insert(AnchorId::new(format!("ap{i:02}")), Point2D::new(*x, *y));
    }
    let testbed = TestbedConfig::new(
        anchors.clone(),
        Point2D::new(-100.0, -100.0),
        Point2D::new(1000.0, 1000.0),
    )?;
    // Noise off so the pipeline inverts the channel exactly.
    let channel = ChannelModel {
        shadow_sigma_db: 0.0,
        dropout_prob: 0.0,
        rssi_floor: PowerDbm(-200.0),
        seed: 3,
        ..ChannelModel::default()
    };

    println!("=== Calibration at two known positions ===\n");
    let mut batches = Vec::new();
    let mut draw = 0;
    for known in [Point2D::new(50.0, 120.0), Point2D::new(450.0, 650.0)] {
        let scan = simulate_scan(known, &testbed, &channel, draw)?;
        draw += 1;
        let batch = calibrate_at(known, &scan, &anchors, 4)?;
        println!(
            "at {known}: {} reference entries, {} exponent samples",
            batch.entries.len(),
            batch.alpha_samples.len()
        );
        batches.push(batch);
    }
    let db = merge_calibrations(&batches)?;
    println!(
        "database: {} entries, alpha_hat = {:.6} (true {})\n",
        db.entries.len(),
        db.alpha_hat.0,
        channel.alpha_true.0
    );

    println!("=== Locating an unknown position ===\n");
    let truth = Point2D::new(300.0, 400.0);
    let scan = simulate_scan(truth, &testbed, &channel, draw)?;
    let estimate = locate(&scan, &db, &anchors, &EstimatorConfig::with_n(4))?;

    println!("anchor ranges:");
    for (anchor, range) in &estimate.used_anchors {
        let actual = truth.distance_to(anchors.get(anchor).unwrap());
        println!(
            "  {anchor}: estimated {:>8.3} cm, actual {:>8.3} cm",
            range.0, actual
        );
    }
    println!("per-pair points:");
    for ((a, b), point) in &estimate.per_pair_points {
        println!("  ({a}, {b}) -> {point}");
    }
    println!(
        "\nestimate {} vs truth {} -> error {:.2e} cm",
        estimate.position,
        truth,
        estimate.position.distance_to(truth)
    );
    Ok(())
}
