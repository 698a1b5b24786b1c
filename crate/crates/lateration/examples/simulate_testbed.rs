//! Simulate a small testbed and write the trace and ground-truth files.
//!
//! Run with: cargo run -p lateration --example simulate_testbed

use lateration::calibration::{AnchorId, AnchorMap};
use lateration::geometry::Point2D;
use lateration::report::{save_ground_truth, save_trace};
use lateration::simulator::{run_trajectory, ChannelModel, TestbedConfig, Trajectory};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let mut anchors = AnchorMap::new();
    for (i, (x, y)) in [
        (200.0, 200.0),
        (2800.0, 250.0),
        (250.0, 1800.0),
        (2750.0, 1750.0),
        (1500.0, 1000.0),
    ]
    .iter()
    .enumerate()
    {
        anchors.insert(AnchorId::new(format!("ap{i:02}")), Point2D::new(*x, *y));
    }
    let testbed = TestbedConfig::new(
        anchors,
        Point2D::new(0.0, 0.0),
        Point2D::new(3000.0, 2000.0),
    )?;
    let channel = ChannelModel {
        seed: 7,
        ..ChannelModel::default()
    };
    let trajectory = Trajectory {
        waypoints: vec![
            Point2D::new(500.0, 500.0),
            Point2D::new(1200.0, 800.0),
            Point2D::new(2000.0, 1200.0),
            Point2D::new(2600.0, 600.0),
        ],
        scans_per_waypoint: 2,
    };

    println!("{}", channel.describe());
    let trace = run_trajectory(&trajectory, &testbed, &channel)?;
    println!(
        "simulated {} scans over {} waypoints\n",
        trace.records.len(),
        trajectory.waypoints.len()
    );

    for (scan, truth) in &trace.records {
        println!(
            "t={:>4}s at {}: {} anchors heard, strongest {}",
            scan.timestamp_s,
            truth,
            scan.readings.len(),
            scan.readings
                .iter()
                .max_by(|a, b| a.1 .0.total_cmp(&b.1 .0))
                .map(|(id, p)| format!("{id} ({:.1} dBm)", p.0))
                .unwrap_or_else(|| "-".into()),
        );
    }

    let out_dir = std::env::temp_dir().join("lateration-examples");
    std::fs::create_dir_all(&out_dir)?;
    let trace_path = out_dir.join("trace.csv");
    let truth_path = out_dir.join("truth.csv");
    save_trace(&trace_path, &trace.scans(), &[channel.describe()])?;
    save_ground_truth(&truth_path, &trace.ground_truth(), &[])?;
    println!(
        "\nwrote {} and {}",
        trace_path.display(),
        truth_path.display()
    );
    Ok(())
}
