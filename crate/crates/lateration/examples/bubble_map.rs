//! Render the mean-RSSI bubble map of a simulated trace as an SVG.
//!
//! Run with: cargo run -p lateration --example bubble_map

use lateration::calibration::{AnchorId, AnchorMap};
use lateration::geometry::Point2D;
use lateration::report::{emit_bubble_map, save_trace};
use lateration::simulator::{run_trajectory, ChannelModel, TestbedConfig, Trajectory};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let mut anchors = AnchorMap::new();
    let mut k = 0;
    for i in 0..5 {
        for j in 0..3 {
            anchors.insert(
                AnchorId::new(format!("ap{k:02}")),
                Point2D::new((i as f64 + 0.5) * 1200.0, (j as f64 + 0.5) * 1000.0),
            );
            k += 1;
        }
    }
    let testbed = TestbedConfig::new(
        anchors.clone(),
        Point2D::new(0.0, 0.0),
        Point2D::new(6000.0, 3000.0),
    )?;
    let channel = ChannelModel {
        seed: 21,
        ..ChannelModel::default()
    };
    // The robot lingers in the lower-left region, so nearby anchors show
    // larger bubbles.
    let tour = Trajectory {
        waypoints: vec![
            Point2D::new(900.0, 700.0),
            Point2D::new(1300.0, 900.0),
            Point2D::new(1100.0, 1200.0),
            Point2D::new(1600.0, 800.0),
        ],
        scans_per_waypoint: 5,
    };
    let trace = run_trajectory(&tour, &testbed, &channel)?;

    let out_dir = std::env::temp_dir().join("lateration-examples");
    std::fs::create_dir_all(&out_dir)?;
    let svg_path = out_dir.join("bubble_map.svg");
    let table_path = out_dir.join("bubbles.csv");
    save_trace(&out_dir.join("bubble_trace.csv"), &trace.scans(), &[])?;

    let truth = trace.ground_truth();
    let bubbles = emit_bubble_map(
        &trace.scans(),
        &anchors,
        Some(&truth),
        &svg_path,
        &table_path,
    )?;

    println!("{:<6} {:>18} {:>14}", "anchor", "position", "mean RSSI");
    for b in &bubbles {
        println!(
            "{:<6} {:>18} {:>11.1} dBm",
            b.anchor.to_string(),
            format!("({:.0}, {:.0})", b.position.x, b.position.y),
            b.mean_rssi.0
        );
    }
    println!(
        "\nwrote {} and {}",
        svg_path.display(),
        table_path.display()
    );
    Ok(())
}
