//! Log-distance path-loss arithmetic: forward model, exponent estimation,
//! and range inversion.
//!
//! Run with: cargo run -p lateration --example pathloss_model

use lateration::pathloss::{
    aggregate_alpha, alpha_from_pair, distance_from_power, power_at_distance, DistanceCm,
    PathLossExponent, PowerDbm,
};

fn main() {
    let ref_p = PowerDbm(-40.0);
    let ref_r = DistanceCm(100.0);

    println!(
        "=== Forward model (ref {} dBm @ {} cm) ===\n",
        ref_p.0, ref_r.0
    );
    println!(
        "{:>10} {:>12} {:>12} {:>12}",
        "dist (cm)", "alpha 2.0", "alpha 2.4", "alpha 3.0"
    );
    for dist in [100.0, 200.0, 500.0, 1000.0, 3000.0] {
        let row: Vec<f64> = [2.0, 2.4, 3.0]
            .iter()
            .map(|&a| {
                power_at_distance(ref_p, ref_r, DistanceCm(dist), PathLossExponent(a))
                    .unwrap()
                    .0
            })
            .collect();
        println!(
            "{:>10} {:>12.2} {:>12.2} {:>12.2}",
            dist, row[0], row[1], row[2]
        );
    }

    println!("\n=== Exponent estimation from measurement pairs ===\n");
    let measurements = [
        (PowerDbm(-40.0), DistanceCm(100.0)),
        (PowerDbm(-55.0), DistanceCm(420.0)),
        (PowerDbm(-62.0), DistanceCm(900.0)),
        (PowerDbm(-70.0), DistanceCm(2300.0)),
    ];
    let mut samples = Vec::new();
    for i in 0..measurements.len() {
        for j in (i + 1)..measurements.len() {
            let (p_i, r_i) = measurements[i];
            let (p_j, r_j) = measurements[j];
            let alpha = alpha_from_pair(p_i, r_i, p_j, r_j).unwrap();
            println!(
                "pair ({:>5} cm, {:>5} cm): alpha = {:.4}",
                r_i.0, r_j.0, alpha.0
            );
            samples.push(alpha);
        }
    }
    let alpha_hat = aggregate_alpha(&samples).unwrap();
    println!(
        "aggregated alpha over {} pairs: {:.4}",
        samples.len(),
        alpha_hat.0
    );

    println!("\n=== Range inversion with the aggregated exponent ===\n");
    for p_k in [-45.0, -55.0, -65.0, -75.0] {
        let r = distance_from_power(PowerDbm(p_k), ref_p, ref_r, alpha_hat).unwrap();
        println!(
            "reading {:>6.1} dBm -> estimated range {:>8.1} cm",
            p_k, r.0
        );
    }
}
