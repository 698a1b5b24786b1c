//! Circle-intersection geometry: the three outcome kinds and candidate
//! selection.
//!
//! Run with: cargo run -p lateration --example circle_intersection

use lateration::geometry::{
    circle_intersection, select_candidate, select_candidate_ranged, Circle, IntersectionOutcome,
    Point2D,
};

fn show(label: &str, a: Circle, b: Circle) -> IntersectionOutcome {
    let outcome = circle_intersection(a, b).expect("distinct centers");
    match &outcome {
        IntersectionOutcome::TwoPoints(p, q) => {
            println!("{label}: two points {p} and {q}");
        }
        IntersectionOutcome::Tangent(p) => println!("{label}: tangent at {p}"),
        IntersectionOutcome::NoIntersection { fallback_midpoint } => {
            println!("{label}: no intersection, midpoint fallback {fallback_midpoint}");
        }
    }
    outcome
}

fn main() {
    println!("=== Circle intersection outcomes ===\n");

    show(
        "tangent      ",
        Circle::new(Point2D::new(0.0, 0.0), 5.0),
        Circle::new(Point2D::new(10.0, 0.0), 5.0),
    );
    let crossing = show(
        "two points   ",
        Circle::new(Point2D::new(0.0, 0.0), 5.0),
        Circle::new(Point2D::new(6.0, 0.0), 5.0),
    );
    show(
        "disjoint     ",
        Circle::new(Point2D::new(0.0, 0.0), 1.0),
        Circle::new(Point2D::new(10.0, 0.0), 1.0),
    );
    show(
        "nested       ",
        Circle::new(Point2D::new(0.0, 0.0), 10.0),
        Circle::new(Point2D::new(2.0, 0.0), 1.0),
    );

    println!("\n=== Candidate selection for the two-point case ===\n");
    let witness = Point2D::new(0.0, 10.0);
    let picked = select_candidate(&crossing, &[witness]);
    println!("closest to anchor at {witness}: {picked}");
    let picked = select_candidate(&crossing, &[]);
    println!("no other anchors (tie-break lower y): {picked}");

    // With ranges for the other anchors, selection prefers the candidate
    // consistent with the measurements rather than simply the nearest one.
    let ranged = [(witness, Point2D::new(3.0, 4.0).distance_to(witness))];
    let picked = select_candidate_ranged(&crossing, &ranged);
    println!("consistent with a measured range: {picked}");
}
