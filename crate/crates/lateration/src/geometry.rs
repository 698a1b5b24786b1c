//! Planar circle-intersection geometry for pairwise lateration.
//!
//! Position fixes are built from pairs of anchor circles: each anchor's
//! estimated range defines a circle, a pair of circles meets in up to two
//! points, and the candidate closer to the remaining anchors is kept. When
//! the circles do not meet at all, the midpoint of the two centers stands in
//! for the missing intersection so a pair still contributes a point.
//!
//! All coordinates are in centimeters.

use std::fmt;

/// Centers closer than this are treated as coincident and rejected.
pub const COINCIDENT_CENTER_EPS_CM: f64 = 1e-9;

/// Band around h² = 0 inside which an intersection counts as tangent.
pub const TANGENCY_EPS_CM2: f64 = 1e-12;

/// Candidate sums closer than this are tied and fall back to coordinates.
pub const CANDIDATE_TIE_EPS_CM: f64 = 1e-9;

/// A point in the floor plane, in centimeters.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Point2D {
    pub x: f64,
    pub y: f64,
}

impl Point2D {
    pub fn new(x: f64, y: f64) -> Self {
        Self { x, y }
    }

    /// Euclidean distance to another point.
    pub fn distance_to(&self, other: Point2D) -> f64 {
        (self.x - other.x).hypot(self.y - other.y)
    }

    pub fn is_finite(&self) -> bool {
        self.x.is_finite() && self.y.is_finite()
    }
}

impl fmt::Display for Point2D {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({}, {})", self.x, self.y)
    }
}

/// An anchor circle: known center plus estimated range as radius.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Circle {
    pub center: Point2D,
    pub radius: f64,
}

impl Circle {
    pub fn new(center: Point2D, radius: f64) -> Self {
        Self { center, radius }
    }
}

/// How a pair of circles meets.
///
/// `NoIntersection` keeps the midpoint of the two centers so disjoint or
/// nested pairs still yield a usable point.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum IntersectionOutcome {
    TwoPoints(Point2D, Point2D),
    Tangent(Point2D),
    NoIntersection { fallback_midpoint: Point2D },
}

impl IntersectionOutcome {
    /// The intersection points proper (empty for `NoIntersection`).
    pub fn points(&self) -> Vec<Point2D> {
        match self {
            IntersectionOutcome::TwoPoints(p, q) => vec![*p, *q],
            IntersectionOutcome::Tangent(p) => vec![*p],
            IntersectionOutcome::NoIntersection { .. } => vec![],
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub enum GeometryError {
    /// Circle centers closer than [`COINCIDENT_CENTER_EPS_CM`]; the pair
    /// carries no lateration information and must be skipped.
    CoincidentCenters,
    /// An operation over a point list received an empty list.
    EmptyInput,
}

impl fmt::Display for GeometryError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            GeometryError::CoincidentCenters => {
                write!(f, "circle centers coincide; pair is degenerate")
            }
            GeometryError::EmptyInput => write!(f, "point list is empty"),
        }
    }
}

impl std::error::Error for GeometryError {}

/// Intersects two circles.
///
/// With `d` the center distance, the chord foot sits at
/// `l = (r_a² − r_b² + d²) / 2d` along the center line and the half-chord
/// height is `h = √(r_a² − l²)`. `h² > 0` gives two points mirrored across
/// the center line, `h² ≈ 0` a single tangent point, and `h² < 0` no
/// intersection (disjoint or nested), reported with the center midpoint.
pub fn circle_intersection(a: Circle, b: Circle) -> Result<IntersectionOutcome, GeometryError> {
    let dx = b.center.x - a.center.x;
    let dy = b.center.y - a.center.y;
    let d = dx.hypot(dy);
    if d <= COINCIDENT_CENTER_EPS_CM {
        return Err(GeometryError::CoincidentCenters);
    }

    let l = (a.radius * a.radius - b.radius * b.radius + d * d) / (2.0 * d);
    let h_sq = a.radius * a.radius - l * l;

    let base_x = a.center.x + (l / d) * dx;
    let base_y = a.center.y + (l / d) * dy;

    if h_sq > TANGENCY_EPS_CM2 {
        let h = h_sq.sqrt();
        let p = Point2D::new(base_x + (h / d) * dy, base_y - (h / d) * dx);
        let q = Point2D::new(base_x - (h / d) * dy, base_y + (h / d) * dx);
        Ok(IntersectionOutcome::TwoPoints(p, q))
    } else if h_sq >= -TANGENCY_EPS_CM2 {
        Ok(IntersectionOutcome::Tangent(Point2D::new(base_x, base_y)))
    } else {
        let mid = Point2D::new(
            (a.center.x + b.center.x) / 2.0,
            (a.center.y + b.center.y) / 2.0,
        );
        Ok(IntersectionOutcome::NoIntersection {
            fallback_midpoint: mid,
        })
    }
}

/// Picks the pair's contribution point from an intersection outcome.
///
/// Of two candidates the one with the smaller summed distance to
/// `other_anchors` wins; sums within [`CANDIDATE_TIE_EPS_CM`] (and the
/// empty-anchor case) fall back to smaller y, then smaller x.
pub fn select_candidate(outcome: &IntersectionOutcome, other_anchors: &[Point2D]) -> Point2D {
    match outcome {
        IntersectionOutcome::NoIntersection { fallback_midpoint } => *fallback_midpoint,
        IntersectionOutcome::Tangent(p) => *p,
        IntersectionOutcome::TwoPoints(p, q) => {
            let sum =
                |pt: Point2D| -> f64 { other_anchors.iter().map(|a| pt.distance_to(*a)).sum() };
            let (sp, sq) = (sum(*p), sum(*q));
            if (sp - sq).abs() <= CANDIDATE_TIE_EPS_CM {
                lower_left(*p, *q)
            } else if sp < sq {
                *p
            } else {
                *q
            }
        }
    }
}

/// Picks the pair's contribution point using the other anchors' estimated
/// ranges.
///
/// Of two candidates the one whose distances better match the remaining
/// `(position, range)` measurements wins (smaller summed absolute residual).
/// With exact ranges the true position has zero residual everywhere, so the
/// mirror candidate only survives degenerate symmetric layouts; the plain
/// closest-to-the-others rule of [`select_candidate`] flips to the mirror
/// whenever a pair's center line separates the true point from the other
/// anchors. Ties fall back to smaller y, then smaller x.
pub fn select_candidate_ranged(
    outcome: &IntersectionOutcome,
    others: &[(Point2D, f64)],
) -> Point2D {
    match outcome {
        IntersectionOutcome::NoIntersection { fallback_midpoint } => *fallback_midpoint,
        IntersectionOutcome::Tangent(p) => *p,
        IntersectionOutcome::TwoPoints(p, q) => {
            let residual = |pt: Point2D| -> f64 {
                others
                    .iter()
                    .map(|(pos, range)| (pt.distance_to(*pos) - range).abs())
                    .sum()
            };
            let (rp, rq) = (residual(*p), residual(*q));
            if (rp - rq).abs() <= CANDIDATE_TIE_EPS_CM {
                lower_left(*p, *q)
            } else if rp < rq {
                *p
            } else {
                *q
            }
        }
    }
}

fn lower_left(p: Point2D, q: Point2D) -> Point2D {
    if p.y < q.y || (p.y == q.y && p.x <= q.x) {
        p
    } else {
        q
    }
}

/// Component-wise arithmetic mean of a non-empty point list.
///
/// Sums in slice order so the result is bit-stable for a given input order.
pub fn centroid(points: &[Point2D]) -> Result<Point2D, GeometryError> {
    if points.is_empty() {
        return Err(GeometryError::EmptyInput);
    }
    let n = points.len() as f64;
    let (sx, sy) = points
        .iter()
        .fold((0.0, 0.0), |(sx, sy), p| (sx + p.x, sy + p.y));
    Ok(Point2D::new(sx / n, sy / n))
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn assert_close(p: Point2D, x: f64, y: f64) {
        assert!(
            (p.x - x).abs() < 1e-9 && (p.y - y).abs() < 1e-9,
            "expected ({x}, {y}), got {p}"
        );
    }

    #[test]
    fn tangent_by_symmetry() {
        let a = Circle::new(Point2D::new(0.0, 0.0), 5.0);
        let b = Circle::new(Point2D::new(10.0, 0.0), 5.0);
        match circle_intersection(a, b).unwrap() {
            IntersectionOutcome::Tangent(p) => assert_close(p, 5.0, 0.0),
            other => panic!("expected tangent, got {other:?}"),
        }
    }

    #[test]
    fn two_points_three_four_five() {
        let a = Circle::new(Point2D::new(0.0, 0.0), 5.0);
        let b = Circle::new(Point2D::new(6.0, 0.0), 5.0);
        match circle_intersection(a, b).unwrap() {
            IntersectionOutcome::TwoPoints(p, q) => {
                let mut pts = [p, q];
                pts.sort_by(|l, r| l.y.total_cmp(&r.y));
                assert_close(pts[0], 3.0, -4.0);
                assert_close(pts[1], 3.0, 4.0);
            }
            other => panic!("expected two points, got {other:?}"),
        }
    }

    #[test]
    fn disjoint_falls_back_to_midpoint() {
        let a = Circle::new(Point2D::new(0.0, 0.0), 1.0);
        let b = Circle::new(Point2D::new(10.0, 0.0), 1.0);
        match circle_intersection(a, b).unwrap() {
            IntersectionOutcome::NoIntersection { fallback_midpoint } => {
                assert_close(fallback_midpoint, 5.0, 0.0)
            }
            other => panic!("expected no intersection, got {other:?}"),
        }
    }

    #[test]
    fn nested_falls_back_to_midpoint() {
        let a = Circle::new(Point2D::new(0.0, 0.0), 10.0);
        let b = Circle::new(Point2D::new(2.0, 0.0), 1.0);
        match circle_intersection(a, b).unwrap() {
            IntersectionOutcome::NoIntersection { fallback_midpoint } => {
                assert_close(fallback_midpoint, 1.0, 0.0)
            }
            other => panic!("expected no intersection, got {other:?}"),
        }
    }

    #[test]
    fn coincident_centers_rejected() {
        let a = Circle::new(Point2D::new(1.0, 2.0), 5.0);
        let b = Circle::new(Point2D::new(1.0, 2.0), 3.0);
        assert_eq!(
            circle_intersection(a, b),
            Err(GeometryError::CoincidentCenters)
        );
    }

    #[test]
    fn candidate_prefers_point_near_other_anchors() {
        let outcome =
            IntersectionOutcome::TwoPoints(Point2D::new(3.0, 4.0), Point2D::new(3.0, -4.0));
        let picked = select_candidate(&outcome, &[Point2D::new(0.0, 10.0)]);
        assert_close(picked, 3.0, 4.0);
    }

    #[test]
    fn candidate_tie_breaks_to_lower_y() {
        let outcome =
            IntersectionOutcome::TwoPoints(Point2D::new(3.0, 4.0), Point2D::new(3.0, -4.0));
        let picked = select_candidate(&outcome, &[]);
        assert_close(picked, 3.0, -4.0);
    }

    #[test]
    fn candidate_passes_fallback_through() {
        let outcome = IntersectionOutcome::NoIntersection {
            fallback_midpoint: Point2D::new(5.0, 0.0),
        };
        let picked = select_candidate(&outcome, &[Point2D::new(100.0, 100.0)]);
        assert_close(picked, 5.0, 0.0);
    }

    #[test]
    fn centroid_cases() {
        assert_close(centroid(&[Point2D::new(0.0, 0.0)]).unwrap(), 0.0, 0.0);
        assert_close(
            centroid(&[
                Point2D::new(0.0, 0.0),
                Point2D::new(2.0, 0.0),
                Point2D::new(1.0, 3.0),
            ])
            .unwrap(),
            1.0,
            1.0,
        );
        assert_close(
            centroid(&[Point2D::new(-1.0, -1.0), Point2D::new(1.0, 1.0)]).unwrap(),
            0.0,
            0.0,
        );
        assert_eq!(centroid(&[]), Err(GeometryError::EmptyInput));
    }

    #[test]
    fn ranged_candidate_prefers_range_consistency() {
        let outcome =
            IntersectionOutcome::TwoPoints(Point2D::new(3.0, 4.0), Point2D::new(3.0, -4.0));
        // (3, 4) sits exactly at the other anchor's measured range.
        let others = [(Point2D::new(0.0, 10.0), 45.0f64.sqrt())];
        assert_close(select_candidate_ranged(&outcome, &others), 3.0, 4.0);
        // Empty others tie-break matches the positional rule.
        assert_close(select_candidate_ranged(&outcome, &[]), 3.0, -4.0);
    }

    #[test]
    fn ranged_candidate_survives_separating_pair_line() {
        // Truth (300, 400) and anchors on the far side of the a-d line; the
        // positional rule picks the mirror here, the ranged rule must not.
        let truth = Point2D::new(300.0, 400.0);
        let a = Circle::new(
            Point2D::new(0.0, 0.0),
            truth.distance_to(Point2D::new(0.0, 0.0)),
        );
        let d = Circle::new(
            Point2D::new(700.0, 800.0),
            truth.distance_to(Point2D::new(700.0, 800.0)),
        );
        let others = [
            (
                Point2D::new(600.0, 0.0),
                truth.distance_to(Point2D::new(600.0, 0.0)),
            ),
            (
                Point2D::new(0.0, 900.0),
                truth.distance_to(Point2D::new(0.0, 900.0)),
            ),
        ];
        let outcome = circle_intersection(a, d).unwrap();
        let picked = select_candidate_ranged(&outcome, &others);
        assert!(picked.distance_to(truth) <= 1e-6, "picked {picked}");
        let positional = select_candidate(
            &outcome,
            &others.iter().map(|(p, _)| *p).collect::<Vec<_>>(),
        );
        assert!(positional.distance_to(truth) > 1.0, "layout not separating");
    }

    #[test]
    fn select_candidate_is_deterministic() {
        let outcome =
            IntersectionOutcome::TwoPoints(Point2D::new(1.0, 7.0), Point2D::new(-2.0, 3.0));
        let anchors = [Point2D::new(4.0, 4.0), Point2D::new(-1.0, 0.0)];
        let first = select_candidate(&outcome, &anchors);
        for _ in 0..10 {
            assert_eq!(select_candidate(&outcome, &anchors), first);
        }
    }

    fn on_both(p: Point2D, a: Circle, b: Circle) -> bool {
        (p.distance_to(a.center) - a.radius).abs() <= 1e-6 * a.radius.max(1.0)
            && (p.distance_to(b.center) - b.radius).abs() <= 1e-6 * b.radius.max(1.0)
    }

    fn same_point_set(xs: &[Point2D], ys: &[Point2D], tol: f64) -> bool {
        xs.len() == ys.len()
            && xs
                .iter()
                .all(|x| ys.iter().any(|y| x.distance_to(*y) <= tol))
            && ys
                .iter()
                .all(|y| xs.iter().any(|x| y.distance_to(*x) <= tol))
    }

    fn kind_of(o: &IntersectionOutcome) -> u8 {
        match o {
            IntersectionOutcome::TwoPoints(..) => 2,
            IntersectionOutcome::Tangent(_) => 1,
            IntersectionOutcome::NoIntersection { .. } => 0,
        }
    }

    fn circle_strategy() -> impl Strategy<Value = Circle> {
        (-1000.0..1000.0f64, -1000.0..1000.0f64, 1.0..500.0f64)
            .prop_map(|(x, y, r)| Circle::new(Point2D::new(x, y), r))
    }

    proptest! {
        /// Returned intersection points lie on both circles.
        #[test]
        fn points_lie_on_both_circles(a in circle_strategy(), b in circle_strategy()) {
            prop_assume!(a.center.distance_to(b.center) > 1e-6);
            let outcome = circle_intersection(a, b).unwrap();
            for p in outcome.points() {
                prop_assert!(on_both(p, a, b), "{p} not on both circles");
            }
        }

        /// Swapping the argument order preserves kind and point set.
        #[test]
        fn intersection_is_symmetric(a in circle_strategy(), b in circle_strategy()) {
            prop_assume!(a.center.distance_to(b.center) > 1e-6);
            let ab = circle_intersection(a, b).unwrap();
            let ba = circle_intersection(b, a).unwrap();
            prop_assert_eq!(kind_of(&ab), kind_of(&ba));
            let tol = 1e-6 * a.radius.max(b.radius).max(1.0);
            prop_assert!(same_point_set(&ab.points(), &ba.points(), tol));
            if let (
                IntersectionOutcome::NoIntersection { fallback_midpoint: m1 },
                IntersectionOutcome::NoIntersection { fallback_midpoint: m2 },
            ) = (&ab, &ba)
            {
                prop_assert!(m1.distance_to(*m2) <= tol);
            }
        }

        /// Translating and rotating both circles maps the intersection
        /// points by the same rigid motion.
        #[test]
        fn intersection_is_rigid_motion_equivariant(
            a in circle_strategy(),
            b in circle_strategy(),
            tx in -5000.0..5000.0f64,
            ty in -5000.0..5000.0f64,
            theta in 0.0..std::f64::consts::TAU,
        ) {
            prop_assume!(a.center.distance_to(b.center) > 1e-6);
            let (sin, cos) = theta.sin_cos();
            let motion = |p: Point2D| {
                Point2D::new(cos * p.x - sin * p.y + tx, sin * p.x + cos * p.y + ty)
            };
            let moved = |c: Circle| Circle::new(motion(c.center), c.radius);

            let plain = circle_intersection(a, b).unwrap();
            let transformed = circle_intersection(moved(a), moved(b)).unwrap();
            prop_assert_eq!(kind_of(&plain), kind_of(&transformed));
            let scale = a.radius
                .max(b.radius)
                .max(tx.abs())
                .max(ty.abs())
                .max(1.0);
            let mapped: Vec<Point2D> = plain.points().into_iter().map(motion).collect();
            prop_assert!(
                same_point_set(&mapped, &transformed.points(), 1e-6 * scale)
            );
        }
    }
}
