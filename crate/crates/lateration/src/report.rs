//! Trace ingestion, accuracy evaluation, and bubble-map rendering.
//!
//! Three delimited text formats move data in and out of the engine: scan
//! traces `(timestamp_s, anchor_id, rssi_dbm)`, anchor layouts
//! `(anchor_id, x_cm, y_cm)`, and ground truth `(timestamp_s, x_cm, y_cm)`.
//! Every file starts with a one-line versioned header, then a mandatory
//! column-header row; further `#` lines are comments. Numbers are written
//! with shortest round-trip precision, so parse(write(x)) reproduces x
//! exactly. An empty file parses as an empty collection.
//!
//! Evaluation replays a trace against ground truth matched by exact
//! timestamp and reports per-scan Euclidean errors sorted ascending. The
//! bubble map renders one circle per observed anchor, radius scaled
//! affinely from its mean RSSI over the trace.

use std::collections::{BTreeMap, HashMap};
use std::fmt;
use std::path::Path;

use crate::calibration::{AnchorId, AnchorMap, CalibrationDatabase};
use crate::estimator::{locate, EstimateError, EstimatorConfig};
use crate::fsio;
use crate::geometry::Point2D;
use crate::pathloss::PowerDbm;

pub const TRACE_HEADER: &str = "# lateration-trace v1";
pub const TRACE_COLUMNS: &str = "timestamp_s,anchor_id,rssi_dbm";
pub const ANCHORS_HEADER: &str = "# lateration-anchors v1";
pub const ANCHORS_COLUMNS: &str = "anchor_id,x_cm,y_cm";
pub const TRUTH_HEADER: &str = "# lateration-truth v1";
pub const TRUTH_COLUMNS: &str = "timestamp_s,x_cm,y_cm";
pub const REPORT_HEADER: &str = "# lateration-report v1";
pub const REPORT_COLUMNS: &str = "est_x_cm,est_y_cm,act_x_cm,act_y_cm,error_cm";
pub const BUBBLES_HEADER: &str = "# lateration-bubbles v1";
pub const BUBBLES_COLUMNS: &str = "anchor_id,x_cm,y_cm,mean_rssi_dbm";

/// Smallest and largest bubble radii, in floor centimeters.
pub const BUBBLE_MIN_RADIUS_CM: f64 = 40.0;
pub const BUBBLE_MAX_RADIUS_CM: f64 = 160.0;

/// One RSSI snapshot: at most one reading per anchor.
#[derive(Debug, Clone, PartialEq)]
pub struct ScanRecord {
    pub timestamp_s: f64,
    pub readings: BTreeMap<AnchorId, PowerDbm>,
}

impl ScanRecord {
    pub fn new(timestamp_s: f64) -> Self {
        Self {
            timestamp_s,
            readings: BTreeMap::new(),
        }
    }

    /// Sets a reading, returning the previous value for that anchor.
    pub fn set_reading(&mut self, anchor: AnchorId, power: PowerDbm) -> Option<PowerDbm> {
        self.readings.insert(anchor, power)
    }
}

/// One evaluated scan: estimate vs. truth.
#[derive(Debug, Clone, PartialEq)]
pub struct EvaluationRow {
    pub estimated: Point2D,
    pub actual: Point2D,
    pub error_cm: f64,
}

impl EvaluationRow {
    pub fn new(estimated: Point2D, actual: Point2D) -> Self {
        Self {
            estimated,
            actual,
            error_cm: position_error(estimated, actual),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ErrorSummary {
    pub min_cm: f64,
    pub median_cm: f64,
    pub max_cm: f64,
}

/// Per-scan evaluation rows sorted ascending by error, plus failures.
#[derive(Debug, Clone, PartialEq)]
pub struct EvaluationReport {
    pub rows: Vec<EvaluationRow>,
    /// Scans where estimation failed, with the failing timestamp.
    pub failures: Vec<(f64, EstimateError)>,
    pub summary: Option<ErrorSummary>,
}

/// An anchor's mean observed RSSI over a trace.
#[derive(Debug, Clone, PartialEq)]
pub struct BubbleDatum {
    pub anchor: AnchorId,
    pub position: Point2D,
    pub mean_rssi: PowerDbm,
}

#[derive(Debug)]
pub enum ReportError {
    MalformedTrace {
        line: usize,
        message: String,
    },
    MalformedAnchors {
        line: usize,
        message: String,
    },
    MalformedGroundTruth {
        line: usize,
        message: String,
    },
    /// A scan timestamp has no exact ground-truth match.
    MissingGroundTruth {
        timestamp_s: f64,
    },
    EmptyTrace,
    UnknownAnchorInTrace {
        anchor: AnchorId,
    },
    Io(std::io::Error),
}

impl fmt::Display for ReportError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ReportError::MalformedTrace { line, message } => {
                write!(f, "malformed trace at line {line}: {message}")
            }
            ReportError::MalformedAnchors { line, message } => {
                write!(f, "malformed anchors file at line {line}: {message}")
            }
            ReportError::MalformedGroundTruth { line, message } => {
                write!(f, "malformed ground-truth file at line {line}: {message}")
            }
            ReportError::MissingGroundTruth { timestamp_s } => {
                write!(f, "no ground-truth position for timestamp {timestamp_s}")
            }
            ReportError::EmptyTrace => write!(f, "trace contains no readings"),
            ReportError::UnknownAnchorInTrace { anchor } => {
                write!(
                    f,
                    "trace mentions anchor {anchor} absent from the anchor map"
                )
            }
            ReportError::Io(e) => write!(f, "i/o failed: {e}"),
        }
    }
}

impl std::error::Error for ReportError {}

impl From<std::io::Error> for ReportError {
    fn from(e: std::io::Error) -> Self {
        ReportError::Io(e)
    }
}

// ---------------------------------------------------------------------------
// Shared row scaffolding
// ---------------------------------------------------------------------------

type MkErr = fn(usize, String) -> ReportError;

fn malformed_trace(line: usize, message: String) -> ReportError {
    ReportError::MalformedTrace { line, message }
}

fn malformed_anchors(line: usize, message: String) -> ReportError {
    ReportError::MalformedAnchors { line, message }
}

fn malformed_truth(line: usize, message: String) -> ReportError {
    ReportError::MalformedGroundTruth { line, message }
}

/// Iterates data rows of a headered file, skipping comment lines.
struct Rows<'a> {
    lines: std::iter::Enumerate<std::str::Lines<'a>>,
    mk: MkErr,
}

impl<'a> Rows<'a> {
    /// Checks the version header and column row. Returns `None` for an
    /// entirely empty input.
    fn open(
        text: &'a str,
        header: &str,
        columns: &str,
        mk: MkErr,
    ) -> Result<Option<Self>, ReportError> {
        if text.trim().is_empty() {
            return Ok(None);
        }
        let mut lines = text.lines().enumerate();
        let (_, first) = lines.next().expect("non-empty text has a first line");
        if first.trim_end() != header {
            return Err(mk(1, format!("expected header '{header}'")));
        }
        let mut rows = Rows { lines, mk };
        match rows.next_row() {
            Some((_, line)) if line == columns => {}
            Some((lineno, line)) => {
                return Err(mk(
                    lineno,
                    format!("expected column header '{columns}', found '{line}'"),
                ))
            }
            None => return Err(mk(2, format!("missing column header '{columns}'"))),
        }
        Ok(Some(rows))
    }

    fn next_row(&mut self) -> Option<(usize, &'a str)> {
        loop {
            let (idx, line) = self.lines.next()?;
            if line.starts_with('#') {
                continue;
            }
            return Some((idx + 1, line.trim_end_matches('\r')));
        }
    }

    fn fields(
        &self,
        lineno: usize,
        line: &'a str,
        expected: usize,
    ) -> Result<Vec<&'a str>, ReportError> {
        if line.trim().is_empty() {
            return Err((self.mk)(lineno, "blank line".into()));
        }
        let fields: Vec<&str> = line.split(',').collect();
        if fields.len() != expected {
            return Err((self.mk)(
                lineno,
                format!("expected {expected} fields, found {}", fields.len()),
            ));
        }
        Ok(fields)
    }

    fn number(&self, lineno: usize, field: &str, name: &str) -> Result<f64, ReportError> {
        let v: f64 = field
            .parse()
            .map_err(|_| (self.mk)(lineno, format!("{name} '{field}' is not a number")))?;
        if !v.is_finite() {
            return Err((self.mk)(lineno, format!("{name} must be finite")));
        }
        Ok(v)
    }
}

fn push_header(out: &mut String, header: &str, extra: &[String], columns: &str) {
    out.push_str(header);
    out.push('\n');
    for line in extra {
        out.push_str(&format!("# {line}\n"));
    }
    out.push_str(columns);
    out.push('\n');
}

// ---------------------------------------------------------------------------
// Trace format
// ---------------------------------------------------------------------------

/// Parses a scan trace. Rows with the same timestamp form one record;
/// timestamps must be non-decreasing and `(timestamp, anchor)` unique.
pub fn parse_trace(text: &str) -> Result<Vec<ScanRecord>, ReportError> {
    let mut rows = match Rows::open(text, TRACE_HEADER, TRACE_COLUMNS, malformed_trace)? {
        Some(rows) => rows,
        None => return Ok(Vec::new()),
    };

    let mut records: Vec<ScanRecord> = Vec::new();
    while let Some((lineno, line)) = rows.next_row() {
        let fields = rows.fields(lineno, line, 3)?;
        let ts = rows.number(lineno, fields[0], "timestamp_s")?;
        if ts < 0.0 {
            return Err(malformed_trace(lineno, "timestamp_s must be >= 0".into()));
        }
        if fields[1].is_empty() {
            return Err(malformed_trace(lineno, "empty anchor id".into()));
        }
        let rssi = rows.number(lineno, fields[2], "rssi_dbm")?;

        let start_new = match records.last() {
            None => true,
            Some(last) if ts == last.timestamp_s => false,
            Some(last) if ts > last.timestamp_s => true,
            Some(last) => {
                return Err(malformed_trace(
                    lineno,
                    format!(
                        "timestamp {ts} decreases below previous record {}",
                        last.timestamp_s
                    ),
                ))
            }
        };
        if start_new {
            records.push(ScanRecord::new(ts));
        }
        let record = records.last_mut().expect("record exists");
        let anchor = AnchorId::new(fields[1]);
        if record.set_reading(anchor, PowerDbm(rssi)).is_some() {
            return Err(malformed_trace(
                lineno,
                format!(
                    "duplicate reading for anchor {} at timestamp {ts}",
                    fields[1]
                ),
            ));
        }
    }
    Ok(records)
}

/// Serializes a scan trace; `extra_header` lines become comments.
pub fn write_trace(records: &[ScanRecord], extra_header: &[String]) -> String {
    let mut out = String::new();
    push_header(&mut out, TRACE_HEADER, extra_header, TRACE_COLUMNS);
    for record in records {
        for (anchor, power) in &record.readings {
            out.push_str(&format!("{},{},{}\n", record.timestamp_s, anchor, power.0));
        }
    }
    out
}

// ---------------------------------------------------------------------------
// Anchors format
// ---------------------------------------------------------------------------

/// Parses an anchor layout; duplicate ids are rejected.
pub fn parse_anchors(text: &str) -> Result<AnchorMap, ReportError> {
    let mut rows = match Rows::open(text, ANCHORS_HEADER, ANCHORS_COLUMNS, malformed_anchors)? {
        Some(rows) => rows,
        None => return Ok(AnchorMap::new()),
    };
    let mut map = AnchorMap::new();
    while let Some((lineno, line)) = rows.next_row() {
        let fields = rows.fields(lineno, line, 3)?;
        if fields[0].is_empty() {
            return Err(malformed_anchors(lineno, "empty anchor id".into()));
        }
        let x = rows.number(lineno, fields[1], "x_cm")?;
        let y = rows.number(lineno, fields[2], "y_cm")?;
        let id = AnchorId::new(fields[0]);
        if map.insert(id, Point2D::new(x, y)).is_some() {
            return Err(malformed_anchors(
                lineno,
                format!("duplicate anchor id '{}'", fields[0]),
            ));
        }
    }
    Ok(map)
}

pub fn write_anchors(anchors: &AnchorMap, extra_header: &[String]) -> String {
    let mut out = String::new();
    push_header(&mut out, ANCHORS_HEADER, extra_header, ANCHORS_COLUMNS);
    for (id, pos) in anchors.iter() {
        out.push_str(&format!("{},{},{}\n", id, pos.x, pos.y));
    }
    out
}

// ---------------------------------------------------------------------------
// Ground-truth format
// ---------------------------------------------------------------------------

/// Parses ground truth; duplicate timestamps are rejected so matching
/// stays unambiguous.
pub fn parse_ground_truth(text: &str) -> Result<Vec<(f64, Point2D)>, ReportError> {
    let mut rows = match Rows::open(text, TRUTH_HEADER, TRUTH_COLUMNS, malformed_truth)? {
        Some(rows) => rows,
        None => return Ok(Vec::new()),
    };
    let mut out: Vec<(f64, Point2D)> = Vec::new();
    let mut seen: HashMap<u64, usize> = HashMap::new();
    while let Some((lineno, line)) = rows.next_row() {
        let fields = rows.fields(lineno, line, 3)?;
        let ts = rows.number(lineno, fields[0], "timestamp_s")?;
        if ts < 0.0 {
            return Err(malformed_truth(lineno, "timestamp_s must be >= 0".into()));
        }
        let x = rows.number(lineno, fields[1], "x_cm")?;
        let y = rows.number(lineno, fields[2], "y_cm")?;
        if seen.insert(ts.to_bits(), lineno).is_some() {
            return Err(malformed_truth(lineno, format!("duplicate timestamp {ts}")));
        }
        out.push((ts, Point2D::new(x, y)));
    }
    Ok(out)
}

pub fn write_ground_truth(rows: &[(f64, Point2D)], extra_header: &[String]) -> String {
    let mut out = String::new();
    push_header(&mut out, TRUTH_HEADER, extra_header, TRUTH_COLUMNS);
    for (ts, pos) in rows {
        out.push_str(&format!("{},{},{}\n", ts, pos.x, pos.y));
    }
    out
}

// ---------------------------------------------------------------------------
// Evaluation
// ---------------------------------------------------------------------------

/// Euclidean distance between an estimate and the actual position, in cm.
pub fn position_error(estimated: Point2D, actual: Point2D) -> f64 {
    estimated.distance_to(actual)
}

/// Replays a trace through the estimator against exact-timestamp ground
/// truth. Estimation failures become counted failure entries, not errors;
/// a scan without a ground-truth match is an error.
pub fn evaluate_trace(
    trace: &[ScanRecord],
    ground_truth: &[(f64, Point2D)],
    db: &CalibrationDatabase,
    anchors: &AnchorMap,
    config: &EstimatorConfig,
) -> Result<EvaluationReport, ReportError> {
    let truth_by_ts: HashMap<u64, Point2D> = ground_truth
        .iter()
        .map(|(ts, p)| (ts.to_bits(), *p))
        .collect();

    let mut rows = Vec::new();
    let mut failures = Vec::new();
    for scan in trace {
        let actual = *truth_by_ts.get(&scan.timestamp_s.to_bits()).ok_or(
            ReportError::MissingGroundTruth {
                timestamp_s: scan.timestamp_s,
            },
        )?;
        match locate(scan, db, anchors, config) {
            Ok(estimate) => rows.push(EvaluationRow::new(estimate.position, actual)),
            Err(e) => failures.push((scan.timestamp_s, e)),
        }
    }

    rows.sort_by(|a, b| a.error_cm.total_cmp(&b.error_cm));
    let summary = summarize(&rows);
    Ok(EvaluationReport {
        rows,
        failures,
        summary,
    })
}

fn summarize(rows: &[EvaluationRow]) -> Option<ErrorSummary> {
    if rows.is_empty() {
        return None;
    }
    let n = rows.len();
    let median_cm = if n % 2 == 1 {
        rows[n / 2].error_cm
    } else {
        (rows[n / 2 - 1].error_cm + rows[n / 2].error_cm) / 2.0
    };
    Some(ErrorSummary {
        min_cm: rows[0].error_cm,
        median_cm,
        max_cm: rows[n - 1].error_cm,
    })
}

/// Serializes an evaluation report. Coordinates keep full precision; the
/// error column is fixed to two decimals. A summary block closes the file.
pub fn write_report(report: &EvaluationReport, extra_header: &[String]) -> String {
    let mut out = String::new();
    push_header(&mut out, REPORT_HEADER, extra_header, REPORT_COLUMNS);
    for row in &report.rows {
        out.push_str(&format!(
            "{},{},{},{},{:.2}\n",
            row.estimated.x, row.estimated.y, row.actual.x, row.actual.y, row.error_cm
        ));
    }
    out.push_str(&format!(
        "# rows={} failures={}\n",
        report.rows.len(),
        report.failures.len()
    ));
    if let Some(s) = &report.summary {
        out.push_str(&format!(
            "# min_cm={:.2} median_cm={:.2} max_cm={:.2}\n",
            s.min_cm, s.median_cm, s.max_cm
        ));
    }
    out
}

// ---------------------------------------------------------------------------
// Bubble map
// ---------------------------------------------------------------------------

/// Per-anchor mean RSSI over a trace, in anchor-id order.
pub fn compute_bubbles(
    trace: &[ScanRecord],
    anchors: &AnchorMap,
) -> Result<Vec<BubbleDatum>, ReportError> {
    let mut sums: BTreeMap<AnchorId, (f64, usize)> = BTreeMap::new();
    let mut total = 0usize;
    for scan in trace {
        for (anchor, power) in &scan.readings {
            if !anchors.contains(anchor) {
                return Err(ReportError::UnknownAnchorInTrace {
                    anchor: anchor.clone(),
                });
            }
            let slot = sums.entry(anchor.clone()).or_insert((0.0, 0));
            slot.0 += power.0;
            slot.1 += 1;
            total += 1;
        }
    }
    if total == 0 {
        return Err(ReportError::EmptyTrace);
    }
    Ok(sums
        .into_iter()
        .map(|(anchor, (sum, count))| BubbleDatum {
            position: anchors.get(&anchor).expect("checked above"),
            anchor,
            mean_rssi: PowerDbm(sum / count as f64),
        })
        .collect())
}

/// Affine radius for a mean RSSI over the observed `[weakest, strongest]`
/// range; a degenerate range maps everything to the middle radius.
pub fn bubble_radius(mean: f64, weakest: f64, strongest: f64) -> f64 {
    let span = strongest - weakest;
    if span <= f64::EPSILON {
        return (BUBBLE_MIN_RADIUS_CM + BUBBLE_MAX_RADIUS_CM) / 2.0;
    }
    BUBBLE_MIN_RADIUS_CM + (BUBBLE_MAX_RADIUS_CM - BUBBLE_MIN_RADIUS_CM) * (mean - weakest) / span
}

/// Renders the bubble map as an SVG string plus the underlying data.
///
/// One circle per observed anchor, radius from [`bubble_radius`]; when
/// ground truth is given, its mean position is drawn as a distinct robot
/// marker.
pub fn render_bubble_map(
    trace: &[ScanRecord],
    anchors: &AnchorMap,
    ground_truth: Option<&[(f64, Point2D)]>,
) -> Result<(String, Vec<BubbleDatum>), ReportError> {
    let bubbles = compute_bubbles(trace, anchors)?;

    let robot = ground_truth.filter(|g| !g.is_empty()).map(|g| {
        let n = g.len() as f64;
        let (sx, sy) = g
            .iter()
            .fold((0.0, 0.0), |(sx, sy), (_, p)| (sx + p.x, sy + p.y));
        Point2D::new(sx / n, sy / n)
    });

    let weakest = bubbles
        .iter()
        .map(|b| b.mean_rssi.0)
        .fold(f64::INFINITY, f64::min);
    let strongest = bubbles
        .iter()
        .map(|b| b.mean_rssi.0)
        .fold(f64::NEG_INFINITY, f64::max);

    let mut min_x = f64::INFINITY;
    let mut min_y = f64::INFINITY;
    let mut max_x = f64::NEG_INFINITY;
    let mut max_y = f64::NEG_INFINITY;
    for p in bubbles.iter().map(|b| b.position).chain(robot) {
        min_x = min_x.min(p.x);
        min_y = min_y.min(p.y);
        max_x = max_x.max(p.x);
        max_y = max_y.max(p.y);
    }
    let pad = 1.5 * BUBBLE_MAX_RADIUS_CM;
    let width = (max_x - min_x) + 2.0 * pad;
    let height = (max_y - min_y) + 2.0 * pad;
    // SVG y grows downward; flip so the floor's +y points up.
    let sx = |x: f64| x - min_x + pad;
    let sy = |y: f64| (max_y - y) + pad;

    let mut svg = String::new();
    svg.push_str(&format!(
        "<svg xmlns=\"http://www.w3.org/2000/svg\" viewBox=\"0 0 {width} {height}\">\n"
    ));
    svg.push_str(&format!(
        "  <rect x=\"0\" y=\"0\" width=\"{width}\" height=\"{height}\" fill=\"white\"/>\n"
    ));
    for b in &bubbles {
        let r = bubble_radius(b.mean_rssi.0, weakest, strongest);
        svg.push_str(&format!(
            "  <circle cx=\"{}\" cy=\"{}\" r=\"{}\" fill=\"#4682b4\" fill-opacity=\"0.45\" stroke=\"#1f3a5f\"/>\n",
            sx(b.position.x),
            sy(b.position.y),
            r
        ));
        svg.push_str(&format!(
            "  <text x=\"{}\" y=\"{}\" font-size=\"48\" text-anchor=\"middle\">{} ({:.1} dBm)</text>\n",
            sx(b.position.x),
            sy(b.position.y) - r - 12.0,
            b.anchor,
            b.mean_rssi.0
        ));
    }
    if let Some(robot) = robot {
        svg.push_str(&format!(
            "  <circle cx=\"{}\" cy=\"{}\" r=\"30\" fill=\"#2e8b57\" stroke=\"black\" stroke-width=\"4\"/>\n",
            sx(robot.x),
            sy(robot.y)
        ));
        svg.push_str(&format!(
            "  <text x=\"{}\" y=\"{}\" font-size=\"48\" text-anchor=\"middle\">robot</text>\n",
            sx(robot.x),
            sy(robot.y) + 78.0
        ));
    }
    svg.push_str("</svg>\n");
    Ok((svg, bubbles))
}

pub fn write_bubble_table(bubbles: &[BubbleDatum], extra_header: &[String]) -> String {
    let mut out = String::new();
    push_header(&mut out, BUBBLES_HEADER, extra_header, BUBBLES_COLUMNS);
    for b in bubbles {
        out.push_str(&format!(
            "{},{},{},{}\n",
            b.anchor, b.position.x, b.position.y, b.mean_rssi.0
        ));
    }
    out
}

/// Renders the bubble map and writes both artifacts atomically.
pub fn emit_bubble_map(
    trace: &[ScanRecord],
    anchors: &AnchorMap,
    ground_truth: Option<&[(f64, Point2D)]>,
    svg_path: &Path,
    table_path: &Path,
) -> Result<Vec<BubbleDatum>, ReportError> {
    let (svg, bubbles) = render_bubble_map(trace, anchors, ground_truth)?;
    fsio::write_atomic(svg_path, &svg)?;
    fsio::write_atomic(table_path, &write_bubble_table(&bubbles, &[]))?;
    Ok(bubbles)
}

// ---------------------------------------------------------------------------
// File wrappers
// ---------------------------------------------------------------------------

pub fn load_trace(path: &Path) -> Result<Vec<ScanRecord>, ReportError> {
    parse_trace(&std::fs::read_to_string(path)?)
}

pub fn save_trace(
    path: &Path,
    records: &[ScanRecord],
    extra_header: &[String],
) -> Result<(), ReportError> {
    fsio::write_atomic(path, &write_trace(records, extra_header))?;
    Ok(())
}

pub fn load_anchors(path: &Path) -> Result<AnchorMap, ReportError> {
    parse_anchors(&std::fs::read_to_string(path)?)
}

pub fn save_anchors(
    path: &Path,
    anchors: &AnchorMap,
    extra_header: &[String],
) -> Result<(), ReportError> {
    fsio::write_atomic(path, &write_anchors(anchors, extra_header))?;
    Ok(())
}

pub fn load_ground_truth(path: &Path) -> Result<Vec<(f64, Point2D)>, ReportError> {
    parse_ground_truth(&std::fs::read_to_string(path)?)
}

pub fn save_ground_truth(
    path: &Path,
    rows: &[(f64, Point2D)],
    extra_header: &[String],
) -> Result<(), ReportError> {
    fsio::write_atomic(path, &write_ground_truth(rows, extra_header))?;
    Ok(())
}

pub fn save_report(
    path: &Path,
    report: &EvaluationReport,
    extra_header: &[String],
) -> Result<(), ReportError> {
    fsio::write_atomic(path, &write_report(report, extra_header))?;
    Ok(())
}
