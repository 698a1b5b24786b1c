//! Calibration stage: turn scans taken at known positions into a reference
//! database.
//!
//! At each known position the strongest `m` anchor readings are paired with
//! their true distances and stored; every unordered pair of those readings
//! contributes one path-loss exponent sample. Batches from several known
//! positions are merged into a [`CalibrationDatabase`] whose `alpha_hat` is
//! the mean over all pooled samples.

use std::collections::BTreeMap;
use std::fmt;
use std::path::Path;

use crate::fsio;
use crate::geometry::{Point2D, COINCIDENT_CENTER_EPS_CM};
use crate::pathloss::{
    aggregate_alpha, alpha_from_pair, DistanceCm, PathLossError, PathLossExponent, PowerDbm,
};
use crate::report::ScanRecord;

/// Opaque anchor identifier; doubles as the SSID in trace files.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct AnchorId(String);

impl AnchorId {
    /// Panics on an empty id; parsers reject those before construction.
    pub fn new(id: impl Into<String>) -> Self {
        let id = id.into();
        assert!(!id.is_empty(), "anchor id must be non-empty");
        Self(id)
    }

    pub fn as_str(&self) -> &str {
        &self.0
    }
}

impl fmt::Display for AnchorId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.0)
    }
}

/// Fixed-node coordinates keyed by anchor id. Iteration order is the id
/// order, which keeps every downstream computation deterministic.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct AnchorMap {
    anchors: BTreeMap<AnchorId, Point2D>,
}

impl AnchorMap {
    pub fn new() -> Self {
        Self::default()
    }

    /// Inserts an anchor, returning the previous position if the id existed.
    pub fn insert(&mut self, id: AnchorId, position: Point2D) -> Option<Point2D> {
        self.anchors.insert(id, position)
    }

    pub fn get(&self, id: &AnchorId) -> Option<Point2D> {
        self.anchors.get(id).copied()
    }

    pub fn contains(&self, id: &AnchorId) -> bool {
        self.anchors.contains_key(id)
    }

    pub fn len(&self) -> usize {
        self.anchors.len()
    }

    pub fn is_empty(&self) -> bool {
        self.anchors.is_empty()
    }

    pub fn iter(&self) -> impl Iterator<Item = (&AnchorId, &Point2D)> {
        self.anchors.iter()
    }

    pub fn positions(&self) -> impl Iterator<Item = Point2D> + '_ {
        self.anchors.values().copied()
    }
}

/// One reference measurement: what an anchor's signal looked like from a
/// known distance.
#[derive(Debug, Clone, PartialEq)]
pub struct CalibrationEntry {
    pub anchor: AnchorId,
    pub power: PowerDbm,
    pub distance: DistanceCm,
    /// Known position the measurement was taken from.
    pub source_position: Point2D,
}

/// Output of calibrating at a single known position.
#[derive(Debug, Clone, PartialEq)]
pub struct CalibrationBatch {
    pub entries: Vec<CalibrationEntry>,
    pub alpha_samples: Vec<PathLossExponent>,
    /// Anchors used per calibration point (the batch's `m`).
    pub m: usize,
    /// Pairs dropped because their distances were effectively equal.
    pub skipped_equal_distance_pairs: usize,
}

/// Reference entries plus the aggregated exponent estimate.
#[derive(Debug, Clone, PartialEq)]
pub struct CalibrationDatabase {
    pub entries: Vec<CalibrationEntry>,
    pub alpha_hat: PathLossExponent,
    pub alpha_samples: Vec<PathLossExponent>,
    pub m: usize,
}

#[derive(Debug, Clone, PartialEq)]
pub enum CalibrationError {
    /// Fewer usable readings than the requested `m`.
    InsufficientAnchors { needed: usize, found: usize },
    /// The known position coincides with an anchor.
    AnchorAtCalibrationPoint { anchor: AnchorId },
    /// `m` must be at least 2 to form exponent pairs.
    MTooSmall { m: usize },
    /// No batch contributed a single exponent sample.
    NoAlphaSamples,
    /// Batches were calibrated with different `m` values.
    MixedM { expected: usize, found: usize },
}

impl fmt::Display for CalibrationError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            CalibrationError::InsufficientAnchors { needed, found } => write!(
                f,
                "scan has {found} usable anchor readings, calibration needs {needed}"
            ),
            CalibrationError::AnchorAtCalibrationPoint { anchor } => {
                write!(f, "calibration position coincides with anchor {anchor}")
            }
            CalibrationError::MTooSmall { m } => {
                write!(f, "m = {m} is too small; at least 2 anchors are required")
            }
            CalibrationError::NoAlphaSamples => {
                write!(f, "no path-loss exponent samples to aggregate")
            }
            CalibrationError::MixedM { expected, found } => {
                write!(
                    f,
                    "batches disagree on m: expected {expected}, found {found}"
                )
            }
        }
    }
}

impl std::error::Error for CalibrationError {}

/// Calibrates at one known position.
///
/// The `m` strongest readings among anchors known to the map are kept
/// (ties broken by ascending anchor id); each becomes a reference entry
/// with its true distance, and every unordered pair yields one exponent
/// sample. Pairs with effectively equal distances are skipped and counted.
pub fn calibrate_at(
    known_position: Point2D,
    scan: &ScanRecord,
    anchors: &AnchorMap,
    m: usize,
) -> Result<CalibrationBatch, CalibrationError> {
    if m < 2 {
        return Err(CalibrationError::MTooSmall { m });
    }
    for (id, pos) in anchors.iter() {
        if known_position.distance_to(*pos) <= COINCIDENT_CENTER_EPS_CM {
            return Err(CalibrationError::AnchorAtCalibrationPoint { anchor: id.clone() });
        }
    }

    let mut usable: Vec<(&AnchorId, PowerDbm)> = scan
        .readings
        .iter()
        .filter(|(id, _)| anchors.contains(id))
        .map(|(id, p)| (id, *p))
        .collect();
    if usable.len() < m {
        return Err(CalibrationError::InsufficientAnchors {
            needed: m,
            found: usable.len(),
        });
    }
    usable.sort_by(|a, b| b.1 .0.total_cmp(&a.1 .0).then_with(|| a.0.cmp(b.0)));
    usable.truncate(m);

    let entries: Vec<CalibrationEntry> = usable
        .iter()
        .map(|(id, power)| CalibrationEntry {
            anchor: (*id).clone(),
            power: *power,
            distance: DistanceCm(known_position.distance_to(anchors.get(id).unwrap())),
            source_position: known_position,
        })
        .collect();

    let mut alpha_samples = Vec::with_capacity(m * (m - 1) / 2);
    let mut skipped = 0;
    for i in 0..entries.len() {
        for j in (i + 1)..entries.len() {
            match alpha_from_pair(
                entries[i].power,
                entries[i].distance,
                entries[j].power,
                entries[j].distance,
            ) {
                Ok(alpha) => alpha_samples.push(alpha),
                Err(PathLossError::EqualDistances) => skipped += 1,
                Err(other) => unreachable!("distances are positive by construction: {other}"),
            }
        }
    }

    Ok(CalibrationBatch {
        entries,
        alpha_samples,
        m,
        skipped_equal_distance_pairs: skipped,
    })
}

/// Merges batches from several known positions into one database.
///
/// Entries are concatenated in batch order and `alpha_hat` is the mean over
/// all pooled exponent samples, unweighted.
pub fn merge_calibrations(
    batches: &[CalibrationBatch],
) -> Result<CalibrationDatabase, CalibrationError> {
    let m = match batches.first() {
        Some(b) => b.m,
        None => return Err(CalibrationError::NoAlphaSamples),
    };
    let mut entries = Vec::new();
    let mut alpha_samples = Vec::new();
    for batch in batches {
        if batch.m != m {
            return Err(CalibrationError::MixedM {
                expected: m,
                found: batch.m,
            });
        }
        entries.extend(batch.entries.iter().cloned());
        alpha_samples.extend(batch.alpha_samples.iter().copied());
    }
    let alpha_hat =
        aggregate_alpha(&alpha_samples).map_err(|_| CalibrationError::NoAlphaSamples)?;
    Ok(CalibrationDatabase {
        entries,
        alpha_hat,
        alpha_samples,
        m,
    })
}

// ---------------------------------------------------------------------------
// Database file format
// ---------------------------------------------------------------------------

pub const DATABASE_HEADER: &str = "# lateration-caldb v1";
const DATABASE_COLUMNS: &str = "anchor_id,power_dbm,distance_cm,source_x_cm,source_y_cm";

#[derive(Debug)]
pub enum DatabaseError {
    Io(std::io::Error),
    Malformed { line: usize, message: String },
}

impl fmt::Display for DatabaseError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            DatabaseError::Io(e) => write!(f, "database i/o failed: {e}"),
            DatabaseError::Malformed { line, message } => {
                write!(f, "malformed database at line {line}: {message}")
            }
        }
    }
}

impl std::error::Error for DatabaseError {}

impl From<std::io::Error> for DatabaseError {
    fn from(e: std::io::Error) -> Self {
        DatabaseError::Io(e)
    }
}

fn malformed(line: usize, message: impl Into<String>) -> DatabaseError {
    DatabaseError::Malformed {
        line,
        message: message.into(),
    }
}

/// Serializes a database to the versioned text format. `extra_header`
/// lines are embedded as comments right after the version line.
pub fn write_database(db: &CalibrationDatabase, extra_header: &[String]) -> String {
    let mut out = String::new();
    out.push_str(DATABASE_HEADER);
    out.push('\n');
    for line in extra_header {
        out.push_str(&format!("# {line}\n"));
    }
    out.push_str(&format!("m={}\n", db.m));
    out.push_str(&format!("alpha_hat={}\n", db.alpha_hat.0));
    let samples: Vec<String> = db.alpha_samples.iter().map(|a| a.0.to_string()).collect();
    out.push_str(&format!("alpha_samples={}\n", samples.join(",")));
    out.push_str(DATABASE_COLUMNS);
    out.push('\n');
    for e in &db.entries {
        out.push_str(&format!(
            "{},{},{},{},{}\n",
            e.anchor, e.power.0, e.distance.0, e.source_position.x, e.source_position.y
        ));
    }
    out
}

/// Parses the text format back into a database, validating its invariants.
pub fn parse_database(text: &str) -> Result<CalibrationDatabase, DatabaseError> {
    let mut lines = text.lines().enumerate();

    let (_, first) = lines.next().ok_or_else(|| malformed(1, "empty file"))?;
    if first.trim_end() != DATABASE_HEADER {
        return Err(malformed(1, format!("expected header '{DATABASE_HEADER}'")));
    }

    fn next_data<'a>(
        lines: &mut std::iter::Enumerate<std::str::Lines<'a>>,
    ) -> Option<(usize, &'a str)> {
        loop {
            let (idx, line) = lines.next()?;
            if line.starts_with('#') {
                continue;
            }
            return Some((idx + 1, line.trim_end_matches('\r')));
        }
    }

    let parse_field = |lineno: usize, line: &str, key: &str| -> Result<String, DatabaseError> {
        line.strip_prefix(&format!("{key}="))
            .map(str::to_owned)
            .ok_or_else(|| malformed(lineno, format!("expected '{key}=<value>'")))
    };

    let (lm, line) = next_data(&mut lines).ok_or_else(|| malformed(2, "missing m field"))?;
    let m: usize = parse_field(lm, line, "m")?
        .parse()
        .map_err(|_| malformed(lm, "m is not an integer"))?;
    if m < 2 {
        return Err(malformed(lm, format!("m = {m} violates m >= 2")));
    }

    let (la, line) =
        next_data(&mut lines).ok_or_else(|| malformed(lm + 1, "missing alpha_hat field"))?;
    let alpha_hat: f64 = parse_field(la, line, "alpha_hat")?
        .parse()
        .map_err(|_| malformed(la, "alpha_hat is not a number"))?;
    if !alpha_hat.is_finite() {
        return Err(malformed(la, "alpha_hat is not finite"));
    }

    let (ls, line) =
        next_data(&mut lines).ok_or_else(|| malformed(la + 1, "missing alpha_samples field"))?;
    let raw = parse_field(ls, line, "alpha_samples")?;
    let mut alpha_samples = Vec::new();
    for part in raw.split(',') {
        if part.is_empty() {
            return Err(malformed(ls, "empty alpha sample"));
        }
        let v: f64 = part
            .parse()
            .map_err(|_| malformed(ls, format!("alpha sample '{part}' is not a number")))?;
        if !v.is_finite() {
            return Err(malformed(ls, "alpha sample is not finite"));
        }
        alpha_samples.push(PathLossExponent(v));
    }

    let (lc, line) =
        next_data(&mut lines).ok_or_else(|| malformed(ls + 1, "missing column header"))?;
    if line != DATABASE_COLUMNS {
        return Err(malformed(
            lc,
            format!("expected columns '{DATABASE_COLUMNS}'"),
        ));
    }

    let mut entries = Vec::new();
    while let Some((lineno, line)) = next_data(&mut lines) {
        if line.is_empty() {
            return Err(malformed(lineno, "blank line inside record section"));
        }
        let fields: Vec<&str> = line.split(',').collect();
        if fields.len() != 5 {
            return Err(malformed(
                lineno,
                format!("expected 5 fields, found {}", fields.len()),
            ));
        }
        if fields[0].is_empty() {
            return Err(malformed(lineno, "empty anchor id"));
        }
        let num = |field: &str, name: &str| -> Result<f64, DatabaseError> {
            let v: f64 = field
                .parse()
                .map_err(|_| malformed(lineno, format!("{name} '{field}' is not a number")))?;
            if !v.is_finite() {
                return Err(malformed(lineno, format!("{name} is not finite")));
            }
            Ok(v)
        };
        let power = num(fields[1], "power_dbm")?;
        let distance = num(fields[2], "distance_cm")?;
        if distance <= 0.0 {
            return Err(malformed(lineno, "distance_cm must be positive"));
        }
        let x = num(fields[3], "source_x_cm")?;
        let y = num(fields[4], "source_y_cm")?;
        entries.push(CalibrationEntry {
            anchor: AnchorId::new(fields[0]),
            power: PowerDbm(power),
            distance: DistanceCm(distance),
            source_position: Point2D::new(x, y),
        });
    }

    if entries.is_empty() {
        return Err(malformed(lc + 1, "database has no reference entries"));
    }
    if alpha_samples.is_empty() {
        return Err(malformed(ls, "alpha_samples is empty"));
    }
    let recomputed = aggregate_alpha(&alpha_samples).expect("non-empty").0;
    if (recomputed - alpha_hat).abs() > 1e-9 * recomputed.abs().max(1.0) {
        return Err(malformed(
            la,
            format!("alpha_hat {alpha_hat} is not the mean of alpha_samples ({recomputed})"),
        ));
    }

    Ok(CalibrationDatabase {
        entries,
        alpha_hat: PathLossExponent(alpha_hat),
        alpha_samples,
        m,
    })
}

/// Writes a database file atomically (write-then-rename).
pub fn save_database(db: &CalibrationDatabase, path: &Path) -> Result<(), DatabaseError> {
    fsio::write_atomic(path, &write_database(db, &[]))?;
    Ok(())
}

/// Loads and validates a database file.
pub fn load_database(path: &Path) -> Result<CalibrationDatabase, DatabaseError> {
    let text = std::fs::read_to_string(path)?;
    parse_database(&text)
}
