//! Region grounding of atomic propositions, trajectory ingestion, and
//! per-candidate robustness reports.

use std::collections::BTreeMap;
use std::fmt;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::pipeline::CandidateSet;
use crate::stl::{self, extent, RobustnessError};

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Point {
    pub x: f64,
    pub y: f64,
}

impl Point {
    pub fn new(x: f64, y: f64) -> Self {
        Point { x, y }
    }
}

/// Axis-aligned box `[xmin, xmax] x [ymin, ymax]`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Region {
    pub xmin: f64,
    pub ymin: f64,
    pub xmax: f64,
    pub ymax: f64,
}

impl Region {
    pub fn new(xmin: f64, ymin: f64, xmax: f64, ymax: f64) -> Result<Self, RegionError> {
        // Written so NaN bounds also fail.
        if !(xmin < xmax && ymin < ymax) {
            return Err(RegionError::Degenerate { line: 0 });
        }
        Ok(Region { xmin, ymin, xmax, ymax })
    }

    pub fn translated(&self, dx: f64, dy: f64) -> Self {
        Region { xmin: self.xmin + dx, ymin: self.ymin + dy, xmax: self.xmax + dx, ymax: self.ymax + dy }
    }
}

/// Signed margin `h(z)`: positive strictly inside, zero on the boundary,
/// negative outside.
pub fn region_margin(region: &Region, point: Point) -> f64 {
    (point.x - region.xmin)
        .min(region.xmax - point.x)
        .min(point.y - region.ymin)
        .min(region.ymax - point.y)
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum RegionError {
    #[error("line {line}: expected `name: xmin ymin xmax ymax`")]
    Malformed { line: usize },
    #[error("line {line}: degenerate box (need xmin < xmax and ymin < ymax)")]
    Degenerate { line: usize },
    #[error("line {line}: region `{name}` defined twice")]
    Duplicate { line: usize, name: String },
}

/// Named regions. Names are case-insensitive, so region `b` grounds `phi_B`.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct RegionMap {
    regions: BTreeMap<String, Region>,
}

impl RegionMap {
    pub fn new() -> Self {
        Self::default()
    }

    fn key(name: &str) -> String {
        name.to_ascii_uppercase()
    }

    /// Fails if `name` is already taken.
    pub fn insert(&mut self, name: &str, region: Region) -> Result<(), RegionError> {
        let key = Self::key(name);
        if self.regions.contains_key(&key) {
            return Err(RegionError::Duplicate { line: 0, name: name.to_string() });
        }
        self.regions.insert(key, region);
        Ok(())
    }

    pub fn get(&self, name: &str) -> Option<&Region> {
        self.regions.get(&Self::key(name))
    }

    pub fn iter(&self) -> impl Iterator<Item = (&str, &Region)> {
        self.regions.iter().map(|(k, v)| (k.as_str(), v))
    }

    pub fn translated(&self, dx: f64, dy: f64) -> Self {
        RegionMap {
            regions: self.regions.iter().map(|(k, r)| (k.clone(), r.translated(dx, dy))).collect(),
        }
    }
}

/// Parses lines of `name: xmin ymin xmax ymax`. Blank lines and `#` comments
/// are skipped.
pub fn load_regions(source: &str) -> Result<RegionMap, RegionError> {
    let mut map = RegionMap::new();
    for (idx, raw) in source.lines().enumerate() {
        let line_no = idx + 1;
        let line = raw.split('#').next().unwrap().trim();
        if line.is_empty() {
            continue;
        }
        let malformed = RegionError::Malformed { line: line_no };
        let (name, coords) = line.split_once(':').ok_or(malformed.clone())?;
        let name = name.trim();
        if name.is_empty() || name.contains(char::is_whitespace) {
            return Err(malformed);
        }
        let nums: Vec<f64> = coords
            .split_whitespace()
            .map(str::parse)
            .collect::<Result<_, _>>()
            .map_err(|_| malformed.clone())?;
        let [xmin, ymin, xmax, ymax] = nums[..] else {
            return Err(malformed);
        };
        let region = Region::new(xmin, ymin, xmax, ymax)
            .map_err(|_| RegionError::Degenerate { line: line_no })?;
        map.insert(name, region).map_err(|_| RegionError::Duplicate {
            line: line_no,
            name: name.to_string(),
        })?;
    }
    Ok(map)
}

/// A non-empty sequence of 2-D states at unit time steps `t = 0..=T`.
#[derive(Debug, Clone, PartialEq)]
pub struct Trajectory {
    states: Vec<Point>,
}

#[derive(Debug, Error)]
pub enum TrajectoryError {
    #[error("trajectory has no samples")]
    Empty,
    #[error("row {row}: expected t={expected}, found {found}")]
    Gap { row: usize, expected: u64, found: String },
    #[error("trajectory csv: {0}")]
    Csv(#[from] csv::Error),
}

impl Trajectory {
    pub fn new(states: Vec<Point>) -> Result<Self, TrajectoryError> {
        if states.is_empty() {
            return Err(TrajectoryError::Empty);
        }
        Ok(Trajectory { states })
    }

    pub fn states(&self) -> &[Point] {
        &self.states
    }

    /// Index of the last sample, `T`.
    pub fn last(&self) -> usize {
        self.states.len() - 1
    }

    pub fn len(&self) -> usize {
        self.states.len()
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    pub fn translated(&self, dx: f64, dy: f64) -> Self {
        Trajectory { states: self.states.iter().map(|p| Point::new(p.x + dx, p.y + dy)).collect() }
    }
}

#[derive(Debug, Deserialize)]
struct Row {
    t: String,
    x: f64,
    y: f64,
}

/// Reads a CSV with header `t,x,y`; `t` must run 0, 1, 2, ... without gaps.
pub fn load_trajectory(source: &str) -> Result<Trajectory, TrajectoryError> {
    let mut reader = csv::ReaderBuilder::new().trim(csv::Trim::All).from_reader(source.as_bytes());
    let mut states = Vec::new();
    for (idx, row) in reader.deserialize::<Row>().enumerate() {
        let row = row?;
        let expected = idx as u64;
        if row.t.parse::<u64>().ok() != Some(expected) {
            return Err(TrajectoryError::Gap { row: idx + 1, expected, found: row.t });
        }
        states.push(Point::new(row.x, row.y));
    }
    Trajectory::new(states)
}

/// One evaluated candidate.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct RobustnessRow {
    pub formula: String,
    pub probability: f64,
    /// `None` when evaluation failed; see `error`.
    pub robustness: Option<f64>,
    pub satisfied: Option<bool>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub error: Option<RowError>,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
#[serde(tag = "kind", rename_all = "kebab-case")]
pub enum RowError {
    /// The trajectory ends before the formula's temporal extent.
    HorizonExceeded { extent: u32, last: usize },
    UnknownAtom { atom: String },
    Evaluation { message: String },
}

impl fmt::Display for RowError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            RowError::HorizonExceeded { extent, last } => {
                write!(f, "horizon-exceeded (extent {extent} > T={last})")
            }
            RowError::UnknownAtom { atom } => write!(f, "unknown atom phi_{atom}"),
            RowError::Evaluation { message } => f.write_str(message),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct RobustnessReport {
    pub rows: Vec<RobustnessRow>,
}

impl RobustnessReport {
    /// Atoms that failed to ground, in row order, without repeats.
    pub fn unknown_atoms(&self) -> Vec<&str> {
        let mut out: Vec<&str> = Vec::new();
        for row in &self.rows {
            if let Some(RowError::UnknownAtom { atom }) = &row.error {
                if !out.contains(&atom.as_str()) {
                    out.push(atom);
                }
            }
        }
        out
    }
}

/// Robustness at `t = 0` of every candidate.
///
/// A candidate whose extent reaches past the last sample is reported as
/// horizon-exceeded instead of being judged on a truncated window. Failures
/// stay on their row; the report itself never fails.
pub fn evaluate_candidates(set: &CandidateSet, x: &Trajectory, regions: &RegionMap) -> RobustnessReport {
    let rows = set
        .candidates
        .iter()
        .map(|c| {
            let formula = c.formula.to_string();
            let result = evaluate_one(&c.formula, x, regions);
            let (robustness, error) = match result {
                Ok(r) => (Some(r), None),
                Err(e) => (None, Some(e)),
            };
            RobustnessRow {
                formula,
                probability: c.probability,
                robustness,
                satisfied: robustness.map(|r| r > 0.0),
                error,
            }
        })
        .collect();
    RobustnessReport { rows }
}

fn evaluate_one(formula: &stl::Formula, x: &Trajectory, regions: &RegionMap) -> Result<f64, RowError> {
    if let Some(atom) = formula.atoms().into_iter().find(|a| regions.get(a).is_none()) {
        return Err(RowError::UnknownAtom { atom: atom.to_string() });
    }
    let horizon = extent(formula);
    if horizon as usize > x.last() {
        return Err(RowError::HorizonExceeded { extent: horizon, last: x.last() });
    }
    stl::robustness(formula, x, regions, 0).map_err(|e| match e {
        RobustnessError::UnknownAtom(atom) => RowError::UnknownAtom { atom },
        other => RowError::Evaluation { message: other.to_string() },
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn unit_box() -> Region {
        Region::new(0.0, 0.0, 1.0, 1.0).unwrap()
    }

    #[test]
    fn margin_center_outside_boundary() {
        assert_eq!(region_margin(&unit_box(), Point::new(0.5, 0.5)), 0.5);
        assert_eq!(region_margin(&unit_box(), Point::new(2.0, 0.5)), -1.0);
        assert_eq!(region_margin(&unit_box(), Point::new(1.0, 0.5)), 0.0);
    }

    #[test]
    fn loads_region_lines() {
        let map = load_regions("# regions\nb: 4 4 6 6\n\na: 0 0 1 2\n").unwrap();
        assert_eq!(map.get("b"), Some(&Region::new(4.0, 4.0, 6.0, 6.0).unwrap()));
        assert_eq!(map.get("B"), map.get("b"));
        assert_eq!(map.iter().count(), 2);
    }

    #[test]
    fn rejects_degenerate_box() {
        assert_eq!(load_regions("b: 6 4 4 6"), Err(RegionError::Degenerate { line: 1 }));
        assert_eq!(load_regions("b: 4 6 6 6"), Err(RegionError::Degenerate { line: 1 }));
    }

    #[test]
    fn rejects_duplicate_names() {
        assert_eq!(
            load_regions("a: 0 0 1 1\na: 2 2 3 3"),
            Err(RegionError::Duplicate { line: 2, name: "a".into() })
        );
    }

    #[test]
    fn rejects_malformed_lines() {
        assert_eq!(load_regions("b 4 4 6 6"), Err(RegionError::Malformed { line: 1 }));
        assert_eq!(load_regions("b: 4 4 6"), Err(RegionError::Malformed { line: 1 }));
        assert_eq!(load_regions("b: 4 4 six 6"), Err(RegionError::Malformed { line: 1 }));
    }

    #[test]
    fn loads_trajectory_rows() {
        let x = load_trajectory("t,x,y\n0,0,0\n1,1,1\n").unwrap();
        assert_eq!(x.len(), 2);
        assert_eq!(x.states()[1], Point::new(1.0, 1.0));
    }

    #[test]
    fn trajectory_gap_is_an_error() {
        let err = load_trajectory("t,x,y\n0,0,0\n2,1,1\n").unwrap_err();
        assert!(matches!(err, TrajectoryError::Gap { row: 2, expected: 1, .. }), "{err}");
        let err = load_trajectory("t,x,y\n0.5,0,0\n").unwrap_err();
        assert!(matches!(err, TrajectoryError::Gap { .. }), "{err}");
    }

    #[test]
    fn header_only_trajectory_is_empty() {
        assert!(matches!(load_trajectory("t,x,y\n"), Err(TrajectoryError::Empty)));
    }
}
