//! File formats shared by the CLI and other frontends.
//!
//! Measures travel as JSON `{"n": int, "k": int, "points": [[f64; n]; k]}`
//! or as CSV with one point per row (n columns, optional header line).
//! Groups travel as JSON
//! `{"n": int, "elements": [{"rotation": [[f64]], "translation": [f64]}]}`.
//! Points are bare JSON arrays.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::measures::EmpiricalMeasure;
use crate::orbit::{AffineIsometry, FiniteIsometryGroup};

/// On-disk shape of an empirical measure.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct MeasureFile {
    pub n: usize,
    pub k: usize,
    pub points: Vec<Vec<f64>>,
}

/// On-disk shape of one affine isometry.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct IsometryFile {
    pub rotation: Vec<Vec<f64>>,
    pub translation: Vec<f64>,
}

/// On-disk shape of a finite isometry group.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct GroupFile {
    pub n: usize,
    pub elements: Vec<IsometryFile>,
}

/// Byte offset of a serde_json error location within `input`.
fn byte_offset(input: &str, line: usize, column: usize) -> usize {
    let mut offset = 0;
    for (i, l) in input.split('\n').enumerate() {
        if i + 1 == line {
            return offset + column.saturating_sub(1);
        }
        offset += l.len() + 1;
    }
    offset
}

fn parse_error(input: &str, err: &serde_json::Error, what: &str) -> Error {
    Error::Parse(format!(
        "invalid {what} JSON at byte offset {} (line {}, column {}): {err}",
        byte_offset(input, err.line(), err.column()),
        err.line(),
        err.column()
    ))
}

pub fn measure_from_json(input: &str) -> Result<EmpiricalMeasure> {
    let file: MeasureFile =
        serde_json::from_str(input).map_err(|e| parse_error(input, &e, "measure"))?;
    if file.points.len() != file.k {
        return Err(Error::Parse(format!(
            "field \"k\" is {} but \"points\" holds {} rows",
            file.k,
            file.points.len()
        )));
    }
    for (i, p) in file.points.iter().enumerate() {
        if p.len() != file.n {
            return Err(Error::Parse(format!(
                "field \"n\" is {} but point {} has {} coordinates",
                file.n,
                i,
                p.len()
            )));
        }
    }
    EmpiricalMeasure::new(file.points)
}

pub fn measure_to_json(measure: &EmpiricalMeasure) -> String {
    let file = MeasureFile {
        n: measure.dim(),
        k: measure.size(),
        points: measure.points().to_vec(),
    };
    serde_json::to_string(&file).expect("measure serialization cannot fail")
}

/// Parses CSV with one point per row. A non-numeric first row is treated as
/// a header and skipped.
pub fn measure_from_csv(input: &str) -> Result<EmpiricalMeasure> {
    let mut points = Vec::new();
    for (lineno, line) in input.lines().enumerate() {
        let trimmed = line.trim();
        if trimmed.is_empty() {
            continue;
        }
        let parsed: std::result::Result<Vec<f64>, _> = trimmed
            .split(',')
            .map(|field| field.trim().parse::<f64>())
            .collect();
        match parsed {
            Ok(row) => points.push(row),
            Err(e) => {
                if lineno == 0 && points.is_empty() {
                    continue; // header
                }
                return Err(Error::Parse(format!(
                    "invalid CSV on line {}: {e}",
                    lineno + 1
                )));
            }
        }
    }
    if points.is_empty() {
        return Err(Error::Parse("CSV contains no data rows".into()));
    }
    EmpiricalMeasure::new(points)
}

pub fn group_from_json(input: &str) -> Result<FiniteIsometryGroup> {
    let file: GroupFile =
        serde_json::from_str(input).map_err(|e| parse_error(input, &e, "group"))?;
    let elements = file
        .elements
        .into_iter()
        .enumerate()
        .map(|(i, e)| {
            if e.rotation.len() != file.n || e.translation.len() != file.n {
                return Err(Error::Parse(format!(
                    "element {i} does not act on dimension {}",
                    file.n
                )));
            }
            AffineIsometry::new(e.rotation, e.translation)
        })
        .collect::<Result<Vec<_>>>()?;
    FiniteIsometryGroup::new(elements)
}

pub fn group_to_json(group: &FiniteIsometryGroup) -> String {
    let file = GroupFile {
        n: group.dim(),
        elements: group
            .elements()
            .iter()
            .map(|e| IsometryFile {
                rotation: e.rotation().to_vec(),
                translation: e.translation().to_vec(),
            })
            .collect(),
    };
    serde_json::to_string(&file).expect("group serialization cannot fail")
}

/// Parses a point given as a bare JSON array of coordinates.
pub fn point_from_json(input: &str) -> Result<Vec<f64>> {
    let point: Vec<f64> =
        serde_json::from_str(input).map_err(|e| parse_error(input, &e, "point"))?;
    if point.is_empty() {
        return Err(Error::Parse("point array is empty".into()));
    }
    Ok(point)
}

/// Parses a JSON array of measure files (the `embed` input).
pub fn measures_from_json(input: &str) -> Result<Vec<EmpiricalMeasure>> {
    let files: Vec<MeasureFile> =
        serde_json::from_str(input).map_err(|e| parse_error(input, &e, "measure list"))?;
    files
        .into_iter()
        .map(|file| {
            if file.points.len() != file.k {
                return Err(Error::Parse(format!(
                    "field \"k\" is {} but \"points\" holds {} rows",
                    file.k,
                    file.points.len()
                )));
            }
            for p in &file.points {
                if p.len() != file.n {
                    return Err(Error::Parse(format!(
                        "field \"n\" is {} but a point has {} coordinates",
                        file.n,
                        p.len()
                    )));
                }
            }
            EmpiricalMeasure::new(file.points)
        })
        .collect()
}
