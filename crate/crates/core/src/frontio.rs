//! CSV interchange format for fronts.
//!
//! One row per solution: `x1_1,x2_1,x3_1,…,x1_T,x2_T,x3_T,cost,pec,cde,violation`.
//! Decision columns may be absent (fronts produced by external tools) and so
//! may `violation`, which then reads as 0. Numbers are rounded to 12
//! significant digits and written in shortest round-trip form, so a written
//! file reads back to exactly the values it prints.

use std::io::{Read, Write};
use std::path::Path;

use crate::model::ObjectiveVector;
use crate::moea::Individual;
use crate::{Error, Result};

const SIGNIFICANT_DIGITS: usize = 12;

/// One solution as stored in a front file.
#[derive(Debug, Clone, PartialEq)]
pub struct FrontRow {
    pub decision: Vec<f64>,
    pub objectives: ObjectiveVector,
    pub violation: f64,
}

impl From<&Individual> for FrontRow {
    fn from(ind: &Individual) -> Self {
        Self {
            decision: ind.decision.clone(),
            objectives: ind.objectives,
            violation: ind.violation.total,
        }
    }
}

/// `v` rounded to 12 significant digits; negative zero becomes zero.
pub fn round_sig(v: f64) -> f64 {
    if !v.is_finite() || v == 0.0 {
        return if v == 0.0 { 0.0 } else { v };
    }
    format!("{:.*e}", SIGNIFICANT_DIGITS - 1, v)
        .parse()
        .expect("formatted float parses")
}

fn format_number(v: f64) -> String {
    format!("{}", round_sig(v))
}

pub fn header(dimension: usize) -> Vec<String> {
    let mut h: Vec<String> = (0..dimension)
        .map(|k| format!("x{}_{}", k % 3 + 1, k / 3 + 1))
        .collect();
    h.extend(["cost", "pec", "cde", "violation"].map(String::from));
    h
}

pub fn write_front<'a, W: Write>(writer: W, rows: impl IntoIterator<Item = &'a FrontRow>) -> Result<()> {
    let mut rows = rows.into_iter().peekable();
    let dimension = rows.peek().map_or(0, |r| r.decision.len());
    let mut w = csv::Writer::from_writer(writer);
    w.write_record(header(dimension))?;
    for row in rows {
        if row.decision.len() != dimension {
            return Err(Error::DimensionMismatch {
                expected: dimension,
                got: row.decision.len(),
            });
        }
        let objectives = row.objectives.as_array();
        let record = row
            .decision
            .iter()
            .chain(&objectives)
            .chain(std::iter::once(&row.violation))
            .map(|&v| format_number(v));
        w.write_record(record)?;
    }
    w.flush()?;
    Ok(())
}

pub fn write_individuals<'a, W: Write>(writer: W, front: impl IntoIterator<Item = &'a Individual>) -> Result<()> {
    let rows: Vec<FrontRow> = front.into_iter().map(FrontRow::from).collect();
    write_front(writer, &rows)
}

pub fn write_front_path<'a>(path: impl AsRef<Path>, front: impl IntoIterator<Item = &'a Individual>) -> Result<()> {
    let file = std::fs::File::create(path)?;
    write_individuals(std::io::BufWriter::new(file), front)
}

pub fn read_front<R: Read>(reader: R) -> Result<Vec<FrontRow>> {
    let mut r = csv::ReaderBuilder::new().trim(csv::Trim::All).from_reader(reader);
    let headers = r.headers()?.clone();
    let position = |name: &str| headers.iter().position(|h| h.eq_ignore_ascii_case(name));
    let cost = position("cost").ok_or_else(|| Error::FrontFormat("missing `cost` column".into()))?;
    if position("pec") != Some(cost + 1) || position("cde") != Some(cost + 2) {
        return Err(Error::FrontFormat("expected `cost,pec,cde` as consecutive columns".into()));
    }
    let violation = position("violation");
    if cost % 3 != 0 {
        return Err(Error::FrontFormat(format!(
            "{cost} decision columns is not a multiple of three"
        )));
    }

    let mut rows = Vec::new();
    for (line, record) in r.records().enumerate() {
        let record = record?;
        let number = |k: usize| -> Result<f64> {
            let field = record.get(k).unwrap_or("");
            field.parse().map_err(|_| {
                Error::FrontFormat(format!(
                    "row {}: column `{}` holds `{field}`, not a number",
                    line + 1,
                    &headers[k]
                ))
            })
        };
        let decision = (0..cost).map(number).collect::<Result<Vec<f64>>>()?;
        let objectives = ObjectiveVector::new(number(cost)?, number(cost + 1)?, number(cost + 2)?);
        let violation = violation.map(number).transpose()?.unwrap_or(0.0);
        rows.push(FrontRow {
            decision,
            objectives,
            violation,
        });
    }
    Ok(rows)
}

pub fn read_front_path(path: impl AsRef<Path>) -> Result<Vec<FrontRow>> {
    read_front(std::fs::File::open(path)?)
}

/// Objective vectors of the feasible rows.
pub fn feasible_points(rows: &[FrontRow]) -> Vec<[f64; 3]> {
    rows.iter()
        .filter(|r| r.violation == 0.0)
        .map(|r| r.objectives.as_array())
        .collect()
}
