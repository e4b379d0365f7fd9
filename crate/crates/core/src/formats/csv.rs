//! CSV tables with a `#`-commented header block.
//!
//! Layout, shared by every table kind:
//!
//! ```text
//! # command = simulate
//! # case_a = 1
//! #   ...config echo and metadata...
//! # config_sha256 = 5891b5b5...
//! t,n,w
//! 0.0000000000000000e0,1,5.0000000000000000e-1
//! ```
//!
//! Columns are fixed per table kind and checked on read; floats use the
//! 17-significant-digit spelling of [`format_f64`](super::format_f64), so a
//! write → read cycle reproduces the exact in-memory values.

use std::str::FromStr;

use crate::error::{Error, Result};

use super::{format_f64, DocHeader};

/// One sampled mode value: the trajectory tables are long-form with a row per
/// `(t, n)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TrajectoryRow {
    pub t: f64,
    pub n: usize,
    pub w: f64,
}

/// One bound comparison: `value = n·w_n(t)` against the proven lower bound,
/// with `margin = value − bound`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BoundRow {
    pub t: f64,
    pub n: usize,
    pub value: f64,
    pub bound: f64,
    pub margin: f64,
}

/// One grid-point value of a collocation field.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FieldRow {
    pub t: f64,
    pub x: f64,
    pub u: f64,
}

/// One per-snapshot spectrum fit from the analyticity-strip method.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct StripRow {
    pub t: f64,
    pub rho: f64,
    pub gamma: f64,
    pub amplitude: f64,
    pub residual: f64,
}

/// Verdict column of a sweep row.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SweepStatus {
    /// Blow-up detected within the proven bound.
    Pass,
    /// Blow-up detected but the fitted time exceeds the bound's slack.
    Fail,
    /// Informational row: no blow-up trend, or parameters outside every
    /// theorem's hypotheses.
    Info,
    /// The underlying run failed; the sweep continued past it.
    RunError,
}

impl SweepStatus {
    pub fn as_str(self) -> &'static str {
        match self {
            SweepStatus::Pass => "PASS",
            SweepStatus::Fail => "FAIL",
            SweepStatus::Info => "INFO",
            SweepStatus::RunError => "ERROR",
        }
    }
}

impl FromStr for SweepStatus {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Ok(match s {
            "PASS" => SweepStatus::Pass,
            "FAIL" => SweepStatus::Fail,
            "INFO" => SweepStatus::Info,
            "ERROR" => SweepStatus::RunError,
            other => {
                return Err(Error::invalid(
                    "pass",
                    format!("unknown sweep status '{other}'"),
                ))
            }
        })
    }
}

/// One parameter combination of a sweep; `t_fit` is `None` (written `none`)
/// when no blow-up trend was found.
#[derive(Debug, Clone, PartialEq)]
pub struct SweepRow {
    pub kappa: f64,
    pub alpha: f64,
    pub delta: f64,
    pub t_fit: Option<f64>,
    pub bound: f64,
    pub status: SweepStatus,
}

/// A parsed document: header entries in file order (minus the hash line),
/// the hash, and the typed rows.
#[derive(Debug, Clone, PartialEq)]
pub struct TableDoc<R> {
    pub command: String,
    pub entries: Vec<(String, String)>,
    pub sha256: String,
    pub rows: Vec<R>,
}

/// Fixed column set and row (de)serialization for one table kind.
pub(super) trait Record: Sized {
    const COLUMNS: &'static [&'static str];
    fn fields(&self) -> Vec<String>;
    fn parse(fields: &[&str], line: usize) -> Result<Self>;
}

fn parse_float(tok: &str, line: usize, col: &str) -> Result<f64> {
    tok.parse()
        .map_err(|_| Error::parse(line, format!("column '{col}': invalid float '{tok}'")))
}

fn parse_index(tok: &str, line: usize, col: &str) -> Result<usize> {
    tok.parse()
        .map_err(|_| Error::parse(line, format!("column '{col}': invalid index '{tok}'")))
}

impl Record for TrajectoryRow {
    const COLUMNS: &'static [&'static str] = &["t", "n", "w"];

    fn fields(&self) -> Vec<String> {
        vec![format_f64(self.t), self.n.to_string(), format_f64(self.w)]
    }

    fn parse(fields: &[&str], line: usize) -> Result<Self> {
        Ok(TrajectoryRow {
            t: parse_float(fields[0], line, "t")?,
            n: parse_index(fields[1], line, "n")?,
            w: parse_float(fields[2], line, "w")?,
        })
    }
}

impl Record for BoundRow {
    const COLUMNS: &'static [&'static str] = &["t", "n", "value", "bound", "margin"];

    fn fields(&self) -> Vec<String> {
        vec![
            format_f64(self.t),
            self.n.to_string(),
            format_f64(self.value),
            format_f64(self.bound),
            format_f64(self.margin),
        ]
    }

    fn parse(fields: &[&str], line: usize) -> Result<Self> {
        Ok(BoundRow {
            t: parse_float(fields[0], line, "t")?,
            n: parse_index(fields[1], line, "n")?,
            value: parse_float(fields[2], line, "value")?,
            bound: parse_float(fields[3], line, "bound")?,
            margin: parse_float(fields[4], line, "margin")?,
        })
    }
}

impl Record for FieldRow {
    const COLUMNS: &'static [&'static str] = &["t", "x", "u"];

    fn fields(&self) -> Vec<String> {
        vec![format_f64(self.t), format_f64(self.x), format_f64(self.u)]
    }

    fn parse(fields: &[&str], line: usize) -> Result<Self> {
        Ok(FieldRow {
            t: parse_float(fields[0], line, "t")?,
            x: parse_float(fields[1], line, "x")?,
            u: parse_float(fields[2], line, "u")?,
        })
    }
}

impl Record for StripRow {
    const COLUMNS: &'static [&'static str] = &["t", "rho", "gamma", "amplitude", "residual"];

    fn fields(&self) -> Vec<String> {
        vec![
            format_f64(self.t),
            format_f64(self.rho),
            format_f64(self.gamma),
            format_f64(self.amplitude),
            format_f64(self.residual),
        ]
    }

    fn parse(fields: &[&str], line: usize) -> Result<Self> {
        Ok(StripRow {
            t: parse_float(fields[0], line, "t")?,
            rho: parse_float(fields[1], line, "rho")?,
            gamma: parse_float(fields[2], line, "gamma")?,
            amplitude: parse_float(fields[3], line, "amplitude")?,
            residual: parse_float(fields[4], line, "residual")?,
        })
    }
}

impl Record for SweepRow {
    const COLUMNS: &'static [&'static str] = &["kappa", "alpha", "delta", "T_fit", "bound", "pass"];

    fn fields(&self) -> Vec<String> {
        vec![
            format_f64(self.kappa),
            format_f64(self.alpha),
            format_f64(self.delta),
            match self.t_fit {
                Some(t) => format_f64(t),
                None => "none".to_string(),
            },
            format_f64(self.bound),
            self.status.as_str().to_string(),
        ]
    }

    fn parse(fields: &[&str], line: usize) -> Result<Self> {
        Ok(SweepRow {
            kappa: parse_float(fields[0], line, "kappa")?,
            alpha: parse_float(fields[1], line, "alpha")?,
            delta: parse_float(fields[2], line, "delta")?,
            t_fit: if fields[3] == "none" {
                None
            } else {
                Some(parse_float(fields[3], line, "T_fit")?)
            },
            bound: parse_float(fields[4], line, "bound")?,
            status: fields[5]
                .parse()
                .map_err(|_| Error::parse(line, format!("invalid sweep status '{}'", fields[5])))?,
        })
    }
}

fn write_table<R: Record>(header: &DocHeader, rows: &[R]) -> String {
    let mut out = String::new();
    for (k, v) in header.entries() {
        out.push_str(&format!("# {k} = {v}\n"));
    }
    out.push_str(&format!("# config_sha256 = {}\n", header.config_sha256()));
    out.push_str(&R::COLUMNS.join(","));
    out.push('\n');
    for row in rows {
        out.push_str(&row.fields().join(","));
        out.push('\n');
    }
    out
}

fn read_table<R: Record>(text: &str) -> Result<TableDoc<R>> {
    let mut entries = Vec::new();
    let mut sha256 = None;
    let mut rows = Vec::new();
    let mut saw_columns = false;
    for (idx, raw) in text.lines().enumerate() {
        let line_no = idx + 1;
        let line = raw.trim_end();
        if line.is_empty() {
            continue;
        }
        if let Some(rest) = line.strip_prefix('#') {
            if saw_columns {
                return Err(Error::parse(line_no, "header line after data began"));
            }
            let (key, value) = rest.split_once('=').ok_or_else(|| {
                Error::parse(line_no, format!("malformed header line '{line}'"))
            })?;
            let (key, value) = (key.trim(), value.trim());
            if key == "config_sha256" {
                sha256 = Some(value.to_string());
            } else {
                entries.push((key.to_string(), value.to_string()));
            }
            continue;
        }
        if !saw_columns {
            let expected = R::COLUMNS.join(",");
            if line != expected {
                return Err(Error::parse(
                    line_no,
                    format!("expected header row '{expected}', got '{line}'"),
                ));
            }
            saw_columns = true;
            continue;
        }
        let fields: Vec<&str> = line.split(',').collect();
        if fields.len() != R::COLUMNS.len() {
            return Err(Error::parse(
                line_no,
                format!(
                    "expected {} fields, got {}",
                    R::COLUMNS.len(),
                    fields.len()
                ),
            ));
        }
        rows.push(R::parse(&fields, line_no)?);
    }
    if !saw_columns {
        return Err(Error::parse(0, "missing column header row"));
    }
    let command = match entries.first() {
        Some((k, v)) if k == "command" => v.clone(),
        _ => return Err(Error::parse(0, "header must start with 'command'")),
    };
    Ok(TableDoc {
        command,
        entries,
        sha256: sha256.ok_or_else(|| Error::parse(0, "missing config_sha256 header line"))?,
        rows,
    })
}

pub fn write_trajectory(header: &DocHeader, rows: &[TrajectoryRow]) -> String {
    write_table(header, rows)
}

pub fn read_trajectory(text: &str) -> Result<TableDoc<TrajectoryRow>> {
    read_table(text)
}

pub fn write_bounds(header: &DocHeader, rows: &[BoundRow]) -> String {
    write_table(header, rows)
}

pub fn read_bounds(text: &str) -> Result<TableDoc<BoundRow>> {
    read_table(text)
}

pub fn write_field(header: &DocHeader, rows: &[FieldRow]) -> String {
    write_table(header, rows)
}

pub fn read_field(text: &str) -> Result<TableDoc<FieldRow>> {
    read_table(text)
}

pub fn write_strip(header: &DocHeader, rows: &[StripRow]) -> String {
    write_table(header, rows)
}

pub fn read_strip(text: &str) -> Result<TableDoc<StripRow>> {
    read_table(text)
}

pub fn write_sweep(header: &DocHeader, rows: &[SweepRow]) -> String {
    write_table(header, rows)
}

pub fn read_sweep(text: &str) -> Result<TableDoc<SweepRow>> {
    read_table(text)
}
