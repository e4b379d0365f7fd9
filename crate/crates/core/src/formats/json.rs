//! JSON mirrors of the CSV tables, for structured consumers.
//!
//! The layout mirrors the CSV document one-to-one: the header entries (as an
//! ordered array of `[key, value]` pairs), the config hash, the column names,
//! and the rows as arrays. Numbers use the same 17-significant-digit spelling
//! as the CSV writer; since JSON has no notation for non-finite values, they
//! are written as `null` and read back as NaN (or `None` where the column is
//! optional, as for `T_fit`). Writing is hand-assembled so output bytes are
//! fully deterministic; reading goes through `serde_json`.

use serde::Deserialize;

use crate::error::{Error, Result};

use super::csv::{Record, TableDoc};
use super::{format_f64, BoundRow, DocHeader, FieldRow, StripRow, SweepRow, TrajectoryRow};

fn json_escape(s: &str) -> String {
    let mut out = String::with_capacity(s.len() + 2);
    for c in s.chars() {
        match c {
            '"' => out.push_str("\\\""),
            '\\' => out.push_str("\\\\"),
            '\n' => out.push_str("\\n"),
            '\r' => out.push_str("\\r"),
            '\t' => out.push_str("\\t"),
            c if (c as u32) < 0x20 => out.push_str(&format!("\\u{:04x}", c as u32)),
            c => out.push(c),
        }
    }
    out
}

fn json_f64(x: f64) -> String {
    if x.is_finite() {
        format_f64(x)
    } else {
        "null".to_string()
    }
}

fn write_doc(header: &DocHeader, columns: &[&str], row_lines: &[String]) -> String {
    let entries = header.entries();
    let mut out = String::new();
    out.push_str("{\n");
    out.push_str(&format!(
        "  \"command\": \"{}\",\n",
        json_escape(&entries[0].1)
    ));
    out.push_str("  \"config\": [\n");
    for (i, (k, v)) in entries[1..].iter().enumerate() {
        let comma = if i + 2 < entries.len() { "," } else { "" };
        out.push_str(&format!(
            "    [\"{}\", \"{}\"]{comma}\n",
            json_escape(k),
            json_escape(v)
        ));
    }
    out.push_str("  ],\n");
    out.push_str(&format!(
        "  \"config_sha256\": \"{}\",\n",
        header.config_sha256()
    ));
    let cols = columns
        .iter()
        .map(|c| format!("\"{}\"", json_escape(c)))
        .collect::<Vec<_>>()
        .join(", ");
    out.push_str(&format!("  \"columns\": [{cols}],\n"));
    out.push_str("  \"rows\": [\n");
    for (i, line) in row_lines.iter().enumerate() {
        let comma = if i + 1 < row_lines.len() { "," } else { "" };
        out.push_str(&format!("    [{line}]{comma}\n"));
    }
    out.push_str("  ]\n}\n");
    out
}

#[derive(Deserialize)]
struct RawDoc<R> {
    command: String,
    config: Vec<(String, String)>,
    config_sha256: String,
    columns: Vec<String>,
    rows: Vec<R>,
}

fn read_doc<Raw, R>(
    text: &str,
    convert: impl Fn(Raw) -> Result<R>,
) -> Result<TableDoc<R>>
where
    Raw: for<'de> Deserialize<'de>,
    R: Record,
{
    let raw: RawDoc<Raw> = serde_json::from_str(text)
        .map_err(|e| Error::parse(e.line(), format!("invalid JSON document: {e}")))?;
    if raw.columns != R::COLUMNS {
        return Err(Error::parse(
            0,
            format!("expected columns {:?}, got {:?}", R::COLUMNS, raw.columns),
        ));
    }
    let mut entries = vec![("command".to_string(), raw.command.clone())];
    entries.extend(raw.config);
    let mut rows = Vec::with_capacity(raw.rows.len());
    for r in raw.rows {
        rows.push(convert(r)?);
    }
    Ok(TableDoc {
        command: raw.command,
        entries,
        sha256: raw.config_sha256,
        rows,
    })
}

fn num(x: Option<f64>) -> f64 {
    x.unwrap_or(f64::NAN)
}

pub fn write_trajectory(header: &DocHeader, rows: &[TrajectoryRow]) -> String {
    let lines: Vec<String> = rows
        .iter()
        .map(|r| format!("{}, {}, {}", json_f64(r.t), r.n, json_f64(r.w)))
        .collect();
    write_doc(header, TrajectoryRow::COLUMNS, &lines)
}

pub fn read_trajectory(text: &str) -> Result<TableDoc<TrajectoryRow>> {
    read_doc(text, |(t, n, w): (Option<f64>, usize, Option<f64>)| {
        Ok(TrajectoryRow {
            t: num(t),
            n,
            w: num(w),
        })
    })
}

pub fn write_bounds(header: &DocHeader, rows: &[BoundRow]) -> String {
    let lines: Vec<String> = rows
        .iter()
        .map(|r| {
            format!(
                "{}, {}, {}, {}, {}",
                json_f64(r.t),
                r.n,
                json_f64(r.value),
                json_f64(r.bound),
                json_f64(r.margin)
            )
        })
        .collect();
    write_doc(header, BoundRow::COLUMNS, &lines)
}

pub fn read_bounds(text: &str) -> Result<TableDoc<BoundRow>> {
    type Raw = (Option<f64>, usize, Option<f64>, Option<f64>, Option<f64>);
    read_doc(text, |(t, n, value, bound, margin): Raw| {
        Ok(BoundRow {
            t: num(t),
            n,
            value: num(value),
            bound: num(bound),
            margin: num(margin),
        })
    })
}

pub fn write_field(header: &DocHeader, rows: &[FieldRow]) -> String {
    let lines: Vec<String> = rows
        .iter()
        .map(|r| format!("{}, {}, {}", json_f64(r.t), json_f64(r.x), json_f64(r.u)))
        .collect();
    write_doc(header, FieldRow::COLUMNS, &lines)
}

pub fn read_field(text: &str) -> Result<TableDoc<FieldRow>> {
    read_doc(text, |(t, x, u): (Option<f64>, Option<f64>, Option<f64>)| {
        Ok(FieldRow {
            t: num(t),
            x: num(x),
            u: num(u),
        })
    })
}

pub fn write_strip(header: &DocHeader, rows: &[StripRow]) -> String {
    let lines: Vec<String> = rows
        .iter()
        .map(|r| {
            format!(
                "{}, {}, {}, {}, {}",
                json_f64(r.t),
                json_f64(r.rho),
                json_f64(r.gamma),
                json_f64(r.amplitude),
                json_f64(r.residual)
            )
        })
        .collect();
    write_doc(header, StripRow::COLUMNS, &lines)
}

pub fn read_strip(text: &str) -> Result<TableDoc<StripRow>> {
    type Raw = (Option<f64>, Option<f64>, Option<f64>, Option<f64>, Option<f64>);
    read_doc(text, |(t, rho, gamma, amplitude, residual): Raw| {
        Ok(StripRow {
            t: num(t),
            rho: num(rho),
            gamma: num(gamma),
            amplitude: num(amplitude),
            residual: num(residual),
        })
    })
}

pub fn write_sweep(header: &DocHeader, rows: &[SweepRow]) -> String {
    let lines: Vec<String> = rows
        .iter()
        .map(|r| {
            let t_fit = match r.t_fit {
                Some(t) => json_f64(t),
                None => "null".to_string(),
            };
            format!(
                "{}, {}, {}, {}, {}, \"{}\"",
                json_f64(r.kappa),
                json_f64(r.alpha),
                json_f64(r.delta),
                t_fit,
                json_f64(r.bound),
                r.status.as_str()
            )
        })
        .collect();
    write_doc(header, SweepRow::COLUMNS, &lines)
}

pub fn read_sweep(text: &str) -> Result<TableDoc<SweepRow>> {
    type Raw = (Option<f64>, Option<f64>, Option<f64>, Option<f64>, Option<f64>, String);
    read_doc(text, |(kappa, alpha, delta, t_fit, bound, status): Raw| {
        Ok(SweepRow {
            kappa: num(kappa),
            alpha: num(alpha),
            delta: num(delta),
            t_fit,
            bound: num(bound),
            status: status.parse()?,
        })
    })
}
