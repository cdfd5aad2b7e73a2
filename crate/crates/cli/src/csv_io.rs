//! `t,value` series files.
//!
//! UTF-8, comma separated, header `t,value`, blank lines ignored, missing
//! values spelled `nan` (any case). Numbers are written in shortest
//! round-trip form.

use std::path::Path;

use numdiff_core::series::{is_missing, MISSING};
use numdiff_core::Series;

use crate::error::CliError;
use crate::output::write_atomic;

pub const HEADER: [&str; 2] = ["t", "value"];

/// Shortest decimal that parses back to the same `f64`; missing is `nan`.
pub fn format_number(v: f64) -> String {
    if is_missing(v) {
        "nan".to_string()
    } else {
        format!("{v:?}")
    }
}

fn parse_field(field: &str, allow_missing: bool) -> Result<f64, String> {
    let trimmed = field.trim();
    if trimmed.eq_ignore_ascii_case("nan") {
        return if allow_missing {
            Ok(MISSING)
        } else {
            Err("time cannot be missing".to_string())
        };
    }
    match trimmed.parse::<f64>() {
        Ok(v) if v.is_finite() => Ok(v),
        Ok(_) => Err(format!("`{trimmed}` is not a finite number")),
        Err(_) => Err(format!("`{trimmed}` is not a number")),
    }
}

pub fn parse_series(text: &str, origin: &str) -> Result<Series, CliError> {
    let parse_error = |line: u64, column: usize, message: String| CliError::Parse {
        path: origin.to_string(),
        line,
        column,
        message,
    };
    let mut reader = csv::ReaderBuilder::new()
        .has_headers(true)
        .flexible(true)
        .from_reader(text.as_bytes());
    let headers = reader
        .headers()
        .map_err(|e| parse_error(1, 1, e.to_string()))?
        .clone();
    let found: Vec<&str> = headers.iter().map(str::trim).collect();
    if found != HEADER {
        return Err(parse_error(1, 1, format!("expected header `t,value`, found `{}`", found.join(","))));
    }

    let mut times = Vec::new();
    let mut values = Vec::new();
    for record in reader.records() {
        let record = record.map_err(|e| {
            let line = e.position().map_or(0, |p| p.line());
            parse_error(line, 1, e.to_string())
        })?;
        let line = record.position().map_or(0, |p| p.line());
        if record.iter().all(|f| f.trim().is_empty()) {
            continue;
        }
        if record.len() != 2 {
            return Err(parse_error(line, record.len().min(3), format!("expected 2 fields, found {}", record.len())));
        }
        let t = parse_field(&record[0], false).map_err(|m| parse_error(line, 1, m))?;
        let v = parse_field(&record[1], true).map_err(|m| parse_error(line, 2, m))?;
        if let Some(&prev) = times.last() {
            if t <= prev {
                return Err(parse_error(
                    line,
                    1,
                    format!("time {t} does not increase (previous {prev}); duplicate or decreasing times are not allowed"),
                ));
            }
        }
        times.push(t);
        values.push(v);
    }
    Ok(Series::new(times, values)?)
}

pub fn read_series_csv(path: &Path) -> Result<Series, CliError> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| CliError::usage(format!("cannot read {}: {e}", path.display())))?;
    parse_series(&text, &path.display().to_string())
}

pub fn render_series(series: &Series) -> String {
    let mut writer = csv::WriterBuilder::new().from_writer(Vec::new());
    writer.write_record(HEADER).expect("in-memory write");
    for (t, v) in series.iter() {
        writer
            .write_record([format_number(t), format_number(v)])
            .expect("in-memory write");
    }
    String::from_utf8(writer.into_inner().expect("in-memory flush")).expect("ASCII output")
}

pub fn write_series_csv(series: &Series, path: &Path) -> Result<(), CliError> {
    write_atomic(path, render_series(series).as_bytes())
}
