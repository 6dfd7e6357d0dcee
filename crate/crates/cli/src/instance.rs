//! Plain-text point-set files.
//!
//! ```text
//! d=2 n=3 metric=l2
//! 0.5,1
//! -2,4.25
//! 3,3
//! ```
//!
//! The header holds `d` and `n` and optionally a metric tag. Blank lines and
//! lines starting with `#` are ignored. Coordinates are written with Rust's
//! shortest round-trip formatting, so write-then-read is lossless.

use std::fmt::Write as _;
use std::fs;
use std::path::Path;

use cdut::{Metric, PointSet};

use crate::CliError;

#[derive(Debug, Clone, PartialEq)]
pub struct Instance {
    pub points: PointSet,
    pub metric: Option<Metric>,
}

fn parse_error(line: usize, message: impl Into<String>) -> CliError {
    CliError::Parse {
        path: None,
        line,
        message: message.into(),
    }
}

pub fn parse_instance(text: &str) -> Result<Instance, CliError> {
    let mut lines = text
        .lines()
        .enumerate()
        .map(|(i, l)| (i + 1, l.trim()))
        .filter(|(_, l)| !l.is_empty() && !l.starts_with('#'));

    let (header_line, header) = lines.next().ok_or_else(|| parse_error(1, "missing header"))?;
    let (mut dim, mut count, mut metric) = (None, None, None);
    for token in header.split_whitespace() {
        let (key, value) = token
            .split_once('=')
            .ok_or_else(|| parse_error(header_line, format!("expected key=value, found `{token}`")))?;
        match key {
            "d" => {
                dim = Some(value.parse::<usize>().map_err(|_| {
                    parse_error(header_line, format!("bad dimension `{value}`"))
                })?)
            }
            "n" => {
                count = Some(value.parse::<usize>().map_err(|_| {
                    parse_error(header_line, format!("bad point count `{value}`"))
                })?)
            }
            "metric" => {
                metric = Some(value.parse::<Metric>().map_err(|_| {
                    parse_error(header_line, format!("unknown metric `{value}`"))
                })?)
            }
            other => return Err(parse_error(header_line, format!("unknown header key `{other}`"))),
        }
    }
    let dim = dim.ok_or_else(|| parse_error(header_line, "header lacks d=<int>"))?;
    let count = count.ok_or_else(|| parse_error(header_line, "header lacks n=<int>"))?;
    if dim == 0 {
        return Err(parse_error(header_line, "dimension must be positive"));
    }

    let mut coords = Vec::with_capacity(dim * count);
    let mut rows = 0;
    let mut last_line = header_line;
    for (line, row) in lines {
        last_line = line;
        if rows == count {
            return Err(parse_error(line, format!("more than the declared {count} rows")));
        }
        let before = coords.len();
        for field in row.split(',') {
            let field = field.trim();
            let value: f64 = field
                .parse()
                .map_err(|_| parse_error(line, format!("`{field}` is not a number")))?;
            if !value.is_finite() {
                return Err(parse_error(line, format!("`{field}` is not finite")));
            }
            coords.push(value);
        }
        let found = coords.len() - before;
        if found != dim {
            return Err(parse_error(line, format!("expected {dim} fields, found {found}")));
        }
        rows += 1;
    }
    if rows != count {
        return Err(parse_error(
            last_line + 1,
            format!("declared {count} rows, found {rows}"),
        ));
    }
    let points = PointSet::new(dim, coords).map_err(|e| parse_error(header_line, e.to_string()))?;
    Ok(Instance { points, metric })
}

pub fn format_instance(points: &PointSet, metric: Option<Metric>) -> String {
    let mut out = format!("d={} n={}", points.dim(), points.len());
    if let Some(metric) = metric {
        let _ = write!(out, " metric={metric}");
    }
    out.push('\n');
    for p in points.iter() {
        let row: Vec<String> = p.iter().map(|x| x.to_string()).collect();
        out.push_str(&row.join(","));
        out.push('\n');
    }
    out
}

pub fn read_instance(path: &Path) -> Result<Instance, CliError> {
    let text = fs::read_to_string(path).map_err(|source| CliError::Io {
        path: path.to_path_buf(),
        source,
    })?;
    parse_instance(&text).map_err(|e| e.with_path(path))
}

pub fn write_instance(path: &Path, points: &PointSet, metric: Option<Metric>) -> Result<(), CliError> {
    fs::write(path, format_instance(points, metric)).map_err(|source| CliError::Io {
        path: path.to_path_buf(),
        source,
    })
}
