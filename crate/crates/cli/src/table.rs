//! CSV tables and profile files.
//!
//! Numbers are written with Rust's shortest round-trip formatting, so output
//! is locale independent and parses back to the same `f64`.

use std::io::Read;
use std::path::Path;

use impactlab_core::{Impulse, RateProfileF64};

use crate::error::{CliError, CliResult};

/// Header plus string rows, rendered identically to stdout and files.
#[derive(Debug, Clone, PartialEq, Default)]
pub struct Table {
    pub header: Vec<String>,
    pub rows: Vec<Vec<String>>,
}

impl Table {
    pub fn new(header: &[&str]) -> Self {
        Self {
            header: header.iter().map(|s| s.to_string()).collect(),
            rows: Vec::new(),
        }
    }

    pub fn push(&mut self, row: Vec<String>) {
        debug_assert_eq!(row.len(), self.header.len());
        self.rows.push(row);
    }

    pub fn to_csv(&self) -> CliResult<String> {
        let mut w = csv::WriterBuilder::new()
            .terminator(csv::Terminator::Any(b'\n'))
            .from_writer(Vec::new());
        w.write_record(&self.header)?;
        for r in &self.rows {
            w.write_record(r)?;
        }
        let bytes = w
            .into_inner()
            .map_err(|e| CliError::Failed(e.to_string()))?;
        Ok(String::from_utf8(bytes).expect("csv output is utf-8"))
    }
}

pub fn num(v: f64) -> String {
    format!("{v}")
}

pub fn opt(v: Option<f64>) -> String {
    v.map(num).unwrap_or_default()
}

fn reader(path: &Path) -> CliResult<csv::Reader<Box<dyn Read>>> {
    let file = std::fs::File::open(path).map_err(|e| CliError::io(path, e))?;
    Ok(csv::ReaderBuilder::new()
        .trim(csv::Trim::All)
        .flexible(true)
        .from_reader(Box::new(file) as Box<dyn Read>))
}

fn field(rec: &csv::StringRecord, i: usize, line: u64) -> CliResult<f64> {
    rec.get(i)
        .and_then(|s| s.parse::<f64>().ok())
        .filter(|v| v.is_finite())
        .ok_or_else(|| {
            CliError::Usage(format!(
                "line {line}: column {} is not a finite number",
                i + 1
            ))
        })
}

pub const PROFILE_HEADER: [&str; 3] = ["t_start", "t_end", "rate"];
pub const IMPULSE_FLAG: &str = "impulse";

/// Parses a profile: rows `t_start,t_end,rate`, plus block trades written
/// as `t,volume,impulse`. Gaps between intervals get a zero rate.
pub fn parse_profile(text: &str) -> CliResult<RateProfileF64> {
    let mut rdr = csv::ReaderBuilder::new()
        .trim(csv::Trim::All)
        .flexible(true)
        .from_reader(text.as_bytes());
    let headers = rdr.headers()?.clone();
    if headers.iter().collect::<Vec<_>>() != PROFILE_HEADER {
        return Err(CliError::Usage(format!(
            "profile header must be {}",
            PROFILE_HEADER.join(",")
        )));
    }
    let mut intervals: Vec<(f64, f64, f64)> = Vec::new();
    let mut impulses = Vec::new();
    for rec in rdr.records() {
        let rec = rec?;
        let line = rec.position().map_or(0, |p| p.line());
        if rec.len() != 3 {
            return Err(CliError::Usage(format!("line {line}: expected 3 columns")));
        }
        if &rec[2] == IMPULSE_FLAG {
            impulses.push(Impulse::new(field(&rec, 0, line)?, field(&rec, 1, line)?));
        } else {
            let (a, b, q) = (
                field(&rec, 0, line)?,
                field(&rec, 1, line)?,
                field(&rec, 2, line)?,
            );
            if b <= a {
                return Err(CliError::Usage(format!(
                    "line {line}: t_end must exceed t_start"
                )));
            }
            intervals.push((a, b, q));
        }
    }
    intervals.sort_by(|x, y| x.0.total_cmp(&y.0));
    let mut grid = Vec::new();
    let mut rates = Vec::new();
    for (a, b, q) in intervals {
        match grid.last() {
            None => grid.push(a),
            Some(&end) if a > end => {
                rates.push(0.0);
                grid.push(a);
            }
            Some(&end) if a < end => {
                return Err(CliError::Usage(format!(
                    "profile intervals overlap at t = {a}"
                )));
            }
            Some(_) => {}
        }
        rates.push(q);
        grid.push(b);
    }
    Ok(RateProfileF64::new(grid, rates, impulses)?)
}

pub fn read_profile(path: &Path) -> CliResult<RateProfileF64> {
    let text = std::fs::read_to_string(path).map_err(|e| CliError::io(path, e))?;
    parse_profile(&text)
}

pub fn profile_table(p: &RateProfileF64) -> Table {
    let mut t = Table::new(&PROFILE_HEADER);
    for (a, b, q) in p.intervals() {
        t.push(vec![num(a), num(b), num(q)]);
    }
    for i in p.impulses() {
        t.push(vec![num(i.time), num(i.volume), IMPULSE_FLAG.into()]);
    }
    t
}

/// Child orders from a `t,volume` file.
pub fn read_trades(path: &Path) -> CliResult<Vec<Impulse<f64>>> {
    let mut rdr = reader(path)?;
    let headers = rdr.headers()?.clone();
    if headers.iter().collect::<Vec<_>>() != ["t", "volume"] {
        return Err(CliError::Usage("trades header must be t,volume".into()));
    }
    let mut out = Vec::new();
    for rec in rdr.records() {
        let rec = rec?;
        let line = rec.position().map_or(0, |p| p.line());
        out.push(Impulse::new(field(&rec, 0, line)?, field(&rec, 1, line)?));
    }
    Ok(out)
}
