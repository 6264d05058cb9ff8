//! Dataset files: raw CSV in, binarized JSONL rows between commands.

use std::fs::File;
use std::io::{self, BufRead, BufReader, BufWriter, Read, Write};
use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::failure::{CliResult, Failure};

/// One binarized example.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Row {
    pub bits: Vec<u8>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub label: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub target: Option<f64>,
}

fn open_path(path: &Path) -> CliResult<File> {
    File::open(path).map_err(|e| Failure::Io(format!("cannot open {}: {e}", path.display())))
}

/// Reads from `path`, or stdin when absent or `-`.
pub fn reader(path: Option<&Path>) -> CliResult<Box<dyn Read>> {
    match path {
        Some(p) if p != Path::new("-") => Ok(Box::new(open_path(p)?)),
        _ => Ok(Box::new(io::stdin().lock())),
    }
}

/// Writes to `path`, or stdout when absent or `-`.
pub fn writer(path: Option<&Path>) -> CliResult<Box<dyn Write>> {
    match path {
        Some(p) if p != Path::new("-") => {
            let file = File::create(p)
                .map_err(|e| Failure::Io(format!("cannot create {}: {e}", p.display())))?;
            Ok(Box::new(BufWriter::new(file)))
        }
        _ => Ok(Box::new(BufWriter::new(io::stdout().lock()))),
    }
}

pub fn read_to_string(path: &Path) -> CliResult<String> {
    let mut text = String::new();
    open_path(path)?
        .read_to_string(&mut text)
        .map_err(|e| Failure::Io(format!("cannot read {}: {e}", path.display())))?;
    Ok(text)
}

/// Parses JSONL rows, skipping blank lines. All rows must share one width.
pub fn read_rows(input: impl Read) -> CliResult<Vec<Row>> {
    let mut rows: Vec<Row> = Vec::new();
    for (i, line) in BufReader::new(input).lines().enumerate() {
        let line = line?;
        if line.trim().is_empty() {
            continue;
        }
        let row: Row = serde_json::from_str(&line)
            .map_err(|e| Failure::usage(format!("line {}: {e}", i + 1)))?;
        if let Some(first) = rows.first() {
            if first.bits.len() != row.bits.len() {
                return Err(Failure::usage(format!(
                    "line {}: row has {} digits, earlier rows have {}",
                    i + 1,
                    row.bits.len(),
                    first.bits.len()
                )));
            }
        }
        rows.push(row);
    }
    Ok(rows)
}

pub fn write_row(out: &mut dyn Write, row: &Row) -> CliResult<()> {
    let line = serde_json::to_string(row).expect("rows always serialize");
    writeln!(out, "{line}")?;
    Ok(())
}

/// A selection of CSV columns such as `0-3,5` or, with a header, `x,y`.
#[derive(Debug, Clone, PartialEq)]
pub struct ColumnSpec(Vec<ColumnRef>);

#[derive(Debug, Clone, PartialEq)]
enum ColumnRef {
    Index(usize),
    Range(usize, usize),
    Name(String),
}

impl ColumnSpec {
    pub fn parse(spec: &str) -> CliResult<Self> {
        let bad = |part: &str| Failure::usage(format!("bad column spec {spec:?} at {part:?}"));
        let mut refs = Vec::new();
        for part in spec.split(',').map(str::trim) {
            if part.is_empty() {
                return Err(bad(part));
            }
            let numeric = |s: &str| s.parse::<usize>().map_err(|_| bad(part));
            if let Some((a, b)) = part.split_once('-') {
                let (a, b) = (numeric(a)?, numeric(b)?);
                if a > b {
                    return Err(bad(part));
                }
                refs.push(ColumnRef::Range(a, b));
            } else if part.bytes().all(|b| b.is_ascii_digit()) {
                refs.push(ColumnRef::Index(numeric(part)?));
            } else {
                refs.push(ColumnRef::Name(part.to_string()));
            }
        }
        Ok(ColumnSpec(refs))
    }

    /// Resolves to column indices against the header (if any) and row width.
    pub fn resolve(
        &self,
        header: Option<&csv::StringRecord>,
        width: usize,
    ) -> CliResult<Vec<usize>> {
        let mut out = Vec::new();
        for r in &self.0 {
            match r {
                ColumnRef::Index(i) => out.push(*i),
                ColumnRef::Range(a, b) => out.extend(*a..=*b),
                ColumnRef::Name(name) => {
                    let header = header.ok_or_else(|| {
                        Failure::usage(format!("column name {name:?} needs --header"))
                    })?;
                    let i = header
                        .iter()
                        .position(|h| h == name)
                        .ok_or_else(|| Failure::usage(format!("no column named {name:?}")))?;
                    out.push(i);
                }
            }
        }
        if let Some(&i) = out.iter().find(|&&i| i >= width) {
            return Err(Failure::usage(format!(
                "column {i} out of range for {width} columns"
            )));
        }
        Ok(out)
    }
}
