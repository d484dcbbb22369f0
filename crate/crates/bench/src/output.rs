//! CSV emission and parsing for run records and summaries.

use std::path::Path;

use crate::error::{BenchError, Result};
use crate::experiment::RunRecord;
use crate::summary::Summary;

pub const RECORD_HEADER: [&str; 11] =
    ["algorithm", "dataset", "k", "alpha", "eps", "seed", "value", "ratio", "queries", "peak_memory", "wall_ms"];

pub const SUMMARY_HEADER: [&str; 7] = ["algorithm", "k", "runs", "mean_value", "var_value", "mean_ratio", "var_ratio"];

/// `printf("%.10g")`: 10 significant digits, trailing zeros removed,
/// exponent form outside `1e-4 <= |x| < 1e10`.
pub fn fmt_g10(x: f64) -> String {
    if x == 0.0 {
        return "0".into();
    }
    if !x.is_finite() {
        return if x.is_nan() { "nan".into() } else if x > 0.0 { "inf".into() } else { "-inf".into() };
    }
    let sci = format!("{x:.9e}");
    let (mantissa, exp) = sci.split_once('e').unwrap();
    let exp: i32 = exp.parse().unwrap();
    let trim = |s: &str| -> String {
        if s.contains('.') {
            s.trim_end_matches('0').trim_end_matches('.').to_string()
        } else {
            s.to_string()
        }
    };
    if !(-4..10).contains(&exp) {
        let sign = if exp < 0 { '-' } else { '+' };
        format!("{}e{sign}{:02}", trim(mantissa), exp.abs())
    } else {
        trim(&format!("{:.*}", (9 - exp) as usize, x))
    }
}

fn writer() -> csv::Writer<Vec<u8>> {
    csv::WriterBuilder::new().terminator(csv::Terminator::Any(b'\n')).from_writer(Vec::new())
}

fn finish(meta: Option<&str>, w: csv::Writer<Vec<u8>>) -> Result<String> {
    let body = String::from_utf8(w.into_inner().map_err(|e| BenchError::Io(e.to_string()))?)
        .map_err(|e| BenchError::Io(e.to_string()))?;
    Ok(match meta {
        Some(m) => format!("{m}\n{body}"),
        None => body,
    })
}

/// Metadata comment line, header, one row per record.
pub fn records_to_csv(meta: Option<&str>, records: &[RunRecord]) -> Result<String> {
    let mut w = writer();
    w.write_record(RECORD_HEADER)?;
    for r in records {
        w.write_record([
            r.algorithm.clone(),
            r.dataset.clone(),
            r.k.to_string(),
            fmt_g10(r.alpha),
            fmt_g10(r.eps),
            r.seed.to_string(),
            fmt_g10(r.value),
            fmt_g10(r.ratio),
            r.queries.to_string(),
            r.peak_memory.to_string(),
            r.wall_ms.to_string(),
        ])?;
    }
    finish(meta, w)
}

pub fn summaries_to_csv(meta: Option<&str>, summaries: &[Summary]) -> Result<String> {
    let mut w = writer();
    w.write_record(SUMMARY_HEADER)?;
    for s in summaries {
        w.write_record([
            s.algorithm.clone(),
            s.k.to_string(),
            s.runs.to_string(),
            fmt_g10(s.mean_value),
            fmt_g10(s.var_value),
            fmt_g10(s.mean_ratio),
            fmt_g10(s.var_ratio),
        ])?;
    }
    finish(meta, w)
}

fn field<T: std::str::FromStr>(rec: &csv::StringRecord, i: usize, line: usize) -> Result<T> {
    let raw = rec.get(i).ok_or_else(|| BenchError::Parse(format!("row {line}: missing column {}", RECORD_HEADER[i])))?;
    raw.parse()
        .map_err(|_| BenchError::Parse(format!("row {line}: bad {} value {raw:?}", RECORD_HEADER[i])))
}

/// Parses the output of [`records_to_csv`]. Returns the metadata line, if
/// present, and the records.
pub fn parse_records(text: &str) -> Result<(Option<String>, Vec<RunRecord>)> {
    let (meta, body) = match text.strip_prefix('#') {
        Some(_) => {
            let (first, rest) = text.split_once('\n').unwrap_or((text, ""));
            (Some(first.to_string()), rest)
        }
        None => (None, text),
    };
    let mut reader = csv::Reader::from_reader(body.as_bytes());
    let header = reader.headers()?.clone();
    if header.iter().ne(RECORD_HEADER) {
        return Err(BenchError::Parse(format!("unexpected header {header:?}")));
    }
    let mut records = Vec::new();
    for (i, row) in reader.records().enumerate() {
        let row = row?;
        let line = i + 2;
        records.push(RunRecord {
            algorithm: field(&row, 0, line)?,
            dataset: field(&row, 1, line)?,
            k: field(&row, 2, line)?,
            alpha: field(&row, 3, line)?,
            eps: field(&row, 4, line)?,
            seed: field(&row, 5, line)?,
            value: field(&row, 6, line)?,
            ratio: field(&row, 7, line)?,
            queries: field(&row, 8, line)?,
            peak_memory: field(&row, 9, line)?,
            wall_ms: field(&row, 10, line)?,
        });
    }
    Ok((meta, records))
}

pub fn write_file(path: &Path, contents: &str) -> Result<()> {
    std::fs::write(path, contents).map_err(|e| BenchError::Io(format!("{}: {e}", path.display())))
}
