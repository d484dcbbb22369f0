use std::fmt::Write as _;
use std::path::Path;

use crate::error::{Error, Result};

use super::CoverageInstance;

/// Parses FIMI transaction text: one set per nonempty line, items are
/// whitespace-separated nonnegative integers. Blank lines are skipped and
/// duplicate items within a line collapse.
pub fn parse_fimi(text: &str) -> Result<CoverageInstance> {
    let mut sets = Vec::new();
    let mut max_item: Option<u32> = None;
    for (idx, line) in text.lines().enumerate() {
        if line.trim().is_empty() {
            continue;
        }
        let mut set = Vec::new();
        for tok in line.split_whitespace() {
            let item: u32 = tok.parse().map_err(|_| Error::Parse {
                line: idx + 1,
                message: format!("expected a nonnegative integer, found {tok:?}"),
            })?;
            max_item = Some(max_item.map_or(item, |m| m.max(item)));
            set.push(item);
        }
        sets.push(set);
    }
    let universe = max_item.map_or(0, |m| m as usize + 1);
    CoverageInstance::new(sets, universe)
}

pub fn read_fimi(path: impl AsRef<Path>) -> Result<CoverageInstance> {
    let path = path.as_ref();
    let text = std::fs::read_to_string(path)
        .map_err(|e| Error::Parse { line: 0, message: format!("{}: {e}", path.display()) })?;
    parse_fimi(&text)
}

/// Writes sets in FIMI form. Empty sets cannot be represented and are
/// written as blank lines, which the parser skips.
pub fn serialize_fimi(inst: &CoverageInstance) -> String {
    let mut out = String::new();
    for set in inst.sets() {
        for (i, item) in set.iter().enumerate() {
            if i > 0 {
                out.push(' ');
            }
            write!(out, "{item}").unwrap();
        }
        out.push('\n');
    }
    out
}
