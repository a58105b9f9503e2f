use std::fs;
use std::path::Path;

use anyhow::{bail, Context, Result};

/// Read a single-column numeric file. A non-numeric first line is taken as a header.
pub fn read_series(path: &Path) -> Result<Vec<f64>> {
    let text = fs::read_to_string(path).with_context(|| format!("cannot read {}", path.display()))?;
    parse_series(&text).with_context(|| format!("in {}", path.display()))
}

pub fn parse_series(text: &str) -> Result<Vec<f64>> {
    let mut values = Vec::new();
    let mut first = true;
    for (i, raw) in text.lines().enumerate() {
        let line = raw.trim();
        if line.is_empty() {
            continue;
        }
        let field = line.trim_end_matches([',', ';']).trim();
        if field.contains([',', ';', '\t']) {
            bail!("line {}: expected a single column, got `{line}`", i + 1);
        }
        match field.parse::<f64>() {
            Ok(v) if v.is_finite() => values.push(v),
            Ok(_) => bail!("line {}: missing or non-finite value `{field}`", i + 1),
            Err(_) if first && !is_missing(field) => {}
            Err(_) => bail!("line {}: not a number: `{field}`", i + 1),
        }
        first = false;
    }
    if values.is_empty() {
        bail!("no observations found");
    }
    Ok(values)
}

fn is_missing(field: &str) -> bool {
    matches!(
        field.to_ascii_lowercase().as_str(),
        "na" | "nan" | "null" | "." | "-"
    )
}
