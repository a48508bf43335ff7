use std::fs;
use std::io::Read;
use std::path::Path;

use qad_core::Sample;

use crate::error::{CliError, Result};

/// Token that marks a missing observation.
pub const MISSING: &str = "NA";

/// A parsed numeric dataset and the number of dropped missing entries.
#[derive(Debug, Clone, PartialEq)]
pub struct InputDataset {
    pub source: String,
    pub sample: Sample,
    pub skipped_missing: usize,
}

impl InputDataset {
    /// Reads `path`, or standard input when `path` is `None` or `-`.
    pub fn load(path: Option<&Path>) -> Result<Self> {
        let (source, text) = match path {
            Some(p) if p.as_os_str() != "-" => {
                let text = fs::read_to_string(p).map_err(|e| CliError::Io {
                    path: p.display().to_string(),
                    source: e,
                })?;
                (p.display().to_string(), text)
            }
            _ => {
                let mut text = String::new();
                std::io::stdin()
                    .read_to_string(&mut text)
                    .map_err(|e| CliError::Io {
                        path: "<stdin>".into(),
                        source: e,
                    })?;
                ("<stdin>".to_string(), text)
            }
        };
        Self::parse(source, &text)
    }

    /// Whitespace-separated numbers; `NA` tokens and blank lines count as
    /// missing.
    pub fn parse(source: impl Into<String>, text: &str) -> Result<Self> {
        let source = source.into();
        let mut values = Vec::new();
        let mut skipped = 0;
        for (line_no, line) in text.lines().enumerate() {
            if line.trim().is_empty() {
                skipped += 1;
                continue;
            }
            for token in line.split_whitespace() {
                if token == MISSING {
                    skipped += 1;
                    continue;
                }
                let v: f64 = token.parse().map_err(|_| {
                    CliError::input(format!("{source}:{}: not a number: {token:?}", line_no + 1))
                })?;
                if !v.is_finite() {
                    return Err(CliError::input(format!(
                        "{source}:{}: non-finite value {token:?}",
                        line_no + 1
                    )));
                }
                values.push(v);
            }
        }
        if values.is_empty() {
            return Err(CliError::input(format!("{source}: no numeric values")));
        }
        Ok(Self {
            source,
            sample: Sample::new(values)?,
            skipped_missing: skipped,
        })
    }
}
