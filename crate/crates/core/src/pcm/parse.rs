use num_rational::Ratio;
use serde::{Deserialize, Serialize};
use serde_json::Value;

use super::{PairwiseComparisonMatrix, WeightVector};
use crate::error::{ParseError, ValidationError};
use crate::{Result, Scalar};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum MatrixFormat {
    Csv,
    Json,
}

impl std::str::FromStr for MatrixFormat {
    type Err = String;

    fn from_str(s: &str) -> std::result::Result<Self, String> {
        match s.to_ascii_lowercase().as_str() {
            "csv" => Ok(MatrixFormat::Csv),
            "json" => Ok(MatrixFormat::Json),
            other => Err(format!("unknown matrix format `{other}`")),
        }
    }
}

/// Parses and validates a matrix.
///
/// CSV: one row per line, comma separated, no header. JSON:
/// `{"n": 4, "entries": [[1, "1/3", ...], ...]}`. In both formats an entry is a
/// decimal or a `p/q` fraction; fractions and short decimals are evaluated
/// exactly and rounded to `T` once.
pub fn parse_matrix<T: Scalar>(text: &str, format: MatrixFormat) -> Result<PairwiseComparisonMatrix<T>> {
    parse_matrix_with(text, format, T::default_tolerances().reciprocity)
}

/// [`parse_matrix`] with an explicit relative tolerance for `a_ij * a_ji = 1`.
pub fn parse_matrix_with<T: Scalar>(
    text: &str,
    format: MatrixFormat,
    reciprocity_tol: T,
) -> Result<PairwiseComparisonMatrix<T>> {
    let rows = match format {
        MatrixFormat::Csv => parse_csv(text)?,
        MatrixFormat::Json => parse_json(text)?,
    };
    PairwiseComparisonMatrix::from_rows_with(rows, reciprocity_tol)
}

/// A weight vector: entries separated by commas, semicolons or whitespace,
/// or a JSON array. Entries take the same forms as matrix cells.
pub fn parse_weights<T: Scalar>(text: &str) -> Result<WeightVector<T>> {
    let trimmed = text.trim();
    let values = if trimmed.starts_with('[') {
        let v: Vec<Value> = serde_json::from_str(trimmed).map_err(|e| ParseError::new(e.line(), e.to_string()))?;
        v.iter()
            .map(json_entry)
            .collect::<std::result::Result<Vec<T>, _>>()
            .map_err(|msg| ParseError::new(1, msg))?
    } else {
        let mut out = Vec::new();
        for (idx, line) in text.lines().enumerate() {
            for cell in line.split(|c: char| c == ',' || c == ';' || c.is_whitespace()) {
                if !cell.is_empty() {
                    out.push(parse_entry(cell).map_err(|msg| ParseError::new(idx + 1, msg))?);
                }
            }
        }
        out
    };
    if values.is_empty() {
        return Err(ParseError::new(0, "no weights").into());
    }
    WeightVector::new(values)
}

fn parse_csv<T: Scalar>(text: &str) -> Result<Vec<Vec<T>>> {
    let mut rows = Vec::new();
    for (idx, line) in text.lines().enumerate() {
        let line = line.trim();
        if line.is_empty() {
            continue;
        }
        let row = line
            .split(',')
            .map(|cell| parse_entry(cell).map_err(|msg| ParseError::new(idx + 1, msg)))
            .collect::<std::result::Result<Vec<T>, _>>()?;
        rows.push(row);
    }
    if rows.is_empty() {
        return Err(ParseError::new(0, "no rows").into());
    }
    Ok(rows)
}

fn parse_json<T: Scalar>(text: &str) -> Result<Vec<Vec<T>>> {
    let value: Value =
        serde_json::from_str(text).map_err(|e| ParseError::new(e.line(), e.to_string()))?;
    let declared = value
        .get("n")
        .and_then(Value::as_u64)
        .ok_or_else(|| ParseError::new(0, "missing integer field `n`"))? as usize;
    let entries = value
        .get("entries")
        .and_then(Value::as_array)
        .ok_or_else(|| ParseError::new(0, "missing array field `entries`"))?;
    let rows = entries
        .iter()
        .enumerate()
        .map(|(i, row)| {
            let cells = row
                .as_array()
                .ok_or_else(|| ParseError::new(0, format!("entries[{i}] is not an array")))?;
            cells
                .iter()
                .enumerate()
                .map(|(j, cell)| json_entry(cell).map_err(|msg| ParseError::new(0, format!("entries[{i}][{j}]: {msg}"))))
                .collect::<std::result::Result<Vec<T>, _>>()
        })
        .collect::<std::result::Result<Vec<_>, _>>()?;
    if rows.len() != declared {
        return Err(ValidationError::SizeMismatch {
            declared,
            actual: rows.len(),
        }
        .into());
    }
    Ok(rows)
}

fn json_entry<T: Scalar>(cell: &Value) -> std::result::Result<T, String> {
    match cell {
        Value::Number(num) => num
            .as_f64()
            .map(T::lit)
            .ok_or_else(|| format!("number {num} out of range")),
        Value::String(s) => parse_entry(s),
        other => Err(format!("expected number or string, got {other}")),
    }
}

/// One matrix cell: `p/q` or a decimal.
pub fn parse_entry<T: Scalar>(cell: &str) -> std::result::Result<T, String> {
    let cell = cell.trim();
    if cell.is_empty() {
        return Err("empty entry".into());
    }
    if let Some((num, den)) = cell.split_once('/') {
        let p = exact_decimal(num.trim()).ok_or_else(|| format!("bad numerator in `{cell}`"))?;
        let q = exact_decimal(den.trim()).ok_or_else(|| format!("bad denominator in `{cell}`"))?;
        if q == Ratio::from_integer(0) {
            return Err(format!("zero denominator in `{cell}`"));
        }
        return Ok(T::from_ratio(&(p / q)));
    }
    if let Some(r) = exact_decimal(cell) {
        return Ok(T::from_ratio(&r));
    }
    cell.parse::<f64>()
        .ok()
        .filter(|v| v.is_finite())
        .map(T::lit)
        .ok_or_else(|| format!("`{cell}` is not a number"))
}

/// Plain decimal (`12`, `-0.25`, `.5`) as an exact rational; `None` for
/// anything else, including exponent notation and over-long literals.
fn exact_decimal(s: &str) -> Option<Ratio<i128>> {
    let (negative, body) = match s.strip_prefix('-') {
        Some(rest) => (true, rest),
        None => (false, s.strip_prefix('+').unwrap_or(s)),
    };
    let (int_part, frac_part) = body.split_once('.').unwrap_or((body, ""));
    if int_part.is_empty() && frac_part.is_empty() {
        return None;
    }
    if !int_part.bytes().chain(frac_part.bytes()).all(|b| b.is_ascii_digit()) {
        return None;
    }
    if int_part.len() + frac_part.len() > 30 {
        return None;
    }
    let digits: i128 = format!("{int_part}{frac_part}").parse().ok()?;
    let scale = 10i128.checked_pow(frac_part.len() as u32)?;
    let r = Ratio::new(digits, scale);
    Some(if negative { -r } else { r })
}
