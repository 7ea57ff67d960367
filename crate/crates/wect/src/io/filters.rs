//! Whitespace-separated filter tables.
//!
//! One line per vertex, one column per filter, `#` comments and blank
//! lines allowed. Every line must carry the same number of values, all
//! finite. Row `a` gives the filter values of vertex `a` of the complex
//! the table accompanies.

use std::path::Path;

use super::FormatError;
use crate::engine::FilterSet;
use crate::tensor::Tensor;

/// Loads a filter table as a [`FilterSet`].
pub fn load_filters(path: impl AsRef<Path>) -> Result<FilterSet, FormatError> {
    let path = path.as_ref();
    let shown = path.display().to_string();
    let text = std::fs::read_to_string(path).map_err(|e| FormatError::io(&shown, e))?;
    parse_filters(&text, &shown)
}

/// Parses filter table text; `path` is used only for error messages.
pub fn parse_filters(text: &str, path: &str) -> Result<FilterSet, FormatError> {
    let mut values = Vec::new();
    let mut cols = None;
    let mut rows = 0;
    for (idx, raw) in text.lines().enumerate() {
        let line = idx + 1;
        let content = raw.split('#').next().unwrap_or("");
        let fields: Vec<&str> = content.split_whitespace().collect();
        if fields.is_empty() {
            continue;
        }
        match cols {
            None => cols = Some(fields.len()),
            Some(c) if c != fields.len() => {
                return Err(FormatError::parse(
                    path,
                    line,
                    format!("row has {} values, expected {c}", fields.len()),
                ));
            }
            _ => {}
        }
        for field in fields {
            let v: f64 = field.parse().map_err(|_| {
                FormatError::parse(path, line, format!("not a number: {field:?}"))
            })?;
            if !v.is_finite() {
                return Err(FormatError::parse(
                    path,
                    line,
                    format!("filter values must be finite, got {field}"),
                ));
            }
            values.push(v);
        }
        rows += 1;
    }
    let cols = cols.ok_or_else(|| FormatError::parse(path, 1, "empty filter table".to_string()))?;
    let fvals = Tensor::from_vec(&[rows, cols], values).expect("consistent rows");
    FilterSet::new(fvals).map_err(|e| FormatError::parse(path, 1, e.to_string()))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn tables_parse_row_major() {
        let fs = parse_filters("0.0 1.5\n-2.0 0.25 # heights\n", "f.txt").unwrap();
        assert_eq!(fs.vertex_count(), 2);
        assert_eq!(fs.filter_count(), 2);
        assert_eq!(fs.value(1, 0), -2.0);
        assert_eq!(fs.value(1, 1), 0.25);
    }

    #[test]
    fn defects_are_rejected_with_lines() {
        let err = parse_filters("1 2\n3\n", "f.txt").unwrap_err();
        assert!(err.to_string().contains("f.txt:2"));
        assert!(parse_filters("inf\n", "f.txt").is_err());
        assert!(parse_filters("x\n", "f.txt").is_err());
        assert!(parse_filters("# only comments\n", "f.txt").is_err());
    }
}
