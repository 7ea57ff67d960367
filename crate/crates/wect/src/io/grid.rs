//! CSV grids of intensities as an image source.
//!
//! Each line is one row of comma-separated numbers; all rows must have the
//! same length. Values must lie in `[0, 255]`: if any value exceeds 1 the
//! whole grid is treated as 8-bit-style data and divided by 255, otherwise
//! the values are taken as already normalized intensities.

use std::path::Path;

use super::FormatError;
use crate::builders::GrayscaleImage;

/// Loads a CSV grid as a grayscale image.
pub fn load_csv_grid(path: impl AsRef<Path>) -> Result<GrayscaleImage, FormatError> {
    let path = path.as_ref();
    let shown = path.display().to_string();
    let text = std::fs::read_to_string(path).map_err(|e| FormatError::io(&shown, e))?;
    parse_csv_grid(&text, &shown)
}

/// Parses CSV grid text; `path` is used only for error messages.
pub fn parse_csv_grid(text: &str, path: &str) -> Result<GrayscaleImage, FormatError> {
    let mut values: Vec<f64> = Vec::new();
    let mut cols = None;
    let mut rows = 0;
    for (idx, raw) in text.lines().enumerate() {
        let line = idx + 1;
        if raw.trim().is_empty() {
            continue;
        }
        let mut this_row = 0;
        for field in raw.split(',') {
            let field = field.trim();
            let v: f64 = field.parse().map_err(|_| {
                FormatError::parse(path, line, format!("not a number: {field:?}"))
            })?;
            if !v.is_finite() || !(0.0..=255.0).contains(&v) {
                return Err(FormatError::parse(
                    path,
                    line,
                    format!("value {v} outside [0, 255]"),
                ));
            }
            values.push(v);
            this_row += 1;
        }
        match cols {
            None => cols = Some(this_row),
            Some(c) if c != this_row => {
                return Err(FormatError::parse(
                    path,
                    line,
                    format!("row has {this_row} values, expected {c}"),
                ));
            }
            _ => {}
        }
        rows += 1;
    }
    let cols = cols.ok_or_else(|| FormatError::parse(path, 1, "empty grid".to_string()))?;
    let needs_scaling = values.iter().any(|&v| v > 1.0);
    if needs_scaling {
        for v in &mut values {
            *v /= 255.0;
        }
    }
    GrayscaleImage::new(rows, cols, values).map_err(|e| FormatError::parse(path, 1, e.to_string()))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn already_normalized_grids_pass_through() {
        let img = parse_csv_grid("0.0, 0.5\n1.0, 0.25\n", "g.csv").unwrap();
        assert_eq!((img.rows(), img.cols()), (2, 2));
        assert_eq!(img.intensity(0, 1), 0.5);
        assert_eq!(img.intensity(1, 0), 1.0);
    }

    #[test]
    fn eight_bit_grids_are_scaled_down() {
        let img = parse_csv_grid("0,128\n255,64\n", "g.csv").unwrap();
        assert_eq!(img.intensity(0, 1), 128.0 / 255.0);
        assert_eq!(img.intensity(1, 0), 1.0);
        // A single out-of-unit value rescales everything.
        let img = parse_csv_grid("1, 2\n", "g.csv").unwrap();
        assert_eq!(img.intensity(0, 0), 1.0 / 255.0);
    }

    #[test]
    fn ragged_rows_are_rejected_with_the_line() {
        let err = parse_csv_grid("1,2,3\n4,5\n", "g.csv").unwrap_err();
        let msg = err.to_string();
        assert!(msg.contains("g.csv:2"), "{msg}");
        assert!(msg.contains("row has 2 values, expected 3"), "{msg}");
    }

    #[test]
    fn bad_values_are_rejected() {
        assert!(parse_csv_grid("1,abc\n", "g.csv").is_err());
        assert!(parse_csv_grid("256\n", "g.csv").is_err());
        assert!(parse_csv_grid("-1\n", "g.csv").is_err());
        assert!(parse_csv_grid("", "g.csv").is_err());
        assert!(parse_csv_grid("nan\n", "g.csv").is_err());
    }

    #[test]
    fn blank_lines_are_skipped() {
        let img = parse_csv_grid("\n0.5\n\n0.75\n\n", "g.csv").unwrap();
        assert_eq!((img.rows(), img.cols()), (2, 1));
    }
}
