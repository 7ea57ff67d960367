//! Serialization of curve matrices: CSV for people, raw64 for machines.
//!
//! CSV: the first row is `height,` followed by the grid heights; every
//! later row is a label — the direction's components joined by `;` for
//! transforms, the filter index otherwise — followed by the curve values.
//! All floats are written with 17 significant digits, enough to reproduce
//! the exact binary64 values on parsing.
//!
//! raw64: a 16-byte header of two little-endian `u64` (filter count `m`,
//! `numvals`), then `m × numvals` little-endian binary64 curve values
//! row-major, then, for transforms, the `m × n` direction components.

use std::io::{self, Read, Write};
use std::path::Path;

use super::complex_text::fmt_f64;
use super::FormatError;
use crate::builders::DirectionSet;
use crate::engine::WecfMatrix;
use crate::tensor::Tensor;

/// How data rows are labeled in CSV output.
#[derive(Debug, Clone, Copy)]
pub enum RowLabels<'a> {
    /// Row `p` is labeled with the filter index `p`.
    FilterIndex,
    /// Row `p` is labeled with direction `p`'s components joined by `;`.
    Directions(&'a DirectionSet),
}

/// Writes a curve matrix as CSV.
pub fn write_csv(
    w: &mut impl Write,
    matrix: &WecfMatrix,
    labels: RowLabels<'_>,
) -> io::Result<()> {
    write!(w, "height")?;
    for h in matrix.grid().heights() {
        write!(w, ",{}", fmt_f64(h))?;
    }
    writeln!(w)?;
    for p in 0..matrix.filter_count() {
        match labels {
            RowLabels::FilterIndex => write!(w, "{p}")?,
            RowLabels::Directions(dirs) => {
                let parts: Vec<String> = dirs.row(p).iter().map(|&x| fmt_f64(x)).collect();
                write!(w, "{}", parts.join(";"))?;
            }
        }
        for &v in matrix.curve(p) {
            write!(w, ",{}", fmt_f64(v))?;
        }
        writeln!(w)?;
    }
    Ok(())
}

/// A CSV curve file read back: heights, row labels and curve values.
#[derive(Debug, Clone, PartialEq)]
pub struct CsvCurves {
    pub heights: Vec<f64>,
    pub labels: Vec<String>,
    /// One row of `heights.len()` values per label.
    pub rows: Vec<Vec<f64>>,
}

/// Parses CSV produced by [`write_csv`]; `path` is for error messages.
pub fn parse_csv_curves(text: &str, path: &str) -> Result<CsvCurves, FormatError> {
    let mut lines = text.lines().enumerate();
    let (_, header) = lines
        .next()
        .ok_or_else(|| FormatError::parse(path, 1, "empty file".to_string()))?;
    let mut fields = header.split(',');
    if fields.next() != Some("height") {
        return Err(FormatError::parse(
            path,
            1,
            "first header field must be \"height\"".to_string(),
        ));
    }
    let heights = parse_floats(fields, path, 1)?;
    let mut labels = Vec::new();
    let mut rows = Vec::new();
    for (idx, raw) in lines {
        if raw.is_empty() {
            continue;
        }
        let line = idx + 1;
        let mut fields = raw.split(',');
        labels.push(fields.next().unwrap_or("").to_string());
        let row = parse_floats(fields, path, line)?;
        if row.len() != heights.len() {
            return Err(FormatError::parse(
                path,
                line,
                format!("row has {} values, expected {}", row.len(), heights.len()),
            ));
        }
        rows.push(row);
    }
    Ok(CsvCurves {
        heights,
        labels,
        rows,
    })
}

fn parse_floats<'a>(
    fields: impl Iterator<Item = &'a str>,
    path: &str,
    line: usize,
) -> Result<Vec<f64>, FormatError> {
    fields
        .map(|f| {
            f.trim()
                .parse()
                .map_err(|_| FormatError::parse(path, line, format!("not a number: {f:?}")))
        })
        .collect()
}

/// Writes a curve matrix in the raw64 format. Pass the direction set for
/// transforms so its components follow the matrix; its row count must be
/// the matrix's filter count.
pub fn write_raw64(
    w: &mut impl Write,
    matrix: &WecfMatrix,
    directions: Option<&DirectionSet>,
) -> io::Result<()> {
    if let Some(d) = directions {
        assert_eq!(
            d.count(),
            matrix.filter_count(),
            "direction count must match the matrix rows"
        );
    }
    w.write_all(&(matrix.filter_count() as u64).to_le_bytes())?;
    w.write_all(&(matrix.numvals() as u64).to_le_bytes())?;
    for &v in matrix.values().data() {
        w.write_all(&v.to_le_bytes())?;
    }
    if let Some(d) = directions {
        for &v in d.as_tensor().data() {
            w.write_all(&v.to_le_bytes())?;
        }
    }
    Ok(())
}

/// A raw64 file read back: the matrix dimensions, curve values, and any
/// trailing direction components.
#[derive(Debug, Clone, PartialEq)]
pub struct Raw64Curves {
    pub filter_count: usize,
    pub numvals: usize,
    pub values: Tensor,
    /// Direction components, `n` per filter, when the file has a trailer.
    pub direction_components: Vec<f64>,
}

/// Reads a raw64 curve file.
pub fn load_raw64(path: impl AsRef<Path>) -> Result<Raw64Curves, FormatError> {
    let path = path.as_ref();
    let shown = path.display().to_string();
    let mut bytes = Vec::new();
    std::fs::File::open(path)
        .and_then(|mut f| f.read_to_end(&mut bytes))
        .map_err(|e| FormatError::io(&shown, e))?;
    parse_raw64(&bytes, &shown)
}

/// Parses raw64 bytes; `path` is for error messages.
pub fn parse_raw64(bytes: &[u8], path: &str) -> Result<Raw64Curves, FormatError> {
    if bytes.len() < 16 {
        return Err(FormatError::binary(
            path,
            bytes.len(),
            format!("header needs 16 bytes, file has {}", bytes.len()),
        ));
    }
    let m = u64::from_le_bytes(bytes[0..8].try_into().unwrap()) as usize;
    let numvals = u64::from_le_bytes(bytes[8..16].try_into().unwrap()) as usize;
    let body = &bytes[16..];
    let need = m * numvals * 8;
    if body.len() < need || (body.len() - need) % 8 != 0 {
        return Err(FormatError::binary(
            path,
            16,
            format!(
                "matrix of {m}x{numvals} needs {need} payload bytes plus a multiple of 8, found {}",
                body.len()
            ),
        ));
    }
    let mut values = Vec::with_capacity(m * numvals);
    for chunk in body[..need].chunks_exact(8) {
        values.push(f64::from_le_bytes(chunk.try_into().unwrap()));
    }
    let mut direction_components = Vec::new();
    for chunk in body[need..].chunks_exact(8) {
        direction_components.push(f64::from_le_bytes(chunk.try_into().unwrap()));
    }
    let values = Tensor::from_vec(&[m, numvals], values)
        .map_err(|e| FormatError::binary(path, 16, e.to_string()))?;
    Ok(Raw64Curves {
        filter_count: m,
        numvals,
        values,
        direction_components,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::engine::{compute_wecfs, FilterSet};
    use crate::complex::WeightedComplex;

    fn sample_matrix() -> WecfMatrix {
        // Two vertices swept by two filters; see the engine tests.
        let c = WeightedComplex::vertices_only(
            None,
            Tensor::from_vec(&[2], vec![1.0, 0.5]).unwrap(),
        )
        .unwrap();
        let fs = FilterSet::new(
            Tensor::from_vec(&[2, 2], vec![0.0, 1.0, 1.0, 0.25]).unwrap(),
        )
        .unwrap();
        compute_wecfs(&c, &fs, 3).unwrap()
    }

    #[test]
    fn csv_has_height_header_and_full_precision_rows() {
        let m = sample_matrix();
        let mut buf = Vec::new();
        write_csv(&mut buf, &m, RowLabels::FilterIndex).unwrap();
        let text = String::from_utf8(buf).unwrap();
        let mut lines = text.lines();
        let header = lines.next().unwrap();
        assert!(header.starts_with("height,"));
        assert_eq!(header.split(',').count(), 4);
        assert!(lines.next().unwrap().starts_with("0,"));
        assert!(lines.next().unwrap().starts_with("1,"));

        let back = parse_csv_curves(&text, "c.csv").unwrap();
        assert_eq!(back.heights, m.grid().heights());
        assert_eq!(back.labels, vec!["0", "1"]);
        for p in 0..2 {
            assert_eq!(back.rows[p], m.curve(p));
        }
    }

    #[test]
    fn csv_direction_labels_join_components() {
        let m = sample_matrix();
        let dirs = crate::builders::directions(2, 2, 0).unwrap();
        let mut buf = Vec::new();
        write_csv(&mut buf, &m, RowLabels::Directions(&dirs)).unwrap();
        let text = String::from_utf8(buf).unwrap();
        let row = text.lines().nth(1).unwrap();
        let label = row.split(',').next().unwrap();
        assert_eq!(label.split(';').count(), 2);
        assert!(label.starts_with("1.0000000000000000e0;"));
    }

    #[test]
    fn raw64_round_trips_bit_exactly() {
        let m = sample_matrix();
        let dirs = crate::builders::directions(2, 2, 9).unwrap();
        let mut buf = Vec::new();
        write_raw64(&mut buf, &m, Some(&dirs)).unwrap();
        assert_eq!(buf.len(), 16 + 2 * 3 * 8 + 2 * 2 * 8);
        let back = parse_raw64(&buf, "r.bin").unwrap();
        assert_eq!(back.filter_count, 2);
        assert_eq!(back.numvals, 3);
        assert_eq!(back.values, *m.values());
        assert_eq!(back.direction_components, dirs.as_tensor().data());
    }

    #[test]
    fn raw64_empty_matrix_is_a_valid_header_only_file() {
        let c = WeightedComplex::vertices_only(
            None,
            Tensor::from_vec(&[1], vec![1.0]).unwrap(),
        )
        .unwrap();
        let fs = FilterSet::new(Tensor::from_vec(&[1, 0], vec![]).unwrap()).unwrap();
        let m = compute_wecfs(&c, &fs, 5).unwrap();
        let mut buf = Vec::new();
        write_raw64(&mut buf, &m, None).unwrap();
        assert_eq!(buf.len(), 16);
        let back = parse_raw64(&buf, "r.bin").unwrap();
        assert_eq!(back.filter_count, 0);
        assert_eq!(back.numvals, 5);
        assert!(back.values.is_empty());
    }

    #[test]
    fn raw64_rejects_truncation() {
        let m = sample_matrix();
        let mut buf = Vec::new();
        write_raw64(&mut buf, &m, None).unwrap();
        buf.truncate(buf.len() - 4);
        let err = parse_raw64(&buf, "r.bin").unwrap_err();
        assert!(err.to_string().contains("payload"));
        let err = parse_raw64(&buf[..10], "r.bin").unwrap_err();
        assert!(err.to_string().contains("header needs 16 bytes"));
    }

    #[test]
    fn csv_floats_survive_the_round_trip_exactly() {
        // Awkward values: subnormal-ish, negative, huge, tiny.
        for &x in &[
            0.1,
            -1.0 / 3.0,
            6.02e23,
            -2.5e-17,
            1.0 + f64::EPSILON,
            0.0,
        ] {
            let printed = fmt_f64(x);
            let back: f64 = printed.parse().unwrap();
            assert_eq!(back.to_bits(), x.to_bits(), "{printed}");
        }
    }
}
