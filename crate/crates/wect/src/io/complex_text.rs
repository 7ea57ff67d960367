//! Plain-text weighted complex format.
//!
//! The file is line-oriented; `#` starts a comment and blank lines are
//! skipped. The first line is the header
//!
//! ```text
//! dim n k0 k1 ... k_dim
//! ```
//!
//! with `dim` the top cell dimension, `n` the ambient dimension (0 for
//! abstract complexes) and `k_i` the number of `i`-cells. Then follow `k0`
//! vertex lines of `n` coordinates and one weight, and for each dimension
//! `i >= 1` in order, `k_i` cell lines of the cell's vertex indices and one
//! weight. Cells of dimension `i` list either `i + 1` vertices (simplices)
//! or `2^i` (cubes, in corner order); the width is inferred from the first
//! line of each block and must stay consistent within it. Floats are
//! written with 17 significant digits, so write/read round-trips are exact.

use std::io::Write;
use std::path::Path;

use super::FormatError;
use crate::complex::{CellBlock, WeightedComplex};
use crate::tensor::{IndexTensor, Tensor};

/// One payload line: its 1-based number and whitespace-separated fields.
struct Record<'a> {
    line: usize,
    fields: Vec<&'a str>,
}

fn records(text: &str) -> Vec<Record<'_>> {
    text.lines()
        .enumerate()
        .filter_map(|(idx, raw)| {
            let content = raw.split('#').next().unwrap_or("");
            let fields: Vec<&str> = content.split_whitespace().collect();
            if fields.is_empty() {
                None
            } else {
                Some(Record {
                    line: idx + 1,
                    fields,
                })
            }
        })
        .collect()
}

fn parse_usize(path: &str, rec: &Record<'_>, pos: usize, what: &str) -> Result<usize, FormatError> {
    let field = rec.fields[pos];
    field.parse().map_err(|_| {
        FormatError::parse(path, rec.line, format!("{what} must be a nonnegative integer, got {field:?}"))
    })
}

fn next_record<'r, 't>(
    recs: &'r [Record<'t>],
    at: &mut usize,
    path: &str,
    expect: &str,
) -> Result<&'r Record<'t>, FormatError> {
    let rec = recs.get(*at).ok_or_else(|| {
        let last = recs.last().map_or(1, |r| r.line);
        FormatError::parse(path, last, format!("unexpected end of file, expected {expect}"))
    })?;
    *at += 1;
    Ok(rec)
}

fn parse_f64(path: &str, rec: &Record<'_>, pos: usize, what: &str) -> Result<f64, FormatError> {
    let field = rec.fields[pos];
    let v: f64 = field
        .parse()
        .map_err(|_| FormatError::parse(path, rec.line, format!("{what} must be a number, got {field:?}")))?;
    if !v.is_finite() {
        return Err(FormatError::parse(
            path,
            rec.line,
            format!("{what} must be finite, got {field}"),
        ));
    }
    Ok(v)
}

/// Reads a complex from its text format.
pub fn load_complex(path: impl AsRef<Path>) -> Result<WeightedComplex, FormatError> {
    let path = path.as_ref();
    let shown = path.display().to_string();
    let text = std::fs::read_to_string(path).map_err(|e| FormatError::io(&shown, e))?;
    parse_complex(&text, &shown)
}

/// Parses complex text; `path` is used only for error messages.
pub fn parse_complex(text: &str, path: &str) -> Result<WeightedComplex, FormatError> {
    let recs = records(text);
    let mut at = 0;
    let header = recs
        .first()
        .ok_or_else(|| FormatError::parse(path, 1, "missing header line".to_string()))?;
    at += 1;
    if header.fields.len() < 3 {
        return Err(FormatError::parse(
            path,
            header.line,
            "header needs at least: dim n k0".to_string(),
        ));
    }
    let dim = parse_usize(path, header, 0, "dim")?;
    let n = parse_usize(path, header, 1, "ambient dimension")?;
    if header.fields.len() != 3 + dim {
        return Err(FormatError::parse(
            path,
            header.line,
            format!(
                "header for dim {dim} needs {} cell counts, got {}",
                dim + 1,
                header.fields.len() - 2
            ),
        ));
    }
    let mut counts = Vec::with_capacity(dim + 1);
    for i in 0..=dim {
        counts.push(parse_usize(path, header, 2 + i, "cell count")?);
    }
    if dim > 0 && counts[dim] == 0 {
        return Err(FormatError::parse(
            path,
            header.line,
            format!("dim is {dim} but the complex has no {dim}-cells"),
        ));
    }
    let k0 = counts[0];

    let mut coords = Vec::with_capacity(k0 * n);
    let mut vweights = Vec::with_capacity(k0);
    for v in 0..k0 {
        let rec = next_record(&recs, &mut at, path, "a vertex line")?;
        if rec.fields.len() != n + 1 {
            return Err(FormatError::parse(
                path,
                rec.line,
                format!(
                    "vertex {v} needs {n} coordinates and a weight, got {} fields",
                    rec.fields.len()
                ),
            ));
        }
        for j in 0..n {
            coords.push(parse_f64(path, rec, j, "coordinate")?);
        }
        vweights.push(parse_f64(path, rec, n, "weight")?);
    }

    let mut blocks = Vec::new();
    for (i, &count) in counts.iter().enumerate().skip(1) {
        if count == 0 {
            continue;
        }
        let simplex_width = i + 1;
        let cube_width = 1usize << i;
        let mut width = None;
        let mut rows = Vec::new();
        let mut weights = Vec::with_capacity(count);
        for cell in 0..count {
            let rec = next_record(&recs, &mut at, path, &format!("a {i}-cell line"))?;
            let w = match width {
                Some(w) => w,
                None => {
                    let got = rec.fields.len().saturating_sub(1);
                    if got != simplex_width && got != cube_width {
                        return Err(FormatError::parse(
                            path,
                            rec.line,
                            format!(
                                "{i}-cells need {simplex_width} (simplex) or {cube_width} (cube) vertices and a weight, got {got} vertices"
                            ),
                        ));
                    }
                    width = Some(got);
                    got
                }
            };
            if rec.fields.len() != w + 1 {
                return Err(FormatError::parse(
                    path,
                    rec.line,
                    format!(
                        "{i}-cell {cell} needs {w} vertices and a weight like the block's first line, got {} fields",
                        rec.fields.len()
                    ),
                ));
            }
            for pos in 0..w {
                let v = parse_usize(path, rec, pos, "vertex index")?;
                if v >= k0 {
                    return Err(FormatError::parse(
                        path,
                        rec.line,
                        format!("vertex index {v} out of range for {k0} vertices"),
                    ));
                }
                rows.push(v);
            }
            weights.push(parse_f64(path, rec, w, "weight")?);
        }
        let width = width.expect("count > 0");
        let vertices = IndexTensor::new(&[count, width], rows, k0.max(1))
            .expect("indices checked against k0");
        let wtensor = Tensor::from_vec(&[count], weights).expect("weights per cell");
        let block = CellBlock::new(i, vertices, wtensor)
            .map_err(|e| FormatError::parse(path, header.line, e.to_string()))?;
        blocks.push(block);
    }

    if at != recs.len() {
        let rec = &recs[at];
        return Err(FormatError::parse(
            path,
            rec.line,
            "trailing data after the declared cells".to_string(),
        ));
    }

    let coords = if n > 0 {
        Some(Tensor::from_vec(&[k0, n], coords).expect("coordinate tensor"))
    } else {
        None
    };
    let vweights = Tensor::from_vec(&[k0], vweights).expect("vertex weights");
    WeightedComplex::new(coords, vweights, blocks)
        .map_err(|e| FormatError::parse(path, header.line, e.to_string()))
}

/// Full-precision decimal for a float: shortest text that parses back to
/// the same value is overkill here; 17 significant digits always do.
pub(crate) fn fmt_f64(x: f64) -> String {
    format!("{x:.16e}")
}

/// Writes a complex in the text format.
pub fn save_complex(complex: &WeightedComplex, path: impl AsRef<Path>) -> Result<(), FormatError> {
    let path = path.as_ref();
    let shown = path.display().to_string();
    let mut out = Vec::new();
    write_complex(&mut out, complex).map_err(|e| FormatError::io(&shown, e))?;
    std::fs::write(path, out).map_err(|e| FormatError::io(&shown, e))
}

/// Writes a complex to any writer.
pub fn write_complex(w: &mut impl Write, complex: &WeightedComplex) -> std::io::Result<()> {
    let dim = complex.dim();
    let n = complex.ambient_dim().unwrap_or(0);
    write!(w, "{dim} {n} {}", complex.vertex_count())?;
    for i in 1..=dim {
        let count = complex.block(i).map_or(0, |b| b.count());
        write!(w, " {count}")?;
    }
    writeln!(w)?;
    for v in 0..complex.vertex_count() {
        if let Some(coords) = complex.coords() {
            for j in 0..n {
                write!(w, "{} ", fmt_f64(coords.at2(v, j)))?;
            }
        }
        writeln!(w, "{}", fmt_f64(complex.vertex_weights().data()[v]))?;
    }
    for block in complex.cell_blocks() {
        for (row, weight) in block.cells() {
            for &v in row {
                write!(w, "{v} ")?;
            }
            writeln!(w, "{}", fmt_f64(weight))?;
        }
    }
    Ok(())
}
