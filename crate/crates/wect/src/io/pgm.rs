//! PGM (portable graymap) reader, plain and raw variants.
//!
//! Supported inputs are the classic netpbm graymaps with `maxval` 255:
//! `P2` (ASCII samples) and `P5` (one raw byte per sample). The header is
//! magic, width, height and maxval, as whitespace-separated tokens with
//! `#` comments running to end of line. After the `P5` maxval there must
//! be exactly one whitespace byte before the raster. Samples are returned
//! normalized to `[0, 1]` by dividing by 255, row-major from the top-left.

use std::path::Path;

use super::FormatError;
use crate::builders::GrayscaleImage;

/// Byte scanner that tracks line numbers and skips comments.
struct Scanner<'a> {
    bytes: &'a [u8],
    pos: usize,
    line: usize,
    path: &'a str,
}

impl<'a> Scanner<'a> {
    fn new(bytes: &'a [u8], path: &'a str) -> Scanner<'a> {
        Scanner {
            bytes,
            pos: 0,
            line: 1,
            path,
        }
    }

    fn bump(&mut self) -> Option<u8> {
        let b = *self.bytes.get(self.pos)?;
        self.pos += 1;
        if b == b'\n' {
            self.line += 1;
        }
        Some(b)
    }

    /// Skips whitespace and `#` comments; leaves `pos` at the next token.
    fn skip_separators(&mut self) {
        while let Some(&b) = self.bytes.get(self.pos) {
            if b.is_ascii_whitespace() {
                self.bump();
            } else if b == b'#' {
                while let Some(b) = self.bump() {
                    if b == b'\n' {
                        break;
                    }
                }
            } else {
                break;
            }
        }
    }

    /// Reads one unsigned decimal token.
    fn number(&mut self, what: &str) -> Result<u32, FormatError> {
        self.skip_separators();
        let start = self.pos;
        while self
            .bytes
            .get(self.pos)
            .map_or(false, |b| b.is_ascii_digit())
        {
            self.pos += 1;
        }
        if self.pos == start {
            let found = self
                .bytes
                .get(self.pos)
                .map_or("end of file".to_string(), |&b| {
                    format!("{:?}", char::from(b))
                });
            return Err(FormatError::parse(
                self.path,
                self.line,
                format!("expected {what}, found {found}"),
            ));
        }
        let token = std::str::from_utf8(&self.bytes[start..self.pos]).expect("ascii digits");
        token.parse().map_err(|_| {
            FormatError::parse(self.path, self.line, format!("{what} {token} out of range"))
        })
    }
}

/// Loads a `P2` or `P5` graymap with `maxval` 255.
pub fn load_pgm(path: impl AsRef<Path>) -> Result<GrayscaleImage, FormatError> {
    let path = path.as_ref();
    let shown = path.display().to_string();
    let bytes = std::fs::read(path).map_err(|e| FormatError::io(&shown, e))?;
    parse_pgm(&bytes, &shown)
}

/// Parses graymap bytes; `path` is used only for error messages.
pub fn parse_pgm(bytes: &[u8], path: &str) -> Result<GrayscaleImage, FormatError> {
    let mut sc = Scanner::new(bytes, path);
    sc.skip_separators();
    let magic = bytes.get(sc.pos..sc.pos + 2).ok_or_else(|| {
        FormatError::parse(path, sc.line, "missing magic number".to_string())
    })?;
    let raw = match magic {
        b"P2" => false,
        b"P5" => true,
        other => {
            return Err(FormatError::parse(
                path,
                sc.line,
                format!(
                    "unsupported magic {:?} (expected P2 or P5)",
                    String::from_utf8_lossy(other)
                ),
            ))
        }
    };
    sc.pos += 2;

    let width = sc.number("width")? as usize;
    let height = sc.number("height")? as usize;
    sc.skip_separators();
    let maxval_line = sc.line;
    let maxval = sc.number("maxval")?;
    if maxval != 255 {
        return Err(FormatError::parse(
            path,
            maxval_line,
            format!("unsupported maxval {maxval} (expected 255)"),
        ));
    }
    if width == 0 || height == 0 {
        return Err(FormatError::parse(
            path,
            1,
            format!("degenerate image size {width}x{height}"),
        ));
    }
    let expected = width * height;

    let samples = if raw {
        // Exactly one whitespace byte separates maxval from the raster.
        match sc.bytes.get(sc.pos) {
            Some(b) if b.is_ascii_whitespace() => {
                sc.bump();
            }
            _ => {
                return Err(FormatError::binary(
                    path,
                    sc.pos,
                    "expected a single whitespace byte after maxval".to_string(),
                ))
            }
        }
        let payload = &sc.bytes[sc.pos..];
        if payload.len() != expected {
            return Err(FormatError::binary(
                path,
                sc.pos,
                format!(
                    "expected {expected} raster bytes, found {}",
                    payload.len()
                ),
            ));
        }
        payload.iter().map(|&b| b as f64 / 255.0).collect()
    } else {
        let mut samples = Vec::with_capacity(expected);
        for _ in 0..expected {
            sc.skip_separators();
            let line = sc.line;
            let v = sc.number("sample")?;
            if v > maxval {
                return Err(FormatError::parse(
                    path,
                    line,
                    format!("sample {v} exceeds maxval {maxval}"),
                ));
            }
            samples.push(v as f64 / 255.0);
        }
        sc.skip_separators();
        if sc.pos != sc.bytes.len() {
            return Err(FormatError::parse(
                path,
                sc.line,
                format!("trailing data after {expected} samples"),
            ));
        }
        samples
    };

    GrayscaleImage::new(height, width, samples)
        .map_err(|e| FormatError::parse(path, 1, e.to_string()))
}
