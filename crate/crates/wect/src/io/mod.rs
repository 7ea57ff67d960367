//! File formats: images and complexes in, curve matrices out.
//!
//! Inputs are small, strictly specified formats parsed by hand so that
//! loading is bit-exact and errors carry the offending line or byte
//! offset: PGM images ([`pgm`]), CSV grids of intensities ([`grid`]), a
//! plain-text complex format ([`complex_text`]) and whitespace-separated
//! filter tables ([`filters`]). Results go out as CSV with full-precision
//! decimal floats or as a raw little-endian binary block ([`result`]).

pub mod complex_text;
pub mod filters;
pub mod grid;
pub mod pgm;
pub mod result;

use thiserror::Error;

/// Errors from reading or writing any of the file formats.
#[derive(Debug, Error)]
pub enum FormatError {
    #[error("{path}: {source}")]
    Io {
        path: String,
        #[source]
        source: std::io::Error,
    },
    /// A text-format defect, located by 1-based line number.
    #[error("{path}:{line}: {message}")]
    Parse {
        path: String,
        line: usize,
        message: String,
    },
    /// A binary-format defect, located by byte offset.
    #[error("{path}: byte {offset}: {message}")]
    Binary {
        path: String,
        offset: usize,
        message: String,
    },
}

impl FormatError {
    pub(crate) fn io(path: &str, source: std::io::Error) -> FormatError {
        FormatError::Io {
            path: path.to_string(),
            source,
        }
    }

    pub(crate) fn parse(path: &str, line: usize, message: impl Into<String>) -> FormatError {
        FormatError::Parse {
            path: path.to_string(),
            line,
            message: message.into(),
        }
    }

    pub(crate) fn binary(path: &str, offset: usize, message: impl Into<String>) -> FormatError {
        FormatError::Binary {
            path: path.to_string(),
            offset,
            message: message.into(),
        }
    }
}
