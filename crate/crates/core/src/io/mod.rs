//! On-disk formats: FMAP feature tensors, scene-metric CSV and diagnostics JSON.

mod diag_json;
mod fmap;
mod scene_csv;

use thiserror::Error;

use crate::feature::ShapeError;

pub use diag_json::{
    decode_diagnostics_json, encode_diagnostics_json, read_diagnostics_json, write_diagnostics_json,
};
pub use fmap::{decode_fmap, encode_fmap, read_fmap, write_fmap, HEADER_LEN, MAGIC};
pub use scene_csv::{load_scene_metrics, parse_scene_metrics, write_scene_metrics};

#[derive(Debug, Error)]
pub enum FormatError {
    #[error("I/O error: {0}")]
    Io(#[from] std::io::Error),
    #[error("bad magic bytes {found:02X?}, expected \"FMAP\"")]
    BadMagic { found: [u8; 4] },
    #[error("unsupported FMAP version {version} / dtype {dtype}")]
    UnsupportedVersion { version: u8, dtype: u8 },
    #[error("truncated file: expected {expected} bytes, found {actual}")]
    Truncated { expected: usize, actual: usize },
    #[error("trailing data: expected {expected} bytes, found {actual}")]
    TrailingBytes { expected: usize, actual: usize },
    #[error("non-finite payload value at element {index}")]
    NonFiniteValue { index: usize },
    #[error(transparent)]
    Shape(#[from] ShapeError),
    #[error("missing required column `{0}`")]
    MissingColumn(String),
    #[error("row {row}: {message}")]
    Row { row: usize, message: String },
    #[error("duplicate (scene, mode) pair ({scene}, {mode}) at row {row}")]
    DuplicateScene {
        scene: String,
        mode: String,
        row: usize,
    },
    #[error("CSV error: {0}")]
    Csv(#[from] csv::Error),
    #[error("JSON error: {0}")]
    Json(#[from] serde_json::Error),
    #[error("invalid record: {0}")]
    Validation(String),
}
