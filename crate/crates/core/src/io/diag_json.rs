//! Diagnostics records as a JSON array.
//!
//! Keys appear in the fixed order `ssc, bwg, hfss, csc, adc, mcs_lr, mcs_hr,
//! delta_mcs, lr_id, hr_id, config, reasons`. Undefined metrics are `null`.
//! Floats use the shortest representation that parses back to the same `f64`.

use std::fs;
use std::path::Path;

use super::FormatError;
use crate::records::DiagnosticsRecord;

pub fn encode_diagnostics_json(records: &[DiagnosticsRecord]) -> Result<String, FormatError> {
    for r in records {
        r.validate().map_err(FormatError::Validation)?;
    }
    if records.is_empty() {
        return Ok("[]\n".to_string());
    }
    let mut s = serde_json::to_string_pretty(records)?;
    s.push('\n');
    Ok(s)
}

/// Accepts either an array of records or a single record object.
pub fn decode_diagnostics_json(text: &str) -> Result<Vec<DiagnosticsRecord>, FormatError> {
    let value: serde_json::Value = serde_json::from_str(text)?;
    let records = if value.is_array() {
        serde_json::from_value(value)?
    } else {
        vec![serde_json::from_value(value)?]
    };
    Ok(records)
}

pub fn write_diagnostics_json(
    records: &[DiagnosticsRecord],
    path: impl AsRef<Path>,
) -> Result<(), FormatError> {
    fs::write(path.as_ref(), encode_diagnostics_json(records)?)?;
    Ok(())
}

pub fn read_diagnostics_json(
    path: impl AsRef<Path>,
) -> Result<Vec<DiagnosticsRecord>, FormatError> {
    decode_diagnostics_json(&fs::read_to_string(path.as_ref())?)
}
