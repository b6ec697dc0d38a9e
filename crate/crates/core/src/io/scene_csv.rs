//! Scene-metric tables: `scene,mode,psnr,ssim,lpips,rpe_mean`.

use std::collections::HashSet;
use std::fs::File;
use std::io::Read;
use std::path::Path;

use super::FormatError;
use crate::records::SceneRecord;

const REQUIRED: [&str; 5] = ["scene", "mode", "psnr", "ssim", "lpips"];
const OPTIONAL_RPE: &str = "rpe_mean";

/// Reads a scene-metric CSV. Row numbers in errors count data rows from 1.
pub fn load_scene_metrics(path: impl AsRef<Path>) -> Result<Vec<SceneRecord>, FormatError> {
    let mut text = String::new();
    File::open(path.as_ref())?.read_to_string(&mut text)?;
    parse_scene_metrics(&text)
}

pub fn parse_scene_metrics(text: &str) -> Result<Vec<SceneRecord>, FormatError> {
    let mut reader = csv::ReaderBuilder::new()
        .trim(csv::Trim::All)
        .from_reader(text.as_bytes());
    let headers = reader.headers()?.clone();
    let column = |name: &str| headers.iter().position(|h| h.eq_ignore_ascii_case(name));
    let mut idx = [0usize; 5];
    for (slot, name) in idx.iter_mut().zip(REQUIRED) {
        *slot = column(name).ok_or_else(|| FormatError::MissingColumn(name.to_string()))?;
    }
    let rpe_idx = column(OPTIONAL_RPE);

    let mut seen = HashSet::new();
    let mut out = Vec::new();
    for (i, row) in reader.records().enumerate() {
        let row_no = i + 1;
        let row = row?;
        let field = |k: usize| row.get(k).unwrap_or("");
        let number = |name: &str, k: usize| -> Result<f64, FormatError> {
            let raw = field(k);
            raw.parse::<f64>().map_err(|_| FormatError::Row {
                row: row_no,
                message: format!("cannot parse {name} value `{raw}`"),
            })
        };
        let scene_id = field(idx[0]).to_string();
        if scene_id.is_empty() {
            return Err(FormatError::Row {
                row: row_no,
                message: "empty scene id".into(),
            });
        }
        let probe_mode = field(idx[1]).parse().map_err(|message| FormatError::Row {
            row: row_no,
            message,
        })?;
        let rpe_mean = match rpe_idx.map(field) {
            None | Some("") => None,
            Some(_) => Some(number(OPTIONAL_RPE, rpe_idx.unwrap())?),
        };
        let record = SceneRecord {
            scene_id,
            probe_mode,
            psnr: number("psnr", idx[2])?,
            ssim: number("ssim", idx[3])?,
            lpips: number("lpips", idx[4])?,
            rpe_mean,
        };
        record.validate().map_err(|message| FormatError::Row {
            row: row_no,
            message,
        })?;
        if !seen.insert((record.scene_id.clone(), record.probe_mode)) {
            return Err(FormatError::DuplicateScene {
                scene: record.scene_id,
                mode: record.probe_mode.to_string(),
                row: row_no,
            });
        }
        out.push(record);
    }
    Ok(out)
}

/// Writes records with the canonical header; numbers use shortest round-trip formatting.
pub fn write_scene_metrics(
    records: &[SceneRecord],
    path: impl AsRef<Path>,
) -> Result<(), FormatError> {
    let mut w = csv::Writer::from_path(path.as_ref())?;
    w.write_record(["scene", "mode", "psnr", "ssim", "lpips", "rpe_mean"])?;
    for r in records {
        w.write_record([
            r.scene_id.clone(),
            r.probe_mode.letter().to_string(),
            r.psnr.to_string(),
            r.ssim.to_string(),
            r.lpips.to_string(),
            r.rpe_mean.map(|v| v.to_string()).unwrap_or_default(),
        ])?;
    }
    w.flush()?;
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::records::ProbeMode;

    const HEADER: &str = "scene,mode,psnr,ssim,lpips,rpe_mean\n";

    #[test]
    fn parses_row_without_rpe() {
        let recs = parse_scene_metrics(&format!("{HEADER}lego,G,24.36,0.8477,0.1343,\n")).unwrap();
        assert_eq!(
            recs,
            vec![SceneRecord {
                scene_id: "lego".into(),
                probe_mode: ProbeMode::Geometry,
                psnr: 24.36,
                ssim: 0.8477,
                lpips: 0.1343,
                rpe_mean: None,
            }]
        );
    }

    #[test]
    fn header_only_is_empty() {
        assert!(parse_scene_metrics(HEADER).unwrap().is_empty());
    }

    #[test]
    fn duplicate_pair_rejected() {
        let text = format!("{HEADER}lego,A,24,0.8,0.1,\nlego,A,25,0.8,0.1,\n");
        assert!(matches!(
            parse_scene_metrics(&text),
            Err(FormatError::DuplicateScene { row: 2, .. })
        ));
        // same scene under a different mode is fine
        let text = format!("{HEADER}lego,A,24,0.8,0.1,\nlego,G,25,0.8,0.1,2.5\n");
        assert_eq!(parse_scene_metrics(&text).unwrap().len(), 2);
    }

    #[test]
    fn bad_number_reports_row() {
        let text = format!("{HEADER}a,A,24,0.8,0.1,\nb,A,x24,0.8,0.1,\n");
        match parse_scene_metrics(&text) {
            Err(FormatError::Row { row, message }) => {
                assert_eq!(row, 2);
                assert!(message.contains("psnr"));
            }
            other => panic!("unexpected {other:?}"),
        }
    }

    #[test]
    fn missing_column() {
        assert!(matches!(
            parse_scene_metrics("scene,mode,psnr,ssim\n"),
            Err(FormatError::MissingColumn(c)) if c == "lpips"
        ));
    }

    #[test]
    fn out_of_range_rejected() {
        let text = format!("{HEADER}a,A,24,1.5,0.1,\n");
        assert!(matches!(
            parse_scene_metrics(&text),
            Err(FormatError::Row { row: 1, .. })
        ));
    }

    #[test]
    fn write_then_load() {
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("m.csv");
        let recs = vec![
            SceneRecord {
                scene_id: "s0".into(),
                probe_mode: ProbeMode::Geometry,
                psnr: 21.123456789012345,
                ssim: 0.7,
                lpips: 0.2,
                rpe_mean: Some(3.25),
            },
            SceneRecord {
                scene_id: "s0".into(),
                probe_mode: ProbeMode::Texture,
                psnr: 19.0,
                ssim: 0.6,
                lpips: 0.3,
                rpe_mean: None,
            },
        ];
        write_scene_metrics(&recs, &path).unwrap();
        assert_eq!(load_scene_metrics(&path).unwrap(), recs);
    }
}
