//! Build a synthetic scene suite, correlate diagnostics with scene metrics,
//! and compute the geometry/texture influence gap.
//!
//! cargo run --example scene_correlation

use std::collections::BTreeMap;

use specprobe::stats::{correlate_scenes, influence_gap, CorrelateOptions, CorrelationMethod};
use specprobe::synth::{make_scene_suite, SceneRelation, SuiteSpec};
use specprobe::{DiagnosticsConfig, DiagnosticsRecord};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let cfg = DiagnosticsConfig::default();

    let suite = make_scene_suite(
        &SuiteSpec::new(12, SceneRelation::SscDrivesPsnr, 0.3, 5),
        &cfg,
    )?;
    println!("{}", suite.construction);
    let diag: BTreeMap<String, DiagnosticsRecord> = suite
        .scenes
        .iter()
        .map(|s| (s.scene_id.clone(), s.diagnostics.clone()))
        .collect();
    let opts = CorrelateOptions {
        align_goodness: true,
        ..CorrelateOptions::default()
    };
    let report = correlate_scenes(&diag, &suite.metrics, &opts)?;
    print!("{:<10}", "");
    for c in &report.cols {
        print!("{:>8}", c.name());
    }
    println!();
    for (d, row) in report.rows.iter().zip(&report.rho) {
        print!("{:<10}", d.name());
        for v in row {
            match v {
                Some(r) => print!("{r:>8.3}"),
                None => print!("{:>8}", "-"),
            }
        }
        println!();
    }

    let suite = make_scene_suite(
        &SuiteSpec::new(30, SceneRelation::AdcDrivesRpe, 0.5, 5),
        &cfg,
    )?;
    let diag: BTreeMap<String, DiagnosticsRecord> = suite
        .scenes
        .iter()
        .map(|s| (s.scene_id.clone(), s.diagnostics.clone()))
        .collect();
    let gap = influence_gap(&diag, &suite.metrics, CorrelationMethod::Spearman)?;
    println!(
        "\ninfluence gap over {} scenes (positive leans geometry)",
        gap.scenes.len()
    );
    for e in &gap.entries {
        println!(
            "{:<10} rho_g {:>7.3}  rho_t {:>7.3}  gap {:>7.3}",
            e.diagnostic.name(),
            e.rho_g.unwrap_or(f64::NAN),
            e.rho_t.unwrap_or(f64::NAN),
            e.gap.unwrap_or(f64::NAN)
        );
    }
    Ok(())
}
