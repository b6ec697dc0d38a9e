//! Correlation machinery for relating per-scene diagnostics to reconstruction quality.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::records::{
    Diagnostic, DiagnosticsRecord, ProbeMode, QualityMetric, SceneRecord, RECORD_FIELDS,
};

#[derive(Debug, Error, Clone, PartialEq)]
pub enum StatsError {
    #[error("series lengths differ ({0} vs {1})")]
    LengthMismatch(usize, usize),
    #[error("undefined correlation: {0}")]
    UndefinedCorrelation(String),
    #[error("non-finite value in series")]
    NonFinite,
    #[error("{name} must be >= 0 (got {value})")]
    NegativeInput { name: &'static str, value: f64 },
    #[error("no records to aggregate")]
    EmptyInput,
    #[error("records mix config fingerprints {0} and {1}")]
    MixedConfig(String, String),
    #[error("need at least 3 scenes shared by diagnostics and metrics, found {0}")]
    TooFewScenes(usize),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum CorrelationMethod {
    Pearson,
    Spearman,
}

impl fmt::Display for CorrelationMethod {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.pad(match self {
            CorrelationMethod::Pearson => "pearson",
            CorrelationMethod::Spearman => "spearman",
        })
    }
}

impl FromStr for CorrelationMethod {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s.to_ascii_lowercase().as_str() {
            "pearson" => Ok(CorrelationMethod::Pearson),
            "spearman" => Ok(CorrelationMethod::Spearman),
            _ => Err(format!("unknown correlation method `{s}`")),
        }
    }
}

fn check_series(x: &[f64], y: &[f64]) -> Result<(), StatsError> {
    if x.len() != y.len() {
        return Err(StatsError::LengthMismatch(x.len(), y.len()));
    }
    if x.len() < 3 {
        return Err(StatsError::UndefinedCorrelation(format!(
            "need at least 3 samples, got {}",
            x.len()
        )));
    }
    if x.iter().chain(y).any(|v| !v.is_finite()) {
        return Err(StatsError::NonFinite);
    }
    Ok(())
}

/// Sample Pearson correlation coefficient.
pub fn pearson(x: &[f64], y: &[f64]) -> Result<f64, StatsError> {
    check_series(x, y)?;
    // an exactly constant series can pick up rounding noise in its mean
    if x.iter().all(|&v| v == x[0]) || y.iter().all(|&v| v == y[0]) {
        return Err(StatsError::UndefinedCorrelation("zero variance".into()));
    }
    let n = x.len() as f64;
    let mx = x.iter().sum::<f64>() / n;
    let my = y.iter().sum::<f64>() / n;
    let (mut sxx, mut syy, mut sxy) = (0.0, 0.0, 0.0);
    for (&a, &b) in x.iter().zip(y) {
        let (da, db) = (a - mx, b - my);
        sxx += da * da;
        syy += db * db;
        sxy += da * db;
    }
    if sxx == 0.0 || syy == 0.0 {
        return Err(StatsError::UndefinedCorrelation("zero variance".into()));
    }
    Ok((sxy / (sxx * syy).sqrt()).clamp(-1.0, 1.0))
}

/// 1-based ranks; tied values share the average of the ranks they span.
pub fn ranks(x: &[f64]) -> Vec<f64> {
    let mut order: Vec<usize> = (0..x.len()).collect();
    order.sort_by(|&a, &b| x[a].total_cmp(&x[b]));
    let mut out = vec![0.0; x.len()];
    let mut i = 0;
    while i < order.len() {
        let mut j = i + 1;
        while j < order.len() && x[order[j]] == x[order[i]] {
            j += 1;
        }
        // positions i..j hold ranks i+1..=j
        let avg = (i + 1 + j) as f64 / 2.0;
        for &k in &order[i..j] {
            out[k] = avg;
        }
        i = j;
    }
    out
}

/// Spearman rank correlation: Pearson on average ranks.
pub fn spearman(x: &[f64], y: &[f64]) -> Result<f64, StatsError> {
    check_series(x, y)?;
    pearson(&ranks(x), &ranks(y))
        .map_err(|_| StatsError::UndefinedCorrelation("all values tied".into()))
}

pub fn correlate(method: CorrelationMethod, x: &[f64], y: &[f64]) -> Result<f64, StatsError> {
    match method {
        CorrelationMethod::Pearson => pearson(x, y),
        CorrelationMethod::Spearman => spearman(x, y),
    }
}

/// Geometry goodness: `-rpe_mean` (higher is better).
pub fn ag_score(rpe_mean: f64) -> Result<f64, StatsError> {
    if rpe_mean.is_nan() || rpe_mean < 0.0 {
        return Err(StatsError::NegativeInput {
            name: "rpe_mean",
            value: rpe_mean,
        });
    }
    Ok(-rpe_mean)
}

/// Texture goodness: `-lpips` (higher is better).
pub fn at_score(lpips: f64) -> Result<f64, StatsError> {
    if lpips.is_nan() || lpips < 0.0 {
        return Err(StatsError::NegativeInput {
            name: "lpips",
            value: lpips,
        });
    }
    Ok(-lpips)
}

/// Scene-level mean of per-view diagnostics.
#[derive(Debug, Clone, PartialEq)]
pub struct SceneDiagnostics {
    pub record: DiagnosticsRecord,
    pub views: usize,
    /// Number of views contributing to each field, keyed by field name.
    pub counts: BTreeMap<&'static str, usize>,
}

/// Averages each metric over the views where it is defined.
///
/// `delta_mcs` is averaged per view like every other metric, so the result
/// need not equal `|mean(mcs_hr) - mean(mcs_lr)|`.
pub fn aggregate_views(views: &[DiagnosticsRecord]) -> Result<SceneDiagnostics, StatsError> {
    let first = views.first().ok_or(StatsError::EmptyInput)?;
    if let Some(other) = views.iter().find(|r| r.config != first.config) {
        return Err(StatsError::MixedConfig(
            first.config.clone(),
            other.config.clone(),
        ));
    }
    let join_ids = |get: fn(&DiagnosticsRecord) -> &str| {
        let mut ids: Vec<&str> = Vec::new();
        for r in views {
            if !ids.contains(&get(r)) {
                ids.push(get(r));
            }
        }
        ids.join(",")
    };
    let mut record = DiagnosticsRecord::empty(
        join_ids(|r| &r.lr_id),
        join_ids(|r| &r.hr_id),
        first.config.clone(),
    );
    let mut counts = BTreeMap::new();
    for (name, get, set) in RECORD_FIELDS {
        let defined: Vec<f64> = views.iter().filter_map(get).collect();
        counts.insert(name, defined.len());
        if defined.is_empty() {
            let why = views
                .iter()
                .find_map(|r| r.reasons.get(name))
                .map(|r| format!(": {r}"))
                .unwrap_or_default();
            record.reasons.insert(
                name.to_string(),
                format!("undefined in all {} views{why}", views.len()),
            );
        } else {
            *set(&mut record) = Some(defined.iter().sum::<f64>() / defined.len() as f64);
        }
    }
    Ok(SceneDiagnostics {
        record,
        views: views.len(),
        counts,
    })
}

/// Default probe mode for a metric table: `All` if present, else `Geometry`, else `Texture`.
pub fn default_probe_mode(metrics: &[SceneRecord]) -> Option<ProbeMode> {
    [ProbeMode::All, ProbeMode::Geometry, ProbeMode::Texture]
        .into_iter()
        .find(|m| metrics.iter().any(|r| r.probe_mode == *m))
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CorrelateOptions {
    pub method: CorrelationMethod,
    /// Negate lower-is-better series so that positive rho reads as
    /// "better spectra, better reconstruction".
    pub align_goodness: bool,
    /// Which probing mode's metrics to correlate; `None` picks [`default_probe_mode`].
    pub probe_mode: Option<ProbeMode>,
}

impl Default for CorrelateOptions {
    fn default() -> Self {
        Self {
            method: CorrelationMethod::Spearman,
            align_goodness: false,
            probe_mode: None,
        }
    }
}

/// Cross-scene correlation matrix, rows = diagnostics, cols = quality metrics.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CorrelationReport {
    pub method: CorrelationMethod,
    pub probe_mode: ProbeMode,
    pub goodness_aligned: bool,
    pub rows: Vec<Diagnostic>,
    pub cols: Vec<QualityMetric>,
    /// `rho[i][j]`; `None` where the correlation is undefined.
    pub rho: Vec<Vec<Option<f64>>>,
    /// Scenes contributing to each cell.
    pub n: Vec<Vec<usize>>,
    pub scenes: Vec<String>,
    /// Scenes dropped by the join, with the side they were missing from.
    pub excluded: Vec<String>,
}

impl CorrelationReport {
    pub fn cell(&self, d: Diagnostic, m: QualityMetric) -> Option<f64> {
        let i = self.rows.iter().position(|r| *r == d)?;
        let j = self.cols.iter().position(|c| *c == m)?;
        self.rho[i][j]
    }
}

fn join_exclusions<'a>(
    diag: impl Iterator<Item = &'a String>,
    metric_scenes: &BTreeSet<&'a str>,
) -> (Vec<String>, Vec<String>) {
    let diag: BTreeSet<&str> = diag.map(String::as_str).collect();
    let joined = diag
        .intersection(metric_scenes)
        .map(|s| s.to_string())
        .collect();
    let mut excluded: Vec<String> = diag
        .difference(metric_scenes)
        .map(|s| format!("{s}: no scene metrics"))
        .collect();
    excluded.extend(
        metric_scenes
            .difference(&diag)
            .map(|s| format!("{s}: no diagnostics")),
    );
    (joined, excluded)
}

/// Correlates every diagnostic with every quality metric across scenes.
pub fn correlate_scenes(
    diag: &BTreeMap<String, DiagnosticsRecord>,
    metrics: &[SceneRecord],
    opts: &CorrelateOptions,
) -> Result<CorrelationReport, StatsError> {
    let mode = opts
        .probe_mode
        .or_else(|| default_probe_mode(metrics))
        .ok_or(StatsError::TooFewScenes(0))?;
    let by_scene: BTreeMap<&str, &SceneRecord> = metrics
        .iter()
        .filter(|r| r.probe_mode == mode)
        .map(|r| (r.scene_id.as_str(), r))
        .collect();
    let metric_scenes: BTreeSet<&str> = by_scene.keys().copied().collect();
    let (scenes, excluded) = join_exclusions(diag.keys(), &metric_scenes);
    if scenes.len() < 3 {
        return Err(StatsError::TooFewScenes(scenes.len()));
    }

    let mut cols = vec![
        QualityMetric::Psnr,
        QualityMetric::Ssim,
        QualityMetric::Lpips,
    ];
    if scenes
        .iter()
        .any(|s| by_scene[s.as_str()].rpe_mean.is_some())
    {
        cols.push(QualityMetric::RpeMean);
    }
    let rows = Diagnostic::ALL.to_vec();
    let sign = |lower_is_better: bool| {
        if opts.align_goodness && lower_is_better {
            -1.0
        } else {
            1.0
        }
    };

    let mut rho = Vec::with_capacity(rows.len());
    let mut counts = Vec::with_capacity(rows.len());
    for &d in &rows {
        let (mut rho_row, mut n_row) = (Vec::new(), Vec::new());
        for &m in &cols {
            let (xs, ys): (Vec<f64>, Vec<f64>) = scenes
                .iter()
                .filter_map(|s| {
                    let x = diag[s].get(d)?;
                    let y = by_scene[s.as_str()].metric(m)?;
                    Some((sign(d.lower_is_better()) * x, sign(m.lower_is_better()) * y))
                })
                .unzip();
            n_row.push(xs.len());
            rho_row.push(correlate(opts.method, &xs, &ys).ok());
        }
        rho.push(rho_row);
        counts.push(n_row);
    }

    Ok(CorrelationReport {
        method: opts.method,
        probe_mode: mode,
        goodness_aligned: opts.align_goodness,
        rows,
        cols,
        rho,
        n: counts,
        scenes,
        excluded,
    })
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GapEntry {
    pub diagnostic: Diagnostic,
    pub rho_g: Option<f64>,
    pub rho_t: Option<f64>,
    /// `|rho_g| - |rho_t|`; positive means stronger coupling with geometry.
    pub gap: Option<f64>,
    pub n: usize,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GapReport {
    pub method: CorrelationMethod,
    pub entries: Vec<GapEntry>,
    pub scenes: Vec<String>,
}

impl GapReport {
    pub fn entry(&self, d: Diagnostic) -> Option<&GapEntry> {
        self.entries.iter().find(|e| e.diagnostic == d)
    }

    pub fn gap(&self, d: Diagnostic) -> Option<f64> {
        self.entry(d).and_then(|e| e.gap)
    }
}

/// Picks the first record (in mode preference order) that yields a value.
fn pick_metric(
    records: &[&SceneRecord],
    preference: [ProbeMode; 3],
    get: impl Fn(&SceneRecord) -> Option<f64>,
) -> Option<f64> {
    preference.into_iter().find_map(|mode| {
        records
            .iter()
            .find(|r| r.probe_mode == mode)
            .and_then(|r| get(r))
    })
}

/// Influence gap from explicit per-scene series.
///
/// `series[d]` holds the diagnostic values aligned with `ag` / `at`.
pub fn gap_from_series(
    series: &BTreeMap<Diagnostic, Vec<Option<f64>>>,
    ag: &[f64],
    at: &[f64],
    method: CorrelationMethod,
) -> Vec<GapEntry> {
    series
        .iter()
        .map(|(&d, values)| {
            let (mut xs, mut gs, mut ts) = (Vec::new(), Vec::new(), Vec::new());
            for ((v, &g), &t) in values.iter().zip(ag).zip(at) {
                if let Some(v) = v {
                    xs.push(*v);
                    gs.push(g);
                    ts.push(t);
                }
            }
            let rho_g = correlate(method, &xs, &gs).ok();
            let rho_t = correlate(method, &xs, &ts).ok();
            let gap = match (rho_g, rho_t) {
                (Some(g), Some(t)) => Some(g.abs() - t.abs()),
                _ => None,
            };
            GapEntry {
                diagnostic: d,
                rho_g,
                rho_t,
                gap,
                n: xs.len(),
            }
        })
        .collect()
}

/// Geometry-vs-texture influence gap per diagnostic.
///
/// AG comes from `rpe_mean` (Geometry mode preferred, then All, then Texture);
/// AT comes from `lpips` (Texture mode preferred, then All, then Geometry).
pub fn influence_gap(
    diag: &BTreeMap<String, DiagnosticsRecord>,
    metrics: &[SceneRecord],
    method: CorrelationMethod,
) -> Result<GapReport, StatsError> {
    let mut per_scene: BTreeMap<&str, Vec<&SceneRecord>> = BTreeMap::new();
    for r in metrics {
        per_scene.entry(r.scene_id.as_str()).or_default().push(r);
    }
    let mut scenes = Vec::new();
    let (mut ag, mut at) = (Vec::new(), Vec::new());
    for (scene, records) in &per_scene {
        if !diag.contains_key(*scene) {
            continue;
        }
        let rpe = pick_metric(
            records,
            [ProbeMode::Geometry, ProbeMode::All, ProbeMode::Texture],
            |r| r.rpe_mean,
        );
        let lpips = pick_metric(
            records,
            [ProbeMode::Texture, ProbeMode::All, ProbeMode::Geometry],
            |r| Some(r.lpips),
        );
        if let (Some(rpe), Some(lpips)) = (rpe, lpips) {
            ag.push(ag_score(rpe)?);
            at.push(at_score(lpips)?);
            scenes.push(scene.to_string());
        }
    }
    if scenes.len() < 3 {
        return Err(StatsError::TooFewScenes(scenes.len()));
    }
    let series: BTreeMap<Diagnostic, Vec<Option<f64>>> = Diagnostic::ALL
        .into_iter()
        .map(|d| (d, scenes.iter().map(|s| diag[s].get(d)).collect()))
        .collect();
    Ok(GapReport {
        method,
        entries: gap_from_series(&series, &ag, &at, method),
        scenes,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn record(ssc: Option<f64>, hfss: Option<f64>) -> DiagnosticsRecord {
        let mut r = DiagnosticsRecord::empty("lr", "hr", "cfg");
        r.ssc = ssc;
        r.hfss = hfss;
        r
    }

    #[test]
    fn pearson_examples() {
        let x = [1.0, 2.0, 3.0, 4.0];
        let y: Vec<f64> = x.iter().map(|v| 2.0 * v + 3.0).collect();
        assert!((pearson(&x, &y).unwrap() - 1.0).abs() < 1e-12);
        let neg: Vec<f64> = x.iter().map(|v| -v).collect();
        assert!((pearson(&x, &neg).unwrap() + 1.0).abs() < 1e-12);
        // covariance formula by hand: cov = 4/4, var_x = var_y = 5/4 -> 0.8
        assert!((pearson(&x, &[1.0, 3.0, 2.0, 4.0]).unwrap() - 0.8).abs() < 1e-12);
        assert_eq!(pearson(&x, &x).unwrap(), 1.0);
    }

    #[test]
    fn pearson_errors() {
        assert!(matches!(
            pearson(&[1.0, 2.0], &[1.0, 2.0]),
            Err(StatsError::UndefinedCorrelation(_))
        ));
        assert!(matches!(
            pearson(&[1.0, 1.0, 1.0], &[1.0, 2.0, 3.0]),
            Err(StatsError::UndefinedCorrelation(_))
        ));
        assert!(matches!(
            pearson(&[1.0, 2.0, 3.0], &[1.0]),
            Err(StatsError::LengthMismatch(3, 1))
        ));
        assert!(matches!(
            pearson(&[1.0, f64::NAN, 3.0], &[1.0, 2.0, 3.0]),
            Err(StatsError::NonFinite)
        ));
    }

    #[test]
    fn ranks_average_ties() {
        assert_eq!(ranks(&[10.0, 30.0, 20.0, 20.0]), vec![1.0, 4.0, 2.5, 2.5]);
        assert_eq!(ranks(&[5.0, 5.0, 5.0]), vec![2.0, 2.0, 2.0]);
    }

    #[test]
    fn spearman_examples() {
        let x = [1.0, 2.0, 3.0, 4.0, 5.0];
        let y = [1.0, 4.0, 9.0, 16.0, 25.0];
        assert_eq!(spearman(&x, &y).unwrap(), 1.0);
        assert_eq!(
            spearman(&[1.0, 2.0, 2.0, 3.0], &[10.0, 20.0, 20.0, 30.0]).unwrap(),
            1.0
        );
        assert!(matches!(
            spearman(&[2.0, 2.0, 2.0], &[1.0, 2.0, 3.0]),
            Err(StatsError::UndefinedCorrelation(_))
        ));
    }

    #[test]
    fn goodness_scores() {
        assert_eq!(ag_score(0.0).unwrap(), 0.0);
        assert_eq!(ag_score(1.5).unwrap(), -1.5);
        assert_eq!(at_score(0.1343).unwrap(), -0.1343);
        assert!(ag_score(-0.1).is_err());
        assert!(at_score(-1e-9).is_err());
        assert!(at_score(0.1).unwrap() > at_score(0.2).unwrap());
        let rpe = [3.0, 0.5, 2.0, 7.0];
        let ag: Vec<f64> = rpe.iter().map(|&r| ag_score(r).unwrap()).collect();
        let reversed: Vec<f64> = ranks(&rpe).iter().map(|r| 5.0 - r).collect();
        assert_eq!(ranks(&ag), reversed);
    }

    #[test]
    fn aggregate_examples() {
        let single = record(Some(0.8), Some(0.1));
        let agg = aggregate_views(std::slice::from_ref(&single)).unwrap();
        assert_eq!(agg.record.ssc, Some(0.8));
        assert_eq!(agg.record.hfss, Some(0.1));

        let two = [record(Some(0.8), Some(0.3)), record(Some(0.6), None)];
        let agg = aggregate_views(&two).unwrap();
        assert!((agg.record.ssc.unwrap() - 0.7).abs() < 1e-15);
        assert_eq!(agg.record.hfss, Some(0.3));
        assert_eq!(agg.counts["hfss"], 1);
        assert_eq!(agg.counts["ssc"], 2);
        assert_eq!(agg.record.bwg, None);
        assert!(agg.record.reasons["bwg"].starts_with("undefined in all 2 views"));

        assert_eq!(aggregate_views(&[]), Err(StatsError::EmptyInput));
        let mut other = record(Some(0.1), None);
        other.config = "other".into();
        assert!(matches!(
            aggregate_views(&[single, other]),
            Err(StatsError::MixedConfig(..))
        ));
    }

    fn scene_table(
        values: &[(f64, f64)],
    ) -> (BTreeMap<String, DiagnosticsRecord>, Vec<SceneRecord>) {
        let mut diag = BTreeMap::new();
        let mut metrics = Vec::new();
        for (i, &(ssc, lpips)) in values.iter().enumerate() {
            let id = format!("scene{i:02}");
            let mut r = record(Some(ssc), Some(1.0 - ssc));
            r.adc = Some((i as f64 * 0.37).sin());
            diag.insert(id.clone(), r);
            metrics.push(SceneRecord {
                scene_id: id,
                probe_mode: ProbeMode::All,
                psnr: 10.0 * ssc + 2.0,
                ssim: 0.5,
                lpips,
                rpe_mean: None,
            });
        }
        (diag, metrics)
    }

    #[test]
    fn correlate_injected_relations() {
        let ssc: Vec<f64> = (0..10)
            .map(|i| 0.5 + 0.04 * i as f64 + 0.001 * ((i * 7) % 3) as f64)
            .collect();
        let (diag, metrics) = scene_table(&ssc.iter().map(|&s| (s, s)).collect::<Vec<_>>());
        for method in [CorrelationMethod::Spearman, CorrelationMethod::Pearson] {
            let opts = CorrelateOptions {
                method,
                ..Default::default()
            };
            let rep = correlate_scenes(&diag, &metrics, &opts).unwrap();
            assert!((rep.cell(Diagnostic::Ssc, QualityMetric::Psnr).unwrap() - 1.0).abs() < 1e-12);
            assert!((rep.cell(Diagnostic::Ssc, QualityMetric::Lpips).unwrap() - 1.0).abs() < 1e-12);
            // ssim constant -> undefined, never zero
            assert_eq!(rep.cell(Diagnostic::Ssc, QualityMetric::Ssim), None);
            // diagnostics absent in every scene are undefined too
            assert_eq!(rep.cell(Diagnostic::Csc, QualityMetric::Psnr), None);
            assert_eq!(rep.n[3][0], 0);
            assert_eq!(rep.cols.len(), 3);

            let aligned = CorrelateOptions {
                method,
                align_goodness: true,
                ..Default::default()
            };
            let rep = correlate_scenes(&diag, &metrics, &aligned).unwrap();
            assert!((rep.cell(Diagnostic::Ssc, QualityMetric::Lpips).unwrap() + 1.0).abs() < 1e-12);
            // hfss = 1 - ssc, negated by alignment -> tracks ssc
            assert!((rep.cell(Diagnostic::Hfss, QualityMetric::Psnr).unwrap() - 1.0).abs() < 1e-12);
        }
    }

    #[test]
    fn join_reports_exclusions() {
        let ssc: Vec<(f64, f64)> = (0..4).map(|i| (i as f64 * 0.1, 0.2)).collect();
        let (mut diag, mut metrics) = scene_table(&ssc);
        diag.insert("orphan".into(), record(Some(0.3), None));
        metrics.push(SceneRecord {
            scene_id: "lonely".into(),
            probe_mode: ProbeMode::All,
            psnr: 1.0,
            ssim: 0.5,
            lpips: 0.1,
            rpe_mean: None,
        });
        let rep = correlate_scenes(&diag, &metrics, &CorrelateOptions::default()).unwrap();
        assert_eq!(rep.scenes.len(), 4);
        assert_eq!(
            rep.excluded,
            vec!["orphan: no scene metrics", "lonely: no diagnostics"]
        );

        let (diag, metrics) = scene_table(&ssc[..2]);
        assert_eq!(
            correlate_scenes(&diag, &metrics, &CorrelateOptions::default()),
            Err(StatsError::TooFewScenes(2))
        );
    }

    #[test]
    fn gap_arithmetic() {
        let d = Diagnostic::Adc;
        let x = vec![Some(1.0), Some(2.0), Some(3.0), Some(4.0), Some(5.0)];
        let series = BTreeMap::from([(d, x)]);
        // rho_g = -1, rho_t = +1 -> gap 0
        let ag = [5.0, 4.0, 3.0, 2.0, 1.0];
        let at = [1.0, 2.0, 3.0, 4.0, 5.0];
        let e = &gap_from_series(&series, &ag, &at, CorrelationMethod::Pearson)[0];
        assert_eq!(e.gap, Some(0.0));
        // identical series -> gap 0
        let e = &gap_from_series(&series, &at, &at, CorrelationMethod::Spearman)[0];
        assert_eq!(e.gap, Some(0.0));
        // undefined rho_t propagates
        let flat = [1.0; 5];
        let e = &gap_from_series(&series, &ag, &flat, CorrelationMethod::Spearman)[0];
        assert_eq!((e.rho_t, e.gap), (None, None));
        assert_eq!(e.rho_g, Some(-1.0));
    }

    #[test]
    fn gap_from_hand_values() {
        let (g, t): (f64, f64) = (-0.9, 0.3);
        assert!(((g.abs() - t.abs()) - 0.6).abs() < 1e-12);
    }

    #[test]
    fn influence_gap_mode_preference() {
        let mut diag = BTreeMap::new();
        let mut metrics = Vec::new();
        for i in 0..6 {
            let id = format!("s{i}");
            let mut r = record(Some(i as f64), None);
            r.adc = Some(i as f64 * 0.1);
            diag.insert(id.clone(), r);
            metrics.push(SceneRecord {
                scene_id: id.clone(),
                probe_mode: ProbeMode::Geometry,
                psnr: 20.0,
                ssim: 0.5,
                lpips: 0.5 - 0.01 * i as f64,
                rpe_mean: Some(10.0 - i as f64),
            });
            metrics.push(SceneRecord {
                scene_id: id,
                probe_mode: ProbeMode::Texture,
                psnr: 20.0,
                ssim: 0.5,
                lpips: [0.3, 0.1, 0.4, 0.2, 0.5, 0.15][i],
                rpe_mean: None,
            });
        }
        let rep = influence_gap(&diag, &metrics, CorrelationMethod::Spearman).unwrap();
        let e = rep.entry(Diagnostic::Adc).unwrap();
        assert_eq!(e.rho_g, Some(1.0));
        // texture lpips (not the geometry-mode lpips) drives rho_t
        assert!(e.rho_t.unwrap().abs() < 1.0);
        assert!(e.gap.unwrap() > 0.0);
        assert_eq!(rep.gap(Diagnostic::Csc), None);
    }

    proptest! {
        #[test]
        fn spearman_monotone_invariance(
            x in proptest::collection::vec(-100.0f64..100.0, 3..20),
            y in proptest::collection::vec(-100.0f64..100.0, 20),
        ) {
            let y = &y[..x.len()];
            let base = spearman(&x, y);
            let tx: Vec<f64> = x.iter().map(|v| (v / 50.0).exp() * 3.0 + 1.0).collect();
            prop_assert_eq!(base.clone(), spearman(&tx, y));
            let ty: Vec<f64> = y.iter().map(|v| v * v * v).collect();
            prop_assert_eq!(base, spearman(&x, &ty));
        }

        #[test]
        fn pearson_affine_invariance(
            x in proptest::collection::vec(-10.0f64..10.0, 4..20),
            y in proptest::collection::vec(-10.0f64..10.0, 20),
            a in 0.1f64..10.0, b in -10.0f64..10.0,
        ) {
            let y = &y[..x.len()];
            if let Ok(r) = pearson(&x, y) {
                let ax: Vec<f64> = x.iter().map(|v| a * v + b).collect();
                let r2 = pearson(&ax, y).unwrap();
                prop_assert!((r - r2).abs() <= 1e-12, "{} vs {}", r, r2);
            }
        }

        #[test]
        fn alignment_preserves_magnitudes(seed in proptest::collection::vec(0.0f64..1.0, 24)) {
            let vals: Vec<(f64, f64)> = seed.chunks(2).map(|c| (c[0], c[1])).collect();
            let (mut diag, metrics) = scene_table(&vals);
            for (i, r) in diag.values_mut().enumerate() {
                r.bwg = Some(seed[(i * 5) % 24]);
            }
            let plain = correlate_scenes(&diag, &metrics, &CorrelateOptions::default()).unwrap();
            let aligned = correlate_scenes(
                &diag,
                &metrics,
                &CorrelateOptions { align_goodness: true, ..Default::default() },
            ).unwrap();
            for (a, b) in plain.rho.iter().flatten().zip(aligned.rho.iter().flatten()) {
                prop_assert_eq!(a.map(f64::abs), b.map(f64::abs));
            }
        }
    }
}
