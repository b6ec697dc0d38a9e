//! Command-line front end: `synth`, `upsample`, `diagnose`, `correlate`, `report`.
//!
//! Exit codes: 0 success, 2 usage or validation failure, 3 data or contract
//! violation (including unreadable inputs). Every command writes a
//! `*.manifest.json` next to its outputs.

use std::collections::BTreeMap;
use std::ffi::OsString;
use std::fs;
use std::path::{Path, PathBuf};
use std::time::{SystemTime, UNIX_EPOCH};

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::{Deserialize, Serialize};
use serde_json::{json, Value};

use crate::config::{DcPolicy, DiagnosticsConfig, FreqRange};
use crate::diagnostics::{diagnose_pair, SpectralError};
use crate::io::{
    decode_diagnostics_json, load_scene_metrics, read_fmap, write_fmap, write_scene_metrics,
    FormatError,
};
use crate::records::{DiagnosticsRecord, ProbeMode};
use crate::stats::{
    aggregate_views, correlate_scenes, influence_gap, CorrelateOptions, CorrelationMethod,
    CorrelationReport, GapReport, StatsError,
};
use crate::synth::{generate, make_scene_suite, SceneRelation, SuiteSpec, SynthError, SynthSpec};
use crate::upsample::{upsample, UpsampleError, UpsampleKind, UpsampleMethod};

const TOOL_VERSION: &str = env!("CARGO_PKG_VERSION");

#[derive(Debug)]
enum CliError {
    Usage(String),
    Data(String),
}

impl CliError {
    fn code(&self) -> i32 {
        match self {
            CliError::Usage(_) => 2,
            CliError::Data(_) => 3,
        }
    }

    fn message(&self) -> &str {
        match self {
            CliError::Usage(m) | CliError::Data(m) => m,
        }
    }
}

type CliResult<T> = Result<T, CliError>;

fn data_err(context: impl std::fmt::Display, e: impl std::fmt::Display) -> CliError {
    CliError::Data(format!("{context}: {e}"))
}

#[derive(Debug, Parser)]
#[command(
    name = "specprobe",
    version,
    about = "Spectral diagnostics for feature-map upsampling"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Generate a synthetic feature map, or a whole scene suite with --suite.
    Synth(SynthArgs),
    /// Resample a feature map to a target grid.
    Upsample(UpsampleArgs),
    /// Compute the six spectral diagnostics for an LR/HR pair.
    Diagnose(DiagnoseArgs),
    /// Correlate per-scene diagnostics with scene quality metrics.
    Correlate(CorrelateArgs),
    /// Flatten a correlation report into a long-format heatmap CSV.
    Report(ReportArgs),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Serialize)]
#[serde(rename_all = "lowercase")]
enum KindArg {
    Powerlaw,
    Grating,
    Whitenoise,
    Constant,
}

#[derive(Debug, Args, Serialize)]
struct SynthArgs {
    #[arg(long, value_enum, required_unless_present = "suite")]
    kind: Option<KindArg>,
    /// Build a scene suite instead of a single map; --out is then a directory.
    #[arg(long, conflicts_with = "kind")]
    suite: Option<SceneRelation>,
    #[arg(long, default_value_t = 16)]
    size: usize,
    #[arg(long, default_value_t = 1)]
    channels: usize,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    #[arg(long)]
    out: PathBuf,
    #[arg(long)]
    beta: Option<f64>,
    #[arg(long)]
    angle_deg: Option<f64>,
    #[arg(long)]
    freq: Option<f64>,
    #[arg(long)]
    value: Option<f32>,
    /// Number of scenes (suite mode).
    #[arg(long, default_value_t = 10)]
    scenes: usize,
    /// Metric noise relative to the driving diagnostic's spread (suite mode).
    #[arg(long, default_value_t = 0.0)]
    noise: f64,
    /// HR edge length (suite mode).
    #[arg(long, default_value_t = 64)]
    hr_size: usize,
}

#[derive(Debug, Args, Serialize)]
struct UpsampleArgs {
    #[arg(long = "in")]
    input: PathBuf,
    #[arg(long)]
    out: PathBuf,
    #[arg(long)]
    method: String,
    /// Target grid as HxW, e.g. 256x256.
    #[arg(long)]
    target: String,
    #[arg(long)]
    lanczos_taps: Option<u32>,
    #[arg(long, allow_hyphen_values = true)]
    bicubic_a: Option<f64>,
}

#[derive(Debug, Args, Serialize)]
struct ConfigArgs {
    #[arg(long)]
    radial_bins: Option<usize>,
    #[arg(long)]
    bands: Option<usize>,
    #[arg(long)]
    hf_range: Option<String>,
    #[arg(long)]
    mid_range: Option<String>,
    #[arg(long)]
    angular_bins: Option<usize>,
    #[arg(long)]
    epsilon: Option<f64>,
    #[arg(long)]
    include_dc: bool,
}

impl ConfigArgs {
    fn resolve(&self) -> CliResult<DiagnosticsConfig> {
        let mut cfg = DiagnosticsConfig::default();
        let range = |flag: &str, s: &str| {
            s.parse::<FreqRange>()
                .map_err(|e| CliError::Usage(format!("--{flag}: {e}")))
        };
        if let Some(n) = self.radial_bins {
            cfg.radial_bins = n;
        }
        if let Some(n) = self.bands {
            cfg.bands = n;
        }
        if let Some(s) = &self.hf_range {
            cfg.hf_range = range("hf-range", s)?;
        }
        if let Some(s) = &self.mid_range {
            cfg.mid_range = range("mid-range", s)?;
        }
        if let Some(n) = self.angular_bins {
            cfg.angular_bins = n;
        }
        if let Some(e) = self.epsilon {
            cfg.log_epsilon = e;
        }
        if self.include_dc {
            cfg.dc_policy = DcPolicy::Include;
        }
        cfg.validate().map_err(CliError::Usage)?;
        Ok(cfg)
    }
}

#[derive(Debug, Args, Serialize)]
struct DiagnoseArgs {
    #[arg(long)]
    lr: PathBuf,
    #[arg(long)]
    hr: PathBuf,
    #[arg(long)]
    out: PathBuf,
    #[command(flatten)]
    config: ConfigArgs,
}

#[derive(Debug, Args, Serialize)]
struct CorrelateArgs {
    /// Directory of SCENE__VIEW.json files, or a single such file.
    #[arg(long)]
    diagnostics: PathBuf,
    #[arg(long)]
    metrics: PathBuf,
    #[arg(long, default_value = "spearman")]
    method: CorrelationMethod,
    #[arg(long)]
    align_goodness: bool,
    /// Probe mode whose metrics are correlated (default: A, else G, else T).
    #[arg(long)]
    mode: Option<ProbeMode>,
    /// Output prefix; writes PREFIX.corr.csv, PREFIX.gap.csv, PREFIX.report.json.
    #[arg(long)]
    out: PathBuf,
}

#[derive(Debug, Args, Serialize)]
struct ReportArgs {
    #[arg(long)]
    report: PathBuf,
    #[arg(long)]
    out: PathBuf,
}

/// Provenance written beside every output.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RunManifest {
    pub command: String,
    pub tool_version: String,
    /// Seconds since the Unix epoch; honors `SOURCE_DATE_EPOCH`.
    pub timestamp: u64,
    pub config: Option<DiagnosticsConfig>,
    pub config_fingerprint: Option<String>,
    /// Every flag as parsed, including defaults.
    pub args: Value,
    pub inputs: Vec<PathBuf>,
    pub outputs: Vec<PathBuf>,
}

fn timestamp() -> u64 {
    std::env::var("SOURCE_DATE_EPOCH")
        .ok()
        .and_then(|s| s.trim().parse().ok())
        .unwrap_or_else(|| {
            SystemTime::now()
                .duration_since(UNIX_EPOCH)
                .map(|d| d.as_secs())
                .unwrap_or(0)
        })
}

/// `dir/name.ext` -> `dir/name.manifest.json`.
pub fn manifest_path(output: &Path) -> PathBuf {
    let stem = output
        .file_stem()
        .map(|s| s.to_string_lossy().into_owned())
        .unwrap_or_default();
    output.with_file_name(format!("{stem}.manifest.json"))
}

fn write_text(path: &Path, text: &str) -> CliResult<()> {
    if let Some(dir) = path.parent().filter(|d| !d.as_os_str().is_empty()) {
        fs::create_dir_all(dir).map_err(|e| data_err(dir.display(), e))?;
    }
    fs::write(path, text).map_err(|e| data_err(path.display(), e))
}

fn write_json<T: Serialize>(path: &Path, value: &T) -> CliResult<()> {
    let text = serde_json::to_string_pretty(value).map_err(|e| data_err(path.display(), e))?;
    write_text(path, &(text + "\n"))
}

fn manifest(
    command: &str,
    args: &impl Serialize,
    config: Option<&DiagnosticsConfig>,
    inputs: &[&Path],
    outputs: &[&Path],
) -> RunManifest {
    RunManifest {
        command: command.to_string(),
        tool_version: TOOL_VERSION.to_string(),
        timestamp: timestamp(),
        config: config.cloned(),
        config_fingerprint: config.map(DiagnosticsConfig::fingerprint),
        args: serde_json::to_value(args).unwrap_or(Value::Null),
        inputs: inputs.iter().map(|p| p.to_path_buf()).collect(),
        outputs: outputs.iter().map(|p| p.to_path_buf()).collect(),
    }
}

fn save_map(map: &crate::FeatureMap, path: &Path) -> CliResult<()> {
    if let Some(dir) = path.parent().filter(|d| !d.as_os_str().is_empty()) {
        fs::create_dir_all(dir).map_err(|e| data_err(dir.display(), e))?;
    }
    write_fmap(map, path).map_err(|e| data_err(path.display(), e))
}

fn load_map(path: &Path) -> CliResult<crate::FeatureMap> {
    read_fmap(path).map_err(|e| data_err(path.display(), e))
}

fn synth_usage(e: SynthError) -> CliError {
    match e {
        SynthError::InvalidSpec(m) => CliError::Usage(m),
        other => CliError::Data(other.to_string()),
    }
}

fn require<T: Copy>(value: Option<T>, flag: &str, kind: &str) -> CliResult<T> {
    value.ok_or_else(|| CliError::Usage(format!("--{flag} is required for --kind {kind}")))
}

fn cmd_synth(args: &SynthArgs) -> CliResult<()> {
    if let Some(relation) = args.suite {
        return cmd_synth_suite(args, relation);
    }
    let kind = args.kind.expect("clap enforces --kind without --suite");
    let spec = match kind {
        KindArg::Powerlaw => {
            let beta = require(args.beta, "beta", "powerlaw")?;
            if !(beta >= 0.0 && beta.is_finite()) {
                return Err(CliError::Usage(format!("--beta must be >= 0 (got {beta})")));
            }
            SynthSpec::power_law(beta, args.size, args.channels, args.seed)
        }
        KindArg::Grating => {
            let deg = require(args.angle_deg, "angle-deg", "grating")?;
            let freq = require(args.freq, "freq", "grating")?;
            if !deg.is_finite() {
                return Err(CliError::Usage("--angle-deg must be finite".into()));
            }
            if !(freq > 0.0 && freq < 0.5) {
                return Err(CliError::Usage(format!(
                    "--freq must lie in (0, 0.5) (got {freq})"
                )));
            }
            SynthSpec::grating(deg.to_radians(), freq, args.size, args.channels, args.seed)
        }
        KindArg::Whitenoise => SynthSpec::white_noise(args.size, args.channels, args.seed),
        KindArg::Constant => {
            let value = require(args.value, "value", "constant")?;
            SynthSpec::constant(value, args.size, args.channels)
        }
    };
    if args.size < 4 {
        return Err(CliError::Usage(format!(
            "--size must be >= 4 (got {})",
            args.size
        )));
    }
    if args.channels < 1 {
        return Err(CliError::Usage("--channels must be >= 1".into()));
    }
    let map = generate(&spec).map_err(synth_usage)?;
    save_map(&map, &args.out)?;
    let m = manifest("synth", args, None, &[], &[&args.out]);
    write_json(&manifest_path(&args.out), &m)
}

fn cmd_synth_suite(args: &SynthArgs, relation: SceneRelation) -> CliResult<()> {
    let cfg = DiagnosticsConfig::default();
    let spec = SuiteSpec {
        lr_size: args.size,
        hr_size: args.hr_size,
        channels: args.channels.max(1),
        ..SuiteSpec::new(args.scenes, relation, args.noise, args.seed)
    };
    let suite = make_scene_suite(&spec, &cfg).map_err(synth_usage)?;
    let dir = &args.out;
    let mut outputs = Vec::new();
    for scene in &suite.scenes {
        let lr = dir.join("fmap").join(format!("{}_lr.fmap", scene.scene_id));
        let hr = dir.join("fmap").join(format!("{}_hr.fmap", scene.scene_id));
        save_map(&scene.lr, &lr)?;
        save_map(&scene.hr, &hr)?;
        let diag = dir
            .join("diagnostics")
            .join(format!("{}__v0.json", scene.scene_id));
        write_json(&diag, &scene.diagnostics)?;
        outputs.extend([lr, hr, diag]);
    }
    let metrics = dir.join("metrics.csv");
    if let Some(parent) = metrics.parent() {
        fs::create_dir_all(parent).map_err(|e| data_err(parent.display(), e))?;
    }
    write_scene_metrics(&suite.metrics, &metrics).map_err(|e| data_err(metrics.display(), e))?;
    let construction = dir.join("construction.json");
    let methods: BTreeMap<&str, String> = suite
        .scenes
        .iter()
        .map(|s| (s.scene_id.as_str(), s.method.kind.to_string()))
        .collect();
    write_json(
        &construction,
        &json!({ "suite": spec, "construction": suite.construction, "methods": methods }),
    )?;
    outputs.extend([metrics, construction]);
    let out_refs: Vec<&Path> = outputs.iter().map(PathBuf::as_path).collect();
    let m = manifest("synth", args, Some(&cfg), &[], &out_refs);
    write_json(&dir.join("manifest.json"), &m)
}

fn parse_target(s: &str) -> CliResult<(usize, usize)> {
    let bad = || CliError::Usage(format!("--target: expected HxW such as 256x256, got `{s}`"));
    let (h, w) = s
        .to_ascii_lowercase()
        .split_once('x')
        .map(|(h, w)| (h.to_string(), w.to_string()))
        .ok_or_else(bad)?;
    let h = h.trim().parse::<usize>().map_err(|_| bad())?;
    let w = w.trim().parse::<usize>().map_err(|_| bad())?;
    Ok((h, w))
}

fn cmd_upsample(args: &UpsampleArgs) -> CliResult<()> {
    let kind: UpsampleKind = args
        .method
        .parse()
        .map_err(|e: UpsampleError| CliError::Usage(format!("--method: {e}")))?;
    let (th, tw) = parse_target(&args.target)?;
    let mut method = UpsampleMethod::new(kind);
    if let Some(t) = args.lanczos_taps {
        method.lanczos_taps = t;
    }
    if let Some(a) = args.bicubic_a {
        method.bicubic_a = a;
    }
    method
        .validate()
        .map_err(|e| CliError::Usage(e.to_string()))?;
    let map = load_map(&args.input)?;
    let out = upsample(&map, &method, th, tw).map_err(|e| match e {
        UpsampleError::TargetSmaller { .. } => CliError::Data(e.to_string()),
        other => CliError::Usage(other.to_string()),
    })?;
    save_map(&out, &args.out)?;
    let mut m = manifest("upsample", args, None, &[&args.input], &[&args.out]);
    m.args["resolved_method"] = serde_json::to_value(method).unwrap_or(Value::Null);
    write_json(&manifest_path(&args.out), &m)
}

fn file_label(path: &Path) -> String {
    path.file_name()
        .map(|s| s.to_string_lossy().into_owned())
        .unwrap_or_else(|| path.display().to_string())
}

fn cmd_diagnose(args: &DiagnoseArgs) -> CliResult<()> {
    let cfg = args.config.resolve()?;
    let lr = load_map(&args.lr)?;
    let hr = load_map(&args.hr)?;
    let mut record = diagnose_pair(&lr, &hr, &cfg).map_err(|e| match e {
        SpectralError::InvalidConfig(m) => CliError::Usage(m),
        other => CliError::Data(other.to_string()),
    })?;
    record.lr_id = file_label(&args.lr);
    record.hr_id = file_label(&args.hr);
    for (name, why) in &record.reasons {
        eprintln!("warning: {name} undefined: {why}");
    }
    write_json(&args.out, &record)?;
    let m = manifest(
        "diagnose",
        args,
        Some(&cfg),
        &[&args.lr, &args.hr],
        &[&args.out],
    );
    write_json(&manifest_path(&args.out), &m)
}

/// Splits `SCENE__VIEW.json` into `(SCENE, VIEW)`; files without `__` are a
/// single view of the scene named by the stem.
fn scene_of(path: &Path) -> Option<(String, String)> {
    let name = path.file_name()?.to_str()?;
    let stem = name.strip_suffix(".json")?;
    if stem.ends_with(".manifest") || stem == "manifest" {
        return None;
    }
    Some(match stem.split_once("__") {
        Some((scene, view)) => (scene.to_string(), view.to_string()),
        None => (stem.to_string(), String::new()),
    })
}

/// Per-scene views plus the files they came from.
type SceneViews = (BTreeMap<String, Vec<DiagnosticsRecord>>, Vec<PathBuf>);

fn load_views(input: &Path) -> CliResult<SceneViews> {
    let files: Vec<PathBuf> = if input.is_dir() {
        let mut v: Vec<PathBuf> = fs::read_dir(input)
            .map_err(|e| data_err(input.display(), e))?
            .filter_map(|e| e.ok().map(|e| e.path()))
            .filter(|p| p.is_file() && scene_of(p).is_some())
            .collect();
        v.sort();
        v
    } else {
        vec![input.to_path_buf()]
    };
    let mut views: BTreeMap<String, Vec<DiagnosticsRecord>> = BTreeMap::new();
    for file in &files {
        let (scene, _) = scene_of(file).ok_or_else(|| {
            CliError::Usage(format!(
                "--diagnostics: `{}` is not a SCENE__VIEW.json file",
                file.display()
            ))
        })?;
        let text = fs::read_to_string(file).map_err(|e| data_err(file.display(), e))?;
        let records = decode_diagnostics_json(&text).map_err(|e| data_err(file.display(), e))?;
        views.entry(scene).or_default().extend(records);
    }
    Ok((views, files))
}

fn fmt_opt(v: Option<f64>) -> String {
    v.map(|x| x.to_string()).unwrap_or_default()
}

fn corr_csv(report: &CorrelationReport) -> String {
    let mut out = String::from("diagnostic");
    for c in &report.cols {
        out.push(',');
        out.push_str(c.name());
    }
    out.push('\n');
    for (d, row) in report.rows.iter().zip(&report.rho) {
        out.push_str(d.name());
        for v in row {
            out.push(',');
            out.push_str(&fmt_opt(*v));
        }
        out.push('\n');
    }
    out
}

fn gap_csv(gap: Option<&GapReport>) -> String {
    let mut out = String::from("diagnostic,rho_g,rho_t,gap,n\n");
    for e in gap.map(|g| g.entries.as_slice()).unwrap_or_default() {
        out.push_str(&format!(
            "{},{},{},{},{}\n",
            e.diagnostic,
            fmt_opt(e.rho_g),
            fmt_opt(e.rho_t),
            fmt_opt(e.gap),
            e.n
        ));
    }
    out
}

/// Contents of `PREFIX.report.json`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FullReport {
    pub config_fingerprint: String,
    pub correlation: CorrelationReport,
    pub gap: Option<GapReport>,
}

fn with_suffix(prefix: &Path, suffix: &str) -> PathBuf {
    let mut s: OsString = prefix.as_os_str().to_owned();
    s.push(suffix);
    PathBuf::from(s)
}

fn cmd_correlate(args: &CorrelateArgs) -> CliResult<()> {
    let (views, files) = load_views(&args.diagnostics)?;
    let metrics = load_scene_metrics(&args.metrics).map_err(|e| match e {
        FormatError::Io(_) => data_err(args.metrics.display(), e),
        other => CliError::Data(format!("{}: {other}", args.metrics.display())),
    })?;
    let mut per_scene = BTreeMap::new();
    for (scene, records) in &views {
        let agg = aggregate_views(records).map_err(|e| data_err(format!("scene {scene}"), e))?;
        per_scene.insert(scene.clone(), agg.record);
    }
    let fingerprints: Vec<&str> = {
        let mut f: Vec<&str> = per_scene.values().map(|r| r.config.as_str()).collect();
        f.dedup();
        f
    };
    if fingerprints.len() > 1 {
        return Err(CliError::Data(format!(
            "diagnostics computed under different configs: {}",
            fingerprints.join(", ")
        )));
    }
    let opts = CorrelateOptions {
        method: args.method,
        align_goodness: args.align_goodness,
        probe_mode: args.mode,
    };
    let report = correlate_scenes(&per_scene, &metrics, &opts).map_err(|e| match e {
        StatsError::TooFewScenes(n) => {
            CliError::Data(format!("need at least 3 joined scenes, found {n}"))
        }
        other => CliError::Data(other.to_string()),
    })?;
    for x in &report.excluded {
        eprintln!("warning: excluded scene {x}");
    }
    let gap = match influence_gap(&per_scene, &metrics, args.method) {
        Ok(g) => Some(g),
        Err(e) => {
            eprintln!(
                "warning: influence gap skipped (needs rpe_mean and lpips for 3+ scenes): {e}"
            );
            None
        }
    };
    let corr_path = with_suffix(&args.out, ".corr.csv");
    let gap_path = with_suffix(&args.out, ".gap.csv");
    let report_path = with_suffix(&args.out, ".report.json");
    let fingerprint = fingerprints
        .first()
        .map(|s| s.to_string())
        .unwrap_or_default();
    write_text(&corr_path, &corr_csv(&report))?;
    write_text(&gap_path, &gap_csv(gap.as_ref()))?;
    write_json(
        &report_path,
        &FullReport {
            config_fingerprint: fingerprint.clone(),
            correlation: report,
            gap,
        },
    )?;
    let mut inputs: Vec<&Path> = files.iter().map(PathBuf::as_path).collect();
    inputs.push(&args.metrics);
    let mut m = manifest(
        "correlate",
        args,
        None,
        &inputs,
        &[&corr_path, &gap_path, &report_path],
    );
    m.config_fingerprint = Some(fingerprint);
    write_json(&with_suffix(&args.out, ".manifest.json"), &m)
}

fn cmd_report(args: &ReportArgs) -> CliResult<()> {
    let text = fs::read_to_string(&args.report).map_err(|e| data_err(args.report.display(), e))?;
    let malformed = |e: serde_json::Error| {
        CliError::Usage(format!(
            "--report: malformed report {}: {e}",
            args.report.display()
        ))
    };
    // accept the full correlate output or a bare correlation report
    let (report, fingerprint) = match serde_json::from_str::<FullReport>(&text) {
        Ok(full) => (full.correlation, Some(full.config_fingerprint)),
        Err(_) => (
            serde_json::from_str::<CorrelationReport>(&text).map_err(malformed)?,
            None,
        ),
    };
    let shape_ok = report.rho.len() == report.rows.len()
        && report.n.len() == report.rows.len()
        && report.rho.iter().all(|r| r.len() == report.cols.len())
        && report.n.iter().all(|r| r.len() == report.cols.len());
    if !shape_ok {
        return Err(CliError::Usage(format!(
            "--report: matrix shape does not match rows x cols in {}",
            args.report.display()
        )));
    }
    let mut out = String::from("diagnostic,metric,rho,n,aligned\n");
    for (i, d) in report.rows.iter().enumerate() {
        for (j, c) in report.cols.iter().enumerate() {
            out.push_str(&format!(
                "{},{},{},{},{}\n",
                d.name(),
                c.name(),
                fmt_opt(report.rho[i][j]),
                report.n[i][j],
                report.goodness_aligned
            ));
        }
    }
    write_text(&args.out, &out)?;
    let mut m = manifest("report", args, None, &[&args.report], &[&args.out]);
    m.config_fingerprint = fingerprint;
    write_json(&manifest_path(&args.out), &m)
}

/// Parses `args` (including the program name) and runs the command.
/// Returns the process exit code.
pub fn run<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { 2 } else { 0 };
        }
    };
    let result = match &cli.command {
        Command::Synth(a) => cmd_synth(a),
        Command::Upsample(a) => cmd_upsample(a),
        Command::Diagnose(a) => cmd_diagnose(a),
        Command::Correlate(a) => cmd_correlate(a),
        Command::Report(a) => cmd_report(a),
    };
    match result {
        Ok(()) => 0,
        Err(e) => {
            eprintln!("error: {}", e.message());
            e.code()
        }
    }
}
