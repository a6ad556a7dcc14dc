//! Command-line front end.
//!
//! Every run is described by a [`RunConfig`]. Reports are JSON objects
//! `{config, results, diagnostics}` that embed the config verbatim, so
//! `entire-growth experiment report.json` reproduces a report exactly.
//!
//! Exit codes: 0 success, 1 configuration error, 2 numeric error.

use std::ffi::OsString;
use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand, ValueEnum};
use num_complex::Complex64;
use serde::{Deserialize, Serialize};
use serde_json::{json, Value};

use crate::coeffs::{catalog, catalog_listing, complement, CoefficientSource, IndexSequence, TypeClass};
use crate::experiments::{
    ae_order_experiment, ae_type_experiment, circle_integral_probe, default_disks, exceptional_set_scan,
    gdelta_probe, mean_value_check, scan_csv, Disk, GridSpec, Quadrature, SamplingSpec, DEFAULT_SCHEDULE,
};
use crate::growth::{
    default_radius_grid, order_from_coeffs, order_from_max_modulus, order_regression, theta_of_rho,
    type_from_max_modulus, type_with_growth_flag, GrowthEstimate, Window,
};
use crate::subseq::{functional_nu, max_identity_check, Functional, KWindow};
use crate::{format_complex, parse_complex, GrowthError};

pub const EXIT_OK: i32 = 0;
pub const EXIT_CONFIG: i32 = 1;
pub const EXIT_NUMERIC: i32 = 2;

/// Default index horizon `N`; windows are `[N/2, N]`.
pub const DEFAULT_HORIZON: u64 = 2000;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize, ValueEnum)]
#[serde(rename_all = "snake_case")]
pub enum CommandKind {
    Analyze,
    Subseq,
    Experiment,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize, ValueEnum)]
#[serde(rename_all = "snake_case")]
#[value(rename_all = "kebab-case")]
pub enum ExperimentKind {
    AeOrder,
    AeType,
    Gdelta,
    CircleIntegral,
    MeanValue,
    ExceptionalScan,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize, ValueEnum)]
#[serde(rename_all = "snake_case")]
#[value(rename_all = "kebab-case")]
pub enum Method {
    WindowSup,
    Regression,
    #[default]
    All,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize, ValueEnum)]
#[serde(rename_all = "snake_case")]
pub enum Format {
    #[default]
    Json,
    Csv,
}

/// Where the `ρ` fed to type estimators comes from.
#[derive(Debug, Clone, Copy, PartialEq, Default, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum RhoPolicy {
    #[default]
    GroundTruth,
    Regression,
    Explicit(f64),
}

impl std::str::FromStr for RhoPolicy {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, String> {
        match s {
            "ground_truth" | "ground-truth" => Ok(Self::GroundTruth),
            "regression" => Ok(Self::Regression),
            v => v.parse::<f64>().map(Self::Explicit).map_err(|_| format!("expected ground_truth, regression or a number, got `{v}`")),
        }
    }
}

#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct OutputPaths {
    pub json: Option<PathBuf>,
    pub csv: Option<PathBuf>,
}

/// Complete description of a run.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RunConfig {
    pub command: CommandKind,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub experiment: Option<ExperimentKind>,
    pub source: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub nu: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub z: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub window: Option<Window>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub k_window: Option<KWindow>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub horizon: Option<u64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub method: Option<Method>,
    #[serde(default)]
    pub rho: RhoPolicy,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub sampling: Option<SamplingSpec>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub disks: Option<Vec<Disk>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub disk: Option<Disk>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub schedule: Option<Vec<u64>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub quadrature: Option<Quadrature>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub circle: Option<Disk>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub nodes: Option<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub grid: Option<GridSpec>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub tol: Option<f64>,
    #[serde(default)]
    pub output: OutputPaths,
    pub seed: u64,
    #[serde(default)]
    pub format: Format,
}

impl RunConfig {
    fn new(command: CommandKind, source: String) -> Self {
        Self {
            command,
            experiment: None,
            source,
            nu: None,
            z: None,
            window: None,
            k_window: None,
            horizon: None,
            method: None,
            rho: RhoPolicy::GroundTruth,
            sampling: None,
            disks: None,
            disk: None,
            schedule: None,
            quadrature: None,
            circle: None,
            nodes: None,
            grid: None,
            tol: None,
            output: OutputPaths::default(),
            seed: 0,
            format: Format::Json,
        }
    }

    /// Parses a config file, or the `config` member of a report.
    pub fn from_json(text: &str) -> Result<Self, String> {
        let value: Value = serde_json::from_str(text).map_err(|e| format!("invalid JSON: {e}"))?;
        match value.get("config") {
            Some(c) if value.get("results").is_some() => {
                serde_json::from_value(c.clone()).map_err(|e| format!("config member of report: {e}"))
            }
            // parse the text again so errors carry line and column
            _ => serde_json::from_str(text).map_err(|e| format!("config: {e}")),
        }
    }

    fn horizon(&self) -> u64 {
        self.horizon.unwrap_or(DEFAULT_HORIZON)
    }

    fn window(&self) -> Window {
        self.window.unwrap_or_else(|| Window::trailing_half(self.horizon()))
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Diagnostic {
    pub name: String,
    pub message: String,
}

impl Diagnostic {
    fn from_error(context: &str, e: &GrowthError) -> Self {
        Self { name: e.name().into(), message: format!("{context}: {e}") }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Report {
    pub config: RunConfig,
    pub results: Value,
    pub diagnostics: Vec<Diagnostic>,
}

/// Failure of a whole run.
#[derive(Debug)]
pub enum RunError {
    Config(String),
    Numeric(GrowthError),
}

impl From<GrowthError> for RunError {
    fn from(e: GrowthError) -> Self {
        RunError::Numeric(e)
    }
}

#[derive(Parser, Debug)]
#[command(name = "entire-growth", version, about = "Order and type of entire functions from Taylor coefficients")]
struct Cli {
    /// Worker threads (default: all cores).
    #[arg(long, global = true)]
    threads: Option<usize>,
    #[command(subcommand)]
    command: Cmd,
}

#[derive(Args, Debug)]
struct OutArgs {
    /// JSON report path (stdout when absent).
    #[arg(long)]
    out: Option<PathBuf>,
    /// CSV path for the diagnostic series.
    #[arg(long)]
    csv: Option<PathBuf>,
    #[arg(long, value_enum, default_value_t = Format::Json)]
    format: Format,
}

#[derive(Subcommand, Debug)]
enum Cmd {
    /// List catalog sources with their ground truths.
    Catalog {
        #[arg(long, value_enum, default_value_t = Format::Json)]
        format: Format,
    },
    /// Order and type estimates for one source.
    Analyze {
        source: String,
        /// Index window `lo:hi`.
        #[arg(long)]
        window: Option<String>,
        #[arg(long)]
        horizon: Option<u64>,
        #[arg(long, value_enum)]
        method: Option<Method>,
        /// `ground_truth`, `regression` or a number.
        #[arg(long, default_value = "ground_truth")]
        rho: RhoPolicy,
        #[command(flatten)]
        out: OutArgs,
    },
    /// Subsequence functionals at one point and the partition identities.
    Subseq {
        source: String,
        #[arg(long)]
        nu: String,
        #[arg(long, default_value = "0", allow_hyphen_values = true)]
        z: String,
        #[arg(long)]
        horizon: Option<u64>,
        #[arg(long, default_value = "ground_truth")]
        rho: RhoPolicy,
        #[command(flatten)]
        out: OutArgs,
    },
    /// Run an experiment from a config file (or a previous report).
    Experiment {
        config: PathBuf,
        /// Overrides the JSON output path of the config.
        #[arg(long)]
        out: Option<PathBuf>,
    },
}

fn parse_window(s: &str) -> Result<Window, String> {
    let (a, b) = s.split_once(':').ok_or_else(|| format!("window must be lo:hi, got `{s}`"))?;
    let lo = a.trim().parse().map_err(|_| format!("bad window start `{a}`"))?;
    let hi = b.trim().parse().map_err(|_| format!("bad window end `{b}`"))?;
    Window::new(lo, hi).map_err(|e| e.to_string())
}

fn estimate_value(r: &Result<GrowthEstimate, GrowthError>) -> Value {
    match r {
        Ok(e) => serde_json::to_value(e).unwrap_or(Value::Null),
        Err(e) => json!({ "error": e.name(), "message": e.to_string() }),
    }
}

/// `ρ` chosen by `policy`; `None` when the policy has no finite positive answer.
fn resolve_rho(src: &CoefficientSource, policy: RhoPolicy, window: Window) -> Result<Option<f64>, GrowthError> {
    match policy {
        RhoPolicy::Explicit(r) if r > 0.0 && r.is_finite() => Ok(Some(r)),
        RhoPolicy::Explicit(r) => Err(GrowthError::RhoOutOfRange(r)),
        RhoPolicy::GroundTruth => Ok(src.ground_truth().map(|g| g.order).filter(|r| *r > 0.0 && r.is_finite())),
        RhoPolicy::Regression => order_regression(src, window).map(|e| Some(e.value)),
    }
}

fn analyze(cfg: &RunConfig, diags: &mut Vec<Diagnostic>) -> Result<(Value, Option<String>), RunError> {
    let src = catalog(&cfg.source)?;
    let window = cfg.window();
    let method = cfg.method.unwrap_or_default();
    if src.degree().is_some() {
        // polynomials have order 0 and no type
        return Ok((
            json!({
                "source": src.id(),
                "ground_truth": src.ground_truth(),
                "order": 0.0,
                "type": "undefined",
                "theta": theta_of_rho(0.0)?,
            }),
            None,
        ));
    }
    let ws = matches!(method, Method::WindowSup | Method::All).then(|| order_from_coeffs(&src, window));
    let reg = matches!(method, Method::Regression | Method::All).then(|| order_regression(&src, window));
    let primary = match (&reg, &ws) {
        (Some(r), _) => r,
        (None, Some(w)) => w,
        (None, None) => unreachable!("at least one method is selected"),
    };
    let order = match primary {
        Ok(e) => e.value,
        Err(e) => return Err(RunError::Numeric(e.clone())),
    };
    let rho = resolve_rho(&src, cfg.rho, window)?;
    let mut results = json!({
        "source": src.id(),
        "ground_truth": src.ground_truth(),
        "window": window,
        "order": order,
        "order_estimates": {},
        "rho_policy": cfg.rho,
        "rho_used": rho,
    });
    if let Some(w) = &ws {
        results["order_estimates"]["window_sup"] = estimate_value(w);
    }
    if let Some(r) = &reg {
        results["order_estimates"]["regression"] = estimate_value(r);
    }
    let csv = primary.as_ref().ok().map(|e| e.series_csv());
    match rho {
        Some(rho) => {
            let tau = type_with_growth_flag(&src, rho, window.hi).map_err(RunError::Numeric)?;
            results["type"] = serde_json::to_value(&tau).unwrap_or(Value::Null);
            results["theta"] = serde_json::to_value(theta_of_rho(rho)?).unwrap_or(Value::Null);
            let grid = default_radius_grid(rho);
            let mm_order = order_from_max_modulus(&src, &grid);
            let mm_type = type_from_max_modulus(&src, rho, &grid);
            for (name, r) in [("max_modulus_order", &mm_order), ("max_modulus_type", &mm_type)] {
                if let Err(e) = r {
                    diags.push(Diagnostic::from_error(name, e));
                }
            }
            results["max_modulus"] = json!({
                "radii": grid,
                "order": estimate_value(&mm_order),
                "type": estimate_value(&mm_type),
            });
        }
        None => {
            let class = src.ground_truth().map(|g| g.type_class);
            results["type"] = match class {
                Some(TypeClass::Undefined) | None => json!("undefined"),
                Some(c) => json!({ "ground_truth": c }),
            };
            diags.push(Diagnostic { name: "NoRho".into(), message: "no finite positive rho available; type not estimated".into() });
        }
    }
    Ok((results, csv))
}

fn subseq(cfg: &RunConfig, diags: &mut Vec<Diagnostic>) -> Result<(Value, Option<String>), RunError> {
    let src = catalog(&cfg.source)?;
    let nu_spec = cfg.nu.as_deref().ok_or_else(|| RunError::Config("subseq: missing field `nu`".into()))?;
    let nu: IndexSequence = nu_spec.parse()?;
    let z = match &cfg.z {
        Some(s) => parse_complex(s)?,
        None => Complex64::new(0.0, 0.0),
    };
    let horizon = cfg.horizon();
    let mu = complement(&nu, horizon)?;
    let rho = resolve_rho(&src, cfg.rho, Window::trailing_half(horizon))?;
    let all = IndexSequence::Complement(Box::new(IndexSequence::Explicit(Vec::new())));
    let mut parts = serde_json::Map::new();
    let mut csv = None;
    for (label, seq) in [("nu", &nu), ("mu", &mu), ("full", &all)] {
        let mut part = serde_json::Map::new();
        let kw = match KWindow::for_horizon(seq, horizon) {
            Ok(kw) => kw,
            Err(e) => {
                diags.push(Diagnostic::from_error(label, &e));
                parts.insert(label.into(), json!({ "error": e.name() }));
                continue;
            }
        };
        let mut functionals = vec![("rho", Functional::Rho), ("theta", Functional::Theta)];
        if let Some(r) = rho {
            functionals.push(("tau", Functional::Tau(r)));
        }
        for (name, f) in functionals {
            let v = match functional_nu(&src, seq, z, f, kw) {
                Ok(e) => {
                    if label == "nu" && name == "theta" {
                        csv = Some(e.series_csv());
                    }
                    serde_json::to_value(&e).unwrap_or(Value::Null)
                }
                Err(e @ (GrowthError::AllSkipped | GrowthError::ZeroAmbiguous { .. })) => {
                    diags.push(Diagnostic::from_error(&format!("{label}.{name}"), &e));
                    json!({ "error": e.name() })
                }
                Err(e) => return Err(e.into()),
            };
            part.insert(name.into(), v);
        }
        parts.insert(label.into(), Value::Object(part));
    }
    let identities = max_identity_check(&src, &nu, z, rho.unwrap_or(1.0), horizon)?;
    if rho.is_none() {
        diags.push(Diagnostic { name: "NoRho".into(), message: "tau identity evaluated with rho = 1".into() });
    }
    Ok((
        json!({
            "source": src.id(),
            "nu": nu.to_string(),
            "mu": mu.to_string(),
            "z": format_complex(z),
            "horizon": horizon,
            "rho_used": rho,
            "parts": parts,
            "identities": identities,
        }),
        csv,
    ))
}

fn k_window(cfg: &RunConfig, nu: &IndexSequence) -> Result<KWindow, GrowthError> {
    match cfg.k_window {
        Some(kw) => KWindow::new(kw.k_min, kw.k_max),
        None => KWindow::for_horizon(nu, cfg.horizon()),
    }
}

fn require<'a, T>(v: &'a Option<T>, field: &str) -> Result<&'a T, RunError> {
    v.as_ref().ok_or_else(|| RunError::Config(format!("experiment config: missing field `{field}`")))
}

fn experiment(cfg: &RunConfig) -> Result<(Value, Option<String>), RunError> {
    let kind = *require(&cfg.experiment, "experiment")?;
    let src = catalog(&cfg.source)?;
    let nu: IndexSequence = require(&cfg.nu, "nu")?.parse()?;
    let rho = || -> Result<f64, RunError> {
        resolve_rho(&src, cfg.rho, cfg.window())?
            .ok_or_else(|| RunError::Config("rho policy yields no finite positive rho; set `rho`".into()))
    };
    let schedule = cfg.schedule.clone().unwrap_or_else(|| DEFAULT_SCHEDULE.to_vec());
    let (results, csv) = match kind {
        ExperimentKind::AeOrder => {
            let r = ae_order_experiment(&src, &nu, require(&cfg.sampling, "sampling")?, k_window(cfg, &nu)?, cfg.tol.unwrap_or(0.05))?;
            let csv = r.to_csv();
            (serde_json::to_value(&r), Some(csv))
        }
        ExperimentKind::AeType => {
            let r = ae_type_experiment(&src, &nu, require(&cfg.sampling, "sampling")?, rho()?, k_window(cfg, &nu)?, cfg.tol.unwrap_or(0.1))?;
            let csv = r.to_csv();
            (serde_json::to_value(&r), Some(csv))
        }
        ExperimentKind::Gdelta => {
            let disks = cfg.disks.clone().unwrap_or_else(default_disks);
            let r = gdelta_probe(&src, &nu, &disks, rho()?, &schedule, cfg.seed)?;
            let csv = r.to_csv();
            (serde_json::to_value(&r), Some(csv))
        }
        ExperimentKind::CircleIntegral => {
            let circle = cfg.circle.unwrap_or(Disk { center: Complex64::new(0.0, 0.0), radius: 1.0 });
            let r = circle_integral_probe(&src, &nu, rho()?, circle, &schedule, cfg.nodes.unwrap_or(64))?;
            let csv = r.to_csv();
            (serde_json::to_value(&r), Some(csv))
        }
        ExperimentKind::MeanValue => {
            let quad = cfg.quadrature.unwrap_or(Quadrature { rings: 16, spokes: 32 });
            let r = mean_value_check(&src, &nu, k_window(cfg, &nu)?, *require(&cfg.disk, "disk")?, quad)?;
            (serde_json::to_value(&r), None)
        }
        ExperimentKind::ExceptionalScan => {
            let rows = exceptional_set_scan(&src, &nu, require(&cfg.grid, "grid")?, k_window(cfg, &nu)?)?;
            let csv = scan_csv(&rows);
            (Ok(json!({ "nodes": rows.len(), "note": "heuristic finite-truncation scan; no verdict" })), Some(csv))
        }
    };
    Ok((results.map_err(|e| RunError::Config(format!("serialization: {e}")))?, csv))
}

/// Writes `bytes` next to `path` and renames it into place.
pub fn write_atomic(path: &Path, bytes: &[u8]) -> std::io::Result<()> {
    let dir = path.parent().filter(|p| !p.as_os_str().is_empty()).unwrap_or(Path::new("."));
    let name = path.file_name().map(|n| n.to_string_lossy().into_owned()).unwrap_or_default();
    let tmp = dir.join(format!(".{name}.{}.tmp", std::process::id()));
    {
        let mut f = fs::File::create(&tmp)?;
        f.write_all(bytes)?;
        f.sync_all()?;
    }
    fs::rename(&tmp, path)
}

fn emit(cfg: &RunConfig, results: Value, csv: Option<String>, diagnostics: Vec<Diagnostic>) -> std::io::Result<()> {
    let report = Report { config: cfg.clone(), results, diagnostics };
    let mut text = serde_json::to_string_pretty(&report).map_err(std::io::Error::other)?;
    text.push('\n');
    if let (Some(path), Some(csv)) = (&cfg.output.csv, &csv) {
        write_atomic(path, csv.as_bytes())?;
    }
    match (&cfg.output.json, cfg.format) {
        (Some(path), _) => write_atomic(path, text.as_bytes()),
        (None, Format::Csv) if csv.is_some() => std::io::stdout().write_all(csv.unwrap_or_default().as_bytes()),
        (None, _) => std::io::stdout().write_all(text.as_bytes()),
    }
}

/// Runs one configured command and writes its report; returns the exit code.
pub fn execute(cfg: &RunConfig) -> i32 {
    let mut diags = Vec::new();
    let outcome = match cfg.command {
        CommandKind::Analyze => analyze(cfg, &mut diags),
        CommandKind::Subseq => subseq(cfg, &mut diags),
        CommandKind::Experiment => experiment(cfg),
    };
    let (results, csv, code) = match outcome {
        Ok((r, csv)) => (r, csv, EXIT_OK),
        Err(RunError::Config(msg)) => {
            eprintln!("error: {msg}");
            return EXIT_CONFIG;
        }
        Err(RunError::Numeric(e)) => {
            eprintln!("error: {} ({})", e, e.name());
            diags.push(Diagnostic::from_error("run", &e));
            (json!({ "error": e.name() }), None, EXIT_NUMERIC)
        }
    };
    match emit(cfg, results, csv, diags) {
        Ok(()) => code,
        Err(e) => {
            eprintln!("error: cannot write report: {e}");
            EXIT_CONFIG
        }
    }
}

fn catalog_command(format: Format) -> i32 {
    let entries = catalog_listing();
    let text = match format {
        Format::Json => serde_json::to_string_pretty(&entries).unwrap_or_default() + "\n",
        Format::Csv => {
            let mut out = String::from("id,params,order,type,exact_derivative\n");
            for e in &entries {
                out.push_str(&format!("{},{},{},{},{}\n", e.id, e.params.replace(',', ";"), e.order, e.type_desc, e.exact_derivative));
            }
            out
        }
    };
    match std::io::stdout().write_all(text.as_bytes()) {
        Ok(()) => EXIT_OK,
        Err(_) => EXIT_CONFIG,
    }
}

/// Entry point shared by the binary and tests.
pub fn run<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { EXIT_CONFIG } else { EXIT_OK };
        }
    };
    if let Some(n) = cli.threads {
        if let Err(e) = rayon::ThreadPoolBuilder::new().num_threads(n).build_global() {
            eprintln!("warning: {e}");
        }
    }
    let with_out = |mut cfg: RunConfig, out: OutArgs| {
        cfg.output = OutputPaths { json: out.out, csv: out.csv };
        cfg.format = out.format;
        cfg
    };
    let cfg = match cli.command {
        Cmd::Catalog { format } => return catalog_command(format),
        Cmd::Analyze { source, window, horizon, method, rho, out } => {
            let mut cfg = RunConfig::new(CommandKind::Analyze, source);
            if let Some(w) = window {
                match parse_window(&w) {
                    Ok(w) => cfg.window = Some(w),
                    Err(msg) => {
                        eprintln!("error: {msg}");
                        return EXIT_CONFIG;
                    }
                }
            }
            cfg.horizon = horizon;
            cfg.method = method;
            cfg.rho = rho;
            with_out(cfg, out)
        }
        Cmd::Subseq { source, nu, z, horizon, rho, out } => {
            let mut cfg = RunConfig::new(CommandKind::Subseq, source);
            cfg.nu = Some(nu);
            cfg.z = Some(z);
            cfg.horizon = horizon;
            cfg.rho = rho;
            with_out(cfg, out)
        }
        Cmd::Experiment { config, out } => {
            let text = match fs::read_to_string(&config) {
                Ok(t) => t,
                Err(e) => {
                    eprintln!("error: cannot read {}: {e}", config.display());
                    return EXIT_CONFIG;
                }
            };
            let mut cfg = match RunConfig::from_json(&text) {
                Ok(c) => c,
                Err(msg) => {
                    eprintln!("error: {}: {msg}", config.display());
                    return EXIT_CONFIG;
                }
            };
            if cfg.command != CommandKind::Experiment && cfg.experiment.is_some() {
                eprintln!("error: {}: `experiment` is only valid with command `experiment`", config.display());
                return EXIT_CONFIG;
            }
            if out.is_some() {
                cfg.output.json = out;
            }
            cfg
        }
    };
    execute(&cfg)
}
