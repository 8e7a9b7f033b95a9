//! Command-line front end.
//!
//! Settings come from three layers: a `key=value` config file (`--config`),
//! `RAUSSIM_*` environment variables, and flags. Flags beat the environment,
//! which beats the file. Keys in the file are the long flag names without
//! dashes, e.g. `pz-grid=0.003:0.009:9`.
//!
//! Exit codes: 0 success, 1 runtime error, 2 usage error, 3 no threshold
//! crossing, 4 more than half the trials at some point aborted on percolation.

use std::collections::BTreeMap;
use std::ffi::OsString;
use std::fmt::Write as _;
use std::fs;
use std::io::{self, Write};
use std::path::{Path, PathBuf};

use clap::parser::ValueSource;
use clap::{ArgAction, ArgMatches, Args, CommandFactory, FromArgMatches, Parser, Subcommand, ValueEnum};
use serde::Serialize;
use serde_json::{json, Value};

use crate::decoder::TrialDump;
use crate::error::Error;
use crate::lattice::Lattice;
use crate::noise::{
    alpha_for_loss_budget, avg_bsm_attempts, channel_decomposition, eta_from_dephasing,
    hbsm_failure_rate, HybridParams, NoiseRates,
};
use crate::resources::{self, CountingMode, ReportInputs, PRESETS};
use crate::sampler::{sample_keyed, LossModel, SampleParams};
use crate::threshold::{
    self, estimate_logical_rate, find_crossing, geometric_grid, CurvePoint, DistanceRule, FitOptions,
    ThresholdEstimate,
};

pub const TOOL: &str = "raussim";
pub const VERSION: &str = env!("CARGO_PKG_VERSION");

#[derive(Parser, Debug)]
#[command(name = "raussim", version, about = "Hybrid-qubit topological QEC simulator")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Derived error rates for one (alpha, eta, n)
    Noise(NoiseArgs),
    /// Output-state weights of the loss channel
    Channel(ChannelArgs),
    /// Logical error curves over a p_z grid and their crossing
    Threshold(ThresholdArgs),
    /// Logical error rate at a single (d, p_z)
    Run(RunArgs),
    /// Hybrid-qubit cost for a target logical error rate
    Resources(ResourcesArgs),
    /// Smallest coherent amplitude meeting a qubit-loss budget
    AlphaForLoss(AlphaArgs),
}

#[derive(Args, Debug, Clone)]
pub struct Common {
    /// key=value settings file
    #[arg(long, env = "RAUSSIM_CONFIG")]
    pub config: Option<PathBuf>,
    #[arg(long, value_enum, default_value = "json", env = "RAUSSIM_FORMAT")]
    pub format: Format,
    /// Write data here instead of stdout
    #[arg(long, env = "RAUSSIM_OUT")]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Json,
    Csv,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum LossMode {
    /// Each lattice qubit is lost with probability p_loss
    Direct,
    /// Each cluster bond fails and takes out one endpoint; rate tuned to p_loss
    Edge,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum CountArg {
    #[value(name = "as_printed", alias = "as-printed")]
    AsPrinted,
    #[value(name = "explicit_6l3", alias = "explicit-6l3")]
    Explicit6l3,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum ParityArg {
    Odd,
    Any,
}

#[derive(Args, Debug, Clone)]
pub struct NoiseArgs {
    #[arg(long, env = "RAUSSIM_ALPHA")]
    pub alpha: Option<f64>,
    #[arg(long, default_value_t = 0.0, env = "RAUSSIM_ETA")]
    pub eta: f64,
    /// HBSM attempts per lattice bond
    #[arg(long, default_value_t = 2, env = "RAUSSIM_N")]
    pub n: u32,
    #[command(flatten)]
    pub common: Common,
}

#[derive(Args, Debug, Clone)]
pub struct ChannelArgs {
    #[arg(long, env = "RAUSSIM_ALPHA")]
    pub alpha: Option<f64>,
    #[arg(long, default_value_t = 0.0, env = "RAUSSIM_ETA")]
    pub eta: f64,
    #[command(flatten)]
    pub common: Common,
}

#[derive(Args, Debug, Clone)]
pub struct AlphaArgs {
    #[arg(long, env = "RAUSSIM_PLOSS")]
    pub ploss: Option<f64>,
    #[arg(long, default_value_t = 2, env = "RAUSSIM_N")]
    pub n: u32,
    #[arg(long, default_value_t = 0.0, env = "RAUSSIM_ETA")]
    pub eta: f64,
    #[command(flatten)]
    pub common: Common,
}

#[derive(Args, Debug, Clone)]
pub struct SimArgs {
    #[arg(long, default_value_t = 0.03, env = "RAUSSIM_PLOSS")]
    pub ploss: f64,
    /// Coherent amplitude; derived from --ploss and --n when absent
    #[arg(long, env = "RAUSSIM_ALPHA")]
    pub alpha: Option<f64>,
    #[arg(long, default_value_t = 2, env = "RAUSSIM_N")]
    pub n: u32,
    /// Fixed mean HBSM attempts instead of deriving it at each p_z
    #[arg(long = "n-avg", env = "RAUSSIM_N_AVG")]
    pub n_avg: Option<f64>,
    #[arg(long, value_enum, default_value = "direct", env = "RAUSSIM_MODE")]
    pub mode: LossMode,
    #[arg(long, default_value_t = 10_000, value_parser = clap::value_parser!(u64).range(1..), env = "RAUSSIM_TRIALS")]
    pub trials: u64,
    #[arg(long, default_value_t = 1, env = "RAUSSIM_SEED")]
    pub seed: u64,
}

#[derive(Args, Debug, Clone)]
pub struct ThresholdArgs {
    #[arg(long, value_delimiter = ',', default_value = "5,7,9", env = "RAUSSIM_DISTANCES")]
    pub distances: Vec<usize>,
    /// lo:hi:count, geometrically spaced
    #[arg(long = "pz-grid", default_value = "0.003:0.009:9", env = "RAUSSIM_PZ_GRID")]
    pub pz_grid: String,
    #[arg(long, default_value_t = 200, env = "RAUSSIM_BOOTSTRAP")]
    pub bootstrap: usize,
    #[command(flatten)]
    pub sim: SimArgs,
    #[command(flatten)]
    pub common: Common,
}

#[derive(Args, Debug, Clone)]
pub struct RunArgs {
    /// Code distance
    #[arg(long, default_value_t = 5, env = "RAUSSIM_D")]
    pub d: usize,
    #[arg(long, env = "RAUSSIM_PZ")]
    pub pz: Option<f64>,
    /// Write one JSON line per trial with its errors, matching and verdict
    #[arg(long = "debug-dump", env = "RAUSSIM_DEBUG_DUMP")]
    pub debug_dump: Option<PathBuf>,
    #[command(flatten)]
    pub sim: SimArgs,
    #[command(flatten)]
    pub common: Common,
}

#[derive(Args, Debug, Clone)]
pub struct ResourcesArgs {
    #[arg(long, default_value_t = 0.84, env = "RAUSSIM_ALPHA")]
    pub alpha: f64,
    #[arg(long, default_value_t = 0.0, env = "RAUSSIM_ETA")]
    pub eta: f64,
    #[arg(long, default_value_t = 2, env = "RAUSSIM_N")]
    pub n: u32,
    /// Logical rate at distance db-2
    #[arg(long, default_value_t = 1.2e-3, env = "RAUSSIM_A")]
    pub a: f64,
    /// Logical rate at distance db
    #[arg(long, default_value_t = 2e-4, env = "RAUSSIM_B")]
    pub b: f64,
    #[arg(long, default_value_t = 9, env = "RAUSSIM_DB")]
    pub db: usize,
    #[arg(long = "target-pl", env = "RAUSSIM_TARGET_PL")]
    pub target_pl: Option<f64>,
    #[arg(long, value_enum, default_value = "as_printed", env = "RAUSSIM_MODE")]
    pub mode: CountArg,
    #[arg(long, value_enum, default_value = "odd", env = "RAUSSIM_PARITY")]
    pub parity: ParityArg,
    /// Emit the reference scheme rows instead of a single report
    #[arg(long, action = ArgAction::SetTrue, env = "RAUSSIM_TABLE")]
    pub table: bool,
    #[command(flatten)]
    pub common: Common,
}

#[derive(Debug)]
pub enum CliError {
    Usage(String),
    NoCrossing(String),
    Percolation(String),
    Runtime(String),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Runtime(_) => 1,
            CliError::Usage(_) => 2,
            CliError::NoCrossing(_) => 3,
            CliError::Percolation(_) => 4,
        }
    }
}

impl std::fmt::Display for CliError {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            CliError::Usage(m) => write!(f, "usage: {m}"),
            CliError::NoCrossing(m) => write!(f, "no crossing: {m}"),
            CliError::Percolation(m) => write!(f, "percolation-dominated: {m}"),
            CliError::Runtime(m) => write!(f, "{m}"),
        }
    }
}

impl From<Error> for CliError {
    fn from(e: Error) -> Self {
        match e {
            Error::NoCrossing(m) => CliError::NoCrossing(m),
            Error::Domain { .. } | Error::InvalidDistance(_) | Error::Invalid(_) => {
                CliError::Usage(e.to_string())
            }
            other => CliError::Runtime(other.to_string()),
        }
    }
}

impl From<io::Error> for CliError {
    fn from(e: io::Error) -> Self {
        CliError::Runtime(e.to_string())
    }
}

type CliResult<T> = std::result::Result<T, CliError>;

/// Parses `args` (including the program name), executes, and returns the
/// process exit code.
pub fn run<I, T>(args: I, stdout: &mut dyn Write, stderr: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString>,
{
    let argv: Vec<OsString> = args.into_iter().map(Into::into).collect();
    match execute(&argv, stdout, stderr) {
        Ok(()) => 0,
        Err(e) => {
            let _ = writeln!(stderr, "error: {e}");
            e.exit_code()
        }
    }
}

fn parse(argv: &[OsString], stdout: &mut dyn Write, stderr: &mut dyn Write) -> CliResult<Option<ArgMatches>> {
    match Cli::command().try_get_matches_from(argv) {
        Ok(m) => Ok(Some(m)),
        Err(e) if !e.use_stderr() => {
            write!(stdout, "{e}")?;
            Ok(None)
        }
        Err(e) => {
            write!(stderr, "{}", e.render())?;
            Err(CliError::Usage("invalid arguments".into()))
        }
    }
}

fn execute(argv: &[OsString], stdout: &mut dyn Write, stderr: &mut dyn Write) -> CliResult<()> {
    let Some(first) = parse(argv, stdout, stderr)? else {
        return Ok(());
    };
    let (name, sub) = first.subcommand().expect("subcommand is required");
    let matches = match sub.get_one::<PathBuf>("config") {
        Some(path) => {
            let extra = config_args(name, sub, &read_config(path)?, stderr)?;
            let mut all = argv.to_vec();
            all.extend(extra);
            match parse(&all, stdout, stderr)? {
                Some(m) => m,
                None => return Ok(()),
            }
        }
        None => first.clone(),
    };
    let (name, sub) = matches.subcommand().expect("subcommand is required");
    let mut settings = resolved_settings(name, sub);
    settings.insert("command".into(), name.to_string());
    let cli = Cli::from_arg_matches(&matches).map_err(|e| CliError::Usage(e.to_string()))?;

    match cli.command {
        Command::Noise(a) => cmd_noise(&a, &settings, stdout),
        Command::Channel(a) => cmd_channel(&a, &settings, stdout),
        Command::AlphaForLoss(a) => cmd_alpha(&a, &settings, stdout),
        Command::Run(a) => cmd_run(&a, &settings, stdout, stderr),
        Command::Threshold(a) => cmd_threshold(&a, &settings, stdout, stderr),
        Command::Resources(a) => cmd_resources(&a, &settings, stdout),
    }
}

/// Reads `key=value` lines; `#` starts a comment.
pub fn parse_config(text: &str) -> CliResult<Vec<(String, String)>> {
    let mut out = Vec::new();
    for (no, raw) in text.lines().enumerate() {
        let line = raw.split('#').next().unwrap_or("").trim();
        if line.is_empty() {
            continue;
        }
        let (k, v) = line
            .split_once('=')
            .ok_or_else(|| CliError::Usage(format!("config line {}: expected key=value", no + 1)))?;
        out.push((k.trim().to_string(), v.trim().to_string()));
    }
    Ok(out)
}

fn read_config(path: &Path) -> CliResult<Vec<(String, String)>> {
    let text = fs::read_to_string(path)
        .map_err(|e| CliError::Usage(format!("cannot read config {}: {e}", path.display())))?;
    parse_config(&text)
}

const UNRECORDED: [&str; 4] = ["config", "out", "debug-dump", "help"];

/// Flags to append for file settings that neither the command line nor the
/// environment already supplied.
fn config_args(
    name: &str,
    sub: &ArgMatches,
    entries: &[(String, String)],
    stderr: &mut dyn Write,
) -> CliResult<Vec<OsString>> {
    let root = Cli::command();
    let cmd = root.find_subcommand(name).expect("known subcommand");
    let mut extra = Vec::new();
    for (key, value) in entries {
        let Some(arg) = cmd.get_arguments().find(|a| a.get_long() == Some(key.as_str())) else {
            let elsewhere = root
                .get_subcommands()
                .any(|c| c.get_arguments().any(|a| a.get_long() == Some(key.as_str())));
            if elsewhere || key == "command" {
                continue;
            }
            return Err(CliError::Usage(format!("unknown config key '{key}'")));
        };
        if key == "config" {
            writeln!(stderr, "warning: nested config ignored")?;
            continue;
        }
        match sub.value_source(arg.get_id().as_str()) {
            Some(ValueSource::CommandLine) | Some(ValueSource::EnvVariable) => continue,
            _ => {}
        }
        if matches!(arg.get_action(), ArgAction::SetTrue) {
            match value.as_str() {
                "true" => extra.push(format!("--{key}").into()),
                "false" => {}
                _ => return Err(CliError::Usage(format!("{key} must be true or false"))),
            }
        } else {
            extra.push(format!("--{key}").into());
            extra.push(value.into());
        }
    }
    Ok(extra)
}

/// Every effective setting, keyed by long flag name.
fn resolved_settings(name: &str, sub: &ArgMatches) -> BTreeMap<String, String> {
    let root = Cli::command();
    let cmd = root.find_subcommand(name).expect("known subcommand");
    let mut out = BTreeMap::new();
    for arg in cmd.get_arguments() {
        let Some(long) = arg.get_long() else { continue };
        if UNRECORDED.contains(&long) {
            continue;
        }
        let id = arg.get_id().as_str();
        if let Ok(Some(raw)) = sub.try_get_raw(id) {
            let vals: Vec<String> = raw.map(|v| v.to_string_lossy().into_owned()).collect();
            out.insert(long.to_string(), vals.join(","));
        }
    }
    out
}

fn need<T>(v: Option<T>, flag: &str) -> CliResult<T> {
    v.ok_or_else(|| CliError::Usage(format!("--{flag} is required")))
}

fn csv_header(settings: &BTreeMap<String, String>) -> String {
    let mut s = format!("# {TOOL} {VERSION}\n");
    for (k, v) in settings {
        let _ = writeln!(s, "# {k}={v}");
    }
    s
}

fn envelope(settings: &BTreeMap<String, String>, result: Value) -> String {
    let doc = json!({
        "tool": TOOL,
        "version": VERSION,
        "config": settings,
        "result": result,
    });
    serde_json::to_string_pretty(&doc).expect("serializable") + "\n"
}

fn to_value<T: Serialize>(v: &T) -> Value {
    serde_json::to_value(v).expect("serializable")
}

fn emit(common: &Common, text: &str, stdout: &mut dyn Write) -> CliResult<()> {
    match &common.out {
        Some(path) => fs::write(path, text)?,
        None => stdout.write_all(text.as_bytes())?,
    }
    Ok(())
}

/// Flat CSV with one header row and one data row taken from a JSON object.
fn single_row_csv(settings: &BTreeMap<String, String>, value: &Value) -> String {
    let obj = value.as_object().expect("record is an object");
    let mut s = csv_header(settings);
    let keys: Vec<&String> = obj.keys().collect();
    let _ = writeln!(s, "{}", keys.iter().map(|k| k.as_str()).collect::<Vec<_>>().join(","));
    let cells: Vec<String> = obj
        .values()
        .map(|v| match v {
            Value::String(t) => t.clone(),
            other => other.to_string(),
        })
        .collect();
    let _ = writeln!(s, "{}", cells.join(","));
    s
}

fn render_record(common: &Common, settings: &BTreeMap<String, String>, value: Value) -> String {
    match common.format {
        Format::Json => envelope(settings, value),
        Format::Csv => single_row_csv(settings, &value),
    }
}

pub fn cmd_noise(a: &NoiseArgs, settings: &BTreeMap<String, String>, stdout: &mut dyn Write) -> CliResult<()> {
    let params = HybridParams::new(need(a.alpha, "alpha")?, a.eta, a.n)?;
    let rates: NoiseRates = params.rates()?;
    emit(&a.common, &render_record(&a.common, settings, to_value(&rates)), stdout)
}

pub fn cmd_channel(a: &ChannelArgs, settings: &BTreeMap<String, String>, stdout: &mut dyn Write) -> CliResult<()> {
    let ch = channel_decomposition(need(a.alpha, "alpha")?, a.eta)?;
    emit(&a.common, &render_record(&a.common, settings, to_value(&ch)), stdout)
}

pub fn cmd_alpha(a: &AlphaArgs, settings: &BTreeMap<String, String>, stdout: &mut dyn Write) -> CliResult<()> {
    let alpha = alpha_for_loss_budget(need(a.ploss, "ploss")?, a.n, a.eta)?;
    emit(&a.common, &render_record(&a.common, settings, json!({ "alpha": alpha })), stdout)
}

/// Amplitude used to convert between `p_z` and `η` for a simulation.
fn sim_alpha(sim: &SimArgs) -> CliResult<f64> {
    match sim.alpha {
        Some(a) => Ok(a),
        None => Ok(alpha_for_loss_budget(sim.ploss, sim.n, 0.0)?),
    }
}

/// Mean HBSM attempts when the dephasing rate is `p_z` at amplitude `alpha`.
pub fn n_avg_at(p_z: f64, alpha: f64) -> crate::Result<f64> {
    let eta = eta_from_dephasing(p_z, alpha)?;
    avg_bsm_attempts(hbsm_failure_rate(alpha, eta)?)
}

/// Per-bond failure rate that loses each qubit with probability `p_loss`.
pub fn edge_rate_for_loss(p_loss: f64) -> f64 {
    2.0 * (1.0 - (1.0 - p_loss).powf(0.25))
}

fn sample_params(sim: &SimArgs, p_z: f64) -> CliResult<SampleParams> {
    let n_avg = match sim.n_avg {
        Some(v) => v,
        None => n_avg_at(p_z, sim_alpha(sim)?)?,
    };
    let loss = match sim.mode {
        LossMode::Direct => LossModel::Direct { p_loss: sim.ploss },
        LossMode::Edge => LossModel::Edge {
            p_edge: edge_rate_for_loss(sim.ploss),
        },
    };
    Ok(SampleParams::new(p_z, n_avg, loss)?)
}

fn percolation_check(points: &[CurvePoint]) -> CliResult<()> {
    match points.iter().find(|p| 2 * p.aborts > p.trials) {
        Some(p) => Err(CliError::Percolation(format!(
            "{} of {} trials aborted at d={}, p_z={}",
            p.aborts, p.trials, p.d, p.p_z
        ))),
        None => Ok(()),
    }
}

fn points_csv(settings: &BTreeMap<String, String>, points: &[CurvePoint]) -> String {
    let mut buf = csv_header(settings).into_bytes();
    threshold::write_csv(&mut buf, points).expect("in-memory write");
    String::from_utf8(buf).expect("ascii")
}

pub fn cmd_run(
    a: &RunArgs,
    settings: &BTreeMap<String, String>,
    stdout: &mut dyn Write,
    stderr: &mut dyn Write,
) -> CliResult<()> {
    let p_z = need(a.pz, "pz")?;
    let lattice = Lattice::new(a.d)?;
    let params = sample_params(&a.sim, p_z)?;
    let point = estimate_logical_rate(&lattice, &params, a.sim.trials, a.sim.seed)?;
    writeln!(
        stderr,
        "d={} p_z={} n_avg={:.4} p_L={} ({} aborts)",
        point.d, point.p_z, params.n_avg, point.p_l, point.aborts
    )?;
    if let Some(path) = &a.debug_dump {
        let mut text = String::new();
        for t in 0..a.sim.trials {
            let sample = sample_keyed(&lattice, &params, a.sim.seed, t);
            let dump = TrialDump::new(&lattice, t, &sample);
            text.push_str(&serde_json::to_string(&dump).expect("serializable"));
            text.push('\n');
        }
        fs::write(path, text)?;
    }
    let text = match a.common.format {
        Format::Json => envelope(settings, to_value(&point)),
        Format::Csv => points_csv(settings, &[point]),
    };
    emit(&a.common, &text, stdout)?;
    percolation_check(&[point])
}

/// Parses `lo:hi:count`.
pub fn parse_grid(spec: &str) -> CliResult<Vec<f64>> {
    let bad = || CliError::Usage(format!("--pz-grid expects lo:hi:count, got '{spec}'"));
    let parts: Vec<&str> = spec.split(':').collect();
    if parts.len() != 3 {
        return Err(bad());
    }
    let lo: f64 = parts[0].trim().parse().map_err(|_| bad())?;
    let hi: f64 = parts[1].trim().parse().map_err(|_| bad())?;
    let count: usize = parts[2].trim().parse().map_err(|_| bad())?;
    Ok(geometric_grid(lo, hi, count)?)
}

pub fn cmd_threshold(
    a: &ThresholdArgs,
    settings: &BTreeMap<String, String>,
    stdout: &mut dyn Write,
    stderr: &mut dyn Write,
) -> CliResult<()> {
    let grid = parse_grid(&a.pz_grid)?;
    if a.distances.is_empty() {
        return Err(CliError::Usage("--distances is empty".into()));
    }
    let alpha = sim_alpha(&a.sim)?;
    let mut points = Vec::new();
    for &d in &a.distances {
        let lattice = Lattice::new(d)?;
        for &p_z in &grid {
            let params = sample_params(&a.sim, p_z)?;
            let p = estimate_logical_rate(&lattice, &params, a.sim.trials, a.sim.seed)?;
            writeln!(stderr, "d={d} p_z={p_z:.5} p_L={:.5} aborts={}", p.p_l, p.aborts)?;
            points.push(p);
        }
    }
    let opts = FitOptions {
        bootstrap: a.bootstrap,
        seed: a.sim.seed,
        ..FitOptions::default()
    };
    let fit = find_crossing(&points, &opts);
    let estimate: Option<ThresholdEstimate> = match &fit {
        Ok(c) => Some(ThresholdEstimate::new(c, alpha, a.sim.ploss, a.sim.n)?),
        Err(_) => None,
    };
    let text = match a.common.format {
        Format::Json => envelope(settings, json!({ "points": points, "estimate": estimate })),
        Format::Csv => {
            let mut s = points_csv(settings, &points);
            let _ = writeln!(s, "# estimate {}", serde_json::to_string(&estimate).expect("serializable"));
            s
        }
    };
    emit(&a.common, &text, stdout)?;
    percolation_check(&points)?;
    fit.map(|_| ()).map_err(CliError::from)
}

const COUNTING_NOTE: &str = "as_printed counts (5d/4)^3 stars; explicit_6l3 counts 6(5d/4)^3 stars";

pub fn cmd_resources(a: &ResourcesArgs, settings: &BTreeMap<String, String>, stdout: &mut dyn Write) -> CliResult<()> {
    let mode = match a.mode {
        CountArg::AsPrinted => CountingMode::AsPrinted,
        CountArg::Explicit6l3 => CountingMode::Explicit6l3,
    };
    if a.table {
        let rows = PRESETS
            .iter()
            .map(|p| resources::table_row(p, mode))
            .collect::<crate::Result<Vec<_>>>()?;
        let text = match a.common.format {
            Format::Json => envelope(settings, json!({ "rows": rows, "note": COUNTING_NOTE })),
            Format::Csv => {
                let mut buf = csv_header(settings).into_bytes();
                resources::write_table_csv(&mut buf, &rows)?;
                String::from_utf8(buf).expect("ascii")
            }
        };
        return emit(&a.common, &text, stdout);
    }
    let rule = match a.parity {
        ParityArg::Odd => DistanceRule::Odd,
        ParityArg::Any => DistanceRule::AnyParity,
    };
    let report = resources::report(&ReportInputs {
        hybrid: HybridParams::new(a.alpha, a.eta, a.n)?,
        a: a.a,
        b: a.b,
        d_b: a.db,
        target_pl: need(a.target_pl, "target-pl")?,
        mode,
        rule,
    })?;
    let mut value = to_value(&report);
    if a.common.format == Format::Json {
        value["note"] = json!(COUNTING_NOTE);
    }
    emit(&a.common, &render_record(&a.common, settings, value), stdout)
}
