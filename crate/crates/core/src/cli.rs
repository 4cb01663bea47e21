//! Command-line front end: flat `key = value` configuration, flag overrides,
//! and the CSV / manifest writers behind `run`, `sweep-snr` and
//! `sweep-blockage`.

use std::collections::BTreeMap;
use std::fmt::Write as _;
use std::fs;
use std::path::{Path, PathBuf};
use std::time::Instant;

use clap::{Args, Parser, Subcommand};
use thiserror::Error;

use crate::channel::BlockageMode;
use crate::engine::{
    run_detailed, sweep_blockage, sweep_snr, time_average, CellSummary, EngineError, MetricsRecord,
    SimConfig, SweepOutcome, SweepSpec, TraceRecord,
};
use crate::scenario::ScenarioError;

pub const METRICS_HEADER: &str =
    "t,gamma_min_db,p_b,connectivity,pairs_total,pairs_direct,pairs_relayed,mean_hops";
pub const SUMMARY_HEADER: &str =
    "gamma_min_db,p_b,mode,connectivity_mean,connectivity_std,replications";
pub const TRACE_HEADER: &str = "t,msg_type,source,target,payload_summary";
pub const MANIFEST_FILE: &str = "manifest.txt";

#[derive(Debug, Error)]
pub enum CliError {
    #[error("invalid value for `{key}`: {reason}")]
    Config { key: String, reason: String },
    #[error("malformed configuration at line {line}: {reason}")]
    Malformed { line: usize, reason: String },
    #[error("{}: {source}", path.display())]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Config { .. } | CliError::Malformed { .. } => 2,
            CliError::Io { .. } => 3,
        }
    }

    fn config(key: impl Into<String>, reason: impl Into<String>) -> Self {
        CliError::Config {
            key: key.into(),
            reason: reason.into(),
        }
    }
}

impl From<EngineError> for CliError {
    fn from(e: EngineError) -> Self {
        match e {
            EngineError::Config { key, reason } => CliError::config(key, reason),
            EngineError::Scenario(ScenarioError::InvalidParameter { key, reason }) => {
                CliError::config(key, reason)
            }
            EngineError::Scenario(ScenarioError::Infeasible(reason)) => {
                CliError::config("density", reason)
            }
            EngineError::NoPairs => CliError::config("density", "no vehicle pairs to measure"),
        }
    }
}

#[derive(Debug, Parser)]
#[command(name = "oran-v2x", version, about = "RIC-driven V2X relay simulator")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// One simulation run.
    Run(Flags),
    /// Connectivity against the minimum-SNR threshold, relay vs direct.
    SweepSnr(Flags),
    /// Connectivity over blockage probability × SNR threshold.
    SweepBlockage(Flags),
}

impl Command {
    pub fn name(&self) -> &'static str {
        match self {
            Command::Run(_) => "run",
            Command::SweepSnr(_) => "sweep-snr",
            Command::SweepBlockage(_) => "sweep-blockage",
        }
    }

    pub fn flags(&self) -> &Flags {
        match self {
            Command::Run(f) | Command::SweepSnr(f) | Command::SweepBlockage(f) => f,
        }
    }
}

/// Values are kept as text so that validation errors always name the key.
#[derive(Debug, Args, Default, Clone)]
pub struct Flags {
    #[arg(long)]
    pub config: Option<PathBuf>,
    #[arg(long, default_value = "out")]
    pub out: PathBuf,
    #[arg(long, allow_hyphen_values = true)]
    pub seed: Option<String>,
    #[arg(long, allow_hyphen_values = true)]
    pub duration: Option<String>,
    #[arg(long, allow_hyphen_values = true)]
    pub density: Option<String>,
    #[arg(
        long = "snr-min",
        allow_hyphen_values = true,
        value_name = "DB[,DB...]"
    )]
    pub snr_min: Option<String>,
    #[arg(long = "p-b", allow_hyphen_values = true, value_name = "P[,P...]")]
    pub p_b: Option<String>,
    #[arg(long = "max-hops", allow_hyphen_values = true)]
    pub max_hops: Option<String>,
    #[arg(long = "no-relay")]
    pub no_relay: bool,
    #[arg(long, value_name = "pairwise|per-vehicle")]
    pub metric: Option<String>,
    #[arg(long, allow_hyphen_values = true)]
    pub replications: Option<String>,
    /// Parallel runs in a sweep; does not change any output.
    #[arg(long, allow_hyphen_values = true)]
    pub workers: Option<String>,
    /// Also write trace.csv with every E2-style message.
    #[arg(long)]
    pub trace: bool,
}

/// Fully resolved parameters for any command.
#[derive(Debug, Clone)]
pub struct Settings {
    pub sim: SimConfig,
    pub snr_values: Vec<f64>,
    pub pb_values: Vec<f64>,
    pub replications: usize,
}

impl Default for Settings {
    fn default() -> Self {
        let sim = SimConfig::default();
        Self {
            snr_values: vec![sim.xapp.snr_min_db],
            pb_values: vec![sim.channel.blockage_probability],
            replications: 1,
            sim,
        }
    }
}

/// Parses flat `key = value` text; `#` starts a comment.
pub fn parse_config_text(text: &str) -> Result<BTreeMap<String, String>, CliError> {
    let mut pairs = BTreeMap::new();
    for (i, raw) in text.lines().enumerate() {
        let line = raw.split('#').next().unwrap_or("").trim();
        if line.is_empty() {
            continue;
        }
        let Some((key, value)) = line.split_once('=') else {
            return Err(CliError::Malformed {
                line: i + 1,
                reason: format!("expected key = value, got `{line}`"),
            });
        };
        let (key, value) = (key.trim(), value.trim());
        if key.is_empty() {
            return Err(CliError::Malformed {
                line: i + 1,
                reason: "empty key".into(),
            });
        }
        if pairs.insert(key.to_string(), value.to_string()).is_some() {
            return Err(CliError::Malformed {
                line: i + 1,
                reason: format!("duplicate key `{key}`"),
            });
        }
    }
    Ok(pairs)
}

fn num<T: std::str::FromStr>(key: &str, v: &str) -> Result<T, CliError>
where
    T::Err: std::fmt::Display,
{
    v.parse::<T>()
        .map_err(|e| CliError::config(key, format!("`{v}`: {e}")))
}

fn real(key: &str, v: &str) -> Result<f64, CliError> {
    let x: f64 = num(key, v)?;
    if x.is_finite() {
        Ok(x)
    } else {
        Err(CliError::config(key, "must be finite"))
    }
}

fn list(key: &str, v: &str) -> Result<Vec<f64>, CliError> {
    let values = v
        .split(',')
        .map(|s| real(key, s.trim()))
        .collect::<Result<Vec<f64>, _>>()?;
    if values.is_empty() {
        return Err(CliError::config(key, "needs at least one value"));
    }
    Ok(values)
}

fn boolean(key: &str, v: &str) -> Result<bool, CliError> {
    match v {
        "true" | "yes" | "1" => Ok(true),
        "false" | "no" | "0" => Ok(false),
        _ => Err(CliError::config(
            key,
            format!("expected true or false, got `{v}`"),
        )),
    }
}

impl Settings {
    fn apply(&mut self, key: &str, v: &str) -> Result<(), CliError> {
        let s = &mut self.sim;
        match key {
            "duration" => s.duration = real(key, v)?,
            "dt" => s.dt = real(key, v)?,
            "control_period" => s.control_period = real(key, v)?,
            "warmup" => s.warmup = real(key, v)?,
            "seed" => s.seed = num(key, v)?,
            "metric" => s.metric_mode = v.parse().map_err(|e| CliError::config(key, e))?,
            "relay" => s.relay_enabled = boolean(key, v)?,
            "snr_min" => self.snr_values = list(key, v)?,
            "p_b" => self.pb_values = list(key, v)?,
            "max_hops" => s.xapp.max_hops = num(key, v)?,
            "bs_relay" => s.xapp.bs_relay = boolean(key, v)?,
            "replications" => self.replications = num(key, v)?,
            "density" => s.traffic.density = real(key, v)?,
            "speed" => s.traffic.speed = real(key, v)?,
            "tall_fraction" => s.traffic.tall_fraction = real(key, v)?,
            "turn_probability" => s.traffic.turn_probability = real(key, v)?,
            "vehicle_length" => s.traffic.car.length = real(key, v)?,
            "vehicle_width" => s.traffic.car.width = real(key, v)?,
            "vehicle_height" => s.traffic.car.height = real(key, v)?,
            "truck_height" => s.traffic.truck_height = real(key, v)?,
            "vehicle_antenna_height" => s.traffic.antenna_height = real(key, v)?,
            "arm_length" => s.intersection.arm_length = real(key, v)?,
            "road_width" => s.intersection.road_width = real(key, v)?,
            "building_setback" => s.intersection.building_setback = real(key, v)?,
            "lanes" => s.intersection.lanes_per_road = num(key, v)?,
            "building_height" => s.intersection.building_height = real(key, v)?,
            "carrier_ghz" => s.channel.carrier_ghz = real(key, v)?,
            "eirp_dbm" => s.channel.eirp_dbm = real(key, v)?,
            "allow_high_eirp" => s.channel.allow_high_eirp = boolean(key, v)?,
            "bandwidth_hz" => s.channel.bandwidth_hz = real(key, v)?,
            "noise_figure_db" => s.channel.noise_figure_db = real(key, v)?,
            "blockage_mode" => {
                s.channel.blockage_mode = v
                    .parse::<BlockageMode>()
                    .map_err(|e| CliError::config(key, e))?
            }
            "sensing_range" => s.ran.sensing_range = real(key, v)?,
            "reporting_period" => s.ran.reporting_period = real(key, v)?,
            "measured_neighbors" => s.ran.measured_neighbors = num(key, v)?,
            "staleness_window" => s.ran.staleness_window = real(key, v)?,
            "control_delay" => s.ran.control_delay = real(key, v)?,
            "forwarding_ttl" => s.ran.forwarding_ttl = real(key, v)?,
            "cav_e2" => s.ran.cav_e2 = boolean(key, v)?,
            "rsu_height" => s.ran.rsu_height = real(key, v)?,
            "trace" => s.trace = boolean(key, v)?,
            _ => return Err(CliError::config(key, "unknown key")),
        }
        Ok(())
    }

    /// Applies `pairs` over the defaults and validates the result.
    pub fn resolve(pairs: &BTreeMap<String, String>) -> Result<Settings, CliError> {
        let mut s = Settings::default();
        for (k, v) in pairs {
            s.apply(k, v)?;
        }
        s.sim.xapp.snr_min_db = s.snr_values[0];
        s.sim.channel.blockage_probability = s.pb_values[0];
        if let Some(bad) = s.pb_values.iter().find(|p| !(0.0..=1.0).contains(*p)) {
            return Err(CliError::config("p_b", format!("{bad} is outside [0, 1]")));
        }
        if s.replications < 1 {
            return Err(CliError::config("replications", "must be >= 1"));
        }
        s.sim.validate()?;
        Ok(s)
    }

    /// Every resolved parameter as `key = value`, in a fixed order that
    /// [`Settings::resolve`] reads back to the same settings.
    pub fn to_pairs(&self) -> Vec<(&'static str, String)> {
        let s = &self.sim;
        let join = |v: &[f64]| v.iter().map(f64::to_string).collect::<Vec<_>>().join(",");
        vec![
            ("duration", s.duration.to_string()),
            ("dt", s.dt.to_string()),
            ("control_period", s.control_period.to_string()),
            ("warmup", s.warmup.to_string()),
            ("seed", s.seed.to_string()),
            ("metric", s.metric_mode.as_str().to_string()),
            ("relay", s.relay_enabled.to_string()),
            ("snr_min", join(&self.snr_values)),
            ("p_b", join(&self.pb_values)),
            ("max_hops", s.xapp.max_hops.to_string()),
            ("bs_relay", s.xapp.bs_relay.to_string()),
            ("replications", self.replications.to_string()),
            ("density", s.traffic.density.to_string()),
            ("speed", s.traffic.speed.to_string()),
            ("tall_fraction", s.traffic.tall_fraction.to_string()),
            ("turn_probability", s.traffic.turn_probability.to_string()),
            ("vehicle_length", s.traffic.car.length.to_string()),
            ("vehicle_width", s.traffic.car.width.to_string()),
            ("vehicle_height", s.traffic.car.height.to_string()),
            ("truck_height", s.traffic.truck_height.to_string()),
            (
                "vehicle_antenna_height",
                s.traffic.antenna_height.to_string(),
            ),
            ("arm_length", s.intersection.arm_length.to_string()),
            ("road_width", s.intersection.road_width.to_string()),
            (
                "building_setback",
                s.intersection.building_setback.to_string(),
            ),
            ("lanes", s.intersection.lanes_per_road.to_string()),
            (
                "building_height",
                s.intersection.building_height.to_string(),
            ),
            ("carrier_ghz", s.channel.carrier_ghz.to_string()),
            ("eirp_dbm", s.channel.eirp_dbm.to_string()),
            ("allow_high_eirp", s.channel.allow_high_eirp.to_string()),
            ("bandwidth_hz", s.channel.bandwidth_hz.to_string()),
            ("noise_figure_db", s.channel.noise_figure_db.to_string()),
            (
                "blockage_mode",
                s.channel.blockage_mode.as_str().to_string(),
            ),
            ("sensing_range", s.ran.sensing_range.to_string()),
            ("reporting_period", s.ran.reporting_period.to_string()),
            ("measured_neighbors", s.ran.measured_neighbors.to_string()),
            ("staleness_window", s.ran.staleness_window.to_string()),
            ("control_delay", s.ran.control_delay.to_string()),
            ("forwarding_ttl", s.ran.forwarding_ttl.to_string()),
            ("cav_e2", s.ran.cav_e2.to_string()),
            ("rsu_height", s.ran.rsu_height.to_string()),
            ("trace", s.trace.to_string()),
        ]
    }

    fn for_single_run(&self, sim: SimConfig) -> Settings {
        Settings {
            snr_values: vec![sim.xapp.snr_min_db],
            pb_values: vec![sim.channel.blockage_probability],
            replications: 1,
            sim,
        }
    }

    pub fn sweep_spec(&self) -> SweepSpec {
        SweepSpec {
            snr_values: self.snr_values.clone(),
            pb_values: self.pb_values.clone(),
            replications: self.replications,
            base: self.sim.clone(),
        }
    }
}

/// Config file first, then flags on top.
pub fn parse_config(flags: &Flags) -> Result<Settings, CliError> {
    let mut pairs = match &flags.config {
        Some(path) => {
            let text = fs::read_to_string(path).map_err(|source| CliError::Malformed {
                line: 0,
                reason: format!("cannot read {}: {source}", path.display()),
            })?;
            parse_config_text(&text)?
        }
        None => BTreeMap::new(),
    };
    let overrides = [
        ("seed", &flags.seed),
        ("duration", &flags.duration),
        ("density", &flags.density),
        ("snr_min", &flags.snr_min),
        ("p_b", &flags.p_b),
        ("max_hops", &flags.max_hops),
        ("metric", &flags.metric),
        ("replications", &flags.replications),
    ];
    for (key, value) in overrides {
        if let Some(v) = value {
            pairs.insert(key.to_string(), v.clone());
        }
    }
    if flags.no_relay {
        pairs.insert("relay".into(), "false".into());
    }
    if flags.trace {
        pairs.insert("trace".into(), "true".into());
    }
    Settings::resolve(&pairs)
}

pub fn workers(flags: &Flags) -> Result<usize, CliError> {
    match &flags.workers {
        Some(v) => {
            let n: usize = num("workers", v)?;
            if n == 0 {
                return Err(CliError::config("workers", "must be >= 1"));
            }
            Ok(n)
        }
        None => Ok(std::thread::available_parallelism().map_or(1, |n| n.get())),
    }
}

fn mode_label(sim: &SimConfig) -> &'static str {
    if sim.relay_enabled {
        "relay"
    } else {
        "direct"
    }
}

pub fn metrics_csv(records: &[MetricsRecord]) -> String {
    let mut s = String::from(METRICS_HEADER);
    s.push('\n');
    for r in records {
        let _ = writeln!(
            s,
            "{:.6},{},{},{:.6},{},{},{},{:.6}",
            r.t,
            r.snr_min_db,
            r.p_b,
            r.connectivity,
            r.pairs_total,
            r.pairs_direct,
            r.pairs_relayed,
            r.mean_hops
        );
    }
    s
}

fn summary_line(s: &mut String, snr: f64, p_b: f64, mode: &str, mean: f64, std: f64, reps: usize) {
    let _ = writeln!(s, "{snr},{p_b},{mode},{mean:.6},{std:.6},{reps}");
}

pub fn summary_csv(cells: &[CellSummary], mode: &str, direct: bool) -> String {
    let mut s = String::from(SUMMARY_HEADER);
    s.push('\n');
    for c in cells {
        let (mean, std) = if direct {
            (c.direct_mean, c.direct_std)
        } else {
            (c.relay_mean, c.relay_std)
        };
        summary_line(&mut s, c.snr_min_db, c.p_b, mode, mean, std, c.replications);
    }
    s
}

fn csv_field(v: &str) -> String {
    if v.contains([',', '"', '\n']) {
        format!("\"{}\"", v.replace('"', "\"\""))
    } else {
        v.to_string()
    }
}

pub fn trace_csv(trace: &[TraceRecord]) -> String {
    let mut s = String::from(TRACE_HEADER);
    s.push('\n');
    for r in trace {
        let _ = writeln!(
            s,
            "{:.6},{},{},{},{}",
            r.t,
            r.msg_type,
            r.source,
            r.target,
            csv_field(&r.payload_summary)
        );
    }
    s
}

pub fn manifest_text(
    settings: &Settings,
    command: &str,
    outputs: &[&str],
    runtime_s: f64,
) -> String {
    let mut s = String::new();
    let _ = writeln!(s, "# oran-v2x run manifest");
    let _ = writeln!(s, "# command: {command}");
    let _ = writeln!(s, "# version: {}", env!("CARGO_PKG_VERSION"));
    let _ = writeln!(s, "# outputs: {}", outputs.join(" "));
    let _ = writeln!(s, "# wall_clock_s: {runtime_s:.3}");
    for (k, v) in settings.to_pairs() {
        let _ = writeln!(s, "{k} = {v}");
    }
    s
}

fn write(path: &Path, contents: &str) -> Result<(), CliError> {
    fs::write(path, contents).map_err(|source| CliError::Io {
        path: path.to_path_buf(),
        source,
    })
}

fn ensure_dir(path: &Path) -> Result<(), CliError> {
    fs::create_dir_all(path).map_err(|source| CliError::Io {
        path: path.to_path_buf(),
        source,
    })
}

pub fn cmd_run(settings: &Settings, out: &Path) -> Result<(), CliError> {
    if settings.snr_values.len() != 1 {
        return Err(CliError::config(
            "snr_min",
            "run takes a single threshold; use sweep-snr",
        ));
    }
    if settings.pb_values.len() != 1 {
        return Err(CliError::config(
            "p_b",
            "run takes a single probability; use sweep-blockage",
        ));
    }
    if settings.replications != 1 {
        return Err(CliError::config(
            "replications",
            "run is a single replication; use a sweep",
        ));
    }
    let started = Instant::now();
    ensure_dir(out)?;
    let output = run_detailed(&settings.sim)?;
    let times: Vec<f64> = output.records.iter().map(|r| r.t).collect();
    let values: Vec<f64> = output.records.iter().map(|r| r.connectivity).collect();
    let mean = time_average(&times, &values, settings.sim.warmup);

    write(&out.join("metrics.csv"), &metrics_csv(&output.records))?;
    let mut summary = String::from(SUMMARY_HEADER);
    summary.push('\n');
    let sim = &settings.sim;
    summary_line(
        &mut summary,
        sim.xapp.snr_min_db,
        sim.channel.blockage_probability,
        mode_label(sim),
        mean,
        0.0,
        1,
    );
    write(&out.join("summary.csv"), &summary)?;
    let mut outputs = vec!["metrics.csv", "summary.csv"];
    if sim.trace {
        write(&out.join("trace.csv"), &trace_csv(&output.trace))?;
        outputs.push("trace.csv");
    }
    let manifest = manifest_text(settings, "run", &outputs, started.elapsed().as_secs_f64());
    write(&out.join(MANIFEST_FILE), &manifest)
}

fn run_dir_name(snr: f64, p_b: f64, rep: usize) -> String {
    format!("snr{snr}_pb{p_b}_rep{rep}")
}

fn write_sweep(
    settings: &Settings,
    command: &str,
    outcome: &SweepOutcome,
    out: &Path,
    started: Instant,
) -> Result<(), CliError> {
    let mode = mode_label(&settings.sim);
    write(
        &out.join("summary.csv"),
        &summary_csv(&outcome.cells, mode, false),
    )?;
    let mut outputs = vec!["summary.csv"];
    if command == "sweep-snr" && settings.sim.relay_enabled {
        write(
            &out.join("baseline_summary.csv"),
            &summary_csv(&outcome.cells, "direct", true),
        )?;
        outputs.push("baseline_summary.csv");
    }
    let runs_dir = out.join("runs");
    ensure_dir(&runs_dir)?;
    for run in &outcome.runs {
        let dir = runs_dir.join(run_dir_name(run.snr_min_db, run.p_b, run.replication));
        ensure_dir(&dir)?;
        write(&dir.join("metrics.csv"), &metrics_csv(&run.output.records))?;
        let mut run_outputs = vec!["metrics.csv"];
        if run.config.trace {
            write(&dir.join("trace.csv"), &trace_csv(&run.output.trace))?;
            run_outputs.push("trace.csv");
        }
        let single = settings.for_single_run(run.config.clone());
        write(
            &dir.join(MANIFEST_FILE),
            &manifest_text(&single, "run", &run_outputs, 0.0),
        )?;
    }
    outputs.push("runs/");
    let manifest = manifest_text(settings, command, &outputs, started.elapsed().as_secs_f64());
    write(&out.join(MANIFEST_FILE), &manifest)
}

pub fn cmd_sweep_snr(settings: &Settings, out: &Path, workers: usize) -> Result<(), CliError> {
    let started = Instant::now();
    ensure_dir(out)?;
    let outcome = sweep_snr(&settings.sweep_spec(), workers)?;
    write_sweep(settings, "sweep-snr", &outcome, out, started)
}

pub fn cmd_sweep_blockage(settings: &Settings, out: &Path, workers: usize) -> Result<(), CliError> {
    let started = Instant::now();
    ensure_dir(out)?;
    let outcome = sweep_blockage(&settings.sweep_spec(), workers)?;
    write_sweep(settings, "sweep-blockage", &outcome, out, started)
}

/// Entry point shared by the binary and the tests.
pub fn execute(cli: &Cli) -> Result<(), CliError> {
    let flags = cli.command.flags();
    let settings = parse_config(flags)?;
    match &cli.command {
        Command::Run(_) => cmd_run(&settings, &flags.out),
        Command::SweepSnr(_) => cmd_sweep_snr(&settings, &flags.out, workers(flags)?),
        Command::SweepBlockage(_) => cmd_sweep_blockage(&settings, &flags.out, workers(flags)?),
    }
}
