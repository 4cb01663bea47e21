//! Tick-ordered simulation loop, the connectivity metric and the parameter
//! sweeps built on top of it.
//!
//! One run owns its whole world. Within a tick, E2-style traffic is a small
//! discrete-event queue ordered by `(delivery time, sequence)`: indications
//! reach the RIC after the control-channel delay, the xApp evaluates once
//! they are in, and its control messages reach the nodes one delay later.

use std::cmp::Ordering;
use std::collections::{BTreeMap, BinaryHeap, VecDeque};

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use thiserror::Error;

use crate::channel::ChannelParams;
use crate::ran::{
    sense_all, trace_chain, ControlMessage, Flow, IndicationReport, NodeId, NodeState,
    SubscriptionRequest,
};
use crate::ric::{xapp_tick, ConnectivityGraph, RelayPath, RicState, XAppConfig};
use crate::scenario::{
    build_intersection_with, place_corner_rsus, spawn_vehicles, step_mobility, IntersectionSpec,
    TrafficConfig, World,
};

#[derive(Debug, Error, Clone, PartialEq)]
pub enum EngineError {
    #[error("invalid value for `{key}`: {reason}")]
    Config { key: &'static str, reason: String },
    #[error(transparent)]
    Scenario(#[from] crate::scenario::ScenarioError),
    #[error("connectivity is undefined without vehicle pairs")]
    NoPairs,
}

fn config_err(key: &'static str, reason: impl Into<String>) -> EngineError {
    EngineError::Config {
        key,
        reason: reason.into(),
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum MetricMode {
    /// Fraction of unordered CAV pairs with a feasible path.
    #[default]
    Pairwise,
    /// Fraction of CAVs with a feasible path to at least one other CAV.
    PerVehicle,
}

impl MetricMode {
    pub fn as_str(self) -> &'static str {
        match self {
            MetricMode::Pairwise => "pairwise",
            MetricMode::PerVehicle => "per-vehicle",
        }
    }
}

impl std::str::FromStr for MetricMode {
    type Err = String;
    fn from_str(s: &str) -> Result<Self, String> {
        match s {
            "pairwise" => Ok(MetricMode::Pairwise),
            "per-vehicle" => Ok(MetricMode::PerVehicle),
            other => Err(format!("expected pairwise or per-vehicle, got `{other}`")),
        }
    }
}

/// E2 termination and control-channel settings.
#[derive(Debug, Clone, PartialEq)]
pub struct RanConfig {
    pub sensing_range: f64,
    pub reporting_period: f64,
    pub measured_neighbors: usize,
    pub staleness_window: f64,
    pub control_delay: f64,
    pub forwarding_ttl: f64,
    /// CAVs carry E2 terminations; `false` restricts them to RSUs.
    pub cav_e2: bool,
    pub rsu_height: f64,
}

impl Default for RanConfig {
    fn default() -> Self {
        Self {
            sensing_range: 300.0,
            reporting_period: 0.1,
            measured_neighbors: 64,
            staleness_window: 0.5,
            control_delay: 0.01,
            forwarding_ttl: 0.5,
            cav_e2: true,
            rsu_height: 6.0,
        }
    }
}

#[derive(Debug, Clone)]
pub struct SimConfig {
    pub duration: f64,
    pub dt: f64,
    pub control_period: f64,
    /// Records before this time are left out of time averages.
    pub warmup: f64,
    pub seed: u64,
    pub metric_mode: MetricMode,
    pub relay_enabled: bool,
    pub channel: ChannelParams,
    pub traffic: TrafficConfig,
    pub intersection: IntersectionSpec,
    pub xapp: XAppConfig,
    pub ran: RanConfig,
    /// Keep a message trace in the run output.
    pub trace: bool,
}

impl Default for SimConfig {
    fn default() -> Self {
        Self {
            duration: 300.0,
            dt: 0.1,
            control_period: 0.1,
            warmup: 10.0,
            seed: 1,
            metric_mode: MetricMode::Pairwise,
            relay_enabled: true,
            channel: ChannelParams::default(),
            traffic: TrafficConfig::default(),
            intersection: IntersectionSpec::default(),
            xapp: XAppConfig::default(),
            ran: RanConfig::default(),
            trace: false,
        }
    }
}

fn whole_steps(period: f64, dt: f64) -> Option<u64> {
    let k = (period / dt).round();
    ((period / dt - k).abs() < 1e-6 && k >= 1.0).then_some(k as u64)
}

impl SimConfig {
    pub fn validate(&self) -> Result<(), EngineError> {
        if !(self.duration.is_finite() && self.duration > 0.0) {
            return Err(config_err("duration", "must be > 0"));
        }
        if !(self.dt.is_finite() && self.dt > 0.0) {
            return Err(config_err("dt", "must be > 0"));
        }
        if whole_steps(self.control_period, self.dt).is_none() {
            return Err(config_err(
                "control_period",
                "must be a whole multiple (>= 1) of dt",
            ));
        }
        if !(self.warmup >= 0.0) {
            return Err(config_err("warmup", "must be >= 0"));
        }
        if let Err(e) = self.channel.validate() {
            return Err(match e {
                crate::channel::ChannelError::InvalidParameter { key, reason } => {
                    config_err(key, reason)
                }
                other => config_err("channel", other.to_string()),
            });
        }
        self.traffic.validate()?;
        self.xapp
            .validate()
            .map_err(|r| config_err("max_hops", r))?;
        let r = &self.ran;
        if !(r.sensing_range > 0.0) {
            return Err(config_err("sensing_range", "must be > 0"));
        }
        self.subscription()
            .validate(self.dt)
            .map_err(|e| config_err("reporting_period", e))?;
        if !(r.staleness_window >= 0.0) {
            return Err(config_err("staleness_window", "must be >= 0"));
        }
        if !(r.control_delay >= 0.0) {
            return Err(config_err("control_delay", "must be >= 0"));
        }
        if !(r.forwarding_ttl > 0.0) {
            return Err(config_err("forwarding_ttl", "must be > 0"));
        }
        Ok(())
    }

    pub fn subscription(&self) -> SubscriptionRequest {
        SubscriptionRequest {
            subscriber: "near-rt-ric".into(),
            reporting_period: self.ran.reporting_period,
            measured_neighbors: self.ran.measured_neighbors,
        }
    }

    /// xApp parameters actually used: relaying off means one hop.
    pub fn effective_xapp(&self) -> XAppConfig {
        let mut x = self.xapp.clone();
        if !self.relay_enabled {
            x.max_hops = 1;
        }
        x
    }

    pub fn ticks(&self) -> u64 {
        (self.duration / self.dt).round().max(1.0) as u64
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct MetricsRecord {
    pub t: f64,
    pub connectivity: f64,
    pub pairs_total: usize,
    pub pairs_direct: usize,
    pub pairs_relayed: usize,
    pub mean_hops: f64,
    pub p_b: f64,
    pub snr_min_db: f64,
}

/// Feasibility query used by [`connectivity`].
#[derive(Debug, Clone)]
pub struct ConnectivityQuery {
    pub max_hops: usize,
    pub snr_min_db: f64,
    pub mode: MetricMode,
    pub bs_relay: bool,
}

/// Fraction of `pairs` (or of their vehicles) joined by a path of at most
/// `max_hops` hops whose edges all meet `snr_min_db`.
pub fn connectivity(
    graph: &ConnectivityGraph,
    pairs: &[(NodeId, NodeId)],
    q: &ConnectivityQuery,
) -> Result<f64, EngineError> {
    if pairs.is_empty() {
        return Err(EngineError::NoPairs);
    }
    let feasible = feasible_pairs(graph, pairs, q);
    Ok(match q.mode {
        MetricMode::Pairwise => feasible.iter().filter(|&&f| f).count() as f64 / pairs.len() as f64,
        MetricMode::PerVehicle => {
            let mut vehicles: BTreeMap<NodeId, bool> = BTreeMap::new();
            for (&(a, b), &ok) in pairs.iter().zip(&feasible) {
                *vehicles.entry(a).or_default() |= ok;
                *vehicles.entry(b).or_default() |= ok;
            }
            vehicles.values().filter(|&&ok| ok).count() as f64 / vehicles.len() as f64
        }
    })
}

/// Breadth-first hop distances from each distinct source, truncated at
/// `max_hops`.
fn feasible_pairs(
    graph: &ConnectivityGraph,
    pairs: &[(NodeId, NodeId)],
    q: &ConnectivityQuery,
) -> Vec<bool> {
    let n = graph.node_count();
    let relay: Vec<bool> = graph
        .nodes()
        .iter()
        .map(|&id| id.kind != crate::ran::NodeKind::Bs || q.bs_relay)
        .collect();
    let mut by_source: BTreeMap<NodeId, Vec<usize>> = BTreeMap::new();
    for (k, &(a, _)) in pairs.iter().enumerate() {
        by_source.entry(a).or_default().push(k);
    }
    let mut out = vec![false; pairs.len()];
    let mut dist = vec![usize::MAX; n];
    let mut queue = VecDeque::new();
    for (source, ks) in by_source {
        let Some(si) = graph.index_of(source) else {
            continue;
        };
        dist.fill(usize::MAX);
        dist[si] = 0;
        queue.clear();
        queue.push_back(si);
        while let Some(x) = queue.pop_front() {
            if dist[x] == q.max_hops || (x != si && !relay[x]) {
                continue;
            }
            for &(y, snr) in graph.adjacency(x) {
                if snr >= q.snr_min_db && dist[y] == usize::MAX {
                    dist[y] = dist[x] + 1;
                    queue.push_back(y);
                }
            }
        }
        for k in ks {
            let (a, b) = pairs[k];
            out[k] = a != b && graph.index_of(b).is_some_and(|bi| dist[bi] <= q.max_hops);
        }
    }
    // A non-relay destination is fine; only intermediates were filtered.
    out
}

/// Control-plane bookkeeping for one run.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct ControlStats {
    pub messages_issued: u64,
    pub messages_applied: u64,
    pub undeliverable: u64,
    pub protocol_errors: u64,
    pub paths_assigned: u64,
    pub chains_verified: u64,
    pub chains_broken: u64,
    pub rejected_reports: u64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct TraceRecord {
    pub t: f64,
    pub msg_type: &'static str,
    pub source: String,
    pub target: String,
    pub payload_summary: String,
}

#[derive(Debug, Clone)]
pub struct RunOutput {
    /// One record per control tick under the configured relay setting.
    pub records: Vec<MetricsRecord>,
    /// Direct-link-only connectivity on the same graphs, one per record.
    pub direct_connectivity: Vec<f64>,
    pub control: ControlStats,
    pub trace: Vec<TraceRecord>,
}

enum Event {
    Indication(IndicationReport),
    XAppTick {
        tick_time: f64,
    },
    /// Every deliverable message of one xApp tick; they share an arrival time.
    Control {
        batch: Batch,
        msgs: Vec<ControlMessage>,
    },
}

struct Scheduled {
    at: f64,
    seq: u64,
    event: Event,
}

impl PartialEq for Scheduled {
    fn eq(&self, other: &Self) -> bool {
        self.cmp(other) == Ordering::Equal
    }
}
impl Eq for Scheduled {}
impl PartialOrd for Scheduled {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}
impl Ord for Scheduled {
    // min-heap on (at, seq)
    fn cmp(&self, other: &Self) -> Ordering {
        other.at.total_cmp(&self.at).then(other.seq.cmp(&self.seq))
    }
}

#[derive(Default)]
struct EventQueue {
    heap: BinaryHeap<Scheduled>,
    seq: u64,
}

impl EventQueue {
    fn push(&mut self, at: f64, event: Event) {
        self.seq += 1;
        self.heap.push(Scheduled {
            at,
            seq: self.seq,
            event,
        });
    }

    fn pop_before(&mut self, limit: f64) -> Option<(f64, Event)> {
        if self.heap.peek().is_some_and(|s| s.at < limit) {
            self.heap.pop().map(|s| (s.at, s.event))
        } else {
            None
        }
    }
}

struct Batch {
    paths: Vec<(Flow, RelayPath)>,
    lost: Vec<Flow>,
}

/// Runs one simulation and keeps only the configured records.
pub fn run(config: &SimConfig) -> Result<Vec<MetricsRecord>, EngineError> {
    run_detailed(config).map(|o| o.records)
}

/// Runs one simulation.
pub fn run_detailed(config: &SimConfig) -> Result<RunOutput, EngineError> {
    config.validate()?;
    let layout = build_intersection_with(&config.intersection)?;
    let rsus = place_corner_rsus(
        &layout,
        config.ran.rsu_height,
        config.traffic.max_vehicle_height(),
    )?;
    let mut rng = ChaCha8Rng::seed_from_u64(config.seed);
    let vehicles = spawn_vehicles(&layout, &config.traffic, &mut rng)?;
    let mut world = World {
        layout,
        rsus,
        vehicles,
    };

    let cavs = world.cav_ids();
    let pairs: Vec<(NodeId, NodeId)> = cavs
        .iter()
        .enumerate()
        .flat_map(|(i, &a)| cavs[i + 1..].iter().map(move |&b| (a, b)))
        .collect();
    if pairs.is_empty() {
        return Err(config_err(
            "density",
            "fewer than two vehicles were spawned",
        ));
    }

    let xapp = config.effective_xapp();
    let subscription = config.subscription();
    let terminations: Vec<NodeId> = world
        .node_ids()
        .into_iter()
        .filter(|n| config.ran.cav_e2 || n.is_infrastructure())
        .collect();
    let mut nodes: BTreeMap<NodeId, NodeState> = terminations
        .iter()
        .map(|&n| (n, NodeState::new(n, config.ran.forwarding_ttl)))
        .collect();
    let mut ric = RicState::new(config.ran.staleness_window);
    ric.subscriptions.push(subscription.clone());
    let mut inbox: Vec<IndicationReport> = Vec::new();
    let mut queue = EventQueue::default();

    let query = |max_hops| ConnectivityQuery {
        max_hops,
        snr_min_db: xapp.snr_min_db,
        mode: config.metric_mode,
        bs_relay: xapp.bs_relay,
    };
    let relay_query = query(xapp.max_hops);
    let direct_query = query(1);

    let control_every = whole_steps(config.control_period, config.dt).expect("validated");
    let delay = config.ran.control_delay;
    let mut out = RunOutput {
        records: Vec::new(),
        direct_connectivity: Vec::new(),
        control: ControlStats::default(),
        trace: Vec::new(),
    };

    for k in 0..config.ticks() {
        let t = k as f64 * config.dt;
        if k > 0 {
            step_mobility(
                &mut world.vehicles,
                &world.layout,
                config.dt,
                config.traffic.turn_probability,
                &mut rng,
            );
        }
        let mut sensed = if subscription.is_reporting_tick(t, config.dt) {
            sense_all(
                &terminations,
                &world,
                &config.channel,
                config.ran.sensing_range,
                t,
                config.seed,
            )
        } else {
            BTreeMap::new()
        };
        for &id in &terminations {
            let Some(pos) = world.antenna(id) else {
                continue;
            };
            let state = nodes.get_mut(&id).expect("termination state");
            let report = state.emit_indication(t, config.dt, &subscription, pos.xy(), || {
                sensed.remove(&id).unwrap_or_default()
            });
            if let Some(report) = report {
                if config.trace {
                    out.trace.push(TraceRecord {
                        t,
                        msg_type: "indication",
                        source: id.to_string(),
                        target: "ric".into(),
                        payload_summary: format!("links={}", report.links.len()),
                    });
                }
                queue.push(t + delay, Event::Indication(report));
            }
        }
        if k % control_every == 0 {
            queue.push(t + delay, Event::XAppTick { tick_time: t });
        }

        let horizon = t + config.dt;
        while let Some((now, event)) = queue.pop_before(horizon) {
            match event {
                Event::Indication(report) => inbox.push(report),
                Event::XAppTick { tick_time } => {
                    let tick = xapp_tick(&mut ric, &mut inbox, tick_time, &xapp);
                    let relay_c = connectivity(&tick.graph, &pairs, &relay_query)?;
                    let direct_c = connectivity(&tick.graph, &pairs, &direct_query)?;
                    let served: Vec<&RelayPath> =
                        tick.plans.iter().filter_map(|p| p.path.as_ref()).collect();
                    let pairs_direct = served.iter().filter(|p| p.is_direct()).count();
                    let pairs_relayed = served.len() - pairs_direct;
                    let mean_hops = if served.is_empty() {
                        0.0
                    } else {
                        served.iter().map(|p| p.hops() as f64).sum::<f64>() / served.len() as f64
                    };
                    out.records.push(MetricsRecord {
                        t: tick_time,
                        connectivity: relay_c,
                        pairs_total: pairs.len(),
                        pairs_direct,
                        pairs_relayed,
                        mean_hops,
                        p_b: config.channel.blockage_probability,
                        snr_min_db: xapp.snr_min_db,
                    });
                    out.direct_connectivity.push(direct_c);

                    let mut batch = Batch {
                        paths: tick
                            .plans
                            .iter()
                            .filter_map(|p| p.path.clone().map(|path| (p.flow, path)))
                            .filter(|(_, path)| !path.is_direct())
                            .collect(),
                        lost: Vec::new(),
                    };
                    out.control.paths_assigned += batch.paths.len() as u64;
                    let mut deliver = Vec::new();
                    for msg in tick.messages {
                        out.control.messages_issued += 1;
                        if config.trace {
                            out.trace.push(TraceRecord {
                                t: now,
                                msg_type: "control",
                                source: "ric".into(),
                                target: msg.target.to_string(),
                                payload_summary: format!(
                                    "flow={}->{} path={}",
                                    msg.purpose.source,
                                    msg.purpose.destination,
                                    msg.assignment
                                        .nodes
                                        .iter()
                                        .map(NodeId::to_string)
                                        .collect::<Vec<_>>()
                                        .join(">")
                                ),
                            });
                        }
                        if nodes.contains_key(&msg.target) {
                            deliver.push(msg);
                        } else {
                            out.control.undeliverable += 1;
                            batch.lost.push(msg.purpose);
                        }
                    }
                    if deliver.is_empty() {
                        verify_batch(&batch, &nodes, now, &mut out.control);
                    } else {
                        queue.push(
                            now + delay,
                            Event::Control {
                                batch,
                                msgs: deliver,
                            },
                        );
                    }
                }
                Event::Control { batch, msgs } => {
                    for msg in &msgs {
                        let state = nodes.get_mut(&msg.target).expect("deliverable target");
                        match state.apply_control(msg, now) {
                            Ok(_) => out.control.messages_applied += 1,
                            Err(_) => out.control.protocol_errors += 1,
                        }
                    }
                    verify_batch(&batch, &nodes, now, &mut out.control);
                }
            }
        }
        if k % control_every == 0 {
            for state in nodes.values_mut() {
                state.purge_expired(t);
            }
        }
    }
    out.control.rejected_reports = ric.rejected_reports;
    Ok(out)
}

fn verify_batch(
    batch: &Batch,
    nodes: &BTreeMap<NodeId, NodeState>,
    now: f64,
    stats: &mut ControlStats,
) {
    for (flow, path) in &batch.paths {
        if batch.lost.contains(flow) {
            continue;
        }
        if trace_chain(nodes, flow, now, path.hops()) == Some(path.hops()) {
            stats.chains_verified += 1;
        } else {
            stats.chains_broken += 1;
        }
    }
}

/// Mean over records at or after `warmup`; the whole run when it is shorter.
pub fn time_average(times: &[f64], values: &[f64], warmup: f64) -> f64 {
    let kept: Vec<f64> = times
        .iter()
        .zip(values)
        .filter(|(&t, _)| t >= warmup)
        .map(|(_, &v)| v)
        .collect();
    let pool = if kept.is_empty() {
        values.to_vec()
    } else {
        kept
    };
    if pool.is_empty() {
        0.0
    } else {
        pool.iter().sum::<f64>() / pool.len() as f64
    }
}

/// Sample mean and standard deviation (n - 1; zero for one value).
pub fn mean_std(values: &[f64]) -> (f64, f64) {
    let n = values.len() as f64;
    if values.is_empty() {
        return (0.0, 0.0);
    }
    let mean = values.iter().sum::<f64>() / n;
    if values.len() < 2 {
        return (mean, 0.0);
    }
    let var = values.iter().map(|v| (v - mean).powi(2)).sum::<f64>() / (n - 1.0);
    (mean, var.sqrt())
}

#[derive(Debug, Clone)]
pub struct SweepSpec {
    pub snr_values: Vec<f64>,
    pub pb_values: Vec<f64>,
    pub replications: usize,
    pub base: SimConfig,
}

impl SweepSpec {
    pub fn validate(&self) -> Result<(), EngineError> {
        if self.replications < 1 {
            return Err(config_err("replications", "must be >= 1"));
        }
        if self.snr_values.is_empty() {
            return Err(config_err("snr_min", "needs at least one value"));
        }
        if self.pb_values.is_empty() {
            return Err(config_err("p_b", "needs at least one value"));
        }
        self.base.validate()
    }
}

/// One completed run inside a sweep.
#[derive(Debug, Clone)]
pub struct SweepRun {
    pub snr_min_db: f64,
    pub p_b: f64,
    pub replication: usize,
    pub config: SimConfig,
    pub output: RunOutput,
    pub mean_connectivity: f64,
    pub mean_direct: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct CellSummary {
    pub snr_min_db: f64,
    pub p_b: f64,
    pub relay_mean: f64,
    pub relay_std: f64,
    pub direct_mean: f64,
    pub direct_std: f64,
    pub replications: usize,
}

#[derive(Debug, Clone)]
pub struct SweepOutcome {
    /// Cells in (snr_min, p_b) order.
    pub cells: Vec<CellSummary>,
    /// Runs in (cell, replication) order.
    pub runs: Vec<SweepRun>,
}

fn cell_config(base: &SimConfig, snr: f64, p_b: f64, rep: usize) -> SimConfig {
    let mut c = base.clone();
    c.xapp.snr_min_db = snr;
    c.channel.blockage_probability = p_b;
    c.seed = base.seed.wrapping_add(rep as u64);
    c
}

fn run_grid(
    base: &SimConfig,
    cells: &[(f64, f64)],
    replications: usize,
    workers: usize,
) -> Result<SweepOutcome, EngineError> {
    let jobs: Vec<(usize, usize)> = (0..cells.len())
        .flat_map(|c| (0..replications).map(move |r| (c, r)))
        .collect();
    let work = |&(c, r): &(usize, usize)| -> Result<SweepRun, EngineError> {
        let (snr, p_b) = cells[c];
        let config = cell_config(base, snr, p_b, r);
        let output = run_detailed(&config)?;
        let times: Vec<f64> = output.records.iter().map(|m| m.t).collect();
        let relay: Vec<f64> = output.records.iter().map(|m| m.connectivity).collect();
        let mean_connectivity = time_average(&times, &relay, config.warmup);
        let mean_direct = time_average(&times, &output.direct_connectivity, config.warmup);
        Ok(SweepRun {
            snr_min_db: snr,
            p_b,
            replication: r,
            config,
            output,
            mean_connectivity,
            mean_direct,
        })
    };
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(workers.max(1))
        .build()
        .map_err(|e| config_err("workers", e.to_string()))?;
    // collect() keeps job order whatever the worker count
    let runs: Vec<SweepRun> =
        pool.install(|| jobs.par_iter().map(work).collect::<Result<_, _>>())?;

    let summaries = cells
        .iter()
        .enumerate()
        .map(|(c, &(snr, p_b))| {
            let mine = &runs[c * replications..(c + 1) * replications];
            let relay: Vec<f64> = mine.iter().map(|r| r.mean_connectivity).collect();
            let direct: Vec<f64> = mine.iter().map(|r| r.mean_direct).collect();
            let (relay_mean, relay_std) = mean_std(&relay);
            let (direct_mean, direct_std) = mean_std(&direct);
            CellSummary {
                snr_min_db: snr,
                p_b,
                relay_mean,
                relay_std,
                direct_mean,
                direct_std,
                replications,
            }
        })
        .collect();
    Ok(SweepOutcome {
        cells: summaries,
        runs,
    })
}

fn sorted(values: &[f64]) -> Vec<f64> {
    let mut v = values.to_vec();
    v.sort_by(f64::total_cmp);
    v.dedup();
    v
}

/// Connectivity against the SNR threshold at the base blockage probability.
pub fn sweep_snr(spec: &SweepSpec, workers: usize) -> Result<SweepOutcome, EngineError> {
    spec.validate()?;
    let p_b = spec.base.channel.blockage_probability;
    let cells: Vec<(f64, f64)> = sorted(&spec.snr_values)
        .into_iter()
        .map(|s| (s, p_b))
        .collect();
    run_grid(&spec.base, &cells, spec.replications, workers)
}

/// Connectivity over the blockage-probability × SNR-threshold grid.
pub fn sweep_blockage(spec: &SweepSpec, workers: usize) -> Result<SweepOutcome, EngineError> {
    spec.validate()?;
    if !spec.base.channel.blockage_mode.includes_stochastic() {
        return Err(config_err(
            "blockage_mode",
            "blockage sweeps need stochastic or combined mode",
        ));
    }
    let pbs = sorted(&spec.pb_values);
    if let Some(bad) = pbs.iter().find(|p| !(0.0..=1.0).contains(*p)) {
        return Err(config_err("p_b", format!("{bad} is outside [0, 1]")));
    }
    let cells: Vec<(f64, f64)> = sorted(&spec.snr_values)
        .into_iter()
        .flat_map(|s| pbs.iter().map(move |&p| (s, p)))
        .collect();
    run_grid(&spec.base, &cells, spec.replications, workers)
}
