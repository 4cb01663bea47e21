//! RAN side of the control loop: node identities, the E2-style messages that
//! flow between nodes and the RIC, and per-node forwarding state.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

use thiserror::Error;

use crate::channel::{sample_link, ChannelParams, LinkSample};
use crate::geom::Vec2;
use crate::ric::RelayPath;
use crate::scenario::World;

/// Ordered BS < RSU < CAV, then by index.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum NodeKind {
    Bs,
    Rsu,
    Cav,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct NodeId {
    pub kind: NodeKind,
    pub index: u32,
}

impl NodeId {
    pub const fn new(kind: NodeKind, index: u32) -> Self {
        Self { kind, index }
    }

    pub const fn cav(index: u32) -> Self {
        Self::new(NodeKind::Cav, index)
    }

    pub const fn rsu(index: u32) -> Self {
        Self::new(NodeKind::Rsu, index)
    }

    pub const fn bs(index: u32) -> Self {
        Self::new(NodeKind::Bs, index)
    }

    pub fn is_infrastructure(self) -> bool {
        matches!(self.kind, NodeKind::Rsu | NodeKind::Bs)
    }

    pub(crate) fn packed(self) -> u64 {
        ((self.kind as u64) << 32) | self.index as u64
    }
}

impl fmt::Display for NodeId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let kind = match self.kind {
            NodeKind::Bs => "bs",
            NodeKind::Rsu => "rsu",
            NodeKind::Cav => "cav",
        };
        write!(f, "{kind}{}", self.index)
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct SubscriptionRequest {
    pub subscriber: String,
    /// Seconds between indications.
    pub reporting_period: f64,
    /// Strongest links kept per indication.
    pub measured_neighbors: usize,
}

impl SubscriptionRequest {
    pub fn validate(&self, dt: f64) -> Result<(), String> {
        if !(self.reporting_period >= dt - 1e-12) {
            return Err(format!(
                "reporting_period {} must be at least the time step {dt}",
                self.reporting_period
            ));
        }
        if self.measured_neighbors == 0 {
            return Err("measured_neighbors must be >= 1".into());
        }
        Ok(())
    }

    /// `t` is within half a step of a multiple of the reporting period.
    pub fn is_reporting_tick(&self, t: f64, dt: f64) -> bool {
        let nearest = (t / self.reporting_period).round() * self.reporting_period;
        (t - nearest).abs() < dt / 2.0
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct IndicationReport {
    pub source: NodeId,
    pub timestamp: f64,
    pub position: Vec2,
    pub links: Vec<LinkSample>,
}

/// Unordered source–destination pair a relay path serves.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Flow {
    pub source: NodeId,
    pub destination: NodeId,
}

#[derive(Debug, Clone, PartialEq)]
pub struct ControlMessage {
    pub target: NodeId,
    pub issued_at: f64,
    pub assignment: RelayPath,
    pub purpose: Flow,
}

#[derive(Debug, Clone, PartialEq)]
pub struct ForwardingEntry {
    pub destination: NodeId,
    pub next_hop: NodeId,
    pub installed_at: f64,
    pub expires_at: f64,
    /// `issued_at` of the message that installed this entry.
    pub issued_at: f64,
}

#[derive(Debug, Error, Clone, PartialEq)]
pub enum ControlError {
    #[error("control message for {target} delivered to {node}")]
    WrongTarget { node: NodeId, target: NodeId },
    #[error("{0} is not an upstream hop on the assigned path")]
    NotOnPath(NodeId),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ControlOutcome {
    Installed,
    /// Older than the entry already installed for the flow.
    IgnoredStale,
}

/// State owned by one E2 termination.
#[derive(Debug, Clone)]
pub struct NodeState {
    pub id: NodeId,
    pub forwarding: BTreeMap<Flow, ForwardingEntry>,
    pub entry_ttl: f64,
    pub protocol_errors: u64,
    pub stale_ignored: u64,
    last_indication: Option<f64>,
}

impl NodeState {
    pub fn new(id: NodeId, entry_ttl: f64) -> Self {
        Self {
            id,
            forwarding: BTreeMap::new(),
            entry_ttl,
            protocol_errors: 0,
            stale_ignored: 0,
            last_indication: None,
        }
    }

    /// Builds an indication when `t` is a reporting tick, keeping the
    /// `measured_neighbors` strongest links (ties by receiver id). `sense` is
    /// only evaluated on reporting ticks.
    pub fn emit_indication(
        &mut self,
        t: f64,
        dt: f64,
        subscription: &SubscriptionRequest,
        position: Vec2,
        sense: impl FnOnce() -> Vec<LinkSample>,
    ) -> Option<IndicationReport> {
        if !subscription.is_reporting_tick(t, dt) {
            return None;
        }
        if self
            .last_indication
            .is_some_and(|last| (last - t).abs() < dt / 2.0)
        {
            return None;
        }
        let mut links = sense();
        if links.len() > subscription.measured_neighbors {
            links.sort_by(|a, b| b.snr_db.total_cmp(&a.snr_db).then(a.rx.cmp(&b.rx)));
            links.truncate(subscription.measured_neighbors);
        }
        links.sort_by_key(|l| l.rx);
        self.last_indication = Some(t);
        Some(IndicationReport {
            source: self.id,
            timestamp: t,
            position,
            links,
        })
    }

    /// Installs the successor of this node on the assigned path.
    pub fn apply_control(
        &mut self,
        msg: &ControlMessage,
        t: f64,
    ) -> Result<ControlOutcome, ControlError> {
        let result = self.try_apply(msg, t);
        if result.is_err() {
            self.protocol_errors += 1;
        }
        result
    }

    fn try_apply(&mut self, msg: &ControlMessage, t: f64) -> Result<ControlOutcome, ControlError> {
        if msg.target != self.id {
            return Err(ControlError::WrongTarget {
                node: self.id,
                target: msg.target,
            });
        }
        let nodes = &msg.assignment.nodes;
        let pos = nodes
            .iter()
            .position(|&n| n == self.id)
            .filter(|&i| i + 1 < nodes.len())
            .ok_or(ControlError::NotOnPath(self.id))?;
        if let Some(current) = self.forwarding.get(&msg.purpose) {
            if msg.issued_at < current.issued_at {
                self.stale_ignored += 1;
                return Ok(ControlOutcome::IgnoredStale);
            }
        }
        let destination = *nodes.last().expect("non-empty path");
        self.forwarding.insert(
            msg.purpose,
            ForwardingEntry {
                destination,
                next_hop: nodes[pos + 1],
                installed_at: t,
                expires_at: t + self.entry_ttl,
                issued_at: msg.issued_at,
            },
        );
        Ok(ControlOutcome::Installed)
    }

    /// Live next hop for `flow` at time `t`.
    pub fn next_hop(&self, flow: &Flow, t: f64) -> Option<NodeId> {
        self.forwarding
            .get(flow)
            .filter(|e| t < e.expires_at)
            .map(|e| e.next_hop)
    }

    pub fn purge_expired(&mut self, t: f64) {
        self.forwarding.retain(|_, e| t < e.expires_at);
    }
}

/// One sample per other node within `range` metres (inclusive), in NodeId order.
pub fn sense_neighbors(
    node: NodeId,
    world: &World,
    params: &ChannelParams,
    range: f64,
    t: f64,
    seed: u64,
) -> Vec<LinkSample> {
    let Some(here) = world.antenna(node) else {
        return Vec::new();
    };
    world
        .node_ids()
        .into_iter()
        .filter(|&other| other != node)
        .filter(|&other| {
            world
                .antenna(other)
                .is_some_and(|p| here.distance(p) <= range)
        })
        .filter_map(|other| sample_link(params, world, node, other, t, seed).ok())
        .collect()
}

/// [`sense_neighbors`] for every node in `sources` at once. Each unordered
/// link is sampled a single time and mirrored, which gives the same lists.
pub fn sense_all(
    sources: &[NodeId],
    world: &World,
    params: &ChannelParams,
    range: f64,
    t: f64,
    seed: u64,
) -> BTreeMap<NodeId, Vec<LinkSample>> {
    let all = world.node_ids();
    let wanted: BTreeSet<NodeId> = sources.iter().copied().collect();
    let mut out: BTreeMap<NodeId, Vec<LinkSample>> =
        sources.iter().map(|&n| (n, Vec::new())).collect();
    for (i, &a) in all.iter().enumerate() {
        let Some(pa) = world.antenna(a) else { continue };
        for &b in &all[i + 1..] {
            let (wa, wb) = (wanted.contains(&a), wanted.contains(&b));
            if !(wa || wb) {
                continue;
            }
            let Some(pb) = world.antenna(b) else { continue };
            if pa.distance(pb) > range {
                continue;
            }
            let Ok(sample) = sample_link(params, world, a, b, t, seed) else {
                continue;
            };
            if wb {
                let mut back = sample.clone();
                std::mem::swap(&mut back.tx, &mut back.rx);
                out.get_mut(&b).expect("wanted").push(back);
            }
            if wa {
                out.get_mut(&a).expect("wanted").push(sample);
            }
        }
    }
    for links in out.values_mut() {
        links.sort_by_key(|l| l.rx);
    }
    out
}

/// Follows `next_hop` pointers for `flow` from its source. Returns the hop
/// count when the destination is reached within `limit` steps.
pub fn trace_chain(
    nodes: &BTreeMap<NodeId, NodeState>,
    flow: &Flow,
    t: f64,
    limit: usize,
) -> Option<usize> {
    let mut at = flow.source;
    for hops in 1..=limit {
        at = nodes.get(&at)?.next_hop(flow, t)?;
        if at == flow.destination {
            return Some(hops);
        }
    }
    None
}
