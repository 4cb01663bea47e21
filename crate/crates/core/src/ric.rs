//! Near-RT RIC hosting the relay-assignment xApp.
//!
//! The xApp keeps the latest indication per node, builds an SNR-thresholded
//! connectivity graph from the fresh ones, and for every served pair picks
//! the hop-bounded path with the widest bottleneck. Ties go to fewer hops,
//! then to the lexicographically smallest node sequence.

use std::collections::{BTreeMap, BTreeSet, VecDeque};

use thiserror::Error;

use crate::ran::{ControlMessage, Flow, IndicationReport, NodeId, NodeKind, SubscriptionRequest};

#[derive(Debug, Error, Clone, PartialEq)]
pub enum RicError {
    #[error("report from {node} at t={got} is older than the stored one at t={stored}")]
    OutOfOrder { node: NodeId, stored: f64, got: f64 },
    #[error("path endpoints coincide ({0})")]
    SameEndpoints(NodeId),
}

#[derive(Debug, Clone, PartialEq)]
pub struct RelayPath {
    pub nodes: Vec<NodeId>,
    pub bottleneck_snr: f64,
}

impl RelayPath {
    pub fn hops(&self) -> usize {
        self.nodes.len().saturating_sub(1)
    }

    pub fn source(&self) -> NodeId {
        self.nodes[0]
    }

    pub fn destination(&self) -> NodeId {
        *self.nodes.last().expect("path has at least two nodes")
    }

    pub fn is_direct(&self) -> bool {
        self.nodes.len() == 2
    }
}

#[derive(Debug, Clone, PartialEq, Default)]
pub enum PairPolicy {
    #[default]
    AllCavPairs,
    Listed(Vec<(NodeId, NodeId)>),
}

#[derive(Debug, Clone, PartialEq)]
pub struct XAppConfig {
    pub snr_min_db: f64,
    pub max_hops: usize,
    pub pair_policy: PairPolicy,
    pub bs_relay: bool,
}

impl Default for XAppConfig {
    fn default() -> Self {
        Self {
            snr_min_db: 10.0,
            max_hops: 4,
            pair_policy: PairPolicy::AllCavPairs,
            bs_relay: false,
        }
    }
}

impl XAppConfig {
    pub fn validate(&self) -> Result<(), String> {
        if self.max_hops < 1 {
            return Err("max_hops must be >= 1".into());
        }
        if !self.snr_min_db.is_finite() {
            return Err("snr_min must be finite".into());
        }
        Ok(())
    }

    pub fn relay_eligible(&self, n: NodeId) -> bool {
        n.kind != NodeKind::Bs || self.bs_relay
    }
}

#[derive(Debug, Clone, Default)]
pub struct RicState {
    pub latest_report: BTreeMap<NodeId, IndicationReport>,
    pub staleness_window: f64,
    pub subscriptions: Vec<SubscriptionRequest>,
    pub rejected_reports: u64,
}

impl RicState {
    pub fn new(staleness_window: f64) -> Self {
        Self {
            staleness_window,
            ..Self::default()
        }
    }

    /// Keeps the newest report per source; older arrivals are rejected.
    pub fn ingest(&mut self, report: IndicationReport) -> Result<(), RicError> {
        if let Some(stored) = self.latest_report.get(&report.source) {
            if report.timestamp < stored.timestamp {
                self.rejected_reports += 1;
                return Err(RicError::OutOfOrder {
                    node: report.source,
                    stored: stored.timestamp,
                    got: report.timestamp,
                });
            }
        }
        self.latest_report.insert(report.source, report);
        Ok(())
    }

    pub fn is_fresh(&self, node: NodeId, t: f64) -> bool {
        self.latest_report
            .get(&node)
            .is_some_and(|r| t - r.timestamp <= self.staleness_window)
    }
}

/// Undirected SNR-weighted graph. Nodes are kept sorted by [`NodeId`] and each
/// adjacency list is sorted by neighbour, so index order is NodeId order.
#[derive(Debug, Clone, PartialEq, Default)]
pub struct ConnectivityGraph {
    nodes: Vec<NodeId>,
    adjacency: Vec<Vec<(usize, f64)>>,
}

impl ConnectivityGraph {
    /// Self-loops are dropped; a repeated edge keeps its smaller SNR.
    pub fn from_edges(
        nodes: impl IntoIterator<Item = NodeId>,
        edges: impl IntoIterator<Item = (NodeId, NodeId, f64)>,
    ) -> Self {
        let mut set: BTreeSet<NodeId> = nodes.into_iter().collect();
        let mut unique: BTreeMap<(NodeId, NodeId), f64> = BTreeMap::new();
        for (a, b, snr) in edges {
            if a == b {
                continue;
            }
            set.insert(a);
            set.insert(b);
            let key = if a < b { (a, b) } else { (b, a) };
            unique
                .entry(key)
                .and_modify(|s| *s = s.min(snr))
                .or_insert(snr);
        }
        let nodes: Vec<NodeId> = set.into_iter().collect();
        let mut adjacency = vec![Vec::new(); nodes.len()];
        for ((a, b), snr) in unique {
            let ia = nodes.binary_search(&a).expect("inserted");
            let ib = nodes.binary_search(&b).expect("inserted");
            adjacency[ia].push((ib, snr));
            adjacency[ib].push((ia, snr));
        }
        for list in &mut adjacency {
            list.sort_by_key(|&(j, _)| j);
        }
        Self { nodes, adjacency }
    }

    pub fn nodes(&self) -> &[NodeId] {
        &self.nodes
    }

    pub fn node_count(&self) -> usize {
        self.nodes.len()
    }

    pub fn edge_count(&self) -> usize {
        self.adjacency.iter().map(Vec::len).sum::<usize>() / 2
    }

    pub fn index_of(&self, n: NodeId) -> Option<usize> {
        self.nodes.binary_search(&n).ok()
    }

    pub fn contains(&self, n: NodeId) -> bool {
        self.index_of(n).is_some()
    }

    pub fn edge_snr(&self, a: NodeId, b: NodeId) -> Option<f64> {
        let (ia, ib) = (self.index_of(a)?, self.index_of(b)?);
        self.adjacency[ia]
            .binary_search_by_key(&ib, |&(j, _)| j)
            .ok()
            .map(|k| self.adjacency[ia][k].1)
    }

    /// Edges as `(a, b, snr)` with `a < b`, in order.
    pub fn edges(&self) -> impl Iterator<Item = (NodeId, NodeId, f64)> + '_ {
        self.adjacency
            .iter()
            .enumerate()
            .flat_map(move |(i, list)| {
                list.iter()
                    .filter(move |&&(j, _)| j > i)
                    .map(move |&(j, snr)| (self.nodes[i], self.nodes[j], snr))
            })
    }

    pub(crate) fn adjacency(&self, i: usize) -> &[(usize, f64)] {
        &self.adjacency[i]
    }
}

/// Edge `{u, v}` exists iff some fresh, usable sample meets `snr_min` after
/// taking the minimum over the directions that were reported. Both endpoints
/// need fresh reports unless one of them is infrastructure.
pub fn build_graph(state: &RicState, t: f64, snr_min: f64) -> ConnectivityGraph {
    let mut universe: Vec<NodeId> = state.latest_report.keys().copied().collect();
    universe.extend(
        state
            .latest_report
            .values()
            .flat_map(|r| r.links.iter().map(|l| l.rx)),
    );
    universe.sort();
    universe.dedup();
    let n = universe.len();
    let at = |id: NodeId| universe.binary_search(&id).expect("collected above");

    // directed[u * n + v]: weakest usable sample u reported towards v
    let mut directed: Vec<Option<f64>> = vec![None; n * n];
    for report in state.latest_report.values() {
        if !state.is_fresh(report.source, t) {
            continue;
        }
        let u = report.source;
        for link in report.links.iter().filter(|l| l.usable() && l.rx != u) {
            let v = link.rx;
            if !(u.is_infrastructure() || v.is_infrastructure() || state.is_fresh(v, t)) {
                continue;
            }
            let cell = &mut directed[at(u) * n + at(v)];
            *cell = Some(cell.map_or(link.snr_db, |s| s.min(link.snr_db)));
        }
    }
    let edge = |i: usize, j: usize| -> Option<f64> {
        let both = match (directed[i * n + j], directed[j * n + i]) {
            (Some(a), Some(b)) => a.min(b),
            (Some(a), None) | (None, Some(a)) => a,
            (None, None) => return None,
        };
        (both >= snr_min).then_some(both)
    };

    let mut keep: Vec<bool> = universe
        .iter()
        .map(|id| state.latest_report.contains_key(id))
        .collect();
    for i in 0..n {
        for j in i + 1..n {
            if edge(i, j).is_some() {
                keep[i] = true;
                keep[j] = true;
            }
        }
    }
    let mut remap = vec![usize::MAX; n];
    let mut nodes = Vec::new();
    for i in (0..n).filter(|&i| keep[i]) {
        remap[i] = nodes.len();
        nodes.push(universe[i]);
    }
    let adjacency = (0..n)
        .filter(|&i| keep[i])
        .map(|i| {
            (0..n)
                .filter(|&j| j != i)
                .filter_map(|j| edge(i, j).map(|snr| (remap[j], snr)))
                .collect()
        })
        .collect();
    ConnectivityGraph { nodes, adjacency }
}

/// Widest path from `s` to `d` with at most `max_hops` hops over edges of at
/// least `snr_min`; every node may relay.
pub fn find_path(
    g: &ConnectivityGraph,
    s: NodeId,
    d: NodeId,
    max_hops: usize,
    snr_min: f64,
) -> Result<Option<RelayPath>, RicError> {
    find_path_with(g, s, d, max_hops, snr_min, |_| true)
}

/// [`find_path`] where intermediate nodes must satisfy `eligible`.
pub fn find_path_with(
    g: &ConnectivityGraph,
    s: NodeId,
    d: NodeId,
    max_hops: usize,
    snr_min: f64,
    eligible: impl Fn(NodeId) -> bool,
) -> Result<Option<RelayPath>, RicError> {
    if s == d {
        return Err(RicError::SameEndpoints(s));
    }
    let (Some(si), Some(di)) = (g.index_of(s), g.index_of(d)) else {
        return Ok(None);
    };
    let relay: Vec<bool> = g.nodes.iter().map(|&n| eligible(n)).collect();
    let best = widest_from(g, si, max_hops, snr_min, &relay);
    Ok(route(g, si, di, best[di], snr_min, &relay))
}

/// Best bottleneck from `si` to every node over walks of at most `max_hops`
/// hops whose inner nodes are relays. A walk's bottleneck never beats the
/// simple path hidden inside it, and a walk that touches its own endpoint
/// early is dominated by its prefix, so one pass serves every destination.
fn widest_from(
    g: &ConnectivityGraph,
    si: usize,
    max_hops: usize,
    snr_min: f64,
    relay: &[bool],
) -> Vec<f64> {
    let n = g.node_count();
    let mut best = vec![f64::NEG_INFINITY; n];
    best[si] = f64::INFINITY;
    let mut prev = best.clone();
    for _ in 0..max_hops {
        prev.copy_from_slice(&best);
        for u in 0..n {
            if prev[u] == f64::NEG_INFINITY || !(u == si || relay[u]) {
                continue;
            }
            for &(v, snr) in g.adjacency(u) {
                if snr < snr_min {
                    continue;
                }
                let b = prev[u].min(snr);
                if b > best[v] {
                    best[v] = b;
                }
            }
        }
    }
    best
}

/// Fewest-hop, lexicographically first path from `si` to `di` whose edges
/// all reach `bottleneck`.
fn route(
    g: &ConnectivityGraph,
    si: usize,
    di: usize,
    bottleneck: f64,
    snr_min: f64,
    relay: &[bool],
) -> Option<RelayPath> {
    if bottleneck == f64::NEG_INFINITY {
        return None;
    }
    let floor = bottleneck.max(snr_min);
    let inner = |x: usize| x != si && x != di && relay[x];

    // Hop distance to d at the optimum, entering relays only. Every layer
    // nearer than s is complete once s is labelled.
    let mut dist = vec![usize::MAX; g.node_count()];
    dist[di] = 0;
    let mut queue = VecDeque::from([di]);
    'bfs: while let Some(x) = queue.pop_front() {
        if x != di && !inner(x) {
            continue;
        }
        for &(y, snr) in g.adjacency(x) {
            if snr >= floor && dist[y] == usize::MAX {
                dist[y] = dist[x] + 1;
                if y == si {
                    break 'bfs;
                }
                queue.push_back(y);
            }
        }
    }
    let hops = dist[si];

    // Smallest neighbour that stays on a shortest route gives the
    // lexicographically first sequence.
    let mut nodes = Vec::with_capacity(hops + 1);
    nodes.push(g.nodes[si]);
    let mut cur = si;
    for remaining in (0..hops).rev() {
        let &(next, _) = g
            .adjacency(cur)
            .iter()
            .find(|&&(y, snr)| snr >= floor && dist[y] == remaining && (y == di || inner(y)))
            .expect("a shortest continuation exists");
        nodes.push(g.nodes[next]);
        cur = next;
    }
    Some(RelayPath {
        nodes,
        bottleneck_snr: bottleneck,
    })
}

/// Outcome of the xApp for one served pair.
#[derive(Debug, Clone, PartialEq)]
pub struct PairPlan {
    pub flow: Flow,
    pub path: Option<RelayPath>,
}

fn served_pairs(g: &ConnectivityGraph, policy: &PairPolicy) -> Vec<Flow> {
    let mut flows: Vec<Flow> = match policy {
        PairPolicy::AllCavPairs => {
            let cavs: Vec<NodeId> = g
                .nodes()
                .iter()
                .copied()
                .filter(|n| n.kind == NodeKind::Cav)
                .collect();
            cavs.iter()
                .enumerate()
                .flat_map(|(i, &a)| {
                    cavs[i + 1..].iter().map(move |&b| Flow {
                        source: a,
                        destination: b,
                    })
                })
                .collect()
        }
        PairPolicy::Listed(pairs) => pairs
            .iter()
            .filter(|(a, b)| a != b)
            .map(|&(a, b)| {
                let (source, destination) = if a < b { (a, b) } else { (b, a) };
                Flow {
                    source,
                    destination,
                }
            })
            .collect(),
    };
    flows.sort();
    flows.dedup();
    flows
}

pub fn plan_pairs(g: &ConnectivityGraph, cfg: &XAppConfig) -> Vec<PairPlan> {
    let relay: Vec<bool> = g.nodes.iter().map(|&n| cfg.relay_eligible(n)).collect();
    let mut cached: Option<(usize, Vec<f64>)> = None;
    served_pairs(g, &cfg.pair_policy)
        .into_iter()
        .map(|flow| {
            let (Some(si), Some(di)) = (g.index_of(flow.source), g.index_of(flow.destination))
            else {
                return PairPlan { flow, path: None };
            };
            if cached.as_ref().is_none_or(|(at, _)| *at != si) {
                cached = Some((si, widest_from(g, si, cfg.max_hops, cfg.snr_min_db, &relay)));
            }
            let best = &cached.as_ref().expect("filled above").1;
            PairPlan {
                flow,
                path: route(g, si, di, best[di], cfg.snr_min_db, &relay),
            }
        })
        .collect()
}

/// One message per upstream node of every multi-hop plan, in (pair, position) order.
pub fn control_messages(plans: &[PairPlan], t: f64) -> Vec<ControlMessage> {
    plans
        .iter()
        .filter_map(|p| p.path.as_ref().map(|path| (p.flow, path)))
        .filter(|(_, path)| !path.is_direct())
        .flat_map(|(flow, path)| {
            path.nodes[..path.nodes.len() - 1]
                .iter()
                .map(move |&target| ControlMessage {
                    target,
                    issued_at: t,
                    assignment: path.clone(),
                    purpose: flow,
                })
        })
        .collect()
}

pub fn assign_relays(state: &RicState, t: f64, cfg: &XAppConfig) -> Vec<ControlMessage> {
    let g = build_graph(state, t, cfg.snr_min_db);
    control_messages(&plan_pairs(&g, cfg), t)
}

#[derive(Debug, Clone, PartialEq, Default)]
pub struct XAppDiagnostics {
    pub t: f64,
    pub graph_nodes: usize,
    pub graph_edges: usize,
    pub pairs_total: usize,
    pub pairs_direct: usize,
    pub pairs_relayed: usize,
    pub pairs_infeasible: usize,
    pub messages: usize,
    pub rejected_reports: u64,
}

impl XAppDiagnostics {
    pub fn pairs_served(&self) -> usize {
        self.pairs_direct + self.pairs_relayed
    }
}

#[derive(Debug, Clone)]
pub struct TickOutput {
    pub messages: Vec<ControlMessage>,
    pub diagnostics: XAppDiagnostics,
    pub graph: ConnectivityGraph,
    pub plans: Vec<PairPlan>,
}

/// Drains `inbox` into `state` then runs graph construction and relay assignment.
pub fn xapp_tick(
    state: &mut RicState,
    inbox: &mut Vec<IndicationReport>,
    t: f64,
    cfg: &XAppConfig,
) -> TickOutput {
    for report in inbox.drain(..) {
        // rejections are only counted
        let _ = state.ingest(report);
    }
    let graph = build_graph(state, t, cfg.snr_min_db);
    let plans = plan_pairs(&graph, cfg);
    let messages = control_messages(&plans, t);
    let mut diagnostics = XAppDiagnostics {
        t,
        graph_nodes: graph.node_count(),
        graph_edges: graph.edge_count(),
        pairs_total: plans.len(),
        messages: messages.len(),
        rejected_reports: state.rejected_reports,
        ..XAppDiagnostics::default()
    };
    for plan in &plans {
        match &plan.path {
            None => diagnostics.pairs_infeasible += 1,
            Some(p) if p.is_direct() => diagnostics.pairs_direct += 1,
            Some(_) => diagnostics.pairs_relayed += 1,
        }
    }
    TickOutput {
        messages,
        diagnostics,
        graph,
        plans,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::channel::LinkSample;
    use crate::geom::Vec2;

    fn link(tx: NodeId, rx: NodeId, snr: f64, t: f64) -> LinkSample {
        LinkSample {
            tx,
            rx,
            distance_3d: 10.0,
            los: true,
            blocked: false,
            pathloss_db: 100.0,
            snr_db: snr,
            timestamp: t,
        }
    }

    fn report(source: NodeId, t: f64, links: Vec<LinkSample>) -> IndicationReport {
        IndicationReport {
            source,
            timestamp: t,
            position: Vec2::default(),
            links,
        }
    }

    const A: NodeId = NodeId::cav(0);
    const B: NodeId = NodeId::cav(1);
    const C: NodeId = NodeId::cav(2);

    #[test]
    fn ingest_ordering_and_staleness() {
        let mut st = RicState::new(0.5);
        st.ingest(report(A, 1.0, vec![])).unwrap();
        st.ingest(report(A, 2.0, vec![])).unwrap();
        assert!(matches!(
            st.ingest(report(A, 1.0, vec![])),
            Err(RicError::OutOfOrder { .. })
        ));
        assert_eq!(st.rejected_reports, 1);
        assert_eq!(st.latest_report[&A].timestamp, 2.0);
        assert!(st.is_fresh(A, 2.5));
        assert!(!st.is_fresh(A, 3.0));
    }

    #[test]
    fn graph_edges_from_reports() {
        let mut st = RicState::new(1.0);
        st.ingest(report(A, 0.0, vec![link(A, B, 10.0, 0.0)]))
            .unwrap();
        st.ingest(report(B, 0.0, vec![])).unwrap();
        let g = build_graph(&st, 0.0, 5.0);
        assert_eq!(g.edge_count(), 1);
        assert_eq!(g.edge_snr(B, A), Some(10.0));

        st.ingest(report(B, 0.0, vec![link(B, A, 3.0, 0.0)]))
            .unwrap();
        assert_eq!(build_graph(&st, 0.0, 5.0).edge_count(), 0);

        let g = build_graph(&st, 5.0, -100.0);
        assert_eq!(g.edge_count(), 0);
        assert_eq!(g.node_count(), 2);
    }

    #[test]
    fn stale_cav_endpoint_drops_the_edge_but_rsu_does_not() {
        let r = NodeId::rsu(0);
        let mut st = RicState::new(0.5);
        st.ingest(report(B, 0.0, vec![])).unwrap();
        st.ingest(report(
            A,
            2.0,
            vec![link(A, B, 20.0, 2.0), link(A, r, 20.0, 2.0)],
        ))
        .unwrap();
        let g = build_graph(&st, 2.0, 0.0);
        assert_eq!(g.edge_snr(A, B), None);
        assert_eq!(g.edge_snr(A, r), Some(20.0));
    }

    #[test]
    fn blocked_samples_do_not_count() {
        let mut st = RicState::new(1.0);
        let mut l = link(A, B, 30.0, 0.0);
        l.blocked = true;
        st.ingest(report(A, 0.0, vec![l])).unwrap();
        st.ingest(report(B, 0.0, vec![])).unwrap();
        assert_eq!(build_graph(&st, 0.0, 0.0).edge_count(), 0);
    }

    #[test]
    fn direct_edge() {
        let g = ConnectivityGraph::from_edges([], [(A, B, 12.0)]);
        let p = find_path(&g, A, B, 4, 5.0).unwrap().unwrap();
        assert_eq!(p.nodes, vec![A, B]);
        assert_eq!(p.bottleneck_snr, 12.0);
    }

    #[test]
    fn relay_beats_weak_direct_edge() {
        let g = ConnectivityGraph::from_edges([], [(A, C, 4.0), (A, B, 9.0), (B, C, 7.0)]);
        let p = find_path(&g, A, C, 4, 5.0).unwrap().unwrap();
        assert_eq!(p.nodes, vec![A, B, C]);
        assert_eq!(p.bottleneck_snr, 7.0);
    }

    #[test]
    fn hop_bound_makes_long_chain_infeasible() {
        let n: Vec<NodeId> = (0..6).map(NodeId::cav).collect();
        let edges: Vec<_> = n.windows(2).map(|w| (w[0], w[1], 20.0)).collect();
        let g = ConnectivityGraph::from_edges(n.clone(), edges);
        assert_eq!(find_path(&g, n[0], n[5], 4, 0.0).unwrap(), None);
        assert_eq!(
            find_path(&g, n[0], n[5], 5, 0.0).unwrap().unwrap().hops(),
            5
        );
        assert!(matches!(
            find_path(&g, n[0], n[0], 4, 0.0),
            Err(RicError::SameEndpoints(_))
        ));
    }

    #[test]
    fn ties_prefer_fewer_hops_then_smaller_ids() {
        let d = NodeId::cav(9);
        // bottleneck 5 on the first edge; every continuation ties
        let g = ConnectivityGraph::from_edges(
            [],
            [
                (A, d, 5.0),
                (A, C, 5.0),
                (C, d, 30.0),
                (A, B, 5.0),
                (B, d, 30.0),
            ],
        );
        assert_eq!(
            find_path(&g, A, d, 4, 0.0).unwrap().unwrap().nodes,
            vec![A, d]
        );
        let g = ConnectivityGraph::from_edges(
            [],
            [(A, C, 5.0), (C, d, 30.0), (A, B, 5.0), (B, d, 30.0)],
        );
        assert_eq!(
            find_path(&g, A, d, 4, 0.0).unwrap().unwrap().nodes,
            vec![A, B, d]
        );
    }

    #[test]
    fn ineligible_relays_are_skipped() {
        let bs = NodeId::bs(0);
        let g = ConnectivityGraph::from_edges([], [(A, bs, 20.0), (bs, B, 20.0)]);
        let cfg = XAppConfig::default();
        let p = find_path_with(&g, A, B, 4, 0.0, |n| cfg.relay_eligible(n)).unwrap();
        assert_eq!(p, None);
        assert!(find_path(&g, A, B, 4, 0.0).unwrap().is_some());
    }

    #[test]
    fn fanout_per_pair() {
        let plans = vec![
            PairPlan {
                flow: Flow {
                    source: A,
                    destination: C,
                },
                path: Some(RelayPath {
                    nodes: vec![A, B, C],
                    bottleneck_snr: 7.0,
                }),
            },
            PairPlan {
                flow: Flow {
                    source: A,
                    destination: B,
                },
                path: Some(RelayPath {
                    nodes: vec![A, B],
                    bottleneck_snr: 9.0,
                }),
            },
        ];
        let msgs = control_messages(&plans, 1.0);
        let targets: Vec<NodeId> = msgs.iter().map(|m| m.target).collect();
        assert_eq!(targets, vec![A, B]);
    }

    #[test]
    fn three_disjoint_relayed_pairs_give_six_messages() {
        let ids: Vec<NodeId> = (0..9).map(NodeId::cav).collect();
        let mut edges = Vec::new();
        let mut pairs = Vec::new();
        for k in 0..3 {
            let (s, r, d) = (ids[3 * k], ids[3 * k + 1], ids[3 * k + 2]);
            edges.push((s, r, 15.0));
            edges.push((r, d, 15.0));
            pairs.push((s, d));
        }
        let g = ConnectivityGraph::from_edges([], edges);
        let cfg = XAppConfig {
            snr_min_db: 10.0,
            pair_policy: PairPolicy::Listed(pairs),
            ..XAppConfig::default()
        };
        let msgs = control_messages(&plan_pairs(&g, &cfg), 0.0);
        assert_eq!(msgs.len(), 6);
        let order: Vec<(NodeId, NodeId)> =
            msgs.iter().map(|m| (m.purpose.source, m.target)).collect();
        assert_eq!(
            order,
            vec![
                (ids[0], ids[0]),
                (ids[0], ids[1]),
                (ids[3], ids[3]),
                (ids[3], ids[4]),
                (ids[6], ids[6]),
                (ids[6], ids[7]),
            ]
        );
    }

    #[test]
    fn empty_and_saturated_ticks() {
        let cfg = XAppConfig::default();
        let mut st = RicState::new(0.5);
        let out = xapp_tick(&mut st, &mut Vec::new(), 0.0, &cfg);
        assert!(out.messages.is_empty());
        assert_eq!(out.diagnostics.graph_nodes, 0);

        let mut inbox = vec![
            report(A, 0.0, vec![link(A, B, 12.0, 0.0), link(A, C, 11.0, 0.0)]),
            report(B, 0.0, vec![link(B, A, 12.0, 0.0)]),
            report(C, 0.0, vec![]),
        ];
        let high = XAppConfig {
            snr_min_db: 50.0,
            ..cfg
        };
        let out = xapp_tick(&mut st, &mut inbox, 0.0, &high);
        assert!(inbox.is_empty());
        assert_eq!(out.diagnostics.pairs_total, 3);
        assert_eq!(out.diagnostics.pairs_infeasible, 3);
        assert!(out.messages.is_empty());
    }
}
