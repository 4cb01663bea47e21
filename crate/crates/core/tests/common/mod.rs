//! Oracles shared by the integration tests.

#![allow(dead_code)]

use std::collections::BTreeMap;

use oran_v2x::ric::ConnectivityGraph;
use oran_v2x::NodeId;
use rand::Rng;

/// Best path by exhaustive enumeration of simple paths: widest bottleneck,
/// then fewest hops, then the lexicographically smallest node sequence.
pub fn brute_force_path(
    g: &ConnectivityGraph,
    s: NodeId,
    d: NodeId,
    max_hops: usize,
    snr_min: f64,
    eligible: &dyn Fn(NodeId) -> bool,
) -> Option<(f64, Vec<NodeId>)> {
    let mut adj: BTreeMap<NodeId, Vec<(NodeId, f64)>> = BTreeMap::new();
    for (a, b, snr) in g.edges() {
        if snr >= snr_min {
            adj.entry(a).or_default().push((b, snr));
            adj.entry(b).or_default().push((a, snr));
        }
    }
    let mut best: Option<(f64, Vec<NodeId>)> = None;
    let mut stack = vec![s];
    walk(
        &adj,
        d,
        max_hops,
        eligible,
        &mut stack,
        f64::INFINITY,
        &mut best,
    );
    best
}

fn better(a: &(f64, Vec<NodeId>), b: &(f64, Vec<NodeId>)) -> bool {
    if a.0 != b.0 {
        return a.0 > b.0;
    }
    if a.1.len() != b.1.len() {
        return a.1.len() < b.1.len();
    }
    a.1 < b.1
}

fn walk(
    adj: &BTreeMap<NodeId, Vec<(NodeId, f64)>>,
    d: NodeId,
    max_hops: usize,
    eligible: &dyn Fn(NodeId) -> bool,
    stack: &mut Vec<NodeId>,
    bottleneck: f64,
    best: &mut Option<(f64, Vec<NodeId>)>,
) {
    let here = *stack.last().expect("non-empty");
    if here == d {
        let found = (bottleneck, stack.clone());
        if best.as_ref().is_none_or(|b| better(&found, b)) {
            *best = Some(found);
        }
        return;
    }
    if stack.len() > max_hops {
        return;
    }
    if stack.len() > 1 && !eligible(here) {
        return;
    }
    for &(next, snr) in adj.get(&here).map(Vec::as_slice).unwrap_or(&[]) {
        if stack.contains(&next) {
            continue;
        }
        stack.push(next);
        walk(adj, d, max_hops, eligible, stack, bottleneck.min(snr), best);
        stack.pop();
    }
}

/// Random graph of at most `max_nodes` CAV/RSU nodes. Every other graph uses
/// whole-dB weights so that ties are common.
pub fn random_graph<R: Rng>(rng: &mut R, max_nodes: usize) -> (ConnectivityGraph, Vec<NodeId>) {
    let n = rng.random_range(2..=max_nodes);
    let mut nodes: Vec<NodeId> = (0..n as u32)
        .map(|i| {
            if rng.random_bool(0.25) {
                NodeId::rsu(i)
            } else {
                NodeId::cav(i)
            }
        })
        .collect();
    nodes.sort();
    let density = rng.random_range(0.2..0.9);
    let quantized = rng.random_bool(0.5);
    let mut edges = Vec::new();
    for i in 0..n {
        for j in i + 1..n {
            if rng.random_bool(density) {
                let snr = if quantized {
                    rng.random_range(0..=20) as f64
                } else {
                    rng.random_range(-5.0..30.0)
                };
                edges.push((nodes[i], nodes[j], snr));
            }
        }
    }
    (ConnectivityGraph::from_edges(nodes.clone(), edges), nodes)
}
