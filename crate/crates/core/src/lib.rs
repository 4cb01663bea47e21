//! Discrete-time simulation of RIC-controlled vehicle-to-vehicle relaying at
//! an urban mmWave intersection.
//!
//! The pipeline runs [`scenario`] (layout and mobility) through [`channel`]
//! (link budget and blockage), [`ran`] (per-node E2-style agents) and [`ric`]
//! (near-RT RIC state and the widest-path relay xApp). [`engine`] drives the
//! loop and collects connectivity metrics; [`cli`] wraps it all for the
//! `oran-v2x` binary.

// Negated comparisons below are deliberate: they also reject NaN.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod channel;
pub mod cli;
pub mod engine;
pub mod geom;
pub mod ran;
pub mod ric;
pub mod scenario;

pub use channel::{sample_link, BlockageMode, ChannelError, ChannelParams, LinkSample};
pub use engine::{
    run, run_detailed, sweep_blockage, sweep_snr, EngineError, MetricMode, SimConfig,
};
pub use ran::{NodeId, NodeKind};
pub use ric::{find_path, ConnectivityGraph, RelayPath, XAppConfig};
pub use scenario::{build_intersection, RoadLayout, World};
