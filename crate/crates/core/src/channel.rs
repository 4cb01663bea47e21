//! Link-level channel: LOS state, 28 GHz urban pathloss, noise floor and SNR.

use std::fmt;
use std::sync::Arc;

use thiserror::Error;

use crate::geom::Vec3;
use crate::ran::NodeId;
use crate::scenario::{RoadLayout, VehicleState, World};

#[derive(Debug, Error, Clone, PartialEq)]
pub enum ChannelError {
    #[error("nodes {0} and {1} share an antenna position")]
    Coincident(NodeId, NodeId),
    #[error("unknown node {0}")]
    UnknownNode(NodeId),
    #[error("invalid value for `{key}`: {reason}")]
    InvalidParameter { key: &'static str, reason: String },
}

/// Pathloss below this distance is evaluated at this distance.
pub const MIN_DISTANCE_M: f64 = 1.0;

/// Pluggable large-scale pathloss.
pub trait Pathloss: Send + Sync {
    fn los(&self, distance_3d: f64, carrier_ghz: f64) -> f64;
    /// `ut_height` is the antenna height of the lower (user-terminal) end.
    fn nlos(&self, distance_3d: f64, carrier_ghz: f64, ut_height: f64) -> f64;
}

/// 3GPP TR 38.901 UMi street canyon: LOS in its pre-breakpoint form, NLOS
/// floored by the LOS value.
#[derive(Debug, Clone, Copy, Default, PartialEq)]
pub struct UmiStreetCanyon;

impl Pathloss for UmiStreetCanyon {
    fn los(&self, distance_3d: f64, carrier_ghz: f64) -> f64 {
        pathloss_los(distance_3d, carrier_ghz)
    }

    fn nlos(&self, distance_3d: f64, carrier_ghz: f64, ut_height: f64) -> f64 {
        pathloss_nlos(distance_3d, carrier_ghz, ut_height)
    }
}

pub fn pathloss_los(distance_3d: f64, carrier_ghz: f64) -> f64 {
    let d = distance_3d.max(MIN_DISTANCE_M);
    32.4 + 21.0 * d.log10() + 20.0 * carrier_ghz.log10()
}

pub fn pathloss_nlos(distance_3d: f64, carrier_ghz: f64, ut_height: f64) -> f64 {
    let d = distance_3d.max(MIN_DISTANCE_M);
    let nlos = 22.4 + 35.3 * d.log10() + 21.3 * carrier_ghz.log10() - 0.3 * (ut_height - 1.5);
    nlos.max(pathloss_los(d, carrier_ghz))
}

#[derive(Clone, Default)]
pub enum PathlossModel {
    #[default]
    UmiStreetCanyon,
    Custom(Arc<dyn Pathloss>),
}

impl PathlossModel {
    fn model(&self) -> &dyn Pathloss {
        match self {
            PathlossModel::UmiStreetCanyon => &UmiStreetCanyon,
            PathlossModel::Custom(m) => m.as_ref(),
        }
    }
}

impl fmt::Debug for PathlossModel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            PathlossModel::UmiStreetCanyon => f.write_str("UmiStreetCanyon"),
            PathlossModel::Custom(_) => f.write_str("Custom(..)"),
        }
    }
}

/// Which blockage processes decide a link's LOS state.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum BlockageMode {
    /// Buildings and vehicle bodies only.
    Geometric,
    /// Per-link Bernoulli outage only; geometry ignored.
    Stochastic,
    /// Geometric visibility AND surviving the Bernoulli draw.
    #[default]
    Combined,
}

impl BlockageMode {
    pub fn includes_stochastic(self) -> bool {
        !matches!(self, BlockageMode::Geometric)
    }

    pub fn as_str(self) -> &'static str {
        match self {
            BlockageMode::Geometric => "geometric",
            BlockageMode::Stochastic => "stochastic",
            BlockageMode::Combined => "combined",
        }
    }
}

impl std::str::FromStr for BlockageMode {
    type Err = String;
    fn from_str(s: &str) -> Result<Self, String> {
        match s {
            "geometric" => Ok(BlockageMode::Geometric),
            "stochastic" => Ok(BlockageMode::Stochastic),
            "combined" => Ok(BlockageMode::Combined),
            other => Err(format!(
                "expected geometric, stochastic or combined, got `{other}`"
            )),
        }
    }
}

#[derive(Debug, Clone)]
pub struct ChannelParams {
    pub carrier_ghz: f64,
    pub eirp_dbm: f64,
    pub bandwidth_hz: f64,
    pub noise_figure_db: f64,
    pub blockage_probability: f64,
    pub blockage_mode: BlockageMode,
    /// Lifts the 23 dBm EIRP cap.
    pub allow_high_eirp: bool,
    pub pathloss: PathlossModel,
}

impl Default for ChannelParams {
    fn default() -> Self {
        Self {
            carrier_ghz: 28.0,
            eirp_dbm: 23.0,
            bandwidth_hz: 100e6,
            noise_figure_db: 9.0,
            blockage_probability: 0.0,
            blockage_mode: BlockageMode::Combined,
            allow_high_eirp: false,
            pathloss: PathlossModel::UmiStreetCanyon,
        }
    }
}

pub const MAX_EIRP_DBM: f64 = 23.0;

impl ChannelParams {
    pub fn validate(&self) -> Result<(), ChannelError> {
        let bad = |key, reason: &str| {
            Err(ChannelError::InvalidParameter {
                key,
                reason: reason.to_string(),
            })
        };
        if !(0.5..=100.0).contains(&self.carrier_ghz) {
            return bad("carrier_ghz", "must be within [0.5, 100] GHz");
        }
        if !self.eirp_dbm.is_finite() || (self.eirp_dbm > MAX_EIRP_DBM && !self.allow_high_eirp) {
            return bad(
                "eirp_dbm",
                "must be finite and at most 23 dBm unless allow_high_eirp is set",
            );
        }
        if !(self.bandwidth_hz.is_finite() && self.bandwidth_hz > 0.0) {
            return bad("bandwidth_hz", "must be > 0");
        }
        if !self.noise_figure_db.is_finite() {
            return bad("noise_figure_db", "must be finite");
        }
        if !(0.0..=1.0).contains(&self.blockage_probability) {
            return bad("p_b", "must be within [0, 1]");
        }
        Ok(())
    }
}

/// Thermal noise over the receiver bandwidth, dBm.
pub fn noise_floor(params: &ChannelParams) -> f64 {
    -174.0 + 10.0 * params.bandwidth_hz.log10() + params.noise_figure_db
}

#[derive(Debug, Clone, PartialEq)]
pub struct LinkSample {
    pub tx: NodeId,
    pub rx: NodeId,
    pub distance_3d: f64,
    pub los: bool,
    /// Stochastic outage: the link is unusable whatever its SNR.
    pub blocked: bool,
    pub pathloss_db: f64,
    pub snr_db: f64,
    pub timestamp: f64,
}

impl LinkSample {
    pub fn usable(&self) -> bool {
        !self.blocked
    }
}

/// True iff the antenna-to-antenna segment clears every building and every
/// vehicle body other than those listed in `endpoints`.
pub fn geometric_los(
    layout: &RoadLayout,
    vehicles: &[VehicleState],
    tx: Vec3,
    rx: Vec3,
    endpoints: &[NodeId],
) -> bool {
    if layout
        .buildings
        .iter()
        .any(|b| b.volume().intersects_segment(tx, rx))
    {
        return false;
    }
    let (lo_x, hi_x) = (tx.x.min(rx.x), tx.x.max(rx.x));
    let (lo_y, hi_y) = (tx.y.min(rx.y), tx.y.max(rx.y));
    let low_z = tx.z.min(rx.z);
    !vehicles.iter().any(|v| {
        if endpoints.contains(&v.id) {
            return false;
        }
        let body = v.body();
        // cheap reject before the slab test
        if body.max.x < lo_x || body.min.x > hi_x || body.max.y < lo_y || body.min.y > hi_y {
            return false;
        }
        if body.max.z < low_z {
            return false;
        }
        body.intersects_segment(tx, rx)
    })
}

/// Unordered link identity, so both directions share one blockage draw.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct LinkKey(NodeId, NodeId);

impl LinkKey {
    pub fn new(a: NodeId, b: NodeId) -> Self {
        if a <= b {
            LinkKey(a, b)
        } else {
            LinkKey(b, a)
        }
    }

    fn bits(self) -> u64 {
        (self.0.packed() << 32) ^ self.1.packed()
    }
}

fn splitmix64(mut z: u64) -> u64 {
    z = z.wrapping_add(0x9E37_79B9_7F4A_7C15);
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}

/// Bernoulli(`p_b`) outage draw, a pure function of `(seed, link, t)`.
pub fn stochastic_blockage(p_b: f64, link: LinkKey, t: f64, seed: u64) -> bool {
    if p_b <= 0.0 {
        return false;
    }
    let tick = (t * 1e6).round() as i64 as u64;
    let h = splitmix64(splitmix64(splitmix64(seed) ^ link.bits()) ^ tick);
    let u = (h >> 11) as f64 * (1.0 / (1u64 << 53) as f64);
    u < p_b
}

/// Measures the link `tx → rx` in `world` at time `t`.
pub fn sample_link(
    params: &ChannelParams,
    world: &World,
    tx: NodeId,
    rx: NodeId,
    t: f64,
    seed: u64,
) -> Result<LinkSample, ChannelError> {
    // Evaluated in a fixed endpoint order so both directions agree bit for bit.
    let (lo, hi) = if tx <= rx { (tx, rx) } else { (rx, tx) };
    let a = world.antenna(lo).ok_or(ChannelError::UnknownNode(lo))?;
    let b = world.antenna(hi).ok_or(ChannelError::UnknownNode(hi))?;
    let distance_3d = a.distance(b);
    if !(distance_3d > 0.0) {
        return Err(ChannelError::Coincident(tx, rx));
    }
    let visible = || geometric_los(&world.layout, &world.vehicles, a, b, &[lo, hi]);
    let draw = || stochastic_blockage(params.blockage_probability, LinkKey::new(tx, rx), t, seed);
    let (los, blocked) = match params.blockage_mode {
        BlockageMode::Geometric => (visible(), false),
        BlockageMode::Stochastic => {
            let blocked = draw();
            (!blocked, blocked)
        }
        BlockageMode::Combined => {
            let blocked = draw();
            (!blocked && visible(), blocked)
        }
    };
    let model = params.pathloss.model();
    let pathloss_db = if los {
        model.los(distance_3d, params.carrier_ghz)
    } else {
        model.nlos(distance_3d, params.carrier_ghz, a.z.min(b.z))
    };
    Ok(LinkSample {
        tx,
        rx,
        distance_3d,
        los,
        blocked,
        pathloss_db,
        snr_db: params.eirp_dbm - pathloss_db - noise_floor(params),
        timestamp: t,
    })
}
