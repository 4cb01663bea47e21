//! Urban four-way intersection: road layout, corner buildings, RSUs and
//! lane-following vehicle mobility.
//!
//! All randomness flows through a caller-provided generator so that a
//! scenario is fully determined by its configuration and seed.

use rand::Rng;
use rand_distr::{Distribution, Poisson};
use thiserror::Error;

use crate::geom::{Aabb, Rect, Vec2, Vec3};
use crate::ran::{NodeId, NodeKind};

#[derive(Debug, Error, Clone, PartialEq)]
pub enum ScenarioError {
    #[error("invalid value for `{key}`: {reason}")]
    InvalidParameter { key: &'static str, reason: String },
    #[error("infeasible traffic: {0}")]
    Infeasible(String),
}

fn invalid(key: &'static str, reason: impl Into<String>) -> ScenarioError {
    ScenarioError::InvalidParameter {
        key,
        reason: reason.into(),
    }
}

/// Direction a road runs in.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Axis {
    X,
    Y,
}

impl Axis {
    pub fn other(self) -> Axis {
        match self {
            Axis::X => Axis::Y,
            Axis::Y => Axis::X,
        }
    }
}

/// Travel direction; always parallel to a road axis.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Heading {
    East,
    West,
    North,
    South,
}

impl Heading {
    pub fn unit(self) -> Vec2 {
        match self {
            Heading::East => Vec2::new(1.0, 0.0),
            Heading::West => Vec2::new(-1.0, 0.0),
            Heading::North => Vec2::new(0.0, 1.0),
            Heading::South => Vec2::new(0.0, -1.0),
        }
    }

    pub fn axis(self) -> Axis {
        match self {
            Heading::East | Heading::West => Axis::X,
            Heading::North | Heading::South => Axis::Y,
        }
    }

    fn along(axis: Axis, forward: bool) -> Heading {
        match (axis, forward) {
            (Axis::X, true) => Heading::East,
            (Axis::X, false) => Heading::West,
            (Axis::Y, true) => Heading::North,
            (Axis::Y, false) => Heading::South,
        }
    }
}

/// Straight road segment with its centerline on `offset` of the cross axis.
#[derive(Debug, Clone, PartialEq)]
pub struct RoadSegment {
    pub axis: Axis,
    pub offset: f64,
    pub start: f64,
    pub end: f64,
    pub width: f64,
    pub lanes: u32,
}

impl RoadSegment {
    pub fn length(&self) -> f64 {
        self.end - self.start
    }

    pub fn surface(&self) -> Rect {
        let half = self.width / 2.0;
        match self.axis {
            Axis::X => Rect::new(
                Vec2::new(self.start, self.offset - half),
                Vec2::new(self.end, self.offset + half),
            ),
            Axis::Y => Rect::new(
                Vec2::new(self.offset - half, self.start),
                Vec2::new(self.offset + half, self.end),
            ),
        }
    }

    /// Lane geometry for right-hand traffic: the first half of the lanes runs
    /// in the positive axis direction on the right of the centerline.
    pub fn lane(&self, index: u32) -> Lane {
        let per_dir = self.lanes / 2;
        let lane_width = self.width / self.lanes as f64;
        let forward = index < per_dir;
        let slot = (index % per_dir) as f64 + 0.5;
        // Right of a +x traveller is -y; right of a +y traveller is +x.
        let side = match (self.axis, forward) {
            (Axis::X, true) | (Axis::Y, false) => -1.0,
            (Axis::X, false) | (Axis::Y, true) => 1.0,
        };
        Lane {
            heading: Heading::along(self.axis, forward),
            offset: self.offset + side * slot * lane_width,
        }
    }
}

/// A lane is a directed line at `offset` on the cross axis of its heading.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Lane {
    pub heading: Heading,
    pub offset: f64,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct LaneRef {
    pub road: usize,
    pub lane: u32,
}

#[derive(Debug, Clone, PartialEq)]
pub struct Building {
    pub footprint: Rect,
    pub height: f64,
}

impl Building {
    pub fn volume(&self) -> Aabb {
        self.footprint.extrude(self.height)
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct RoadLayout {
    pub roads: Vec<RoadSegment>,
    pub buildings: Vec<Building>,
    pub extent: Rect,
}

/// Geometry knobs for [`build_intersection_with`].
#[derive(Debug, Clone, PartialEq)]
pub struct IntersectionSpec {
    pub arm_length: f64,
    pub road_width: f64,
    pub building_setback: f64,
    pub lanes_per_road: u32,
    pub building_height: f64,
}

impl Default for IntersectionSpec {
    fn default() -> Self {
        Self {
            arm_length: 200.0,
            road_width: 14.0,
            building_setback: 2.0,
            lanes_per_road: 4,
            building_height: 20.0,
        }
    }
}

/// Two orthogonal roads crossing at the origin with one building per quadrant.
pub fn build_intersection(
    arm_length: f64,
    road_width: f64,
    building_setback: f64,
) -> Result<RoadLayout, ScenarioError> {
    build_intersection_with(&IntersectionSpec {
        arm_length,
        road_width,
        building_setback,
        ..IntersectionSpec::default()
    })
}

pub fn build_intersection_with(spec: &IntersectionSpec) -> Result<RoadLayout, ScenarioError> {
    let IntersectionSpec {
        arm_length: arm,
        road_width: width,
        building_setback: setback,
        lanes_per_road: lanes,
        building_height,
    } = *spec;
    if !(arm.is_finite() && arm > 0.0) {
        return Err(invalid("arm_length", "must be > 0"));
    }
    if !(width.is_finite() && width > 0.0) {
        return Err(invalid("road_width", "must be > 0"));
    }
    if !(setback.is_finite() && setback >= 0.0) {
        return Err(invalid("building_setback", "must be >= 0"));
    }
    if lanes < 2 || lanes % 2 != 0 {
        return Err(invalid("lanes", "must be an even number >= 2"));
    }
    if !(building_height.is_finite() && building_height > 0.0) {
        return Err(invalid("building_height", "must be > 0"));
    }
    let inner = width / 2.0 + setback;
    if inner >= arm {
        return Err(invalid(
            "arm_length",
            "must exceed half the road width plus the building setback",
        ));
    }

    let roads = [Axis::X, Axis::Y]
        .into_iter()
        .map(|axis| RoadSegment {
            axis,
            offset: 0.0,
            start: -arm,
            end: arm,
            width,
            lanes,
        })
        .collect();
    let buildings = [(1.0, 1.0), (-1.0, 1.0), (-1.0, -1.0), (1.0, -1.0)]
        .into_iter()
        .map(|(sx, sy)| Building {
            footprint: Rect::new(
                Vec2::new(sx * inner, sy * inner),
                Vec2::new(sx * arm, sy * arm),
            ),
            height: building_height,
        })
        .collect();
    let layout = RoadLayout {
        roads,
        buildings,
        extent: Rect::new(Vec2::new(-arm, -arm), Vec2::new(arm, arm)),
    };
    debug_assert!(layout.check_invariants().is_ok());
    Ok(layout)
}

impl RoadLayout {
    pub fn total_road_length(&self) -> f64 {
        self.roads.iter().map(RoadSegment::length).sum()
    }

    pub fn on_road(&self, p: Vec2) -> bool {
        self.roads.iter().any(|r| r.surface().contains(p))
    }

    pub fn lanes(&self) -> impl Iterator<Item = LaneRef> + '_ {
        self.roads
            .iter()
            .enumerate()
            .flat_map(|(road, r)| (0..r.lanes).map(move |lane| LaneRef { road, lane }))
    }

    pub fn lane(&self, r: LaneRef) -> Lane {
        self.roads[r.road].lane(r.lane)
    }

    /// Cross-road half width seen by a vehicle travelling on `road`.
    fn crossing_half_width(&self, road: usize) -> f64 {
        self.roads
            .iter()
            .enumerate()
            .find(|(i, _)| *i != road)
            .map(|(_, r)| r.width / 2.0)
            .unwrap_or(0.0)
    }

    pub fn check_invariants(&self) -> Result<(), String> {
        if self.roads.len() != 2 || self.roads[0].axis == self.roads[1].axis {
            return Err("layout needs exactly two orthogonal roads".into());
        }
        let centre = match self.roads[0].axis {
            Axis::X => Vec2::new(self.roads[1].offset, self.roads[0].offset),
            Axis::Y => Vec2::new(self.roads[0].offset, self.roads[1].offset),
        };
        if !self.extent.contains(centre) {
            return Err("roads must cross inside the extent".into());
        }
        for b in &self.buildings {
            if self
                .roads
                .iter()
                .any(|r| r.surface().overlaps(&b.footprint))
            {
                return Err("building overlaps a road surface".into());
            }
        }
        Ok(())
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct RsuNode {
    pub id: NodeId,
    pub position: Vec2,
    pub height: f64,
}

impl RsuNode {
    pub fn antenna(&self) -> Vec3 {
        self.position.with_z(self.height)
    }
}

/// One RSU on each corner, halfway between the kerb and the building line.
pub fn place_corner_rsus(
    layout: &RoadLayout,
    height: f64,
    max_vehicle_height: f64,
) -> Result<Vec<RsuNode>, ScenarioError> {
    if !(height > max_vehicle_height) {
        return Err(invalid(
            "rsu_height",
            format!("must exceed the tallest vehicle ({max_vehicle_height} m)"),
        ));
    }
    let half = layout
        .roads
        .iter()
        .map(|r| r.width / 2.0)
        .fold(0.0, f64::max);
    let setback = layout
        .buildings
        .iter()
        .map(|b| b.footprint.min.x.abs().min(b.footprint.max.x.abs()) - half)
        .fold(f64::INFINITY, f64::min);
    let setback = if setback.is_finite() {
        setback.max(0.0)
    } else {
        0.0
    };
    let c = half + setback / 2.0;
    Ok([(1.0, 1.0), (-1.0, 1.0), (-1.0, -1.0), (1.0, -1.0)]
        .into_iter()
        .enumerate()
        .map(|(i, (sx, sy))| RsuNode {
            id: NodeId::rsu(i as u32),
            position: Vec2::new(sx * c, sy * c),
            height,
        })
        .collect())
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct VehicleExtent {
    pub length: f64,
    pub width: f64,
    pub height: f64,
}

impl Default for VehicleExtent {
    fn default() -> Self {
        Self {
            length: 5.0,
            width: 2.0,
            height: 1.6,
        }
    }
}

/// Where a vehicle is in its passage through the intersection.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Crossing {
    Approaching,
    /// Will turn onto `to` when its signed along-track coordinate reaches `at`.
    Turning {
        at: f64,
        to: LaneRef,
    },
    Done,
}

#[derive(Debug, Clone, PartialEq)]
pub struct VehicleState {
    pub id: NodeId,
    pub position: Vec2,
    pub antenna_height: f64,
    pub speed: f64,
    pub heading: Heading,
    pub extent: VehicleExtent,
    pub lane: LaneRef,
    pub crossing: Crossing,
}

impl VehicleState {
    pub fn antenna(&self) -> Vec3 {
        self.position.with_z(self.antenna_height)
    }

    /// Oriented body box (axis-aligned because headings are).
    pub fn body(&self) -> Aabb {
        let (hx, hy) = match self.heading.axis() {
            Axis::X => (self.extent.length / 2.0, self.extent.width / 2.0),
            Axis::Y => (self.extent.width / 2.0, self.extent.length / 2.0),
        };
        Aabb {
            min: Vec3::new(self.position.x - hx, self.position.y - hy, 0.0),
            max: Vec3::new(
                self.position.x + hx,
                self.position.y + hy,
                self.extent.height,
            ),
        }
    }

    /// Coordinate along the direction of travel, zero at the crossing.
    fn signed_along(&self) -> f64 {
        self.position.dot(self.heading.unit())
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct TrafficConfig {
    /// Vehicles per km of road.
    pub density: f64,
    /// m/s
    pub speed: f64,
    pub seed: u64,
    pub tall_fraction: f64,
    pub turn_probability: f64,
    pub car: VehicleExtent,
    pub truck_height: f64,
    pub antenna_height: f64,
}

impl Default for TrafficConfig {
    fn default() -> Self {
        Self {
            density: 50.0,
            speed: 10.0,
            seed: 1,
            tall_fraction: 0.1,
            turn_probability: 0.25,
            car: VehicleExtent::default(),
            truck_height: 4.0,
            antenna_height: 1.6,
        }
    }
}

impl TrafficConfig {
    pub fn validate(&self) -> Result<(), ScenarioError> {
        if !(1.0..=500.0).contains(&self.density) {
            return Err(invalid("density", "must be within [1, 500] veh/km"));
        }
        if !(self.speed > 0.0 && self.speed <= 40.0) {
            return Err(invalid("speed", "must be within (0, 40] m/s"));
        }
        if !(0.0..=1.0).contains(&self.tall_fraction) {
            return Err(invalid("tall_fraction", "must be within [0, 1]"));
        }
        if !(0.0..=1.0).contains(&self.turn_probability) {
            return Err(invalid("turn_probability", "must be within [0, 1]"));
        }
        let c = self.car;
        if !(c.length > 0.0 && c.width > 0.0 && c.height > 0.0) {
            return Err(invalid("vehicle_length", "vehicle extent must be positive"));
        }
        if !(self.truck_height >= c.height) {
            return Err(invalid("truck_height", "must be at least the car height"));
        }
        if !(self.antenna_height > 0.0) {
            return Err(invalid("vehicle_antenna_height", "must be > 0"));
        }
        Ok(())
    }

    pub fn max_vehicle_height(&self) -> f64 {
        if self.tall_fraction > 0.0 {
            self.truck_height.max(self.car.height)
        } else {
            self.car.height
        }
    }
}

/// Highest mean lane occupancy (vehicle lengths per lane length) accepted by
/// [`spawn_vehicles`]; random sequential packing jams well below 1.
const MAX_LANE_OCCUPANCY: f64 = 0.5;
const SPAWN_ATTEMPTS: usize = 1000;

/// Poisson number of vehicles with mean `density × road km`, placed uniformly
/// along uniformly chosen lanes with at least one vehicle length of spacing.
pub fn spawn_vehicles<R: Rng>(
    layout: &RoadLayout,
    cfg: &TrafficConfig,
    rng: &mut R,
) -> Result<Vec<VehicleState>, ScenarioError> {
    cfg.validate()?;
    let lanes: Vec<LaneRef> = layout.lanes().collect();
    if lanes.is_empty() {
        return Err(ScenarioError::Infeasible("layout has no lanes".into()));
    }
    let lane_length_total: f64 = layout
        .roads
        .iter()
        .map(|r| r.length() * r.lanes as f64)
        .sum();
    let mean = cfg.density * layout.total_road_length() / 1000.0;
    let occupancy = mean * cfg.car.length / lane_length_total;
    if occupancy > MAX_LANE_OCCUPANCY {
        return Err(ScenarioError::Infeasible(format!(
            "density {} veh/km needs lane occupancy {occupancy:.2} (max {MAX_LANE_OCCUPANCY})",
            cfg.density
        )));
    }
    let count = Poisson::new(mean)
        .map_err(|e| invalid("density", e.to_string()))?
        .sample(rng) as usize;

    let mut vehicles: Vec<VehicleState> = Vec::with_capacity(count);
    for i in 0..count {
        let mut placed = None;
        for _ in 0..SPAWN_ATTEMPTS {
            let lane_ref = lanes[rng.random_range(0..lanes.len())];
            let road = &layout.roads[lane_ref.road];
            let s = rng.random_range(road.start..road.end);
            let clear = vehicles
                .iter()
                .filter(|v| v.lane == lane_ref)
                .all(|v| (coordinate_on(v.position, road.axis) - s).abs() >= cfg.car.length);
            if clear {
                placed = Some((lane_ref, s));
                break;
            }
        }
        let Some((lane_ref, s)) = placed else {
            return Err(ScenarioError::Infeasible(format!(
                "could not place vehicle {i} with {} m spacing",
                cfg.car.length
            )));
        };
        let tall = rng.random_bool(cfg.tall_fraction);
        vehicles.push(new_vehicle(
            layout,
            cfg,
            NodeId::cav(i as u32),
            lane_ref,
            s,
            tall,
        ));
    }
    Ok(vehicles)
}

fn coordinate_on(p: Vec2, axis: Axis) -> f64 {
    match axis {
        Axis::X => p.x,
        Axis::Y => p.y,
    }
}

fn lane_point(lane: Lane, s: f64) -> Vec2 {
    match lane.heading.axis() {
        Axis::X => Vec2::new(s, lane.offset),
        Axis::Y => Vec2::new(lane.offset, s),
    }
}

fn new_vehicle(
    layout: &RoadLayout,
    cfg: &TrafficConfig,
    id: NodeId,
    lane_ref: LaneRef,
    s: f64,
    tall: bool,
) -> VehicleState {
    let lane = layout.lane(lane_ref);
    let mut extent = cfg.car;
    if tall {
        extent.height = cfg.truck_height;
    }
    let mut v = VehicleState {
        id,
        position: lane_point(lane, s),
        antenna_height: cfg.antenna_height,
        speed: cfg.speed,
        heading: lane.heading,
        extent,
        lane: lane_ref,
        crossing: Crossing::Approaching,
    };
    if v.signed_along() >= -layout.crossing_half_width(lane_ref.road) {
        v.crossing = Crossing::Done;
    }
    v
}

/// Constant-speed lane following. Vehicles entering the crossing turn onto a
/// uniformly chosen perpendicular lane with probability `turn_probability`;
/// vehicles leaving the extent re-enter at the start of a uniformly chosen lane.
pub fn step_mobility<R: Rng>(
    vehicles: &mut [VehicleState],
    layout: &RoadLayout,
    dt: f64,
    turn_probability: f64,
    rng: &mut R,
) {
    for v in vehicles.iter_mut() {
        advance(v, layout, v.speed * dt, turn_probability, rng);
        if !layout.extent.contains(v.position) {
            respawn(v, layout, rng);
        }
    }
}

fn advance<R: Rng>(
    v: &mut VehicleState,
    layout: &RoadLayout,
    mut remaining: f64,
    turn_probability: f64,
    rng: &mut R,
) {
    loop {
        let s = v.signed_along();
        if v.crossing == Crossing::Approaching {
            let entry = -layout.crossing_half_width(v.lane.road);
            if s + remaining < entry {
                break;
            }
            v.crossing = Crossing::Done;
            if rng.random_bool(turn_probability) {
                let cross_road = (v.lane.road + 1) % layout.roads.len();
                let lanes = layout.roads[cross_road].lanes;
                let to = LaneRef {
                    road: cross_road,
                    lane: rng.random_range(0..lanes),
                };
                let target = layout.lane(to);
                // The target lane line crosses our path at this along-track value.
                let at = target.offset * sign_of(v.heading);
                v.crossing = Crossing::Turning { at, to };
            }
            continue;
        }
        if let Crossing::Turning { at, to } = v.crossing {
            if s + remaining >= at {
                let target = layout.lane(to);
                let here = coordinate_on(v.position, target.heading.axis());
                let corner = lane_point(target, here);
                remaining -= (at - s).max(0.0);
                v.position = corner;
                v.heading = target.heading;
                v.lane = to;
                v.crossing = Crossing::Done;
                continue;
            }
        }
        break;
    }
    v.position = v.position + v.heading.unit() * remaining;
}

fn sign_of(h: Heading) -> f64 {
    match h {
        Heading::East | Heading::North => 1.0,
        Heading::West | Heading::South => -1.0,
    }
}

fn respawn<R: Rng>(v: &mut VehicleState, layout: &RoadLayout, rng: &mut R) {
    let lanes: Vec<LaneRef> = layout.lanes().collect();
    let lane_ref = lanes[rng.random_range(0..lanes.len())];
    let road = &layout.roads[lane_ref.road];
    let lane = layout.lane(lane_ref);
    let s = if sign_of(lane.heading) > 0.0 {
        road.start
    } else {
        road.end
    };
    v.position = lane_point(lane, s);
    v.heading = lane.heading;
    v.lane = lane_ref;
    v.crossing = Crossing::Approaching;
}

/// Complete snapshot of everything that can carry or block a signal.
#[derive(Debug, Clone)]
pub struct World {
    pub layout: RoadLayout,
    pub rsus: Vec<RsuNode>,
    pub vehicles: Vec<VehicleState>,
}

impl World {
    /// Antenna position of a node; `None` for unknown ids.
    pub fn antenna(&self, id: NodeId) -> Option<Vec3> {
        let i = id.index as usize;
        match id.kind {
            NodeKind::Cav => self
                .vehicles
                .get(i)
                .filter(|v| v.id == id)
                .map(VehicleState::antenna),
            NodeKind::Rsu => self
                .rsus
                .get(i)
                .filter(|r| r.id == id)
                .map(RsuNode::antenna),
            NodeKind::Bs => None,
        }
    }

    /// Every node in NodeId order.
    pub fn node_ids(&self) -> Vec<NodeId> {
        let mut ids: Vec<NodeId> = self
            .rsus
            .iter()
            .map(|r| r.id)
            .chain(self.vehicles.iter().map(|v| v.id))
            .collect();
        ids.sort();
        ids
    }

    pub fn cav_ids(&self) -> Vec<NodeId> {
        self.vehicles.iter().map(|v| v.id).collect()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn default_intersection_geometry() {
        let layout = build_intersection(200.0, 14.0, 2.0).unwrap();
        assert_eq!(
            layout.extent,
            Rect::new(Vec2::new(-200.0, -200.0), Vec2::new(200.0, 200.0))
        );
        assert_eq!(layout.buildings.len(), 4);
        for b in &layout.buildings {
            let near_x = b.footprint.min.x.abs().min(b.footprint.max.x.abs());
            let near_y = b.footprint.min.y.abs().min(b.footprint.max.y.abs());
            assert_eq!(near_x, 9.0);
            assert_eq!(near_y, 9.0);
        }
        assert!(layout.check_invariants().is_ok());
        assert_eq!(layout.total_road_length(), 800.0);
    }

    #[test]
    fn zero_setback_is_flush_with_kerb() {
        let layout = build_intersection(100.0, 10.0, 0.0).unwrap();
        for b in &layout.buildings {
            assert_eq!(b.footprint.min.x.abs().min(b.footprint.max.x.abs()), 5.0);
            assert_eq!(b.footprint.min.y.abs().min(b.footprint.max.y.abs()), 5.0);
        }
        assert!(layout.check_invariants().is_ok());
    }

    #[test]
    fn bad_geometry_is_rejected() {
        assert!(matches!(
            build_intersection(-1.0, 10.0, 0.0),
            Err(ScenarioError::InvalidParameter {
                key: "arm_length",
                ..
            })
        ));
        assert!(build_intersection(100.0, 0.0, 0.0).is_err());
        assert!(build_intersection(100.0, 10.0, -0.5).is_err());
    }

    #[test]
    fn lanes_sit_on_the_right() {
        let layout = build_intersection(200.0, 14.0, 2.0).unwrap();
        let ns = layout.roads.iter().position(|r| r.axis == Axis::Y).unwrap();
        let north = layout.roads[ns].lane(0);
        assert_eq!(north.heading, Heading::North);
        assert_eq!(north.offset, 1.75);
        let south = layout.roads[ns].lane(3);
        assert_eq!(south.heading, Heading::South);
        assert_eq!(south.offset, -5.25);
    }

    #[test]
    fn spawn_is_deterministic_and_spaced() {
        let layout = build_intersection(200.0, 14.0, 2.0).unwrap();
        let cfg = TrafficConfig::default();
        let a = spawn_vehicles(&layout, &cfg, &mut ChaCha8Rng::seed_from_u64(7)).unwrap();
        let b = spawn_vehicles(&layout, &cfg, &mut ChaCha8Rng::seed_from_u64(7)).unwrap();
        assert_eq!(a, b);
        for (i, v) in a.iter().enumerate() {
            assert!(layout.on_road(v.position));
            for w in &a[i + 1..] {
                if v.lane == w.lane {
                    assert!(v.position.distance(w.position) >= cfg.car.length);
                }
            }
        }
    }

    #[test]
    fn mean_count_tracks_density() {
        let layout = build_intersection(200.0, 14.0, 2.0).unwrap();
        let cfg = TrafficConfig::default();
        let total: usize = (0..1000)
            .map(|seed| {
                spawn_vehicles(&layout, &cfg, &mut ChaCha8Rng::seed_from_u64(seed))
                    .unwrap()
                    .len()
            })
            .sum();
        let mean = total as f64 / 1000.0;
        assert!((mean - 40.0).abs() <= 2.0, "mean count {mean}");
    }

    #[test]
    fn overpacked_lanes_are_infeasible() {
        let layout = build_intersection_with(&IntersectionSpec {
            lanes_per_road: 2,
            ..Default::default()
        })
        .unwrap();
        let cfg = TrafficConfig {
            density: 500.0,
            ..TrafficConfig::default()
        };
        assert!(matches!(
            spawn_vehicles(&layout, &cfg, &mut ChaCha8Rng::seed_from_u64(1)),
            Err(ScenarioError::Infeasible(_))
        ));
    }

    fn lone_vehicle(layout: &RoadLayout, pos: Vec2) -> VehicleState {
        let ns = layout.roads.iter().position(|r| r.axis == Axis::Y).unwrap();
        VehicleState {
            id: NodeId::cav(0),
            position: pos,
            antenna_height: 1.6,
            speed: 10.0,
            heading: Heading::North,
            extent: VehicleExtent::default(),
            lane: LaneRef { road: ns, lane: 0 },
            crossing: Crossing::Approaching,
        }
    }

    #[test]
    fn straight_motion() {
        let layout = build_intersection(200.0, 14.0, 2.0).unwrap();
        let mut v = vec![lone_vehicle(&layout, Vec2::new(0.0, -50.0))];
        step_mobility(&mut v, &layout, 1.0, 0.0, &mut ChaCha8Rng::seed_from_u64(0));
        assert_eq!(v[0].position, Vec2::new(0.0, -40.0));
    }

    #[test]
    fn small_steps_match_one_big_step() {
        let layout = build_intersection(200.0, 14.0, 2.0).unwrap();
        let mut fine = vec![lone_vehicle(&layout, Vec2::new(1.75, -50.0))];
        let mut coarse = fine.clone();
        let mut rng = ChaCha8Rng::seed_from_u64(0);
        for _ in 0..10 {
            step_mobility(&mut fine, &layout, 0.1, 0.5, &mut rng);
        }
        step_mobility(&mut coarse, &layout, 1.0, 0.5, &mut rng);
        assert!(fine[0].position.distance(coarse[0].position) < 1e-9);
    }

    #[test]
    fn exiting_vehicle_respawns_inside() {
        let layout = build_intersection(200.0, 14.0, 2.0).unwrap();
        let mut v = vec![lone_vehicle(&layout, Vec2::new(1.75, 199.5))];
        v[0].crossing = Crossing::Done;
        step_mobility(&mut v, &layout, 1.0, 0.0, &mut ChaCha8Rng::seed_from_u64(3));
        assert!(layout.extent.contains(v[0].position));
        assert!(layout.on_road(v[0].position));
        assert_eq!(v[0].heading, layout.lane(v[0].lane).heading);
    }

    #[test]
    fn turning_vehicle_ends_on_the_cross_road() {
        let layout = build_intersection(200.0, 14.0, 2.0).unwrap();
        let mut v = vec![lone_vehicle(&layout, Vec2::new(1.75, -20.0))];
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        for _ in 0..40 {
            step_mobility(&mut v, &layout, 0.1, 1.0, &mut rng);
        }
        assert_eq!(v[0].heading.axis(), Axis::X);
        let lane = layout.lane(v[0].lane);
        assert_eq!(lane.heading, v[0].heading);
        assert!((v[0].position.y - lane.offset).abs() < 1e-12);
        assert!(layout.on_road(v[0].position));
    }

    #[test]
    fn corner_rsus_clear_the_buildings() {
        let layout = build_intersection(200.0, 14.0, 2.0).unwrap();
        let rsus = place_corner_rsus(&layout, 6.0, 4.0).unwrap();
        assert_eq!(rsus.len(), 4);
        for r in &rsus {
            assert_eq!(r.position.x.abs(), 8.0);
            assert!(layout.extent.contains(r.position));
            assert!(layout
                .buildings
                .iter()
                .all(|b| !b.footprint.contains(r.position)));
        }
        assert!(place_corner_rsus(&layout, 3.0, 4.0).is_err());
    }
}
