//! Builds the default four-arm intersection, drops traffic on it and follows
//! the vehicles for a few seconds.
//!
//! cargo run --example intersection_layout

use oran_v2x::scenario::{
    build_intersection_with, place_corner_rsus, spawn_vehicles, step_mobility, Crossing,
    IntersectionSpec, TrafficConfig,
};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let spec = IntersectionSpec::default();
    let layout = build_intersection_with(&spec)?;
    println!(
        "extent {:?} .. {:?}, {} m of road",
        layout.extent.min,
        layout.extent.max,
        layout.total_road_length()
    );
    for (i, road) in layout.roads.iter().enumerate() {
        let lanes: Vec<String> = (0..road.lanes)
            .map(|l| {
                let lane = road.lane(l);
                format!("{:?}@{:+.2}", lane.heading, lane.offset)
            })
            .collect();
        println!("road {i}: {:?} axis, lanes {}", road.axis, lanes.join(" "));
    }
    for b in &layout.buildings {
        println!(
            "building {:?} .. {:?}, {} m tall",
            b.footprint.min, b.footprint.max, b.height
        );
    }

    let traffic = TrafficConfig::default();
    let rsus = place_corner_rsus(&layout, 6.0, traffic.max_vehicle_height())?;
    for r in &rsus {
        println!("{} at {:?}", r.id, r.position);
    }

    let mut rng = ChaCha8Rng::seed_from_u64(7);
    let mut vehicles = spawn_vehicles(&layout, &traffic, &mut rng)?;
    let trucks = vehicles
        .iter()
        .filter(|v| v.extent.height > traffic.car.height)
        .count();
    println!("{} vehicles spawned, {trucks} of them tall", vehicles.len());

    for second in 1..=5 {
        for _ in 0..10 {
            step_mobility(
                &mut vehicles,
                &layout,
                0.1,
                traffic.turn_probability,
                &mut rng,
            );
        }
        let turning = vehicles
            .iter()
            .filter(|v| matches!(v.crossing, Crossing::Turning { .. }))
            .count();
        let v = &vehicles[0];
        println!(
            "t={second}s  {} at ({:.1}, {:.1}) heading {:?}; {turning} vehicles mid-turn",
            v.id, v.position.x, v.position.y, v.heading
        );
    }
    Ok(())
}
