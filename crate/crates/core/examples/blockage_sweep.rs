//! Connectivity as the per-link blockage probability grows.
//!
//! cargo run --release --example blockage_sweep

use oran_v2x::engine::{sweep_blockage, SweepSpec};
use oran_v2x::SimConfig;

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let base = SimConfig {
        duration: 40.0,
        ..SimConfig::default()
    };
    let spec = SweepSpec {
        snr_values: vec![5.0, 10.0],
        pb_values: vec![0.0, 0.25, 0.5, 0.75, 1.0],
        replications: 3,
        base,
    };
    let workers = std::thread::available_parallelism().map_or(1, |n| n.get());
    let outcome = sweep_blockage(&spec, workers)?;
    for c in &outcome.cells {
        println!(
            "γ={:>4} dB  p_b={:<4}  relay {:.3} ± {:.3}  direct {:.3}",
            c.snr_min_db, c.p_b, c.relay_mean, c.relay_std, c.direct_mean
        );
    }
    Ok(())
}
