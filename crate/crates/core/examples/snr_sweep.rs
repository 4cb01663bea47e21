//! Connectivity against the minimum-SNR threshold, relay-assisted and direct.
//!
//! cargo run --release --example snr_sweep

use oran_v2x::engine::{sweep_snr, SweepSpec};
use oran_v2x::SimConfig;

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let base = SimConfig {
        duration: 60.0,
        ..SimConfig::default()
    };
    let spec = SweepSpec {
        snr_values: vec![0.0, 5.0, 10.0, 15.0, 20.0],
        pb_values: vec![0.0],
        replications: 2,
        base,
    };
    let workers = std::thread::available_parallelism().map_or(1, |n| n.get());
    let outcome = sweep_snr(&spec, workers)?;
    println!("{:>8} {:>16} {:>16}", "γ [dB]", "relay", "direct");
    for c in &outcome.cells {
        println!(
            "{:>8} {:>9.3} ± {:.3} {:>9.3} ± {:.3}",
            c.snr_min_db, c.relay_mean, c.relay_std, c.direct_mean, c.direct_std
        );
    }
    Ok(())
}
