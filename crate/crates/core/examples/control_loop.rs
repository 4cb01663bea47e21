//! One short run of the full loop: sensing, indications to the RIC, the relay
//! xApp, and control messages back to the nodes.
//!
//! cargo run --release --example control_loop

use oran_v2x::engine::{run_detailed, time_average};
use oran_v2x::SimConfig;

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let config = SimConfig {
        duration: 20.0,
        warmup: 2.0,
        trace: true,
        ..SimConfig::default()
    };
    let out = run_detailed(&config)?;

    for r in out.records.iter().step_by(25) {
        println!(
            "t={:>5.1}  connectivity {:.3}  pairs {} (direct {}, relayed {})  mean hops {:.2}",
            r.t, r.connectivity, r.pairs_total, r.pairs_direct, r.pairs_relayed, r.mean_hops
        );
    }
    let times: Vec<f64> = out.records.iter().map(|r| r.t).collect();
    let relay: Vec<f64> = out.records.iter().map(|r| r.connectivity).collect();
    println!(
        "time-averaged connectivity: relay {:.3}, direct {:.3}",
        time_average(&times, &relay, config.warmup),
        time_average(&times, &out.direct_connectivity, config.warmup)
    );

    let c = &out.control;
    println!(
        "{} control messages, {} applied; {} of {} relay chains verified end to end",
        c.messages_issued, c.messages_applied, c.chains_verified, c.paths_assigned
    );
    for t in out.trace.iter().filter(|t| t.msg_type == "control").take(3) {
        println!(
            "  {:.2}s {} -> {}: {}",
            t.t, t.source, t.target, t.payload_summary
        );
    }
    Ok(())
}
