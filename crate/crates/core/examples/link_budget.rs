//! Link budget at 28 GHz: pathloss and SNR against distance, then how often
//! a link survives stochastic blockage.
//!
//! cargo run --example link_budget

use oran_v2x::channel::{
    noise_floor, pathloss_los, pathloss_nlos, stochastic_blockage, ChannelParams, LinkKey,
};
use oran_v2x::NodeId;

fn main() {
    let params = ChannelParams::default();
    let noise = noise_floor(&params);
    println!(
        "fc {} GHz, EIRP {} dBm, noise floor {noise:.2} dBm over {} MHz",
        params.carrier_ghz,
        params.eirp_dbm,
        params.bandwidth_hz / 1e6
    );
    println!(
        "{:>8} {:>10} {:>10} {:>9} {:>9}",
        "d [m]", "PL LOS", "PL NLOS", "SNR LOS", "SNR NLOS"
    );
    for d in [5.0, 10.0, 20.0, 50.0, 100.0, 200.0, 300.0] {
        let los = pathloss_los(d, params.carrier_ghz);
        let nlos = pathloss_nlos(d, params.carrier_ghz, 1.6);
        println!(
            "{d:>8.0} {los:>10.2} {nlos:>10.2} {:>9.2} {:>9.2}",
            params.eirp_dbm - los - noise,
            params.eirp_dbm - nlos - noise
        );
    }

    let link = LinkKey::new(NodeId::cav(0), NodeId::cav(1));
    for p_b in [0.0, 0.25, 0.5, 0.75, 1.0] {
        let blocked = (0..10_000)
            .filter(|&k| stochastic_blockage(p_b, link, k as f64 * 0.1, 1))
            .count();
        println!(
            "p_b = {p_b:<4}: blocked in {:.3} of ticks",
            blocked as f64 / 10_000.0
        );
    }
}
