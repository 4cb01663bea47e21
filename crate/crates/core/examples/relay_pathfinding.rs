//! The relay xApp's path search on a small hand-built graph.
//!
//! cargo run --example relay_pathfinding

use oran_v2x::ric::{find_path, find_path_with, ConnectivityGraph};
use oran_v2x::{NodeId, NodeKind};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let (a, b, c, d) = (
        NodeId::cav(0),
        NodeId::cav(1),
        NodeId::cav(2),
        NodeId::cav(3),
    );
    let rsu = NodeId::rsu(0);
    // a weak direct link, a two-hop detour through b and a strong RSU route
    let g = ConnectivityGraph::from_edges(
        [a, b, c, d, rsu],
        [
            (a, d, 6.0),
            (a, b, 14.0),
            (b, d, 11.0),
            (a, rsu, 25.0),
            (rsu, c, 22.0),
            (c, d, 18.0),
        ],
    );
    println!("{} nodes, {} edges", g.node_count(), g.edge_count());

    for (hops, gamma) in [(1, 0.0), (1, 10.0), (2, 10.0), (3, 10.0), (4, 20.0)] {
        match find_path(&g, a, d, hops, gamma)? {
            Some(p) => println!(
                "H={hops} γ={gamma:>4}: {} (bottleneck {} dB, {} hops)",
                p.nodes
                    .iter()
                    .map(ToString::to_string)
                    .collect::<Vec<_>>()
                    .join(" > "),
                p.bottleneck_snr,
                p.hops()
            ),
            None => println!("H={hops} γ={gamma:>4}: no feasible path"),
        }
    }

    let no_rsu = find_path_with(&g, a, d, 4, 10.0, |n| n.kind != NodeKind::Rsu)?;
    println!("without RSU relays: {:?}", no_rsu.map(|p| p.nodes));
    Ok(())
}
