//! Sweep a deformation scenario and list the square events.
//!
//! cargo run --release --example deformation_events -- [scenario.json]

use squarepeg::deform::sweep;
use squarepeg::io::load_scenario;

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let path = std::env::args()
        .nth(1)
        .unwrap_or_else(|| concat!(env!("CARGO_MANIFEST_DIR"), "/fixtures/scenarios/annihilation.json").into());
    let sc = load_scenario(&path)?;
    let r = sweep(&sc, 1e-2)?;
    let counts: Vec<usize> = r.parity_timeline.iter().map(|&(_, c)| c).collect();
    println!("count at t=0: {}, at t=1: {}", counts[0], counts[counts.len() - 1]);
    for e in &r.events {
        println!("t = {:.9}  {:<17} vertex x{} meets square vertex {}  delta {:+}", e.time, e.kind.as_str(), e.vertex, e.square_vertex, e.delta_count);
    }
    println!("parity constant: {}, deltas sum to {}", r.parity_constant(), r.total_delta());
    Ok(())
}
