//! Deform the bundled pentagon into a thin polygon with a single inscribed
//! square, keeping the count odd throughout.

use squarepeg::deform::{shrink_pentagon, shrink_scenario, sweep};
use squarepeg::enumerate_inscribed_squares;

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let sc = shrink_scenario(&shrink_pentagon())?;
    let r = sweep(&sc, 1e-2)?;
    let mut counts: Vec<usize> = r.parity_timeline.iter().map(|&(_, c)| c).collect();
    counts.dedup();
    println!("counts along the way: {counts:?}");
    for e in &r.events {
        println!("  t = {:.6}: {}", e.time, e.kind.as_str());
    }
    let z = &sc.keyframes().last().unwrap().1;
    println!("final polygon has {} inscribed square(s)", enumerate_inscribed_squares(z, 1e-9)?.len());
    Ok(())
}
