//! Trace inscribed right isosceles triangles on the torus of boundary pairs.

use squarepeg::io::load_polygon;
use squarepeg::torus::{diagonal_clearance, smallest_right_isosceles, squares_from_UV, trace, u_fiber};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let path = std::env::args()
        .nth(1)
        .unwrap_or_else(|| concat!(env!("CARGO_MANIFEST_DIR"), "/fixtures/polygons/pentagon_perturbed.json").into());
    let x = load_polygon(&path)?;
    let traced = trace(&x)?;
    for c in &traced.components {
        println!("component: winding {:?}, {} linear pieces", c.winding, c.pieces.len());
    }
    println!("diagonal clearance {:.6}", diagonal_clearance(&traced.curves()));

    let y = x.edge(0).at(0.5);
    let fiber = u_fiber(&x, y)?;
    println!("fiber over the midpoint of edge 0: {} points", fiber.len());

    let r = smallest_right_isosceles(&x)?;
    println!("smallest right isosceles triangle: leg {:.6}, right angle at {}", r.leg, r.y);
    println!("U ∩ V: {} inscribed squares", squares_from_UV(&x)?.len());
    Ok(())
}
