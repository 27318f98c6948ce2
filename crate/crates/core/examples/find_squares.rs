//! Enumerate the inscribed squares of a polygon file.
//!
//! cargo run --example find_squares -- [polygon.json]

use squarepeg::io::load_polygon;
use squarepeg::{check_generic, enumerate_inscribed_squares};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let path = std::env::args()
        .nth(1)
        .unwrap_or_else(|| concat!(env!("CARGO_MANIFEST_DIR"), "/fixtures/polygons/pentagon_perturbed.json").into());
    let x = load_polygon(&path)?;
    let report = check_generic(&x);
    if !report.is_generic() {
        println!("warning: polygon is not generic, the count below may not be odd\n{report}");
    }
    let squares = enumerate_inscribed_squares(&x, 1e-9)?;
    println!("{path}: {} inscribed squares", squares.len());
    for s in &squares {
        let edges = s.attachments.map(|a| a.edge);
        println!("  side {:.6} center {} on edges {:?}", s.side(), s.square.c, edges);
    }
    Ok(())
}
