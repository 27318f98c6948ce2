//! Generate random simple polygons with both methods and save them.
//!
//! cargo run --example random_polygons -- [out_dir]

use squarepeg::gen::{gen_random_polygon, Method};
use squarepeg::io::save_polygon;
use squarepeg::perturb;

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let dir = std::env::args().nth(1).unwrap_or_else(|| std::env::temp_dir().display().to_string());
    for (method, name) in [(Method::Angular, "angular"), (Method::Uncross, "uncross")] {
        for seed in 0..3 {
            let x = perturb(&gen_random_polygon(7, seed, method)?, 1e-3, seed)?;
            let path = format!("{dir}/{name}_{seed}.json");
            save_polygon(&path, &x)?;
            println!("{path}: {} vertices, perimeter {:.4}, ccw {}", x.len(), x.perimeter(), x.is_ccw());
        }
    }
    Ok(())
}
