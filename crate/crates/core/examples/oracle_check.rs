//! Compare the exact enumeration with the brute-force sampling oracle.
//!
//! cargo run --release --example oracle_check -- [polygon.json]

use squarepeg::enumerate_inscribed_squares;
use squarepeg::io::load_polygon;
use squarepeg::oracle::{approx_squares, compare, DEFAULT_DELTA, DEFAULT_N};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let path = std::env::args()
        .nth(1)
        .unwrap_or_else(|| concat!(env!("CARGO_MANIFEST_DIR"), "/fixtures/polygons/right_triangle.json").into());
    let x = load_polygon(&path)?;
    let clusters = approx_squares(&x, DEFAULT_N, DEFAULT_DELTA)?;
    let exact = enumerate_inscribed_squares(&x, 1e-9)?;
    let cmp = compare(&x, &exact, &clusters, DEFAULT_DELTA);
    println!("oracle clusters {}, exact squares {}, agreement {}", clusters.len(), exact.len(), cmp.agrees());
    for c in &clusters {
        println!("  side {:.6} from {} hits, residual {:.1e}·D", c.representative.side(), c.hits, c.residual);
    }
    Ok(())
}
