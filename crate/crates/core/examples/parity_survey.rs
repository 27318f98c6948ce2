//! Count inscribed squares of random perturbed polygons; every count is odd.
//!
//! cargo run --release --example parity_survey -- [how_many]

use std::collections::BTreeMap;

use squarepeg::gen::{gen_random_polygon, Method};
use squarepeg::{parity, perturb};

fn main() {
    let total: u64 = std::env::args().nth(1).and_then(|s| s.parse().ok()).unwrap_or(100);
    let mut histogram: BTreeMap<usize, usize> = BTreeMap::new();
    let mut even = 0;
    for seed in 0..total {
        let method = if seed % 2 == 0 { Method::Angular } else { Method::Uncross };
        let n = 5 + (seed % 8) as usize;
        let x = gen_random_polygon(n, seed, method).expect("generator");
        let Ok(x) = perturb(&x, 1e-3, seed) else {
            println!("seed {seed}: no generic perturbation found");
            continue;
        };
        let p = parity(&x).expect("perturbed polygon is generic");
        *histogram.entry(p.count).or_default() += 1;
        even += usize::from(!p.odd);
    }
    println!("square counts over {total} polygons: {histogram:?}");
    println!("even counts: {even}");
}
