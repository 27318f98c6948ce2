//! Draw a polygon, its inscribed squares and the torus curves to SVG.
//!
//! cargo run --example render_figure -- [polygon.json] [out.svg]

use squarepeg::io::load_polygon;
use squarepeg::svg::save_svg;
use squarepeg::torus::trace_U;
use squarepeg::{check_generic, enumerate_inscribed_squares};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let mut args = std::env::args().skip(1);
    let path = args
        .next()
        .unwrap_or_else(|| concat!(env!("CARGO_MANIFEST_DIR"), "/fixtures/polygons/pentagon_perturbed.json").into());
    let out = args.next().unwrap_or_else(|| "figure.svg".into());
    let x = load_polygon(&path)?;
    let squares: Vec<_> = enumerate_inscribed_squares(&x, 1e-9)?.into_iter().map(|s| s.square).collect();
    let curves = if check_generic(&x).is_obtuse() { trace_U(&x).ok() } else { None };
    save_svg(&out, &x, &squares, curves.as_deref())?;
    println!("wrote {out} with {} squares{}", squares.len(), if curves.is_some() { " and the torus panel" } else { "" });
    Ok(())
}
