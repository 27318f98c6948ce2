//! Deterministic SVG figures: a polygon with squares drawn over it, and
//! optionally a torus chart with traced curves and the diagonal.
//!
//! Coordinates stay y-up everywhere else; the flip happens here.

use std::fmt::Write as _;
use std::path::Path;

use crate::geom::{Point, Polygon};
use crate::solver::Square;
use crate::torus::{TorusCurve, TorusPoint};

const PANEL: f64 = 400.0;
const MARGIN: f64 = 20.0;
const PALETTE: [&str; 8] = ["#d62728", "#1f77b4", "#2ca02c", "#9467bd", "#ff7f0e", "#17becf", "#8c564b", "#e377c2"];

fn closed_path(points: &[(f64, f64)], stroke: &str, width: f64) -> String {
    let mut d = String::new();
    for (i, (x, y)) in points.iter().enumerate() {
        let _ = write!(d, "{}{:.3} {:.3} ", if i == 0 { "M" } else { "L" }, x, y);
    }
    format!("  <path d=\"{d}Z\" fill=\"none\" stroke=\"{stroke}\" stroke-width=\"{width}\"/>\n")
}

/// Split one lifted segment at every chart wrap and reduce the pieces into
/// `[0, L]²`.
fn wrapped_pieces(a: TorusPoint, b: TorusPoint, l: f64) -> Vec<(TorusPoint, TorusPoint)> {
    let mut cuts = vec![0.0, 1.0];
    for (u0, u1) in [(a.s, b.s), (a.t, b.t)] {
        if u1 != u0 {
            let (lo, hi) = (u0.min(u1), u0.max(u1));
            let mut k = (lo / l).floor() + 1.0;
            while k * l < hi {
                cuts.push((k * l - u0) / (u1 - u0));
                k += 1.0;
            }
        }
    }
    cuts.sort_by(f64::total_cmp);
    let at = |f: f64| TorusPoint { s: a.s + f * (b.s - a.s), t: a.t + f * (b.t - a.t) };
    cuts.windows(2)
        .filter(|w| w[1] - w[0] > 1e-12)
        .map(|w| {
            let (p, q) = (at(w[0]), at(w[1]));
            let mid = at(0.5 * (w[0] + w[1]));
            let (os, ot) = ((mid.s / l).floor() * l, (mid.t / l).floor() * l);
            (TorusPoint { s: p.s - os, t: p.t - ot }, TorusPoint { s: q.s - os, t: q.t - ot })
        })
        .collect()
}

/// The SVG document as a string.
pub fn render_svg(x: &Polygon, squares: &[Square], curves: Option<&[TorusCurve]>) -> String {
    let vs = x.vertices();
    let (mut lo, mut hi) = (vs[0], vs[0]);
    for p in vs.iter().chain(squares.iter().flat_map(|s| s.vertices().to_vec()).collect::<Vec<_>>().iter()) {
        lo = Point { x: lo.x.min(p.x), y: lo.y.min(p.y) };
        hi = Point { x: hi.x.max(p.x), y: hi.y.max(p.y) };
    }
    let extent = (hi.x - lo.x).max(hi.y - lo.y).max(f64::MIN_POSITIVE);
    let scale = (PANEL - 2.0 * MARGIN) / extent;
    let map = |p: Point| (MARGIN + (p.x - lo.x) * scale, MARGIN + (hi.y - p.y) * scale);

    let width = if curves.is_some() { 2.0 * PANEL } else { PANEL };
    let mut svg = String::new();
    let _ = writeln!(svg, "<?xml version=\"1.0\" encoding=\"UTF-8\"?>");
    let _ = writeln!(
        svg,
        "<svg xmlns=\"http://www.w3.org/2000/svg\" version=\"1.1\" width=\"{width}\" height=\"{PANEL}\" viewBox=\"0 0 {width} {PANEL}\">"
    );
    let _ = writeln!(svg, "  <rect x=\"0\" y=\"0\" width=\"{width}\" height=\"{PANEL}\" fill=\"white\"/>");
    let poly: Vec<(f64, f64)> = vs.iter().map(|&p| map(p)).collect();
    svg.push_str(&closed_path(&poly, "black", 2.0));
    for (i, s) in squares.iter().enumerate() {
        let pts: Vec<(f64, f64)> = s.vertices().iter().map(|&p| map(p)).collect();
        svg.push_str(&closed_path(&pts, PALETTE[i % PALETTE.len()], 1.5));
    }

    if let Some(curves) = curves {
        let l = x.perimeter();
        let (x0, y0, side) = (PANEL + MARGIN, MARGIN, PANEL - 2.0 * MARGIN);
        let chart = |p: TorusPoint| (x0 + p.s / l * side, y0 + (1.0 - p.t / l) * side);
        let _ = writeln!(
            svg,
            "  <rect x=\"{x0:.3}\" y=\"{y0:.3}\" width=\"{side:.3}\" height=\"{side:.3}\" fill=\"none\" stroke=\"gray\"/>"
        );
        let _ = writeln!(
            svg,
            "  <line x1=\"{:.3}\" y1=\"{:.3}\" x2=\"{:.3}\" y2=\"{:.3}\" stroke=\"gray\" stroke-dasharray=\"4 3\"/>",
            x0,
            y0 + side,
            x0 + side,
            y0
        );
        for (i, c) in curves.iter().enumerate() {
            let color = PALETTE[i % PALETTE.len()];
            let mut runs: Vec<Vec<TorusPoint>> = Vec::new();
            for w in c.lifted().windows(2) {
                for (p, q) in wrapped_pieces(w[0], w[1], l) {
                    match runs.last_mut() {
                        Some(run) if run.last().is_some_and(|r| (r.s - p.s).abs() + (r.t - p.t).abs() < 1e-9 * l) => {
                            run.push(q)
                        }
                        _ => runs.push(vec![p, q]),
                    }
                }
            }
            for run in runs {
                let mut pts = String::new();
                for p in run {
                    let (u, v) = chart(p);
                    let _ = write!(pts, "{u:.3},{v:.3} ");
                }
                let _ = writeln!(
                    svg,
                    "  <polyline points=\"{}\" fill=\"none\" stroke=\"{color}\" stroke-width=\"1.5\"/>",
                    pts.trim_end()
                );
            }
        }
    }
    svg.push_str("</svg>\n");
    svg
}

pub fn save_svg(path: impl AsRef<Path>, x: &Polygon, squares: &[Square], curves: Option<&[TorusCurve]>) -> std::io::Result<()> {
    std::fs::write(path, render_svg(x, squares, curves))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn wrap_split() {
        let pieces = wrapped_pieces(TorusPoint { s: 0.5, t: 0.5 }, TorusPoint { s: 1.5, t: 1.0 }, 1.0);
        assert_eq!(pieces.len(), 2);
        assert!((pieces[0].1.s - 1.0).abs() < 1e-12 && (pieces[1].0.s).abs() < 1e-12);
    }

    #[test]
    fn one_closed_path_without_squares() {
        let x = Polygon::from_coords(&[[0., 0.], [4., 0.], [3., 1.]]).unwrap();
        let svg = render_svg(&x, &[], None);
        assert_eq!(svg.matches("Z\"").count(), 1);
        assert_eq!(svg, render_svg(&x, &[], None));
    }
}
