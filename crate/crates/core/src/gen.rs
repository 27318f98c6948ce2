//! Deterministic random simple polygons.

use std::f64::consts::PI;
use std::str::FromStr;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use thiserror::Error;

use crate::geom::{is_simple, GeomError, Point, Polygon};

const MAX_SWAPS: usize = 100_000;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Method {
    /// Sorted random angles with radii in `[0.3, 1]`: star-shaped about the origin.
    Angular,
    /// Random points in the unit square, untangled by 2-opt moves.
    Uncross,
}

impl FromStr for Method {
    type Err = String;
    fn from_str(s: &str) -> Result<Method, String> {
        match s {
            "angular" => Ok(Method::Angular),
            "uncross" => Ok(Method::Uncross),
            other => Err(format!("unknown method `{other}` (expected angular or uncross)")),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Error)]
pub enum GenError {
    #[error("need at least 3 vertices, got {0}")]
    TooFew(usize),
    #[error("2-opt uncrossing did not converge after {0} swaps")]
    UncrossFailed(usize),
    #[error(transparent)]
    Geom(#[from] GeomError),
}

pub fn gen_random_polygon(n: usize, seed: u64, method: Method) -> Result<Polygon, GenError> {
    if n < 3 {
        return Err(GenError::TooFew(n));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let vertices = match method {
        Method::Angular => {
            // A gap of π or more leaves the origin outside the kernel and the
            // chain can cross itself; redraw until every gap is below π.
            let angles = loop {
                let mut a: Vec<f64> = (0..n).map(|_| rng.random_range(0.0..2.0 * PI)).collect();
                a.sort_by(f64::total_cmp);
                let wrap_gap = a[0] + 2.0 * PI - a[n - 1];
                if a.windows(2).map(|w| w[1] - w[0]).chain([wrap_gap]).all(|g| g < PI) {
                    break a;
                }
            };
            angles
                .into_iter()
                .map(|a| {
                    let r = rng.random_range(0.3..=1.0);
                    Point { x: r * a.cos(), y: r * a.sin() }
                })
                .collect()
        }
        Method::Uncross => {
            let pts: Vec<Point> = (0..n).map(|_| Point { x: rng.random(), y: rng.random() }).collect();
            uncross(pts)?
        }
    };
    Ok(Polygon::new(vertices)?)
}

/// Repeatedly reverse the chain between two crossing edges. Every move
/// shortens the tour, so this terminates.
fn uncross(mut pts: Vec<Point>) -> Result<Vec<Point>, GenError> {
    let n = pts.len();
    for _ in 0..MAX_SWAPS {
        let report = is_simple(&pts);
        let Some(&(i, j)) = report.offending.first() else {
            return Ok(pts);
        };
        if j == i + 1 || (i == 0 && j == n - 1) {
            // adjacent edges folding onto each other; drop the shared vertex
            // order by swapping it with its successor
            let k = if j == i + 1 { j } else { 0 };
            pts.swap(k, (k + 1) % n);
            continue;
        }
        pts[i + 1..=j].reverse();
    }
    Err(GenError::UncrossFailed(MAX_SWAPS))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn deterministic() {
        let a = gen_random_polygon(5, 42, Method::Angular).unwrap();
        let b = gen_random_polygon(5, 42, Method::Angular).unwrap();
        assert_eq!(a, b);
        assert_ne!(a, gen_random_polygon(5, 43, Method::Angular).unwrap());
    }

    #[test]
    fn uncross_is_simple() {
        let p = gen_random_polygon(8, 7, Method::Uncross).unwrap();
        assert!(is_simple(p.vertices()).simple);
        assert_eq!(p.len(), 8);
    }

    #[test]
    fn parse_method() {
        assert_eq!("uncross".parse::<Method>(), Ok(Method::Uncross));
        assert!("spiral".parse::<Method>().is_err());
    }
}
