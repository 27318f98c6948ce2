//! Brute-force detector of approximate inscribed squares.
//!
//! Every ordered pair of `N` equally spaced boundary samples is completed to
//! a square on both sides; the completion is a hit when its two new
//! vertices land within `δ·D` of the boundary. Hits are clustered, and each
//! cluster is sharpened by a derivative-free local search over the two
//! sampled boundary positions. Nothing here shares code with the exact
//! enumerator beyond basic geometry.

use std::collections::HashMap;

use rayon::prelude::*;
use thiserror::Error;

use crate::enumerate::InscribedSquare;
use crate::geom::{signed_area_of, Point, Polygon};
use crate::solver::Square;

/// Default number of boundary samples.
pub const DEFAULT_N: usize = 4000;
/// Default boundary tolerance, relative to `D`.
pub const DEFAULT_DELTA: f64 = 0.01;
/// Merge radius and matching radius, in units of `δ·D`.
pub const MERGE_FACTOR: f64 = 5.0;
/// A refined square counts as inscribed below this residual, relative to `D`.
pub const ROOT_RESIDUAL: f64 = 1e-9;
/// Distinct refined squares in one cluster that signal a continuum.
pub const CONTINUUM_ROOTS: usize = 6;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum OracleError {
    #[error("need at least 100 samples, got {0}")]
    TooFewSamples(usize),
    #[error("δ must be positive and finite, got {0}")]
    BadDelta(f64),
    #[error("one hit cluster refines to squares spread over {spread:.3}·D near {center}: a continuum of squares is likely")]
    ContinuumSuspected { center: Point, spread: f64 },
}

#[derive(Debug, Clone, PartialEq)]
pub struct ApproxSquareCluster {
    pub representative: Square,
    pub hits: usize,
    /// Largest vertex distance to the boundary of the refined
    /// representative, in units of `D`.
    pub residual: f64,
}

/// Edges near each cell of a uniform grid over the inflated bounding box.
struct EdgeGrid<'a> {
    x: &'a Polygon,
    origin: Point,
    cell: f64,
    cols: usize,
    rows: usize,
    cells: Vec<Vec<usize>>,
    reach: f64,
}

impl<'a> EdgeGrid<'a> {
    fn new(x: &'a Polygon, reach: f64) -> EdgeGrid<'a> {
        let vs = x.vertices();
        let (mut lo, mut hi) = (vs[0], vs[0]);
        for p in vs {
            lo = Point { x: lo.x.min(p.x), y: lo.y.min(p.y) };
            hi = Point { x: hi.x.max(p.x), y: hi.y.max(p.y) };
        }
        let pad = Point { x: reach, y: reach };
        let (origin, hi) = (lo - pad, hi + pad);
        let cell = (x.diameter() / 64.0).max(reach);
        let cols = ((hi.x - origin.x) / cell).ceil() as usize + 1;
        let rows = ((hi.y - origin.y) / cell).ceil() as usize + 1;
        let mut cells = vec![Vec::new(); cols * rows];
        for (i, e) in x.edges().enumerate() {
            let c0 = ((e.a.x.min(e.b.x) - reach - origin.x) / cell).floor().max(0.0) as usize;
            let c1 = (((e.a.x.max(e.b.x) + reach - origin.x) / cell).floor() as usize).min(cols - 1);
            let r0 = ((e.a.y.min(e.b.y) - reach - origin.y) / cell).floor().max(0.0) as usize;
            let r1 = (((e.a.y.max(e.b.y) + reach - origin.y) / cell).floor() as usize).min(rows - 1);
            for r in r0..=r1 {
                for c in c0..=c1 {
                    // cell box within reach of the segment
                    let center = origin + Point { x: (c as f64 + 0.5) * cell, y: (r as f64 + 0.5) * cell };
                    if e.dist_to(center) <= reach + cell * std::f64::consts::FRAC_1_SQRT_2 {
                        cells[r * cols + c].push(i);
                    }
                }
            }
        }
        EdgeGrid { x, origin, cell, cols, rows, cells, reach }
    }

    /// Distance to the boundary if it is at most `reach`.
    fn near(&self, p: Point) -> Option<f64> {
        let c = ((p.x - self.origin.x) / self.cell).floor();
        let r = ((p.y - self.origin.y) / self.cell).floor();
        if c < 0.0 || r < 0.0 || c >= self.cols as f64 || r >= self.rows as f64 {
            return None;
        }
        let d = self.cells[r as usize * self.cols + c as usize]
            .iter()
            .map(|&i| self.x.edge(i).dist_to(p))
            .fold(f64::INFINITY, f64::min);
        (d <= self.reach).then_some(d)
    }
}

struct Hit {
    square: Square,
    residual: f64,
    /// Arc lengths of the two sampled vertices and the completion side.
    seed: (f64, f64, i32),
}

fn square_from_side(p: Point, q: Point, turn: i32) -> Square {
    let d = (q - p).quarter_turns(turn);
    let mut v = [p, q, q + d, p + d];
    if signed_area_of(&v) > 0.0 {
        v.reverse();
    }
    Square::from_cw_vertices(v)
}

/// Completion of the boundary pair at arc lengths `(s, t)` and the squared
/// boundary distances of its two free vertices.
fn completion(x: &Polygon, s: f64, t: f64, turn: i32) -> (Square, f64, f64) {
    let (p, q) = (x.boundary_point(s).0, x.boundary_point(t).0);
    let side = (q - p).quarter_turns(turn);
    let (r3, r4) = (x.boundary_dist(q + side), x.boundary_dist(p + side));
    (square_from_side(p, q, turn), r3 * r3 + r4 * r4, r3.max(r4))
}

/// Compass search on the two sampled arc lengths, driving the free
/// vertices onto the boundary. Returns the square and its residual.
fn refine(x: &Polygon, seed: (f64, f64, i32), step: f64) -> (Square, f64) {
    const DIRS: [(f64, f64); 8] = [(1., 0.), (-1., 0.), (0., 1.), (0., -1.), (1., 1.), (-1., -1.), (1., -1.), (-1., 1.)];
    let (mut s, mut t, turn) = seed;
    let (mut best, mut f, mut res) = completion(x, s, t, turn);
    let mut h = step;
    let floor = 1e-14 * x.perimeter();
    let mut iters = 0;
    while h > floor && res > 1e-13 * x.diameter() && iters < 2000 {
        iters += 1;
        let mut moved = false;
        for (ds, dt) in DIRS {
            let (cand, g, r) = completion(x, s + ds * h, t + dt * h, turn);
            if g < f {
                (s, t, best, f, res) = (s + ds * h, t + dt * h, cand, g, r);
                moved = true;
                break;
            }
        }
        if !moved {
            h *= 0.5;
        }
    }
    (best, res)
}

/// Approximate inscribed squares from `n` boundary samples at tolerance `δ`.
///
/// Each cluster of hits is sharpened by refining its leaders; clusters that
/// do not refine to a proper square (the thick band of near-misses at a
/// sharp corner, or a near-miss pair) are dropped, and a cluster holding
/// two genuine squares is split.
pub fn approx_squares(x: &Polygon, n: usize, delta: f64) -> Result<Vec<ApproxSquareCluster>, OracleError> {
    if n < 100 {
        return Err(OracleError::TooFewSamples(n));
    }
    if !(delta > 0.0 && delta.is_finite()) {
        return Err(OracleError::BadDelta(delta));
    }
    let d = x.diameter();
    let reach = delta * d;
    let min_side = MERGE_FACTOR * reach;
    let grid = EdgeGrid::new(x, reach);
    let l = x.perimeter();
    let spacing = l / n as f64;
    let samples: Vec<Point> = (0..n).map(|i| x.boundary_point(spacing * i as f64).0).collect();

    let hits: Vec<Hit> = (0..n)
        .into_par_iter()
        .flat_map_iter(|i| {
            let p = samples[i];
            let grid = &grid;
            samples.iter().enumerate().flat_map(move |(j, &q)| {
                let mut out = Vec::new();
                if i == j || p.dist(q) < min_side {
                    return out;
                }
                for turn in [1, -1] {
                    let side = (q - p).quarter_turns(turn);
                    let Some(r3) = grid.near(q + side) else { continue };
                    let Some(r4) = grid.near(p + side) else { continue };
                    out.push(Hit {
                        square: square_from_side(p, q, turn),
                        residual: r3.max(r4) / d,
                        seed: (spacing * i as f64, spacing * j as f64, turn),
                    });
                }
                out
            })
        })
        .collect();

    let radius = MERGE_FACTOR * reach;
    let root_tol = ROOT_RESIDUAL * d;
    let mut out = Vec::new();
    for group in cluster(&hits, radius) {
        if n >= 2000 && group.members.len() < 3 {
            continue;
        }
        let mut roots: Vec<(Square, f64)> = Vec::new();
        for &h in &group.leaders {
            let (sq, res) = refine(x, hits[h].seed, spacing);
            if res > root_tol || sq.side() < reach {
                continue;
            }
            if !roots.iter().any(|(r, _)| r.distance(&sq) <= 0.1 * radius) {
                roots.push((sq, res));
            }
        }
        // isolated squares attract many leaders each; along a continuum
        // nearly every leader settles on a square of its own
        if roots.len() >= CONTINUUM_ROOTS && 4 * roots.len() >= 3 * group.leaders.len() {
            let spread = roots
                .iter()
                .flat_map(|a| roots.iter().map(move |b| a.0.distance(&b.0)))
                .fold(0.0, f64::max);
            return Err(OracleError::ContinuumSuspected { center: roots[0].0.c, spread: spread / d });
        }
        let mut counts = vec![0usize; roots.len()];
        for &m in &group.members {
            let nearest = (0..roots.len())
                .min_by(|&a, &b| {
                    hits[m].square.distance(&roots[a].0).total_cmp(&hits[m].square.distance(&roots[b].0))
                });
            if let Some(k) = nearest {
                counts[k] += 1;
            }
        }
        for ((sq, res), hits) in roots.into_iter().zip(counts) {
            out.push(ApproxSquareCluster { representative: sq, hits, residual: res / d });
        }
    }
    out.sort_by(|a, b| {
        let (p, q) = (a.representative.c, b.representative.c);
        p.x.total_cmp(&q.x).then(p.y.total_cmp(&q.y))
    });
    Ok(out)
}

struct Group {
    /// Hits at least a merge radius apart that cover the group.
    leaders: Vec<usize>,
    members: Vec<usize>,
}

/// Leader clustering at `radius` followed by single-linkage merging of the
/// leaders. Hits are visited best residual first.
fn cluster(hits: &[Hit], radius: f64) -> Vec<Group> {
    let key = |p: Point| ((p.x / radius).floor() as i64, (p.y / radius).floor() as i64);
    let mut order: Vec<usize> = (0..hits.len()).collect();
    order.sort_by(|&a, &b| hits[a].residual.total_cmp(&hits[b].residual).then(a.cmp(&b)));
    let mut leaders: Vec<usize> = Vec::new();
    let mut by_cell: HashMap<(i64, i64), Vec<usize>> = HashMap::new();
    let mut members: Vec<Vec<usize>> = Vec::new();
    for &h in &order {
        let sq = &hits[h].square;
        let (kx, ky) = key(sq.c);
        let mut home = None;
        'search: for dx in -1..=1 {
            for dy in -1..=1 {
                for &l in by_cell.get(&(kx + dx, ky + dy)).into_iter().flatten() {
                    if hits[leaders[l]].square.distance(sq) <= radius {
                        home = Some(l);
                        break 'search;
                    }
                }
            }
        }
        match home {
            Some(l) => members[l].push(h),
            None => {
                by_cell.entry((kx, ky)).or_default().push(leaders.len());
                leaders.push(h);
                members.push(vec![h]);
            }
        }
    }
    // merge leaders whose groups touch
    let mut parent: Vec<usize> = (0..leaders.len()).collect();
    fn find(parent: &mut [usize], mut i: usize) -> usize {
        while parent[i] != i {
            parent[i] = parent[parent[i]];
            i = parent[i];
        }
        i
    }
    for a in 0..leaders.len() {
        let (kx, ky) = key(hits[leaders[a]].square.c);
        for dx in -2..=2 {
            for dy in -2..=2 {
                for &b in by_cell.get(&(kx + dx, ky + dy)).into_iter().flatten() {
                    if b > a && hits[leaders[a]].square.distance(&hits[leaders[b]].square) <= 2.0 * radius {
                        let (ra, rb) = (find(&mut parent, a), find(&mut parent, b));
                        if ra != rb {
                            parent[ra.max(rb)] = ra.min(rb);
                        }
                    }
                }
            }
        }
    }
    let mut groups: Vec<Group> = (0..leaders.len()).map(|_| Group { leaders: Vec::new(), members: Vec::new() }).collect();
    for l in 0..leaders.len() {
        let r = find(&mut parent, l);
        groups[r].leaders.push(leaders[l]);
        let m = std::mem::take(&mut members[l]);
        groups[r].members.extend(m);
    }
    groups.into_iter().filter(|g| !g.members.is_empty()).collect()
}

/// Result of matching exact squares against oracle clusters.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct OracleComparison {
    /// `(exact index, cluster index)`.
    pub matched: Vec<(usize, usize)>,
    pub unmatched_exact: Vec<usize>,
    pub unmatched_approx: Vec<usize>,
}

impl OracleComparison {
    pub fn agrees(&self) -> bool {
        self.unmatched_exact.is_empty() && self.unmatched_approx.is_empty()
    }
}

/// Greedy closest-first matching within `5·δ·D`.
pub fn compare(x: &Polygon, exact: &[InscribedSquare], approx: &[ApproxSquareCluster], delta: f64) -> OracleComparison {
    let radius = MERGE_FACTOR * delta * x.diameter();
    let mut pairs: Vec<(f64, usize, usize)> = Vec::new();
    for (i, e) in exact.iter().enumerate() {
        for (j, a) in approx.iter().enumerate() {
            let dist = e.square.distance(&a.representative);
            if dist <= radius {
                pairs.push((dist, i, j));
            }
        }
    }
    pairs.sort_by(|a, b| a.0.total_cmp(&b.0).then(a.1.cmp(&b.1)).then(a.2.cmp(&b.2)));
    let (mut used_e, mut used_a) = (vec![false; exact.len()], vec![false; approx.len()]);
    let mut report = OracleComparison::default();
    for (_, i, j) in pairs {
        if !used_e[i] && !used_a[j] {
            used_e[i] = true;
            used_a[j] = true;
            report.matched.push((i, j));
        }
    }
    report.matched.sort_unstable();
    report.unmatched_exact = (0..exact.len()).filter(|&i| !used_e[i]).collect();
    report.unmatched_approx = (0..approx.len()).filter(|&j| !used_a[j]).collect();
    report
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rejects_bad_parameters() {
        let x = Polygon::from_coords(&[[0., 0.], [4., 0.], [3., 1.]]).unwrap();
        assert_eq!(approx_squares(&x, 50, 0.01), Err(OracleError::TooFewSamples(50)));
        assert_eq!(approx_squares(&x, 200, 0.0), Err(OracleError::BadDelta(0.0)));
    }

    #[test]
    fn empty_comparison_agrees() {
        let x = Polygon::from_coords(&[[0., 0.], [4., 0.], [3., 1.]]).unwrap();
        assert!(compare(&x, &[], &[], 0.01).agrees());
    }

    #[test]
    fn completion_is_clockwise() {
        for turn in [1, -1] {
            let s = square_from_side(Point::new(0.0, 0.0), Point::new(1.0, 0.0), turn);
            assert!(signed_area_of(&s.vertices()) < 0.0);
            assert!((s.side() - 1.0).abs() < 1e-12);
        }
    }
}
