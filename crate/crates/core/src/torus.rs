//! Inscribed right isosceles triangles as curves on the torus `T = X × X`.
//!
//! For boundary points `y, z` let `u` be `z` turned a quarter turn clockwise
//! about `y`, and `v = u + (z − y)`, so that `[z y u v]` is a square. `U` is
//! the set of pairs with `u` on the boundary; equivalently `z` lies on the
//! copy `X′` of the polygon turned counterclockwise about `y`.
//!
//! While `y` runs along one edge `e_a` and `(z, u)` stay on a fixed pair of
//! edges `(e_b, e_c)`, both edge parameters of `z` and `u` are affine in the
//! position of `y` (the rotated copy of `e_c` translates without turning).
//! So `U` is a union of straight pieces in arc-length coordinates, one per
//! `(a, b, c)` with a non-empty parameter window, and pieces join where a
//! parameter hits an edge end. Everything below is exact up to rounding: no
//! sampling is involved.

use std::f64::consts::{PI, SQRT_2};

use thiserror::Error;

use crate::enumerate::{dedup_squares, InscribedSquare, ORTHOGONAL_TOL};
use crate::geom::{orthogonal_edge_pairs, rotate, segment_intersection, Intersection, Point, Polygon, Segment, EPS_ON};
use crate::solver::Square;

const PIECE_MIN: f64 = 1e-12;
const TIE_TOL: f64 = 1e-11;
const JOIN_TOL: f64 = 1e-9;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum TorusError {
    #[error("non-generic polygon: {0}")]
    NonGeneric(String),
    #[error("polygon is not obtuse: vertex {vertex} has interior angle {angle:.6} rad")]
    NonObtuse { vertex: usize, angle: f64 },
    #[error("curve is not closed: lifted gap {0:.3e}")]
    NotClosed(f64),
    #[error("could not join traced pieces: {0}")]
    Unresolved(String),
}

/// A pair of arc-length positions `(s of y, t of z)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TorusPoint {
    pub s: f64,
    pub t: f64,
}

fn wrap_diff(d: f64, period: f64) -> f64 {
    d - period * (d / period).round()
}

impl TorusPoint {
    /// Componentwise wrapped Euclidean distance.
    pub fn dist(&self, o: &TorusPoint, period: f64) -> f64 {
        wrap_diff(self.s - o.s, period).hypot(wrap_diff(self.t - o.t, period))
    }
}

/// A closed polyline on the torus, stored in lifted (unwrapped) coordinates.
/// The last lifted point is the first one translated by `(p·L, q·L)`.
#[derive(Debug, Clone, PartialEq)]
pub struct TorusCurve {
    lifted: Vec<TorusPoint>,
    period: f64,
}

impl TorusCurve {
    pub fn from_lifted(lifted: Vec<TorusPoint>, period: f64) -> TorusCurve {
        TorusCurve { lifted, period }
    }

    /// Close a polyline given in wrapped coordinates, unwrapping each step
    /// to its shortest representative.
    pub fn closed_from_wrapped(points: &[TorusPoint], period: f64) -> TorusCurve {
        let mut lifted = Vec::with_capacity(points.len() + 1);
        let Some(&first) = points.first() else {
            return TorusCurve { lifted, period };
        };
        lifted.push(first);
        let mut cur = first;
        for p in points[1..].iter().chain([&first]) {
            let prev = *lifted.last().unwrap();
            cur = TorusPoint {
                s: prev.s + wrap_diff(p.s - cur.s, period),
                t: prev.t + wrap_diff(p.t - cur.t, period),
            };
            lifted.push(cur);
            cur = *p;
        }
        TorusCurve { lifted, period }
    }

    pub fn lifted(&self) -> &[TorusPoint] {
        &self.lifted
    }

    pub fn period(&self) -> f64 {
        self.period
    }

    /// Vertices reduced to `[0, L)²`, without the closing repeat.
    pub fn points(&self) -> Vec<TorusPoint> {
        let l = self.period;
        let k = self.lifted.len().saturating_sub(1);
        self.lifted[..k].iter().map(|p| TorusPoint { s: p.s.rem_euclid(l), t: p.t.rem_euclid(l) }).collect()
    }

    pub fn winding(&self) -> Result<(i64, i64), TorusError> {
        winding(self)
    }

    fn reversed(&self) -> TorusCurve {
        let mut lifted = self.lifted.clone();
        lifted.reverse();
        TorusCurve { lifted, period: self.period }
    }
}

/// Net wraps `(p, q)` of a closed torus curve.
pub fn winding(c: &TorusCurve) -> Result<(i64, i64), TorusError> {
    let (Some(a), Some(b)) = (c.lifted.first(), c.lifted.last()) else {
        return Ok((0, 0));
    };
    let (ps, qs) = ((b.s - a.s) / c.period, (b.t - a.t) / c.period);
    let (p, q) = (ps.round(), qs.round());
    let gap = ((ps - p).abs()).max((qs - q).abs()) * c.period;
    if gap > 1e-6 * c.period {
        return Err(TorusError::NotClosed(gap));
    }
    Ok((p as i64, q as i64))
}

/// Which constraint ends a piece.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum PieceEnd {
    /// `y` reaches an end of its edge.
    Y,
    /// `z` reaches an end of its edge.
    Z,
    /// `u` reaches an end of its edge.
    U,
}

/// One straight piece of `U`: `y` on `y_edge` at parameter `σ`, `z` on
/// `z_edge` at `τ(σ)`, `u` on `u_edge` at `μ(σ)`, for `σ ∈ sigma`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct UPiece {
    pub y_edge: usize,
    pub z_edge: usize,
    pub u_edge: usize,
    pub sigma: [f64; 2],
    /// `τ(σ) = tau[0] + tau[1]·σ`.
    pub tau: [f64; 2],
    /// `μ(σ) = mu[0] + mu[1]·σ`.
    pub mu: [f64; 2],
    pub ends: [PieceEnd; 2],
}

impl UPiece {
    pub fn tau_at(&self, sigma: f64) -> f64 {
        self.tau[0] + self.tau[1] * sigma
    }

    pub fn mu_at(&self, sigma: f64) -> f64 {
        self.mu[0] + self.mu[1] * sigma
    }

    /// Piece-local arc-length coordinates of `(y, z)`; within `[0, L]²`.
    pub fn uv_point(&self, x: &Polygon, sigma: f64) -> TorusPoint {
        TorusPoint { s: x.arc_length_at(self.y_edge, sigma), t: x.arc_length_at(self.z_edge, self.tau_at(sigma)) }
    }

    /// Same piece seen as part of `V`: the pair `(u, y)`.
    pub fn v_point(&self, x: &Polygon, sigma: f64) -> TorusPoint {
        TorusPoint { s: x.arc_length_at(self.u_edge, self.mu_at(sigma)), t: x.arc_length_at(self.y_edge, sigma) }
    }

    pub fn triangle(&self, x: &Polygon, sigma: f64) -> RightIsoscelesTriangle {
        let y = x.edge(self.y_edge).at(sigma);
        let z = x.edge(self.z_edge).at(self.tau_at(sigma));
        let u = rotate(z, y, -1);
        RightIsoscelesTriangle { y, z, u, leg: y.dist(z) }
    }

    /// Endpoint position with the bounding parameter snapped exactly.
    fn end_point(&self, x: &Polygon, end: usize) -> TorusPoint {
        let sigma = self.sigma[end];
        let mut tau = self.tau_at(sigma);
        if self.ends[end] == PieceEnd::Z {
            tau = tau.round();
        }
        TorusPoint { s: x.arc_length_at(self.y_edge, sigma), t: x.arc_length_at(self.z_edge, tau) }
    }
}

/// An inscribed right isosceles triangle with the right angle at `y`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RightIsoscelesTriangle {
    pub y: Point,
    pub z: Point,
    pub u: Point,
    pub leg: f64,
}

/// A traced component: its pieces in traversal order and the curve.
#[derive(Debug, Clone, PartialEq)]
pub struct Component {
    /// `(piece index, traversed from sigma[0] to sigma[1])`.
    pub pieces: Vec<(usize, bool)>,
    pub curve: TorusCurve,
    pub winding: (i64, i64),
}

/// Full output of the sweep.
#[derive(Debug, Clone, PartialEq)]
pub struct TracedU {
    pub pieces: Vec<UPiece>,
    pub components: Vec<Component>,
    pub perimeter: f64,
}

impl TracedU {
    pub fn curves(&self) -> Vec<TorusCurve> {
        self.components.iter().map(|c| c.curve.clone()).collect()
    }

    /// Number of crossings of the vertical line `{s}`.
    pub fn crossings_at(&self, x: &Polygon, s: f64) -> usize {
        let s = s.rem_euclid(self.perimeter);
        self.pieces
            .iter()
            .filter(|p| {
                let lo = x.arc_length_at(p.y_edge, p.sigma[0]);
                let hi = x.arc_length_at(p.y_edge, p.sigma[1]);
                lo < s && s < hi
            })
            .count()
    }
}

fn require_no_orthogonal(x: &Polygon) -> Result<(), TorusError> {
    if let Some((i, j)) = orthogonal_edge_pairs(x, ORTHOGONAL_TOL).first() {
        return Err(TorusError::NonGeneric(format!("edges {i} and {j} are orthogonal")));
    }
    Ok(())
}

fn require_obtuse(x: &Polygon) -> Result<(), TorusError> {
    for (vertex, angle) in x.interior_angles().into_iter().enumerate() {
        if angle <= PI / 2.0 || angle >= 1.5 * PI {
            return Err(TorusError::NonObtuse { vertex, angle });
        }
    }
    Ok(())
}

/// The fiber `U_y`: boundary points `z ≠ y` whose clockwise quarter turn
/// about `y` is again on the boundary, found as `X ∩ X′` directly.
pub fn u_fiber(x: &Polygon, y: Point) -> Result<Vec<Point>, TorusError> {
    require_no_orthogonal(x)?;
    let eps = EPS_ON * x.diameter();
    let near_event = 1e3 * eps;
    let turned: Vec<Point> = x.vertices().iter().map(|&p| rotate(p, y, 1)).collect();
    let n = x.len();
    let mut out: Vec<Point> = Vec::new();
    for b in 0..n {
        let eb = x.edge(b);
        for c in 0..n {
            let ec = Segment::raw(turned[c], turned[(c + 1) % n]);
            match segment_intersection(&eb, &ec, 1e-12) {
                Intersection::None => {}
                Intersection::Overlap(_) => {
                    return Err(TorusError::NonGeneric(format!("edge {b} overlaps turned edge {c}")));
                }
                Intersection::Point(p) => {
                    if p.dist(y) <= 1e3 * eps {
                        continue;
                    }
                    let at_vertex = |vs: &[Point]| vs.iter().any(|v| v.dist(p) <= near_event);
                    if at_vertex(x.vertices()) || at_vertex(&turned) {
                        return Err(TorusError::NonGeneric(format!("fiber point {p} sits at a vertex event")));
                    }
                    if !out.iter().any(|q| q.dist(p) <= eps) {
                        out.push(p);
                    }
                }
            }
        }
    }
    Ok(out)
}

/// Parameter window of one `(a, b, c)` triple, or `None` if empty.
fn piece_for(x: &Polygon, a: usize, b: usize, c: usize) -> Result<Option<UPiece>, TorusError> {
    let (ea, eb, ec) = (x.edge(a), x.edge(b), x.edge(c));
    let (da, db, dc) = (ea.dir(), eb.dir(), ec.dir());
    let col2 = -dc.perp_ccw();
    let det = db.cross(col2);
    if det.abs() <= 1e-12 * db.norm() * dc.norm() {
        return Err(TorusError::NonGeneric(format!("edges {b} and {c} are orthogonal")));
    }
    let affine_part = |v: Point| v - v.perp_ccw();
    let r0 = ec.a.perp_ccw() + affine_part(ea.a) - eb.a;
    let r1 = affine_part(da);
    let tau = [r0.cross(col2) / det, r1.cross(col2) / det];
    let mu = [db.cross(r0) / det, db.cross(r1) / det];

    // (bound, kind); lower and upper candidates
    let mut lo = vec![(0.0, PieceEnd::Y)];
    let mut hi = vec![(1.0, PieceEnd::Y)];
    for (f, kind) in [(tau, PieceEnd::Z), (mu, PieceEnd::U)] {
        if f[1].abs() < 1e-15 {
            if f[0] < 0.0 || f[0] > 1.0 {
                return Ok(None);
            }
            continue;
        }
        let r_at0 = -f[0] / f[1];
        let r_at1 = (1.0 - f[0]) / f[1];
        if f[1] > 0.0 {
            lo.push((r_at0, kind));
            hi.push((r_at1, kind));
        } else {
            lo.push((r_at1, kind));
            hi.push((r_at0, kind));
        }
    }
    lo.sort_by(|p, q| q.0.total_cmp(&p.0));
    hi.sort_by(|p, q| p.0.total_cmp(&q.0));
    let (s0, k0) = lo[0];
    let (s1, k1) = hi[0];
    if s1 - s0 <= PIECE_MIN {
        return Ok(None);
    }
    for bounds in [&lo, &hi] {
        if bounds.len() > 1 && (bounds[0].0 - bounds[1].0).abs() <= TIE_TOL && bounds[0].1 != bounds[1].1 {
            return Err(TorusError::NonGeneric(format!(
                "two vertices reach polygon vertices together on edges ({a}, {b}, {c})"
            )));
        }
    }
    Ok(Some(UPiece { y_edge: a, z_edge: b, u_edge: c, sigma: [s0, s1], tau, mu, ends: [k0, k1] }))
}

/// Sweep `y` once around the boundary and assemble `U` into closed
/// components, each oriented so its winding is `(p > 0, ·)` or `(0, q ≥ 0)`.
pub fn trace(x: &Polygon) -> Result<TracedU, TorusError> {
    require_no_orthogonal(x)?;
    let n = x.len();
    let l = x.perimeter();
    let mut pieces = Vec::new();
    for a in 0..n {
        for b in 0..n {
            for c in 0..n {
                if (b, c) == (a, a) {
                    continue;
                }
                if let Some(p) = piece_for(x, a, b, c)? {
                    pieces.push(p);
                }
            }
        }
    }

    // Join endpoints that coincide on the torus.
    let ends: Vec<TorusPoint> = pieces.iter().flat_map(|p| [p.end_point(x, 0), p.end_point(x, 1)]).collect();
    let mut order: Vec<usize> = (0..ends.len()).collect();
    order.sort_by(|&i, &j| ends[i].s.rem_euclid(l).total_cmp(&ends[j].s.rem_euclid(l)));
    let tol = JOIN_TOL * l;
    let mut partner = vec![usize::MAX; ends.len()];
    for (oi, &i) in order.iter().enumerate() {
        let mut found = Vec::new();
        // sorted by wrapped s: scan neighbors in both directions, cyclically
        for step in 1..order.len() {
            let j = order[(oi + step) % order.len()];
            if wrap_diff(ends[j].s - ends[i].s, l).abs() > tol {
                break;
            }
            if ends[i].dist(&ends[j], l) <= tol {
                found.push(j);
            }
        }
        for step in 1..order.len() {
            let j = order[(oi + order.len() - step) % order.len()];
            if wrap_diff(ends[j].s - ends[i].s, l).abs() > tol {
                break;
            }
            if ends[i].dist(&ends[j], l) <= tol && !found.contains(&j) {
                found.push(j);
            }
        }
        match found.as_slice() {
            [j] => partner[i] = *j,
            [] => {
                return Err(TorusError::Unresolved(format!(
                    "piece {:?} end {} has no continuation",
                    pieces[i / 2],
                    i % 2
                )))
            }
            _ => {
                return Err(TorusError::NonGeneric(format!(
                    "{} pieces meet at torus point ({:.6}, {:.6})",
                    found.len() + 1,
                    ends[i].s,
                    ends[i].t
                )))
            }
        }
    }

    let mut visited = vec![false; pieces.len()];
    let mut components = Vec::new();
    for start in 0..pieces.len() {
        if visited[start] {
            continue;
        }
        let mut seq = Vec::new();
        let mut lifted = vec![ends[2 * start]];
        let (mut piece, mut from) = (start, 0usize);
        loop {
            if visited[piece] {
                return Err(TorusError::Unresolved(format!("piece {piece} reached twice")));
            }
            visited[piece] = true;
            seq.push((piece, from == 0));
            let to = 1 - from;
            let last = *lifted.last().unwrap();
            let (a, b) = (ends[2 * piece + from], ends[2 * piece + to]);
            let end = TorusPoint { s: last.s + (b.s - a.s), t: last.t + (b.t - a.t) };
            lifted.push(end);
            let next = partner[2 * piece + to];
            let (np, nf) = (next / 2, next % 2);
            // snap across the junction
            let junction = ends[next];
            let fix = TorusPoint {
                s: end.s + wrap_diff(junction.s - b.s, l),
                t: end.t + wrap_diff(junction.t - b.t, l),
            };
            *lifted.last_mut().unwrap() = fix;
            if np == start {
                if nf != 0 {
                    return Err(TorusError::Unresolved(format!("component through piece {start} closes backwards")));
                }
                break;
            }
            piece = np;
            from = nf;
        }
        let mut curve = TorusCurve::from_lifted(lifted, l);
        let mut w = winding(&curve)?;
        if w.0 < 0 || (w.0 == 0 && w.1 < 0) {
            curve = curve.reversed();
            seq.reverse();
            for s in seq.iter_mut() {
                s.1 = !s.1;
            }
            w = (-w.0, -w.1);
        }
        components.push(Component { pieces: seq, curve, winding: w });
    }
    Ok(TracedU { pieces, components, perimeter: l })
}

/// The closed components of `U`.
#[allow(non_snake_case)]
pub fn trace_U(x: &Polygon) -> Result<Vec<TorusCurve>, TorusError> {
    Ok(trace(x)?.curves())
}

/// Smallest flat-torus distance from the curves to the diagonal `{(y, y)}`.
pub fn diagonal_clearance(curves: &[TorusCurve]) -> f64 {
    let mut best = f64::INFINITY;
    for c in curves {
        let l = c.period();
        let pts = c.lifted();
        for w in pts.windows(2) {
            let (d0, d1) = (w[0].t - w[0].s, w[1].t - w[1].s);
            let (k0, k1) = ((d0 / l).floor(), (d1 / l).floor());
            let dist = if k0 != k1 {
                0.0
            } else {
                let off = |d: f64| {
                    let r = d - k0 * l;
                    r.min(l - r)
                };
                off(d0).min(off(d1))
            };
            best = best.min(dist / SQRT_2);
        }
    }
    best
}

/// The inscribed right isosceles triangle with the shortest legs, found by
/// minimizing `|z − y|²` (quadratic in `σ`) exactly on every piece.
pub fn smallest_right_isosceles(x: &Polygon) -> Result<RightIsoscelesTriangle, TorusError> {
    require_obtuse(x)?;
    let traced = trace(x)?;
    smallest_on_pieces(x, &traced.pieces)
        .ok_or_else(|| TorusError::Unresolved("no inscribed right isosceles triangle traced".into()))
}

pub(crate) fn smallest_on_pieces(x: &Polygon, pieces: &[UPiece]) -> Option<RightIsoscelesTriangle> {
    let mut best: Option<RightIsoscelesTriangle> = None;
    for p in pieces {
        let (ea, eb) = (x.edge(p.y_edge), x.edge(p.z_edge));
        let v0 = eb.a + eb.dir() * p.tau[0] - ea.a;
        let v1 = eb.dir() * p.tau[1] - ea.dir();
        let mut sigma = if v1.norm2() > 0.0 { -v0.dot(v1) / v1.norm2() } else { p.sigma[0] };
        sigma = sigma.clamp(p.sigma[0], p.sigma[1]);
        let tri = p.triangle(x, sigma);
        if best.is_none_or(|b| tri.leg < b.leg) {
            best = Some(tri);
        }
    }
    best
}

/// Inscribed squares recovered as the intersections of `U` with `V`, where
/// `V` is `U` relabeled by `(y, z) ↦ (u, y)`.
#[allow(non_snake_case)]
pub fn squares_from_UV(x: &Polygon) -> Result<Vec<InscribedSquare>, TorusError> {
    require_obtuse(x)?;
    let traced = trace(x)?;
    let to_pt = |p: TorusPoint| Point { x: p.s, y: p.t };
    let mut found = Vec::new();
    for up in &traced.pieces {
        let us = Segment::raw(to_pt(up.uv_point(x, up.sigma[0])), to_pt(up.uv_point(x, up.sigma[1])));
        for vp in &traced.pieces {
            let vs = Segment::raw(to_pt(vp.v_point(x, vp.sigma[0])), to_pt(vp.v_point(x, vp.sigma[1])));
            match segment_intersection(&us, &vs, 1e-12) {
                Intersection::None => {}
                Intersection::Overlap(_) => {
                    return Err(TorusError::NonGeneric("U and V overlap along a piece".into()));
                }
                Intersection::Point(q) => {
                    let lam = us.param_of(q).clamp(0.0, 1.0);
                    let sigma = up.sigma[0] + lam * (up.sigma[1] - up.sigma[0]);
                    let RightIsoscelesTriangle { y, z, u, .. } = up.triangle(x, sigma);
                    let v = u + (z - y);
                    // [z y u v] runs counterclockwise
                    let sq = Square::from_cw_vertices([z, v, u, y]);
                    if let Some(s) = InscribedSquare::locate(x, sq, 1e-8) {
                        found.push(s);
                    }
                }
            }
        }
    }
    Ok(dedup_squares(x, found, 1e-8))
}
