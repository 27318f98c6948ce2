//! Planar primitives: points, segments, lines, simple polygons and the
//! predicates the rest of the crate is built on.
//!
//! All tolerances are relative. Polygon-level tests scale them by the
//! polygon diameter `D`; segment-level tests scale them by segment length.
//! Orientation follows y-up mathematical coordinates: positive signed area
//! means counterclockwise.

use std::f64::consts::PI;
use std::fmt;
use std::ops::{Add, AddAssign, Mul, Neg, Sub};

use thiserror::Error;

/// Default on-boundary tolerance, relative to the polygon diameter.
pub const EPS_ON: f64 = 1e-9;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum GeomError {
    #[error("coordinate is not finite: ({0}, {1})")]
    NonFinite(f64, f64),
    #[error("polygon needs at least 3 vertices, got {0}")]
    TooFewVertices(usize),
    #[error("edge {0} has zero length")]
    ZeroLengthEdge(usize),
    #[error("polygon is not simple: offending edge pairs {0:?}")]
    NotSimple(Vec<(usize, usize)>),
    #[error("degenerate segment: endpoints coincide")]
    DegenerateSegment,
    #[error("degenerate line: zero normal")]
    DegenerateLine,
}

/// A point (or displacement vector) in the plane.
#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct Point {
    pub x: f64,
    pub y: f64,
}

impl Point {
    /// Panics on non-finite input; use [`Point::try_new`] for untrusted data.
    pub fn new(x: f64, y: f64) -> Point {
        assert!(x.is_finite() && y.is_finite(), "non-finite point ({x}, {y})");
        Point { x, y }
    }

    pub fn try_new(x: f64, y: f64) -> Result<Point, GeomError> {
        if x.is_finite() && y.is_finite() {
            Ok(Point { x, y })
        } else {
            Err(GeomError::NonFinite(x, y))
        }
    }

    pub const ORIGIN: Point = Point { x: 0.0, y: 0.0 };

    pub fn dot(self, o: Point) -> f64 {
        self.x * o.x + self.y * o.y
    }

    /// z-component of the 3d cross product.
    pub fn cross(self, o: Point) -> f64 {
        self.x * o.y - self.y * o.x
    }

    pub fn norm(self) -> f64 {
        self.x.hypot(self.y)
    }

    pub fn norm2(self) -> f64 {
        self.dot(self)
    }

    pub fn dist(self, o: Point) -> f64 {
        (self - o).norm()
    }

    /// Exact counterclockwise quarter turn `[[0,-1],[1,0]]`.
    pub fn perp_ccw(self) -> Point {
        Point { x: -self.y, y: self.x }
    }

    /// Exact clockwise quarter turn `[[0,1],[-1,0]]`.
    pub fn perp_cw(self) -> Point {
        Point { x: self.y, y: -self.x }
    }

    /// Rotate this vector by `k` counterclockwise quarter turns.
    pub fn quarter_turns(self, k: i32) -> Point {
        match k.rem_euclid(4) {
            0 => self,
            1 => self.perp_ccw(),
            2 => -self,
            _ => self.perp_cw(),
        }
    }

    pub fn lerp(self, o: Point, t: f64) -> Point {
        self + (o - self) * t
    }

    pub fn max_abs(self) -> f64 {
        self.x.abs().max(self.y.abs())
    }
}

impl fmt::Display for Point {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({}, {})", self.x, self.y)
    }
}

impl Add for Point {
    type Output = Point;
    fn add(self, o: Point) -> Point {
        Point { x: self.x + o.x, y: self.y + o.y }
    }
}

impl AddAssign for Point {
    fn add_assign(&mut self, o: Point) {
        self.x += o.x;
        self.y += o.y;
    }
}

impl Sub for Point {
    type Output = Point;
    fn sub(self, o: Point) -> Point {
        Point { x: self.x - o.x, y: self.y - o.y }
    }
}

impl Mul<f64> for Point {
    type Output = Point;
    fn mul(self, k: f64) -> Point {
        Point { x: self.x * k, y: self.y * k }
    }
}

impl Neg for Point {
    type Output = Point;
    fn neg(self) -> Point {
        Point { x: -self.x, y: -self.y }
    }
}

/// Rotate `p` about `center` by `quarter_turns * π/2`, counterclockwise.
///
/// Uses the exact quarter-turn matrix, so no trigonometry is involved.
pub fn rotate(p: Point, center: Point, quarter_turns: i32) -> Point {
    center + (p - center).quarter_turns(quarter_turns)
}

/// A non-degenerate closed segment.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Segment {
    pub a: Point,
    pub b: Point,
}

impl Segment {
    pub fn new(a: Point, b: Point) -> Result<Segment, GeomError> {
        let scale = 1f64.max(a.max_abs()).max(b.max_abs());
        if a.dist(b) <= EPS_ON * scale {
            return Err(GeomError::DegenerateSegment);
        }
        Ok(Segment { a, b })
    }

    pub(crate) fn raw(a: Point, b: Point) -> Segment {
        Segment { a, b }
    }

    pub fn dir(&self) -> Point {
        self.b - self.a
    }

    pub fn len(&self) -> f64 {
        self.dir().norm()
    }

    pub fn at(&self, t: f64) -> Point {
        self.a.lerp(self.b, t)
    }

    /// Unclamped projection parameter of `p` onto the supporting line.
    pub fn param_of(&self, p: Point) -> f64 {
        let d = self.dir();
        (p - self.a).dot(d) / d.norm2()
    }

    pub fn dist_to(&self, p: Point) -> f64 {
        let t = self.param_of(p).clamp(0.0, 1.0);
        self.at(t).dist(p)
    }

    pub fn line(&self) -> Line {
        Line::through(self.a, self.b).expect("segment is non-degenerate")
    }
}

/// Result of intersecting two closed segments.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Intersection {
    None,
    Point(Point),
    Overlap(Segment),
}

/// Intersect two segments.
///
/// Directions are treated as parallel when `|d1 × d2| <= tol·|d1||d2|`;
/// parameters may overshoot `[0, 1]` by `tol` and are clamped.
pub fn segment_intersection(s1: &Segment, s2: &Segment, tol: f64) -> Intersection {
    let d1 = s1.dir();
    let d2 = s2.dir();
    let (l1, l2) = (d1.norm(), d2.norm());
    let denom = d1.cross(d2);
    let r = s2.a - s1.a;
    if denom.abs() > tol * l1 * l2 {
        let t = r.cross(d2) / denom;
        let u = r.cross(d1) / denom;
        if t < -tol || t > 1.0 + tol || u < -tol || u > 1.0 + tol {
            return Intersection::None;
        }
        // Average both parameterizations so the result does not depend on
        // argument order beyond rounding.
        let p1 = s1.at(t.clamp(0.0, 1.0));
        let p2 = s2.at(u.clamp(0.0, 1.0));
        return Intersection::Point((p1 + p2) * 0.5);
    }
    // Parallel: collinear iff s2.a lies on s1's line.
    if r.cross(d1).abs() > tol * l1 * l1.max(l2).max(r.norm()) {
        return Intersection::None;
    }
    let ta = s1.param_of(s2.a);
    let tb = s1.param_of(s2.b);
    let lo = ta.min(tb).max(0.0);
    let hi = ta.max(tb).min(1.0);
    if lo > hi + tol {
        Intersection::None
    } else if (hi - lo) * l1 <= tol * l1.max(l2) {
        Intersection::Point(s1.at(0.5 * (lo + hi)))
    } else {
        Intersection::Overlap(Segment::raw(s1.at(lo), s1.at(hi)))
    }
}

/// A line `{p : n·p = d}` with unit normal `n`.
#[derive(Debug, Clone, Copy)]
pub struct Line {
    pub n: Point,
    pub d: f64,
}

impl Line {
    /// Line `a·x + b·y = c`.
    pub fn from_coeffs(a: f64, b: f64, c: f64) -> Result<Line, GeomError> {
        let k = a.hypot(b);
        if k == 0.0 || !k.is_finite() || !c.is_finite() {
            return Err(GeomError::DegenerateLine);
        }
        Ok(Line { n: Point { x: a / k, y: b / k }, d: c / k })
    }

    pub fn through(p: Point, q: Point) -> Result<Line, GeomError> {
        let n = (q - p).perp_ccw();
        if n.norm() == 0.0 {
            return Err(GeomError::DegenerateLine);
        }
        Line::from_coeffs(n.x, n.y, n.dot(p))
    }

    pub fn signed_dist(&self, p: Point) -> f64 {
        self.n.dot(p) - self.d
    }

    /// Unit direction vector.
    pub fn dir(&self) -> Point {
        self.n.perp_cw()
    }

    /// The point of the line closest to the origin.
    pub fn foot(&self) -> Point {
        self.n * self.d
    }

    pub fn rotated(&self, center: Point, quarter_turns: i32) -> Line {
        let n = self.n.quarter_turns(quarter_turns);
        let p = rotate(self.foot(), center, quarter_turns);
        Line { n, d: n.dot(p) }
    }

    /// Intersection point, or `None` when the lines are parallel within `tol`.
    pub fn intersect(&self, o: &Line, tol: f64) -> Option<Point> {
        let det = self.n.cross(o.n);
        if det.abs() <= tol {
            return None;
        }
        Some(Point {
            x: (self.d * o.n.y - o.d * self.n.y) / det,
            y: (self.n.x * o.d - o.n.x * self.d) / det,
        })
    }
}

impl PartialEq for Line {
    fn eq(&self, o: &Line) -> bool {
        const E: f64 = 1e-12;
        let same = (self.n - o.n).max_abs() <= E && (self.d - o.d).abs() <= E * 1f64.max(self.d.abs());
        let flipped = (self.n + o.n).max_abs() <= E && (self.d + o.d).abs() <= E * 1f64.max(self.d.abs());
        same || flipped
    }
}

/// Outcome of the all-pairs simplicity test.
#[derive(Debug, Clone, PartialEq)]
pub struct SimplicityReport {
    pub simple: bool,
    pub offending: Vec<(usize, usize)>,
}

/// O(n²) all-pairs simplicity test on a closed vertex cycle.
///
/// Adjacent edges may only share their common vertex; non-adjacent edges
/// may not touch at all.
pub fn is_simple(vertices: &[Point]) -> SimplicityReport {
    let n = vertices.len();
    let mut offending = Vec::new();
    if n < 3 {
        return SimplicityReport { simple: false, offending };
    }
    let scale = vertices.iter().fold(0f64, |m, p| m.max(p.max_abs())).max(1e-300);
    let tol = 1e-12;
    let edge = |i: usize| Segment::raw(vertices[i], vertices[(i + 1) % n]);
    for i in 0..n {
        for j in i + 1..n {
            let (e, f) = (edge(i), edge(j));
            let adjacent = j == i + 1 || (i == 0 && j == n - 1);
            match segment_intersection(&e, &f, tol) {
                Intersection::None => {}
                Intersection::Point(p) => {
                    if !adjacent {
                        offending.push((i, j));
                    } else {
                        let shared = if j == i + 1 { e.b } else { e.a };
                        if p.dist(shared) > 1e-9 * scale {
                            offending.push((i, j));
                        }
                    }
                }
                Intersection::Overlap(_) => offending.push((i, j)),
            }
        }
    }
    SimplicityReport { simple: offending.is_empty(), offending }
}

/// Shoelace area of a vertex cycle; positive for counterclockwise.
pub fn signed_area_of(vertices: &[Point]) -> f64 {
    let n = vertices.len();
    let mut s = 0.0;
    for i in 0..n {
        s += vertices[i].cross(vertices[(i + 1) % n]);
    }
    0.5 * s
}

/// Where a point sits relative to a polygon.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Location {
    Inside,
    Outside,
    Boundary,
}

/// A validated simple polygon, implicitly closed.
///
/// Vertex `i` starts edge `i`; arc length is measured from vertex 0 along
/// the stored vertex order.
#[derive(Debug, Clone, PartialEq)]
pub struct Polygon {
    vertices: Vec<Point>,
    cum: Vec<f64>,
    diameter: f64,
}

impl Polygon {
    pub fn new(vertices: Vec<Point>) -> Result<Polygon, GeomError> {
        let n = vertices.len();
        if n < 3 {
            return Err(GeomError::TooFewVertices(n));
        }
        if let Some(p) = vertices.iter().find(|p| !(p.x.is_finite() && p.y.is_finite())) {
            return Err(GeomError::NonFinite(p.x, p.y));
        }
        let poly = Polygon::build(vertices);
        for i in 0..n {
            if poly.edge_len(i) <= 1e-12 * poly.diameter {
                return Err(GeomError::ZeroLengthEdge(i));
            }
        }
        // Angles of exactly 0 or 2π show up as overlapping adjacent edges.
        let report = is_simple(&poly.vertices);
        if !report.simple {
            return Err(GeomError::NotSimple(report.offending));
        }
        Ok(poly)
    }

    pub fn from_coords(coords: &[[f64; 2]]) -> Result<Polygon, GeomError> {
        Polygon::new(coords.iter().map(|c| Point { x: c[0], y: c[1] }).collect())
    }

    fn build(vertices: Vec<Point>) -> Polygon {
        let n = vertices.len();
        let mut cum = Vec::with_capacity(n + 1);
        cum.push(0.0);
        for i in 0..n {
            let l = vertices[i].dist(vertices[(i + 1) % n]);
            cum.push(cum[i] + l);
        }
        let mut diameter = 0f64;
        for i in 0..n {
            for j in i + 1..n {
                diameter = diameter.max(vertices[i].dist(vertices[j]));
            }
        }
        Polygon { vertices, cum, diameter }
    }

    pub fn len(&self) -> usize {
        self.vertices.len()
    }

    pub fn is_empty(&self) -> bool {
        self.vertices.is_empty()
    }

    pub fn vertices(&self) -> &[Point] {
        &self.vertices
    }

    pub fn vertex(&self, i: usize) -> Point {
        self.vertices[i % self.len()]
    }

    pub fn edge(&self, i: usize) -> Segment {
        let n = self.len();
        Segment::raw(self.vertices[i % n], self.vertices[(i + 1) % n])
    }

    pub fn edges(&self) -> impl Iterator<Item = Segment> + '_ {
        (0..self.len()).map(move |i| self.edge(i))
    }

    pub fn edge_len(&self, i: usize) -> f64 {
        self.cum[i + 1] - self.cum[i]
    }

    /// Arc length at which edge `i` starts.
    pub fn edge_start(&self, i: usize) -> f64 {
        self.cum[i]
    }

    /// Total boundary length `L`.
    pub fn perimeter(&self) -> f64 {
        self.cum[self.len()]
    }

    /// Largest vertex-to-vertex distance `D`.
    pub fn diameter(&self) -> f64 {
        self.diameter
    }

    pub fn signed_area(&self) -> f64 {
        signed_area_of(&self.vertices)
    }

    pub fn is_ccw(&self) -> bool {
        self.signed_area() > 0.0
    }

    pub fn reversed(&self) -> Polygon {
        let mut v = self.vertices.clone();
        v.reverse();
        Polygon::build(v)
    }

    /// Same cycle, starting at vertex `start`.
    pub fn relabeled(&self, start: usize) -> Polygon {
        let n = self.len();
        Polygon::build((0..n).map(|i| self.vertices[(start + i) % n]).collect())
    }

    /// Apply a map to every vertex. Similarities preserve validity, so the
    /// result is not re-validated.
    pub fn map_similarity(&self, f: impl Fn(Point) -> Point) -> Polygon {
        Polygon::build(self.vertices.iter().map(|&p| f(p)).collect())
    }

    pub fn centroid_of_vertices(&self) -> Point {
        let s = self.vertices.iter().fold(Point::ORIGIN, |a, &p| a + p);
        s * (1.0 / self.len() as f64)
    }

    /// Distance from `p` to the boundary.
    pub fn boundary_dist(&self, p: Point) -> f64 {
        self.edges().map(|e| e.dist_to(p)).fold(f64::INFINITY, f64::min)
    }

    /// Nearest edge to `p` with the clamped parameter on it.
    pub fn nearest_edge(&self, p: Point) -> (usize, f64, f64) {
        let mut best = (0, 0.0, f64::INFINITY);
        for (i, e) in self.edges().enumerate() {
            let t = e.param_of(p).clamp(0.0, 1.0);
            let d = e.at(t).dist(p);
            if d < best.2 {
                best = (i, t, d);
            }
        }
        best
    }

    /// Arc-length coordinate of a point on edge `i` at parameter `t`.
    pub fn arc_length_at(&self, i: usize, t: f64) -> f64 {
        self.cum[i] + t * self.edge_len(i)
    }

    /// Interior angle at each vertex, in `(0, 2π)`, independent of orientation.
    pub fn interior_angles(&self) -> Vec<f64> {
        let n = self.len();
        let sign = if self.is_ccw() { 1.0 } else { -1.0 };
        (0..n)
            .map(|i| {
                let prev = self.vertices[(i + n - 1) % n];
                let cur = self.vertices[i];
                let next = self.vertices[(i + 1) % n];
                let (din, dout) = (cur - prev, next - cur);
                let turn = din.cross(dout).atan2(din.dot(dout));
                PI - sign * turn
            })
            .collect()
    }

    /// Point at arc length `s` (wrapped modulo `L`) and the edge holding it.
    ///
    /// A vertex belongs to its outgoing edge.
    pub fn boundary_point(&self, s: f64) -> (Point, usize) {
        let l = self.perimeter();
        let mut s = s.rem_euclid(l);
        if s >= l {
            s = 0.0;
        }
        // last i with cum[i] <= s
        let i = self.cum.partition_point(|&c| c <= s).saturating_sub(1).min(self.len() - 1);
        let t = (s - self.cum[i]) / self.edge_len(i);
        (self.edge(i).at(t), i)
    }

    /// Classify `p`; anything within `tol·D` of an edge is on the boundary.
    pub fn locate(&self, p: Point, tol: f64) -> Location {
        if self.boundary_dist(p) <= tol * self.diameter {
            return Location::Boundary;
        }
        if self.winding_number(p) != 0 {
            Location::Inside
        } else {
            Location::Outside
        }
    }

    fn winding_number(&self, p: Point) -> i32 {
        let mut w = 0;
        for e in self.edges() {
            let side = (e.b - e.a).cross(p - e.a);
            if e.a.y <= p.y {
                if e.b.y > p.y && side > 0.0 {
                    w += 1;
                }
            } else if e.b.y <= p.y && side < 0.0 {
                w -= 1;
            }
        }
        w
    }
}

/// Free-function form of [`Polygon::signed_area`].
pub fn signed_area(x: &Polygon) -> f64 {
    x.signed_area()
}

/// Free-function form of [`Polygon::locate`].
pub fn point_location(p: Point, x: &Polygon, tol: f64) -> Location {
    x.locate(p, tol)
}

/// Free-function form of [`Polygon::interior_angles`].
pub fn interior_angles(x: &Polygon) -> Vec<f64> {
    x.interior_angles()
}

/// Free-function form of [`Polygon::boundary_point`].
pub fn boundary_point(x: &Polygon, s: f64) -> (Point, usize) {
    x.boundary_point(s)
}

/// Pairs of edges whose directions are perpendicular within `|cos| < tol`.
pub fn orthogonal_edge_pairs(x: &Polygon, tol: f64) -> Vec<(usize, usize)> {
    let n = x.len();
    let mut out = Vec::new();
    for i in 0..n {
        let di = x.edge(i).dir();
        for j in i + 1..n {
            let dj = x.edge(j).dir();
            if (di.dot(dj) / (di.norm() * dj.norm())).abs() < tol {
                out.push((i, j));
            }
        }
    }
    out
}
