//! Exhaustive enumeration of inscribed squares.
//!
//! Every square inscribed in a polygon has its vertices on four (not
//! necessarily distinct) edges, so it is the four-line square of some edge
//! quadruple. Enumerating all quadruples up to cyclic rotation and keeping
//! the solutions that land on the closed edge segments finds all of them,
//! provided no quadruple is singular with a whole family of inscribed
//! solutions; that case is reported as non-generic input instead.

use std::f64::consts::PI;

use nalgebra::{DMatrix, DVector, Vector4};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use thiserror::Error;

use crate::geom::{orthogonal_edge_pairs, Line, Point, Polygon, EPS_ON};
use crate::solver::{self, line_scale, Square, SquareSolveResult, EPS_W};

/// Default on-segment tolerance, relative to the polygon diameter.
pub const DEFAULT_TOL: f64 = 1e-9;
/// Squares closer than this (relative to `D`) are the same square.
pub const DEDUP_TOL: f64 = 1e-7;
/// `|cos|` below which two edges count as orthogonal.
pub const ORTHOGONAL_TOL: f64 = 1e-9;
const PERTURB_ATTEMPTS: u64 = 100;

/// An ordered edge quadruple: slot `k` holds the edge carrying vertex `k`.
pub type Quad = [usize; 4];

/// Where one square vertex sits: edge index and parameter in `[0, 1]`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Attachment {
    pub edge: usize,
    pub t: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct InscribedSquare {
    pub square: Square,
    /// In the square's clockwise vertex order.
    pub attachments: [Attachment; 4],
    pub touches_vertex: bool,
    pub repeated_edge: bool,
}

impl InscribedSquare {
    pub fn vertices(&self) -> [Point; 4] {
        self.square.vertices()
    }

    pub fn side(&self) -> f64 {
        self.square.side()
    }

    /// Attach a square to the boundary by nearest edge. `None` if some
    /// vertex is farther than `tol·D` from the boundary.
    pub fn locate(x: &Polygon, square: Square, tol: f64) -> Option<InscribedSquare> {
        let v = square.vertices();
        let mut att = [Attachment { edge: 0, t: 0.0 }; 4];
        for k in 0..4 {
            let (edge, t, d) = x.nearest_edge(v[k]);
            if d > tol * x.diameter() {
                return None;
            }
            att[k] = Attachment { edge, t };
        }
        Some(finish(x, square, att, tol).canonical(x, tol))
    }

    /// Apply the half-open vertex convention and relabel so that the first
    /// vertex is the one earliest along the boundary.
    fn canonical(mut self, x: &Polygon, tol: f64) -> InscribedSquare {
        let n = x.len();
        for a in self.attachments.iter_mut() {
            let slack = touch_slack(x, a.edge, tol);
            if a.t >= 1.0 - slack {
                *a = Attachment { edge: (a.edge + 1) % n, t: 0.0 };
            } else if a.t <= slack {
                a.t = 0.0;
            }
        }
        let start = (0..4)
            .min_by(|&i, &j| {
                let (a, b) = (self.attachments[i], self.attachments[j]);
                a.edge.cmp(&b.edge).then(a.t.total_cmp(&b.t))
            })
            .unwrap();
        let mut att = self.attachments;
        att.rotate_left(start);
        self.attachments = att;
        self.square = self.square.relabeled(start);
        self
    }
}

fn touch_slack(x: &Polygon, edge: usize, tol: f64) -> f64 {
    tol.max(EPS_ON) * x.diameter() / x.edge_len(edge)
}

fn finish(x: &Polygon, square: Square, att: [Attachment; 4], tol: f64) -> InscribedSquare {
    let touches_vertex = att.iter().any(|a| {
        let s = touch_slack(x, a.edge, tol);
        a.t <= s || a.t >= 1.0 - s
    });
    let mut edges: Vec<usize> = att.iter().map(|a| a.edge).collect();
    edges.sort_unstable();
    edges.dedup();
    InscribedSquare { square, attachments: att, touches_vertex, repeated_edge: edges.len() < 4 }
}

#[derive(Debug, Clone, PartialEq)]
pub enum Violation {
    OrthogonalEdgePair { edges: (usize, usize) },
    /// A singular quadruple whose solution family contains inscribed squares.
    SingularQuadrupleWithBoundarySolution { edges: Quad },
    SquareVertexAtPolygonVertex { vertex: usize, square_center: Point },
    /// Informational: an interior angle outside `(π/2, 3π/2)`.
    NonObtuseAngle { vertex: usize, angle: f64 },
}

impl Violation {
    pub fn kind(&self) -> &'static str {
        match self {
            Violation::OrthogonalEdgePair { .. } => "orthogonal-edge-pair",
            Violation::SingularQuadrupleWithBoundarySolution { .. } => "singular-quadruple-with-boundary-solution",
            Violation::SquareVertexAtPolygonVertex { .. } => "square-vertex-at-polygon-vertex",
            Violation::NonObtuseAngle { .. } => "non-obtuse-angle",
        }
    }

    pub fn is_informational(&self) -> bool {
        matches!(self, Violation::NonObtuseAngle { .. })
    }
}

impl std::fmt::Display for Violation {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            Violation::OrthogonalEdgePair { edges } => write!(f, "{}: edges {} and {}", self.kind(), edges.0, edges.1),
            Violation::SingularQuadrupleWithBoundarySolution { edges } => write!(f, "{}: edges {:?}", self.kind(), edges),
            Violation::SquareVertexAtPolygonVertex { vertex, square_center } => {
                write!(f, "{}: vertex {} (square centered at {})", self.kind(), vertex, square_center)
            }
            Violation::NonObtuseAngle { vertex, angle } => {
                write!(f, "{}: vertex {} has angle {:.6} rad", self.kind(), vertex, angle)
            }
        }
    }
}

#[derive(Debug, Clone, PartialEq, Default)]
pub struct GenericityReport {
    pub violations: Vec<Violation>,
}

impl GenericityReport {
    /// No violations apart from informational ones.
    pub fn is_generic(&self) -> bool {
        self.violations.iter().all(Violation::is_informational)
    }

    pub fn is_obtuse(&self) -> bool {
        !self.violations.iter().any(Violation::is_informational)
    }

    pub fn count(&self, kind: &str) -> usize {
        self.violations.iter().filter(|v| v.kind() == kind).count()
    }
}

impl std::fmt::Display for GenericityReport {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        if self.violations.is_empty() {
            return write!(f, "generic");
        }
        for v in &self.violations {
            writeln!(f, "{v}")?;
        }
        Ok(())
    }
}

#[derive(Debug, Clone, PartialEq, Error)]
pub enum EnumerateError {
    #[error("non-generic input:\n{0}")]
    NonGenericInput(GenericityReport),
    #[error("perturbation failed after {0} attempts")]
    PerturbationFailed(u64),
}

/// Outcome of solving one edge quadruple.
#[derive(Debug, Clone, PartialEq)]
pub enum QuadOutcome {
    Inscribed(InscribedSquare),
    /// A square exists but misses at least one segment.
    Outside,
    PointSquare,
    Singular { family_on_boundary: bool },
}

/// Supporting lines of the polygon's edges.
pub fn edge_lines(x: &Polygon) -> Vec<Line> {
    x.edges().map(|e| e.line()).collect()
}

/// Solve one quadruple. Attachments follow the slot order of `q`.
pub fn solve_quadruple(x: &Polygon, lines: &[Line], q: Quad, tol: f64) -> QuadOutcome {
    let ls = [lines[q[0]], lines[q[1]], lines[q[2]], lines[q[3]]];
    match solver::square_through_lines(&ls) {
        SquareSolveResult::Unique(sq) => {
            let v = sq.vertices();
            let limit = tol * x.diameter();
            let mut att = [Attachment { edge: 0, t: 0.0 }; 4];
            for k in 0..4 {
                let e = x.edge(q[k]);
                let t = e.param_of(v[k]);
                let tc = t.clamp(0.0, 1.0);
                if e.at(tc).dist(v[k]) > limit {
                    return QuadOutcome::Outside;
                }
                att[k] = Attachment { edge: q[k], t: tc };
            }
            QuadOutcome::Inscribed(finish(x, sq, att, tol))
        }
        SquareSolveResult::PointSquare(_) => QuadOutcome::PointSquare,
        SquareSolveResult::Singular(_) => {
            QuadOutcome::Singular { family_on_boundary: family_meets_boundary(x, &ls, q, tol) }
        }
    }
}

/// Does the solution set of a singular system contain a proper square
/// with every vertex on its closed segment?
///
/// The solutions form an affine family `x_p + N·λ`. Each on-segment
/// condition is a pair of half-spaces in `λ`, so the admissible set is a
/// bounded polytope, and `‖w‖` (convex in `λ`) peaks at one of its
/// vertices.
fn family_meets_boundary(x: &Polygon, ls: &[Line; 4], q: Quad, tol: f64) -> bool {
    let (m, rhs) = solver::system(ls);
    let svd = m.svd(true, true);
    let smax = svd.singular_values.max();
    let Ok(xp) = svd.solve(&rhs, 1e-9 * smax) else { return false };
    let scale = line_scale(ls);
    if (m * xp - rhs).norm() > 1e-9 * scale {
        return false;
    }
    let Some(v_t) = svd.v_t.as_ref() else { return false };
    let mut null: Vec<Vector4<f64>> = (0..4)
        .filter(|&i| svd.singular_values[i] <= 1e-9 * smax)
        .map(|i| v_t.row(i).transpose())
        .collect();
    if null.is_empty() {
        let imin = svd.singular_values.imin();
        null.push(v_t.row(imin).transpose());
    }
    let k = null.len();

    // t_j(λ) = alpha_j + beta_j · λ for each slot j.
    let mut alpha = [0.0; 4];
    let mut beta = vec![vec![0.0; k]; 4];
    // vertex j of the square encoded by (c, w); linear in the encoding
    let vertex_of = |v: &Vector4<f64>, j: usize| {
        let w = Point { x: v[2], y: v[3] };
        Point { x: v[0], y: v[1] } + w.quarter_turns(-(j as i32))
    };
    for j in 0..4 {
        let e = x.edge(q[j]);
        let d = e.dir();
        alpha[j] = (vertex_of(&xp, j) - e.a).dot(d) / d.norm2();
        for (i, nv) in null.iter().enumerate() {
            beta[j][i] = vertex_of(nv, j).dot(d) / d.norm2();
        }
    }
    // Half-spaces g(λ) = a·λ + b >= 0.
    let mut halfspaces: Vec<(Vec<f64>, f64)> = Vec::with_capacity(8);
    for j in 0..4 {
        let slack = tol * x.diameter() / x.edge_len(q[j]);
        halfspaces.push((beta[j].clone(), alpha[j] + slack));
        halfspaces.push((beta[j].iter().map(|b| -b).collect(), 1.0 + slack - alpha[j]));
    }
    // The on-segment slack lets a point square grow to O(tol·D); anything
    // within the dedup radius of a point is still a point square.
    let w_limit = (EPS_W * scale).max(DEDUP_TOL * x.diameter()).max(100.0 * tol * x.diameter());
    let w_at = |lam: &[f64]| {
        let mut v = xp;
        for (i, nv) in null.iter().enumerate() {
            v += nv * lam[i];
        }
        Point { x: v[2], y: v[3] }.norm()
    };
    let feasible = |lam: &[f64]| {
        halfspaces.iter().all(|(a, b)| a.iter().zip(lam).map(|(ai, li)| ai * li).sum::<f64>() + b >= -1e-12)
    };
    let mut found = false;
    for_each_subset(halfspaces.len(), k, &mut |idx| {
        if found {
            return;
        }
        let a = DMatrix::from_fn(k, k, |r, c| halfspaces[idx[r]].0[c]);
        let b = DVector::from_fn(k, |r, _| -halfspaces[idx[r]].1);
        if let Some(lam) = a.lu().solve(&b) {
            let lam: Vec<f64> = lam.iter().cloned().collect();
            if lam.iter().all(|v| v.is_finite()) && feasible(&lam) && w_at(&lam) > w_limit {
                found = true;
            }
        }
    });
    found
}

fn for_each_subset(n: usize, k: usize, f: &mut dyn FnMut(&[usize])) {
    fn rec(start: usize, n: usize, k: usize, cur: &mut Vec<usize>, f: &mut dyn FnMut(&[usize])) {
        if cur.len() == k {
            f(cur);
            return;
        }
        for i in start..n {
            cur.push(i);
            rec(i + 1, n, k, cur, f);
            cur.pop();
        }
    }
    rec(0, n, k, &mut Vec::with_capacity(k), f)
}

/// Smallest cyclic rotation of a quadruple and the offset that produces it
/// (`canonical[i] == q[(i + offset) % 4]`).
pub fn canonical_quad(q: Quad) -> (Quad, usize) {
    (0..4)
        .map(|r| ([q[r], q[(r + 1) % 4], q[(r + 2) % 4], q[(r + 3) % 4]], r))
        .min()
        .unwrap()
}

fn decode(idx: usize, n: usize) -> Quad {
    [idx / (n * n * n), (idx / (n * n)) % n, (idx / n) % n, idx % n]
}

/// Everything found by a pass over the edge quadruples.
#[derive(Debug, Clone, Default)]
pub struct QuadrupleScan {
    pub hits: Vec<(Quad, InscribedSquare)>,
    pub singular_on_boundary: Vec<Quad>,
}

/// Solve every quadruple (or only the cyclically canonical ones), in
/// deterministic quadruple order.
pub fn scan_quadruples(x: &Polygon, tol: f64, canonical_only: bool) -> QuadrupleScan {
    let n = x.len();
    let lines = edge_lines(x);
    let outcomes: Vec<Option<(Quad, QuadOutcome)>> = (0..n * n * n * n)
        .into_par_iter()
        .map(|idx| {
            let q = decode(idx, n);
            if canonical_only && canonical_quad(q).0 != q {
                return None;
            }
            match solve_quadruple(x, &lines, q, tol) {
                QuadOutcome::Outside | QuadOutcome::PointSquare => None,
                QuadOutcome::Singular { family_on_boundary: false } => None,
                o => Some((q, o)),
            }
        })
        .collect();
    let mut scan = QuadrupleScan::default();
    for (q, o) in outcomes.into_iter().flatten() {
        match o {
            QuadOutcome::Inscribed(s) => scan.hits.push((q, s)),
            QuadOutcome::Singular { .. } => scan.singular_on_boundary.push(q),
            _ => {}
        }
    }
    scan
}

/// Merge hits describing the same geometric square; canonical labels,
/// sorted by center then `w`.
pub fn dedup_squares(x: &Polygon, hits: impl IntoIterator<Item = InscribedSquare>, tol: f64) -> Vec<InscribedSquare> {
    let radius = DEDUP_TOL * x.diameter();
    let mut out: Vec<InscribedSquare> = Vec::new();
    for h in hits {
        if let Some(kept) = out.iter_mut().find(|k| k.square.distance(&h.square) <= radius) {
            kept.touches_vertex |= h.touches_vertex;
        } else {
            out.push(h);
        }
    }
    let mut out: Vec<InscribedSquare> = out.into_iter().map(|s| s.canonical(x, tol)).collect();
    sort_squares(&mut out);
    out
}

pub(crate) fn sort_squares(v: &mut [InscribedSquare]) {
    v.sort_by(|a, b| {
        let (p, q) = (a.square, b.square);
        p.c.x
            .total_cmp(&q.c.x)
            .then(p.c.y.total_cmp(&q.c.y))
            .then(p.w.x.total_cmp(&q.w.x))
            .then(p.w.y.total_cmp(&q.w.y))
    });
}

/// All squares inscribed in `x`, each reported once.
pub fn enumerate_inscribed_squares(x: &Polygon, tol: f64) -> Result<Vec<InscribedSquare>, EnumerateError> {
    let scan = scan_quadruples(x, tol, true);
    if !scan.singular_on_boundary.is_empty() {
        return Err(EnumerateError::NonGenericInput(report_from_scan(x, &scan, tol)));
    }
    Ok(dedup_squares(x, scan.hits.into_iter().map(|(_, s)| s), tol))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Parity {
    pub count: usize,
    pub odd: bool,
}

/// Count and parity; the polygon must pass [`check_generic`].
pub fn parity(x: &Polygon) -> Result<Parity, EnumerateError> {
    let scan = scan_quadruples(x, DEFAULT_TOL, true);
    let report = report_from_scan(x, &scan, DEFAULT_TOL);
    if !report.is_generic() {
        return Err(EnumerateError::NonGenericInput(report));
    }
    let count = dedup_squares(x, scan.hits.into_iter().map(|(_, s)| s), DEFAULT_TOL).len();
    Ok(Parity { count, odd: count % 2 == 1 })
}

pub fn check_generic(x: &Polygon) -> GenericityReport {
    let scan = scan_quadruples(x, DEFAULT_TOL, true);
    report_from_scan(x, &scan, DEFAULT_TOL)
}

fn report_from_scan(x: &Polygon, scan: &QuadrupleScan, tol: f64) -> GenericityReport {
    let mut violations: Vec<Violation> = orthogonal_edge_pairs(x, ORTHOGONAL_TOL)
        .into_iter()
        .map(|edges| Violation::OrthogonalEdgePair { edges })
        .collect();
    violations.extend(
        scan.singular_on_boundary
            .iter()
            .map(|&edges| Violation::SingularQuadrupleWithBoundarySolution { edges }),
    );
    let squares = dedup_squares(x, scan.hits.iter().map(|(_, s)| s.clone()), tol);
    for s in squares.iter().filter(|s| s.touches_vertex) {
        let mut seen = Vec::new();
        for a in s.attachments.iter().filter(|a| a.t == 0.0) {
            if !seen.contains(&a.edge) {
                seen.push(a.edge);
                violations.push(Violation::SquareVertexAtPolygonVertex { vertex: a.edge, square_center: s.square.c });
            }
        }
    }
    for (vertex, angle) in x.interior_angles().into_iter().enumerate() {
        if angle <= PI / 2.0 || angle >= 1.5 * PI {
            violations.push(Violation::NonObtuseAngle { vertex, angle });
        }
    }
    GenericityReport { violations }
}

/// Jiggle every vertex by a uniform sample from the disk of radius `ε·D`
/// until the polygon is simple and generic.
///
/// Attempt `k` draws from stream `k` of a generator seeded with `seed`.
pub fn perturb(x: &Polygon, eps: f64, seed: u64) -> Result<Polygon, EnumerateError> {
    if eps == 0.0 {
        return Ok(x.clone());
    }
    let r = eps * x.diameter();
    for attempt in 0..PERTURB_ATTEMPTS {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        rng.set_stream(attempt);
        let moved: Vec<Point> = x
            .vertices()
            .iter()
            .map(|&p| {
                let rho = r * rng.random::<f64>().sqrt();
                let theta = 2.0 * PI * rng.random::<f64>();
                p + Point { x: rho * theta.cos(), y: rho * theta.sin() }
            })
            .collect();
        let Ok(candidate) = Polygon::new(moved) else { continue };
        if check_generic(&candidate).is_generic() {
            return Ok(candidate);
        }
    }
    Err(EnumerateError::PerturbationFailed(PERTURB_ATTEMPTS))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn canonical_rotation() {
        assert_eq!(canonical_quad([3, 1, 2, 0]), ([0, 3, 1, 2], 3));
        assert_eq!(canonical_quad([1, 1, 1, 1]).0, [1, 1, 1, 1]);
        let (c, r) = canonical_quad([2, 0, 2, 1]);
        assert_eq!(c, [0, 2, 1, 2]);
        assert_eq!(c[0], [2, 0, 2, 1][r]);
    }

    #[test]
    fn subsets() {
        let mut count = 0;
        for_each_subset(8, 3, &mut |_| count += 1);
        assert_eq!(count, 56);
    }

    #[test]
    fn tilted_family_in_square_is_flagged() {
        let sq = Polygon::from_coords(&[[0., 0.], [1., 0.], [1., 1.], [0., 1.]]).unwrap();
        let lines = edge_lines(&sq);
        assert_eq!(
            solve_quadruple(&sq, &lines, [0, 3, 2, 1], DEFAULT_TOL),
            QuadOutcome::Singular { family_on_boundary: true }
        );
    }

    #[test]
    fn collapsed_family_is_not_flagged() {
        // Diagonals on both legs: only the point square at the right angle.
        let tri = Polygon::from_coords(&[[0., 0.], [4., 0.], [0., 4.]]).unwrap();
        let lines = edge_lines(&tri);
        match solve_quadruple(&tri, &lines, [0, 2, 0, 2], DEFAULT_TOL) {
            QuadOutcome::Singular { family_on_boundary } => assert!(!family_on_boundary),
            QuadOutcome::PointSquare | QuadOutcome::Outside => {}
            other => panic!("unexpected {other:?}"),
        }
    }

    #[test]
    fn perturb_zero_is_identity() {
        let tri = Polygon::from_coords(&[[0., 0.], [4., 0.], [3., 1.]]).unwrap();
        assert_eq!(perturb(&tri, 0.0, 9).unwrap(), tri);
    }
}
