//! The clockwise square with one vertex on each of four lines.
//!
//! A square is stored as a center `c` and the vector `w` from `c` to its
//! first vertex; vertex `k` (1-based) is `c + R^(k-1) w` with `R` the exact
//! clockwise quarter turn. Requiring `a_k ∈ ℓ_k` gives four linear
//! equations in `(c, w)`:
//!
//! ```text
//! n_k · c + (J^(k-1) n_k) · w = d_k        (J = R⁻¹, counterclockwise)
//! ```
//!
//! [`square_through_lines`] solves that system directly and copes with
//! repeated lines. [`square_by_rotation_construction`] is the classical
//! rotate-and-intersect construction and exists as an independent check.

use nalgebra::{Matrix4, Vector4};

use crate::geom::{signed_area_of, Line, Point};

/// Singularity threshold on `|det M|`, relative to the matrix scale⁴.
pub const EPS_DET: f64 = 1e-12;
/// Point-square threshold on `‖w‖`, relative to the line scale.
pub const EPS_W: f64 = 1e-10;

/// A clockwise square.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Square {
    pub c: Point,
    pub w: Point,
}

impl Square {
    pub fn new(c: Point, w: Point) -> Square {
        Square { c, w }
    }

    /// Square from its four vertices, given in clockwise order.
    pub fn from_cw_vertices(v: [Point; 4]) -> Square {
        let c = (v[0] + v[1] + v[2] + v[3]) * 0.25;
        Square { c, w: v[0] - c }
    }

    pub fn vertex(&self, k: usize) -> Point {
        let mut r = self.w;
        for _ in 0..k % 4 {
            r = r.perp_cw();
        }
        self.c + r
    }

    pub fn vertices(&self) -> [Point; 4] {
        [self.vertex(0), self.vertex(1), self.vertex(2), self.vertex(3)]
    }

    pub fn side(&self) -> f64 {
        self.w.norm() * std::f64::consts::SQRT_2
    }

    /// Same square, relabeled to start at vertex `k`.
    pub fn relabeled(&self, k: usize) -> Square {
        Square { c: self.c, w: self.vertex(k) - self.c }
    }

    /// Distance between the vertex sets of two squares: the smallest, over
    /// cyclic relabelings, of the largest vertex displacement.
    pub fn distance(&self, o: &Square) -> f64 {
        let (a, b) = (self.vertices(), o.vertices());
        (0..4)
            .map(|j| (0..4).map(|k| a[k].dist(b[(k + j) % 4])).fold(0f64, f64::max))
            .fold(f64::INFINITY, f64::min)
    }
}

/// Why a solve failed to produce a square.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Degeneracy {
    /// The 4×4 system is singular.
    Determinant,
    /// ℓ2 ⊥ ℓ4: the rotated ℓ4 never meets ℓ2 (rotation construction only).
    PerpendicularPair,
    /// ℓ3 is parallel to the locus traced by the fourth vertex.
    ParallelLocus,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum SquareSolveResult {
    Unique(Square),
    /// The unique solution collapses to a single point.
    PointSquare(Point),
    Singular(Degeneracy),
}

impl SquareSolveResult {
    pub fn square(&self) -> Option<Square> {
        match self {
            SquareSolveResult::Unique(s) => Some(*s),
            _ => None,
        }
    }
}

/// `max(1, |d_k|)`, the length scale of a line quadruple.
pub fn line_scale(lines: &[Line; 4]) -> f64 {
    lines.iter().fold(1f64, |m, l| m.max(l.d.abs()))
}

/// The system matrix and right-hand side for a line quadruple.
pub fn system(lines: &[Line; 4]) -> (Matrix4<f64>, Vector4<f64>) {
    let mut m = Matrix4::zeros();
    let mut rhs = Vector4::zeros();
    for (k, l) in lines.iter().enumerate() {
        let g = l.n.quarter_turns(k as i32);
        m[(k, 0)] = l.n.x;
        m[(k, 1)] = l.n.y;
        m[(k, 2)] = g.x;
        m[(k, 3)] = g.y;
        rhs[k] = l.d;
    }
    (m, rhs)
}

pub(crate) fn is_singular(m: &Matrix4<f64>) -> bool {
    let scale = m.amax();
    m.determinant().abs() < EPS_DET * scale.powi(4)
}

/// Solve for the clockwise square with `a_k ∈ ℓ_k`. Lines may repeat.
pub fn square_through_lines(lines: &[Line; 4]) -> SquareSolveResult {
    let (m, rhs) = system(lines);
    if is_singular(&m) {
        return SquareSolveResult::Singular(Degeneracy::Determinant);
    }
    let Some(x) = m.lu().solve(&rhs) else {
        return SquareSolveResult::Singular(Degeneracy::Determinant);
    };
    let c = Point { x: x[0], y: x[1] };
    let w = Point { x: x[2], y: x[3] };
    if w.norm() <= EPS_W * line_scale(lines) {
        SquareSolveResult::PointSquare(c)
    } else {
        SquareSolveResult::Unique(Square { c, w })
    }
}

const PARALLEL_TOL: f64 = 1e-12;

/// Right isosceles triangle `(z2, z1, z4)` for a chosen `z1`, completed to
/// the square `[z1 z2 z3 z4]`. `None` if ℓ2 is parallel to the rotated ℓ4.
fn complete_from(z1: Point, l2: &Line, l4: &Line) -> Option<[Point; 4]> {
    let l4r = l4.rotated(z1, 1);
    let z2 = l2.intersect(&l4r, PARALLEL_TOL)?;
    let z4 = crate::geom::rotate(z2, z1, -1);
    let z3 = z2 + z4 - z1;
    Some([z1, z2, z3, z4])
}

/// The line traced by the third vertex as the first slides along ℓ1.
///
/// `None` when ℓ2 ⊥ ℓ4 or the locus degenerates to a point.
pub fn traced_locus(l1: &Line, l2: &Line, l4: &Line) -> Option<Line> {
    let (p0, p1) = locus_samples(l1, l2, l4)?;
    Line::through(p0.1[2], p1.1[2]).ok()
}

type Sample = (Point, [Point; 4]);

fn locus_samples(l1: &Line, l2: &Line, l4: &Line) -> Option<(Sample, Sample)> {
    if l2.n.dot(l4.n).abs() < PARALLEL_TOL {
        return None;
    }
    let scale = 1f64.max(l1.d.abs()).max(l2.d.abs()).max(l4.d.abs());
    let z1a = l1.foot();
    let z1b = z1a + l1.dir() * scale;
    Some(((z1a, complete_from(z1a, l2, l4)?), (z1b, complete_from(z1b, l2, l4)?)))
}

/// The rotate-and-intersect construction: fix `z1 ∈ ℓ1`, rotate ℓ4 about
/// it by a quarter turn, meet ℓ2 to get `z2`, rotate back to get `z4`,
/// complete `z3`; then slide `z1` so that `z3` lands on ℓ3.
pub fn square_by_rotation_construction(lines: &[Line; 4]) -> SquareSolveResult {
    let [l1, l2, l3, l4] = lines;
    let Some(((z1a, sq_a), (z1b, sq_b))) = locus_samples(l1, l2, l4) else {
        return SquareSolveResult::Singular(Degeneracy::PerpendicularPair);
    };
    // z3 is affine in the position of z1 along ℓ1.
    let dz3 = sq_b[2] - sq_a[2];
    let denom = l3.n.dot(dz3);
    if denom.abs() <= PARALLEL_TOL * dz3.norm().max(1.0) {
        return SquareSolveResult::Singular(Degeneracy::ParallelLocus);
    }
    let lambda = (l3.d - l3.n.dot(sq_a[2])) / denom;
    let z1 = z1a + (z1b - z1a) * lambda;
    let Some(v) = complete_from(z1, l2, l4) else {
        return SquareSolveResult::Singular(Degeneracy::PerpendicularPair);
    };
    let sq = Square::from_cw_vertices(v);
    if sq.w.norm() <= EPS_W * line_scale(lines) {
        SquareSolveResult::PointSquare(sq.c)
    } else {
        SquareSolveResult::Unique(sq)
    }
}

/// Vertex `k` within `tol·scale` of line `k`, equal sides, clockwise.
pub fn verify_square(sq: &Square, lines: &[Line; 4], tol: f64) -> bool {
    let v = sq.vertices();
    let scale = v.iter().fold(line_scale(lines), |m, p| m.max(p.max_abs()));
    let on_lines = v.iter().zip(lines).all(|(p, l)| l.signed_dist(*p).abs() <= tol * scale);
    let sides: Vec<f64> = (0..4).map(|k| v[k].dist(v[(k + 1) % 4])).collect();
    let spread = sides.iter().cloned().fold(f64::MIN, f64::max) - sides.iter().cloned().fold(f64::MAX, f64::min);
    on_lines && spread <= tol * scale && signed_area_of(&v) < 0.0
}

#[cfg(test)]
mod tests {
    use super::*;

    fn line(a: f64, b: f64, c: f64) -> Line {
        Line::from_coeffs(a, b, c).unwrap()
    }

    fn worked_example() -> [Line; 4] {
        [line(1., -1., 0.), line(1., 2., 2.), line(3., -1., 8.), line(1., -3., 6.)]
    }

    #[test]
    fn vertices_are_clockwise() {
        let sq = Square::new(Point::new(1.0, -1.0), Point::new(-1.0, 1.0));
        let v = sq.vertices();
        assert_eq!(v, [Point::new(0., 0.), Point::new(2., 0.), Point::new(2., -2.), Point::new(0., -2.)]);
        assert!(signed_area_of(&v) < 0.0);
        assert!(Square::from_cw_vertices(v).distance(&sq) < 1e-15);
    }

    #[test]
    fn singular_for_axis_aligned_square_sides() {
        let lines = [line(0., 1., 0.), line(1., 0., 1.), line(0., 1., 1.), line(1., 0., 0.)];
        let (m, _) = system(&lines);
        assert!((0..4).all(|r| m[(r, 2)] == 0.0));
        assert_eq!(square_through_lines(&lines), SquareSolveResult::Singular(Degeneracy::Determinant));
    }

    #[test]
    fn rotation_construction_rejects_perpendicular_pair() {
        let lines = [line(1., -1., 0.), line(1., 0., 1.), line(2., -1., -3.), line(0., 1., -5.)];
        assert!(matches!(square_through_lines(&lines), SquareSolveResult::Unique(_)));
        assert_eq!(
            square_by_rotation_construction(&lines),
            SquareSolveResult::Singular(Degeneracy::PerpendicularPair)
        );
    }

    #[test]
    fn verify_rejects_perturbations() {
        let lines = worked_example();
        let sq = square_through_lines(&lines).square().unwrap();
        assert!(verify_square(&sq, &lines, 1e-9));
        let swapped = [lines[1], lines[0], lines[2], lines[3]];
        assert!(!verify_square(&sq, &swapped, 1e-9));
        let grown = Square::new(sq.c, sq.w * (1.0 + 10.0 * 1e-9));
        assert!(!verify_square(&grown, &lines, 1e-9));
    }
}
