use proptest::prelude::*;

use squarepeg::{square_by_rotation_construction, square_through_lines, verify_square, Line, Point, Square, SquareSolveResult};

/// Independent solve of `n_k·(c + Rᵏw) = d_k` by Cramer's rule, with R the
/// clockwise quarter turn and raw (unnormalized) line coefficients.
fn cramer(coeffs: [[f64; 3]; 4]) -> Option<Square> {
    let mut m = [[0f64; 4]; 4];
    let mut rhs = [0f64; 4];
    for (k, [a, b, d]) in coeffs.into_iter().enumerate() {
        // Rᵏw as a linear map of (wx, wy): R(x, y) = (y, -x).
        let (rx, ry) = match k {
            0 => ([1., 0.], [0., 1.]),
            1 => ([0., 1.], [-1., 0.]),
            2 => ([-1., 0.], [0., -1.]),
            _ => ([0., -1.], [1., 0.]),
        };
        m[k] = [a, b, a * rx[0] + b * ry[0], a * rx[1] + b * ry[1]];
        rhs[k] = d;
    }
    fn det3(m: [[f64; 3]; 3]) -> f64 {
        m[0][0] * (m[1][1] * m[2][2] - m[1][2] * m[2][1]) - m[0][1] * (m[1][0] * m[2][2] - m[1][2] * m[2][0])
            + m[0][2] * (m[1][0] * m[2][1] - m[1][1] * m[2][0])
    }
    fn det4(m: [[f64; 4]; 4]) -> f64 {
        (0..4)
            .map(|j| {
                let minor = std::array::from_fn(|r| {
                    let row = m[r + 1];
                    let mut out = [0.; 3];
                    let mut c = 0;
                    for (jj, v) in row.iter().enumerate() {
                        if jj != j {
                            out[c] = *v;
                            c += 1;
                        }
                    }
                    out
                });
                let sign = if j % 2 == 0 { 1. } else { -1. };
                sign * m[0][j] * det3(minor)
            })
            .sum()
    }
    let det = det4(m);
    if det.abs() < 1e-12 {
        return None;
    }
    let x: [f64; 4] = std::array::from_fn(|j| {
        let mut mj = m;
        for r in 0..4 {
            mj[r][j] = rhs[r];
        }
        det4(mj) / det
    });
    Some(Square::new(Point::new(x[0], x[1]), Point::new(x[2], x[3])))
}

fn lines(coeffs: [[f64; 3]; 4]) -> [Line; 4] {
    coeffs.map(|[a, b, c]| Line::from_coeffs(a, b, c).unwrap())
}

const WORKED: [[f64; 3]; 4] = [[1., -1., 0.], [1., 2., 2.], [3., -1., 8.], [1., -3., 6.]];

#[test]
fn worked_example_matches_cramer() {
    let oracle = cramer(WORKED).unwrap();
    // Substitution check of the oracle itself.
    for (k, [a, b, d]) in WORKED.into_iter().enumerate() {
        let v = oracle.vertex(k);
        assert!((a * v.x + b * v.y - d).abs() < 1e-12);
    }
    let sq = square_through_lines(&lines(WORKED)).square().unwrap();
    assert!(sq.c.dist(oracle.c) < 1e-12 && sq.w.dist(oracle.w) < 1e-12);
    assert!(sq.c.dist(Point::new(1., -1.)) < 1e-12);
    assert!(sq.w.dist(Point::new(-1., 1.)) < 1e-12);
    let expected = [Point::new(0., 0.), Point::new(2., 0.), Point::new(2., -2.), Point::new(0., -2.)];
    for (v, e) in sq.vertices().iter().zip(expected) {
        assert!(v.dist(e) < 1e-12);
    }
}

#[test]
fn worked_example_by_rotation() {
    let l = lines(WORKED);
    let a = square_through_lines(&l).square().unwrap();
    let b = square_by_rotation_construction(&l).square().unwrap();
    assert!(a.distance(&b) <= 1e-8 * 8.0);
}

#[test]
fn square_sides_family_is_singular() {
    let l = lines([[0., 1., 0.], [1., 0., 1.], [0., 1., 1.], [1., 0., 0.]]);
    assert!(matches!(square_through_lines(&l), SquareSolveResult::Singular(_)));
}

#[test]
fn concurrent_lines_give_a_point_square() {
    let dirs = [[0., 1.], [1., -1.], [1., 0.], [1., 1.]];
    let mut found = false;
    for r in 0..4 {
        let c: [[f64; 3]; 4] = std::array::from_fn(|k| {
            let [a, b] = dirs[(k + r) % 4];
            [a, b, 0.]
        });
        match square_through_lines(&lines(c)) {
            SquareSolveResult::PointSquare(p) => {
                assert!(p.norm() < 1e-12);
                found = true;
            }
            SquareSolveResult::Singular(_) => {}
            SquareSolveResult::Unique(s) => panic!("unexpected square {s:?}"),
        }
    }
    assert!(found);
}

#[test]
fn perpendicular_pair_defeats_only_the_construction() {
    // ℓ1: y = x, ℓ2: x = 1, ℓ3: 2x − y = −3, ℓ4: y = −5.
    let l = lines([[1., -1., 0.], [1., 0., 1.], [2., -1., -3.], [0., 1., -5.]]);
    assert!(cramer([[1., -1., 0.], [1., 0., 1.], [2., -1., -3.], [0., 1., -5.]]).is_some());
    assert!(matches!(square_through_lines(&l), SquareSolveResult::Unique(_)));
    assert!(matches!(square_by_rotation_construction(&l), SquareSolveResult::Singular(_)));
}

#[test]
fn parallel_locus_is_singular() {
    use squarepeg::solver::traced_locus;
    let [l1, l2, _, l4] = lines(WORKED);
    let locus = traced_locus(&l1, &l2, &l4).unwrap();
    // Parallel to the traced locus, offset away from it.
    let l3 = Line { n: locus.n, d: locus.d + 1.0 };
    assert!(matches!(square_by_rotation_construction(&[l1, l2, l3, l4]), SquareSolveResult::Singular(_)));
}

#[test]
fn verify_rejects_wrong_squares() {
    let l = lines(WORKED);
    let sq = square_through_lines(&l).square().unwrap();
    assert!(verify_square(&sq, &l, 1e-9));
    assert!(!verify_square(&sq, &[l[1], l[0], l[2], l[3]], 1e-9));
    let grown = Square::new(sq.c, sq.w * (1.0 + 10.0 * 1e-9 * 10.0));
    assert!(!verify_square(&grown, &l, 1e-9));
}

fn line_strategy() -> impl Strategy<Value = Line> {
    (0.0..std::f64::consts::TAU, -5.0..5.0f64).prop_map(|(th, d)| Line::from_coeffs(th.cos(), th.sin(), d).unwrap())
}

fn scale_of(lines: &[Line; 4], sq: &Square) -> f64 {
    sq.vertices().iter().fold(lines.iter().fold(1f64, |m, l| m.max(l.d.abs())), |m, p| m.max(p.max_abs()))
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(1000))]

    #[test]
    fn unique_solutions_verify(l in prop::array::uniform4(line_strategy())) {
        if let SquareSolveResult::Unique(sq) = square_through_lines(&l) {
            prop_assert!(verify_square(&sq, &l, 1e-9));
            if let SquareSolveResult::Unique(other) = square_by_rotation_construction(&l) {
                prop_assert!(sq.distance(&other) <= 1e-8 * scale_of(&l, &sq));
            }
        }
    }

    #[test]
    fn rigid_motion_equivariance(l in prop::array::uniform4(line_strategy()), th in 0.0..std::f64::consts::TAU, tx in -3.0..3.0f64, ty in -3.0..3.0f64) {
        let SquareSolveResult::Unique(sq) = square_through_lines(&l) else { return Ok(()) };
        let (c, s) = (th.cos(), th.sin());
        let f = |p: Point| Point::new(c * p.x - s * p.y + tx, s * p.x + c * p.y + ty);
        let moved = l.map(|m| Line::through(f(m.foot()), f(m.foot() + m.dir())).unwrap());
        let SquareSolveResult::Unique(img) = square_through_lines(&moved) else {
            return Err(TestCaseError::fail("moved system became degenerate"));
        };
        let expected = Square::new(f(sq.c), f(sq.vertex(0)) - f(sq.c));
        prop_assert!(img.distance(&expected) <= 1e-9 * scale_of(&moved, &img).max(scale_of(&l, &sq)));
    }

    #[test]
    fn offsets_scale_the_square(l in prop::array::uniform4(line_strategy()), lambda in 0.1..10.0f64) {
        let SquareSolveResult::Unique(sq) = square_through_lines(&l) else { return Ok(()) };
        let scaled = l.map(|m| Line { n: m.n, d: m.d * lambda });
        let img = square_through_lines(&scaled).square().unwrap();
        let tol = 1e-9 * scale_of(&scaled, &img).max(1.0);
        prop_assert!(img.c.dist(sq.c * lambda) <= tol);
        prop_assert!(img.w.dist(sq.w * lambda) <= tol);
    }

    #[test]
    fn repeated_line_carries_a_side(l in line_strategy(), l3 in line_strategy(), l4 in line_strategy()) {
        let q = [l, l, l3, l4];
        let SquareSolveResult::Unique(sq) = square_through_lines(&q) else { return Ok(()) };
        let tol = 1e-9 * scale_of(&q, &sq);
        prop_assert!(l.signed_dist(sq.vertex(0)).abs() <= tol);
        prop_assert!(l.signed_dist(sq.vertex(1)).abs() <= tol);
    }
}
