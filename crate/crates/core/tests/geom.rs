use proptest::prelude::*;

use squarepeg::geom::{is_simple, point_location, segment_intersection, signed_area, Intersection};
use squarepeg::{rotate, Line, Location, Point, Polygon, Segment};

fn tri() -> Polygon {
    Polygon::from_coords(&[[0., 0.], [4., 0.], [0., 4.]]).unwrap()
}

fn unit_square() -> Polygon {
    Polygon::from_coords(&[[0., 0.], [1., 0.], [1., 1.], [0., 1.]]).unwrap()
}

fn seg(a: [f64; 2], b: [f64; 2]) -> Segment {
    Segment::new(Point::new(a[0], a[1]), Point::new(b[0], b[1])).unwrap()
}

#[test]
fn quarter_turns() {
    assert_eq!(rotate(Point::new(1., 0.), Point::ORIGIN, 1), Point::new(0., 1.));
    assert_eq!(rotate(Point::new(2., 1.), Point::new(1., 1.), 1), Point::new(1., 2.));
    assert_eq!(rotate(Point::new(0., 1.), Point::ORIGIN, -1), Point::new(1., 0.));
}

#[test]
fn shoelace() {
    assert_eq!(signed_area(&unit_square()), 1.0);
    assert_eq!(signed_area(&unit_square().reversed()), -1.0);
    assert_eq!(signed_area(&tri()), 8.0);
}

#[test]
fn segment_cases() {
    assert_eq!(
        segment_intersection(&seg([0., 0.], [2., 2.]), &seg([0., 2.], [2., 0.]), 1e-12),
        Intersection::Point(Point::new(1., 1.))
    );
    assert_eq!(segment_intersection(&seg([0., 0.], [1., 0.]), &seg([0., 1.], [1., 1.]), 1e-12), Intersection::None);
    match segment_intersection(&seg([0., 0.], [2., 0.]), &seg([1., 0.], [3., 0.]), 1e-12) {
        Intersection::Overlap(s) => {
            let mut ends = [s.a.x, s.b.x];
            ends.sort_by(f64::total_cmp);
            assert_eq!(ends, [1., 2.]);
        }
        other => panic!("expected overlap, got {other:?}"),
    }
}

#[test]
fn locations() {
    let x = tri();
    assert_eq!(point_location(Point::new(4. / 3., 4. / 3.), &x, 1e-9), Location::Inside);
    assert_eq!(point_location(Point::new(100., 100.), &x, 1e-9), Location::Outside);
    assert_eq!(point_location(Point::new(2., 0.), &x, 1e-9), Location::Boundary);
}

#[test]
fn simplicity() {
    let pts = |c: &[[f64; 2]]| c.iter().map(|p| Point::new(p[0], p[1])).collect::<Vec<_>>();
    assert!(is_simple(&pts(&[[0., 0.], [3., 0.], [4., 2.], [1., 3.]])).simple);
    let bowtie = is_simple(&pts(&[[0., 0.], [2., 2.], [2., 0.], [0., 2.]]));
    assert!(!bowtie.simple);
    assert_eq!(bowtie.offending, vec![(0, 2)]);
    assert!(is_simple(&pts(&[[0., 0.], [4., 0.], [0., 4.]])).simple);
    assert!(Polygon::from_coords(&[[0., 0.], [2., 2.], [2., 0.], [0., 2.]]).is_err());
}

#[test]
fn angles() {
    use std::f64::consts::PI;
    for a in unit_square().interior_angles() {
        assert!((a - PI / 2.).abs() < 1e-12);
    }
    let pent: Vec<[f64; 2]> = (0..5)
        .map(|k| {
            let th = PI / 2. + 2. * PI * k as f64 / 5.;
            [th.cos(), th.sin()]
        })
        .collect();
    for a in Polygon::from_coords(&pent).unwrap().interior_angles() {
        assert!((a - 3. * PI / 5.).abs() < 1e-12);
    }
    let ell = Polygon::from_coords(&[[0., 0.], [2., 0.], [2., 1.], [1., 1.], [1., 2.], [0., 2.]]).unwrap();
    let mut got = ell.interior_angles();
    got.sort_by(f64::total_cmp);
    for a in &got[..5] {
        assert!((a - PI / 2.).abs() < 1e-12);
    }
    assert!((got[5] - 3. * PI / 2.).abs() < 1e-12);
    // Orientation does not matter.
    let rev = ell.reversed().interior_angles();
    assert!(rev.iter().any(|a| (a - 3. * PI / 2.).abs() < 1e-12));
}

#[test]
fn arc_length_parameterization() {
    let x = unit_square();
    assert_eq!(x.boundary_point(0.0), (Point::new(0., 0.), 0));
    assert_eq!(x.boundary_point(1.5), (Point::new(1., 0.5), 1));
    let (p, e) = x.boundary_point(4.0 - 1e-15);
    assert!(p.dist(Point::ORIGIN) < 1e-9);
    assert_eq!(e, 3);
    // Vertices belong to their outgoing edge.
    assert_eq!(x.boundary_point(1.0).1, 1);
}

#[test]
fn lines_compare_up_to_sign() {
    let l = Line::from_coeffs(3., 4., 5.).unwrap();
    let m = Line::from_coeffs(-6., -8., -10.).unwrap();
    assert_eq!(l, m);
    assert!((l.n.norm() - 1.).abs() < 1e-12);
    assert!(Line::from_coeffs(0., 0., 1.).is_err());
    assert!(Point::try_new(f64::NAN, 0.).is_err());
    assert!(Segment::new(Point::ORIGIN, Point::ORIGIN).is_err());
}

fn brute_force_simple(v: &[Point]) -> bool {
    let n = v.len();
    let e = |i: usize| Segment::new(v[i], v[(i + 1) % n]);
    for i in 0..n {
        let Ok(a) = e(i) else { return false };
        for j in i + 1..n {
            let b = e(j).unwrap();
            let adjacent = j == i + 1 || (i == 0 && j == n - 1);
            match segment_intersection(&a, &b, 1e-12) {
                Intersection::None => {}
                Intersection::Overlap(_) => return false,
                Intersection::Point(p) => {
                    let shared = if j == i + 1 { v[j] } else { v[i] };
                    if !adjacent || p.dist(shared) > 1e-9 {
                        return false;
                    }
                }
            }
        }
    }
    true
}

proptest! {
    #[test]
    fn four_turns_are_identity(px in -1e3..1e3f64, py in -1e3..1e3f64, cx in -1e3..1e3f64, cy in -1e3..1e3f64) {
        let (p, c) = (Point::new(px, py), Point::new(cx, cy));
        let q = (0..4).fold(p, |q, _| rotate(q, c, 1));
        // Rounding happens at the magnitude of the coordinates, not of p − c.
        prop_assert!(q.dist(p) <= 1e-12 * p.dist(c).max(p.max_abs()).max(c.max_abs()));
    }

    #[test]
    fn intersection_is_symmetric(c in prop::array::uniform8(-3.0..3.0f64)) {
        let (Ok(s1), Ok(s2)) = (
            Segment::new(Point::new(c[0], c[1]), Point::new(c[2], c[3])),
            Segment::new(Point::new(c[4], c[5]), Point::new(c[6], c[7])),
        ) else { return Ok(()) };
        let (a, b) = (segment_intersection(&s1, &s2, 1e-12), segment_intersection(&s2, &s1, 1e-12));
        match (a, b) {
            (Intersection::None, Intersection::None) => {}
            (Intersection::Point(p), Intersection::Point(q)) => prop_assert!(p.dist(q) < 1e-9),
            (Intersection::Overlap(_), Intersection::Overlap(_)) => {}
            other => prop_assert!(false, "asymmetric: {:?}", other),
        }
    }

    #[test]
    fn location_is_rigid_invariant(px in -1.0..5.0f64, py in -1.0..5.0f64, th in 0.0..6.3f64, tx in -5.0..5.0f64, ty in -5.0..5.0f64) {
        let x = tri();
        let (c, s) = (th.cos(), th.sin());
        let f = |p: Point| Point::new(c * p.x - s * p.y + tx, s * p.x + c * p.y + ty);
        let p = Point::new(px, py);
        // Stay clear of the boundary band where rounding decides.
        prop_assume!(x.boundary_dist(p) > 1e-6 || x.boundary_dist(p) == 0.0);
        prop_assert_eq!(point_location(p, &x, 1e-9), point_location(f(p), &x.map_similarity(f), 1e-9));
    }

    #[test]
    fn unit_speed_on_edges(s in 0.0..4.0f64, d in 0.0..0.5f64) {
        let x = Polygon::from_coords(&[[0., 0.], [2., 0.], [3., 1.], [0., 2.]]).unwrap();
        let (p, e) = x.boundary_point(s);
        let (q, f) = x.boundary_point(s + d);
        prop_assume!(e == f);
        prop_assert!((p.dist(q) - d).abs() < 1e-12);
    }

    #[test]
    fn simplicity_matches_brute_force(c in prop::collection::vec((-1.0..1.0f64, -1.0..1.0f64), 3..9)) {
        let v: Vec<Point> = c.iter().map(|&(x, y)| Point::new(x, y)).collect();
        prop_assert_eq!(is_simple(&v).simple, brute_force_simple(&v));
    }
}
