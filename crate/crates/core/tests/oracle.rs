mod common;

use squarepeg::oracle::{approx_squares, compare, OracleError, DEFAULT_DELTA, DEFAULT_N, MERGE_FACTOR};
use squarepeg::{enumerate_inscribed_squares, Polygon};

use common::*;

#[test]
fn right_triangle_two_clusters_agree() {
    let x = Polygon::from_coords(&[[0., 0.], [4., 0.], [0., 4.]]).unwrap();
    let approx = approx_squares(&x, DEFAULT_N, DEFAULT_DELTA).unwrap();
    assert_eq!(approx.len(), 2);
    let exact = enumerate_inscribed_squares(&x, 1e-9).unwrap();
    assert!(compare(&x, &exact, &approx, DEFAULT_DELTA).agrees());
}

#[test]
fn square_polygon_is_a_continuum() {
    let x = polygon("unit_square");
    assert!(matches!(approx_squares(&x, DEFAULT_N, DEFAULT_DELTA), Err(OracleError::ContinuumSuspected { .. })));
}

#[test]
fn rejects_bad_parameters() {
    let x = polygon("obtuse_triangle");
    assert!(matches!(approx_squares(&x, 99, DEFAULT_DELTA), Err(OracleError::TooFewSamples(99))));
    assert!(matches!(approx_squares(&x, 1000, 0.0), Err(OracleError::BadDelta(_))));
    assert!(matches!(approx_squares(&x, 1000, f64::NAN), Err(OracleError::BadDelta(_))));
}

#[test]
fn cluster_invariants_and_deletion() {
    let x = polygon("pentagon_perturbed");
    let approx = approx_squares(&x, DEFAULT_N, DEFAULT_DELTA).unwrap();
    let exact = enumerate_inscribed_squares(&x, 1e-9).unwrap();
    assert_eq!(approx.len(), exact.len());
    let radius = MERGE_FACTOR * DEFAULT_DELTA * x.diameter();
    for (i, a) in approx.iter().enumerate() {
        assert!(a.residual <= DEFAULT_DELTA);
        assert!(a.hits >= 3);
        for b in &approx[i + 1..] {
            assert!(a.representative.distance(&b.representative) > radius);
        }
    }
    let cmp = compare(&x, &exact[1..], &approx, DEFAULT_DELTA);
    assert!(cmp.unmatched_exact.is_empty());
    assert_eq!(cmp.unmatched_approx.len(), 1);
    assert!(compare(&x, &[], &[], DEFAULT_DELTA).agrees());
}

#[test]
fn doubling_samples_never_loses_matches() {
    for name in ["obtuse_triangle", "pentagon_perturbed", "generic_02"] {
        let x = polygon(name);
        let exact = enumerate_inscribed_squares(&x, 1e-9).unwrap();
        let matched = |n| compare(&x, &exact, &approx_squares(&x, n, DEFAULT_DELTA).unwrap(), DEFAULT_DELTA).matched.len();
        let (a, b) = (matched(2000), matched(4000));
        assert!(b >= a, "{name}: {a} -> {b}");
    }
}
