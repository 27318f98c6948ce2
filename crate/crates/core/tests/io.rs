mod common;

use squarepeg::gen::{gen_random_polygon, GenError, Method};
use squarepeg::geom::{is_simple, GeomError};
use squarepeg::io::{load_polygon, parse_polygon, parse_scenario, polygon_to_json, save_polygon, scenario_to_json, IoError};
use squarepeg::svg::render_svg;
use squarepeg::torus::trace_U;
use squarepeg::{enumerate_inscribed_squares, perturb, Polygon};

use common::*;

#[test]
fn polygon_round_trip_is_exact() {
    let dir = std::env::temp_dir().join(format!("squarepeg-io-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    for seed in 0..20 {
        let x = perturb(&gen_random_polygon(9, seed, Method::Angular).unwrap(), 1e-3, seed).unwrap();
        let path = dir.join(format!("{seed}.json"));
        save_polygon(&path, &x).unwrap();
        assert_eq!(load_polygon(&path).unwrap().vertices(), x.vertices());
        assert_eq!(parse_polygon(&polygon_to_json(&x)).unwrap(), x);
    }
    std::fs::remove_dir_all(&dir).unwrap();
}

#[test]
fn scenario_round_trip() {
    let sc = scenario("shrink");
    assert_eq!(parse_scenario(&scenario_to_json(&sc)).unwrap(), sc);
}

#[test]
fn diagnostics_name_the_invariant() {
    assert!(matches!(parse_polygon(r#"{"vertices": [[0,0],[1,0]]}"#), Err(IoError::Polygon(GeomError::TooFewVertices(2)))));
    assert!(matches!(parse_polygon(r#"{"vertices": [[0,0],[2,2],[2,0],[0,2]]}"#), Err(IoError::Polygon(GeomError::NotSimple { .. }))));
    assert!(matches!(parse_polygon(r#"{"points": []}"#), Err(IoError::Parse(_))));
    assert!(matches!(parse_scenario(r#"{"keyframes": [{"time": 0, "vertices": [[0,0],[1,0],[0,1]]}]}"#), Err(IoError::Scenario(_))));
    let e = parse_polygon(r#"{"vertices": [[0,0],[2,2],[2,0],[0,2]]}"#).unwrap_err().to_string();
    assert!(e.contains("simple"), "{e}");
}

#[test]
fn generator_contract() {
    assert_eq!(gen_random_polygon(5, 42, Method::Angular).unwrap(), gen_random_polygon(5, 42, Method::Angular).unwrap());
    for seed in 0..50 {
        assert!(is_simple(gen_random_polygon(11, seed, Method::Angular).unwrap().vertices()).simple);
    }
    let x = gen_random_polygon(8, 7, Method::Uncross).unwrap();
    assert_eq!(x.len(), 8);
    assert!(is_simple(x.vertices()).simple);
    assert!(matches!(gen_random_polygon(2, 0, Method::Uncross), Err(GenError::TooFew(2))));
}

fn closed_paths(svg: &str) -> usize {
    svg.matches("Z\"").count()
}

#[test]
fn svg_paths() {
    let x = Polygon::from_coords(&[[0., 0.], [4., 0.], [0., 4.]]).unwrap();
    assert_eq!(closed_paths(&render_svg(&x, &[], None)), 1);
    let squares = squares_of(&enumerate_inscribed_squares(&x, 1e-9).unwrap());
    assert_eq!(squares.len(), 2);
    assert_eq!(closed_paths(&render_svg(&x, &squares, None)), 3);
}

#[test]
fn svg_is_deterministic() {
    let x = polygon("pentagon_perturbed");
    let squares = squares_of(&enumerate_inscribed_squares(&x, 1e-9).unwrap());
    let curves = trace_U(&x).unwrap();
    let a = render_svg(&x, &squares, Some(&curves));
    let b = render_svg(&x, &squares, Some(&curves));
    assert_eq!(a, b);
    assert!(a.contains("<polyline") && a.contains("stroke-dasharray"));
    assert_eq!(closed_paths(&a), 1 + squares.len());
}
