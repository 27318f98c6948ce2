#![allow(dead_code)]

use std::path::PathBuf;

use squarepeg::io::{load_polygon, load_scenario};
use squarepeg::deform::DeformationScenario;
use squarepeg::{InscribedSquare, Polygon, Square};

pub const GENERIC_FIXTURES: [&str; 15] = [
    "obtuse_triangle",
    "pentagon",
    "pentagon_perturbed",
    "generic_01",
    "generic_02",
    "generic_03",
    "generic_04",
    "generic_05",
    "generic_06",
    "generic_07",
    "generic_08",
    "generic_09",
    "generic_10",
    "generic_11",
    "generic_12",
];

pub const ALL_FIXTURES: [&str; 17] = [
    "right_triangle",
    "unit_square",
    "obtuse_triangle",
    "pentagon",
    "pentagon_perturbed",
    "generic_01",
    "generic_02",
    "generic_03",
    "generic_04",
    "generic_05",
    "generic_06",
    "generic_07",
    "generic_08",
    "generic_09",
    "generic_10",
    "generic_11",
    "generic_12",
];

pub fn fixture_dir() -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("fixtures")
}

pub fn polygon_path(name: &str) -> PathBuf {
    fixture_dir().join("polygons").join(format!("{name}.json"))
}

pub fn scenario_path(name: &str) -> PathBuf {
    fixture_dir().join("scenarios").join(format!("{name}.json"))
}

pub fn polygon(name: &str) -> Polygon {
    load_polygon(polygon_path(name)).unwrap_or_else(|e| panic!("fixture {name}: {e}"))
}

pub fn scenario(name: &str) -> DeformationScenario {
    load_scenario(scenario_path(name)).unwrap_or_else(|e| panic!("scenario {name}: {e}"))
}

/// Greedy one-to-one matching of two square sets; the largest matched
/// distance, or `None` when the sets cannot be matched.
pub fn match_squares(a: &[Square], b: &[Square], tol: f64) -> Option<f64> {
    if a.len() != b.len() {
        return None;
    }
    let mut used = vec![false; b.len()];
    let mut worst = 0f64;
    for s in a {
        let (j, d) = b
            .iter()
            .enumerate()
            .filter(|(j, _)| !used[*j])
            .map(|(j, t)| (j, s.distance(t)))
            .min_by(|p, q| p.1.total_cmp(&q.1))?;
        if d > tol {
            return None;
        }
        used[j] = true;
        worst = worst.max(d);
    }
    Some(worst)
}

pub fn squares_of(v: &[InscribedSquare]) -> Vec<Square> {
    v.iter().map(|s| s.square).collect()
}
