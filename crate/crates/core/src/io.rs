//! JSON polygon and scenario files.
//!
//! Floats are written in shortest round-trip form, so load after save is
//! the identity on every vertex.

use std::fs;
use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::deform::{DeformError, DeformationScenario};
use crate::geom::{GeomError, Point, Polygon};

#[derive(Debug, Error)]
pub enum IoError {
    #[error("{path}: {source}")]
    Io { path: PathBuf, source: std::io::Error },
    #[error("malformed JSON: {0}")]
    Parse(#[from] serde_json::Error),
    #[error("invalid polygon: {0}")]
    Polygon(#[from] GeomError),
    #[error("invalid scenario: {0}")]
    Scenario(#[from] DeformError),
}

/// `{"vertices": [[x, y], ...]}`: implicitly closed, first vertex not repeated.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct PolygonFile {
    pub vertices: Vec<[f64; 2]>,
}

impl PolygonFile {
    pub fn from_polygon(x: &Polygon) -> PolygonFile {
        PolygonFile { vertices: coords(x.vertices()) }
    }

    pub fn to_polygon(&self) -> Result<Polygon, GeomError> {
        Polygon::from_coords(&self.vertices)
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct KeyframeFile {
    pub time: f64,
    pub vertices: Vec<[f64; 2]>,
}

/// `{"keyframes": [{"time": t, "vertices": [...]}, ...]}`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ScenarioFile {
    pub keyframes: Vec<KeyframeFile>,
}

impl ScenarioFile {
    pub fn from_scenario(sc: &DeformationScenario) -> ScenarioFile {
        let keyframes =
            sc.keyframes().iter().map(|(time, x)| KeyframeFile { time: *time, vertices: coords(x.vertices()) }).collect();
        ScenarioFile { keyframes }
    }

    pub fn to_scenario(&self) -> Result<DeformationScenario, IoError> {
        let mut frames = Vec::with_capacity(self.keyframes.len());
        for k in &self.keyframes {
            frames.push((k.time, Polygon::from_coords(&k.vertices)?));
        }
        Ok(DeformationScenario::new(frames)?)
    }
}

fn coords(v: &[Point]) -> Vec<[f64; 2]> {
    v.iter().map(|p| [p.x, p.y]).collect()
}

fn read(path: &Path) -> Result<String, IoError> {
    fs::read_to_string(path).map_err(|source| IoError::Io { path: path.to_path_buf(), source })
}

fn write(path: &Path, text: &str) -> Result<(), IoError> {
    fs::write(path, text).map_err(|source| IoError::Io { path: path.to_path_buf(), source })
}

pub fn parse_polygon(text: &str) -> Result<Polygon, IoError> {
    let f: PolygonFile = serde_json::from_str(text)?;
    Ok(f.to_polygon()?)
}

pub fn polygon_to_json(x: &Polygon) -> String {
    serde_json::to_string_pretty(&PolygonFile::from_polygon(x)).expect("plain data serializes") + "\n"
}

pub fn load_polygon(path: impl AsRef<Path>) -> Result<Polygon, IoError> {
    parse_polygon(&read(path.as_ref())?)
}

pub fn save_polygon(path: impl AsRef<Path>, x: &Polygon) -> Result<(), IoError> {
    write(path.as_ref(), &polygon_to_json(x))
}

pub fn parse_scenario(text: &str) -> Result<DeformationScenario, IoError> {
    let f: ScenarioFile = serde_json::from_str(text)?;
    f.to_scenario()
}

pub fn scenario_to_json(sc: &DeformationScenario) -> String {
    serde_json::to_string_pretty(&ScenarioFile::from_scenario(sc)).expect("plain data serializes") + "\n"
}

pub fn load_scenario(path: impl AsRef<Path>) -> Result<DeformationScenario, IoError> {
    parse_scenario(&read(path.as_ref())?)
}

pub fn save_scenario(path: impl AsRef<Path>, sc: &DeformationScenario) -> Result<(), IoError> {
    write(path.as_ref(), &scenario_to_json(sc))
}
