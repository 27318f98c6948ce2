//! Inscribed squares followed along a piecewise-linear polygon deformation.
//!
//! For a fixed edge quadruple the four-line square moves continuously with
//! the polygon; it is inscribed while every vertex parameter stays in
//! `[0, 1]`. A track is a maximal run of samples where one (canonical)
//! quadruple stays inscribed, so matching between samples is by quadruple
//! identity. A track ends when one of its vertices runs off its edge
//! through a polygon vertex `x_j`. The quadruple with that slot moved to
//! the other edge at `x_j` has the same square at the event, and whether it
//! is inscribed just before or just after decides the kind of event.

use std::collections::{BTreeMap, BTreeSet};

use rayon::prelude::*;
use serde::Serialize;
use thiserror::Error;

use crate::enumerate::{canonical_quad, check_generic, scan_quadruples, InscribedSquare, Quad, DEFAULT_TOL};
use crate::geom::{is_simple, orthogonal_edge_pairs, Line, Point, Polygon};
use crate::solver::{square_through_lines, Square, SquareSolveResult};
use crate::enumerate::ORTHOGONAL_TOL;

/// Largest admissible sample step.
pub const MAX_STEP: f64 = 1e-2;
/// Event times are localized to this width.
pub const EVENT_TOL: f64 = 1e-9;
/// Offset used to look at a quadruple just before and after an event.
pub const CLASSIFY_DT: f64 = 1e-7;
const NUDGE_TRIES: i32 = 4;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum DeformError {
    #[error("bad keyframes: {0}")]
    BadKeyframes(String),
    #[error("polygon at time {time} is not simple")]
    ScenarioNonSimple { time: f64 },
    #[error("keyframe at time {time} is not generic: {report}")]
    NonGenericKeyframe { time: f64, report: String },
    #[error("step {0} exceeds {MAX_STEP}")]
    StepTooLarge(f64),
    #[error("no track terminates at time {time} through vertex {vertex} with square vertex {slot}")]
    NoTerminatingTrack { time: f64, vertex: usize, slot: usize },
    #[error("non-generic instant at time {time}: {reason}")]
    NonGenericInstant { time: f64, reason: String },
    #[error("event at time {time} for quadruple {quad:?} has no partner among the changed tracks")]
    UnpairedEvent { time: f64, quad: Quad },
    #[error("only the bundled pentagon has a shrink scenario")]
    Unsupported,
}

/// Keyframed polygons with per-vertex linear interpolation on `[0, 1]`.
#[derive(Debug, Clone, PartialEq)]
pub struct DeformationScenario {
    keyframes: Vec<(f64, Polygon)>,
}

impl DeformationScenario {
    /// Times must start at 0, end at 1 and strictly increase; all keyframes
    /// need the same vertex count.
    pub fn new(keyframes: Vec<(f64, Polygon)>) -> Result<DeformationScenario, DeformError> {
        if keyframes.len() < 2 {
            return Err(DeformError::BadKeyframes(format!("need at least 2 keyframes, got {}", keyframes.len())));
        }
        if keyframes[0].0 != 0.0 || keyframes[keyframes.len() - 1].0 != 1.0 {
            return Err(DeformError::BadKeyframes("times must run from 0 to 1".into()));
        }
        if keyframes.windows(2).any(|w| w[0].0.partial_cmp(&w[1].0) != Some(std::cmp::Ordering::Less)) {
            return Err(DeformError::BadKeyframes("times must strictly increase".into()));
        }
        let n = keyframes[0].1.len();
        if let Some((t, x)) = keyframes.iter().find(|(_, x)| x.len() != n) {
            return Err(DeformError::BadKeyframes(format!("keyframe at {t} has {} vertices, expected {n}", x.len())));
        }
        Ok(DeformationScenario { keyframes })
    }

    /// `x` held still.
    pub fn constant(x: &Polygon) -> DeformationScenario {
        DeformationScenario { keyframes: vec![(0.0, x.clone()), (1.0, x.clone())] }
    }

    /// Straight-line interpolation between two polygons.
    pub fn interpolation(a: &Polygon, b: &Polygon) -> Result<DeformationScenario, DeformError> {
        DeformationScenario::new(vec![(0.0, a.clone()), (1.0, b.clone())])
    }

    pub fn keyframes(&self) -> &[(f64, Polygon)] {
        &self.keyframes
    }

    pub fn vertex_count(&self) -> usize {
        self.keyframes[0].1.len()
    }

    /// Interpolated vertices; not checked for simplicity.
    pub fn vertices_at(&self, t: f64) -> Vec<Point> {
        let t = t.clamp(0.0, 1.0);
        let k = self.keyframes.partition_point(|(tk, _)| *tk <= t).clamp(1, self.keyframes.len() - 1);
        let (t0, a) = &self.keyframes[k - 1];
        let (t1, b) = &self.keyframes[k];
        let f = (t - t0) / (t1 - t0);
        a.vertices().iter().zip(b.vertices()).map(|(p, q)| p.lerp(*q, f)).collect()
    }

    pub fn at(&self, t: f64) -> Result<Polygon, DeformError> {
        Polygon::new(self.vertices_at(t)).map_err(|_| DeformError::ScenarioNonSimple { time: t })
    }

    /// The same motion played backwards.
    pub fn reversed(&self) -> DeformationScenario {
        let keyframes = self.keyframes.iter().rev().map(|(t, x)| (1.0 - t, x.clone())).collect();
        DeformationScenario { keyframes }
    }

    /// Largest vertex speed over all keyframe segments.
    pub fn max_vertex_speed(&self) -> f64 {
        self.keyframes
            .windows(2)
            .flat_map(|w| {
                let dt = w[1].0 - w[0].0;
                w[0].1.vertices().iter().zip(w[1].1.vertices()).map(move |(p, q)| p.dist(*q) / dt)
            })
            .fold(0.0, f64::max)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Termination {
    ScenarioEnd,
    VertexEvent,
    MatchingLost,
}

/// One inscribed square followed through time.
#[derive(Debug, Clone, PartialEq)]
pub struct SquareTrack {
    pub quad: Quad,
    pub birth: f64,
    pub death: f64,
    pub samples: Vec<(f64, InscribedSquare)>,
    pub termination: Termination,
}

impl SquareTrack {
    /// Largest vertex displacement between consecutive samples.
    pub fn max_jump(&self) -> f64 {
        self.samples.windows(2).map(|w| w[0].1.square.distance(&w[1].1.square)).fold(0.0, f64::max)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum EventKind {
    AnnihilationPair,
    CreationPair,
    PassThrough,
}

impl EventKind {
    pub fn delta(self) -> i64 {
        match self {
            EventKind::AnnihilationPair => -2,
            EventKind::CreationPair => 2,
            EventKind::PassThrough => 0,
        }
    }

    pub fn as_str(self) -> &'static str {
        match self {
            EventKind::AnnihilationPair => "annihilation-pair",
            EventKind::CreationPair => "creation-pair",
            EventKind::PassThrough => "pass-through",
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Event {
    pub time: f64,
    pub kind: EventKind,
    /// Polygon vertex `x_j`.
    pub vertex: usize,
    /// Slot of the square vertex that reaches `x_j`, in the canonical
    /// quadruple of the track that ends (or, for creations, starts).
    pub square_vertex: usize,
    pub delta_count: i64,
    /// The track's quadruple and its partner through `x_j`.
    pub quads: [Quad; 2],
}

#[derive(Debug, Clone, PartialEq)]
pub struct SweepResult {
    pub tracks: Vec<SquareTrack>,
    pub events: Vec<Event>,
    pub parity_timeline: Vec<(f64, usize)>,
    /// Sample times skipped because no nearby generic time was found.
    pub nongeneric_instants: Vec<f64>,
    /// Sample times that were moved off a non-generic instant: `(planned, used)`.
    pub nudged: Vec<(f64, f64)>,
    /// `10 · step · (max vertex speed)`.
    pub continuity_bound: f64,
}

impl SweepResult {
    pub fn parity_constant(&self) -> bool {
        self.parity_timeline.windows(2).all(|w| w[0].1 % 2 == w[1].1 % 2)
    }

    pub fn total_delta(&self) -> i64 {
        self.events.iter().map(|e| e.delta_count).sum()
    }
}

/// The four-line square of `q` for raw vertex positions, with its vertex
/// parameters along the slot edges.
fn quad_state(v: &[Point], q: Quad) -> Option<(Square, [f64; 4])> {
    let n = v.len();
    let mut lines = [Line { n: Point::ORIGIN, d: 0.0 }; 4];
    for k in 0..4 {
        lines[k] = Line::through(v[q[k]], v[(q[k] + 1) % n]).ok()?;
    }
    let SquareSolveResult::Unique(sq) = square_through_lines(&lines) else { return None };
    let mut t = [0.0; 4];
    for (k, p) in sq.vertices().into_iter().enumerate() {
        let (a, b) = (v[q[k]], v[(q[k] + 1) % n]);
        t[k] = (p - a).dot(b - a) / (b - a).norm2();
    }
    Some((sq, t))
}

fn inscribed(v: &[Point], q: Quad) -> bool {
    quad_state(v, q).is_some_and(|(_, t)| t.iter().all(|&x| (0.0..=1.0).contains(&x)))
}

/// Slot furthest outside its edge, and the polygon vertex it ran past.
fn exit_slot(v: &[Point], q: Quad) -> Option<(usize, usize)> {
    let (_, t) = quad_state(v, q)?;
    let n = v.len();
    let (slot, over) = (0..4)
        .map(|k| (k, (-t[k]).max(t[k] - 1.0)))
        .max_by(|a, b| a.1.total_cmp(&b.1))
        .unwrap();
    if over <= 0.0 {
        return None;
    }
    let vertex = if t[slot] < 0.0 { q[slot] } else { (q[slot] + 1) % n };
    Some((slot, vertex))
}

fn partner(q: Quad, slot: usize, vertex: usize, n: usize) -> Quad {
    let e1 = q[slot];
    let other = if vertex == e1 { (e1 + n - 1) % n } else { (e1 + 1) % n };
    let mut p = q;
    p[slot] = other;
    canonical_quad(p).0
}

/// Time in `[lo, hi]` where `q` switches between inscribed and not.
fn localize(sc: &DeformationScenario, q: Quad, mut lo: f64, mut hi: f64) -> f64 {
    let at_lo = inscribed(&sc.vertices_at(lo), q);
    while hi - lo > EVENT_TOL {
        let mid = 0.5 * (lo + hi);
        if inscribed(&sc.vertices_at(mid), q) == at_lo {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    0.5 * (lo + hi)
}

/// Classify the flip of `q` at `time` through `vertex` in `slot`; returns the
/// kind and the partner quadruple.
fn classify_flip(
    sc: &DeformationScenario,
    time: f64,
    q: Quad,
    slot: usize,
    vertex: usize,
) -> Result<(EventKind, Quad), DeformError> {
    let (before, after) = (sc.vertices_at(time - CLASSIFY_DT), sc.vertices_at(time + CLASSIFY_DT));
    let (q_before, q_after) = (inscribed(&before, q), inscribed(&after, q));
    if q_before == q_after {
        return Err(DeformError::NoTerminatingTrack { time, vertex, slot });
    }
    let p = partner(q, slot, vertex, sc.vertex_count());
    let (p_before, p_after) = (inscribed(&before, p), inscribed(&after, p));
    let kind = match (q_before, p_before, p_after) {
        (true, true, false) => EventKind::AnnihilationPair,
        (true, false, true) => EventKind::PassThrough,
        (false, false, true) => EventKind::CreationPair,
        (false, true, false) => EventKind::PassThrough,
        _ => {
            return Err(DeformError::NonGenericInstant {
                time,
                reason: format!("partner {p:?} of {q:?} does not flip (before {p_before}, after {p_after})"),
            })
        }
    };
    Ok((kind, p))
}

/// Kind of the event where a track's square vertex `slot` meets polygon
/// vertex `vertex` at `time`.
pub fn classify_event(sc: &DeformationScenario, time: f64, vertex: usize, slot: usize) -> Result<EventKind, DeformError> {
    let n = sc.vertex_count();
    if vertex >= n || slot >= 4 {
        return Err(DeformError::NoTerminatingTrack { time, vertex, slot });
    }
    let (before, after) = (sc.vertices_at(time - CLASSIFY_DT), sc.vertices_at(time + CLASSIFY_DT));
    for idx in 0..n * n * n * n {
        let q = [idx / (n * n * n), (idx / (n * n)) % n, (idx / n) % n, idx % n];
        if canonical_quad(q).0 != q || (q[slot] != vertex && (q[slot] + 1) % n != vertex) {
            continue;
        }
        let (b, a) = (inscribed(&before, q), inscribed(&after, q));
        if b == a {
            continue;
        }
        let outside = if b { &after } else { &before };
        if exit_slot(outside, q) == Some((slot, vertex)) {
            return classify_flip(sc, time, q, slot, vertex).map(|(k, _)| k);
        }
    }
    Err(DeformError::NoTerminatingTrack { time, vertex, slot })
}

struct Sample {
    time: f64,
    squares: BTreeMap<Quad, InscribedSquare>,
}

/// Squares at `t`, or `None` when `t` is a non-generic instant.
fn sample_at(sc: &DeformationScenario, t: f64) -> Result<Option<Sample>, DeformError> {
    let x = sc.at(t)?;
    if !orthogonal_edge_pairs(&x, ORTHOGONAL_TOL).is_empty() {
        return Ok(None);
    }
    let scan = scan_quadruples(&x, DEFAULT_TOL, true);
    if !scan.singular_on_boundary.is_empty() || scan.hits.iter().any(|(_, s)| s.touches_vertex) {
        return Ok(None);
    }
    Ok(Some(Sample { time: t, squares: scan.hits.into_iter().collect() }))
}

/// Sample, moving off non-generic instants by small multiples of `nudge`.
fn sample_near(sc: &DeformationScenario, t: f64, nudge: f64) -> Result<(f64, Option<Sample>), DeformError> {
    if let Some(s) = sample_at(sc, t)? {
        return Ok((t, Some(s)));
    }
    for k in 1..=NUDGE_TRIES {
        for sign in [1.0, -1.0] {
            let u = t + sign * k as f64 * nudge;
            if !(0.0..=1.0).contains(&u) {
                continue;
            }
            if let Some(s) = sample_at(sc, u)? {
                return Ok((u, Some(s)));
            }
        }
    }
    Ok((t, None))
}

/// Planned time, time actually used, and the sample if one was taken.
type PlannedSample = (f64, f64, Option<Sample>);

/// Follow every inscribed square through the scenario.
pub fn sweep(sc: &DeformationScenario, step: f64) -> Result<SweepResult, DeformError> {
    if !(step > 0.0 && step <= MAX_STEP) {
        return Err(DeformError::StepTooLarge(step));
    }
    for (time, x) in sc.keyframes() {
        let report = check_generic(x);
        if !report.is_generic() {
            return Err(DeformError::NonGenericKeyframe { time: *time, report: report.to_string() });
        }
    }
    let m = (1.0 / step).ceil() as usize;
    let nudge = step * 1e-3;
    let raw: Vec<Result<PlannedSample, DeformError>> = (0..=m)
        .into_par_iter()
        .map(|k| {
            let t = k as f64 / m as f64;
            sample_near(sc, t, nudge).map(|(u, s)| (t, u, s))
        })
        .collect();

    let mut samples = Vec::new();
    let mut nongeneric_instants = Vec::new();
    let mut nudged = Vec::new();
    for r in raw {
        let (planned, used, s) = r?;
        match s {
            Some(s) => {
                if used != planned {
                    nudged.push((planned, used));
                }
                samples.push(s);
            }
            None => nongeneric_instants.push(planned),
        }
    }
    // check simplicity between samples at a finer grid than the sweep itself
    for k in 0..=4 * m {
        let t = k as f64 / (4 * m) as f64;
        if !is_simple(&sc.vertices_at(t)).simple {
            return Err(DeformError::ScenarioNonSimple { time: t });
        }
    }

    let mut tracks: Vec<SquareTrack> = Vec::new();
    let mut active: BTreeMap<Quad, usize> = BTreeMap::new();
    let mut events = Vec::new();
    let mut parity_timeline = Vec::with_capacity(samples.len());
    let open = |tracks: &mut Vec<SquareTrack>, active: &mut BTreeMap<Quad, usize>, q: Quad, birth: f64| {
        active.insert(q, tracks.len());
        tracks.push(SquareTrack { quad: q, birth, death: 1.0, samples: Vec::new(), termination: Termination::ScenarioEnd });
    };
    let close = |tracks: &mut Vec<SquareTrack>, active: &mut BTreeMap<Quad, usize>, q: Quad, death: f64| {
        if let Some(i) = active.remove(&q) {
            tracks[i].death = death;
            tracks[i].termination = Termination::VertexEvent;
        }
    };

    let mut prev_time = None;
    for s in &samples {
        if let Some(lo) = prev_time {
            let died: BTreeSet<Quad> = active.keys().filter(|q| !s.squares.contains_key(*q)).copied().collect();
            let born: BTreeSet<Quad> = s.squares.keys().filter(|q| !active.contains_key(*q)).copied().collect();
            let (mut died_left, mut born_left) = (died.clone(), born.clone());
            let mut changed: Vec<(Quad, bool)> = died.iter().map(|&q| (q, true)).collect();
            changed.extend(born.iter().map(|&q| (q, false)));
            for (q, dying) in changed {
                let pending = if dying { &died_left } else { &born_left };
                if !pending.contains(&q) {
                    continue;
                }
                let time = localize(sc, q, lo, s.time);
                let outside = sc.vertices_at(if dying { time + CLASSIFY_DT } else { time - CLASSIFY_DT });
                let Some((slot, vertex)) = exit_slot(&outside, q) else {
                    return Err(DeformError::NonGenericInstant {
                        time,
                        reason: format!("quadruple {q:?} changes without leaving an edge"),
                    });
                };
                let (kind, p) = classify_flip(sc, time, q, slot, vertex)?;
                let partner_set = match (dying, kind) {
                    (true, EventKind::AnnihilationPair) => &mut died_left,
                    (true, EventKind::PassThrough) | (false, EventKind::CreationPair) => &mut born_left,
                    (false, EventKind::PassThrough) => &mut died_left,
                    _ => unreachable!("kind follows the flip direction"),
                };
                if !partner_set.remove(&p) {
                    return Err(DeformError::UnpairedEvent { time, quad: q });
                }
                if dying {
                    died_left.remove(&q);
                } else {
                    born_left.remove(&q);
                }
                for (r, r_dies) in [(q, dying), (p, kind == EventKind::AnnihilationPair || (!dying && kind == EventKind::PassThrough))] {
                    if r_dies {
                        close(&mut tracks, &mut active, r, time);
                    } else {
                        open(&mut tracks, &mut active, r, time);
                    }
                }
                events.push(Event { time, kind, vertex, square_vertex: slot, delta_count: kind.delta(), quads: [q, p] });
            }
        } else {
            for &q in s.squares.keys() {
                open(&mut tracks, &mut active, q, s.time);
            }
        }
        for (q, sq) in &s.squares {
            let i = active[q];
            tracks[i].samples.push((s.time, sq.clone()));
        }
        parity_timeline.push((s.time, s.squares.len()));
        prev_time = Some(s.time);
    }
    events.sort_by(|a, b| a.time.total_cmp(&b.time));
    Ok(SweepResult {
        tracks,
        events,
        parity_timeline,
        nongeneric_instants,
        nudged,
        continuity_bound: 10.0 * step * sc.max_vertex_speed(),
    })
}

const SHRINK_JSON: &str = include_str!("../fixtures/scenarios/shrink.json");

/// Vertices of the pentagon that [`shrink_scenario`] knows how to shrink.
pub fn shrink_pentagon() -> Polygon {
    bundled_shrink().keyframes()[0].1.clone()
}

fn bundled_shrink() -> DeformationScenario {
    crate::io::parse_scenario(SHRINK_JSON).expect("bundled shrink scenario is valid")
}

/// The staged deformation of the bundled pentagon into a thin polygon with
/// a single inscribed square.
pub fn shrink_scenario(x: &Polygon) -> Result<DeformationScenario, DeformError> {
    let sc = bundled_shrink();
    if sc.keyframes()[0].1.vertices() != x.vertices() {
        return Err(DeformError::Unsupported);
    }
    Ok(sc)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn tri() -> Polygon {
        Polygon::from_coords(&[[0., 0.], [4., 0.], [3., 1.]]).unwrap()
    }

    #[test]
    fn keyframe_validation() {
        let x = tri();
        assert!(DeformationScenario::new(vec![(0.0, x.clone())]).is_err());
        assert!(DeformationScenario::new(vec![(0.0, x.clone()), (0.5, x.clone())]).is_err());
        assert!(DeformationScenario::new(vec![(0.0, x.clone()), (0.5, x.clone()), (0.5, x.clone()), (1.0, x.clone())]).is_err());
    }

    #[test]
    fn interpolation_and_reversal() {
        let a = tri();
        let b = a.map_similarity(|p| p * 2.0);
        let sc = DeformationScenario::interpolation(&a, &b).unwrap();
        assert_eq!(sc.vertices_at(0.5)[1], Point::new(6.0, 0.0));
        assert_eq!(sc.reversed().vertices_at(0.25), sc.vertices_at(0.75));
        assert!((sc.max_vertex_speed() - 4.0).abs() < 1e-12);
    }

    #[test]
    fn step_limit() {
        let sc = DeformationScenario::constant(&tri());
        assert_eq!(sweep(&sc, 0.02), Err(DeformError::StepTooLarge(0.02)));
    }

    #[test]
    fn partner_swaps_to_neighbor_edge() {
        // slot 2 on edge 3 runs past its end vertex 4 onto edge 4
        assert_eq!(partner([0, 1, 3, 3], 2, 4, 5), [0, 1, 4, 3]);
        // slot 1 on edge 1 runs past its start vertex 1 onto edge 0
        assert_eq!(partner([0, 1, 2, 3], 1, 1, 5), [0, 0, 2, 3]);
    }
}
