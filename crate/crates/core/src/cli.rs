//! The `squares` command line.
//!
//! Exit codes: 0 success, 1 input error, 2 non-generic input (or a
//! polygon outside an operation's hypothesis), 3 internal contract breach.

use std::ffi::OsString;
use std::io::Write;
use std::path::PathBuf;

use clap::{Parser, Subcommand};
use serde_json::{json, Value};

use crate::deform::{sweep, DeformError, SweepResult};
use crate::enumerate::{
    check_generic, dedup_squares, enumerate_inscribed_squares, perturb, scan_quadruples, EnumerateError,
    GenericityReport, InscribedSquare, Violation, DEFAULT_TOL,
};
use crate::gen::{gen_random_polygon, Method};
use crate::geom::{Point, Polygon};
use crate::io::{load_polygon, load_scenario, polygon_to_json, IoError};
use crate::oracle::{approx_squares, compare, OracleError, DEFAULT_DELTA, DEFAULT_N};
use crate::svg::save_svg;
use crate::torus::{self, TorusError};

pub const EXIT_OK: i32 = 0;
pub const EXIT_INPUT: i32 = 1;
pub const EXIT_NON_GENERIC: i32 = 2;
pub const EXIT_INTERNAL: i32 = 3;

#[derive(Debug, Parser)]
#[command(name = "squares", version, about = "Find, count and certify squares inscribed in simple polygons")]
struct Cli {
    /// Machine-readable JSON output.
    #[arg(long, global = true)]
    json: bool,
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// List every inscribed square.
    Find {
        polygon: PathBuf,
        /// On-segment tolerance relative to the diameter.
        #[arg(long, default_value_t = DEFAULT_TOL)]
        tol: f64,
        /// Also write an SVG figure.
        #[arg(long)]
        svg: Option<PathBuf>,
        /// Enumerate even if the polygon is not generic.
        #[arg(long)]
        force: bool,
    },
    /// Count inscribed squares and report the parity.
    Parity {
        polygon: PathBuf,
        /// Jiggle vertices by up to this fraction of the diameter first.
        #[arg(long)]
        perturb: Option<f64>,
        #[arg(long, default_value_t = 0)]
        seed: u64,
    },
    /// Run the genericity checks.
    Check { polygon: PathBuf },
    /// Trace the right-isosceles-triangle curves on the torus.
    Trace {
        polygon: PathBuf,
        #[arg(long)]
        svg: Option<PathBuf>,
        /// Trace even if some angle is not obtuse.
        #[arg(long)]
        force: bool,
    },
    /// Follow squares through a deformation scenario.
    Deform {
        scenario: PathBuf,
        /// Samples per unit time.
        #[arg(long, default_value_t = 100)]
        steps: usize,
        /// Write events as JSON lines.
        #[arg(long)]
        events: Option<PathBuf>,
    },
    /// Brute-force sampling oracle, compared with the exact enumeration.
    Oracle {
        polygon: PathBuf,
        #[arg(long, default_value_t = DEFAULT_N)]
        n: usize,
        #[arg(long, default_value_t = DEFAULT_DELTA)]
        delta: f64,
    },
    /// Generate a random simple polygon file.
    Gen {
        #[arg(long)]
        n: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long, default_value = "angular")]
        method: Method,
        #[arg(long)]
        perturb: Option<f64>,
        /// Write to a file instead of standard output.
        #[arg(long, short)]
        output: Option<PathBuf>,
    },
}

struct Failure {
    code: i32,
    message: String,
    detail: Value,
}

impl Failure {
    fn new(code: i32, message: impl ToString) -> Failure {
        Failure { code, message: message.to_string(), detail: Value::Null }
    }

    fn with(mut self, detail: Value) -> Failure {
        self.detail = detail;
        self
    }
}

impl From<IoError> for Failure {
    fn from(e: IoError) -> Failure {
        Failure::new(EXIT_INPUT, e)
    }
}

impl From<EnumerateError> for Failure {
    fn from(e: EnumerateError) -> Failure {
        match &e {
            EnumerateError::NonGenericInput(report) => {
                Failure::new(EXIT_NON_GENERIC, &e).with(json!({ "violations": violations_json(report) }))
            }
            EnumerateError::PerturbationFailed(_) => Failure::new(EXIT_NON_GENERIC, e),
        }
    }
}

impl From<TorusError> for Failure {
    fn from(e: TorusError) -> Failure {
        let code = match e {
            TorusError::NonGeneric(_) | TorusError::NonObtuse { .. } => EXIT_NON_GENERIC,
            TorusError::NotClosed(_) | TorusError::Unresolved(_) => EXIT_INTERNAL,
        };
        Failure::new(code, e)
    }
}

impl From<DeformError> for Failure {
    fn from(e: DeformError) -> Failure {
        let code = match e {
            DeformError::BadKeyframes(_) | DeformError::ScenarioNonSimple { .. } | DeformError::StepTooLarge(_) => EXIT_INPUT,
            DeformError::NonGenericKeyframe { .. } | DeformError::NonGenericInstant { .. } | DeformError::Unsupported => {
                EXIT_NON_GENERIC
            }
            DeformError::NoTerminatingTrack { .. } | DeformError::UnpairedEvent { .. } => EXIT_INTERNAL,
        };
        Failure::new(code, e)
    }
}

impl From<OracleError> for Failure {
    fn from(e: OracleError) -> Failure {
        let code = match e {
            OracleError::TooFewSamples(_) | OracleError::BadDelta(_) => EXIT_INPUT,
            OracleError::ContinuumSuspected { .. } => EXIT_NON_GENERIC,
        };
        Failure::new(code, e)
    }
}

fn pt(p: Point) -> Value {
    json!([p.x, p.y])
}

fn square_json(s: &InscribedSquare) -> Value {
    json!({
        "vertices": s.vertices().iter().map(|&p| pt(p)).collect::<Vec<_>>(),
        "center": pt(s.square.c),
        "side": s.side(),
        "attachments": s.attachments.iter().map(|a| json!({"edge": a.edge, "t": a.t})).collect::<Vec<_>>(),
        "touches_vertex": s.touches_vertex,
    })
}

fn violations_json(report: &GenericityReport) -> Value {
    let items: Vec<Value> = report
        .violations
        .iter()
        .map(|v| {
            let witness = match v {
                Violation::OrthogonalEdgePair { edges } => json!({"edges": [edges.0, edges.1]}),
                Violation::SingularQuadrupleWithBoundarySolution { edges } => json!({"edges": edges}),
                Violation::SquareVertexAtPolygonVertex { vertex, square_center } => {
                    json!({"vertex": vertex, "square_center": pt(*square_center)})
                }
                Violation::NonObtuseAngle { vertex, angle } => json!({"vertex": vertex, "angle": angle}),
            };
            json!({"kind": v.kind(), "informational": v.is_informational(), "witness": witness})
        })
        .collect();
    Value::Array(items)
}

/// Output of a successful subcommand: JSON document and human text.
struct Report {
    doc: Value,
    text: String,
    code: i32,
}

impl Report {
    fn ok(doc: Value, text: String) -> Report {
        Report { doc, text, code: EXIT_OK }
    }
}

fn find(path: &PathBuf, tol: f64, svg: Option<&PathBuf>, force: bool) -> Result<Report, Failure> {
    let x = load_polygon(path)?;
    let squares = if force {
        let scan = scan_quadruples(&x, tol, true);
        dedup_squares(&x, scan.hits.into_iter().map(|(_, s)| s), tol)
    } else {
        let report = check_generic(&x);
        if !report.is_generic() {
            return Err(EnumerateError::NonGenericInput(report).into());
        }
        enumerate_inscribed_squares(&x, tol)?
    };
    if let Some(out) = svg {
        let sq: Vec<_> = squares.iter().map(|s| s.square).collect();
        save_svg(out, &x, &sq, None).map_err(|e| Failure::new(EXIT_INPUT, format!("{}: {e}", out.display())))?;
    }
    let mut text = format!("{} inscribed square{}\n", squares.len(), if squares.len() == 1 { "" } else { "s" });
    for (i, s) in squares.iter().enumerate() {
        let v = s.vertices();
        let _ = std::fmt::Write::write_fmt(
            &mut text,
            format_args!(
                "  #{i}: side {:.6}  vertices {} {} {} {}  edges {:?}{}\n",
                s.side(),
                v[0],
                v[1],
                v[2],
                v[3],
                s.attachments.map(|a| a.edge),
                if s.touches_vertex { "  (touches a polygon vertex)" } else { "" }
            ),
        );
    }
    let doc = json!({
        "count": squares.len(),
        "odd": squares.len() % 2 == 1,
        "forced": force,
        "squares": squares.iter().map(square_json).collect::<Vec<_>>(),
    });
    Ok(Report::ok(doc, text))
}

fn parity_cmd(path: &PathBuf, eps: Option<f64>, seed: u64) -> Result<Report, Failure> {
    let mut x = load_polygon(path)?;
    if let Some(eps) = eps {
        x = perturb(&x, eps, seed)?;
    }
    let p = crate::enumerate::parity(&x)?;
    let text = format!("{} inscribed squares ({})\n", p.count, if p.odd { "odd" } else { "even" });
    Ok(Report::ok(json!({"count": p.count, "odd": p.odd}), text))
}

fn check(path: &PathBuf) -> Result<Report, Failure> {
    let x = load_polygon(path)?;
    let report = check_generic(&x);
    let generic = report.is_generic();
    let text = if report.violations.is_empty() {
        "generic and obtuse\n".to_string()
    } else {
        format!("{}{report}\n", if generic { "generic (informational notes below)\n" } else { "NOT generic\n" })
    };
    let doc = json!({
        "generic": generic,
        "obtuse": report.is_obtuse(),
        "violations": violations_json(&report),
    });
    Ok(Report { doc, text, code: if generic { EXIT_OK } else { EXIT_NON_GENERIC } })
}

fn trace_cmd(path: &PathBuf, svg: Option<&PathBuf>, force: bool) -> Result<Report, Failure> {
    let x = load_polygon(path)?;
    let obtuse = check_generic(&x).is_obtuse();
    if !obtuse && !force {
        let (vertex, angle) = x
            .interior_angles()
            .into_iter()
            .enumerate()
            .find(|&(_, a)| a <= std::f64::consts::FRAC_PI_2 || a >= 1.5 * std::f64::consts::PI)
            .expect("a non-obtuse angle exists");
        return Err(TorusError::NonObtuse { vertex, angle }.into());
    }
    let traced = torus::trace(&x)?;
    let curves = traced.curves();
    let clearance = torus::diagonal_clearance(&curves);
    let (smallest, uv) = if obtuse {
        (torus::smallest_right_isosceles(&x).ok(), torus::squares_from_UV(&x).ok())
    } else {
        (None, None)
    };
    if let Some(out) = svg {
        let sq: Vec<_> = uv.iter().flatten().map(|s| s.square).collect();
        save_svg(out, &x, &sq, Some(&curves)).map_err(|e| Failure::new(EXIT_INPUT, format!("{}: {e}", out.display())))?;
    }
    let comps: Vec<Value> = traced
        .components
        .iter()
        .map(|c| {
            json!({
                "winding": [c.winding.0, c.winding.1],
                "pieces": c.pieces.len(),
                "points": c.curve.points().iter().map(|p| json!([p.s, p.t])).collect::<Vec<_>>(),
            })
        })
        .collect();
    let mut text = format!("{} component{} of U\n", comps.len(), if comps.len() == 1 { "" } else { "s" });
    for c in &traced.components {
        text += &format!("  winding ({}, {}) over {} linear pieces\n", c.winding.0, c.winding.1, c.pieces.len());
    }
    text += &format!("diagonal clearance {clearance:.6}\n");
    if let Some(r) = &smallest {
        text += &format!("smallest right isosceles triangle: leg {:.6} at y = {}\n", r.leg, r.y);
    }
    if let Some(s) = &uv {
        text += &format!("U ∩ V gives {} inscribed squares\n", s.len());
    }
    let doc = json!({
        "perimeter": traced.perimeter,
        "obtuse": obtuse,
        "components": comps,
        "diagonal_clearance": clearance,
        "smallest_triangle": smallest.map(|r| json!({"y": pt(r.y), "z": pt(r.z), "u": pt(r.u), "leg": r.leg})),
        "squares_from_uv": uv.map(|s| s.iter().map(square_json).collect::<Vec<_>>()),
    });
    Ok(Report::ok(doc, text))
}

fn deform_cmd(path: &PathBuf, steps: usize, events: Option<&PathBuf>) -> Result<Report, Failure> {
    let sc = load_scenario(path)?;
    if steps == 0 {
        return Err(Failure::new(EXIT_INPUT, "--steps must be positive"));
    }
    let r: SweepResult = sweep(&sc, 1.0 / steps as f64)?;
    let event_docs: Vec<Value> = r.events.iter().map(|e| serde_json::to_value(e).expect("event serializes")).collect();
    if let Some(out) = events {
        let mut lines = String::new();
        for e in &event_docs {
            lines += &format!("{e}\n");
        }
        std::fs::write(out, lines).map_err(|e| Failure::new(EXIT_INPUT, format!("{}: {e}", out.display())))?;
    }
    let (first, last) = (r.parity_timeline[0].1, r.parity_timeline[r.parity_timeline.len() - 1].1);
    let mut text = format!(
        "{} samples, {} tracks, {} events; count {} -> {}, parity {}\n",
        r.parity_timeline.len(),
        r.tracks.len(),
        r.events.len(),
        first,
        last,
        if r.parity_constant() { "constant" } else { "CHANGED" }
    );
    for e in &r.events {
        text += &format!(
            "  t = {:.9}: {} at vertex {} (square vertex {}), delta {:+}\n",
            e.time,
            e.kind.as_str(),
            e.vertex,
            e.square_vertex,
            e.delta_count
        );
    }
    if !r.nongeneric_instants.is_empty() {
        text += &format!("  skipped non-generic sample times: {:?}\n", r.nongeneric_instants);
    }
    let doc = json!({
        "samples": r.parity_timeline.len(),
        "tracks": r.tracks.len(),
        "events": event_docs,
        "total_delta": r.total_delta(),
        "parity_constant": r.parity_constant(),
        "counts": r.parity_timeline.iter().map(|(t, c)| json!([t, c])).collect::<Vec<_>>(),
        "nongeneric_instants": r.nongeneric_instants,
        "nudged": r.nudged.iter().map(|(a, b)| json!([a, b])).collect::<Vec<_>>(),
    });
    let code = if r.parity_constant() && r.total_delta() == last as i64 - first as i64 { EXIT_OK } else { EXIT_INTERNAL };
    Ok(Report { doc, text, code })
}

fn oracle_cmd(path: &PathBuf, n: usize, delta: f64) -> Result<Report, Failure> {
    let x = load_polygon(path)?;
    let clusters = approx_squares(&x, n, delta)?;
    let exact = enumerate_inscribed_squares(&x, DEFAULT_TOL).ok();
    let cmp = exact.as_ref().map(|e| compare(&x, e, &clusters, delta));
    let mut text = format!("{} approximate square cluster{}\n", clusters.len(), if clusters.len() == 1 { "" } else { "s" });
    for c in &clusters {
        text += &format!(
            "  center {}  side {:.6}  hits {}  residual {:.2e}\n",
            c.representative.c,
            c.representative.side(),
            c.hits,
            c.residual
        );
    }
    match (&exact, &cmp) {
        (Some(e), Some(c)) => {
            text += &format!("exact enumeration: {}; {}\n", e.len(), if c.agrees() { "agreement" } else { "DISAGREEMENT" })
        }
        _ => text += "exact enumeration unavailable (polygon not generic)\n",
    }
    let doc = json!({
        "n": n,
        "delta": delta,
        "clusters": clusters.iter().map(|c| json!({
            "center": pt(c.representative.c),
            "w": pt(c.representative.w),
            "side": c.representative.side(),
            "hits": c.hits,
            "residual": c.residual,
        })).collect::<Vec<_>>(),
        "exact_count": exact.as_ref().map(|e| e.len()),
        "agreement": cmp.as_ref().map(|c| c.agrees()),
        "unmatched_exact": cmp.as_ref().map(|c| c.unmatched_exact.clone()),
        "unmatched_approx": cmp.as_ref().map(|c| c.unmatched_approx.clone()),
    });
    Ok(Report::ok(doc, text))
}

fn gen_cmd(n: usize, seed: u64, method: Method, eps: Option<f64>, output: Option<&PathBuf>) -> Result<Report, Failure> {
    let mut x: Polygon = gen_random_polygon(n, seed, method).map_err(|e| Failure::new(EXIT_INPUT, e))?;
    if let Some(eps) = eps {
        x = perturb(&x, eps, seed)?;
    }
    let text = polygon_to_json(&x);
    if let Some(out) = output {
        std::fs::write(out, &text).map_err(|e| Failure::new(EXIT_INPUT, format!("{}: {e}", out.display())))?;
        return Ok(Report::ok(json!({"written": out.display().to_string(), "vertices": n}), format!("wrote {}\n", out.display())));
    }
    let doc: Value = serde_json::from_str(&text).expect("round trip");
    Ok(Report::ok(doc, text))
}

/// Run the CLI on `args` (including the program name) and return the exit code.
pub fn run<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_INPUT } else { EXIT_OK };
            let text = e.render().to_string();
            let _ = if e.use_stderr() { write!(err, "{text}") } else { write!(out, "{text}") };
            return code;
        }
    };
    let result = match &cli.command {
        Command::Find { polygon, tol, svg, force } => find(polygon, *tol, svg.as_ref(), *force),
        Command::Parity { polygon, perturb, seed } => parity_cmd(polygon, *perturb, *seed),
        Command::Check { polygon } => check(polygon),
        Command::Trace { polygon, svg, force } => trace_cmd(polygon, svg.as_ref(), *force),
        Command::Deform { scenario, steps, events } => deform_cmd(scenario, *steps, events.as_ref()),
        Command::Oracle { polygon, n, delta } => oracle_cmd(polygon, *n, *delta),
        Command::Gen { n, seed, method, perturb, output } => gen_cmd(*n, *seed, *method, *perturb, output.as_ref()),
    };
    match result {
        Ok(r) => {
            let _ = if cli.json {
                writeln!(out, "{}", serde_json::to_string_pretty(&r.doc).expect("json"))
            } else {
                write!(out, "{}", r.text)
            };
            r.code
        }
        Err(f) => {
            if cli.json {
                let doc = json!({"error": f.message, "exit_code": f.code, "detail": f.detail});
                let _ = writeln!(out, "{}", serde_json::to_string_pretty(&doc).expect("json"));
            }
            let _ = writeln!(err, "error: {}", f.message);
            f.code
        }
    }
}
