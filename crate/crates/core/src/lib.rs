//! Inscribed squares in simple polygons.
//!
//! The crate finds, counts and certifies squares whose four vertices lie on
//! the boundary of a simple polygon, and checks the invariants around them:
//!
//! * [`solver`]: the unique clockwise square with one vertex on each of four
//!   lines, by a linear solve and by a rotate-and-intersect construction.
//! * [`enumerate`]: exhaustive enumeration over edge quadruples, parity,
//!   genericity checks and random perturbation.
//! * [`torus`]: the curve of inscribed right isosceles triangles on the
//!   torus of boundary pairs, its winding classes, and squares recovered as
//!   intersections of that curve with its relabeled copy.
//! * [`deform`]: squares followed along piecewise-linear deformations, with
//!   creation, annihilation and pass-through events.
//! * [`oracle`]: a brute-force boundary-sampling detector used as an
//!   independent check.
//! * [`gen`], [`io`], [`svg`], [`cli`]: fixtures, file formats, rendering and
//!   the `squares` command line.

pub mod cli;
pub mod deform;
pub mod enumerate;
pub mod gen;
pub mod geom;
pub mod io;
pub mod oracle;
pub mod solver;
pub mod svg;
pub mod torus;

pub use enumerate::{
    check_generic, enumerate_inscribed_squares, parity, perturb, GenericityReport, InscribedSquare, Violation,
};
pub use geom::{rotate, Line, Location, Point, Polygon, Segment};
pub use solver::{square_by_rotation_construction, square_through_lines, verify_square, Square, SquareSolveResult};
