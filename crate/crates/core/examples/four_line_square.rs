//! The unique clockwise square with one vertex on each of four lines,
//! solved two ways.

use squarepeg::{square_by_rotation_construction, square_through_lines, verify_square, Line, SquareSolveResult};

fn main() {
    let lines = [
        Line::from_coeffs(1.0, -1.0, 0.0).unwrap(),
        Line::from_coeffs(1.0, 2.0, 2.0).unwrap(),
        Line::from_coeffs(3.0, -1.0, 8.0).unwrap(),
        Line::from_coeffs(1.0, -3.0, 6.0).unwrap(),
    ];
    let linear = square_through_lines(&lines);
    let rotated = square_by_rotation_construction(&lines);
    for (name, r) in [("linear system", linear), ("rotation construction", rotated)] {
        match r {
            SquareSolveResult::Unique(sq) => {
                println!("{name}: center {} side {:.12}", sq.c, sq.side());
                for (k, v) in sq.vertices().iter().enumerate() {
                    println!("  a{} = {v}  (distance to its line {:.1e})", k + 1, lines[k].signed_dist(*v).abs());
                }
                println!("  verified: {}", verify_square(&sq, &lines, 1e-9));
            }
            other => println!("{name}: {other:?}"),
        }
    }
}
