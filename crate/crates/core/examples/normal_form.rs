//! Bring a frame to corank-1 normal form at the origin up to a jet order and
//! compare Goh kernel dimensions before and after.
//!
//!     cargo run --release --example normal_form

use gohkit::exactpoly::{parse_expression, Ambient};
use gohkit::normalform::{check_rank_preservation, normalize_frame};
use gohkit::vectorfield::{Frame, VectorField};

fn main() {
    let n = 4;
    let amb = Ambient::base(n);
    let f = |comps: [&str; 4]| VectorField::base(n, comps.iter().map(|s| parse_expression(s, amb).unwrap()).collect()).unwrap();
    let frame = Frame::new(
        n,
        vec![
            f(["1 + x2", "x3", "0", "x2*x4"]),
            f(["x1", "2", "x4^2", "x1^2"]),
            f(["0", "1", "1 - x1", "x1*x2 + x4"]),
        ],
    )
    .unwrap();

    let nf = normalize_frame(&frame, 3).unwrap();
    let stages: Vec<String> = nf.trace.iter().map(|s| s.to_string()).collect();
    println!("stages: {}", stages.join(" -> "));
    println!("x = B y with B = {:?}", nf.change.b.iter().map(|r| r.iter().map(|q| q.to_string()).collect::<Vec<_>>()).collect::<Vec<_>>());
    for k in 0..nf.frame.m() {
        println!("X{} = {}", k + 1, nf.frame.field(k));
    }

    let check = check_rank_preservation(&frame, &nf, 8, 3).unwrap();
    for s in &check.samples {
        println!("  x = {:.3?}: dim {} -> {} {}", s.x, s.input_dim, s.output_dim, if s.conclusive { "" } else { "(inconclusive)" });
    }
    println!("agree: {}", check.agree);
}
