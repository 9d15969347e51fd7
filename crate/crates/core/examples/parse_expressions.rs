//! Parse polynomials over x and p, do exact arithmetic, and print them back.
//!
//!     cargo run --example parse_expressions

use gohkit::exactpoly::{parse_expression, rat, Ambient};

fn main() {
    let amb = Ambient::phase(3);
    let f = parse_expression("x1^2*p3 - 3/2*x2*p1 + 7", amb).unwrap();
    let g = parse_expression("(x1 + p2)^2", amb).unwrap();

    println!("f       = {f}");
    println!("g       = {g}");
    println!("f * g   = {}", &f * &g);
    println!("df/dx1  = {}", f.partial(amb.x(0)).unwrap());
    println!("deg f   = {:?}", f.total_degree());
    println!("f fiber-homogeneous? {:?}", f.p_homogeneous_degree());

    let at = [rat(1, 2), rat(0, 1), rat(1, 1), rat(2, 1), rat(0, 1), rat(-1, 1)];
    println!("f(1/2, 0, 1; 2, 0, -1) = {}", f.eval_rational(&at).unwrap());

    // Display output parses back to the same polynomial.
    let again = parse_expression(&f.to_string(), amb).unwrap();
    assert_eq!(again, f);

    match parse_expression("x1 + * x2", amb) {
        Ok(_) => unreachable!(),
        Err(e) => println!("error at byte {}: {e}", e.offset),
    }
}
