//! Lie brackets of base fields against Poisson brackets of their lifts.
//!
//!     cargo run --example brackets

use gohkit::exactpoly::{parse_expression, Ambient};
use gohkit::vectorfield::{hamiltonian_lift, hamiltonian_vector_field, poisson_bracket, VectorField};

fn field(n: usize, comps: &[&str]) -> VectorField {
    let amb = Ambient::base(n);
    VectorField::base(n, comps.iter().map(|s| parse_expression(s, amb).unwrap()).collect()).unwrap()
}

fn main() {
    let x = field(3, &["1", "0", "0"]);
    let y = field(3, &["0", "1", "x1^2"]);

    let xy = x.lie_bracket(&y).unwrap();
    println!("X      = {x}");
    println!("Y      = {y}");
    println!("[X,Y]  = {xy}");
    println!("[X,[X,Y]] = {}", x.lie_bracket(&xy).unwrap());

    let hx = hamiltonian_lift(&x).unwrap();
    let hy = hamiltonian_lift(&y).unwrap();
    let pb = poisson_bracket(&hx, &hy).unwrap();
    println!("h_X = {hx}, h_Y = {hy}");
    println!("{{h_X, h_Y}} = {pb}");
    println!("h_[X,Y]     = {}", hamiltonian_lift(&xy).unwrap());

    let hv = hamiltonian_vector_field(&hy).unwrap();
    println!("Hamiltonian field of h_Y: {hv}");
    println!("its divergence: {}", hv.divergence());
}
