//! Pfaffian minors three ways: wedge definition, row recursion, derivative rule.
//!
//!     cargo run --example pfaffian_minors

use gohkit::exactpoly::{parse_expression, Ambient};
use gohkit::pfaffian::{
    calibration, pfaffian_by_definition, pfaffian_by_recursion, pfaffian_derivative, IndexSet, PfaffianTable, SkewMatrix,
};
use gohkit::vectorfield::VectorField;

fn main() {
    let amb = Ambient::base(2);
    let upper = [
        ["", "x1", "x2^2", "1"],
        ["", "", "x1*x2", "x2 - 1"],
        ["", "", "", "3*x1"],
    ];
    let a = SkewMatrix::from_fn(4, amb, |i, j| parse_expression(upper[i][j], amb).unwrap()).unwrap();
    let full = IndexSet::full(4);

    let def = pfaffian_by_definition(&a, full).unwrap();
    println!("Pf(A) by definition     = {def}");
    for pivot in full.iter() {
        let rec = pfaffian_by_recursion(&a, full, pivot).unwrap();
        assert_eq!(rec, def);
        println!("Pf(A) expanding row {}   = {rec}", pivot + 1);
    }

    let d = VectorField::base(2, vec![parse_expression("1", amb).unwrap(), parse_expression("x1", amb).unwrap()]).unwrap();
    println!("D = {d}");
    println!("D Pf(A) by rule         = {}", pfaffian_derivative(&a, full, &d).unwrap());
    println!("D Pf(A) directly        = {}", d.apply(&def).unwrap());

    let det = gohkit::pfaffian::minor_determinant(&a, full, full).unwrap();
    println!("Pf^2 - det              = {}", &(&def * &def) - &det);

    let table = PfaffianTable::new(&a, 4);
    for (set, p) in table.minors(2) {
        println!("phi{set} = {p}");
    }
    let cal = calibration();
    println!("prefactors at size 4: recursion {}, derivative {}", cal.recursion_prefactor(4), cal.derivative_prefactor(4));
}
