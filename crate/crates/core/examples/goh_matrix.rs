//! Goh matrix of a corank-1 frame and its reduced form.
//!
//!     cargo run --example goh_matrix [fixture]

use gohkit::abnormal::goh_matrix;
use gohkit::fixtures;
use gohkit::pfaffian::skew_rank;

fn main() {
    let name = std::env::args().nth(1).unwrap_or_else(|| "dim4".into());
    let fx = fixtures::fixture(&name).unwrap_or_else(|| panic!("fixtures: {:?}", fixtures::names()));
    let frame = fx.frame();
    println!("{}: {}", fx.name, fx.description);
    for (k, x) in frame.fields().iter().enumerate() {
        println!("X{} = {x}", k + 1);
    }

    let goh = goh_matrix(&frame).unwrap();
    println!("\nH:");
    for row in goh.strings() {
        println!("  {row:?}");
    }
    if let Some(red) = &goh.reduced {
        println!("H = p{} * H~, with H~:", frame.n());
        for row in red.rows() {
            let cells: Vec<String> = row.iter().map(|p| p.to_string()).collect();
            println!("  [{}]", cells.join(", "));
        }
        println!("generic rank of H~: {}", skew_rank(red, None).unwrap());
    }
}
