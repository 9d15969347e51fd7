//! Kernel vectors of a skew matrix built from Pfaffian minors, checked at points.
//!
//!     cargo run --example kernel_generators

use gohkit::abnormal::goh_matrix;
use gohkit::exactpoly::rat;
use gohkit::fixtures;
use gohkit::pfaffian::{kernel_generators, skew_rank};

fn main() {
    let frame = fixtures::dim5_rank2();
    let red = goh_matrix(&frame).unwrap().reduced.unwrap();
    let r = skew_rank(&red, None).unwrap();
    println!("H~ has generic rank {r}");

    let gens = kernel_generators(&red, r).unwrap();
    for g in &gens {
        let v = g.dense(red.size(), red.ambient());
        let cells: Vec<String> = v.iter().map(|p| p.to_string()).collect();
        println!("K{} = ({})", g.index_set, cells.join(", "));
        let hv = red.apply(&v).unwrap();
        assert!(hv.iter().all(|p| p.is_zero()), "not in the kernel");
    }

    let x = [rat(1, 3), rat(-2, 1), rat(5, 7), rat(1, 2), rat(0, 1)];
    let at = red.evaluate(&x).unwrap();
    println!("rank at x = {:?}: {}", x.iter().map(|q| q.to_string()).collect::<Vec<_>>(), skew_rank(&at, None).unwrap());
}
