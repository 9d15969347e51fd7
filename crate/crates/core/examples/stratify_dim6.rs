//! Kernel-dimension strata of the Goh matrix, including a hyperplane stratum
//! that random sampling alone would miss.
//!
//!     cargo run --release --example stratify_dim6 [seed]

use gohkit::abnormal::{stratify, StratifyConfig};
use gohkit::fixtures;

fn main() {
    let seed = std::env::args().nth(1).and_then(|s| s.parse().ok()).unwrap_or(11);
    let frame = fixtures::dim6_cubic();
    let cfg = StratifyConfig::new(seed);
    let s = stratify(&frame, &cfg).unwrap();

    println!("dims {:?} (ranks {:?}) from {} generic samples", s.dims, s.ranks, s.generic_samples);
    for l in &s.levels {
        let on_locus = l.witnesses.iter().filter(|w| w.on_locus).count();
        println!("d = {}: {} witnesses, {} found on a vanishing locus", l.dim, l.witnesses.len(), on_locus);
        if let Some(w) = l.witnesses.iter().find(|w| w.on_locus) {
            let x: Vec<String> = w.x_exact.as_ref().unwrap().iter().map(|q| q.to_string()).collect();
            println!("  e.g. x = ({})", x.join(", "));
        }
    }
}
