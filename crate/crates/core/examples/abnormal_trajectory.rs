//! Integrate the Engel abnormal field and export the trajectory as CSV.
//!
//!     cargo run --example abnormal_trajectory > engel.csv

use gohkit::abnormal::abnormal_generators;
use gohkit::dynamics::abnormal_trajectory;
use gohkit::fixtures;

fn main() {
    let frame = fixtures::engel4();
    let gens = abnormal_generators(&frame, 2).unwrap();
    let g = &gens[0];
    eprintln!("Z{} = {}", g.index_set, g.z.as_ref().unwrap());

    let run = abnormal_trajectory(&frame, g, &[0.0; 4], 1.0, 1e-2).unwrap();
    let c = &run.certification;
    eprintln!("end point {:?}", run.trajectory.last());
    eprintln!("max residuals: b {:e}, c {:e}, certified {}", c.max_residual_b, c.max_residual_c, c.certified);
    print!("{}", run.trajectory.to_csv(None));
}
