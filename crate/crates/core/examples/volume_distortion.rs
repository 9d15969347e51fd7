//! Empirical divergence ratio of Z and Liouville weights of a point cloud
//! against the bound exp(-K C).
//!
//!     cargo run --release --example volume_distortion

use gohkit::abnormal::abnormal_generators;
use gohkit::dynamics::{divergence_ratio_scan, sample_box, volume_distortion};
use gohkit::fixtures;

fn main() {
    let frame = fixtures::dim4();
    let g = abnormal_generators(&frame, 2).unwrap().remove(0);
    let z = g.z.unwrap();

    let scan = divergence_ratio_scan(&z, -1.0, 1.0, 2000, 5, 1e-3).unwrap();
    println!("sup |div Z|/|Z| ~ {:.4} at {:.3?} ({} samples below cutoff)", scan.ratio_sup, scan.argmax, scan.offenders);

    let cloud = sample_box(4, -0.2, 0.2, 50, 9);
    let v = volume_distortion(&z, &cloud, 0.5, 1e-2, scan.ratio_sup, 1e-6).unwrap();
    println!("K = {:.4}, C = {:.4}, bound = {:.4}", v.k_hat, v.c_hat, v.bound);
    for (t, w) in v.times.iter().zip(&v.min_weight).step_by(10) {
        println!("  t = {t:.2}: min weight {w:.5}");
    }
    println!("bound holds: {}", v.satisfied);
}
