//! Abnormal generators and their exact divergence certificates.
//!
//!     cargo run --example divergence_certificate

use gohkit::abnormal::{abnormal_generators, divergence_certificate};
use gohkit::fixtures;

fn main() {
    let frame = fixtures::dim4();
    for g in abnormal_generators(&frame, 2).unwrap() {
        println!("{g}");
        println!("  p-degrees {:?}", g.p_degree);
        let z = g.z.as_ref().unwrap();
        println!("  Z = {z}");
        println!("  div Z = {}", z.divergence());

        let cert = divergence_certificate(&g, &frame).unwrap();
        println!("  div Y = {}", cert.phase_divergence);
        println!("  triple-bracket expansion = {}", cert.jacobi_expansion);
        if let Some(b) = &cert.base {
            let lambda = b.lambda.as_ref().map(|l| l.to_string()).unwrap_or_else(|| "-".into());
            println!("  div Z = sum c_j Z(x_j) with lambda = {lambda}, residual {}", b.residual);
        }
        assert!(cert.is_valid());
    }
}
