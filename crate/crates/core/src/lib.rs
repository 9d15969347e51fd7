//! Exact polynomial toolkit for Goh matrices, Pfaffian minors and abnormal
//! vector fields of polynomial distributions.
//!
//! Runnable examples:
//!
//! ```text
//! parse_expressions       polynomials over x, p with rational coefficients
//! brackets                Lie and Poisson brackets, Hamiltonian lifts
//! goh_matrix              H and its reduced form for a corank-1 frame
//! pfaffian_minors         definition, row recursion, derivative rule
//! kernel_generators       kernel vectors from minors
//! divergence_certificate  Y_I, Z_I and exact divergence residuals
//! stratify_dim6           kernel-dimension strata with locus refinement
//! normal_form             jet normal form and rank preservation
//! abnormal_trajectory     RK4 along Z_I, CSV export
//! volume_distortion       divergence ratio scan and Liouville weights
//! cli_in_process          the `gohkit` front end called from code
//! ```
//!
//! `cargo run --example <name>`; the stratification and normal-form examples
//! are faster with `--release`.

#![allow(clippy::neg_cmp_op_on_partial_ord, clippy::needless_range_loop)]

pub mod abnormal;
pub mod cli;
pub mod dynamics;
pub mod exactpoly;
pub mod fixtures;
pub mod linalg;
pub mod normalform;
pub mod pfaffian;
pub mod vectorfield;
