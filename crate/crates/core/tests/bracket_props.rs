mod common;

use common::*;
use gohkit::exactpoly::{Ambient, Polynomial};
use gohkit::vectorfield::{hamiltonian_lift, hamiltonian_vector_field, poisson_bracket, VectorField};
use proptest::prelude::*;

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn lie_jacobi(x in base_field_strategy(3, 3, 4), y in base_field_strategy(3, 3, 4), z in base_field_strategy(3, 3, 4)) {
        let t1 = x.lie_bracket(&y.lie_bracket(&z).unwrap()).unwrap();
        let t2 = y.lie_bracket(&z.lie_bracket(&x).unwrap()).unwrap();
        let t3 = z.lie_bracket(&x.lie_bracket(&y).unwrap()).unwrap();
        let sum = t1.checked_add(&t2).unwrap().checked_add(&t3).unwrap();
        prop_assert!(sum.is_zero());
    }

    #[test]
    fn lie_bracket_is_skew(x in base_field_strategy(3, 3, 4), y in base_field_strategy(3, 3, 4)) {
        let a = x.lie_bracket(&y).unwrap();
        let b = y.lie_bracket(&x).unwrap();
        prop_assert!(a.checked_add(&b).unwrap().is_zero());
    }

    #[test]
    fn poisson_lie_compatibility(x in base_field_strategy(3, 3, 4), y in base_field_strategy(3, 3, 4)) {
        let lhs = poisson_bracket(&hamiltonian_lift(&x).unwrap(), &hamiltonian_lift(&y).unwrap()).unwrap();
        let rhs = hamiltonian_lift(&x.lie_bracket(&y).unwrap()).unwrap();
        prop_assert_eq!(lhs, rhs);
    }

    #[test]
    fn poisson_jacobi(f in fiber_linear_strategy(2, 2, 3), g in fiber_linear_strategy(2, 2, 3), h in fiber_linear_strategy(2, 2, 3)) {
        let pb = |a: &Polynomial, b: &Polynomial| poisson_bracket(a, b).unwrap();
        let sum = &(&pb(&f, &pb(&g, &h)) + &pb(&g, &pb(&h, &f))) + &pb(&h, &pb(&f, &g));
        prop_assert!(sum.is_zero());
    }

    #[test]
    fn hamiltonian_fields_are_divergence_free(h in poly_strategy(Ambient::phase(3), 4, 8)) {
        let v = hamiltonian_vector_field(&h).unwrap();
        prop_assert!(divergence(&v).is_zero());
        prop_assert!(v.divergence().is_zero());
    }

    #[test]
    fn dilation_equivariance(h in fiber_linear_strategy(3, 2, 3)) {
        let v = hamiltonian_vector_field(&h).unwrap();
        let n = 3;
        for (i, c) in v.components().iter().enumerate() {
            let expected = if i < n { lambda_times(c, 0) } else { lambda_times(c, 1) };
            prop_assert_eq!(dilate(c), expected);
        }
    }

    #[test]
    fn vector_field_applies_as_derivation(x in base_field_strategy(2, 2, 3), f in poly_strategy(Ambient::base(2), 2, 4), g in poly_strategy(Ambient::base(2), 2, 4)) {
        let lhs = x.apply(&(&f * &g)).unwrap();
        let rhs = &(&f * &x.apply(&g).unwrap()) + &(&g * &x.apply(&f).unwrap());
        prop_assert_eq!(lhs, rhs);
    }
}

#[test]
fn symplectic_sign() {
    let amb = Ambient::phase(2);
    let pb = poisson_bracket(&Polynomial::p(amb, 0), &Polynomial::x(amb, 0)).unwrap();
    assert_eq!(pb, Polynomial::one(amb));
    let v = hamiltonian_vector_field(&(&Polynomial::x(amb, 1) * &Polynomial::p(amb, 0))).unwrap();
    assert_eq!(v.component(0), &Polynomial::x(amb, 1));
    assert_eq!(v.component(3), &-&Polynomial::p(amb, 0));
}

#[test]
fn lift_of_coordinate_field() {
    let amb = Ambient::phase(3);
    assert_eq!(hamiltonian_lift(&VectorField::coordinate(3, 2)).unwrap(), Polynomial::p(amb, 2));
}
