mod common;

use common::*;
use gohkit::exactpoly::{parse_expression, series_invert_unit, Ambient, JetSeries, Polynomial};
use proptest::prelude::*;

const AMB: Ambient = Ambient::phase(2);

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn ring_axioms(f in poly_strategy(AMB, 3, 5), g in poly_strategy(AMB, 3, 5), h in poly_strategy(AMB, 3, 5)) {
        prop_assert_eq!(&(&f * &g) * &h, &f * &(&g * &h));
        prop_assert_eq!(&(&f + &g) + &h, &f + &(&g + &h));
        prop_assert_eq!(&f * &(&g + &h), &(&f * &g) + &(&f * &h));
        prop_assert_eq!(&f * &g, &g * &f);
        prop_assert!((&f - &f).is_zero());
    }

    #[test]
    fn leibniz(f in poly_strategy(AMB, 3, 5), g in poly_strategy(AMB, 3, 5), v in 0usize..4) {
        let lhs = (&f * &g).partial(v).unwrap();
        let rhs = &(&f * &g.partial(v).unwrap()) + &(&g * &f.partial(v).unwrap());
        prop_assert_eq!(lhs, rhs);
    }

    #[test]
    fn print_parse_print(f in poly_strategy(AMB, 4, 6)) {
        let printed = f.to_string();
        let again = parse_expression(&printed, AMB).unwrap();
        prop_assert_eq!(&again, &f);
        prop_assert_eq!(again.to_string(), printed);
    }

    #[test]
    fn evaluation_is_a_homomorphism(
        f in poly_strategy(AMB, 3, 5),
        g in poly_strategy(AMB, 3, 5),
        pt in prop::collection::vec(rational_strategy(), 4),
    ) {
        let ef = f.eval_rational(&pt).unwrap();
        let eg = g.eval_rational(&pt).unwrap();
        prop_assert_eq!((&f * &g).eval_rational(&pt).unwrap(), &ef * &eg);
        prop_assert_eq!((&f + &g).eval_rational(&pt).unwrap(), &ef + &eg);
    }

    #[test]
    fn unit_inversion(c in rational_strategy(), tail in poly_strategy(Ambient::base(3), 3, 6), d in 1u64..5) {
        prop_assume!(c != q(0, 1));
        let amb = Ambient::base(3);
        let body = &(&tail - &Polynomial::constant(amb, tail.constant_term())) + &Polynomial::constant(amb, c);
        let u = JetSeries::new(body, d).unwrap();
        let inv = series_invert_unit(&u).unwrap();
        prop_assert_eq!(inv.mul(&u).unwrap(), JetSeries::one(3, d));
    }
}

#[test]
fn canonical_form_invariants() {
    let f = parse_expression("6/4*x1 + 0*p2 + x1^0*3", AMB).unwrap();
    assert_eq!(f.to_string(), "3/2*x1 + 3");
    for (m, c) in f.terms() {
        assert!(!num_traits::Zero::is_zero(c));
        assert_eq!(m.total_degree(), m.exponents().iter().map(|&e| e as u64).sum::<u64>());
    }
    let z = parse_expression("x1 - x1", AMB).unwrap();
    assert_eq!(z, Polynomial::zero(AMB));
    assert_eq!(z.to_string(), "0");
}

#[test]
fn truncation_after_products() {
    let amb = Ambient::base(2);
    let a = JetSeries::new(parse_expression("1 + x1 + x2^2", amb).unwrap(), 2).unwrap();
    let b = a.mul(&a).unwrap();
    assert_eq!(b.body(), &parse_expression("1 + 2*x1 + x1^2 + 2*x2^2", amb).unwrap());
    assert!(b.body().total_degree().unwrap() <= 2);
}
