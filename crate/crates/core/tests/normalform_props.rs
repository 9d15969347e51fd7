use gohkit::fixtures;
use gohkit::normalform::{
    normalize_frame, normalize_linear, phi_identity_holds, phi_step, psi_identity_holds, psi_step, JetFrame, Stage,
};
use proptest::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

proptest! {
    #![proptest_config(ProptestConfig::with_cases(12))]

    #[test]
    fn stages_hold_after_every_step(seed in any::<u64>(), n in 3usize..=5, gap in 1usize..=2, d in 1u64..=3) {
        prop_assume!(gap < n);
        let m = n - gap;
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let frame = fixtures::random_frame(n, m, 2, &mut rng);
        let raw = JetFrame::from_frame(&frame, d).unwrap();
        let (mut cur, change) = normalize_linear(&raw).unwrap();
        prop_assert_eq!(cur.stage(), Stage::V(1));
        prop_assert!(cur.stage_holds());
        for j in 1..=m {
            prop_assert!(phi_identity_holds(&cur, j).unwrap());
            cur = phi_step(&cur, j).unwrap();
            prop_assert_eq!(cur.stage(), Stage::Z(j));
            prop_assert!(cur.stage_holds());
            prop_assert!(psi_identity_holds(&cur, j).unwrap());
            cur = psi_step(&cur, j).unwrap();
            prop_assert!(cur.stage_holds(), "after psi_{}", j);
            prop_assert_eq!(cur.order(), d);
        }
        prop_assert_eq!(cur.stage(), Stage::Normal);

        let nf = normalize_frame(&frame, d).unwrap();
        prop_assert_eq!(&nf.frame, &cur);
        prop_assert_eq!(&nf.change, &change);

        // A normal form is its own normal form.
        let again = normalize_frame(&nf.frame.to_frame().unwrap(), d).unwrap();
        prop_assert!(again.change.is_identity());
        prop_assert_eq!(again.frame.corrections(), nf.frame.corrections());
    }
}

#[test]
fn linear_change_round_trips() {
    let mut rng = ChaCha8Rng::seed_from_u64(4);
    let frame = fixtures::random_frame(4, 2, 2, &mut rng);
    let nf = normalize_frame(&frame, 2).unwrap();
    let x: Vec<_> = (1..=4).map(|k| gohkit::exactpoly::rat(k, 3)).collect();
    assert_eq!(nf.change.to_old(&nf.change.to_new(&x)), x);
}
