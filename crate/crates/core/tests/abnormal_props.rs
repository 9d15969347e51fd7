mod common;

use common::*;
use gohkit::abnormal::{
    abnormal_generators_with, annihilator_basis, annihilator_point, divergence_residuals, goh_matrix, stratify,
    StratifyConfig,
};
use gohkit::exactpoly::{parse_expression, Ambient, Homogeneity, Polynomial};
use gohkit::fixtures;
use gohkit::pfaffian::{epsilon_sign, pfaffian_by_definition, skew_rank, IndexSet};
use gohkit::vectorfield::Frame;
use num_traits::Zero;
use proptest::prelude::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

fn random_frame(seed: u64, n: usize) -> Frame {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    fixtures::random_corank_one(n, 2, &mut rng)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(16))]

    #[test]
    fn goh_matrix_structure(seed in any::<u64>(), n in 3usize..=5) {
        let frame = random_frame(seed, n);
        let goh = goh_matrix(&frame).unwrap();
        let red = goh.reduced.as_ref().unwrap();
        let a = frame.normal_form().unwrap();
        let amb = Ambient::phase(n);
        let pn = Polynomial::p(amb, n - 1);
        for i in 0..n - 1 {
            for j in 0..n - 1 {
                let h = goh.h.entry(i, j);
                prop_assert_eq!(&h, &-&goh.h.entry(j, i));
                if !h.is_zero() {
                    prop_assert_eq!(h.p_homogeneous_degree(), Homogeneity::Degree(1));
                }
                prop_assert_eq!(&red.entry(i, j), &bracket_xn(a, i, j));
                prop_assert_eq!(&h, &(&pn * &red.entry(i, j).embed(amb).unwrap()));
            }
        }
    }

    #[test]
    fn generators_are_kernel_vectors_on_the_annihilator(seed in any::<u64>(), n in 3usize..=5) {
        let frame = random_frame(seed, n);
        let goh = goh_matrix(&frame).unwrap();
        let r = skew_rank(&goh.h, None).unwrap();
        prop_assume!(r < frame.rank());
        let mut rng = ChaCha8Rng::seed_from_u64(seed ^ 0x5eed);
        let gens = abnormal_generators_with(&frame, &goh, r).unwrap();
        for _ in 0..4 {
            let x = random_point(n, &mut rng);
            let w: Vec<_> = (0..annihilator_basis(&frame, &x).unwrap().len()).map(|_| random_rational(&mut rng)).collect();
            let pt = annihilator_point(&frame, &x, &w).unwrap();
            for g in &gens {
                let mut dense = vec![Polynomial::zero(Ambient::phase(n)); frame.rank()];
                for (j, c) in &g.coefficients {
                    dense[*j] = c.clone();
                }
                for row in 0..frame.rank() {
                    let v = (0..frame.rank()).fold(Polynomial::zero(Ambient::phase(n)), |acc, k| &acc + &(&goh.h.entry(row, k) * &dense[k]));
                    prop_assert!(v.eval_rational(&pt).unwrap().is_zero());
                }
            }
        }
    }

    #[test]
    fn homogeneity_and_corank_one_coherence(seed in any::<u64>(), n in 3usize..=5) {
        let frame = random_frame(seed, n);
        let goh = goh_matrix(&frame).unwrap();
        let red = goh.reduced.as_ref().unwrap();
        let m = frame.rank();
        let amb = Ambient::phase(n);
        let pn = Polynomial::p(amb, n - 1);
        for r in (0..m).step_by(2) {
            let s = (r / 2) as u32;
            for g in abnormal_generators_with(&frame, &goh, r).unwrap() {
                for (i, c) in g.y.components().iter().enumerate() {
                    let k = if i < n { s } else { s + 1 };
                    prop_assert_eq!(dilate(c), lambda_times(c, k));
                }
                let z = g.z.as_ref().unwrap();
                for j in 0..m {
                    let expected = if g.index_set.contains(j) {
                        pfaffian_by_definition(red, g.index_set.without(j)).unwrap().scale_int(epsilon_sign(g.index_set, j).unwrap())
                    } else {
                        Polynomial::zero(Ambient::base(n))
                    };
                    prop_assert_eq!(z.component(j), &expected);
                }
                let psn = pn.pow(s).unwrap();
                for i in 0..n {
                    prop_assert_eq!(&g.y.component(i).clone(), &(&psn * &z.component(i).embed(amb).unwrap()));
                }
            }
        }
    }

    #[test]
    fn divergence_and_jacobi_vanish(seed in any::<u64>(), n in 3usize..=5) {
        let frame = random_frame(seed, n);
        let goh = goh_matrix(&frame).unwrap();
        for r in (0..frame.rank()).step_by(2) {
            for g in abnormal_generators_with(&frame, &goh, r).unwrap() {
                prop_assert!(divergence(&g.y).is_zero());
                let c = divergence_residuals(&g, &frame).unwrap();
                prop_assert!(c.is_valid(), "{:?}", c);
            }
        }
    }

    #[test]
    fn rank_two_frames_have_vanishing_pfaffian(seed in any::<u64>()) {
        // A_1 arbitrary, A_2..A_4 functions of x1 only: every bracket among
        // X^2..X^4 vanishes in the x5 direction.
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let amb = Ambient::base(5);
        let mut a = vec![random_poly(amb, 2, 4, &mut rng)];
        for _ in 0..3 {
            let c: Vec<i64> = (0..3).map(|_| rng.gen_range(-3..=3)).collect();
            a.push(parse_expression(&format!("{} + {}*x1 + {}*x1^2", c[0], c[1], c[2]), amb).unwrap());
        }
        let frame = Frame::corank_one(5, a.clone()).unwrap();
        let red = goh_matrix(&frame).unwrap().reduced.unwrap();
        prop_assert!(pfaffian_by_definition(&red, IndexSet::full(4)).unwrap().is_zero());
        let b = |i: usize, j: usize| bracket_xn(&a, i, j);
        let identity = &(&(&b(0, 1) * &b(2, 3)) - &(&b(0, 2) * &b(1, 3))) + &(&b(0, 3) * &b(1, 2));
        prop_assert!(identity.is_zero());
    }
}

#[test]
fn stratification_parity_on_random_frames() {
    for seed in 0..6u64 {
        let n = 3 + (seed as usize % 2);
        let frame = random_frame(seed, n);
        let mut cfg = StratifyConfig::new(seed);
        cfg.samples = 32;
        cfg.locus_samples = 8;
        let s = stratify(&frame, &cfg).unwrap();
        let m = frame.rank();
        for l in &s.levels {
            assert_eq!(l.dim % 2, m % 2, "seed {seed}: {:?}", s.dims);
            for w in &l.witnesses {
                assert_eq!(w.kernel_dim, l.dim);
                if w.step2_generating {
                    assert!(w.kernel_dim + 2 <= m);
                }
            }
        }
    }
}
