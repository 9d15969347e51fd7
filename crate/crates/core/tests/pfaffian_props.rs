mod common;

use common::*;
use gohkit::exactpoly::{Ambient, Polynomial};
use gohkit::linalg::rational_rank;
use gohkit::pfaffian::{
    calibration, kernel_generators, minor_determinant, pfaffian_by_definition, pfaffian_by_recursion,
    pfaffian_derivative, skew_rank, IndexSet, SkewMatrix,
};
use gohkit::vectorfield::{FieldKind, VectorField};
use proptest::prelude::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

const AMB: Ambient = Ambient::base(2);

/// `sum_l u_l v_l^T - v_l u_l^T`, rank at most `2k`.
fn low_rank_skew(m: usize, k: usize, rng: &mut ChaCha8Rng) -> SkewMatrix {
    let vecs: Vec<(Vec<Polynomial>, Vec<Polynomial>)> = (0..k)
        .map(|_| {
            let u = (0..m).map(|_| random_poly(AMB, 1, 2, rng)).collect();
            let v = (0..m).map(|_| random_poly(AMB, 1, 2, rng)).collect();
            (u, v)
        })
        .collect();
    SkewMatrix::from_fn(m, AMB, |i, j| {
        vecs.iter().fold(Polynomial::zero(AMB), |acc, (u, v)| &acc + &(&(&u[i] * &v[j]) - &(&v[i] * &u[j])))
    })
    .unwrap()
}

fn set_strategy(m: usize) -> impl Strategy<Value = IndexSet> {
    (1u32..(1 << m)).prop_map(IndexSet::from_bits)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(40))]

    #[test]
    fn pfaffian_squared_is_determinant(seed in any::<u64>(), m in 1usize..=6) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let a = random_skew(m, AMB, &mut rng);
        let all: Vec<usize> = (0..m).collect();
        let phi = pfaffian_by_definition(&a, IndexSet::full(m)).unwrap();
        prop_assert_eq!(&phi * &phi, det(&submatrix(&a, &all, &all), AMB));
    }

    #[test]
    fn recursion_is_pivot_independent(seed in any::<u64>(), set in set_strategy(6)) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let a = random_skew(6, AMB, &mut rng);
        let def = pfaffian_by_definition(&a, set).unwrap();
        if set.len() % 2 == 0 {
            for pivot in set.iter() {
                prop_assert_eq!(&pfaffian_by_recursion(&a, set, pivot).unwrap(), &def);
            }
        } else {
            prop_assert!(def.is_zero());
        }
    }

    #[test]
    fn derivative_rule(seed in any::<u64>(), m in (1usize..=3).prop_map(|k| 2 * k)) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let a = random_skew(m, AMB, &mut rng);
        let d = VectorField::new(FieldKind::Base, 2, vec![random_poly(AMB, 1, 2, &mut rng), random_poly(AMB, 1, 2, &mut rng)]).unwrap();
        let set = IndexSet::full(m);
        let direct = d.apply(&pfaffian_by_definition(&a, set).unwrap()).unwrap();
        prop_assert_eq!(pfaffian_derivative(&a, set, &d).unwrap(), direct);
    }

    #[test]
    fn odd_minor_factorization(seed in any::<u64>(), half in 1usize..=3) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let t = 2 * half + 1;
        let a = random_skew(t, AMB, &mut rng);
        let full = IndexSet::full(t);
        let i = rng.gen_range(0..t);
        let j = rng.gen_range(0..t);
        let rows: Vec<usize> = full.without(i).iter().collect();
        let cols: Vec<usize> = full.without(j).iter().collect();
        let lhs = det(&submatrix(&a, &rows, &cols), AMB);
        let rhs = &pfaffian_by_definition(&a, full.without(i)).unwrap() * &pfaffian_by_definition(&a, full.without(j)).unwrap();
        prop_assert_eq!(&lhs, &rhs);
        prop_assert_eq!(minor_determinant(&a, full.without(i), full.without(j)).unwrap(), lhs);
    }

    #[test]
    fn kernel_generators_span_the_kernel(seed in any::<u64>(), m in 3usize..=6, k in 1usize..=2) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let a = low_rank_skew(m, k, &mut rng);
        let r = skew_rank(&a, None).unwrap();
        prop_assert!(r <= 2 * k);
        prop_assume!(r < m);
        let gens = kernel_generators(&a, r).unwrap();
        for g in &gens {
            prop_assert!(is_zero_vec(&a.apply(&g.dense(m, AMB)).unwrap()));
        }
        // At a point where the rank is r, the generators span an (m - r)-space.
        for _ in 0..10 {
            let x = random_point(2, &mut rng);
            let at = a.evaluate(&x).unwrap();
            if skew_rank(&at, None).unwrap() != r {
                continue;
            }
            let rows: Vec<_> = gens
                .iter()
                .map(|g| g.dense(m, AMB).iter().map(|p| p.eval_rational(&x).unwrap()).collect())
                .collect();
            prop_assert_eq!(rational_rank(&rows), m - r);
            break;
        }
    }
}

#[test]
fn calibration_constants() {
    let cal = calibration();
    for size in (2..=16).step_by(2) {
        assert_eq!(cal.recursion_prefactor(size), q(1, 1), "size {size}");
        assert_eq!(cal.derivative_prefactor(size), q(1, 2), "size {size}");
    }
}

#[test]
fn block_matrix_pfaffian_is_one() {
    for pairs in 1..=4 {
        let a = SkewMatrix::standard_block(2 * pairs, pairs);
        let pf = pfaffian_by_definition(&a, IndexSet::full(2 * pairs)).unwrap();
        assert_eq!(pf.constant_term(), q(1, 1));
    }
}

#[test]
fn subsets_are_lexicographic() {
    let labels: Vec<Vec<usize>> = IndexSet::subsets(4, 2).into_iter().map(|s| s.labels()).collect();
    assert_eq!(labels, vec![vec![1, 2], vec![1, 3], vec![1, 4], vec![2, 3], vec![2, 4], vec![3, 4]]);
}
