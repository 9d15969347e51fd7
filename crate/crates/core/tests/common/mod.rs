//! Oracles and generators shared by the integration tests. The oracles are
//! written from the textbook formulas and do not call the routines they check.
#![allow(dead_code)]

use std::collections::HashMap;

use gohkit::exactpoly::{Ambient, Monomial, Polynomial, Rational};
use gohkit::pfaffian::SkewMatrix;
use gohkit::vectorfield::{FieldKind, VectorField};
use num_traits::Zero;
use proptest::prelude::*;
use rand::Rng;

pub fn q(n: i64, d: i64) -> Rational {
    Rational::new(n.into(), d.into())
}

/// Determinant by cofactor expansion along successive rows, memoized on the
/// set of columns still available.
pub fn det(rows: &[Vec<Polynomial>], amb: Ambient) -> Polynomial {
    fn go(rows: &[Vec<Polynomial>], row: usize, cols: u32, amb: Ambient, memo: &mut HashMap<u32, Polynomial>) -> Polynomial {
        if row == rows.len() {
            return Polynomial::one(amb);
        }
        if let Some(v) = memo.get(&cols) {
            return v.clone();
        }
        let mut acc = Polynomial::zero(amb);
        let mut sign = 1;
        for c in 0..rows.len() {
            if cols & (1 << c) == 0 {
                continue;
            }
            let e = &rows[row][c];
            if !e.is_zero() {
                let minor = go(rows, row + 1, cols & !(1 << c), amb, memo);
                let t = e * &minor;
                acc = if sign > 0 { &acc + &t } else { &acc - &t };
            }
            sign = -sign;
        }
        memo.insert(cols, acc.clone());
        acc
    }
    if rows.is_empty() {
        return Polynomial::one(amb);
    }
    go(rows, 0, (1u32 << rows.len()) - 1, amb, &mut HashMap::new())
}

/// Square submatrix of `a` on the given rows and columns (0-based).
pub fn submatrix(a: &SkewMatrix, rows: &[usize], cols: &[usize]) -> Vec<Vec<Polynomial>> {
    rows.iter().map(|&i| cols.iter().map(|&j| a.entry(i, j)).collect()).collect()
}

/// `[X^i, X^j](x_n)` for `X^k = d/dx_k + A_k d/dx_n`, 0-based `i`, `j`.
pub fn bracket_xn(a: &[Polynomial], i: usize, j: usize) -> Polynomial {
    let n = a.len() + 1;
    let last = n - 1;
    let d = |p: &Polynomial, v: usize| p.partial(v).unwrap();
    let t1 = &d(&a[j], i) - &d(&a[i], j);
    let t2 = &(&a[i] * &d(&a[j], last)) - &(&a[j] * &d(&a[i], last));
    &t1 + &t2
}

/// Components of `sum_k c_k X^k` for a corank-1 frame with functions `a`.
pub fn corank_one_combination(a: &[Polynomial], coeffs: &[(usize, Polynomial)]) -> Vec<Polynomial> {
    let n = a.len() + 1;
    let amb = Ambient::base(n);
    let mut out = vec![Polynomial::zero(amb); n];
    for (k, c) in coeffs {
        out[*k] = &out[*k] + c;
        out[n - 1] = &out[n - 1] + &(c * &a[*k]);
    }
    out
}

/// `sum_i d/dv_i (V_i)` over every slot of the ambient.
pub fn divergence(v: &VectorField) -> Polynomial {
    let amb = v.ambient();
    v.components()
        .iter()
        .enumerate()
        .fold(Polynomial::zero(amb), |acc, (i, c)| &acc + &c.partial(i).unwrap())
}

pub fn random_rational<R: Rng>(rng: &mut R) -> Rational {
    q(rng.gen_range(-9..=9), rng.gen_range(1..=4))
}

pub fn random_point<R: Rng>(len: usize, rng: &mut R) -> Vec<Rational> {
    (0..len).map(|_| random_rational(rng)).collect()
}

/// Random polynomial of total degree `<= degree` with at most `terms` terms
/// and small rational coefficients.
pub fn random_poly<R: Rng>(amb: Ambient, degree: u32, terms: usize, rng: &mut R) -> Polynomial {
    let nv = amb.nvars();
    Polynomial::from_terms(
        amb,
        (0..rng.gen_range(0..=terms)).map(|_| {
            let mut exps = vec![0u32; nv];
            for _ in 0..rng.gen_range(0..=degree) {
                exps[rng.gen_range(0..nv)] += 1;
            }
            (Monomial::from_exponents(exps), random_rational(rng))
        }),
    )
}

/// Skew matrix whose upper entries mix constants and degree-`<= 2` polynomials.
pub fn random_skew<R: Rng>(m: usize, amb: Ambient, rng: &mut R) -> SkewMatrix {
    SkewMatrix::from_fn(m, amb, |_, _| {
        if rng.gen_bool(0.3) {
            Polynomial::constant(amb, random_rational(rng))
        } else {
            random_poly(amb, 2, 3, rng)
        }
    })
    .unwrap()
}

/// Substitute `p_i -> lambda p_i` where `lambda` is the extra variable
/// `x_{n+1}` of a base ambient of dimension `2n + 1`.
pub fn dilate(f: &Polynomial) -> Polynomial {
    let amb = f.ambient();
    let n = amb.n();
    let target = Ambient::base(2 * n + 1);
    Polynomial::from_terms(
        target,
        f.terms().map(|(m, c)| {
            let mut e = m.exponents().to_vec();
            let pdeg: u32 = e[n..].iter().sum();
            e.push(pdeg);
            (Monomial::from_exponents(e), c.clone())
        }),
    )
}

/// `lambda^k f` in the ambient used by [`dilate`], for `f` over phase space.
pub fn lambda_times(f: &Polynomial, k: u32) -> Polynomial {
    let amb = f.ambient();
    let n = amb.n();
    let target = Ambient::base(2 * n + 1);
    Polynomial::from_terms(
        target,
        f.terms().map(|(m, c)| {
            let mut e = m.exponents().to_vec();
            e.push(k);
            (Monomial::from_exponents(e), c.clone())
        }),
    )
}

pub fn is_zero_vec(v: &[Polynomial]) -> bool {
    v.iter().all(Polynomial::is_zero)
}

pub fn rational_is_zero(v: &[Rational]) -> bool {
    v.iter().all(Zero::is_zero)
}

// proptest strategies

pub fn rational_strategy() -> impl Strategy<Value = Rational> {
    (-12i64..=12, 1i64..=6).prop_map(|(n, d)| q(n, d))
}

pub fn poly_strategy(amb: Ambient, degree: u32, terms: usize) -> impl Strategy<Value = Polynomial> {
    let nv = amb.nvars();
    let monomial = prop::collection::vec(0..nv, 0..=degree as usize).prop_map(move |vars| {
        let mut e = vec![0u32; nv];
        for v in vars {
            e[v] += 1;
        }
        Monomial::from_exponents(e)
    });
    prop::collection::vec((monomial, rational_strategy()), 0..=terms)
        .prop_map(move |raw| Polynomial::from_terms(amb, raw))
}

pub fn base_field_strategy(n: usize, degree: u32, terms: usize) -> impl Strategy<Value = VectorField> {
    prop::collection::vec(poly_strategy(Ambient::base(n), degree, terms), n)
        .prop_map(move |c| VectorField::new(FieldKind::Base, n, c).unwrap())
}

/// Fiber-linear function `sum_i c_i(x) p_i` on `T*R^n`.
pub fn fiber_linear_strategy(n: usize, degree: u32, terms: usize) -> impl Strategy<Value = Polynomial> {
    prop::collection::vec(poly_strategy(Ambient::base(n), degree, terms), n).prop_map(move |c| {
        let amb = Ambient::phase(n);
        c.iter().enumerate().fold(Polynomial::zero(amb), |acc, (i, ci)| {
            &acc + &(&ci.embed(amb).unwrap() * &Polynomial::p(amb, i))
        })
    })
}
