//! Named example frames and random frame generators.

use rand::Rng;

use crate::exactpoly::{parse_expression, Ambient, Monomial, Polynomial, Rational};
use crate::vectorfield::{Frame, VectorField};

/// A named corank-1 frame `X^i = d/dx_i + A_i d/dx_n`.
#[derive(Debug, Clone)]
pub struct Fixture {
    pub name: &'static str,
    pub description: &'static str,
    pub n: usize,
    pub a: &'static [&'static str],
}

impl Fixture {
    pub fn frame(&self) -> Frame {
        corank_one(self.n, self.a)
    }
}

pub const FIXTURES: &[Fixture] = &[
    Fixture {
        name: "martinet",
        description: "Martinet distribution in R^3: d/dx1, d/dx2 + x1^2 d/dx3. Reduced Goh entry 2*x1, singular surface x1 = 0.",
        n: 3,
        a: &["0", "x1^2"],
    },
    Fixture {
        name: "dim4",
        description: "Rank 3 in R^4 with coefficients depending on x4; a single generator Z with nonzero divergence.",
        n: 4,
        a: &["x2*x4", "x1^2", "x1*x2 + x4"],
    },
    Fixture {
        name: "dim4-engel",
        description: "Rank 3 in R^4 with A = (0, x1, x2). Constant reduced Goh matrix of rank 2; Z = d/dx1 + d/dx3 + x2 d/dx4.",
        n: 4,
        a: &["0", "x1", "x2"],
    },
    Fixture {
        name: "dim5",
        description: "Rank 4 in R^5 whose reduced Goh matrix has rank at most 2 everywhere, so its Pfaffian vanishes identically.",
        n: 5,
        a: &["x2*x3 + x4^2", "x1", "x1^2", "x1^3"],
    },
    Fixture {
        name: "dim6-cubic",
        description: "Rank 5 in R^6 with A = (0, x1, -x1, R(x2 + x3), 0), R(u) = u^3. Kernel dimension 1 off x2 + x3 = 0 and 3 on it. \
The cubic only reproduces the rank pattern: its singular set is a hyperplane of measure zero, not a positive-measure set.",
        n: 6,
        a: &["0", "x1", "0 - x1", "(x2 + x3)^3", "0"],
    },
];

pub fn fixture(name: &str) -> Option<&'static Fixture> {
    FIXTURES.iter().find(|f| f.name == name)
}

pub fn names() -> Vec<&'static str> {
    FIXTURES.iter().map(|f| f.name).collect()
}

/// Corank-1 frame from coefficient strings; panics on malformed input.
pub fn corank_one(n: usize, a: &[&str]) -> Frame {
    let amb = Ambient::base(n);
    let a = a
        .iter()
        .map(|s| parse_expression(s, amb).expect("fixture expression"))
        .collect();
    Frame::corank_one(n, a).expect("fixture frame")
}

pub fn martinet() -> Frame {
    fixture("martinet").unwrap().frame()
}

pub fn dim4() -> Frame {
    fixture("dim4").unwrap().frame()
}

pub fn engel4() -> Frame {
    fixture("dim4-engel").unwrap().frame()
}

pub fn dim5_rank2() -> Frame {
    fixture("dim5").unwrap().frame()
}

/// `A = (0, x1, -x1, R(x2+x3), 0)` for a polynomial `R` given in the variable `x1`.
pub fn dim6_with(r: &str) -> Frame {
    let amb = Ambient::base(6);
    let r = parse_expression(r, Ambient::base(1)).expect("R");
    let u = parse_expression("x2 + x3", amb).unwrap();
    let a4 = r.compose(&[u]).expect("compose");
    let mut a: Vec<Polynomial> = ["0", "x1", "0 - x1"]
        .iter()
        .map(|s| parse_expression(s, amb).unwrap())
        .collect();
    a.push(a4);
    a.push(Polynomial::zero(amb));
    Frame::corank_one(6, a).expect("frame")
}

pub fn dim6_cubic() -> Frame {
    fixture("dim6-cubic").unwrap().frame()
}

/// Random polynomial of total degree `<= degree` with integer coefficients in
/// `[-coeff, coeff]`; each monomial is kept with probability `density`.
pub fn random_polynomial<R: Rng>(amb: Ambient, degree: u32, coeff: i64, density: f64, rng: &mut R) -> Polynomial {
    let nv = amb.nvars();
    let mut out = Polynomial::zero(amb);
    for exps in monomials_up_to(nv, degree) {
        if rng.gen_bool(density) {
            let c = rng.gen_range(-coeff..=coeff);
            if c != 0 {
                let m = Monomial::from_exponents(exps);
                out = &out + &Polynomial::monomial(amb, m, Rational::from_integer(c.into()));
            }
        }
    }
    out
}

/// Exponent vectors of total degree `<= degree` in `nv` variables.
pub fn monomials_up_to(nv: usize, degree: u32) -> Vec<Vec<u32>> {
    fn rec(nv: usize, left: u32, cur: &mut Vec<u32>, out: &mut Vec<Vec<u32>>) {
        if cur.len() == nv {
            out.push(cur.clone());
            return;
        }
        for e in 0..=left {
            cur.push(e);
            rec(nv, left - e, cur, out);
            cur.pop();
        }
    }
    let mut out = Vec::new();
    rec(nv, degree, &mut Vec::new(), &mut out);
    out
}

/// Random corank-1 frame on `R^n` with coefficient degree `<= degree`.
pub fn random_corank_one<R: Rng>(n: usize, degree: u32, rng: &mut R) -> Frame {
    let amb = Ambient::base(n);
    let a = (0..n - 1)
        .map(|_| random_polynomial(amb, degree, 3, 0.5, rng))
        .collect();
    Frame::corank_one(n, a).expect("corank-1 frames are independent")
}

/// Random rank-`m` frame on `R^n`, not in normal form: an integer constant
/// part of full rank at the origin plus sparse terms of degree `1..=degree`.
pub fn random_frame<R: Rng>(n: usize, m: usize, degree: u32, rng: &mut R) -> Frame {
    let amb = Ambient::base(n);
    loop {
        let consts: Vec<Vec<i64>> = (0..m).map(|_| (0..n).map(|_| rng.gen_range(-2..=2)).collect()).collect();
        let rows: Vec<Vec<Rational>> = consts
            .iter()
            .map(|r| r.iter().map(|&c| Rational::from_integer(c.into())).collect())
            .collect();
        if crate::linalg::rational_rank(&rows) != m {
            continue;
        }
        let fields = consts
            .iter()
            .map(|row| {
                let comps = row
                    .iter()
                    .map(|&c| {
                        let tail = random_polynomial(amb, degree, 2, 0.15, rng);
                        let tail = &tail - &Polynomial::constant(amb, tail.constant_term());
                        &Polynomial::from_integer(amb, c) + &tail
                    })
                    .collect();
                VectorField::base(n, comps).expect("component count")
            })
            .collect();
        return Frame::new(n, fields).expect("independent at the origin");
    }
}
