//! Univariate polynomials over the rationals, for root finding on lines.

use nalgebra::DMatrix;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::exactpoly::{Polynomial, Rational};

/// Coefficients low to high, no trailing zeros.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct UnivariatePolynomial {
    coeffs: Vec<Rational>,
}

impl UnivariatePolynomial {
    pub fn new(mut coeffs: Vec<Rational>) -> Self {
        while coeffs.last().is_some_and(Zero::is_zero) {
            coeffs.pop();
        }
        UnivariatePolynomial { coeffs }
    }

    /// Read `p` as a polynomial in the variable `var`; `None` if any other
    /// variable occurs.
    pub fn from_polynomial(p: &Polynomial, var: usize) -> Option<Self> {
        let mut coeffs: Vec<Rational> = Vec::new();
        for (m, c) in p.terms() {
            for (v, &e) in m.exponents().iter().enumerate() {
                if v != var && e > 0 {
                    return None;
                }
            }
            let e = m.exponent(var) as usize;
            if coeffs.len() <= e {
                coeffs.resize(e + 1, Rational::zero());
            }
            coeffs[e] += c;
        }
        Some(Self::new(coeffs))
    }

    pub fn coeffs(&self) -> &[Rational] {
        &self.coeffs
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    /// Degree; the zero polynomial reports `None`.
    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    pub fn derivative(&self) -> Self {
        Self::new(
            self.coeffs
                .iter()
                .enumerate()
                .skip(1)
                .map(|(k, c)| c * Rational::from_integer(k.into()))
                .collect(),
        )
    }

    fn monic(&self) -> Self {
        match self.coeffs.last() {
            None => self.clone(),
            Some(lead) => {
                let inv = lead.recip();
                Self::new(self.coeffs.iter().map(|c| c * &inv).collect())
            }
        }
    }

    pub fn rem(&self, d: &Self) -> Self {
        assert!(!d.is_zero(), "division by zero polynomial");
        let mut r = self.coeffs.clone();
        let dd = d.coeffs.len() - 1;
        let lead = d.coeffs[dd].clone();
        while r.len() > dd && !r.is_empty() {
            let k = r.len() - 1;
            let q = &r[k] / &lead;
            if !q.is_zero() {
                for (i, c) in d.coeffs.iter().enumerate() {
                    r[k - dd + i] -= &q * c;
                }
            }
            r.pop();
            while r.last().is_some_and(Zero::is_zero) {
                r.pop();
            }
        }
        Self::new(r)
    }

    /// Monic greatest common divisor.
    pub fn gcd(&self, other: &Self) -> Self {
        let (mut a, mut b) = (self.clone(), other.clone());
        while !b.is_zero() {
            let r = a.rem(&b);
            a = b;
            b = r;
        }
        a.monic()
    }

    pub fn div_exact(&self, d: &Self) -> Self {
        let mut r = self.coeffs.clone();
        let dd = d.coeffs.len() - 1;
        let lead = d.coeffs[dd].clone();
        let mut q = vec![Rational::zero(); r.len().saturating_sub(dd)];
        while r.len() > dd {
            let k = r.len() - 1;
            let c = &r[k] / &lead;
            for (i, dc) in d.coeffs.iter().enumerate() {
                r[k - dd + i] -= &c * dc;
            }
            q[k - dd] = c;
            r.pop();
        }
        Self::new(q)
    }

    /// `p / gcd(p, p')`, monic.
    pub fn squarefree(&self) -> Self {
        if self.degree().unwrap_or(0) == 0 {
            return self.monic();
        }
        let g = self.gcd(&self.derivative());
        self.div_exact(&g).monic()
    }

    pub fn eval(&self, t: &Rational) -> Rational {
        let mut acc = Rational::zero();
        for c in self.coeffs.iter().rev() {
            acc = acc * t + c;
        }
        acc
    }

    pub fn eval_f64(&self, t: f64) -> f64 {
        let mut acc = 0.0;
        for c in self.coeffs.iter().rev() {
            acc = acc * t + c.to_f64().unwrap_or(f64::NAN);
        }
        acc
    }

    /// Real roots: exact for degree 1, else companion eigenvalues polished
    /// by Newton steps.
    pub fn real_roots(&self) -> Vec<Root> {
        let p = self.monic();
        match p.degree() {
            None | Some(0) => Vec::new(),
            Some(1) => vec![Root::Exact(-p.coeffs[0].clone())],
            Some(d) => {
                let c: Vec<f64> = p.coeffs.iter().map(|c| c.to_f64().unwrap_or(f64::NAN)).collect();
                if c.iter().any(|v| !v.is_finite()) {
                    return Vec::new();
                }
                let comp = DMatrix::from_fn(d, d, |i, j| {
                    if j == d - 1 {
                        -c[i]
                    } else if i == j + 1 {
                        1.0
                    } else {
                        0.0
                    }
                });
                let dp = p.derivative();
                let mut roots = Vec::new();
                for z in comp.complex_eigenvalues().iter() {
                    if z.im.abs() > 1e-7 * (1.0 + z.re.abs()) {
                        continue;
                    }
                    let mut t = z.re;
                    for _ in 0..20 {
                        let f = p.eval_f64(t);
                        let g = dp.eval_f64(t);
                        if g == 0.0 || !f.is_finite() {
                            break;
                        }
                        let step = f / g;
                        t -= step;
                        if step.abs() <= 1e-16 * (1.0 + t.abs()) {
                            break;
                        }
                    }
                    match rationalize(t, 1_000_000).filter(|q| p.eval(q).is_zero()) {
                        Some(q) => roots.push(Root::Exact(q)),
                        None => roots.push(Root::Float(t)),
                    }
                }
                roots
            }
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub enum Root {
    Exact(Rational),
    Float(f64),
}

impl Root {
    pub fn to_f64(&self) -> f64 {
        match self {
            Root::Exact(q) => q.to_f64().unwrap_or(f64::NAN),
            Root::Float(t) => *t,
        }
    }
}

/// Best continued-fraction approximation with denominator `<= max_den`.
pub fn rationalize(v: f64, max_den: i64) -> Option<Rational> {
    if !v.is_finite() {
        return None;
    }
    let target = Rational::from_float(v)?;
    let (mut h0, mut h1) = (num_bigint::BigInt::zero(), num_bigint::BigInt::one());
    let (mut k0, mut k1) = (num_bigint::BigInt::one(), num_bigint::BigInt::zero());
    let mut x = target.clone();
    let max = num_bigint::BigInt::from(max_den);
    let mut best = None;
    for _ in 0..64 {
        let a = x.floor().to_integer();
        let h2 = &a * &h1 + &h0;
        let k2 = &a * &k1 + &k0;
        if k2 > max {
            break;
        }
        best = Some(Rational::new(h2.clone(), k2.clone()));
        h0 = std::mem::replace(&mut h1, h2);
        k0 = std::mem::replace(&mut k1, k2);
        let frac = &x - Rational::from_integer(a);
        if frac.is_zero() {
            break;
        }
        x = frac.recip();
    }
    best.filter(|q| (q - &target).abs().to_f64().unwrap_or(f64::INFINITY) <= 1e-9 * (1.0 + v.abs()))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exactpoly::rat;

    fn up(c: &[i64]) -> UnivariatePolynomial {
        UnivariatePolynomial::new(c.iter().map(|&v| rat(v, 1)).collect())
    }

    #[test]
    fn gcd_and_squarefree() {
        // (t-1)^2 (t+2) = t^3 - 3t + 2
        let p = up(&[2, -3, 0, 1]);
        assert_eq!(p.squarefree(), up(&[-2, 1, 1]));
        let q = up(&[-1, 1]);
        assert_eq!(p.gcd(&q), q);
        assert_eq!(up(&[1, 1]).gcd(&up(&[2, 1])), up(&[1]));
    }

    #[test]
    fn roots() {
        let r = up(&[3, 2]).real_roots();
        assert_eq!(r, vec![Root::Exact(rat(-3, 2))]);
        let mut r: Vec<f64> = up(&[-2, 1, 1]).real_roots().iter().map(Root::to_f64).collect();
        r.sort_by(f64::total_cmp);
        assert_eq!(r, vec![-2.0, 1.0]);
        let r = up(&[-2, 0, 1]).real_roots();
        assert!(r.iter().all(|x| matches!(x, Root::Float(_))));
        assert!(up(&[1, 0, 1]).real_roots().is_empty());
    }

    #[test]
    fn rationalizes() {
        assert_eq!(rationalize(0.75, 100), Some(rat(3, 4)));
        assert_eq!(rationalize(-1.0 / 3.0, 100), Some(rat(-1, 3)));
        assert_eq!(rationalize(std::f64::consts::PI, 100), None);
    }
}
