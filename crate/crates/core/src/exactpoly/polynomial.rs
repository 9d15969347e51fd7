use std::collections::btree_map::Entry;
use std::collections::{BTreeMap, HashMap};
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_traits::{One, Signed, ToPrimitive, Zero};

use num_integer::Integer as _;

use super::{Ambient, Integer, Monomial, PolyError, Rational};

/// Sparse multivariate polynomial with exact rational coefficients.
///
/// Terms are kept in canonical form: no zero coefficients, keys ordered by
/// graded lex. Two polynomials are equal iff ambient and term maps agree.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Polynomial {
    ambient: Ambient,
    terms: BTreeMap<Monomial, Rational>,
}

/// Outcome of [`Polynomial::p_homogeneous_degree`].
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Homogeneity {
    /// Every term has this degree in `p1..pn`.
    Degree(u64),
    /// Terms of different fiber degree.
    Mixed,
    /// The zero polynomial is homogeneous of every degree.
    Zero,
}

impl Homogeneity {
    pub fn degree(self) -> Option<u64> {
        match self {
            Homogeneity::Degree(k) => Some(k),
            _ => None,
        }
    }
}

impl Polynomial {
    pub fn zero(ambient: Ambient) -> Self {
        Polynomial {
            ambient,
            terms: BTreeMap::new(),
        }
    }

    pub fn one(ambient: Ambient) -> Self {
        Self::constant(ambient, Rational::one())
    }

    pub fn constant(ambient: Ambient, c: Rational) -> Self {
        let mut p = Self::zero(ambient);
        if !c.is_zero() {
            p.terms.insert(Monomial::one(ambient.nvars()), c);
        }
        p
    }

    pub fn from_integer(ambient: Ambient, c: i64) -> Self {
        Self::constant(ambient, Rational::from_integer(c.into()))
    }

    /// The coordinate function of variable slot `var` (see [`Ambient::x`], [`Ambient::p`]).
    pub fn variable(ambient: Ambient, var: usize) -> Result<Self, PolyError> {
        if var >= ambient.nvars() {
            return Err(PolyError::VariableOutOfRange {
                index: var,
                nvars: ambient.nvars(),
            });
        }
        Ok(Self::monomial(
            ambient,
            Monomial::variable(ambient.nvars(), var),
            Rational::one(),
        ))
    }

    /// `x_{i+1}`.
    ///
    /// # Panics
    /// If `i >= n`.
    pub fn x(ambient: Ambient, i: usize) -> Self {
        assert!(i < ambient.n(), "x index {i} out of range");
        Self::variable(ambient, ambient.x(i)).unwrap()
    }

    /// `p_{i+1}`.
    ///
    /// # Panics
    /// If the ambient has no fiber block or `i >= n`.
    pub fn p(ambient: Ambient, i: usize) -> Self {
        assert!(ambient.has_fiber() && i < ambient.n(), "p index {i} out of range");
        Self::variable(ambient, ambient.p(i)).unwrap()
    }

    pub fn monomial(ambient: Ambient, m: Monomial, c: Rational) -> Self {
        debug_assert_eq!(m.nvars(), ambient.nvars());
        let mut p = Self::zero(ambient);
        if !c.is_zero() {
            p.terms.insert(m, c);
        }
        p
    }

    /// Build from `(monomial, coefficient)` pairs, merging duplicates.
    pub fn from_terms<I>(ambient: Ambient, terms: I) -> Self
    where
        I: IntoIterator<Item = (Monomial, Rational)>,
    {
        let mut p = Self::zero(ambient);
        for (m, c) in terms {
            p.add_term(m, c);
        }
        p
    }

    pub fn ambient(&self) -> Ambient {
        self.ambient
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn is_constant(&self) -> bool {
        self.terms.keys().all(Monomial::is_one)
    }

    pub fn constant_term(&self) -> Rational {
        self.terms
            .get(&Monomial::one(self.ambient.nvars()))
            .cloned()
            .unwrap_or_else(Rational::zero)
    }

    pub fn coefficient(&self, m: &Monomial) -> Rational {
        self.terms.get(m).cloned().unwrap_or_else(Rational::zero)
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    /// Terms in ascending monomial order.
    pub fn terms(&self) -> impl DoubleEndedIterator<Item = (&Monomial, &Rational)> {
        self.terms.iter()
    }

    pub fn leading_term(&self) -> Option<(&Monomial, &Rational)> {
        self.terms.iter().next_back()
    }

    pub fn total_degree(&self) -> Option<u64> {
        self.terms.keys().map(Monomial::total_degree).max()
    }

    /// Largest exponent of `var` over all terms.
    pub fn degree_in(&self, var: usize) -> u32 {
        self.terms.keys().map(|m| m.exponent(var)).max().unwrap_or(0)
    }

    pub fn depends_on(&self, var: usize) -> bool {
        self.terms.keys().any(|m| m.exponent(var) > 0)
    }

    pub fn p_homogeneous_degree(&self) -> Homogeneity {
        let mut degrees = self.terms.keys().map(|m| m.p_degree(self.ambient));
        match degrees.next() {
            None => Homogeneity::Zero,
            Some(k) => {
                if degrees.all(|d| d == k) {
                    Homogeneity::Degree(k)
                } else {
                    Homogeneity::Mixed
                }
            }
        }
    }

    pub(crate) fn add_term(&mut self, m: Monomial, c: Rational) {
        if c.is_zero() {
            return;
        }
        match self.terms.entry(m) {
            Entry::Vacant(v) => {
                v.insert(c);
            }
            Entry::Occupied(mut o) => {
                *o.get_mut() += c;
                if o.get().is_zero() {
                    o.remove();
                }
            }
        }
    }

    fn check_ambient(&self, other: &Polynomial) -> Result<(), PolyError> {
        if self.ambient != other.ambient {
            return Err(PolyError::AmbientMismatch {
                left: self.ambient,
                right: other.ambient,
            });
        }
        Ok(())
    }

    pub fn checked_add(&self, other: &Polynomial) -> Result<Polynomial, PolyError> {
        self.check_ambient(other)?;
        let mut out = self.clone();
        for (m, c) in &other.terms {
            out.add_term(m.clone(), c.clone());
        }
        Ok(out)
    }

    pub fn checked_sub(&self, other: &Polynomial) -> Result<Polynomial, PolyError> {
        self.check_ambient(other)?;
        let mut out = self.clone();
        for (m, c) in &other.terms {
            out.add_term(m.clone(), -c.clone());
        }
        Ok(out)
    }

    pub fn checked_mul(&self, other: &Polynomial) -> Result<Polynomial, PolyError> {
        self.check_ambient(other)?;
        if self.terms.is_empty() || other.terms.is_empty() {
            return Ok(Polynomial::zero(self.ambient));
        }
        // Clear denominators, multiply numerators, reduce once per output term.
        let (da, na) = self.integer_numerators();
        let (db, nb) = other.integer_numerators();
        let bits = |v: &[(&Monomial, Integer)]| v.iter().map(|(_, c)| c.bits()).max().unwrap_or(0);
        let headroom = 64 - (na.len().min(nb.len()) as u64).leading_zeros() as u64;
        let den = &da * &db;
        let terms: BTreeMap<Monomial, Rational> = if bits(&na) + bits(&nb) + headroom < 126 {
            let na: Vec<(&Monomial, i128)> = na.iter().map(|(m, c)| (*m, c.to_i128().expect("bit bound"))).collect();
            let nb: Vec<(&Monomial, i128)> = nb.iter().map(|(m, c)| (*m, c.to_i128().expect("bit bound"))).collect();
            let mut acc: HashMap<Monomial, i128> = HashMap::with_capacity(na.len() * nb.len());
            for (ma, ca) in &na {
                for (mb, cb) in &nb {
                    *acc.entry(ma.checked_mul(mb)?).or_insert(0) += ca * cb;
                }
            }
            acc.into_iter()
                .filter(|(_, c)| *c != 0)
                .map(|(m, c)| (m, Rational::new(Integer::from(c), den.clone())))
                .collect()
        } else {
            let mut acc: HashMap<Monomial, Integer> = HashMap::with_capacity(na.len() * nb.len());
            for (ma, ca) in &na {
                for (mb, cb) in &nb {
                    *acc.entry(ma.checked_mul(mb)?).or_default() += ca * cb;
                }
            }
            acc.into_iter()
                .filter(|(_, c)| !c.is_zero())
                .map(|(m, c)| (m, Rational::new(c, den.clone())))
                .collect()
        };
        Ok(Polynomial {
            ambient: self.ambient,
            terms,
        })
    }

    /// `(D, [(m, D c_m)])` with `D` the lcm of the coefficient denominators.
    fn integer_numerators(&self) -> (Integer, Vec<(&Monomial, Integer)>) {
        let d = self
            .terms
            .values()
            .fold(Integer::one(), |acc, c| acc.lcm(c.denom()));
        let nums = self
            .terms
            .iter()
            .map(|(m, c)| (m, c.numer() * (&d / c.denom())))
            .collect();
        (d, nums)
    }

    pub fn pow(&self, k: u32) -> Result<Polynomial, PolyError> {
        if self.terms.len() == 1 {
            let (m, c) = self.terms.iter().next().unwrap();
            return Ok(Polynomial::monomial(
                self.ambient,
                m.checked_pow(k)?,
                num_traits::pow(c.clone(), k as usize),
            ));
        }
        let mut result = Polynomial::one(self.ambient);
        let mut base = self.clone();
        let mut e = k;
        while e > 0 {
            if e & 1 == 1 {
                result = result.checked_mul(&base)?;
            }
            e >>= 1;
            if e > 0 {
                base = base.checked_mul(&base)?;
            }
        }
        Ok(result)
    }

    pub fn scale(&self, c: &Rational) -> Polynomial {
        if c.is_zero() {
            return Polynomial::zero(self.ambient);
        }
        Polynomial {
            ambient: self.ambient,
            terms: self.terms.iter().map(|(m, a)| (m.clone(), a * c)).collect(),
        }
    }

    pub fn scale_int(&self, c: i64) -> Polynomial {
        self.scale(&Rational::from_integer(c.into()))
    }

    /// Formal partial derivative with respect to variable slot `var`.
    pub fn partial(&self, var: usize) -> Result<Polynomial, PolyError> {
        if var >= self.ambient.nvars() {
            return Err(PolyError::VariableOutOfRange {
                index: var,
                nvars: self.ambient.nvars(),
            });
        }
        let mut out = Polynomial::zero(self.ambient);
        for (m, c) in &self.terms {
            let e = m.exponent(var);
            if e > 0 {
                out.add_term(m.with_exponent(var, e - 1), c * Rational::from_integer(e.into()));
            }
        }
        Ok(out)
    }

    pub fn eval_rational(&self, point: &[Rational]) -> Result<Rational, PolyError> {
        self.check_point_len(point.len())?;
        let mut acc = Rational::zero();
        for (m, c) in &self.terms {
            let mut t = c.clone();
            for (v, &e) in m.exponents().iter().enumerate() {
                if e > 0 {
                    t *= num_traits::pow(point[v].clone(), e as usize);
                }
            }
            acc += t;
        }
        Ok(acc)
    }

    pub fn eval_f64(&self, point: &[f64]) -> Result<f64, PolyError> {
        self.check_point_len(point.len())?;
        Ok(self.to_float().eval(point))
    }

    fn check_point_len(&self, len: usize) -> Result<(), PolyError> {
        if len != self.ambient.nvars() {
            return Err(PolyError::PointLength {
                expected: self.ambient.nvars(),
                got: len,
            });
        }
        Ok(())
    }

    /// Substitute exact values for a subset of variables; the ambient is kept.
    pub fn partial_eval(&self, values: &[Option<Rational>]) -> Result<Polynomial, PolyError> {
        self.check_point_len(values.len())?;
        let mut out = Polynomial::zero(self.ambient);
        for (m, c) in &self.terms {
            let mut coeff = c.clone();
            let mut exps = m.exponents().to_vec();
            for (v, val) in values.iter().enumerate() {
                if let Some(val) = val {
                    if exps[v] > 0 {
                        coeff *= num_traits::pow(val.clone(), exps[v] as usize);
                        exps[v] = 0;
                    }
                }
            }
            out.add_term(Monomial::from_exponents(exps), coeff);
        }
        Ok(out)
    }

    /// Substitute `var_i -> images[i]` for every variable; the result lives in
    /// the ambient of the images.
    pub fn compose(&self, images: &[Polynomial]) -> Result<Polynomial, PolyError> {
        self.check_point_len(images.len())?;
        let target = match images.first() {
            Some(p) => p.ambient,
            None => self.ambient,
        };
        if let Some(bad) = images.iter().find(|p| p.ambient != target) {
            return Err(PolyError::AmbientMismatch {
                left: target,
                right: bad.ambient,
            });
        }
        // Cache powers per variable; polynomials here are small and sparse.
        let mut powers: Vec<Vec<Polynomial>> = images
            .iter()
            .map(|p| vec![Polynomial::one(target), p.clone()])
            .collect();
        let mut out = Polynomial::zero(target);
        for (m, c) in &self.terms {
            let mut t = Polynomial::constant(target, c.clone());
            for (v, &e) in m.exponents().iter().enumerate() {
                if e == 0 {
                    continue;
                }
                while powers[v].len() <= e as usize {
                    let next = powers[v].last().unwrap().checked_mul(&images[v])?;
                    powers[v].push(next);
                }
                t = t.checked_mul(&powers[v][e as usize])?;
            }
            out = out.checked_add(&t)?;
        }
        Ok(out)
    }

    /// Drop every term of total degree above `order`.
    pub fn truncate(&self, order: u64) -> Polynomial {
        Polynomial {
            ambient: self.ambient,
            terms: self
                .terms
                .iter()
                .filter(|(m, _)| m.total_degree() <= order)
                .map(|(m, c)| (m.clone(), c.clone()))
                .collect(),
        }
    }

    /// View a polynomial in a larger ambient with the same base dimension
    /// (e.g. a base polynomial inside phase space).
    pub fn embed(&self, target: Ambient) -> Result<Polynomial, PolyError> {
        if target == self.ambient {
            return Ok(self.clone());
        }
        if target.n() != self.ambient.n() || (self.ambient.has_fiber() && !target.has_fiber()) {
            return Err(PolyError::AmbientMismatch {
                left: self.ambient,
                right: target,
            });
        }
        Ok(Polynomial {
            ambient: target,
            terms: self
                .terms
                .iter()
                .map(|(m, c)| (m.remap(self.ambient, target), c.clone()))
                .collect(),
        })
    }

    /// Drop the fiber block from a polynomial that does not involve `p`.
    pub fn restrict_to_base(&self) -> Result<Polynomial, PolyError> {
        let base = Ambient::base(self.ambient.n());
        if !self.ambient.has_fiber() {
            return Ok(self.clone());
        }
        let mut out = Polynomial::zero(base);
        for (m, c) in &self.terms {
            if m.p_degree(self.ambient) > 0 {
                return Err(PolyError::DependsOnFiber);
            }
            out.terms.insert(
                Monomial::from_exponents(m.exponents()[..base.n()].to_vec()),
                c.clone(),
            );
        }
        Ok(out)
    }

    /// `self / m` if every term is divisible by the monomial `m`.
    pub fn div_monomial(&self, m: &Monomial) -> Option<Polynomial> {
        let mut out = Polynomial::zero(self.ambient);
        for (t, c) in &self.terms {
            out.terms.insert(t.checked_div(m)?, c.clone());
        }
        Some(out)
    }

    pub fn to_float(&self) -> FloatPolynomial {
        FloatPolynomial {
            nvars: self.ambient.nvars(),
            terms: self
                .terms
                .iter()
                .map(|(m, c)| (c.to_f64().unwrap_or(f64::NAN), m.exponents().to_vec()))
                .collect(),
        }
    }

    /// Sum of absolute coefficients.
    pub fn l1_norm(&self) -> Rational {
        self.terms.values().map(|c| c.abs()).sum()
    }
}

/// IEEE-double evaluator compiled from a [`Polynomial`].
#[derive(Debug, Clone, PartialEq)]
pub struct FloatPolynomial {
    nvars: usize,
    terms: Vec<(f64, Vec<u32>)>,
}

impl FloatPolynomial {
    pub fn nvars(&self) -> usize {
        self.nvars
    }

    pub fn eval(&self, point: &[f64]) -> f64 {
        debug_assert_eq!(point.len(), self.nvars);
        let mut acc = 0.0;
        for (c, exps) in &self.terms {
            let mut t = *c;
            for (v, &e) in exps.iter().enumerate() {
                if e > 0 {
                    t *= point[v].powi(e as i32);
                }
            }
            acc += t;
        }
        acc
    }

    /// Sum of |term| at `point`; a scale for rounding-error bounds.
    pub fn eval_abs(&self, point: &[f64]) -> f64 {
        let mut acc = 0.0;
        for (c, exps) in &self.terms {
            let mut t = c.abs();
            for (v, &e) in exps.iter().enumerate() {
                if e > 0 {
                    t *= point[v].abs().powi(e as i32);
                }
            }
            acc += t;
        }
        acc
    }
}

impl fmt::Display for Polynomial {
    /// Canonical form: terms in descending grlex order, e.g. `x1^2 - 3/2*p4`.
    /// A leading `-1` is written out when the first factor carries an exponent,
    /// since `-x1^2` parses as `(-x1)^2`.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return f.write_str("0");
        }
        for (k, (m, c)) in self.terms.iter().rev().enumerate() {
            let negative = c.is_negative();
            let abs = c.abs();
            if k == 0 {
                if negative {
                    f.write_str("-")?;
                }
            } else {
                f.write_str(if negative { " - " } else { " + " })?;
            }
            if m.is_one() {
                write!(f, "{abs}")?;
                continue;
            }
            let first_exp = m.exponents().iter().find(|&&e| e > 0).copied().unwrap_or(0);
            if !abs.is_one() || (k == 0 && negative && first_exp > 1) {
                write!(f, "{abs}*")?;
            }
            m.fmt_with(self.ambient, f)?;
        }
        Ok(())
    }
}

impl fmt::Debug for Polynomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Polynomial[{}]({})", self.ambient, self)
    }
}

macro_rules! forward_binop {
    ($tr:ident, $method:ident, $checked:ident) => {
        impl $tr<&Polynomial> for &Polynomial {
            type Output = Polynomial;
            /// # Panics
            /// On mismatched ambients; use the `checked_*` form to get an error instead.
            fn $method(self, rhs: &Polynomial) -> Polynomial {
                self.$checked(rhs).unwrap_or_else(|e| panic!("{e}"))
            }
        }
        impl $tr<Polynomial> for Polynomial {
            type Output = Polynomial;
            fn $method(self, rhs: Polynomial) -> Polynomial {
                (&self).$method(&rhs)
            }
        }
        impl $tr<&Polynomial> for Polynomial {
            type Output = Polynomial;
            fn $method(self, rhs: &Polynomial) -> Polynomial {
                (&self).$method(rhs)
            }
        }
        impl $tr<Polynomial> for &Polynomial {
            type Output = Polynomial;
            fn $method(self, rhs: Polynomial) -> Polynomial {
                self.$method(&rhs)
            }
        }
    };
}

forward_binop!(Add, add, checked_add);
forward_binop!(Sub, sub, checked_sub);
forward_binop!(Mul, mul, checked_mul);

impl Neg for &Polynomial {
    type Output = Polynomial;
    fn neg(self) -> Polynomial {
        Polynomial {
            ambient: self.ambient,
            terms: self.terms.iter().map(|(m, c)| (m.clone(), -c.clone())).collect(),
        }
    }
}

impl Neg for Polynomial {
    type Output = Polynomial;
    fn neg(self) -> Polynomial {
        -&self
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exactpoly::{parse_expression, rat};

    fn parse(s: &str, amb: Ambient) -> Polynomial {
        parse_expression(s, amb).unwrap()
    }

    #[test]
    fn difference_of_squares() {
        let amb = Ambient::phase(3);
        let a = parse("x1 + p3", amb);
        let b = parse("x1 - p3", amb);
        assert_eq!(&a * &b, parse("x1^2 - p3^2", amb));
    }

    #[test]
    fn zero_absorbs() {
        let amb = Ambient::base(2);
        let f = parse("x1^3 + 2*x2", amb);
        assert!((&f * &Polynomial::zero(amb)).is_zero());
    }

    #[test]
    fn binomial_cube_matches_oracle() {
        // Oracle: binomial coefficients C(3,k) built term by term.
        let amb = Ambient::base(2);
        let cube = parse("x1 + x2", amb).pow(3).unwrap();
        let mut expected = Polynomial::zero(amb);
        let binom = [1, 3, 3, 1];
        for (k, &c) in binom.iter().enumerate() {
            let m = Monomial::from_exponents(vec![k as u32, 3 - k as u32]);
            expected.add_term(m, rat(c, 1));
        }
        assert_eq!(cube, expected);
        assert_eq!(cube.len(), 4);
    }

    #[test]
    fn mismatched_ambients_error() {
        let a = Polynomial::x(Ambient::base(2), 0);
        let b = Polynomial::x(Ambient::base(3), 0);
        assert!(matches!(a.checked_add(&b), Err(PolyError::AmbientMismatch { .. })));
    }

    #[test]
    fn partial_derivatives() {
        let amb = Ambient::phase(4);
        let f = parse("x1^2*p4", amb);
        assert_eq!(f.partial(amb.x(0)).unwrap(), parse("2*x1*p4", amb));
        assert_eq!(f.partial(amb.p(3)).unwrap(), parse("x1^2", amb));
        assert!(Polynomial::x(amb, 0).partial(amb.x(1)).unwrap().is_zero());
        assert!(f.partial(8).is_err());
    }

    #[test]
    fn evaluation() {
        let amb = Ambient::phase(3);
        let f = parse("2*x1*p3", amb);
        let pt: Vec<Rational> = [1, 0, 0, 0, 0, 5].iter().map(|&v| rat(v, 1)).collect();
        assert_eq!(f.eval_rational(&pt).unwrap(), rat(10, 1));
        assert_eq!(Polynomial::one(amb).eval_rational(&pt).unwrap(), rat(1, 1));
        let g = parse("x1^2 + x2^2", Ambient::base(2));
        assert_eq!(g.eval_rational(&[rat(3, 1), rat(4, 1)]).unwrap(), rat(25, 1));
        assert_eq!(g.eval_f64(&[3.0, 4.0]).unwrap(), 25.0);
        assert!(matches!(g.eval_f64(&[1.0]), Err(PolyError::PointLength { .. })));
    }

    #[test]
    fn fiber_homogeneity() {
        let amb = Ambient::phase(3);
        assert_eq!(parse("p3*x1", amb).p_homogeneous_degree(), Homogeneity::Degree(1));
        assert_eq!(parse("p1*p2 + x1*p3", amb).p_homogeneous_degree(), Homogeneity::Mixed);
        assert_eq!(Polynomial::zero(amb).p_homogeneous_degree(), Homogeneity::Zero);
        assert_eq!(Polynomial::zero(amb).p_homogeneous_degree().degree(), None);
    }

    #[test]
    fn embed_and_restrict_round_trip() {
        let base = Ambient::base(3);
        let f = parse("x1*x3^2 - 1/3", base);
        let lifted = f.embed(Ambient::phase(3)).unwrap();
        assert_eq!(lifted.restrict_to_base().unwrap(), f);
        let g = parse("p1*x2", Ambient::phase(3));
        assert_eq!(g.restrict_to_base(), Err(PolyError::DependsOnFiber));
    }

    #[test]
    fn compose_linear_substitution() {
        let amb = Ambient::base(2);
        let f = parse("x1*x2", amb);
        let images = vec![parse("x1 + x2", amb), parse("x1 - x2", amb)];
        assert_eq!(f.compose(&images).unwrap(), parse("x1^2 - x2^2", amb));
    }

    #[test]
    fn printing_leading_negative_power() {
        let amb = Ambient::base(2);
        let f = -parse("x1^2", amb);
        assert_eq!(f.to_string(), "-1*x1^2");
        assert_eq!(parse(&f.to_string(), amb), f);
        assert_eq!((-parse("x1*x2", amb)).to_string(), "-x1*x2");
        assert_eq!(parse("x1^2 - 3/2*x2", amb).to_string(), "x1^2 - 3/2*x2");
    }
}
