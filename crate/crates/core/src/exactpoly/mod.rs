//! Exact scalar and polynomial arithmetic.
//!
//! Coefficients are arbitrary-precision rationals; zero tests are exact.
//! Variables live in an [`Ambient`]: `n` base coordinates `x1..xn`, optionally
//! followed by the fiber coordinates `p1..pn` of the cotangent bundle.

mod jet;
mod monomial;
mod parse;
mod polynomial;

use std::fmt;

use thiserror::Error;

pub use jet::{series_invert_unit, JetSeries};
pub use monomial::Monomial;
pub use parse::{parse_expression, ParseError, ParseErrorKind};
pub use polynomial::{FloatPolynomial, Homogeneity, Polynomial};

pub type Rational = num_rational::BigRational;
pub type Integer = num_bigint::BigInt;

/// Shorthand for the rational `num/den`.
///
/// # Panics
/// If `den == 0`.
pub fn rat(num: i64, den: i64) -> Rational {
    Rational::new(num.into(), den.into())
}

/// Exact rational value of a finite double (every finite `f64` is dyadic).
pub fn rational_from_f64(v: f64) -> Option<Rational> {
    Rational::from_float(v)
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum PolyError {
    #[error("ambient mismatch: {left} vs {right}")]
    AmbientMismatch { left: Ambient, right: Ambient },
    #[error("variable index {index} out of range ({nvars} variables)")]
    VariableOutOfRange { index: usize, nvars: usize },
    #[error("point has {got} coordinates, expected {expected}")]
    PointLength { expected: usize, got: usize },
    #[error("exponent overflow")]
    ExponentOverflow,
    #[error("polynomial depends on the fiber variables")]
    DependsOnFiber,
    #[error("series is not a unit (zero constant term)")]
    NonUnit,
    #[error("jet order mismatch: {left} vs {right}")]
    OrderMismatch { left: u64, right: u64 },
}

/// Variable layout of a polynomial ring: `x1..xn` and optionally `p1..pn`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct Ambient {
    n: usize,
    fiber: bool,
}

impl Ambient {
    pub const fn base(n: usize) -> Self {
        Ambient { n, fiber: false }
    }

    pub const fn phase(n: usize) -> Self {
        Ambient { n, fiber: true }
    }

    pub const fn n(self) -> usize {
        self.n
    }

    pub const fn has_fiber(self) -> bool {
        self.fiber
    }

    pub const fn nvars(self) -> usize {
        if self.fiber {
            2 * self.n
        } else {
            self.n
        }
    }

    /// Slot of `x_{i+1}`.
    pub const fn x(self, i: usize) -> usize {
        i
    }

    /// Slot of `p_{i+1}`.
    pub const fn p(self, i: usize) -> usize {
        self.n + i
    }

    pub fn var_name(self, slot: usize) -> String {
        if slot < self.n {
            format!("x{}", slot + 1)
        } else {
            format!("p{}", slot - self.n + 1)
        }
    }

    pub fn with_fiber(self) -> Self {
        Ambient::phase(self.n)
    }
}

impl fmt::Display for Ambient {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.fiber {
            write!(f, "T*R^{}", self.n)
        } else {
            write!(f, "R^{}", self.n)
        }
    }
}
