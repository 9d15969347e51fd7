use num_traits::{One, Zero};

use super::{Ambient, Polynomial, PolyError, Rational};

/// A d-jet: polynomial in `x` only, truncated at total degree `order`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct JetSeries {
    body: Polynomial,
    order: u64,
}

impl JetSeries {
    /// Truncates `body` to `order`. The body must not involve the fiber block.
    pub fn new(body: Polynomial, order: u64) -> Result<Self, PolyError> {
        let body = body.restrict_to_base()?;
        Ok(JetSeries {
            body: body.truncate(order),
            order,
        })
    }

    pub fn zero(n: usize, order: u64) -> Self {
        JetSeries {
            body: Polynomial::zero(Ambient::base(n)),
            order,
        }
    }

    pub fn one(n: usize, order: u64) -> Self {
        JetSeries {
            body: Polynomial::one(Ambient::base(n)),
            order,
        }
    }

    pub fn body(&self) -> &Polynomial {
        &self.body
    }

    pub fn into_body(self) -> Polynomial {
        self.body
    }

    pub fn order(&self) -> u64 {
        self.order
    }

    pub fn is_zero(&self) -> bool {
        self.body.is_zero()
    }

    pub fn constant_term(&self) -> Rational {
        self.body.constant_term()
    }

    fn check(&self, other: &JetSeries) -> Result<(), PolyError> {
        if self.order != other.order {
            return Err(PolyError::OrderMismatch {
                left: self.order,
                right: other.order,
            });
        }
        Ok(())
    }

    pub fn add(&self, other: &JetSeries) -> Result<JetSeries, PolyError> {
        self.check(other)?;
        Ok(JetSeries {
            body: self.body.checked_add(&other.body)?,
            order: self.order,
        })
    }

    pub fn sub(&self, other: &JetSeries) -> Result<JetSeries, PolyError> {
        self.check(other)?;
        Ok(JetSeries {
            body: self.body.checked_sub(&other.body)?,
            order: self.order,
        })
    }

    /// Product re-truncated to the common order.
    pub fn mul(&self, other: &JetSeries) -> Result<JetSeries, PolyError> {
        self.check(other)?;
        // Truncating per partial product keeps intermediate sizes bounded.
        let mut body = Polynomial::zero(self.body.ambient());
        for (ma, ca) in self.body.terms() {
            for (mb, cb) in other.body.terms() {
                if ma.total_degree() + mb.total_degree() <= self.order {
                    body.add_term(ma.checked_mul(mb)?, ca * cb);
                }
            }
        }
        Ok(JetSeries {
            body,
            order: self.order,
        })
    }

    pub fn scale(&self, c: &Rational) -> JetSeries {
        JetSeries {
            body: self.body.scale(c),
            order: self.order,
        }
    }

    /// Truncated inverse of a unit: `v` with `u*v = 1 mod deg > order`.
    ///
    /// Writes `u = c(1 + r)` with `r(0) = 0` and sums the geometric series
    /// `sum_k (-r)^k` up to `k = order`.
    pub fn invert_unit(&self) -> Result<JetSeries, PolyError> {
        let c = self.constant_term();
        if c.is_zero() {
            return Err(PolyError::NonUnit);
        }
        let inv_c = c.recip();
        let one = JetSeries::one(self.body.ambient().n(), self.order);
        let r = self.scale(&inv_c).sub(&one)?;
        let minus_r = r.scale(&-Rational::one());
        let mut sum = one.clone();
        let mut power = one;
        for _ in 0..self.order {
            power = power.mul(&minus_r)?;
            if power.is_zero() {
                break;
            }
            sum = sum.add(&power)?;
        }
        Ok(sum.scale(&inv_c))
    }
}

/// Free-function form of [`JetSeries::invert_unit`].
pub fn series_invert_unit(u: &JetSeries) -> Result<JetSeries, PolyError> {
    u.invert_unit()
}
