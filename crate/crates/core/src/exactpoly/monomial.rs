use std::cmp::Ordering;
use std::fmt;

use super::{Ambient, PolyError};

/// Exponent vector over the variables of an [`Ambient`].
///
/// The layout is dense: slot `i < n` is `x_{i+1}`, slot `n + i` is `p_{i+1}`.
/// Ordering is graded lexicographic with `x1 < ... < xn < p1 < ... < pn`,
/// so the largest variable (`pn`, or `xn` without fiber) is compared first
/// among monomials of equal total degree.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Monomial {
    exps: Box<[u32]>,
}

impl Monomial {
    pub fn one(nvars: usize) -> Self {
        Monomial {
            exps: vec![0; nvars].into_boxed_slice(),
        }
    }

    pub fn from_exponents(exps: Vec<u32>) -> Self {
        Monomial {
            exps: exps.into_boxed_slice(),
        }
    }

    pub fn variable(nvars: usize, var: usize) -> Self {
        let mut exps = vec![0; nvars];
        exps[var] = 1;
        Monomial::from_exponents(exps)
    }

    pub fn exponents(&self) -> &[u32] {
        &self.exps
    }

    pub fn exponent(&self, var: usize) -> u32 {
        self.exps[var]
    }

    pub fn nvars(&self) -> usize {
        self.exps.len()
    }

    pub fn total_degree(&self) -> u64 {
        self.exps.iter().map(|&e| e as u64).sum()
    }

    /// Degree in the fiber block `p1..pn` of `ambient`.
    pub fn p_degree(&self, ambient: Ambient) -> u64 {
        if !ambient.has_fiber() {
            return 0;
        }
        self.exps[ambient.n()..].iter().map(|&e| e as u64).sum()
    }

    /// Degree in the base block `x1..xn`.
    pub fn x_degree(&self, ambient: Ambient) -> u64 {
        self.exps[..ambient.n()].iter().map(|&e| e as u64).sum()
    }

    pub fn is_one(&self) -> bool {
        self.exps.iter().all(|&e| e == 0)
    }

    pub fn checked_mul(&self, other: &Monomial) -> Result<Monomial, PolyError> {
        let exps = self
            .exps
            .iter()
            .zip(other.exps.iter())
            .map(|(&a, &b)| a.checked_add(b).ok_or(PolyError::ExponentOverflow))
            .collect::<Result<Vec<_>, _>>()?;
        Ok(Monomial::from_exponents(exps))
    }

    pub fn checked_pow(&self, k: u32) -> Result<Monomial, PolyError> {
        let exps = self
            .exps
            .iter()
            .map(|&a| a.checked_mul(k).ok_or(PolyError::ExponentOverflow))
            .collect::<Result<Vec<_>, _>>()?;
        Ok(Monomial::from_exponents(exps))
    }

    /// `self / other` when every exponent of `other` is dominated.
    pub fn checked_div(&self, other: &Monomial) -> Option<Monomial> {
        let exps = self
            .exps
            .iter()
            .zip(other.exps.iter())
            .map(|(&a, &b)| a.checked_sub(b))
            .collect::<Option<Vec<_>>>()?;
        Some(Monomial::from_exponents(exps))
    }

    /// Re-index into a wider (or equal) variable layout.
    pub(crate) fn remap(&self, from: Ambient, to: Ambient) -> Monomial {
        let mut exps = vec![0; to.nvars()];
        exps[..from.n()].copy_from_slice(&self.exps[..from.n()]);
        if from.has_fiber() {
            exps[to.n()..to.n() + from.n()].copy_from_slice(&self.exps[from.n()..]);
        }
        Monomial::from_exponents(exps)
    }

    pub(crate) fn with_exponent(&self, var: usize, e: u32) -> Monomial {
        let mut exps = self.exps.to_vec();
        exps[var] = e;
        Monomial::from_exponents(exps)
    }

    pub(crate) fn fmt_with(&self, ambient: Ambient, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut first = true;
        for (var, &e) in self.exps.iter().enumerate() {
            if e == 0 {
                continue;
            }
            if !first {
                f.write_str("*")?;
            }
            first = false;
            f.write_str(&ambient.var_name(var))?;
            if e > 1 {
                write!(f, "^{e}")?;
            }
        }
        if first {
            f.write_str("1")?;
        }
        Ok(())
    }
}

impl Ord for Monomial {
    fn cmp(&self, other: &Self) -> Ordering {
        self.total_degree()
            .cmp(&other.total_degree())
            .then_with(|| self.exps.iter().rev().cmp(other.exps.iter().rev()))
    }
}

impl PartialOrd for Monomial {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl fmt::Debug for Monomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Monomial{:?}", &self.exps[..])
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn grlex_orders_by_degree_then_largest_variable() {
        let amb = Ambient::phase(2);
        let x1 = Monomial::variable(amb.nvars(), amb.x(0));
        let x2 = Monomial::variable(amb.nvars(), amb.x(1));
        let p1 = Monomial::variable(amb.nvars(), amb.p(0));
        let x1sq = x1.checked_pow(2).unwrap();
        assert!(x1 < x2);
        assert!(x2 < p1);
        assert!(p1 < x1sq);
        assert!(Monomial::one(4) < x1);
    }

    #[test]
    fn exponent_overflow_is_reported() {
        let m = Monomial::from_exponents(vec![u32::MAX]);
        assert_eq!(m.checked_mul(&m), Err(PolyError::ExponentOverflow));
    }
}
