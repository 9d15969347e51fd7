//! Polynomial vector fields, Hamiltonian lifts and Poisson brackets.
//!
//! Symplectic convention: `x' = dh/dp`, `p' = -dh/dx`, so that
//! `{h, g} = sum_k dh/dp_k dg/dx_k - dh/dx_k dg/dp_k` and `{p1, x1} = 1`.
//! With it, `h_X(x, p) = p . X(x)` satisfies `{h_X, h_Y} = h_[X,Y]` where
//! `[X, Y] = DY.X - DX.Y`.

use std::fmt;

use num_traits::Zero;
use thiserror::Error;

use crate::exactpoly::{Ambient, FloatPolynomial, PolyError, Polynomial, Rational};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum FieldError {
    #[error("vector field kind mismatch: {0:?} vs {1:?}")]
    KindMismatch(FieldKind, FieldKind),
    #[error("expected {expected} components, got {got}")]
    ComponentCount { expected: usize, got: usize },
    #[error("frame rank {m} must be smaller than dimension {n}")]
    RankTooLarge { m: usize, n: usize },
    #[error("frame fields are linearly dependent at the origin (rank {rank} < {m})")]
    DependentAtOrigin { rank: usize, m: usize },
    #[error("frame field {index} is not a base field of dimension {n}")]
    BadField { index: usize, n: usize },
    #[error(transparent)]
    Poly(#[from] PolyError),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum FieldKind {
    /// `n` components in `x` only.
    Base,
    /// `2n` components (`x`-block then `p`-block) over `(x, p)`.
    Phase,
}

#[derive(Clone, PartialEq, Eq)]
pub struct VectorField {
    kind: FieldKind,
    n: usize,
    components: Vec<Polynomial>,
}

impl VectorField {
    pub fn new(kind: FieldKind, n: usize, components: Vec<Polynomial>) -> Result<Self, FieldError> {
        let (expected, ambient) = match kind {
            FieldKind::Base => (n, Ambient::base(n)),
            FieldKind::Phase => (2 * n, Ambient::phase(n)),
        };
        if components.len() != expected {
            return Err(FieldError::ComponentCount {
                expected,
                got: components.len(),
            });
        }
        let components = components
            .into_iter()
            .map(|c| c.embed(ambient))
            .collect::<Result<Vec<_>, _>>()?;
        Ok(VectorField { kind, n, components })
    }

    pub fn base(n: usize, components: Vec<Polynomial>) -> Result<Self, FieldError> {
        Self::new(FieldKind::Base, n, components)
    }

    pub fn phase(n: usize, components: Vec<Polynomial>) -> Result<Self, FieldError> {
        Self::new(FieldKind::Phase, n, components)
    }

    pub fn zero(kind: FieldKind, n: usize) -> Self {
        let ambient = Self::ambient_of(kind, n);
        VectorField {
            kind,
            n,
            components: vec![Polynomial::zero(ambient); ambient.nvars()],
        }
    }

    /// The coordinate field `d/dx_{i+1}` on the base.
    pub fn coordinate(n: usize, i: usize) -> Self {
        let mut v = Self::zero(FieldKind::Base, n);
        v.components[i] = Polynomial::one(Ambient::base(n));
        v
    }

    fn ambient_of(kind: FieldKind, n: usize) -> Ambient {
        match kind {
            FieldKind::Base => Ambient::base(n),
            FieldKind::Phase => Ambient::phase(n),
        }
    }

    pub fn ambient(&self) -> Ambient {
        Self::ambient_of(self.kind, self.n)
    }

    pub fn kind(&self) -> FieldKind {
        self.kind
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn components(&self) -> &[Polynomial] {
        &self.components
    }

    pub fn component(&self, i: usize) -> &Polynomial {
        &self.components[i]
    }

    pub fn is_zero(&self) -> bool {
        self.components.iter().all(Polynomial::is_zero)
    }

    /// Components along `d/dx` (all of them for a base field).
    pub fn x_block(&self) -> &[Polynomial] {
        &self.components[..self.n]
    }

    /// Components along `d/dp` (empty for a base field).
    pub fn p_block(&self) -> &[Polynomial] {
        &self.components[self.n..]
    }

    /// Uniform fiber degree of the x-block and the p-block, when homogeneous.
    /// Zero blocks report `None`.
    pub fn block_degrees(&self) -> (Option<u64>, Option<u64>) {
        fn uniform(block: &[Polynomial]) -> Option<u64> {
            let mut deg = None;
            for c in block {
                match c.p_homogeneous_degree() {
                    crate::exactpoly::Homogeneity::Zero => {}
                    crate::exactpoly::Homogeneity::Mixed => return None,
                    crate::exactpoly::Homogeneity::Degree(k) => match deg {
                        None => deg = Some(k),
                        Some(d) if d == k => {}
                        Some(_) => return None,
                    },
                }
            }
            deg
        }
        (uniform(self.x_block()), uniform(self.p_block()))
    }

    fn check_same(&self, other: &VectorField) -> Result<(), FieldError> {
        if self.kind != other.kind || self.n != other.n {
            return Err(FieldError::KindMismatch(self.kind, other.kind));
        }
        Ok(())
    }

    /// Apply as a derivation: `V(f) = sum_k V_k df/dz_k`.
    pub fn apply(&self, f: &Polynomial) -> Result<Polynomial, FieldError> {
        let f = f.embed(self.ambient())?;
        let mut acc = Polynomial::zero(self.ambient());
        for (k, c) in self.components.iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            let d = f.partial(k)?;
            if !d.is_zero() {
                acc = acc.checked_add(&c.checked_mul(&d)?)?;
            }
        }
        Ok(acc)
    }

    /// `[X, Y] = DY.X - DX.Y` componentwise.
    pub fn lie_bracket(&self, other: &VectorField) -> Result<VectorField, FieldError> {
        self.check_same(other)?;
        let components = (0..self.components.len())
            .map(|k| {
                let a = self.apply(&other.components[k])?;
                let b = other.apply(&self.components[k])?;
                Ok(a.checked_sub(&b)?)
            })
            .collect::<Result<Vec<_>, FieldError>>()?;
        Ok(VectorField {
            kind: self.kind,
            n: self.n,
            components,
        })
    }

    /// Euclidean divergence in the declared coordinates.
    pub fn divergence(&self) -> Polynomial {
        let mut acc = Polynomial::zero(self.ambient());
        for (k, c) in self.components.iter().enumerate() {
            acc = &acc + &c.partial(k).expect("slot in range");
        }
        acc
    }

    pub fn checked_add(&self, other: &VectorField) -> Result<VectorField, FieldError> {
        self.check_same(other)?;
        let components = self
            .components
            .iter()
            .zip(&other.components)
            .map(|(a, b)| a.checked_add(b))
            .collect::<Result<Vec<_>, _>>()?;
        Ok(VectorField {
            kind: self.kind,
            n: self.n,
            components,
        })
    }

    pub fn checked_sub(&self, other: &VectorField) -> Result<VectorField, FieldError> {
        self.checked_add(&other.scale_rational(&Rational::from_integer((-1).into())))
    }

    /// Multiply by a function (embedded into this field's ambient).
    pub fn scale(&self, f: &Polynomial) -> Result<VectorField, FieldError> {
        let f = f.embed(self.ambient())?;
        let components = self
            .components
            .iter()
            .map(|c| c.checked_mul(&f))
            .collect::<Result<Vec<_>, _>>()?;
        Ok(VectorField {
            kind: self.kind,
            n: self.n,
            components,
        })
    }

    pub fn scale_rational(&self, c: &Rational) -> VectorField {
        VectorField {
            kind: self.kind,
            n: self.n,
            components: self.components.iter().map(|p| p.scale(c)).collect(),
        }
    }

    /// The same base field viewed on phase space with zero p-block.
    pub fn to_phase(&self) -> Result<VectorField, FieldError> {
        match self.kind {
            FieldKind::Phase => Ok(self.clone()),
            FieldKind::Base => {
                let amb = Ambient::phase(self.n);
                let mut components = self
                    .components
                    .iter()
                    .map(|c| c.embed(amb))
                    .collect::<Result<Vec<_>, _>>()?;
                components.extend(std::iter::repeat_n(Polynomial::zero(amb), self.n));
                Ok(VectorField {
                    kind: FieldKind::Phase,
                    n: self.n,
                    components,
                })
            }
        }
    }

    /// Projection of a phase field to the base (`d pi`), when the x-block
    /// does not depend on `p`.
    pub fn x_projection(&self) -> Result<VectorField, FieldError> {
        let components = self
            .x_block()
            .iter()
            .map(|c| c.restrict_to_base())
            .collect::<Result<Vec<_>, _>>()?;
        VectorField::base(self.n, components)
    }

    pub fn eval_rational(&self, point: &[Rational]) -> Result<Vec<Rational>, FieldError> {
        Ok(self
            .components
            .iter()
            .map(|c| c.eval_rational(point))
            .collect::<Result<Vec<_>, _>>()?)
    }

    pub fn to_float(&self) -> Vec<FloatPolynomial> {
        self.components.iter().map(Polynomial::to_float).collect()
    }

    /// Substitute into every component (see [`Polynomial::compose`]).
    pub fn compose_components(&self, images: &[Polynomial]) -> Result<Vec<Polynomial>, FieldError> {
        Ok(self
            .components
            .iter()
            .map(|c| c.compose(images))
            .collect::<Result<Vec<_>, _>>()?)
    }
}

impl fmt::Display for VectorField {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let amb = self.ambient();
        let mut first = true;
        for (k, c) in self.components.iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            if !first {
                f.write_str(" + ")?;
            }
            first = false;
            write!(f, "({c})*d/d{}", amb.var_name(k))?;
        }
        if first {
            f.write_str("0")?;
        }
        Ok(())
    }
}

impl fmt::Debug for VectorField {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "VectorField[{:?}, n={}]({})", self.kind, self.n, self)
    }
}

/// `h_X(x, p) = p . X(x)`, linear in `p`.
pub fn hamiltonian_lift(x: &VectorField) -> Result<Polynomial, FieldError> {
    if x.kind != FieldKind::Base {
        return Err(FieldError::KindMismatch(FieldKind::Base, x.kind));
    }
    let amb = Ambient::phase(x.n);
    let mut h = Polynomial::zero(amb);
    for (k, c) in x.components.iter().enumerate() {
        if !c.is_zero() {
            h = h.checked_add(&Polynomial::p(amb, k).checked_mul(&c.embed(amb)?)?)?;
        }
    }
    Ok(h)
}

/// `h-> = (dh/dp, -dh/dx)`. A base-ambient `h` is embedded into phase space.
pub fn hamiltonian_vector_field(h: &Polynomial) -> Result<VectorField, FieldError> {
    let n = h.ambient().n();
    let amb = Ambient::phase(n);
    let h = h.embed(amb)?;
    let mut components = Vec::with_capacity(2 * n);
    for k in 0..n {
        components.push(h.partial(amb.p(k))?);
    }
    for k in 0..n {
        components.push(-h.partial(amb.x(k))?);
    }
    Ok(VectorField {
        kind: FieldKind::Phase,
        n,
        components,
    })
}

/// `{h, g} = sum_k dh/dp_k dg/dx_k - dh/dx_k dg/dp_k`.
pub fn poisson_bracket(h: &Polynomial, g: &Polynomial) -> Result<Polynomial, FieldError> {
    if h.ambient().n() != g.ambient().n() {
        return Err(PolyError::AmbientMismatch {
            left: h.ambient(),
            right: g.ambient(),
        }
        .into());
    }
    let amb = Ambient::phase(h.ambient().n());
    let h = h.embed(amb)?;
    let g = g.embed(amb)?;
    let mut acc = Polynomial::zero(amb);
    for k in 0..amb.n() {
        let hp = h.partial(amb.p(k))?;
        if !hp.is_zero() {
            acc = acc.checked_add(&hp.checked_mul(&g.partial(amb.x(k))?)?)?;
        }
        let hx = h.partial(amb.x(k))?;
        if !hx.is_zero() {
            acc = acc.checked_sub(&hx.checked_mul(&g.partial(amb.p(k))?)?)?;
        }
    }
    Ok(acc)
}

pub use crate::linalg::rational_rank;

/// Generating family `X^1..X^m` of a rank-m distribution on `R^n`.
///
/// When built through [`Frame::corank_one`] (or detected by [`Frame::new`]),
/// the frame also carries `A_1..A_{n-1}` with `X^i = d/dx_i + A_i d/dx_n`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Frame {
    n: usize,
    fields: Vec<VectorField>,
    normal_form: Option<Vec<Polynomial>>,
}

impl Frame {
    /// Validate `m < n` and linear independence of the constant terms.
    pub fn new(n: usize, fields: Vec<VectorField>) -> Result<Self, FieldError> {
        let m = fields.len();
        if m >= n {
            return Err(FieldError::RankTooLarge { m, n });
        }
        for (index, f) in fields.iter().enumerate() {
            if f.kind != FieldKind::Base || f.n != n {
                return Err(FieldError::BadField { index, n });
            }
        }
        let rows: Vec<Vec<Rational>> = fields
            .iter()
            .map(|f| f.components.iter().map(Polynomial::constant_term).collect())
            .collect();
        let rank = rational_rank(&rows);
        if rank < m {
            return Err(FieldError::DependentAtOrigin { rank, m });
        }
        let normal_form = detect_corank_one(n, &fields);
        Ok(Frame {
            n,
            fields,
            normal_form,
        })
    }

    /// `X^i = d/dx_i + A_i d/dx_n`, `i = 1..n-1`.
    pub fn corank_one(n: usize, a: Vec<Polynomial>) -> Result<Self, FieldError> {
        if a.len() + 1 != n {
            return Err(FieldError::ComponentCount {
                expected: n - 1,
                got: a.len(),
            });
        }
        let amb = Ambient::base(n);
        let fields = a
            .iter()
            .enumerate()
            .map(|(i, ai)| {
                let mut comps = vec![Polynomial::zero(amb); n];
                comps[i] = Polynomial::one(amb);
                comps[n - 1] = ai.embed(amb)?;
                VectorField::base(n, comps)
            })
            .collect::<Result<Vec<_>, _>>()?;
        Frame::new(n, fields)
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn rank(&self) -> usize {
        self.fields.len()
    }

    pub fn fields(&self) -> &[VectorField] {
        &self.fields
    }

    pub fn field(&self, i: usize) -> &VectorField {
        &self.fields[i]
    }

    /// `A_1..A_{n-1}` when the frame is in corank-1 normal form.
    pub fn normal_form(&self) -> Option<&[Polynomial]> {
        self.normal_form.as_deref()
    }

    /// Hamiltonians `h^i = p . X^i`.
    pub fn lifts(&self) -> Vec<Polynomial> {
        self.fields
            .iter()
            .map(|f| hamiltonian_lift(f).expect("frame fields are base fields"))
            .collect()
    }

    /// The frame fields followed by their iterated brackets
    /// `[X^i, [X^j, ...]]` up to length `depth`, zero brackets dropped.
    pub fn brackets_up_to(&self, depth: usize) -> Result<Vec<VectorField>, FieldError> {
        let mut all = self.fields.clone();
        let mut layer = self.fields.clone();
        for _ in 1..depth.max(1) {
            let mut next = Vec::new();
            for x in &self.fields {
                for b in &layer {
                    let br = x.lie_bracket(b)?;
                    if !br.is_zero() {
                        next.push(br);
                    }
                }
            }
            all.extend(next.iter().cloned());
            layer = next;
        }
        Ok(all)
    }

    /// Rank of the span of all brackets of length `<= depth` at `point`.
    /// A diagnostic for bracket generation, not a proof of it.
    pub fn bracket_rank_at(&self, point: &[Rational], depth: usize) -> Result<usize, FieldError> {
        let rows = self
            .brackets_up_to(depth)?
            .iter()
            .map(|f| f.eval_rational(point))
            .collect::<Result<Vec<_>, _>>()?;
        Ok(rational_rank(&rows))
    }
}

fn detect_corank_one(n: usize, fields: &[VectorField]) -> Option<Vec<Polynomial>> {
    if fields.len() + 1 != n {
        return None;
    }
    let mut a = Vec::with_capacity(n - 1);
    for (i, f) in fields.iter().enumerate() {
        for (k, c) in f.components.iter().enumerate().take(n - 1) {
            let expected_one = k == i;
            let ok = if expected_one {
                c.is_constant() && c.constant_term() == Rational::from_integer(1.into())
            } else {
                c.is_zero()
            };
            if !ok {
                return None;
            }
        }
        a.push(f.components[n - 1].clone());
    }
    Some(a)
}

/// Exact zero test helper for rational vectors.
pub fn is_zero_vector(v: &[Rational]) -> bool {
    v.iter().all(Zero::is_zero)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exactpoly::{parse_expression, rat};

    fn base(n: usize, comps: &[&str]) -> VectorField {
        let amb = Ambient::base(n);
        VectorField::base(n, comps.iter().map(|s| parse_expression(s, amb).unwrap()).collect()).unwrap()
    }

    fn ph(n: usize, s: &str) -> Polynomial {
        parse_expression(s, Ambient::phase(n)).unwrap()
    }

    #[test]
    fn constant_coefficient_bracket() {
        let d1 = base(3, &["1", "0", "0"]);
        let x = base(3, &["0", "1", "x1"]);
        assert_eq!(d1.lie_bracket(&x).unwrap(), base(3, &["0", "0", "1"]));
        assert!(x.lie_bracket(&x).unwrap().is_zero());
    }

    #[test]
    fn corank_one_bracket_matches_closed_form() {
        // [X^i, X^j](x4) = d_i A_j - d_j A_i + A_i d_4 A_j - A_j d_4 A_i
        let amb = Ambient::base(4);
        let a: Vec<Polynomial> = ["x2*x4", "x1^2 + x4", "x1*x3 - x4^2"]
            .iter()
            .map(|s| parse_expression(s, amb).unwrap())
            .collect();
        let frame = Frame::corank_one(4, a.clone()).unwrap();
        for i in 0..3 {
            for j in 0..3 {
                let br = frame.field(i).lie_bracket(frame.field(j)).unwrap();
                let formula = &(&a[j].partial(i).unwrap() - &a[i].partial(j).unwrap())
                    + &(&(&a[i] * &a[j].partial(3).unwrap()) - &(&a[j] * &a[i].partial(3).unwrap()));
                assert_eq!(br.component(3), &formula);
                for k in 0..3 {
                    assert!(br.component(k).is_zero());
                }
            }
        }
    }

    #[test]
    fn lifts() {
        assert_eq!(hamiltonian_lift(&base(3, &["1", "0", "0"])).unwrap(), ph(3, "p1"));
        assert_eq!(hamiltonian_lift(&base(3, &["0", "1", "x1"])).unwrap(), ph(3, "p2 + x1*p3"));
        assert!(hamiltonian_lift(&VectorField::zero(FieldKind::Base, 3)).unwrap().is_zero());
    }

    #[test]
    fn hamiltonian_fields() {
        let v = hamiltonian_vector_field(&ph(1, "p1")).unwrap();
        assert_eq!(v.components(), &[ph(1, "1"), ph(1, "0")]);
        // h = p2 + x1 p3: x-block (0,1,x1)?  dh/dp = (0, 1, x1); -dh/dx = (-p3, 0, 0)
        let v = hamiltonian_vector_field(&ph(3, "p2 + x1*p3")).unwrap();
        assert_eq!(v.x_block(), &[ph(3, "0"), ph(3, "1"), ph(3, "x1")]);
        assert_eq!(v.p_block(), &[ph(3, "-p3"), ph(3, "0"), ph(3, "0")]);
        assert_eq!(v.block_degrees(), (Some(0), Some(1)));
        assert!(hamiltonian_vector_field(&ph(2, "7")).unwrap().is_zero());
    }

    #[test]
    fn poisson_sign_convention() {
        assert_eq!(poisson_bracket(&ph(3, "p1"), &ph(3, "p2 + x1*p3")).unwrap(), ph(3, "p3"));
        assert_eq!(poisson_bracket(&ph(1, "p1"), &ph(1, "x1")).unwrap(), ph(1, "1"));
        let h = ph(2, "x1*p2^2 + x2");
        assert!(poisson_bracket(&h, &h).unwrap().is_zero());
    }

    #[test]
    fn divergences() {
        assert!(base(4, &["1", "0", "1", "x2"]).divergence().is_zero());
        assert_eq!(base(1, &["x1"]).divergence(), parse_expression("1", Ambient::base(1)).unwrap());
        let hv = hamiltonian_vector_field(&ph(2, "x1^2*p2 + p1*p2*x2")).unwrap();
        assert!(hv.divergence().is_zero());
    }

    #[test]
    fn frame_validation() {
        assert!(matches!(
            Frame::new(2, vec![base(2, &["1", "0"]), base(2, &["0", "1"])]),
            Err(FieldError::RankTooLarge { .. })
        ));
        assert!(matches!(
            Frame::new(3, vec![base(3, &["1", "0", "0"]), base(3, &["2", "x1", "0"])]),
            Err(FieldError::DependentAtOrigin { rank: 1, m: 2 })
        ));
        let f = Frame::new(3, vec![base(3, &["1", "0", "0"]), base(3, &["0", "1", "x1^2"])]).unwrap();
        assert_eq!(f.normal_form().unwrap()[1], parse_expression("x1^2", Ambient::base(3)).unwrap());
    }

    #[test]
    fn bracket_rank_of_martinet() {
        let f = Frame::corank_one(
            3,
            vec![Polynomial::zero(Ambient::base(3)), parse_expression("x1^2", Ambient::base(3)).unwrap()],
        )
        .unwrap();
        let origin = vec![rat(0, 1); 3];
        assert_eq!(f.bracket_rank_at(&origin, 2).unwrap(), 2);
        assert_eq!(f.bracket_rank_at(&origin, 3).unwrap(), 3);
        let off = vec![rat(1, 2), rat(0, 1), rat(0, 1)];
        assert_eq!(f.bracket_rank_at(&off, 2).unwrap(), 3);
    }
}
