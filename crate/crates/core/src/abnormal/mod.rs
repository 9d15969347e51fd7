//! Goh matrices, abnormal generators `Y_I` on phase space, their base
//! projections `Z_I`, divergence certificates and kernel-dimension strata.

mod stratify;
mod univariate;

use std::fmt;

use num_traits::{One, Zero};
use serde::Serialize;
use thiserror::Error;

use crate::exactpoly::{Ambient, Monomial, PolyError, Polynomial, Rational};
use crate::linalg::rational_nullspace;
use crate::pfaffian::{
    epsilon_sign, kernel_generators_from_table, skew_rank_with_table, IndexSet, PfaffianError, PfaffianTable,
    SkewMatrix,
};
use crate::vectorfield::{hamiltonian_vector_field, poisson_bracket, FieldError, Frame, VectorField};

pub use stratify::{stratify, Level, StratifyConfig, Stratification, Witness};
pub use univariate::UnivariatePolynomial;

/// Triple bracket ordering used in the Jacobi expansion.
pub const JACOBI_ORDERING: &str = "{h^j,{h^k,h^l}}";

#[derive(Debug, Clone, PartialEq, Error)]
pub enum AbnormalError {
    #[error("point is off the annihilator: h^{index} = {value}")]
    ConstraintViolation { index: usize, value: Rational },
    #[error("covector p is zero")]
    ZeroCovector,
    #[error("frame is not in corank-1 normal form")]
    NoNormalForm,
    #[error("coefficient of x-field {index} does not factor as p{n}^{degree} * f(x)")]
    Factorization { index: usize, n: usize, degree: u64 },
    #[error("{subject}: {check} residual is nonzero: {residual}")]
    CertificateFailure {
        subject: String,
        check: &'static str,
        residual: Polynomial,
    },
    #[error("sampling failed: {0}")]
    Sampling(String),
    #[error("invariant violated at witness {witness}: {message}")]
    Invariant { witness: usize, message: String },
    #[error(transparent)]
    Pfaffian(#[from] PfaffianError),
    #[error(transparent)]
    Field(#[from] FieldError),
    #[error(transparent)]
    Poly(#[from] PolyError),
}

/// `H = [h^{ij}]` with `h^{ij} = p · [X^i, X^j]`, and `H̃` with `H = p_n H̃`
/// when the frame is in corank-1 normal form.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GohMatrix {
    pub h: SkewMatrix,
    pub reduced: Option<SkewMatrix>,
}

impl GohMatrix {
    pub fn size(&self) -> usize {
        self.h.size()
    }

    /// `H̃` rows printed with the canonical polynomial syntax.
    pub fn reduced_strings(&self) -> Option<Vec<Vec<String>>> {
        self.reduced.as_ref().map(matrix_strings)
    }

    pub fn strings(&self) -> Vec<Vec<String>> {
        matrix_strings(&self.h)
    }
}

pub(crate) fn matrix_strings(a: &SkewMatrix) -> Vec<Vec<String>> {
    a.rows()
        .iter()
        .map(|r| r.iter().map(ToString::to_string).collect())
        .collect()
}

pub fn goh_matrix(frame: &Frame) -> Result<GohMatrix, AbnormalError> {
    let m = frame.rank();
    let n = frame.n();
    let phase = Ambient::phase(n);
    let mut brackets = vec![vec![None; m]; m];
    for i in 0..m {
        for j in i + 1..m {
            brackets[i][j] = Some(frame.field(i).lie_bracket(frame.field(j))?);
        }
    }
    let lift = |v: &VectorField| -> Polynomial {
        crate::vectorfield::hamiltonian_lift(v).expect("base field")
    };
    let h = SkewMatrix::from_fn(m, phase, |i, j| lift(brackets[i][j].as_ref().expect("i<j")))?;
    let reduced = if frame.normal_form().is_some() {
        let base = Ambient::base(n);
        let red = SkewMatrix::from_fn(m, base, |i, j| {
            brackets[i][j].as_ref().expect("i<j").component(n - 1).clone()
        })?;
        let pn = Polynomial::p(phase, n - 1);
        for i in 0..m {
            for j in i + 1..m {
                debug_assert_eq!(h.upper(i, j), &(&pn * &red.upper(i, j).embed(phase)?));
            }
        }
        Some(red)
    } else {
        None
    };
    Ok(GohMatrix { h, reduced })
}

/// Validate `(x, p)` against the annihilator and return the point with `p`.
fn check_annihilator(frame: &Frame, point: &[Rational]) -> Result<(), AbnormalError> {
    let n = frame.n();
    if point.len() != 2 * n {
        return Err(PolyError::PointLength {
            expected: 2 * n,
            got: point.len(),
        }
        .into());
    }
    if point[n..].iter().all(Zero::is_zero) {
        return Err(AbnormalError::ZeroCovector);
    }
    for (index, h) in frame.lifts().iter().enumerate() {
        let value = h.eval_rational(point)?;
        if !value.is_zero() {
            return Err(AbnormalError::ConstraintViolation {
                index: index + 1,
                value,
            });
        }
    }
    Ok(())
}

/// `m - rank H(x, p)` at a point of the annihilator with `p != 0`.
pub fn kernel_dim_at(frame: &Frame, point: &[Rational]) -> Result<usize, AbnormalError> {
    check_annihilator(frame, point)?;
    let goh = goh_matrix(frame)?;
    let at = goh.h.evaluate(point)?;
    let table = PfaffianTable::new(&at, at.size());
    Ok(frame.rank() - skew_rank_with_table(&table))
}

/// Basis of the annihilator of `X^1(x), …, X^m(x)`.
pub fn annihilator_basis(frame: &Frame, x: &[Rational]) -> Result<Vec<Vec<Rational>>, AbnormalError> {
    let rows = frame
        .fields()
        .iter()
        .map(|f| f.eval_rational(x))
        .collect::<Result<Vec<_>, _>>()?;
    Ok(rational_nullspace(&rows, frame.n()))
}

/// `(x, p)` with `p = Σ c_k b_k` over an annihilator basis; corank-1 frames
/// use `p = p_n (-A(x), 1)`.
pub fn annihilator_point(frame: &Frame, x: &[Rational], weights: &[Rational]) -> Result<Vec<Rational>, AbnormalError> {
    let n = frame.n();
    let mut point = x.to_vec();
    if let Some(a) = frame.normal_form() {
        let pn = weights.first().cloned().unwrap_or_else(Rational::one);
        for ai in a {
            point.push(-(ai.eval_rational(x)? * &pn));
        }
        point.push(pn);
        return Ok(point);
    }
    let basis = annihilator_basis(frame, x)?;
    let mut p = vec![Rational::zero(); n];
    for (k, b) in basis.iter().enumerate() {
        let w = weights.get(k).cloned().unwrap_or_else(Rational::one);
        for (pi, bi) in p.iter_mut().zip(b) {
            *pi += &w * bi;
        }
    }
    point.extend(p);
    Ok(point)
}

/// Fiber-degree record of a generator's two blocks.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct PDegree {
    pub x_block: Option<u64>,
    pub p_block: Option<u64>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct AbnormalGenerator {
    pub index_set: IndexSet,
    pub rank: usize,
    /// `φ(H, I∖{j})` weighted by `ε(I, j)`, for `j ∈ I`.
    pub coefficients: Vec<(usize, Polynomial)>,
    pub y: VectorField,
    pub z: Option<VectorField>,
    pub p_degree: PDegree,
}

impl AbnormalGenerator {
    pub fn id(&self) -> String {
        format!("Y{}", self.index_set)
    }

    pub fn is_zero(&self) -> bool {
        self.y.is_zero()
    }
}

impl fmt::Display for AbnormalGenerator {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} = {}", self.id(), self.y)
    }
}

/// `Y_I = Σ_{j∈I} ε(I,j) φ(H, I∖{j}) h⃗^j` for every `I ∈ Λ_{r+1}`, with the
/// corank-1 projection attached when available.
pub fn abnormal_generators(frame: &Frame, r: usize) -> Result<Vec<AbnormalGenerator>, AbnormalError> {
    let goh = goh_matrix(frame)?;
    abnormal_generators_with(frame, &goh, r)
}

pub fn abnormal_generators_with(
    frame: &Frame,
    goh: &GohMatrix,
    r: usize,
) -> Result<Vec<AbnormalGenerator>, AbnormalError> {
    let m = frame.rank();
    if r % 2 == 1 || r >= m {
        return Err(PfaffianError::BadRank { r, m }.into());
    }
    let table = PfaffianTable::new(&goh.h, r);
    let hvfs = frame
        .lifts()
        .iter()
        .map(hamiltonian_vector_field)
        .collect::<Result<Vec<_>, _>>()?;
    let mut out = Vec::new();
    for kg in kernel_generators_from_table(&table, r) {
        let mut y = VectorField::zero(crate::vectorfield::FieldKind::Phase, frame.n());
        for (j, c) in &kg.coefficients {
            if !c.is_zero() {
                y = y.checked_add(&hvfs[*j].scale(c)?)?;
            }
        }
        let (x_block, p_block) = y.block_degrees();
        let mut g = AbnormalGenerator {
            index_set: kg.index_set,
            rank: r,
            coefficients: kg.coefficients,
            y,
            z: None,
            p_degree: PDegree { x_block, p_block },
        };
        if frame.normal_form().is_some() {
            g.z = Some(project_corank1(&g, frame)?);
        }
        out.push(g);
    }
    Ok(out)
}

/// `Z_I = Σ ε(I,i) φ_{I∖{i}}(x) X^i`, obtained by stripping `p_n^{r/2}` from
/// each coefficient of `Y_I`.
pub fn project_corank1(g: &AbnormalGenerator, frame: &Frame) -> Result<VectorField, AbnormalError> {
    let a = frame.normal_form().ok_or(AbnormalError::NoNormalForm)?;
    let n = frame.n();
    let phase = Ambient::phase(n);
    let degree = (g.rank / 2) as u64;
    let mut exps = vec![0u32; 2 * n];
    exps[phase.p(n - 1)] = degree as u32;
    let pn_pow = Monomial::from_exponents(exps);
    let mut z = VectorField::zero(crate::vectorfield::FieldKind::Base, n);
    for (index, c) in &g.coefficients {
        let stripped = c
            .div_monomial(&pn_pow)
            .and_then(|q| q.restrict_to_base().ok())
            .ok_or(AbnormalError::Factorization {
                index: index + 1,
                n,
                degree,
            })?;
        z = z.checked_add(&frame.field(*index).scale(&stripped)?)?;
    }
    // x-block of Y at p = p_n (-A, 1) must be p_n^{r/2} Z.
    let mut images: Vec<Polynomial> = (0..n).map(|i| Polynomial::x(phase, i)).collect();
    let pn = Polynomial::p(phase, n - 1);
    for ai in a {
        images.push(-(&ai.embed(phase)? * &pn));
    }
    images.push(pn.clone());
    let scale = pn.pow(degree as u32)?;
    for (k, yk) in g.y.x_block().iter().enumerate() {
        let lhs = yk.compose(&images)?;
        let rhs = &scale * &z.component(k).embed(phase)?;
        if lhs != rhs {
            return Err(AbnormalError::Factorization {
                index: k + 1,
                n,
                degree,
            });
        }
    }
    Ok(z)
}

/// Residuals of the controlled-divergence argument. Valid iff every stored
/// residual is the zero polynomial.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DivergenceCertificate {
    pub subject: String,
    pub phase_divergence: Polynomial,
    pub jacobi_expansion: Polynomial,
    pub base: Option<BaseCombination>,
}

/// `div Z = Σ_j c_j Z(x_j)` with `c_j = λ ∂_{x_n} A_j`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BaseCombination {
    pub divergence: Polynomial,
    /// `None` when both sides vanish and no constant is determined.
    pub lambda: Option<Rational>,
    pub coefficients: Vec<(usize, Polynomial)>,
    pub residual: Polynomial,
}

impl DivergenceCertificate {
    pub fn is_valid(&self) -> bool {
        self.phase_divergence.is_zero()
            && self.jacobi_expansion.is_zero()
            && self.base.as_ref().is_none_or(|b| b.residual.is_zero())
    }

    fn first_failure(&self) -> Option<(&'static str, &Polynomial)> {
        if !self.phase_divergence.is_zero() {
            return Some(("phase divergence", &self.phase_divergence));
        }
        if !self.jacobi_expansion.is_zero() {
            return Some(("jacobi expansion", &self.jacobi_expansion));
        }
        match &self.base {
            Some(b) if !b.residual.is_zero() => Some(("base combination", &b.residual)),
            _ => None,
        }
    }
}

/// Compute all residuals without failing; see [`divergence_certificate`].
pub fn divergence_residuals(g: &AbnormalGenerator, frame: &Frame) -> Result<DivergenceCertificate, AbnormalError> {
    let goh = goh_matrix(frame)?;
    let phase_divergence = g.y.divergence();
    let jacobi_expansion = jacobi_expansion(frame, &goh, g.index_set)?;
    let base = match (&g.z, frame.normal_form()) {
        (Some(z), Some(a)) => Some(base_combination(z, a, g.index_set, frame.n())?),
        _ => None,
    };
    Ok(DivergenceCertificate {
        subject: g.id(),
        phase_divergence,
        jacobi_expansion,
        base,
    })
}

/// Certificate for one generator; a nonzero residual is an error carrying it.
pub fn divergence_certificate(g: &AbnormalGenerator, frame: &Frame) -> Result<DivergenceCertificate, AbnormalError> {
    let cert = divergence_residuals(g, frame)?;
    if let Some((check, residual)) = cert.first_failure() {
        return Err(AbnormalError::CertificateFailure {
            subject: cert.subject.clone(),
            check,
            residual: residual.clone(),
        });
    }
    Ok(cert)
}

/// `Σ_{j,k,l ∈ I distinct} ε(I,j) ε(I∖j,k) ε(I∖{j,k},l) φ(H, I∖{j,k,l}) {h^j,{h^k,h^l}}`.
pub fn jacobi_expansion(frame: &Frame, goh: &GohMatrix, set: IndexSet) -> Result<Polynomial, AbnormalError> {
    let lifts = frame.lifts();
    let amb = goh.h.ambient();
    let table = PfaffianTable::new(&goh.h, set.len().saturating_sub(3));
    let mut acc = Polynomial::zero(amb);
    for j in set.iter() {
        let sj = set.without(j);
        let ej = epsilon_sign(set, j)?;
        for k in sj.iter() {
            let sk = sj.without(k);
            let ek = epsilon_sign(sj, k)?;
            for l in sk.iter() {
                let sl = sk.without(l);
                let phi = table.get(sl);
                if phi.is_zero() {
                    continue;
                }
                let el = epsilon_sign(sk, l)?;
                let inner = goh.h.entry(k, l);
                let triple = poisson_bracket(&lifts[j], &inner)?;
                if triple.is_zero() {
                    continue;
                }
                acc = acc.checked_add(&phi.checked_mul(&triple)?.scale_int(ej * ek * el))?;
            }
        }
    }
    Ok(acc)
}

fn base_combination(
    z: &VectorField,
    a: &[Polynomial],
    set: IndexSet,
    n: usize,
) -> Result<BaseCombination, AbnormalError> {
    let divergence = z.divergence();
    let base = Ambient::base(n);
    let mut weighted = Polynomial::zero(base);
    let mut partials = Vec::new();
    for j in set.iter() {
        let d = a[j].partial(n - 1)?;
        weighted = weighted.checked_add(&d.checked_mul(z.component(j))?)?;
        partials.push((j, d));
    }
    let lambda = weighted
        .leading_term()
        .map(|(mono, c)| divergence.coefficient(mono) / c);
    let residual = match &lambda {
        Some(l) => divergence.checked_sub(&weighted.scale(l))?,
        None => divergence.clone(),
    };
    let lam = lambda.clone().unwrap_or_else(Rational::zero);
    Ok(BaseCombination {
        divergence,
        lambda,
        coefficients: partials.into_iter().map(|(j, d)| (j, d.scale(&lam))).collect(),
        residual,
    })
}

/// Reduced minors `φ(H̃, I)`, `I ∈ Λ_r`; their common zeros form the set
/// where the rank drops below `r`.
pub fn singular_set_equations(frame: &Frame, r: usize) -> Result<Vec<(IndexSet, Polynomial)>, AbnormalError> {
    let goh = goh_matrix(frame)?;
    let red = goh.reduced.ok_or(AbnormalError::NoNormalForm)?;
    let table = PfaffianTable::new(&red, r);
    Ok(table.minors(r))
}
