//! Jet-level normalization of a frame at the origin.
//!
//! `ρ` completes `X(0)` to a basis, `Φ_j` rescales `X^j` by the truncated
//! inverse of its `j`-th component, `Ψ_j` eliminates the `j`-th component of
//! the other fields. After `Ψ_m ∘ Φ_m ∘ … ∘ Ψ_1 ∘ Φ_1 ∘ ρ` each field reads
//! `∂_k + Σ_{i>m} A^k_i ∂_i` with `A^k_i(0) = 0`, truncated at the input order.

use std::fmt;

use num_traits::{One, ToPrimitive, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;
use thiserror::Error;

use crate::abnormal::{annihilator_point, goh_matrix, AbnormalError};
use crate::exactpoly::{Ambient, JetSeries, PolyError, Polynomial, Rational};
use crate::linalg::rational_rank;
use crate::pfaffian::{IndexSet, PfaffianTable};
use crate::vectorfield::{hamiltonian_lift, FieldError, Frame, VectorField};

#[derive(Debug, Clone, PartialEq, Error)]
pub enum NormalFormError {
    #[error("constant terms are dependent (rank {rank} < {m}); the frame is not linearly independent at 0")]
    NotIndependent { rank: usize, m: usize },
    #[error("expected stage {expected}, found {found}")]
    WrongStage { expected: Stage, found: Stage },
    #[error("1 + A^{j}_{j} is not a unit")]
    NonUnit { j: usize },
    #[error(transparent)]
    Poly(#[from] PolyError),
    #[error(transparent)]
    Field(#[from] FieldError),
    #[error(transparent)]
    Abnormal(#[from] AbnormalError),
}

/// Position in the normalization pipeline; `j` is 1-based.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum Stage {
    Raw,
    V(usize),
    Z(usize),
    Normal,
}

impl fmt::Display for Stage {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Stage::Raw => f.write_str("raw"),
            Stage::V(j) => write!(f, "V({j})"),
            Stage::Z(j) => write!(f, "Z({j})"),
            Stage::Normal => f.write_str("normal"),
        }
    }
}

/// `m` fields on `R^n` as d-jets at the origin.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct JetFrame {
    n: usize,
    order: u64,
    /// `components[k][i]`: coefficient of `∂_i` in `X^k`.
    components: Vec<Vec<JetSeries>>,
    stage: Stage,
}

impl JetFrame {
    pub fn from_frame(frame: &Frame, order: u64) -> Result<Self, NormalFormError> {
        let components = frame
            .fields()
            .iter()
            .map(|f| {
                f.components()
                    .iter()
                    .map(|c| JetSeries::new(c.clone(), order))
                    .collect::<Result<Vec<_>, _>>()
            })
            .collect::<Result<Vec<_>, _>>()?;
        Ok(JetFrame {
            n: frame.n(),
            order,
            components,
            stage: Stage::Raw,
        })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn m(&self) -> usize {
        self.components.len()
    }

    pub fn order(&self) -> u64 {
        self.order
    }

    pub fn stage(&self) -> Stage {
        self.stage
    }

    pub fn component(&self, k: usize, i: usize) -> &JetSeries {
        &self.components[k][i]
    }

    /// `A^k_i = X^k_i - δ_{ki}`.
    pub fn a(&self, k: usize, i: usize) -> JetSeries {
        let c = &self.components[k][i];
        if k == i {
            c.sub(&JetSeries::one(self.n, self.order)).expect("same order")
        } else {
            c.clone()
        }
    }

    pub fn field(&self, k: usize) -> VectorField {
        VectorField::base(self.n, self.components[k].iter().map(|c| c.body().clone()).collect())
            .expect("n components")
    }

    /// The truncated fields as a polynomial frame.
    pub fn to_frame(&self) -> Result<Frame, NormalFormError> {
        Ok(Frame::new(self.n, (0..self.m()).map(|k| self.field(k)).collect())?)
    }

    fn expect_stage(&self, expected: Stage) -> Result<(), NormalFormError> {
        if self.stage != expected {
            return Err(NormalFormError::WrongStage {
                expected,
                found: self.stage,
            });
        }
        Ok(())
    }

    fn vj_holds(&self, j: usize) -> bool {
        (0..self.m()).all(|k| (0..j - 1).all(|i| self.a(k, i).is_zero()))
    }

    /// Whether the recorded stage's defining identities hold exactly.
    pub fn stage_holds(&self) -> bool {
        let m = self.m();
        match self.stage {
            Stage::Raw => true,
            Stage::V(j) => self.vj_holds(j),
            Stage::Z(j) => self.vj_holds(j) && self.a(j - 1, j - 1).is_zero(),
            Stage::Normal => {
                self.vj_holds(m + 1)
                    && (0..m).all(|k| (m..self.n).all(|i| self.components[k][i].constant_term().is_zero()))
            }
        }
    }

    /// Coefficients `A^k_i`, `i > m`, as polynomials (the normal-form data).
    pub fn corrections(&self) -> Vec<Vec<Polynomial>> {
        let m = self.m();
        (0..m)
            .map(|k| (m..self.n).map(|i| self.components[k][i].body().clone()).collect())
            .collect()
    }
}

impl fmt::Display for JetFrame {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "JetFrame n={} m={} order={} stage={}", self.n, self.m(), self.order, self.stage)?;
        for k in 0..self.m() {
            writeln!(f, "  X{} = {}", k + 1, self.field(k))?;
        }
        Ok(())
    }
}

/// `x = B y`, `y = L x`; covectors transform as `q = Bᵀ p`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LinearChange {
    pub b: Vec<Vec<Rational>>,
    pub l: Vec<Vec<Rational>>,
}

impl LinearChange {
    pub fn identity(n: usize) -> Self {
        let id: Vec<Vec<Rational>> = (0..n)
            .map(|i| (0..n).map(|j| if i == j { Rational::one() } else { Rational::zero() }).collect())
            .collect();
        LinearChange { b: id.clone(), l: id }
    }

    pub fn is_identity(&self) -> bool {
        *self == Self::identity(self.b.len())
    }

    pub fn to_old(&self, y: &[Rational]) -> Vec<Rational> {
        mat_vec(&self.b, y)
    }

    pub fn to_new(&self, x: &[Rational]) -> Vec<Rational> {
        mat_vec(&self.l, x)
    }

    pub fn covector_to_new(&self, p: &[Rational]) -> Vec<Rational> {
        let n = p.len();
        (0..n).map(|c| (0..n).map(|r| &self.b[r][c] * &p[r]).sum()).collect()
    }
}

fn mat_vec(a: &[Vec<Rational>], v: &[Rational]) -> Vec<Rational> {
    a.iter().map(|row| row.iter().zip(v).map(|(x, y)| x * y).sum()).collect()
}

fn invert(b: &[Vec<Rational>]) -> Vec<Vec<Rational>> {
    let n = b.len();
    let mut aug: Vec<Vec<Rational>> = b
        .iter()
        .enumerate()
        .map(|(i, row)| {
            let mut r = row.clone();
            r.extend((0..n).map(|j| if i == j { Rational::one() } else { Rational::zero() }));
            r
        })
        .collect();
    for col in 0..n {
        let p = (col..n).find(|&r| !aug[r][col].is_zero()).expect("invertible");
        aug.swap(col, p);
        let inv = aug[col][col].recip();
        for v in aug[col].iter_mut() {
            *v *= &inv;
        }
        let prow = aug[col].clone();
        for (r, row) in aug.iter_mut().enumerate() {
            if r != col && !row[col].is_zero() {
                let f = row[col].clone();
                for (c, v) in row.iter_mut().enumerate() {
                    *v -= &f * &prow[c];
                }
            }
        }
    }
    aug.into_iter().map(|r| r[n..].to_vec()).collect()
}

/// `ρ`: complete `X^1(0), …, X^m(0)` with standard basis vectors, leftmost
/// first, and push the frame forward by `L = B⁻¹`.
pub fn normalize_linear(frame: &JetFrame) -> Result<(JetFrame, LinearChange), NormalFormError> {
    frame.expect_stage(Stage::Raw)?;
    let (n, m) = (frame.n, frame.m());
    let mut cols: Vec<Vec<Rational>> = (0..m)
        .map(|k| (0..n).map(|i| frame.components[k][i].constant_term()).collect())
        .collect();
    let rank = rational_rank(&cols);
    if rank < m {
        return Err(NormalFormError::NotIndependent { rank, m });
    }
    for i in 0..n {
        if cols.len() == n {
            break;
        }
        let mut e = vec![Rational::zero(); n];
        e[i] = Rational::one();
        cols.push(e);
        if rational_rank(&cols) < cols.len() {
            cols.pop();
        }
    }
    // cols are the columns of B
    let b: Vec<Vec<Rational>> = (0..n).map(|r| (0..n).map(|c| cols[c][r].clone()).collect()).collect();
    let l = invert(&b);
    let change = LinearChange { b, l };
    let amb = Ambient::base(n);
    let images: Vec<Polynomial> = (0..n)
        .map(|r| {
            (0..n).fold(Polynomial::zero(amb), |acc, c| {
                &acc + &Polynomial::x(amb, c).scale(&change.b[r][c])
            })
        })
        .collect();
    let mut components = Vec::with_capacity(m);
    for k in 0..m {
        let pulled: Vec<Polynomial> = frame.components[k]
            .iter()
            .map(|c| c.body().compose(&images))
            .collect::<Result<_, _>>()?;
        let row = (0..n)
            .map(|i| {
                let p = (0..n).fold(Polynomial::zero(amb), |acc, r| &acc + &pulled[r].scale(&change.l[i][r]));
                JetSeries::new(p, frame.order)
            })
            .collect::<Result<Vec<_>, _>>()?;
        components.push(row);
    }
    Ok((
        JetFrame {
            n,
            order: frame.order,
            components,
            stage: Stage::V(1),
        },
        change,
    ))
}

/// `Φ_j`: `X^j ← U_j X^j` with `U_j = 1/(1 + A^j_j)` as a truncated series.
pub fn phi_step(frame: &JetFrame, j: usize) -> Result<JetFrame, NormalFormError> {
    frame.expect_stage(Stage::V(j))?;
    let u = frame.components[j - 1][j - 1]
        .invert_unit()
        .map_err(|_| NormalFormError::NonUnit { j })?;
    let mut out = frame.clone();
    for c in out.components[j - 1].iter_mut() {
        *c = c.mul(&u)?;
    }
    out.stage = Stage::Z(j);
    Ok(out)
}

/// `Ψ_j`: `X^k ← X^k - A^k_j X^j` for `k ≠ j`.
pub fn psi_step(frame: &JetFrame, j: usize) -> Result<JetFrame, NormalFormError> {
    frame.expect_stage(Stage::Z(j))?;
    let m = frame.m();
    let mut out = frame.clone();
    let xj = &frame.components[j - 1];
    for k in 0..m {
        if k == j - 1 {
            continue;
        }
        let a = frame.components[k][j - 1].clone();
        if a.is_zero() {
            continue;
        }
        for i in 0..frame.n {
            out.components[k][i] = frame.components[k][i].sub(&a.mul(&xj[i])?)?;
        }
    }
    out.stage = if j == m { Stage::Normal } else { Stage::V(j + 1) };
    Ok(out)
}

/// Normal form of a frame together with the coordinate change used.
#[derive(Debug, Clone)]
pub struct NormalForm {
    pub frame: JetFrame,
    pub change: LinearChange,
    /// Stage after each step: `V(1)`, `Z(1)`, `V(2)`, …, `normal`.
    pub trace: Vec<Stage>,
}

/// `ψ = Ψ_m ∘ Φ_m ∘ ⋯ ∘ Ψ_1 ∘ Φ_1 ∘ ρ` on the `d`-jet of `frame`.
pub fn normalize_frame(frame: &Frame, order: u64) -> Result<NormalForm, NormalFormError> {
    let raw = JetFrame::from_frame(frame, order)?;
    let (mut cur, change) = normalize_linear(&raw)?;
    let mut trace = vec![cur.stage];
    for j in 1..=cur.m() {
        cur = phi_step(&cur, j)?;
        trace.push(cur.stage);
        cur = psi_step(&cur, j)?;
        trace.push(cur.stage);
    }
    Ok(NormalForm {
        frame: cur,
        change,
        trace,
    })
}

/// Symbolic check of the `Φ_j` bracket identity
/// `p·[U X^j, X^k] = U h^{jk} - X^k(U) h^j` for every `k`, untruncated.
pub fn phi_identity_holds(frame: &JetFrame, j: usize) -> Result<bool, NormalFormError> {
    let f = frame.to_frame()?;
    let u = frame.components[j - 1][j - 1]
        .invert_unit()
        .map_err(|_| NormalFormError::NonUnit { j })?
        .into_body();
    let phase = Ambient::phase(frame.n);
    let up = u.embed(phase)?;
    let xj = f.field(j - 1);
    let hj = hamiltonian_lift(xj)?;
    let uxj = xj.scale(&u)?;
    for k in 0..frame.m() {
        if k == j - 1 {
            continue;
        }
        let xk = f.field(k);
        let lhs = hamiltonian_lift(&uxj.lie_bracket(xk)?)?;
        let hjk = hamiltonian_lift(&xj.lie_bracket(xk)?)?;
        let rhs = &(&up * &hjk) - &(&xk.apply(&u)?.embed(phase)? * &hj);
        if lhs != rhs {
            return Ok(false);
        }
    }
    Ok(true)
}

/// Symbolic check of the `Ψ_j` row/column identity
/// `p·[X'^k, X'^l] = h^{kl} - A^l_j h^{kj} - A^k_j h^{jl} + c h^j`, with the
/// explicit multiplier `c`, on the untruncated elimination.
pub fn psi_identity_holds(frame: &JetFrame, j: usize) -> Result<bool, NormalFormError> {
    let f = frame.to_frame()?;
    let m = frame.m();
    let phase = Ambient::phase(frame.n);
    let xj = f.field(j - 1);
    let hj = hamiltonian_lift(xj)?;
    let a: Vec<Polynomial> = (0..m).map(|k| frame.components[k][j - 1].body().clone()).collect();
    let primed: Vec<VectorField> = (0..m)
        .map(|k| {
            if k == j - 1 {
                Ok(xj.clone())
            } else {
                f.field(k).checked_sub(&xj.scale(&a[k])?)
            }
        })
        .collect::<Result<_, FieldError>>()?;
    let h = |x: &VectorField, y: &VectorField| -> Result<Polynomial, FieldError> {
        hamiltonian_lift(&x.lie_bracket(y)?)
    };
    for k in 0..m {
        for l in k + 1..m {
            if k == j - 1 || l == j - 1 {
                continue;
            }
            let (ak, al) = (&a[k], &a[l]);
            let lhs = h(&primed[k], &primed[l])?;
            let hkl = h(f.field(k), f.field(l))?;
            let hkj = h(f.field(k), xj)?;
            let hjl = h(xj, f.field(l))?;
            let c = &(&(&f.field(l).apply(ak)? - &f.field(k).apply(al)?) + &(ak * &xj.apply(al)?))
                - &(al * &xj.apply(ak)?);
            let rhs = &(&(&hkl - &(&al.embed(phase)? * &hkj)) - &(&ak.embed(phase)? * &hjl))
                + &(&c.embed(phase)? * &hj);
            if lhs != rhs {
                return Ok(false);
            }
        }
    }
    Ok(true)
}

/// One matched sample of the rank-preservation check.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct RankSample {
    pub x: Vec<f64>,
    pub input_dim: usize,
    pub output_dim: usize,
    /// Exact and thresholded ranks agree on both sides.
    pub conclusive: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct RankCheck {
    pub samples: Vec<RankSample>,
    pub conclusive: usize,
    pub agree: bool,
}

/// Goh kernel dimensions of the input frame at exact annihilator points
/// `(x, p)` against those of the normal form at `(L x, Bᵀ p)`.
///
/// Truncation perturbs the output by `O(|x|^{d+1})`, so samples are drawn
/// in a small box and a sample counts only when its exact rank matches the
/// rank read off minors above `10 |x|^d`.
pub fn check_rank_preservation(
    input: &Frame,
    normal: &NormalForm,
    wanted: usize,
    seed: u64,
) -> Result<RankCheck, NormalFormError> {
    let n = input.n();
    let d = normal.frame.order;
    let out_frame = normal.frame.to_frame()?;
    let goh_in = goh_matrix(input)?;
    let goh_out = goh_matrix(&out_frame)?;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut samples = Vec::new();
    let mut conclusive = 0;
    let mut agree = true;
    let mut attempts = 0;
    while conclusive < wanted && attempts < 20 * wanted.max(1) {
        attempts += 1;
        let radius = Rational::new(1.into(), 8.into());
        let x: Vec<Rational> = (0..n)
            .map(|_| &radius * Rational::new(rng.gen_range(-64i64..=64).into(), 64.into()))
            .collect();
        if x.iter().all(Zero::is_zero) {
            continue;
        }
        let basis = crate::abnormal::annihilator_basis(input, &x)?;
        if basis.len() + input.rank() != n {
            continue;
        }
        let weights: Vec<Rational> = (0..basis.len())
            .map(|_| Rational::from_integer(rng.gen_range(1..=5i64).into()))
            .collect();
        let point = annihilator_point(input, &x, &weights)?;
        let p = &point[n..];
        let y = normal.change.to_new(&x);
        let q = normal.change.covector_to_new(p);
        let mut out_point = y;
        out_point.extend(q);
        let xmax = x.iter().map(|v| v.to_f64().unwrap().abs()).fold(0.0, f64::max);
        let tau = 10.0 * xmax.powi(d as i32);
        let (ei, ri) = ranks_at(&goh_in.h, &point, tau)?;
        let (eo, ro) = ranks_at(&goh_out.h, &out_point, tau)?;
        let ok = ei == ri && eo == ro;
        let m = input.rank();
        if ok {
            conclusive += 1;
            agree &= ei == eo;
        }
        samples.push(RankSample {
            x: x.iter().map(|v| v.to_f64().unwrap()).collect(),
            input_dim: m - ei,
            output_dim: m - eo,
            conclusive: ok,
        });
    }
    Ok(RankCheck {
        samples,
        conclusive,
        agree: agree && conclusive >= wanted,
    })
}

/// Exact rank and thresholded rank of a skew matrix at a point.
fn ranks_at(h: &crate::pfaffian::SkewMatrix, point: &[Rational], tau: f64) -> Result<(usize, usize), NormalFormError> {
    let at = h.evaluate(point).map_err(AbnormalError::from)?;
    let m = at.size();
    let table = PfaffianTable::new(&at, m);
    let mut exact = 0;
    let mut robust = 0;
    for r in (2..=m).step_by(2) {
        let vals: Vec<Rational> = IndexSet::subsets(m, r)
            .into_iter()
            .map(|s| table.get(s).constant_term())
            .collect();
        if vals.iter().any(|v| !v.is_zero()) {
            exact = r;
        }
        let max = vals.iter().map(|v| v.to_f64().unwrap_or(0.0).abs()).fold(0.0, f64::max);
        if max > tau {
            robust = r;
        }
    }
    Ok((exact, robust))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exactpoly::{parse_expression, rat};
    use crate::fixtures;

    fn field(n: usize, comps: &[&str]) -> VectorField {
        let amb = Ambient::base(n);
        VectorField::base(n, comps.iter().map(|s| parse_expression(s, amb).unwrap()).collect()).unwrap()
    }

    #[test]
    fn identity_change_for_normalized_frame() {
        let f = fixtures::engel4();
        let (_, change) = normalize_linear(&JetFrame::from_frame(&f, 3).unwrap()).unwrap();
        assert!(change.is_identity());
    }

    #[test]
    fn linear_solve_in_r3() {
        let f = Frame::new(3, vec![field(3, &["1", "1", "0"]), field(3, &["0", "1", "0"])]).unwrap();
        let (jf, change) = normalize_linear(&JetFrame::from_frame(&f, 2).unwrap()).unwrap();
        assert_eq!(jf.field(0), VectorField::coordinate(3, 0));
        assert_eq!(jf.field(1), VectorField::coordinate(3, 1));
        assert_eq!(change.b[2], vec![rat(0, 1), rat(0, 1), rat(1, 1)]);
    }

    #[test]
    fn diagonal_rescale() {
        let f = Frame::new(2, vec![field(2, &["2", "0"])]).unwrap();
        let (jf, _) = normalize_linear(&JetFrame::from_frame(&f, 1).unwrap()).unwrap();
        assert_eq!(jf.field(0), VectorField::coordinate(2, 0));
    }

    #[test]
    fn phi_geometric_series() {
        let f = Frame::new(2, vec![field(2, &["1 + x1", "0"])]).unwrap();
        let (jf, _) = normalize_linear(&JetFrame::from_frame(&f, 3).unwrap()).unwrap();
        let z = phi_step(&jf, 1).unwrap();
        assert_eq!(z.field(0), VectorField::coordinate(2, 0));
        assert!(z.stage_holds());
        let (jf0, _) = normalize_linear(&JetFrame::from_frame(&f, 0).unwrap()).unwrap();
        assert_eq!(phi_step(&jf0, 1).unwrap().field(0), VectorField::coordinate(2, 0));
    }

    #[test]
    fn psi_elimination() {
        let f = Frame::new(3, vec![field(3, &["1", "0", "x2"]), field(3, &["x2", "1", "0"])]).unwrap();
        let (jf, _) = normalize_linear(&JetFrame::from_frame(&f, 3).unwrap()).unwrap();
        let z = phi_step(&jf, 1).unwrap();
        let v = psi_step(&z, 1).unwrap();
        assert_eq!(v.field(0), z.field(0));
        assert_eq!(v.field(1), field(3, &["0", "1", "0 - x2^2"]));
        assert_eq!(v.stage(), Stage::V(2));
        assert!(v.stage_holds());
    }

    #[test]
    fn stage_guard() {
        let f = fixtures::martinet();
        let raw = JetFrame::from_frame(&f, 2).unwrap();
        assert!(matches!(phi_step(&raw, 1), Err(NormalFormError::WrongStage { .. })));
    }

    #[test]
    fn fixtures_are_fixed_points() {
        for fx in fixtures::FIXTURES {
            let f = fx.frame();
            let nf = normalize_frame(&f, 4).unwrap();
            assert!(nf.change.is_identity(), "{}", fx.name);
            assert_eq!(nf.frame.to_frame().unwrap(), f, "{}", fx.name);
            assert_eq!(nf.frame.stage(), Stage::Normal);
        }
    }

    #[test]
    fn perturbed_frame_keeps_goh_rank() {
        let f = Frame::new(
            4,
            vec![
                field(4, &["1 + x2", "x3^2", "x1", "x1*x2"]),
                field(4, &["x4", "1 - x1^2", "x2*x3", "x3"]),
                field(4, &["x1*x3", "1", "1 + x4", "x2^2"]),
            ],
        )
        .unwrap();
        let nf = normalize_frame(&f, 3).unwrap();
        assert!(nf.frame.stage_holds());
        let check = check_rank_preservation(&f, &nf, 5, 7).unwrap();
        assert!(check.agree, "{check:?}");
    }

    #[test]
    fn bracket_identities() {
        let f = Frame::new(
            4,
            vec![
                field(4, &["1 + x2", "x3", "0", "x1"]),
                field(4, &["x4", "1", "x1", "0"]),
                field(4, &["x3^2", "0", "1", "x2"]),
            ],
        )
        .unwrap();
        let (v1, _) = normalize_linear(&JetFrame::from_frame(&f, 3).unwrap()).unwrap();
        assert!(phi_identity_holds(&v1, 1).unwrap());
        let z1 = phi_step(&v1, 1).unwrap();
        assert!(psi_identity_holds(&z1, 1).unwrap());
    }
}
