//! Sampling the kernel-dimension strata of a frame.
//!
//! Generic points come from a rational grid in a box. Deeper strata are
//! sampled on the common zero set of the reduced minors of the current rank:
//! first exactly, by restricting the minors to a random coordinate line and
//! solving the squarefree part of their gcd, then by a float Gauss-Newton
//! projection when no line yields a root.

use std::collections::BTreeMap;

use num_traits::{ToPrimitive, Zero};
use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Serialize, Serializer};

use super::univariate::{rationalize, Root, UnivariatePolynomial};
use super::{annihilator_basis, annihilator_point, goh_matrix, AbnormalError, GohMatrix};
use crate::exactpoly::{rational_from_f64, FloatPolynomial, Polynomial, Rational};
use crate::linalg::{float_rank, pinv_solve};
use crate::pfaffian::{skew_rank_with_table, IndexSet, PfaffianTable, SkewMatrix};
use crate::linalg::rational_rank;
use crate::vectorfield::{Frame, VectorField};

/// Grid resolution of sampled coordinates: `lo + (hi - lo) k / GRID`.
pub const GRID: i64 = 1024;

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct StratifyConfig {
    pub lo: f64,
    pub hi: f64,
    pub samples: usize,
    pub seed: u64,
    /// Relative singular-value threshold for float ranks.
    pub float_tol: f64,
    /// Points requested on each vanishing locus.
    pub locus_samples: usize,
    /// Bracket length used to decide whether a witness is step-2 generating.
    pub bracket_depth: usize,
}

impl StratifyConfig {
    pub fn new(seed: u64) -> Self {
        StratifyConfig {
            lo: -1.0,
            hi: 1.0,
            samples: 256,
            seed,
            float_tol: 1e-8,
            locus_samples: 32,
            bracket_depth: 2,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Witness {
    pub x: Vec<f64>,
    #[serde(serialize_with = "ser_opt_rationals")]
    pub x_exact: Option<Vec<Rational>>,
    pub kernel_dim: usize,
    /// Rank decided in exact arithmetic.
    pub exact: bool,
    /// Found on a vanishing locus rather than by generic sampling.
    pub on_locus: bool,
    /// Brackets of length `<= bracket_depth` span the tangent space here.
    pub step2_generating: bool,
}

fn ser_opt_rationals<S: Serializer>(v: &Option<Vec<Rational>>, s: S) -> Result<S::Ok, S::Error> {
    v.as_ref()
        .map(|xs| xs.iter().map(ToString::to_string).collect::<Vec<_>>())
        .serialize(s)
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Level {
    pub dim: usize,
    pub rank: usize,
    /// Minors of size `rank`; at least one is nonzero on this stratum and
    /// all vanish on the deeper ones.
    #[serde(serialize_with = "ser_minors")]
    pub minors: Vec<(IndexSet, Polynomial)>,
    pub witnesses: Vec<Witness>,
}

fn ser_minors<S: Serializer>(v: &[(IndexSet, Polynomial)], s: S) -> Result<S::Ok, S::Error> {
    v.iter()
        .filter(|(_, p)| !p.is_zero())
        .map(|(i, p)| (i.labels(), p.to_string()))
        .collect::<Vec<_>>()
        .serialize(s)
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Stratification {
    pub n: usize,
    pub m: usize,
    pub dims: Vec<usize>,
    pub ranks: Vec<usize>,
    pub levels: Vec<Level>,
    pub generic_samples: usize,
    /// Witnesses at which the `d <= m - 2` bound was asserted.
    pub bound_checked: usize,
    pub config: StratifyConfig,
}

impl Stratification {
    pub fn level(&self, dim: usize) -> Option<&Level> {
        self.levels.iter().find(|l| l.dim == dim)
    }
}

struct Ctx<'a> {
    frame: &'a Frame,
    goh: GohMatrix,
    cfg: &'a StratifyConfig,
    lo: Rational,
    span: Rational,
    reduced_float: Option<Vec<Vec<FloatPolynomial>>>,
    brackets: Vec<VectorField>,
    brackets_float: Vec<Vec<FloatPolynomial>>,
}

impl Ctx<'_> {
    fn grid_point(&self, rng: &mut ChaCha8Rng) -> Vec<Rational> {
        (0..self.frame.n())
            .map(|_| {
                let k = rng.gen_range(0..=GRID);
                &self.lo + &self.span * Rational::new(k.into(), GRID.into())
            })
            .collect()
    }

    /// Exact kernel dimension at a base point; `None` if the fields are
    /// dependent there.
    fn exact_dim(&self, x: &[Rational], rng: &mut ChaCha8Rng) -> Result<Option<usize>, AbnormalError> {
        let m = self.frame.rank();
        let at = match &self.goh.reduced {
            Some(red) => red.evaluate(x)?,
            None => {
                let basis = annihilator_basis(self.frame, x)?;
                if basis.len() != self.frame.n() - m {
                    return Ok(None);
                }
                let weights: Vec<Rational> = (0..basis.len())
                    .map(|_| Rational::from_integer(rng.gen_range(1..=7i64).into()))
                    .collect();
                let point = annihilator_point(self.frame, x, &weights)?;
                self.goh.h.evaluate(&point)?
            }
        };
        Ok(Some(m - skew_rank_with_table(&PfaffianTable::new(&at, m))))
    }

    fn float_dim(&self, x: &[f64]) -> Option<usize> {
        let red = self.reduced_float.as_ref()?;
        let rows: Vec<Vec<f64>> = red.iter().map(|r| r.iter().map(|p| p.eval(x)).collect()).collect();
        Some(self.frame.rank() - float_rank(&rows, self.cfg.float_tol))
    }

    fn step2(&self, x: &[Rational]) -> bool {
        let rows: Option<Vec<Vec<Rational>>> = self.brackets.iter().map(|f| f.eval_rational(x).ok()).collect();
        rows.is_some_and(|rows| rational_rank(&rows) == self.frame.n())
    }

    /// Float version for approximate witnesses, at the same tolerance as
    /// their kernel dimension.
    fn step2_float(&self, x: &[f64]) -> bool {
        let rows: Vec<Vec<f64>> = self
            .brackets_float
            .iter()
            .map(|f| f.iter().map(|c| c.eval(x)).collect())
            .collect();
        float_rank(&rows, self.cfg.float_tol) == self.frame.n()
    }

    fn witness(&self, x: Vec<Rational>, exact_dim: usize, on_locus: bool) -> Witness {
        Witness {
            x: x.iter().map(|v| v.to_f64().unwrap_or(f64::NAN)).collect(),
            step2_generating: self.step2(&x),
            x_exact: Some(x),
            kernel_dim: exact_dim,
            exact: true,
            on_locus,
        }
    }

    /// One attempt at a point where every equation vanishes.
    fn locus_point(&self, eqs: &[Polynomial], rng: &mut ChaCha8Rng) -> Result<Option<Witness>, AbnormalError> {
        let n = self.frame.n();
        let x0 = self.grid_point(rng);
        let mut vars: Vec<usize> = (0..n).filter(|&v| eqs.iter().any(|e| e.depends_on(v))).collect();
        vars.shuffle(rng);
        for &v in &vars {
            let mut fixed: Vec<Option<Rational>> = x0.iter().cloned().map(Some).collect();
            fixed[v] = None;
            let mut g: Option<UnivariatePolynomial> = None;
            let mut dead = false;
            for e in eqs {
                let u = UnivariatePolynomial::from_polynomial(&e.partial_eval(&fixed)?, v)
                    .expect("all other variables fixed");
                if u.is_zero() {
                    continue;
                }
                if u.degree() == Some(0) {
                    dead = true;
                    break;
                }
                g = Some(match g {
                    None => u,
                    Some(prev) => prev.gcd(&u),
                });
            }
            if dead {
                continue;
            }
            let roots = match g {
                None => vec![Root::Exact(x0[v].clone())],
                Some(g) => g.squarefree().real_roots(),
            };
            let Some(root) = roots.choose(rng).cloned() else {
                continue;
            };
            match root {
                Root::Exact(t) => {
                    let mut x = x0.clone();
                    x[v] = t;
                    if let Some(d) = self.exact_dim(&x, rng)? {
                        return Ok(Some(self.witness(x, d, true)));
                    }
                }
                Root::Float(t) => {
                    let mut xf: Vec<f64> = x0.iter().map(|q| q.to_f64().unwrap_or(f64::NAN)).collect();
                    xf[v] = t;
                    if let Some(w) = self.float_witness(xf, eqs) {
                        return Ok(Some(w));
                    }
                }
            }
        }
        let xf: Vec<f64> = x0.iter().map(|q| q.to_f64().unwrap_or(f64::NAN)).collect();
        Ok(self.newton_project(xf, eqs).and_then(|x| self.float_witness(x, eqs)))
    }

    /// Float witness; promoted to exact when a nearby rational point lies on
    /// the locus.
    fn float_witness(&self, x: Vec<f64>, eqs: &[Polynomial]) -> Option<Witness> {
        let approx: Option<Vec<Rational>> = x.iter().map(|&v| rationalize(v, 1 << 20)).collect();
        if let Some(q) = &approx {
            let on = eqs.iter().all(|e| e.eval_rational(q).is_ok_and(|v| v.is_zero()));
            if on {
                let mut rng = ChaCha8Rng::seed_from_u64(self.cfg.seed);
                if let Ok(Some(d)) = self.exact_dim(q, &mut rng) {
                    return Some(self.witness(q.clone(), d, true));
                }
            }
        }
        let d = self.float_dim(&x)?;
        Some(Witness {
            step2_generating: self.step2_float(&x),
            x,
            x_exact: None,
            kernel_dim: d,
            exact: false,
            on_locus: true,
        })
    }

    /// Gauss-Newton on `min Σ f_i^2` with a pseudo-inverse step.
    fn newton_project(&self, mut x: Vec<f64>, eqs: &[Polynomial]) -> Option<Vec<f64>> {
        let n = x.len();
        let fs: Vec<FloatPolynomial> = eqs.iter().map(Polynomial::to_float).collect();
        let grads: Vec<Vec<FloatPolynomial>> = eqs
            .iter()
            .map(|e| (0..n).map(|v| e.partial(v).expect("slot").to_float()).collect())
            .collect();
        for _ in 0..100 {
            let r: Vec<f64> = fs.iter().map(|f| f.eval(&x)).collect();
            let scale: f64 = fs.iter().map(|f| f.eval_abs(&x)).fold(1e-300, f64::max);
            let res = r.iter().fold(0.0f64, |a, v| a.max(v.abs()));
            if !res.is_finite() {
                return None;
            }
            if res <= 1e-14 * scale {
                return Some(x);
            }
            let jac: Vec<Vec<f64>> = grads.iter().map(|g| g.iter().map(|p| p.eval(&x)).collect()).collect();
            let step = pinv_solve(&jac, &r)?;
            for (xi, si) in x.iter_mut().zip(&step) {
                *xi -= si;
            }
        }
        None
    }
}

/// Sample kernel dimensions of the Goh matrix on the annihilator and refine
/// along the vanishing loci of Pfaffian minors (corank-1 frames only).
pub fn stratify(frame: &Frame, cfg: &StratifyConfig) -> Result<Stratification, AbnormalError> {
    if !(cfg.lo < cfg.hi) || cfg.samples == 0 {
        return Err(AbnormalError::Sampling(format!(
            "degenerate sampling box [{}, {}] with {} samples",
            cfg.lo, cfg.hi, cfg.samples
        )));
    }
    let lo = rational_from_f64(cfg.lo).ok_or_else(|| AbnormalError::Sampling("bad bound".into()))?;
    let hi = rational_from_f64(cfg.hi).ok_or_else(|| AbnormalError::Sampling("bad bound".into()))?;
    let goh = goh_matrix(frame)?;
    let brackets = frame.brackets_up_to(cfg.bracket_depth)?;
    let reduced_float = goh.reduced.as_ref().map(|red| {
        red.rows()
            .iter()
            .map(|r| r.iter().map(Polynomial::to_float).collect())
            .collect()
    });
    let ctx = Ctx {
        frame,
        goh,
        cfg,
        span: &hi - &lo,
        lo,
        reduced_float,
        brackets_float: brackets.iter().map(VectorField::to_float).collect(),
        brackets,
    };
    let m = frame.rank();

    let generic: Vec<Option<Witness>> = (0..cfg.samples)
        .into_par_iter()
        .map(|k| {
            let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed);
            rng.set_stream(k as u64);
            let x = ctx.grid_point(&mut rng);
            Ok(ctx.exact_dim(&x, &mut rng)?.map(|d| ctx.witness(x, d, false)))
        })
        .collect::<Result<_, AbnormalError>>()?;
    let generic: Vec<Witness> = generic.into_iter().flatten().collect();
    if generic.is_empty() {
        return Err(AbnormalError::Sampling("no sample with independent fields".into()));
    }

    let mut by_dim: BTreeMap<usize, Vec<Witness>> = BTreeMap::new();
    for w in &generic {
        by_dim.entry(w.kernel_dim).or_default().push(w.clone());
    }

    if let Some(red) = &ctx.goh.reduced {
        let table = PfaffianTable::new(red, m);
        let mut d = *by_dim.keys().next().expect("nonempty");
        let mut pass = 1u64;
        while m - d >= 2 {
            let r = m - d;
            let eqs: Vec<Polynomial> = table
                .minors(r)
                .into_iter()
                .map(|(_, p)| p)
                .filter(|p| !p.is_zero())
                .collect();
            if eqs.iter().any(Polynomial::is_constant) {
                break;
            }
            let attempts = 8 * cfg.locus_samples.max(1);
            let found: Vec<Option<Witness>> = (0..attempts)
                .into_par_iter()
                .map(|k| {
                    let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed);
                    rng.set_stream((pass << 32) | k as u64);
                    ctx.locus_point(&eqs, &mut rng)
                })
                .collect::<Result<_, AbnormalError>>()?;
            let found: Vec<Witness> = found
                .into_iter()
                .flatten()
                .filter(|w| w.kernel_dim > d)
                .take(cfg.locus_samples)
                .collect();
            let Some(next) = found.iter().map(|w| w.kernel_dim).min() else {
                break;
            };
            for w in found {
                by_dim.entry(w.kernel_dim).or_default().push(w);
            }
            d = next;
            pass += 1;
        }
    }

    let mut levels = Vec::new();
    let mut bound_checked = 0;
    let mut index = 0;
    for (dim, witnesses) in by_dim {
        let rank = m - dim;
        for w in &witnesses {
            if !(m - w.kernel_dim).is_multiple_of(2) {
                return Err(AbnormalError::Invariant {
                    witness: index,
                    message: format!("kernel dimension {} has the wrong parity for m = {m}", w.kernel_dim),
                });
            }
            if w.step2_generating {
                bound_checked += 1;
                if w.kernel_dim + 2 > m {
                    return Err(AbnormalError::Invariant {
                        witness: index,
                        message: format!("kernel dimension {} exceeds m - 2 = {}", w.kernel_dim, m as i64 - 2),
                    });
                }
            }
            index += 1;
        }
        let minors = minors_for(&ctx, rank);
        levels.push(Level {
            dim,
            rank,
            minors,
            witnesses,
        });
    }
    Ok(Stratification {
        n: frame.n(),
        m,
        dims: levels.iter().map(|l| l.dim).collect(),
        ranks: levels.iter().map(|l| l.rank).collect(),
        levels,
        generic_samples: generic.len(),
        bound_checked,
        config: cfg.clone(),
    })
}

fn minors_for(ctx: &Ctx<'_>, rank: usize) -> Vec<(IndexSet, Polynomial)> {
    let matrix: &SkewMatrix = ctx.goh.reduced.as_ref().unwrap_or(&ctx.goh.h);
    if rank == 0 {
        return vec![(IndexSet::EMPTY, Polynomial::one(matrix.ambient()))];
    }
    PfaffianTable::new(matrix, rank).minors(rank)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixtures;

    fn cfg(seed: u64) -> StratifyConfig {
        StratifyConfig {
            samples: 32,
            locus_samples: 4,
            ..StratifyConfig::new(seed)
        }
    }

    #[test]
    fn engel_single_stratum() {
        let s = stratify(&fixtures::engel4(), &cfg(3)).unwrap();
        assert_eq!(s.dims, vec![1]);
        assert!(s.levels[0].witnesses.iter().all(|w| w.exact));
    }

    #[test]
    fn dim6_cubic_two_strata() {
        let s = stratify(&fixtures::dim6_cubic(), &cfg(11)).unwrap();
        assert_eq!(s.dims, vec![1, 3]);
        let deep = s.level(3).unwrap();
        assert!(deep.witnesses.iter().any(|w| w.exact && w.on_locus));
        for w in &deep.witnesses {
            assert!((w.x[1] + w.x[2]).abs() < 1e-12);
        }
    }

    #[test]
    fn martinet_surface_is_reached() {
        let s = stratify(&fixtures::martinet(), &cfg(5)).unwrap();
        assert_eq!(s.dims, vec![0, 2]);
        let deep = s.level(2).unwrap();
        assert!(deep.witnesses.iter().all(|w| w.x[0] == 0.0 && !w.step2_generating));
    }

    #[test]
    fn deterministic_for_seed() {
        let a = stratify(&fixtures::dim4(), &cfg(9)).unwrap();
        let b = stratify(&fixtures::dim4(), &cfg(9)).unwrap();
        assert_eq!(a, b);
    }

    #[test]
    fn degenerate_box() {
        let mut c = cfg(1);
        c.hi = c.lo;
        assert!(matches!(stratify(&fixtures::martinet(), &c), Err(AbnormalError::Sampling(_))));
    }
}
