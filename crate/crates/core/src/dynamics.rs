//! Flows of polynomial vector fields: RK4 trajectories, abnormal lifts with
//! residual checks, divergence-ratio scans and volume distortion.

use std::fmt::Write as _;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::Serialize;
use thiserror::Error;

use crate::abnormal::{goh_matrix, AbnormalError, AbnormalGenerator};
use crate::exactpoly::{FloatPolynomial, Polynomial};
use crate::vectorfield::{FieldKind, Frame, VectorField};

#[derive(Debug, Clone, PartialEq, Error)]
pub enum DynamicsError {
    #[error("step h = {h} and horizon T = {t} must satisfy h > 0, T >= 0")]
    InvalidStep { h: f64, t: f64 },
    #[error("state is not finite after t = {last_valid}")]
    BlowUp { last_valid: f64 },
    #[error("start point has {got} coordinates, expected {expected}")]
    Dimension { expected: usize, got: usize },
    #[error("generator {0} has no base projection")]
    NoProjection(String),
    #[error("expected a base vector field")]
    NotBase,
    #[error(transparent)]
    Abnormal(#[from] AbnormalError),
}

/// Field compiled to `f64` evaluators.
#[derive(Debug, Clone)]
pub struct CompiledField {
    components: Vec<FloatPolynomial>,
    divergence: FloatPolynomial,
}

impl CompiledField {
    pub fn new(v: &VectorField) -> Result<Self, DynamicsError> {
        if v.kind() != FieldKind::Base {
            return Err(DynamicsError::NotBase);
        }
        Ok(CompiledField {
            components: v.to_float(),
            divergence: v.divergence().to_float(),
        })
    }

    pub fn dim(&self) -> usize {
        self.components.len()
    }

    pub fn eval(&self, x: &[f64]) -> Vec<f64> {
        self.components.iter().map(|c| c.eval(x)).collect()
    }

    pub fn divergence(&self, x: &[f64]) -> f64 {
        self.divergence.eval(x)
    }
}

fn norm(v: &[f64]) -> f64 {
    v.iter().map(|a| a * a).sum::<f64>().sqrt()
}

fn axpy(x: &[f64], a: f64, k: &[f64]) -> Vec<f64> {
    x.iter().zip(k).map(|(xi, ki)| xi + a * ki).collect()
}

/// Sampled solution on a uniform grid.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Trajectory {
    pub times: Vec<f64>,
    pub states: Vec<Vec<f64>>,
    /// Covectors of the lift, when one was computed.
    pub lifts: Option<Vec<Vec<f64>>>,
    /// Goh residual per state (zero when not computed).
    pub residual_b: Vec<f64>,
    /// Annihilation residual per state (zero when not computed).
    pub residual_c: Vec<f64>,
    pub h: f64,
    pub t_end: f64,
}

impl Trajectory {
    pub fn last(&self) -> &[f64] {
        self.states.last().expect("at least the initial state")
    }

    /// Arc length `∫ |x'| dt`, trapezoid rule on the field speed.
    pub fn length(&self, field: &CompiledField) -> f64 {
        let speeds: Vec<f64> = self.states.iter().map(|x| norm(&field.eval(x))).collect();
        trapezoid(&self.times, &speeds)
    }

    /// Rows `t,x1..xn,residual_b,residual_c` after a reproduction header.
    pub fn to_csv(&self, seed: Option<u64>) -> String {
        let n = self.states.first().map_or(0, Vec::len);
        let mut out = String::new();
        let seed = seed.map_or_else(|| "none".to_string(), |s| s.to_string());
        writeln!(out, "# gohkit trajectory seed={seed} h={} T={}", self.h, self.t_end).unwrap();
        let mut header = vec!["t".to_string()];
        header.extend((1..=n).map(|i| format!("x{i}")));
        header.push("residual_b".into());
        header.push("residual_c".into());
        writeln!(out, "{}", header.join(",")).unwrap();
        for (k, x) in self.states.iter().enumerate() {
            let mut row = vec![self.times[k].to_string()];
            row.extend(x.iter().map(ToString::to_string));
            row.push(self.residual_b[k].to_string());
            row.push(self.residual_c[k].to_string());
            writeln!(out, "{}", row.join(",")).unwrap();
        }
        out
    }
}

fn trapezoid(t: &[f64], f: &[f64]) -> f64 {
    t.windows(2)
        .zip(f.windows(2))
        .map(|(tw, fw)| 0.5 * (fw[0] + fw[1]) * (tw[1] - tw[0]))
        .sum()
}

fn grid(t_end: f64, h: f64) -> Result<Vec<f64>, DynamicsError> {
    if !(h > 0.0) || !(t_end >= 0.0) || !h.is_finite() || !t_end.is_finite() {
        return Err(DynamicsError::InvalidStep { h, t: t_end });
    }
    let steps = (t_end / h - 1e-9).ceil().max(0.0) as usize;
    let mut times: Vec<f64> = (0..=steps).map(|k| (k as f64 * h).min(t_end)).collect();
    if let Some(last) = times.last_mut() {
        *last = t_end;
    }
    Ok(times)
}

fn rk4(field: &CompiledField, x0: &[f64], times: &[f64]) -> Result<Vec<Vec<f64>>, DynamicsError> {
    if x0.len() != field.dim() {
        return Err(DynamicsError::Dimension {
            expected: field.dim(),
            got: x0.len(),
        });
    }
    let mut states = Vec::with_capacity(times.len());
    states.push(x0.to_vec());
    for w in times.windows(2) {
        let dt = w[1] - w[0];
        let x = states.last().unwrap();
        let k1 = field.eval(x);
        let k2 = field.eval(&axpy(x, dt / 2.0, &k1));
        let k3 = field.eval(&axpy(x, dt / 2.0, &k2));
        let k4 = field.eval(&axpy(x, dt, &k3));
        let next: Vec<f64> = (0..x.len())
            .map(|i| x[i] + dt / 6.0 * (k1[i] + 2.0 * k2[i] + 2.0 * k3[i] + k4[i]))
            .collect();
        if next.iter().any(|v| !v.is_finite()) {
            return Err(DynamicsError::BlowUp { last_valid: w[0] });
        }
        states.push(next);
    }
    Ok(states)
}

/// Classical fixed-step RK4 from `x0` over `[0, T]`.
pub fn integrate_field(v: &VectorField, x0: &[f64], t_end: f64, h: f64) -> Result<Trajectory, DynamicsError> {
    let field = CompiledField::new(v)?;
    let times = grid(t_end, h)?;
    let states = rk4(&field, x0, &times)?;
    let len = states.len();
    Ok(Trajectory {
        times,
        states,
        lifts: None,
        residual_b: vec![0.0; len],
        residual_c: vec![0.0; len],
        h,
        t_end,
    })
}

/// Outcome of the residual checks along an abnormal trajectory.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Certification {
    /// Horizontality holds by construction: `Z` is a combination of the frame.
    pub horizontal_by_construction: bool,
    pub max_residual_b: f64,
    pub max_residual_c: f64,
    /// Steps where residual (b) exceeded `100 ε` times the local magnitude.
    pub violations: usize,
    pub first_violation_t: Option<f64>,
    pub certified: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct AbnormalTrajectory {
    pub generator: String,
    pub trajectory: Trajectory,
    pub certification: Certification,
}

/// Integrate `Z_I` and lift with `p_n = 1`, `p_i = -A_i(x)`. Residual (b) is
/// `|H̃(x) u|_∞` with `u` the frame coefficients of `Z`, residual (c) is
/// `max_i |p · X^i(x)|`.
pub fn abnormal_trajectory(
    frame: &Frame,
    g: &AbnormalGenerator,
    x0: &[f64],
    t_end: f64,
    h: f64,
) -> Result<AbnormalTrajectory, DynamicsError> {
    let a = frame.normal_form().ok_or(AbnormalError::NoNormalForm)?;
    let z = g.z.as_ref().ok_or_else(|| DynamicsError::NoProjection(g.id()))?;
    let n = frame.n();
    let m = frame.rank();
    let mut traj = integrate_field(z, x0, t_end, h)?;
    let reduced = goh_matrix(frame)?.reduced.ok_or(AbnormalError::NoNormalForm)?;
    let hf: Vec<Vec<FloatPolynomial>> = reduced
        .rows()
        .iter()
        .map(|r| r.iter().map(Polynomial::to_float).collect())
        .collect();
    let uf: Vec<FloatPolynomial> = z.components()[..m].iter().map(Polynomial::to_float).collect();
    let af: Vec<FloatPolynomial> = a.iter().map(Polynomial::to_float).collect();
    let fields: Vec<Vec<FloatPolynomial>> = frame.fields().iter().map(VectorField::to_float).collect();
    let mut lifts = Vec::with_capacity(traj.states.len());
    let mut cert = Certification {
        horizontal_by_construction: true,
        max_residual_b: 0.0,
        max_residual_c: 0.0,
        violations: 0,
        first_violation_t: None,
        certified: true,
    };
    for (k, x) in traj.states.iter().enumerate() {
        let u: Vec<f64> = uf.iter().map(|p| p.eval(x)).collect();
        let u_abs: Vec<f64> = uf.iter().map(|p| p.eval_abs(x)).collect();
        let mut res_b: f64 = 0.0;
        let mut tol: f64 = 0.0;
        for i in 0..m {
            let mut s = 0.0;
            let mut mag = 0.0;
            for j in 0..m {
                s += hf[i][j].eval(x) * u[j];
                mag += hf[i][j].eval_abs(x) * u_abs[j];
            }
            res_b = res_b.max(s.abs());
            tol = tol.max(100.0 * f64::EPSILON * mag);
        }
        let mut p: Vec<f64> = af.iter().map(|ai| -ai.eval(x)).collect();
        p.push(1.0);
        let res_c = fields
            .iter()
            .map(|xi| xi.iter().zip(&p).map(|(c, pk)| c.eval(x) * pk).sum::<f64>().abs())
            .fold(0.0, f64::max);
        if res_b > tol || res_c > 100.0 * f64::EPSILON * (1.0 + p.iter().map(|v| v.abs()).sum::<f64>()) {
            cert.violations += 1;
            cert.first_violation_t.get_or_insert(traj.times[k]);
        }
        cert.max_residual_b = cert.max_residual_b.max(res_b);
        cert.max_residual_c = cert.max_residual_c.max(res_c);
        traj.residual_b[k] = res_b;
        traj.residual_c[k] = res_c;
        debug_assert_eq!(p.len(), n);
        lifts.push(p);
    }
    cert.certified = cert.violations == 0;
    traj.lifts = Some(lifts);
    Ok(AbnormalTrajectory {
        generator: g.id(),
        trajectory: traj,
        certification: cert,
    })
}

/// Empirical `sup |div Z| / |Z|` over a box, skipping `|Z| < cutoff`.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct DivergenceScan {
    pub lo: f64,
    pub hi: f64,
    pub samples: usize,
    pub seed: u64,
    pub cutoff: f64,
    pub ratio_sup: f64,
    /// Point attaining `ratio_sup`.
    pub argmax: Option<Vec<f64>>,
    pub evaluated: usize,
    /// Samples with `|Z| < cutoff`.
    pub offenders: usize,
    pub offender_fraction: f64,
    /// First few excluded points.
    pub offender_points: Vec<Vec<f64>>,
}

/// Uniform points in `[lo, hi]^n`.
pub fn sample_box(n: usize, lo: f64, hi: f64, count: usize, seed: u64) -> Vec<Vec<f64>> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    (0..count)
        .map(|_| (0..n).map(|_| rng.gen_range(lo..=hi)).collect())
        .collect()
}

pub fn divergence_ratio_scan(
    z: &VectorField,
    lo: f64,
    hi: f64,
    samples: usize,
    seed: u64,
    cutoff: f64,
) -> Result<DivergenceScan, DynamicsError> {
    let field = CompiledField::new(z)?;
    let points = sample_box(field.dim(), lo, hi, samples, seed);
    let mut scan = DivergenceScan {
        lo,
        hi,
        samples,
        seed,
        cutoff,
        ratio_sup: 0.0,
        argmax: None,
        evaluated: 0,
        offenders: 0,
        offender_fraction: 0.0,
        offender_points: Vec::new(),
    };
    for x in points {
        let zn = norm(&field.eval(&x));
        if zn < cutoff {
            scan.offenders += 1;
            if scan.offender_points.len() < 8 {
                scan.offender_points.push(x);
            }
            continue;
        }
        scan.evaluated += 1;
        let ratio = field.divergence(&x).abs() / zn;
        if ratio > scan.ratio_sup || scan.argmax.is_none() {
            scan.ratio_sup = ratio.max(scan.ratio_sup);
            scan.argmax = Some(x);
        }
    }
    scan.offender_fraction = if samples == 0 {
        0.0
    } else {
        scan.offenders as f64 / samples as f64
    };
    Ok(scan)
}

/// Liouville weights `exp(∫ div Z)` along the flow of each cloud point.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct VolumeReport {
    pub times: Vec<f64>,
    /// Minimum weight over the cloud at each time.
    pub min_weight: Vec<f64>,
    pub final_weights: Vec<f64>,
    /// `max(scan estimate, sup |div Z|/|Z| along the trajectories)`.
    pub k_hat: f64,
    /// Longest trajectory length.
    pub c_hat: f64,
    /// `exp(-k_hat c_hat)`.
    pub bound: f64,
    pub satisfied: bool,
}

/// Weights by the trapezoid rule on the RK4 grid; the bound is checked with
/// relative slack `tol`.
pub fn volume_distortion(
    z: &VectorField,
    cloud: &[Vec<f64>],
    t_end: f64,
    h: f64,
    scan_k: f64,
    tol: f64,
) -> Result<VolumeReport, DynamicsError> {
    let field = CompiledField::new(z)?;
    let times = grid(t_end, h)?;
    struct Run {
        weights: Vec<f64>,
        ratio: f64,
        length: f64,
    }
    let runs: Vec<Run> = cloud
        .par_iter()
        .map(|x0| {
            let states = rk4(&field, x0, &times)?;
            let divs: Vec<f64> = states.iter().map(|x| field.divergence(x)).collect();
            let speeds: Vec<f64> = states.iter().map(|x| norm(&field.eval(x))).collect();
            let mut acc = 0.0;
            let mut weights = vec![1.0];
            for k in 1..times.len() {
                acc += 0.5 * (divs[k - 1] + divs[k]) * (times[k] - times[k - 1]);
                weights.push(acc.exp());
            }
            let ratio = divs
                .iter()
                .zip(&speeds)
                .map(|(d, s)| if *d == 0.0 { 0.0 } else { d.abs() / s })
                .fold(0.0, f64::max);
            Ok(Run {
                weights,
                ratio,
                length: trapezoid(&times, &speeds),
            })
        })
        .collect::<Result<_, DynamicsError>>()?;
    let min_weight: Vec<f64> = (0..times.len())
        .map(|k| runs.iter().map(|r| r.weights[k]).fold(f64::INFINITY, f64::min))
        .collect();
    let k_hat = runs.iter().map(|r| r.ratio).fold(scan_k, f64::max);
    let c_hat = runs.iter().map(|r| r.length).fold(0.0, f64::max);
    let bound = (-k_hat * c_hat).exp();
    let final_min = min_weight.last().copied().unwrap_or(1.0);
    Ok(VolumeReport {
        final_weights: runs.iter().map(|r| *r.weights.last().unwrap()).collect(),
        satisfied: runs.is_empty() || final_min >= bound * (1.0 - tol),
        times,
        min_weight,
        k_hat,
        c_hat,
        bound,
    })
}
