use std::f64::consts::PI;

use num_complex::Complex64;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::config::DEFAULT_TOLERANCE;
use crate::bounds::{compact_frame_bounds, BoundReport, LOG_SLACK};
use crate::error::{Error, Result};
use crate::geometry::PointSet;
use crate::quad;
use crate::specfun::{hermite_effective_radius, hermite_eval, HermiteIndex, WindowDesc, WindowSpec, EXPANSION_CAP};
use crate::tfcore::{PhasePoint, Signal, StftPlan};

/// Largest `#points · K` assembled before refusing.
const EVAL_BUDGET: usize = 4_000_000;
const EIGEN_TOL: f64 = 1e-8;
const EIGEN_MAX_ITER: usize = 1_000_000;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum PointRule {
    /// `{(s·j, s·k) + δ_{jk}}` with `δ` uniform in `[-jitter, jitter]²`,
    /// generated on `|ξ| ≤ xi_half_width` and on the `x` range where the
    /// first `K` Hermite functions meet the window.
    JitteredLattice { spacing: f64, jitter: f64, seed: u64, xi_half_width: f64 },
    Explicit { points: Vec<PhasePoint> },
}

fn default_dimension() -> usize {
    8
}

fn default_tolerance() -> f64 {
    DEFAULT_TOLERANCE
}

/// Frame operator of `{π(z_i) g}` compressed to `span{h_0, …, h_{K-1}}`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FrameExperiment {
    pub window: WindowDesc,
    pub points: PointRule,
    #[serde(default = "default_dimension")]
    pub dimension: usize,
    #[serde(default = "default_tolerance")]
    pub tolerance: f64,
}

impl FrameExperiment {
    pub fn validate(&self) -> Result<()> {
        if self.dimension == 0 || self.dimension > EXPANSION_CAP + 1 {
            return Err(Error::capability(format!("subspace dimension must lie in 1..={}", EXPANSION_CAP + 1)));
        }
        if let PointRule::JitteredLattice { spacing, jitter, xi_half_width, .. } = self.points {
            if !(spacing > 0.0) || !(xi_half_width > 0.0) {
                return Err(Error::domain("lattice spacing and frequency range must be positive"));
            }
            // one point per cell, as the frame bounds require
            if !(jitter >= 0.0 && jitter < spacing / 2.0) {
                return Err(Error::domain("jitter must lie in [0, spacing/2)"));
            }
        }
        WindowSpec::from_desc(&self.window)?;
        Ok(())
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FrameBounds {
    pub a_emp: f64,
    pub b_emp: f64,
    /// Upper bound on the frame-operator mass of the discarded points.
    pub tail: f64,
    pub a_theory: Option<f64>,
    pub b_theory: Option<f64>,
    pub points: usize,
    pub verdicts: Vec<BoundReport>,
}

impl FrameBounds {
    pub fn all_pass(&self) -> bool {
        self.verdicts.iter().all(|r| r.passed())
    }
}

/// Hermitian matrix stored row-major.
#[derive(Debug, Clone, PartialEq)]
pub struct HermitianMatrix {
    dim: usize,
    data: Vec<Complex64>,
}

impl HermitianMatrix {
    pub fn from_rows(dim: usize, data: Vec<Complex64>) -> Result<Self> {
        if data.len() != dim * dim {
            return Err(Error::domain("matrix data does not match the dimension"));
        }
        Ok(Self { dim, data })
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn get(&self, i: usize, j: usize) -> Complex64 {
        self.data[i * self.dim + j]
    }

    fn apply(&self, v: &[Complex64]) -> Vec<Complex64> {
        (0..self.dim)
            .map(|i| (0..self.dim).map(|j| self.get(i, j) * v[j]).sum())
            .collect()
    }

    /// Lower Cholesky factor, or `None` when the matrix is not positive
    /// definite to working precision.
    fn cholesky(&self) -> Option<Vec<Complex64>> {
        let n = self.dim;
        let mut l = vec![Complex64::new(0.0, 0.0); n * n];
        for j in 0..n {
            let mut d = self.get(j, j).re;
            for k in 0..j {
                d -= l[j * n + k].norm_sqr();
            }
            if !(d > 0.0) {
                return None;
            }
            let djj = d.sqrt();
            l[j * n + j] = Complex64::new(djj, 0.0);
            for i in j + 1..n {
                let mut s = self.get(i, j);
                for k in 0..j {
                    s -= l[i * n + k] * l[j * n + k].conj();
                }
                l[i * n + j] = s / djj;
            }
        }
        Some(l)
    }
}

fn normalize(v: &mut [Complex64]) -> f64 {
    let n = v.iter().map(|c| c.norm_sqr()).sum::<f64>().sqrt();
    v.iter_mut().for_each(|c| *c /= n);
    n
}

fn rayleigh(m: &HermitianMatrix, v: &[Complex64]) -> f64 {
    m.apply(v).iter().zip(v).map(|(a, b)| (b.conj() * a).re).sum()
}

/// Deterministic start vector with a component along every basis vector.
fn start_vector(n: usize) -> Vec<Complex64> {
    (0..n).map(|i| Complex64::new(1.0 + 0.1 * i as f64, 0.05 * i as f64)).collect()
}

fn iterate(m: &HermitianMatrix, mut step: impl FnMut(&[Complex64]) -> Vec<Complex64>) -> Result<f64> {
    let mut v = start_vector(m.dim);
    normalize(&mut v);
    let mut last = rayleigh(m, &v);
    for _ in 0..EIGEN_MAX_ITER {
        let mut w = step(&v);
        normalize(&mut w);
        let lam = rayleigh(m, &w);
        v = w;
        if (lam - last).abs() <= EIGEN_TOL * lam.abs().max(f64::MIN_POSITIVE) {
            return Ok(lam);
        }
        last = lam;
    }
    Err(Error::capability("eigenvalue iteration did not converge"))
}

/// Largest eigenvalue by power iteration on the Rayleigh quotient.
pub fn largest_eigenvalue(m: &HermitianMatrix) -> Result<f64> {
    iterate(m, |v| m.apply(v))
}

/// Smallest eigenvalue by inverse iteration with a Cholesky solve; 0 when
/// the matrix is singular to working precision.
pub fn smallest_eigenvalue(m: &HermitianMatrix) -> Result<f64> {
    let n = m.dim;
    let Some(l) = m.cholesky() else {
        return Ok(0.0);
    };
    iterate(m, |b| {
        let mut y = vec![Complex64::new(0.0, 0.0); n];
        for i in 0..n {
            let s: Complex64 = (0..i).map(|k| l[i * n + k] * y[k]).sum();
            y[i] = (b[i] - s) / l[i * n + i];
        }
        let mut x = vec![Complex64::new(0.0, 0.0); n];
        for i in (0..n).rev() {
            let s: Complex64 = (i + 1..n).map(|k| l[k * n + i].conj() * x[k]).sum();
            x[i] = (y[i] - s) / l[i * n + i].re;
        }
        x
    })
}

/// Envelope constants for a piecewise-linear window that vanishes at both
/// ends of its support: `(sup|g|, sup|g'|, Σ|jumps of g'|, S)`.
fn piecewise_linear_envelope(g: &WindowSpec) -> Result<(f64, f64, f64, f64)> {
    let s = g
        .compact_half_width()
        .ok_or_else(|| Error::capability("the tail bound needs a compactly supported window"))?;
    let bp = g.breakpoints();
    let vals: Vec<f64> = bp.iter().map(|&t| g.eval(t)).collect();
    if vals.first().is_none_or(|v| v.abs() > 1e-14) || vals.last().is_none_or(|v| v.abs() > 1e-14) {
        return Err(Error::capability("the tail bound needs a window vanishing at its support ends"));
    }
    let mut slopes = vec![0.0];
    slopes.extend(bp.windows(2).zip(vals.windows(2)).map(|(t, v)| (v[1] - v[0]) / (t[1] - t[0])));
    slopes.push(0.0);
    let sup_g = vals.iter().fold(0.0f64, |a, v| a.max(v.abs()));
    let sup_dg = slopes.iter().fold(0.0f64, |a, v| a.max(v.abs()));
    let jumps: f64 = slopes.windows(2).map(|w| (w[1] - w[0]).abs()).sum();
    Ok((sup_g, sup_dg, jumps, s))
}

/// Bound `c_j` with `|V_g h_j(x, ξ)| ≤ c_j / (4π²ξ²)` for every `x`, from two
/// integrations by parts: `c_j ≥ ∫|(h_j g_x)''| + Σ |h_j| |jump of g'|`.
/// Uses `h_j'' = (4π²t² - 2π(2j+1)) h_j`, `‖h_j'‖₂ = √(π(2j+1))` and
/// `|h_j| ≤ 2^{1/4}`.
fn decay_constant(j: usize, envelope: (f64, f64, f64, f64)) -> f64 {
    let (sup_g, sup_dg, jumps, _) = envelope;
    let r = hermite_effective_radius(j);
    let idx = HermiteIndex::new(j.min(crate::specfun::HERMITE_CAP)).ok();
    let second: f64 = match idx.filter(|i| i.get() == j) {
        Some(i) => quad::adaptive(-r, r, 1e-10, |t| {
            ((4.0 * PI * PI * t * t - 2.0 * PI * (2 * j + 1) as f64) * hermite_eval(i, t)).abs()
        })
        .map(|v| v.value + v.error_estimate)
        .unwrap_or(f64::INFINITY),
        // above the index cap use |h_j| ≤ 2^{1/4} on the effective support
        None => 2f64.powf(0.25) * 2.0 * r * (4.0 * PI * PI * r * r + 2.0 * PI * (2 * j + 1) as f64),
    };
    let d1 = (2.0 * r).sqrt() * (PI * (2 * j + 1) as f64).sqrt();
    second * sup_g + 2.0 * d1 * sup_dg + 2f64.powf(0.25) * jumps
}

/// Assembles `M_{jk} = Σ_i V_g h_j(z_i) conj(V_g h_k(z_i))` and its extreme
/// eigenvalues. For jittered lattices the points beyond `|ξ| = T` are
/// dropped and their contribution to the largest eigenvalue is bounded by
/// the trace of the discarded part using the `ξ^{-2}` decay of `V_g h_j`;
/// dropping points only lowers the smallest eigenvalue, so the lower
/// verdict stays conservative.
pub fn empirical_frame_bounds(exp: &FrameExperiment) -> Result<FrameBounds> {
    exp.validate()?;
    let g = WindowSpec::from_desc(&exp.window)?;
    let k = exp.dimension;
    let support = g.effective_support();
    let reach = hermite_effective_radius(k - 1);

    let (pts, xi_max, tail) = match &exp.points {
        PointRule::Explicit { points } => {
            let xi_max = points.iter().fold(0.0f64, |a, p| a.max(p.xi.abs()));
            (points.clone(), xi_max, 0.0)
        }
        &PointRule::JitteredLattice { spacing, jitter, seed, xi_half_width } => {
            // columns whose window support misses [-reach, reach] see only
            // sub-1e-17 values and are skipped
            let x_half = reach + support.0.abs().max(support.1.abs()) + jitter;
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            let set = PointSet::jittered_lattice(
                spacing,
                jitter,
                (-x_half, x_half),
                (-xi_half_width, xi_half_width),
                &mut rng,
            )?;
            let env = piecewise_linear_envelope(&g)?;
            let cols = 2.0 * (x_half / spacing).floor() + 1.0;
            let m0 = (xi_half_width / spacing).floor() + 1.0;
            let a = spacing * m0 - jitter;
            // Σ_{m ≥ m0} (s·m - J)^{-4} ≤ a^{-4} + a^{-3}/(3s), both signs of m
            let row_sum = 2.0 * (a.powi(-4) + a.powi(-3) / (3.0 * spacing));
            let cj2: f64 = (0..k).map(|j| decay_constant(j, env).powi(2)).sum();
            let tail = cols * cj2 * row_sum / (16.0 * PI.powi(4));
            (set.points, xi_half_width + jitter, tail)
        }
    };
    if pts.len().saturating_mul(k) > EVAL_BUDGET {
        return Err(Error::capability(format!(
            "{} points x K = {k} exceeds the evaluation budget {EVAL_BUDGET}",
            pts.len()
        )));
    }
    if pts.is_empty() {
        return Err(Error::domain("the point set is empty"));
    }

    let basis: Vec<Signal> = (0..k).map(Signal::hermite).collect::<Result<_>>()?;
    let plans: Vec<StftPlan> = basis.iter().map(|h| StftPlan::new(h, &g, xi_max)).collect();
    let values: Vec<Vec<Complex64>> = pts
        .par_iter()
        .map(|&z| plans.iter().map(|p| p.eval(z)).collect())
        .collect();
    let mut data = vec![Complex64::new(0.0, 0.0); k * k];
    for v in &values {
        for i in 0..k {
            for j in 0..k {
                data[i * k + j] += v[i] * v[j].conj();
            }
        }
    }
    let m = HermitianMatrix::from_rows(k, data)?;
    let b_emp = largest_eigenvalue(&m)?;
    let a_emp = smallest_eigenvalue(&m)?.min(b_emp);

    let theory = match (&exp.points, g.compact_half_width()) {
        (PointRule::JitteredLattice { spacing, .. }, Some(_)) => {
            let fr = compact_frame_bounds(&g, *spacing)?;
            fr.admissible.then_some((fr.a, fr.b))
        }
        _ => None,
    };
    let tol = exp.tolerance.ln_1p();
    let verdicts = match theory {
        Some((a, b)) => vec![
            BoundReport::compare_lower("frame_lower", "A_emp >= A_theory", a_emp.ln(), a.ln(), LOG_SLACK)
                .input("K", k as f64)
                .detail("A_emp", a_emp),
            BoundReport::compare("frame_upper", "B_emp + tail <= B_theory", (b_emp + tail).ln(), b.ln(), tol)
                .input("K", k as f64)
                .detail("B_emp", b_emp)
                .detail("tail", tail),
        ],
        None => vec![BoundReport::informational("frame_bounds", "no theoretical frame bounds apply")
            .input("K", k as f64)
            .detail("A_emp", a_emp)
            .detail("B_emp", b_emp)],
    };
    Ok(FrameBounds {
        a_emp,
        b_emp,
        tail,
        a_theory: theory.map(|t| t.0),
        b_theory: theory.map(|t| t.1),
        points: pts.len(),
        verdicts,
    })
}
