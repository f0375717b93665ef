//! Quadrature for `V_g f(x, ξ) = ∫ f(t) conj(g(t - x)) e^{-2πiξt} dt`.
//!
//! Three node layouts are used depending on the pair `(f, g)`:
//!
//! * Hermite expansion against a Hermite window: both factors are
//!   Schwartz functions whose Fourier transforms are again Hermite
//!   expansions, so the integrand is band-limited to within 1e-17 to
//!   `|ν| ≤ r_f + r_g`. A uniform trapezoid lattice with
//!   `1/step > |ξ| + r_f + r_g` is then exact up to that aliasing level.
//! * Hermite expansion against a compactly supported window: composite
//!   Gauss–Legendre on each smooth piece between the window's kinks.
//! * Sampled signals: trapezoid on the signal's own sample grid.

use std::f64::consts::PI;

use num_complex::Complex64;

use super::signal::{PhasePoint, Signal, SignalDesc};
use crate::quad;
use crate::specfun::WindowSpec;

const PANEL_ORDER: usize = 16;

#[derive(Debug, Clone)]
enum Method {
    Lattice { step: f64, jmin: i64, fvals: Vec<Complex64> },
    Panels { max_len: f64 },
    SignalSamples,
}

/// Precomputed quadrature layout for evaluating `V_g f` at frequencies up to
/// `|ξ| ≤ xi_max`.
#[derive(Debug, Clone)]
pub struct StftPlan<'a> {
    f: &'a Signal,
    g: &'a WindowSpec,
    method: Method,
}

impl<'a> StftPlan<'a> {
    pub fn new(f: &'a Signal, g: &'a WindowSpec, xi_max: f64) -> Self {
        let xi_max = xi_max.abs();
        let method = match (f.desc(), g.is_hermite()) {
            (SignalDesc::Sampled { .. }, _) => Method::SignalSamples,
            (SignalDesc::HermiteExpansion { .. }, true) => {
                let (_, rf) = f.effective_support();
                let (_, rg) = g.effective_support();
                let step = 1.0 / (xi_max + rf + rg + 1.0);
                let jmin = (-rf / step).ceil() as i64;
                let jmax = (rf / step).floor() as i64;
                let fvals = (jmin..=jmax).map(|j| f.eval(j as f64 * step)).collect();
                Method::Lattice { step, jmin, fvals }
            }
            (SignalDesc::HermiteExpansion { .. }, false) => {
                let (_, rf) = f.effective_support();
                let omega = 2.0 * PI * (xi_max + rf);
                Method::Panels { max_len: (6.0 / omega).min(0.5) }
            }
        };
        Self { f, g, method }
    }

    /// `(t_j, w_j f(t_j) conj(g(t_j - x)))` for all nodes with a nonzero
    /// window factor.
    fn terms(&self, x: f64) -> Vec<(f64, Complex64)> {
        let (glo, ghi) = self.g.effective_support();
        let (lo, hi) = (x + glo, x + ghi);
        match &self.method {
            Method::Lattice { step, jmin, fvals } => {
                let jmax = jmin + fvals.len() as i64 - 1;
                let a = ((lo / step).ceil() as i64).max(*jmin);
                let b = ((hi / step).floor() as i64).min(jmax);
                (a..=b)
                    .map(|j| {
                        let t = j as f64 * step;
                        let v = fvals[(j - jmin) as usize] * (step * self.g.eval(t - x));
                        (t, v)
                    })
                    .collect()
            }
            Method::Panels { max_len } => {
                let (flo, fhi) = self.f.effective_support();
                let a = lo.max(flo);
                let b = hi.min(fhi);
                if a >= b {
                    return Vec::new();
                }
                let mut cuts: Vec<f64> = self
                    .g
                    .breakpoints()
                    .into_iter()
                    .map(|p| p + x)
                    .filter(|&p| p > a && p < b)
                    .collect();
                cuts.insert(0, a);
                cuts.push(b);
                let mut out = Vec::new();
                for w in cuts.windows(2) {
                    let len = w[1] - w[0];
                    let order = if len < 0.25 * max_len { 6 } else { PANEL_ORDER };
                    for (t, wt) in quad::composite_nodes(w[0], w[1], *max_len, order) {
                        out.push((t, self.f.eval(t) * (wt * self.g.eval(t - x))));
                    }
                }
                out
            }
            Method::SignalSamples => {
                let SignalDesc::Sampled { values, half_width, step } = self.f.desc() else {
                    unreachable!("sample plan built for sampled signals only")
                };
                let last = values.len() - 1;
                let a = (((lo + half_width) / step).ceil().max(0.0)) as usize;
                let b = (((hi + half_width) / step).floor().max(-1.0)) as i64;
                if b < 0 {
                    return Vec::new();
                }
                let b = (b as usize).min(last);
                (a..=b)
                    .map(|j| {
                        let t = -half_width + j as f64 * step;
                        let w = if j == 0 || j == last { 0.5 * step } else { *step };
                        (t, values[j] * (w * self.g.eval(t - x)))
                    })
                    .collect()
            }
        }
    }

    pub fn eval(&self, z: PhasePoint) -> Complex64 {
        self.terms(z.x)
            .iter()
            .map(|&(t, v)| v * cis(-2.0 * PI * z.xi * t))
            .sum()
    }

    /// `V_g f(x, ξ0 + k·dξ)` for `k = 0..count`.
    pub fn eval_row(&self, x: f64, xi0: f64, dxi: f64, count: usize) -> Vec<Complex64> {
        let terms = self.terms(x);
        let mut out = Vec::with_capacity(count);
        if terms.is_empty() {
            out.resize(count, Complex64::new(0.0, 0.0));
            return out;
        }
        let rot: Vec<Complex64> = terms.iter().map(|&(t, _)| cis(-2.0 * PI * dxi * t)).collect();
        let mut phase: Vec<Complex64> = Vec::with_capacity(terms.len());
        for k in 0..count {
            // reseed the phasor recurrence to keep drift at rounding level
            if k % 32 == 0 {
                let xi = xi0 + k as f64 * dxi;
                phase.clear();
                phase.extend(terms.iter().map(|&(t, _)| cis(-2.0 * PI * xi * t)));
            }
            let mut acc = Complex64::new(0.0, 0.0);
            for ((&(_, v), p), r) in terms.iter().zip(phase.iter_mut()).zip(&rot) {
                acc += v * *p;
                *p *= r;
            }
            out.push(acc);
        }
        out
    }
}

#[inline]
pub(crate) fn cis(theta: f64) -> Complex64 {
    let (s, c) = theta.sin_cos();
    Complex64::new(c, s)
}

/// `V_g f(z) = ⟨f, π(z) g⟩` with `π(z) = M_ξ T_x`.
pub fn stft_eval(f: &Signal, g: &WindowSpec, z: PhasePoint) -> Complex64 {
    StftPlan::new(f, g, z.xi).eval(z)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::specfun::HermiteIndex;

    fn h(n: usize) -> WindowSpec {
        WindowSpec::hermite(HermiteIndex::new(n).unwrap()).unwrap()
    }

    #[test]
    fn gaussian_against_itself() {
        let f = Signal::hermite(0).unwrap();
        let g = h(0);
        let v0 = stft_eval(&f, &g, PhasePoint::new(0.0, 0.0));
        assert!((v0 - 1.0).norm() < 1e-14);
        let v1 = stft_eval(&f, &g, PhasePoint::new(1.0, 0.0));
        assert!((v1.norm() - (-PI / 2.0).exp()).abs() < 1e-14);
        assert!((v1.norm() - 0.207880).abs() < 1e-6);
    }

    /// |V_{h0} h0(z)| = e^{-π|z|²/2} with phase e^{-πixξ}.
    #[test]
    fn gaussian_closed_form_on_a_grid() {
        let f = Signal::hermite(0).unwrap();
        let g = h(0);
        for &x in &[-2.0, -0.5, 0.3, 1.7] {
            for &xi in &[-3.0, -1.1, 0.0, 0.8, 2.5] {
                let v = stft_eval(&f, &g, PhasePoint::new(x, xi));
                let want = cis(-PI * x * xi) * (-PI * (x * x + xi * xi) / 2.0).exp();
                assert!((v - want).norm() < 1e-13, "({x},{xi})");
            }
        }
    }

    #[test]
    fn orthogonal_hermite_gives_zero() {
        let f = Signal::hermite(1).unwrap();
        let v = stft_eval(&f, &h(0), PhasePoint::new(0.0, 0.0));
        assert!(v.norm() < 1e-14);
    }

    #[test]
    fn row_matches_pointwise() {
        let f = Signal::hermite_expansion(vec![
            Complex64::new(0.3, -0.2),
            Complex64::new(0.0, 0.5),
            Complex64::new(-0.7, 0.1),
        ])
        .unwrap();
        for g in [h(2), WindowSpec::hat(1.0).unwrap()] {
            let plan = StftPlan::new(&f, &g, 6.0);
            let row = plan.eval_row(0.4, -6.0, 0.125, 97);
            for (k, v) in row.iter().enumerate() {
                let z = PhasePoint::new(0.4, -6.0 + 0.125 * k as f64);
                assert!((v - stft_eval(&f, &g, z)).norm() < 1e-12, "k={k}");
            }
        }
    }

    /// Against brute-force adaptive integration of the defining integral.
    #[test]
    fn hat_window_matches_adaptive_oracle() {
        let f = Signal::hermite_expansion(vec![
            Complex64::new(0.5, 0.0),
            Complex64::new(0.1, 0.4),
            Complex64::new(0.0, 0.0),
            Complex64::new(-0.3, 0.2),
        ])
        .unwrap();
        let g = WindowSpec::hat(1.0).unwrap();
        for &(x, xi) in &[(0.0, 0.0), (0.7, -2.3), (-1.4, 4.9), (2.2, 0.6)] {
            let want = quad::adaptive(x - 1.0, x + 1.0, 1e-13, |t| {
                f.eval(t) * g.eval(t - x) * cis(-2.0 * PI * xi * t)
            })
            .unwrap()
            .value;
            let got = stft_eval(&f, &g, PhasePoint::new(x, xi));
            assert!((got - want).norm() < 1e-11, "({x},{xi}): {got} vs {want}");
        }
    }

    #[test]
    fn sampled_signal_matches_expansion() {
        let f = Signal::hermite_expansion(vec![Complex64::new(0.6, 0.0), Complex64::new(0.0, 0.8)])
            .unwrap();
        let fs = f.translated_samples(0.0, 6.0, 1.0 / 256.0).unwrap();
        let g = h(1);
        for &(x, xi) in &[(0.0, 0.0), (0.5, 1.5), (-1.0, -0.7)] {
            let a = stft_eval(&f, &g, PhasePoint::new(x, xi));
            let b = stft_eval(&fs, &g, PhasePoint::new(x, xi));
            assert!((a - b).norm() < 1e-10);
        }
    }
}
