//! Reproducing kernel `⟨π(w)h_n, π(z)h_n⟩` and the disc-local reproducing
//! formula.

use std::f64::consts::PI;

use num_complex::Complex64;

use super::signal::{PhasePoint, Signal};
use super::stft::{cis, StftPlan};
use crate::error::{Error, Result};
use crate::quad;
use crate::specfun::{hermite_eval, hermite_effective_radius, laguerre_eval, nu, HermiteIndex, WindowSpec};

/// `⟨π(w)h_n, π(z)h_n⟩` by direct quadrature of
/// `∫ h_n(t - u) h_n(t - x) e^{-2πi(ξ - η)t} dt` with `z = x + iξ`,
/// `w = u + iη`. Trapezoid on a lattice fine enough to resolve the band
/// limit of the integrand.
pub fn reproducing_kernel(n: HermiteIndex, z: PhasePoint, w: PhasePoint) -> Complex64 {
    let r = hermite_effective_radius(n.get());
    let freq = z.xi - w.xi;
    let step = 1.0 / (freq.abs() + 2.0 * r + 1.0);
    let lo = (z.x - r).max(w.x - r);
    let hi = (z.x + r).min(w.x + r);
    if lo >= hi {
        return Complex64::new(0.0, 0.0);
    }
    let a = (lo / step).ceil() as i64;
    let b = (hi / step).floor() as i64;
    (a..=b)
        .map(|j| {
            let t = j as f64 * step;
            cis(-2.0 * PI * freq * t) * (hermite_eval(n, t - w.x) * hermite_eval(n, t - z.x))
        })
        .sum::<Complex64>()
        * step
}

/// Closed form `e^{-2πi(ξ-η)u} e^{-πiab} L_n(π|z-w|²) e^{-π|z-w|²/2}`
/// with `z - w = a + ib`. Cross-checked against [`reproducing_kernel`] in the
/// test suite and used as the fast path inside disc integrals.
pub fn reproducing_kernel_closed(n: HermiteIndex, z: PhasePoint, w: PhasePoint) -> Complex64 {
    let a = z.x - w.x;
    let b = z.xi - w.xi;
    let s = PI * (a * a + b * b);
    let phase = -2.0 * PI * (z.xi - w.xi) * w.x - PI * a * b;
    cis(phase) * (laguerre_eval(n.get(), s) * (-0.5 * s).exp())
}

/// Node counts of the tensor polar rule on a disc.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct PolarResolution {
    pub radial: usize,
    pub angular: usize,
}

impl PolarResolution {
    pub const DEFAULT: PolarResolution = PolarResolution { radial: 64, angular: 128 };

    pub fn doubled(self) -> Self {
        Self { radial: 2 * self.radial, angular: 2 * self.angular }
    }
}

impl Default for PolarResolution {
    fn default() -> Self {
        Self::DEFAULT
    }
}

/// Gauss–Legendre in the radius times the uniform rule in the angle.
pub(crate) fn polar_nodes(center: PhasePoint, radius: f64, res: PolarResolution) -> Vec<(PhasePoint, f64)> {
    let gl = quad::rule(res.radial);
    let dtheta = 2.0 * PI / res.angular as f64;
    let mut out = Vec::with_capacity(res.radial * res.angular);
    for (r, wr) in gl.mapped(0.0, radius) {
        for k in 0..res.angular {
            let th = k as f64 * dtheta;
            let p = PhasePoint::new(center.x + r * th.cos(), center.xi + r * th.sin());
            out.push((p, wr * r * dtheta));
        }
    }
    out
}

/// `|V_{h_n}f(z) - ν_n(R)^{-1} ∫_{D(z,R)} V_{h_n}f(w) ⟨π(w)h_n, π(z)h_n⟩ dw|`
/// at the default 64×128 polar resolution.
pub fn local_repr_residual(f: &Signal, n: HermiteIndex, radius: f64, z: PhasePoint) -> Result<f64> {
    local_repr_residual_with(f, n, radius, z, PolarResolution::DEFAULT)
}

pub fn local_repr_residual_with(
    f: &Signal,
    n: HermiteIndex,
    radius: f64,
    z: PhasePoint,
    res: PolarResolution,
) -> Result<f64> {
    if !(radius > 0.0) {
        return Err(Error::domain("local reproducing formula needs R > 0"));
    }
    if res.radial == 0 || res.angular == 0 {
        return Err(Error::domain("polar resolution must be positive"));
    }
    let g = WindowSpec::hermite(n)?;
    let plan = StftPlan::new(f, &g, z.xi.abs() + radius);
    let nu_r = nu(n.get(), radius)?;
    let mut integral = Complex64::new(0.0, 0.0);
    for (w, weight) in polar_nodes(z, radius, res) {
        integral += plan.eval(w) * reproducing_kernel_closed(n, z, w) * weight;
    }
    Ok((plan.eval(z) - integral / nu_r).norm())
}
