use std::f64::consts::PI;

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::specfun::{HermiteIndex, WindowSpec};
use crate::tfcore::{stft_eval, PhasePoint, Signal};

/// Beyond this modulus the weight `e^{π|z|²/2}` would amplify quadrature
/// noise past any useful accuracy.
pub const BARGMANN_MAX_MODULUS: f64 = 8.0;

/// True polyanalytic Bargmann transform
/// `B^{n+1}f(z) = V_{h_n}f(z̄) e^{-π(z² - z̄²)/4} e^{π|z|²/2}`.
///
/// The phase factor makes `B^1 h_0 ≡ 1`, so that `B^1` maps into entire
/// functions under the STFT convention used here; its modulus is
/// `|V_{h_n}f(z̄)| e^{π|z|²/2}` either way.
pub fn bargmann_transform(f: &Signal, n: HermiteIndex, z: Complex64) -> Result<Complex64> {
    if z.norm() > BARGMANN_MAX_MODULUS {
        return Err(Error::capability(format!(
            "|z| = {} exceeds the overflow guard {BARGMANN_MAX_MODULUS}",
            z.norm()
        )));
    }
    let g = WindowSpec::hermite(n)?;
    let v = stft_eval(f, &g, PhasePoint::new(z.re, -z.im));
    // z² - z̄² = 4i·Re z·Im z
    let phase = Complex64::from_polar(1.0, -PI * z.re * z.im);
    Ok(v * phase * (PI * z.norm_sqr() / 2.0).exp())
}
