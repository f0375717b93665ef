use num_complex::Complex64;
use rand::Rng;
use rand_distr::StandardNormal;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::specfun::{hermite_all, hermite_effective_radius, EXPANSION_CAP};

/// Largest expansion degree accepted for signals.
pub const MAX_EXPANSION_DEGREE: usize = EXPANSION_CAP;

/// Point `z = x + iξ` of the time-frequency plane.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct PhasePoint {
    pub x: f64,
    pub xi: f64,
}

impl PhasePoint {
    pub fn new(x: f64, xi: f64) -> Self {
        debug_assert!(x.is_finite() && xi.is_finite());
        Self { x, xi }
    }

    pub fn to_complex(self) -> Complex64 {
        Complex64::new(self.x, self.xi)
    }

    pub fn from_complex(z: Complex64) -> Self {
        Self::new(z.re, z.im)
    }

    pub fn dist(self, other: PhasePoint) -> f64 {
        (self.x - other.x).hypot(self.xi - other.xi)
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum SignalDesc {
    /// `f = Σ a_k h_k`.
    HermiteExpansion { coefficients: Vec<Complex64> },
    /// Samples `f(-T + j·h)`, zero outside `[-T, T]`.
    Sampled { values: Vec<Complex64>, half_width: f64, step: f64 },
}

/// A signal `f ∈ L²(ℝ)`.
#[derive(Debug, Clone, PartialEq)]
pub struct Signal {
    desc: SignalDesc,
    norm: f64,
}

impl Signal {
    pub fn hermite_expansion(coefficients: Vec<Complex64>) -> Result<Self> {
        if coefficients.is_empty() || coefficients.len() > MAX_EXPANSION_DEGREE + 1 {
            return Err(Error::domain(format!(
                "expansion needs 1..={} coefficients, got {}",
                MAX_EXPANSION_DEGREE + 1,
                coefficients.len()
            )));
        }
        if coefficients.iter().any(|c| !c.re.is_finite() || !c.im.is_finite()) {
            return Err(Error::domain("non-finite expansion coefficient"));
        }
        let norm = coefficients.iter().map(|c| c.norm_sqr()).sum::<f64>().sqrt();
        if norm == 0.0 {
            return Err(Error::domain("signal must have a nonzero coefficient"));
        }
        Ok(Self { desc: SignalDesc::HermiteExpansion { coefficients }, norm })
    }

    pub fn sampled(values: Vec<Complex64>, half_width: f64, step: f64) -> Result<Self> {
        if !(half_width > 0.0 && step > 0.0) {
            return Err(Error::domain("sampled signal needs positive T and h"));
        }
        if step > half_width / 64.0 {
            return Err(Error::domain("sampled signal needs h <= T/64"));
        }
        let last = -half_width + (values.len() as f64 - 1.0) * step;
        if values.len() < 2 || last > half_width * (1.0 + 1e-12) + 1e-12 {
            return Err(Error::domain("samples must lie inside [-T, T]"));
        }
        if values.iter().any(|c| !c.re.is_finite() || !c.im.is_finite()) {
            return Err(Error::domain("non-finite sample"));
        }
        let norm = (values.iter().map(|c| c.norm_sqr()).sum::<f64>() * step).sqrt();
        if norm == 0.0 {
            return Err(Error::domain("signal must have a nonzero sample"));
        }
        Ok(Self { desc: SignalDesc::Sampled { values, half_width, step }, norm })
    }

    pub fn from_desc(desc: SignalDesc) -> Result<Self> {
        match desc {
            SignalDesc::HermiteExpansion { coefficients } => Self::hermite_expansion(coefficients),
            SignalDesc::Sampled { values, half_width, step } => {
                Self::sampled(values, half_width, step)
            }
        }
    }

    /// The single Hermite function `h_k`.
    pub fn hermite(k: usize) -> Result<Self> {
        let mut c = vec![Complex64::new(0.0, 0.0); k + 1];
        c[k] = Complex64::new(1.0, 0.0);
        Self::hermite_expansion(c)
    }

    /// Unit-norm expansion `Σ_{k ≤ degree} a_k h_k` with i.i.d. complex
    /// Gaussian coefficients.
    pub fn random_expansion<R: Rng + ?Sized>(degree: usize, rng: &mut R) -> Result<Self> {
        let mut c: Vec<Complex64> = (0..=degree)
            .map(|_| Complex64::new(rng.sample(StandardNormal), rng.sample(StandardNormal)))
            .collect();
        let n = c.iter().map(|v| v.norm_sqr()).sum::<f64>().sqrt();
        for v in &mut c {
            *v /= n;
        }
        Self::hermite_expansion(c)
    }

    pub fn desc(&self) -> &SignalDesc {
        &self.desc
    }

    pub fn norm_l2(&self) -> f64 {
        self.norm
    }

    pub fn scaled(&self, s: f64) -> Result<Self> {
        match &self.desc {
            SignalDesc::HermiteExpansion { coefficients } => {
                Self::hermite_expansion(coefficients.iter().map(|c| c * s).collect())
            }
            SignalDesc::Sampled { values, half_width, step } => {
                Self::sampled(values.iter().map(|c| c * s).collect(), *half_width, *step)
            }
        }
    }

    pub fn is_expansion(&self) -> bool {
        matches!(self.desc, SignalDesc::HermiteExpansion { .. })
    }


    /// Interval outside which `f` is negligible (below 1e-17 per basis term).
    pub fn effective_support(&self) -> (f64, f64) {
        match &self.desc {
            SignalDesc::HermiteExpansion { coefficients } => {
                let r = hermite_effective_radius(coefficients.len() - 1);
                (-r, r)
            }
            SignalDesc::Sampled { values, half_width, step } => {
                (-half_width, -half_width + (values.len() - 1) as f64 * step)
            }
        }
    }

    pub fn eval(&self, t: f64) -> Complex64 {
        match &self.desc {
            SignalDesc::HermiteExpansion { coefficients } => {
                let k = coefficients.len() - 1;
                let mut buf = [0.0; MAX_EXPANSION_DEGREE + 1];
                hermite_all(k, t, &mut buf[..=k]);
                coefficients.iter().zip(&buf[..=k]).map(|(a, h)| a * *h).sum()
            }
            SignalDesc::Sampled { values, half_width, step } => {
                let pos = (t + half_width) / step;
                if pos < 0.0 || pos > (values.len() - 1) as f64 {
                    return Complex64::new(0.0, 0.0);
                }
                let j = (pos.floor() as usize).min(values.len() - 2);
                let frac = pos - j as f64;
                values[j] * (1.0 - frac) + values[j + 1] * frac
            }
        }
    }

    /// `T_a f`, available for expansions via sampling on a fine grid.
    pub fn translated_samples(&self, shift: f64, half_width: f64, step: f64) -> Result<Self> {
        let n = (2.0 * half_width / step).round() as usize + 1;
        let values = (0..n)
            .map(|j| self.eval(-half_width + j as f64 * step - shift))
            .collect();
        Self::sampled(values, half_width, step)
    }
}
