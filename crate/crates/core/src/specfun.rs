//! Hermite functions, Laguerre polynomials, the local reproducing constant
//! `ν_n(R)` and analysis windows with their four H¹ norms.
//!
//! Hermite functions use the normalisation
//! `h_n(t) = c_n e^{πt²} (d/dt)^n e^{-2πt²}` with `c_n > 0` and `‖h_n‖₂ = 1`,
//! so `h_n(t) = (-1)^n (2π)^{1/4} ψ_n(√(2π) t)` where `ψ_n` are the
//! orthonormal physicists' Hermite functions. Evaluation goes through the
//! normalised three-term recurrence for `ψ_n`.

use std::f64::consts::PI;
use std::fmt;
use std::sync::OnceLock;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::quad;

/// Largest Hermite order accepted anywhere in the crate.
pub const HERMITE_CAP: usize = 16;
/// Largest order supported by [`hermite_all`] (signal expansions go higher
/// than windows).
pub const EXPANSION_CAP: usize = 32;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(try_from = "usize", into = "usize")]
pub struct HermiteIndex(usize);

impl HermiteIndex {
    pub fn new(n: usize) -> Result<Self> {
        if n > HERMITE_CAP {
            return Err(Error::capability(format!(
                "Hermite order {n} exceeds the supported cap {HERMITE_CAP}"
            )));
        }
        Ok(Self(n))
    }

    pub fn get(self) -> usize {
        self.0
    }
}

impl TryFrom<usize> for HermiteIndex {
    type Error = Error;
    fn try_from(n: usize) -> Result<Self> {
        Self::new(n)
    }
}

impl From<HermiteIndex> for usize {
    fn from(n: HermiteIndex) -> usize {
        n.0
    }
}

impl fmt::Display for HermiteIndex {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0)
    }
}

/// `c_n` of the Rodrigues form, computed once for all admissible `n`.
pub fn rodrigues_constant(n: HermiteIndex) -> f64 {
    static TABLE: OnceLock<Vec<f64>> = OnceLock::new();
    let table = TABLE.get_or_init(|| {
        (0..=EXPANSION_CAP)
            .map(|k| {
                // c_k = 2^{1/4} / ((2π)^{k/2} √(2^k k!))
                let mut log = 0.25 * 2f64.ln() - 0.5 * k as f64 * (2.0 * PI).ln();
                log -= 0.5 * (k as f64 * 2f64.ln() + ln_factorial(k));
                log.exp()
            })
            .collect()
    });
    table[n.get()]
}

pub(crate) fn ln_factorial(k: usize) -> f64 {
    (1..=k).map(|j| (j as f64).ln()).sum()
}

/// `h_n(t)` with unit L² norm.
pub fn hermite_eval(n: HermiteIndex, t: f64) -> f64 {
    let mut buf = [0.0; HERMITE_CAP + 1];
    hermite_all(n.get(), t, &mut buf[..=n.get()]);
    buf[n.get()]
}

/// Fills `out[k] = h_k(t)` for `k = 0..=nmax`. `out` must hold `nmax + 1`
/// values; `nmax` may go up to [`EXPANSION_CAP`].
pub fn hermite_all(nmax: usize, t: f64, out: &mut [f64]) {
    debug_assert!(nmax <= EXPANSION_CAP && out.len() > nmax);
    let u = (2.0 * PI).sqrt() * t;
    let scale = (2.0 * PI).powf(0.25);
    // ψ_0(u) = π^{-1/4} e^{-u²/2}
    let mut prev = 0.0;
    let mut cur = PI.powf(-0.25) * (-0.5 * u * u).exp();
    out[0] = scale * cur;
    for k in 0..nmax {
        let kf = k as f64;
        let next = (2.0 / (kf + 1.0)).sqrt() * u * cur - (kf / (kf + 1.0)).sqrt() * prev;
        prev = cur;
        cur = next;
        let sign = if (k + 1) % 2 == 0 { 1.0 } else { -1.0 };
        out[k + 1] = sign * scale * cur;
    }
}

/// Radius beyond which `|h_k(t)| < 1e-17` for every `k ≤ n`.
pub fn hermite_effective_radius(n: usize) -> f64 {
    static TABLE: OnceLock<Vec<f64>> = OnceLock::new();
    let table = TABLE.get_or_init(|| {
        let mut buf = [0.0; EXPANSION_CAP + 1];
        (0..=EXPANSION_CAP)
            .map(|m| {
                // past the last turning point the envelope decays monotonically
                let mut t = ((2.0 * m as f64 + 1.0) / (2.0 * PI)).sqrt();
                loop {
                    hermite_all(m, t, &mut buf);
                    if buf[..=m].iter().all(|v| v.abs() < 1e-17) {
                        break t;
                    }
                    t += 0.01;
                }
            })
            .collect()
    });
    table[n.min(EXPANSION_CAP)]
}

/// `L_n(t)` by the three-term recurrence.
pub fn laguerre_eval(n: usize, t: f64) -> f64 {
    let mut prev = 1.0;
    if n == 0 {
        return prev;
    }
    let mut cur = 1.0 - t;
    for k in 1..n {
        let kf = k as f64;
        let next = ((2.0 * kf + 1.0 - t) * cur - kf * prev) / (kf + 1.0);
        prev = cur;
        cur = next;
    }
    cur
}

/// `ν_n(R) = ∫_0^{πR²} L_n(t)² e^{-t} dt`.
pub fn nu(n: usize, radius: f64) -> Result<f64> {
    if !(radius > 0.0) || !radius.is_finite() {
        return Err(Error::domain(format!("nu requires R > 0, got {radius}")));
    }
    let upper = PI * radius * radius;
    let integral = quad::adaptive(0.0, upper, quad::DEFAULT_ABS_TOL, |t: f64| {
        let l = laguerre_eval(n, t);
        l * l * (-t).exp()
    })?;
    Ok(integral.value)
}

/// The four norms entering the jittered-lattice frame condition.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct WindowNorms {
    pub l2: f64,
    pub deriv_l2: f64,
    pub t_weighted_l2: f64,
    pub t_weighted_deriv_l2: f64,
}

/// Serialisable description of a window.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum WindowDesc {
    Hermite { n: HermiteIndex },
    Hat { half_width: f64 },
    SampledH1 { samples: Vec<f64>, half_width: f64, step: f64 },
}

#[derive(Debug, Clone, PartialEq)]
enum WindowKind {
    Hermite(HermiteIndex),
    Hat { half_width: f64 },
    SampledH1 { samples: Vec<f64>, half_width: f64, step: f64 },
}

/// An analysis window `g` with its norms computed at construction.
#[derive(Debug, Clone, PartialEq)]
pub struct WindowSpec {
    kind: WindowKind,
    norms: WindowNorms,
}

impl WindowSpec {
    pub fn hermite(n: HermiteIndex) -> Result<Self> {
        let kind = WindowKind::Hermite(n);
        let norms = hermite_norms(n)?;
        Ok(Self { kind, norms })
    }

    /// Triangle `max(0, 1 - |t|/S)` supported on `[-S, S]`.
    pub fn hat(half_width: f64) -> Result<Self> {
        if !(half_width > 0.0) || !half_width.is_finite() {
            return Err(Error::domain("hat window needs S > 0"));
        }
        let s = half_width;
        let norms = WindowNorms {
            l2: (2.0 * s / 3.0).sqrt(),
            deriv_l2: (2.0 / s).sqrt(),
            t_weighted_l2: (s * s * s / 15.0).sqrt(),
            t_weighted_deriv_l2: (2.0 * s / 3.0).sqrt(),
        };
        Ok(Self { kind: WindowKind::Hat { half_width: s }, norms })
    }

    /// Real samples `g(-S + j·h)`, interpolated linearly between nodes.
    pub fn sampled_h1(samples: Vec<f64>, half_width: f64, step: f64) -> Result<Self> {
        if samples.len() < 3 {
            return Err(Error::domain("sampled window needs at least 3 samples"));
        }
        if !(step > 0.0 && half_width > 0.0) {
            return Err(Error::domain("sampled window needs positive step and half-width"));
        }
        let last = -half_width + (samples.len() - 1) as f64 * step;
        if last > half_width * (1.0 + 1e-12) + 1e-12 {
            return Err(Error::domain("samples extend beyond [-S, S]"));
        }
        if samples.iter().any(|v| !v.is_finite()) {
            return Err(Error::domain("non-finite window sample"));
        }
        let norms = sampled_norms(&samples, half_width, step);
        if !(norms.l2 > 0.0) {
            return Err(Error::domain("window has zero norm"));
        }
        Ok(Self { kind: WindowKind::SampledH1 { samples, half_width, step }, norms })
    }

    pub fn from_desc(desc: &WindowDesc) -> Result<Self> {
        match desc {
            WindowDesc::Hermite { n } => Self::hermite(*n),
            WindowDesc::Hat { half_width } => Self::hat(*half_width),
            WindowDesc::SampledH1 { samples, half_width, step } => {
                Self::sampled_h1(samples.clone(), *half_width, *step)
            }
        }
    }

    pub fn desc(&self) -> WindowDesc {
        match &self.kind {
            WindowKind::Hermite(n) => WindowDesc::Hermite { n: *n },
            WindowKind::Hat { half_width } => WindowDesc::Hat { half_width: *half_width },
            WindowKind::SampledH1 { samples, half_width, step } => WindowDesc::SampledH1 {
                samples: samples.clone(),
                half_width: *half_width,
                step: *step,
            },
        }
    }

    /// Parses `hermite:n` or `hat:S`.
    pub fn parse(text: &str) -> Result<Self> {
        let (kind, arg) = text
            .split_once(':')
            .ok_or_else(|| Error::Parse { pos: 0, msg: format!("expected kind:arg, got {text:?}") })?;
        let bad = |msg: String| Error::Parse { pos: kind.len() + 1, msg };
        match kind.trim() {
            "hermite" => {
                let n: usize = arg.trim().parse().map_err(|e| bad(format!("{e}")))?;
                Self::hermite(HermiteIndex::new(n)?)
            }
            "hat" => {
                let s: f64 = arg.trim().parse().map_err(|e| bad(format!("{e}")))?;
                Self::hat(s)
            }
            other => Err(Error::Parse { pos: 0, msg: format!("unknown window kind {other:?}") }),
        }
    }

    pub fn norms(&self) -> WindowNorms {
        self.norms
    }

    pub fn hermite_index(&self) -> Option<HermiteIndex> {
        match self.kind {
            WindowKind::Hermite(n) => Some(n),
            _ => None,
        }
    }

    /// `Some(S)` when `supp g ⊂ [-S, S]`.
    pub fn compact_half_width(&self) -> Option<f64> {
        match &self.kind {
            WindowKind::Hermite(_) => None,
            WindowKind::Hat { half_width } | WindowKind::SampledH1 { half_width, .. } => {
                Some(*half_width)
            }
        }
    }

    /// Interval outside which `g` vanishes (to below 1e-17 for Hermite windows).
    pub fn effective_support(&self) -> (f64, f64) {
        match &self.kind {
            WindowKind::Hermite(n) => {
                let r = hermite_effective_radius(n.get());
                (-r, r)
            }
            WindowKind::Hat { half_width } => (-half_width, *half_width),
            WindowKind::SampledH1 { samples, half_width, step } => {
                (-half_width, -half_width + (samples.len() - 1) as f64 * step)
            }
        }
    }

    /// Points where `g` fails to be smooth.
    pub fn breakpoints(&self) -> Vec<f64> {
        match &self.kind {
            WindowKind::Hermite(_) => Vec::new(),
            WindowKind::Hat { half_width } => vec![-half_width, 0.0, *half_width],
            WindowKind::SampledH1 { samples, half_width, step } => {
                (0..samples.len()).map(|j| -half_width + j as f64 * step).collect()
            }
        }
    }

    /// Whether `g` is a Hermite function (smooth with Gaussian decay in time
    /// and frequency).
    pub fn is_hermite(&self) -> bool {
        matches!(self.kind, WindowKind::Hermite(_))
    }

    pub fn eval(&self, t: f64) -> f64 {
        match &self.kind {
            WindowKind::Hermite(n) => hermite_eval(*n, t),
            WindowKind::Hat { half_width } => (1.0 - t.abs() / half_width).max(0.0),
            WindowKind::SampledH1 { samples, half_width, step } => {
                let pos = (t + half_width) / step;
                if pos < 0.0 || pos > (samples.len() - 1) as f64 {
                    return 0.0;
                }
                let j = (pos.floor() as usize).min(samples.len() - 2);
                let frac = pos - j as f64;
                samples[j] * (1.0 - frac) + samples[j + 1] * frac
            }
        }
    }
}

/// The four norms of `w` (cached at construction).
pub fn window_norms(w: &WindowSpec) -> WindowNorms {
    w.norms()
}

fn hermite_norms(n: HermiteIndex) -> Result<WindowNorms> {
    let r = hermite_effective_radius(n.get()) + 1.0;
    let k = n.get();
    // h_n'(t) = √(2π)(2π)^{1/4}(-1)^n ψ_n'(u), ψ_n' = √(n/2)ψ_{n-1} - √((n+1)/2)ψ_{n+1}
    let deriv = move |t: f64| {
        let mut buf = [0.0; HERMITE_CAP + 2];
        hermite_all(k + 1, t, &mut buf[..=k + 1]);
        // buf holds h_j = (-1)^j c ψ_j; undo signs relative to h_k
        let sign_k = if k.is_multiple_of(2) { 1.0 } else { -1.0 };
        let psi = |j: usize| {
            let s = if j.is_multiple_of(2) { 1.0 } else { -1.0 };
            s * buf[j]
        };
        let lower = if k > 0 { ((k as f64) / 2.0).sqrt() * psi(k - 1) } else { 0.0 };
        let upper = (((k + 1) as f64) / 2.0).sqrt() * psi(k + 1);
        sign_k * (2.0 * PI).sqrt() * (lower - upper)
    };
    let sq = |f: &dyn Fn(f64) -> f64| -> Result<f64> {
        Ok(quad::adaptive(-r, r, quad::DEFAULT_ABS_TOL, |t| {
            let v = f(t);
            v * v
        })?
        .value
        .sqrt())
    };
    Ok(WindowNorms {
        l2: sq(&|t| hermite_eval(n, t))?,
        deriv_l2: sq(&deriv)?,
        t_weighted_l2: sq(&|t| t * hermite_eval(n, t))?,
        t_weighted_deriv_l2: sq(&|t| t * deriv(t))?,
    })
}

fn sampled_norms(samples: &[f64], half_width: f64, step: f64) -> WindowNorms {
    let n = samples.len();
    let at = |j: isize| -> f64 {
        if j < 0 || j as usize >= n {
            0.0
        } else {
            samples[j as usize]
        }
    };
    let mut acc = [0.0f64; 4];
    for j in 0..n as isize {
        let t = -half_width + j as f64 * step;
        let g = at(j);
        let d = (at(j + 1) - at(j - 1)) / (2.0 * step);
        acc[0] += g * g;
        acc[1] += d * d;
        acc[2] += t * t * g * g;
        acc[3] += t * t * d * d;
    }
    WindowNorms {
        l2: (acc[0] * step).sqrt(),
        deriv_l2: (acc[1] * step).sqrt(),
        t_weighted_l2: (acc[2] * step).sqrt(),
        t_weighted_deriv_l2: (acc[3] * step).sqrt(),
    }
}
