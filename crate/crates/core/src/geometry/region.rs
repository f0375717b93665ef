use std::fmt;

use num_complex::Complex64;

use crate::error::{Error, Result};

/// Polynomial `p(z, z̄) = Σ c_{ab} z^a z̄^b` with coefficients listed in graded
/// lexicographic order: `1; z, z̄; z², z z̄, z̄²; …`.
#[derive(Debug, Clone, PartialEq)]
pub struct BivariatePoly {
    coeffs: Vec<Complex64>,
    // (a, b) exponent pair for every coefficient
    exps: Vec<(u32, u32)>,
}

impl BivariatePoly {
    pub fn new(coeffs: Vec<Complex64>) -> Result<Self> {
        if coeffs.is_empty() {
            return Err(Error::domain("polynomial needs at least one coefficient"));
        }
        let mut exps = Vec::with_capacity(coeffs.len());
        let mut deg = 0u32;
        'outer: loop {
            for b in 0..=deg {
                if exps.len() == coeffs.len() {
                    break 'outer;
                }
                exps.push((deg - b, b));
            }
            deg += 1;
        }
        Ok(Self { coeffs, exps })
    }

    pub fn from_real(coeffs: &[f64]) -> Result<Self> {
        Self::new(coeffs.iter().map(|&c| Complex64::new(c, 0.0)).collect())
    }

    pub fn coefficients(&self) -> &[Complex64] {
        &self.coeffs
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.iter().all(|c| c.norm() == 0.0)
    }

    pub fn eval(&self, z: Complex64) -> Complex64 {
        let zc = z.conj();
        self.coeffs
            .iter()
            .zip(&self.exps)
            .map(|(c, &(a, b))| c * z.powu(a) * zc.powu(b))
            .sum()
    }
}

/// Periodicity of a region along one axis.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum AxisPeriod {
    /// Invariant under every translation along the axis.
    Invariant,
    Period(f64),
    Aperiodic,
}

impl AxisPeriod {
    fn combine(self, other: AxisPeriod) -> AxisPeriod {
        use AxisPeriod::*;
        match (self, other) {
            (Invariant, o) | (o, Invariant) => o,
            (Aperiodic, _) | (_, Aperiodic) => Aperiodic,
            (Period(p), Period(q)) => {
                let (lo, hi) = if p <= q { (p, q) } else { (q, p) };
                let ratio = hi / lo;
                if (ratio - ratio.round()).abs() < 1e-9 {
                    Period(hi)
                } else {
                    Aperiodic
                }
            }
        }
    }
}

/// Measurable subset of the phase plane as an expression tree.
#[derive(Debug, Clone, PartialEq)]
pub enum Region {
    All,
    Empty,
    Disc { cx: f64, cy: f64, r: f64 },
    Rect { x0: f64, y0: f64, x1: f64, y1: f64 },
    /// `a x + b ξ ≥ c`
    HalfPlane { a: f64, b: f64, c: f64 },
    /// `x mod period ∈ [0, width)`
    Strips { width: f64, period: f64 },
    /// `ξ mod period ∈ [0, width)`
    HStrips { width: f64, period: f64 },
    /// `|p(z, z̄)| ≥ eps`
    LevelSet { poly: BivariatePoly, eps: f64 },
    Union(Vec<Region>),
    Intersect(Vec<Region>),
    Complement(Box<Region>),
}

impl Region {
    pub fn contains(&self, x: f64, xi: f64) -> bool {
        match self {
            Region::All => true,
            Region::Empty => false,
            Region::Disc { cx, cy, r } => (x - cx).powi(2) + (xi - cy).powi(2) <= r * r,
            Region::Rect { x0, y0, x1, y1 } => x >= *x0 && x <= *x1 && xi >= *y0 && xi <= *y1,
            Region::HalfPlane { a, b, c } => a * x + b * xi >= *c,
            Region::Strips { width, period } => x.rem_euclid(*period) < *width,
            Region::HStrips { width, period } => xi.rem_euclid(*period) < *width,
            Region::LevelSet { poly, eps } => poly.eval(Complex64::new(x, xi)).norm() >= *eps,
            Region::Union(parts) => parts.iter().any(|r| r.contains(x, xi)),
            Region::Intersect(parts) => parts.iter().all(|r| r.contains(x, xi)),
            Region::Complement(inner) => !inner.contains(x, xi),
        }
    }

    pub fn union(parts: Vec<Region>) -> Self {
        Region::Union(parts)
    }

    pub fn intersect(parts: Vec<Region>) -> Self {
        Region::Intersect(parts)
    }

    pub fn complement(inner: Region) -> Self {
        Region::Complement(Box::new(inner))
    }

    /// Periodicity along `(x, ξ)`.
    pub fn period(&self) -> (AxisPeriod, AxisPeriod) {
        use AxisPeriod::*;
        match self {
            Region::All | Region::Empty => (Invariant, Invariant),
            Region::Disc { .. } | Region::Rect { .. } | Region::LevelSet { .. } => {
                (Aperiodic, Aperiodic)
            }
            // a = 0 means invariant in x; b = 0 means invariant in ξ
            Region::HalfPlane { a, b, .. } => match (*a == 0.0, *b == 0.0) {
                (true, false) => (Invariant, Aperiodic),
                (false, true) => (Aperiodic, Invariant),
                _ => (Aperiodic, Aperiodic),
            },
            Region::Strips { period, .. } => (Period(*period), Invariant),
            Region::HStrips { period, .. } => (Invariant, Period(*period)),
            Region::Union(parts) | Region::Intersect(parts) => {
                parts.iter().fold((Invariant, Invariant), |(ax, ay), r| {
                    let (bx, by) = r.period();
                    (ax.combine(bx), ay.combine(by))
                })
            }
            Region::Complement(inner) => inner.period(),
        }
    }

    pub fn validate(&self) -> Result<()> {
        let finite = |v: &[f64]| v.iter().all(|x| x.is_finite());
        match self {
            Region::All | Region::Empty => Ok(()),
            Region::Disc { cx, cy, r } => {
                if !finite(&[*cx, *cy, *r]) || *r < 0.0 {
                    return Err(Error::domain("disc needs finite centre and r >= 0"));
                }
                Ok(())
            }
            Region::Rect { x0, y0, x1, y1 } => {
                if !finite(&[*x0, *y0, *x1, *y1]) || x1 < x0 || y1 < y0 {
                    return Err(Error::domain("rect needs x0 <= x1 and y0 <= y1"));
                }
                Ok(())
            }
            Region::HalfPlane { a, b, c } => {
                if !finite(&[*a, *b, *c]) || (*a == 0.0 && *b == 0.0) {
                    return Err(Error::domain("half-plane needs a nonzero normal"));
                }
                Ok(())
            }
            Region::Strips { width, period } | Region::HStrips { width, period } => {
                if !(*period > 0.0) || !(*width >= 0.0) || width > period {
                    return Err(Error::domain("strips need 0 <= width <= period, period > 0"));
                }
                Ok(())
            }
            Region::LevelSet { eps, .. } => {
                if !eps.is_finite() {
                    return Err(Error::domain("level-set threshold must be finite"));
                }
                Ok(())
            }
            Region::Union(parts) | Region::Intersect(parts) => {
                if parts.is_empty() {
                    return Err(Error::domain("union/intersect need at least one operand"));
                }
                parts.iter().try_for_each(Region::validate)
            }
            Region::Complement(inner) => inner.validate(),
        }
    }
}

fn fmt_list(f: &mut fmt::Formatter<'_>, head: &str, parts: &[Region]) -> fmt::Result {
    write!(f, "({head}")?;
    for p in parts {
        write!(f, " {p}")?;
    }
    write!(f, ")")
}

/// Prints the parseable prefix form.
impl fmt::Display for Region {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Region::All => write!(f, "all"),
            Region::Empty => write!(f, "empty"),
            Region::Disc { cx, cy, r } => write!(f, "(disc {cx:?} {cy:?} {r:?})"),
            Region::Rect { x0, y0, x1, y1 } => write!(f, "(rect {x0:?} {y0:?} {x1:?} {y1:?})"),
            Region::HalfPlane { a, b, c } => write!(f, "(halfplane {a:?} {b:?} {c:?})"),
            Region::Strips { width, period } => write!(f, "(strips {width:?} {period:?})"),
            Region::HStrips { width, period } => write!(f, "(hstrips {width:?} {period:?})"),
            Region::LevelSet { poly, eps } => {
                write!(f, "(levelset \"")?;
                for (k, c) in poly.coefficients().iter().enumerate() {
                    if k > 0 {
                        write!(f, " ")?;
                    }
                    if c.im == 0.0 {
                        write!(f, "{:?}", c.re)?;
                    } else {
                        write!(f, "{:?},{:?}", c.re, c.im)?;
                    }
                }
                write!(f, "\" {eps:?})")
            }
            Region::Union(parts) => fmt_list(f, "union", parts),
            Region::Intersect(parts) => fmt_list(f, "intersect", parts),
            Region::Complement(inner) => write!(f, "(complement {inner})"),
        }
    }
}
