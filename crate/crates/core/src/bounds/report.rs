use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

/// Default slack, in natural-log units, for log-domain comparisons.
pub const LOG_SLACK: f64 = 1e-9;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Verdict {
    Pass,
    Fail,
    Informational,
}

impl Verdict {
    pub fn is_pass(self) -> bool {
        self == Verdict::Pass
    }
}

/// Serde helpers writing non-finite reals as the strings `"inf"`, `"-inf"`
/// and `"nan"`, since JSON has no encoding for them.
pub mod real {
    use serde::{Deserialize, Deserializer, Serialize, Serializer};

    #[derive(Serialize, Deserialize)]
    #[serde(untagged)]
    enum Repr {
        Num(f64),
        Text(String),
    }

    fn to_repr(v: f64) -> Repr {
        if v.is_finite() {
            Repr::Num(v)
        } else if v.is_nan() {
            Repr::Text("nan".into())
        } else if v > 0.0 {
            Repr::Text("inf".into())
        } else {
            Repr::Text("-inf".into())
        }
    }

    fn from_repr<E: serde::de::Error>(r: Repr) -> Result<f64, E> {
        match r {
            Repr::Num(v) => Ok(v),
            Repr::Text(s) => match s.as_str() {
                "inf" => Ok(f64::INFINITY),
                "-inf" => Ok(f64::NEG_INFINITY),
                "nan" => Ok(f64::NAN),
                _ => Err(E::custom(format!("expected a number, got '{s}'"))),
            },
        }
    }

    pub fn serialize<S: Serializer>(v: &f64, s: S) -> Result<S::Ok, S::Error> {
        to_repr(*v).serialize(s)
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<f64, D::Error> {
        from_repr(Repr::deserialize(d)?)
    }

    pub mod option {
        use super::*;

        pub fn serialize<S: Serializer>(v: &Option<f64>, s: S) -> Result<S::Ok, S::Error> {
            v.map(to_repr).serialize(s)
        }

        pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<Option<f64>, D::Error> {
            Option::<Repr>::deserialize(d)?.map(from_repr).transpose()
        }
    }

    pub mod map {
        use super::*;
        use std::collections::BTreeMap;

        pub fn serialize<S: Serializer>(v: &BTreeMap<String, f64>, s: S) -> Result<S::Ok, S::Error> {
            v.iter().map(|(k, x)| (k, to_repr(*x))).collect::<BTreeMap<_, _>>().serialize(s)
        }

        pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<BTreeMap<String, f64>, D::Error> {
            BTreeMap::<String, Repr>::deserialize(d)?
                .into_iter()
                .map(|(k, r)| from_repr(r).map(|v| (k, v)))
                .collect()
        }
    }
}

/// A positive quantity kept as its natural logarithm, with the linear value
/// when it is representable.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct LogValue {
    #[serde(with = "real")]
    pub ln: f64,
    #[serde(with = "real::option")]
    pub value: Option<f64>,
}

impl LogValue {
    pub fn from_ln(ln: f64) -> Self {
        Self { ln, value: linear(ln) }
    }

    pub fn log10(&self) -> f64 {
        self.ln / std::f64::consts::LN_10
    }
}

/// One checked (or merely evaluated) inequality `empirical ≤ theoretical`.
///
/// Both sides are stored as natural logarithms so that astronomically large
/// constants compare safely; the linear values are `None` when they
/// overflow.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BoundReport {
    pub name: String,
    /// The inequality in words, e.g. `"sup_D |F_k z^k| <= D_n M"`.
    pub statement: String,
    #[serde(with = "real::option")]
    pub theoretical_log: Option<f64>,
    #[serde(with = "real::option")]
    pub theoretical: Option<f64>,
    #[serde(with = "real::option")]
    pub empirical_log: Option<f64>,
    #[serde(with = "real::option")]
    pub empirical: Option<f64>,
    #[serde(with = "real::map")]
    pub inputs: BTreeMap<String, f64>,
    #[serde(with = "real::map")]
    pub details: BTreeMap<String, f64>,
    /// Slack in log units used for the verdict.
    pub tolerance: f64,
    /// When set, the checked inequality is `empirical ≥ theoretical`.
    #[serde(default)]
    pub lower_bound: bool,
    pub verdict: Verdict,
}

fn linear(log: f64) -> Option<f64> {
    let v = log.exp();
    (v.is_finite() || log == f64::NEG_INFINITY).then_some(v)
}

impl BoundReport {
    /// Builds a report with verdict `Pass` iff
    /// `empirical_log ≤ theoretical_log + tolerance`.
    pub fn compare(
        name: impl Into<String>,
        statement: impl Into<String>,
        empirical_log: f64,
        theoretical_log: f64,
        tolerance: f64,
    ) -> Self {
        let verdict = if empirical_log.is_nan() || theoretical_log.is_nan() {
            Verdict::Informational
        } else if empirical_log <= theoretical_log + tolerance {
            Verdict::Pass
        } else {
            Verdict::Fail
        };
        Self {
            name: name.into(),
            statement: statement.into(),
            theoretical_log: Some(theoretical_log),
            theoretical: linear(theoretical_log),
            empirical_log: Some(empirical_log),
            empirical: linear(empirical_log),
            inputs: BTreeMap::new(),
            details: BTreeMap::new(),
            tolerance,
            lower_bound: false,
            verdict,
        }
    }

    /// Builds a report with verdict `Pass` iff
    /// `empirical_log ≥ theoretical_log - tolerance`.
    pub fn compare_lower(
        name: impl Into<String>,
        statement: impl Into<String>,
        empirical_log: f64,
        theoretical_log: f64,
        tolerance: f64,
    ) -> Self {
        let mut r = Self::compare(name, statement, -empirical_log, -theoretical_log, tolerance);
        r = r.with_empirical_log(empirical_log).with_theoretical_log(theoretical_log);
        r.lower_bound = true;
        r
    }

    /// A report that carries values but asserts nothing.
    pub fn informational(name: impl Into<String>, statement: impl Into<String>) -> Self {
        Self {
            name: name.into(),
            statement: statement.into(),
            theoretical_log: None,
            theoretical: None,
            empirical_log: None,
            empirical: None,
            inputs: BTreeMap::new(),
            details: BTreeMap::new(),
            tolerance: 0.0,
            lower_bound: false,
            verdict: Verdict::Informational,
        }
    }

    pub fn with_theoretical_log(mut self, log: f64) -> Self {
        self.theoretical_log = Some(log);
        self.theoretical = linear(log);
        self
    }

    pub fn with_empirical_log(mut self, log: f64) -> Self {
        self.empirical_log = Some(log);
        self.empirical = linear(log);
        self
    }

    pub fn input(mut self, key: &str, v: f64) -> Self {
        self.inputs.insert(key.to_string(), v);
        self
    }

    pub fn detail(mut self, key: &str, v: f64) -> Self {
        self.details.insert(key.to_string(), v);
        self
    }

    pub fn passed(&self) -> bool {
        self.verdict.is_pass()
    }
}
