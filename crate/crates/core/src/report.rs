//! Verification records shared by every checker.

use std::collections::BTreeMap;
use std::fmt;

use serde::{Serialize, Serializer};

/// A real number or a signed infinity.
#[derive(Clone, Copy, Debug, PartialEq)]
pub enum Extended {
    Finite(f64),
    PosInf,
    NegInf,
}

impl Extended {
    pub fn is_finite(self) -> bool {
        matches!(self, Extended::Finite(_))
    }

    pub fn finite(self) -> Option<f64> {
        match self {
            Extended::Finite(x) => Some(x),
            _ => None,
        }
    }

    /// Finite value or the matching `f64` infinity (for plotting and sorting only).
    pub fn to_f64(self) -> f64 {
        match self {
            Extended::Finite(x) => x,
            Extended::PosInf => f64::INFINITY,
            Extended::NegInf => f64::NEG_INFINITY,
        }
    }

    pub fn from_f64(x: f64) -> Self {
        if x == f64::INFINITY {
            Extended::PosInf
        } else if x == f64::NEG_INFINITY {
            Extended::NegInf
        } else {
            Extended::Finite(x)
        }
    }

    /// `self - other`; `inf - inf` is treated as zero slack.
    pub fn minus(self, other: Extended) -> Extended {
        use Extended::*;
        match (self, other) {
            (Finite(a), Finite(b)) => Finite(a - b),
            (PosInf, PosInf) | (NegInf, NegInf) => Finite(0.0),
            (PosInf, _) | (_, NegInf) => PosInf,
            (NegInf, _) | (_, PosInf) => NegInf,
        }
    }

    pub fn max(self, other: Extended) -> Extended {
        if self.to_f64() >= other.to_f64() {
            self
        } else {
            other
        }
    }
}

impl fmt::Display for Extended {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Extended::Finite(x) => write!(f, "{x:e}"),
            Extended::PosInf => write!(f, "inf"),
            Extended::NegInf => write!(f, "-inf"),
        }
    }
}

impl Serialize for Extended {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        match self {
            Extended::Finite(x) if x.is_finite() => s.serialize_f64(*x),
            Extended::Finite(_) => s.serialize_str("nan"),
            Extended::PosInf => s.serialize_str("inf"),
            Extended::NegInf => s.serialize_str("-inf"),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
#[serde(untagged)]
pub enum ContextValue {
    Number(Extended),
    Integer(i64),
    Flag(bool),
    Text(String),
    List(Vec<Extended>),
}

impl From<f64> for ContextValue {
    fn from(x: f64) -> Self {
        ContextValue::Number(Extended::from_f64(x))
    }
}

impl From<Extended> for ContextValue {
    fn from(x: Extended) -> Self {
        ContextValue::Number(x)
    }
}

impl From<usize> for ContextValue {
    fn from(x: usize) -> Self {
        ContextValue::Integer(x as i64)
    }
}

impl From<bool> for ContextValue {
    fn from(x: bool) -> Self {
        ContextValue::Flag(x)
    }
}

impl From<&str> for ContextValue {
    fn from(x: &str) -> Self {
        ContextValue::Text(x.to_string())
    }
}

impl From<String> for ContextValue {
    fn from(x: String) -> Self {
        ContextValue::Text(x)
    }
}

impl From<Vec<f64>> for ContextValue {
    fn from(xs: Vec<f64>) -> Self {
        ContextValue::List(xs.into_iter().map(Extended::from_f64).collect())
    }
}

/// One checked inequality `lhs ≤ rhs` with its slack `rhs − lhs`.
///
/// Identities are recorded as `|left − right| ≤ 0` with both sides kept in
/// the context.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct BoundReport {
    pub name: String,
    /// Short label of the statement being verified, e.g. `"metric sandwich"`.
    pub anchor: String,
    pub lhs: Extended,
    pub rhs: Extended,
    pub slack: Extended,
    pub tolerance: f64,
    pub pass: bool,
    pub context: BTreeMap<String, ContextValue>,
}

impl BoundReport {
    pub fn inequality(
        name: impl Into<String>,
        anchor: impl Into<String>,
        lhs: Extended,
        rhs: Extended,
        tolerance: f64,
    ) -> Self {
        let slack = rhs.minus(lhs);
        let pass = match slack {
            Extended::Finite(s) => s >= -tolerance,
            Extended::PosInf => true,
            Extended::NegInf => false,
        };
        BoundReport {
            name: name.into(),
            anchor: anchor.into(),
            lhs,
            rhs,
            slack,
            tolerance,
            pass,
            context: BTreeMap::new(),
        }
    }

    pub fn le(name: impl Into<String>, anchor: impl Into<String>, lhs: f64, rhs: f64, tol: f64) -> Self {
        Self::inequality(name, anchor, Extended::from_f64(lhs), Extended::from_f64(rhs), tol)
    }

    pub fn identity(
        name: impl Into<String>,
        anchor: impl Into<String>,
        left: f64,
        right: f64,
        tolerance: f64,
    ) -> Self {
        Self::deviation(name, anchor, (left - right).abs(), tolerance)
            .with("left", left)
            .with("right", right)
    }

    /// `deviation ≤ 0` up to `tolerance`.
    pub fn deviation(name: impl Into<String>, anchor: impl Into<String>, deviation: f64, tolerance: f64) -> Self {
        let dev = if deviation.is_nan() { f64::INFINITY } else { deviation };
        Self::le(name, anchor, dev, 0.0, tolerance)
    }

    pub fn flag(name: impl Into<String>, anchor: impl Into<String>, ok: bool) -> Self {
        Self::le(name, anchor, if ok { 0.0 } else { 1.0 }, 0.0, 0.0)
    }

    pub fn with(mut self, key: impl Into<String>, value: impl Into<ContextValue>) -> Self {
        self.context.insert(key.into(), value.into());
        self
    }

    pub fn slack_f64(&self) -> f64 {
        self.slack.to_f64()
    }
}

/// Numerical tolerances; `scaled` multiplies all of them.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct Tolerances {
    /// Exact matrix identities (block formulas, trace identity, scaling).
    pub identity: f64,
    /// Inequalities between exactly evaluated norms.
    pub inequality: f64,
    /// Reality-structure identities of the compacts example.
    pub reality: f64,
    /// Inequalities that hold by construction up to rounding.
    pub construction: f64,
    /// Relative agreement with the distance oracles.
    pub oracle_relative: f64,
}

impl Default for Tolerances {
    fn default() -> Self {
        Tolerances {
            identity: 1e-10,
            inequality: 1e-9,
            reality: 1e-12,
            construction: 1e-12,
            oracle_relative: 0.01,
        }
    }
}

impl Tolerances {
    pub fn scaled(self, factor: f64) -> Self {
        Tolerances {
            identity: self.identity * factor,
            inequality: self.inequality * factor,
            reality: self.reality * factor,
            construction: self.construction * factor,
            oracle_relative: self.oracle_relative * factor,
        }
    }
}
