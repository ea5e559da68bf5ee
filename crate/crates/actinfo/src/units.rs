//! Information units and exact conversions between them.
//!
//! A value of `b` bits, `n` nats, and `x` base-`N` units all describe the
//! same quantity when `2^b = e^n = N^x`, so conversion is a rescaling by
//! the ratio of log-bases. Every unit has base > 1, which keeps the order
//! of values invariant under conversion.

use std::fmt;
use std::str::FromStr;

use crate::error::{Error, Result};

/// Logarithm base used to measure information.
///
/// `NIts(N)` is the base-`N` unit: one N-it is the information in a uniform
/// choice among `N` outcomes. `N` must be an integer ≥ 2; construct through
/// [`InfoUnit::nits`] or [`FromStr`] to keep that invariant.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum InfoUnit {
    Bits,
    Nats,
    NIts(u32),
}

impl InfoUnit {
    /// Base-`n` unit, validated (`n ≥ 2`).
    pub fn nits(n: u32) -> Result<Self> {
        if n < 2 {
            return Err(Error::invalid(
                "unit",
                format!("nits base {n} must be >= 2"),
            ));
        }
        Ok(InfoUnit::NIts(n))
    }

    /// The logarithm base of the unit (2, e, or N).
    pub fn base(&self) -> f64 {
        match self {
            InfoUnit::Bits => 2.0,
            InfoUnit::Nats => std::f64::consts::E,
            InfoUnit::NIts(n) => f64::from(*n),
        }
    }

    /// Natural log of the base; the scale factor from this unit to nats.
    pub fn ln_base(&self) -> f64 {
        match self {
            InfoUnit::Bits => std::f64::consts::LN_2,
            InfoUnit::Nats => 1.0,
            InfoUnit::NIts(n) => f64::from(*n).ln(),
        }
    }
}

impl fmt::Display for InfoUnit {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            InfoUnit::Bits => write!(f, "bits"),
            InfoUnit::Nats => write!(f, "nats"),
            InfoUnit::NIts(n) => write!(f, "nits:{n}"),
        }
    }
}

impl FromStr for InfoUnit {
    type Err = Error;

    /// Parses the CLI/config names `bits`, `nats`, and `nits:N`.
    fn from_str(s: &str) -> Result<Self> {
        match s {
            "bits" => Ok(InfoUnit::Bits),
            "nats" => Ok(InfoUnit::Nats),
            _ => match s.strip_prefix("nits:") {
                Some(n) => {
                    let n: u32 = n
                        .parse()
                        .map_err(|_| Error::invalid("unit", format!("bad nits base in {s:?}")))?;
                    InfoUnit::nits(n)
                }
                None => Err(Error::invalid(
                    "unit",
                    format!("{s:?} is not one of bits, nats, nits:N"),
                )),
            },
        }
    }
}

/// A quantity of information tagged with its unit.
///
/// The value may be any real number; `+∞` is a valid distinguished marker
/// (e.g. a critical value no finite threshold attains) and is absorbing
/// under conversion.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct InfoValue {
    pub value: f64,
    pub unit: InfoUnit,
}

impl InfoValue {
    pub fn new(value: f64, unit: InfoUnit) -> Self {
        InfoValue { value, unit }
    }

    pub fn bits(value: f64) -> Self {
        InfoValue::new(value, InfoUnit::Bits)
    }

    pub fn nats(value: f64) -> Self {
        InfoValue::new(value, InfoUnit::Nats)
    }

    /// Re-expresses the same quantity in `target` units, preserving
    /// `base_src^value = base_tgt^result`. Infinities pass through.
    pub fn convert(self, target: InfoUnit) -> InfoValue {
        if self.unit == target || !self.value.is_finite() {
            return InfoValue::new(self.value, target);
        }
        let scaled = self.value * (self.unit.ln_base() / target.ln_base());
        InfoValue::new(scaled, target)
    }

    /// Shorthand for the value expressed in nats.
    pub fn to_nats(self) -> f64 {
        self.convert(InfoUnit::Nats).value
    }
}

impl fmt::Display for InfoValue {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} {}", self.value, self.unit)
    }
}

/// Logarithm of `x` in the given unit's base.
///
/// Errors on `x ≤ 0` (and NaN); `log` of the unit base is exactly 1.
pub fn log_in_unit(x: f64, unit: InfoUnit) -> Result<f64> {
    if x.is_nan() || x <= 0.0 {
        return Err(Error::domain(format!("log argument {x} must be positive")));
    }
    Ok(x.ln() / unit.ln_base())
}
