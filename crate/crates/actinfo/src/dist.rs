//! Exact distributions of the active-information statistic.
//!
//! With endogenous probability `q` and exogenous probability `p ~ F` on
//! (0, 1], the statistic `I = log(p/q)` has closed-form law `P[I ≤ n] =
//! F(q·eⁿ)` (nats). For the uniform prior this yields, in nats:
//!
//! - one-sided: `P[I ≤ n] = q·eⁿ` on `n ≤ -ln q`, then 1;
//! - two-sided: `P[|I| ≤ n] = 2q·sinh n` on `n ≤ -ln q`, then `1 - q·e⁻ⁿ`;
//! - density of `|I|`: `2q·cosh n`, then `q·e⁻ⁿ` (a catenary scaled by 2q).
//!
//! Critical values invert these tails exactly; `CriticalMode::PaperTable`
//! additionally offers the single-branch `asinh(1-α)` convention used by
//! the classical two-sided coin table.
//!
//! Everything here is pure and deterministic; the Monte Carlo cross-checks
//! live in [`crate::mc`].

use std::fmt;
use std::str::FromStr;

use crate::error::{Error, Result};
use crate::numeric::bisect;
use crate::prior::Prior;
use crate::units::{InfoUnit, InfoValue};

/// Tolerance (in nats) for numerically inverted two-sided criticals.
const CRITICAL_XTOL: f64 = 1e-13;

/// Null reference model: the endogenous probability of the event.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum ReferenceModel {
    /// Uniform over `N ≥ 2` outcomes; the event is one outcome, `q = 1/N`.
    UniformN(u32),
    /// A raw event probability `q ∈ (0, 1)`.
    EventProb(f64),
}

impl ReferenceModel {
    /// Uniform reference, validated (`n ≥ 2`).
    pub fn uniform(n: u32) -> Result<Self> {
        if n < 2 {
            return Err(Error::invalid(
                "reference",
                format!("uniform support size {n} must be >= 2"),
            ));
        }
        Ok(ReferenceModel::UniformN(n))
    }

    /// Event-probability reference, validated (`0 < q < 1`).
    pub fn event_prob(q: f64) -> Result<Self> {
        if !(q > 0.0 && q < 1.0) {
            return Err(Error::invalid(
                "reference",
                format!("event probability {q} must lie in (0, 1)"),
            ));
        }
        Ok(ReferenceModel::EventProb(q))
    }

    /// The endogenous probability `q` (1/N for the uniform reference).
    pub fn endogenous_prob(&self) -> f64 {
        match self {
            ReferenceModel::UniformN(n) => 1.0 / f64::from(*n),
            ReferenceModel::EventProb(q) => *q,
        }
    }

    /// `ln q`, computed as `-ln N` for the uniform reference so that unit
    /// conversions and support bounds agree to the last bit.
    pub fn ln_endogenous(&self) -> f64 {
        match self {
            ReferenceModel::UniformN(n) => -f64::from(*n).ln(),
            ReferenceModel::EventProb(q) => q.ln(),
        }
    }

    /// Upper end of the statistic's support, `-ln q`, in nats.
    pub fn max_statistic_nats(&self) -> f64 {
        -self.ln_endogenous()
    }
}

impl fmt::Display for ReferenceModel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ReferenceModel::UniformN(n) => write!(f, "uniform:{n}"),
            ReferenceModel::EventProb(q) => write!(f, "event:{q}"),
        }
    }
}

impl FromStr for ReferenceModel {
    type Err = Error;

    /// Parses the CLI grammar `uniform:N` or `event:q`.
    fn from_str(s: &str) -> Result<Self> {
        if let Some(n) = s.strip_prefix("uniform:") {
            let n: u32 = n
                .parse()
                .map_err(|_| Error::invalid("reference", format!("bad support size in {s:?}")))?;
            return ReferenceModel::uniform(n);
        }
        if let Some(q) = s.strip_prefix("event:") {
            let q: f64 = q
                .parse()
                .map_err(|_| Error::invalid("reference", format!("bad probability in {s:?}")))?;
            return ReferenceModel::event_prob(q);
        }
        Err(Error::invalid(
            "reference",
            format!("{s:?} is not uniform:N or event:q"),
        ))
    }
}

/// Which deviation from the null counts as evidence.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Sidedness {
    /// Reject only for large positive statistics.
    OneSidedUpper,
    /// Reject for large |statistic|.
    TwoSided,
}

impl fmt::Display for Sidedness {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Sidedness::OneSidedUpper => write!(f, "one"),
            Sidedness::TwoSided => write!(f, "two"),
        }
    }
}

impl FromStr for Sidedness {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "one" => Ok(Sidedness::OneSidedUpper),
            "two" => Ok(Sidedness::TwoSided),
            _ => Err(Error::invalid("sidedness", format!("{s:?} is not one|two"))),
        }
    }
}

/// How two-sided critical values are computed.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum CriticalMode {
    /// Invert the exact two-sided tail (`tail(n*) = α` for every α).
    Exact,
    /// The single-branch `asinh(1-α)` convention of the classical coin
    /// table; defined only for the coin reference with the uniform prior.
    PaperTable,
}

impl FromStr for CriticalMode {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "exact" => Ok(CriticalMode::Exact),
            "paper-table" | "table" => Ok(CriticalMode::PaperTable),
            _ => Err(Error::invalid(
                "mode",
                format!("{s:?} is not exact|paper-table"),
            )),
        }
    }
}

/// The observed statistic `log(p/q)` with its unit.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ActiveInfoStatistic {
    pub value: InfoValue,
}

impl ActiveInfoStatistic {
    pub fn in_nats(&self) -> f64 {
        self.value.to_nats()
    }
}

/// The statistic `log(p/q)` in the requested unit.
///
/// Zero iff `p` equals the endogenous probability; at most `-log q`
/// (attained at `p = 1`). `p` outside (0, 1] is a domain error.
pub fn actinfo(p: f64, reference: &ReferenceModel, unit: InfoUnit) -> Result<ActiveInfoStatistic> {
    if !(p > 0.0 && p <= 1.0) {
        return Err(Error::domain(format!(
            "observed probability {p} outside (0, 1]"
        )));
    }
    let nats = p.ln() - reference.ln_endogenous();
    Ok(ActiveInfoStatistic {
        value: InfoValue::nats(nats).convert(unit),
    })
}

/// `P[I ≤ x]` for the one-sided statistic: `F(q·eⁿ)` with `x = n` nats,
/// saturating at 1 for `n ≥ -ln q`.
pub fn cdf_one_sided(x: InfoValue, reference: &ReferenceModel, prior: &Prior) -> f64 {
    let n = x.to_nats();
    let q = reference.endogenous_prob();
    if n >= reference.max_statistic_nats() {
        return 1.0;
    }
    prior.cdf(q * n.exp())
}

/// `P[I > x] = 1 - P[I ≤ x]`, computed as the exact complement.
pub fn tail_one_sided(x: InfoValue, reference: &ReferenceModel, prior: &Prior) -> f64 {
    1.0 - cdf_one_sided(x, reference, prior)
}

fn check_magnitude(n: f64) -> Result<f64> {
    if n.is_nan() || n < 0.0 {
        return Err(Error::domain(format!(
            "two-sided threshold {n} must be a nonnegative number of nats"
        )));
    }
    Ok(n)
}

fn cdf_two_sided_inner(n: f64, reference: &ReferenceModel, prior: &Prior) -> f64 {
    let q = reference.endogenous_prob();
    let max_n = reference.max_statistic_nats();
    match prior {
        Prior::Uniform01 => {
            if n < max_n {
                2.0 * q * n.sinh()
            } else {
                1.0 - q * (-n).exp()
            }
        }
        _ => {
            let upper = if n >= max_n {
                1.0
            } else {
                prior.cdf(q * n.exp())
            };
            upper - prior.cdf(q * (-n).exp())
        }
    }
}

/// `P[|I| ≤ n]` for `n ≥ 0` nats.
///
/// Uniform prior: `2q·sinh n` on `[0, -ln q]`, then `1 - q·e⁻ⁿ`. General
/// prior `F`: `F(min(1, q·eⁿ)) - F(q·e⁻ⁿ)`.
pub fn cdf_two_sided(n: f64, reference: &ReferenceModel, prior: &Prior) -> Result<f64> {
    Ok(cdf_two_sided_inner(check_magnitude(n)?, reference, prior))
}

/// `P[|I| > n]`, the exact complement of [`cdf_two_sided`].
pub fn tail_two_sided(n: f64, reference: &ReferenceModel, prior: &Prior) -> Result<f64> {
    Ok(1.0 - cdf_two_sided(n, reference, prior)?)
}

/// Density of `|I|` at `n ≥ 0` nats, under the uniform prior:
/// `2q·cosh n` on `[0, -ln q]`, then `q·e⁻ⁿ` (the scaled catenary).
pub fn pdf_two_sided(n: f64, reference: &ReferenceModel) -> Result<f64> {
    let n = check_magnitude(n)?;
    let q = reference.endogenous_prob();
    if n <= reference.max_statistic_nats() {
        Ok(2.0 * q * n.cosh())
    } else {
        Ok(q * (-n).exp())
    }
}

/// Smallest threshold `t` with `P[I > t] ≤ α`, in the requested unit.
///
/// Uniform prior: `ln((1-α)/q)` nats. General prior `F`:
/// `log(F⁻¹(1-α)/q)`.
pub fn critical_one_sided(
    alpha: f64,
    reference: &ReferenceModel,
    prior: &Prior,
    unit: InfoUnit,
) -> Result<InfoValue> {
    check_alpha(alpha)?;
    let ln_q = reference.ln_endogenous();
    let nats = match prior {
        Prior::Uniform01 => (-alpha).ln_1p() - ln_q,
        _ => prior.quantile(1.0 - alpha)?.ln() - ln_q,
    };
    Ok(InfoValue::nats(nats).convert(unit))
}

/// Two-sided critical value `n*` in nats.
///
/// `Exact` mode solves `P[|I| > n*] = α`: under the uniform prior,
/// `asinh((1-α)/(2q))` when `α ≥ q²` and `ln(q/α)` otherwise; under any
/// other prior the tail is inverted numerically on `[0, -ln q + 60]`.
/// `PaperTable` mode returns `asinh(1-α)` for every α and is defined only
/// for the coin reference (`q = ½`) with the uniform prior.
pub fn critical_two_sided(
    alpha: f64,
    reference: &ReferenceModel,
    prior: &Prior,
    mode: CriticalMode,
) -> Result<InfoValue> {
    check_alpha(alpha)?;
    let q = reference.endogenous_prob();
    let nats = match mode {
        CriticalMode::PaperTable => {
            if q != 0.5 {
                return Err(Error::UnsupportedMode(format!(
                    "paper-table criticals are defined for the coin reference only, got {reference}"
                )));
            }
            if *prior != Prior::Uniform01 {
                return Err(Error::UnsupportedMode(
                    "paper-table criticals are defined for the uniform prior only".into(),
                ));
            }
            (1.0 - alpha).asinh()
        }
        CriticalMode::Exact => match prior {
            Prior::Uniform01 => {
                if alpha >= q * q {
                    ((1.0 - alpha) / (2.0 * q)).asinh()
                } else {
                    reference.ln_endogenous() - alpha.ln()
                }
            }
            _ => invert_two_sided_tail(alpha, reference, prior)?,
        },
    };
    Ok(InfoValue::nats(nats))
}

fn invert_two_sided_tail(alpha: f64, reference: &ReferenceModel, prior: &Prior) -> Result<f64> {
    let f = |n: f64| 1.0 - cdf_two_sided_inner(n, reference, prior) - alpha;
    let mut hi = reference.max_statistic_nats() + 60.0;
    // the tail at hi is F(q·e^{-hi}); extend in the rare case it still
    // exceeds alpha
    while f(hi) > 0.0 {
        hi += 200.0;
        if hi > reference.max_statistic_nats() + 740.0 {
            return Err(Error::NoConvergence("two-sided critical bracket"));
        }
    }
    bisect(f, 0.0, hi, CRITICAL_XTOL, 300)
}

fn check_alpha(alpha: f64) -> Result<()> {
    if !(alpha > 0.0 && alpha < 1.0) {
        return Err(Error::domain(format!(
            "significance level {alpha} outside (0, 1)"
        )));
    }
    Ok(())
}
