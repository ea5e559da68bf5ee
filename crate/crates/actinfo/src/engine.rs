//! Test execution: statistic, p-value, critical value, verdict.

use crate::dist::{
    actinfo, critical_one_sided, critical_two_sided, tail_one_sided, tail_two_sided,
    ActiveInfoStatistic, CriticalMode, ReferenceModel, Sidedness,
};
use crate::error::{Error, Result};
use crate::prior::Prior;
use crate::units::{InfoUnit, InfoValue};

/// Full description of a test: what to compare against and at which level.
#[derive(Debug, Clone)]
pub struct TestSpec {
    pub sidedness: Sidedness,
    pub alpha: f64,
    pub unit: InfoUnit,
    pub reference: ReferenceModel,
    pub prior: Prior,
    pub mode: CriticalMode,
}

impl TestSpec {
    /// Validated constructor (`alpha ∈ (0, 1)`).
    pub fn new(
        sidedness: Sidedness,
        alpha: f64,
        unit: InfoUnit,
        reference: ReferenceModel,
        prior: Prior,
        mode: CriticalMode,
    ) -> Result<Self> {
        if !(alpha > 0.0 && alpha < 1.0) {
            return Err(Error::domain(format!(
                "significance level {alpha} outside (0, 1)"
            )));
        }
        Ok(TestSpec {
            sidedness,
            alpha,
            unit,
            reference,
            prior,
            mode,
        })
    }
}

/// Outcome of a test.
///
/// Rejection uses the strict inequality `p_value < alpha`; a p-value equal
/// to alpha does not reject. Equivalently the statistic must lie strictly
/// beyond the exact critical value.
#[derive(Debug, Clone, Copy)]
pub struct TestResult {
    pub statistic: ActiveInfoStatistic,
    pub p_value: f64,
    pub critical_value: InfoValue,
    pub reject: bool,
    pub alpha: f64,
}

/// Runs the test for an observed exogenous probability `p_obs ∈ (0, 1]`.
pub fn run_test(p_obs: f64, spec: &TestSpec) -> Result<TestResult> {
    let statistic = actinfo(p_obs, &spec.reference, spec.unit)?;
    finish(statistic, spec)
}

/// Runs the test when the statistic was already computed upstream.
pub fn run_test_on_statistic(stat: InfoValue, spec: &TestSpec) -> Result<TestResult> {
    let statistic = ActiveInfoStatistic {
        value: stat.convert(spec.unit),
    };
    finish(statistic, spec)
}

fn finish(statistic: ActiveInfoStatistic, spec: &TestSpec) -> Result<TestResult> {
    if !(spec.alpha > 0.0 && spec.alpha < 1.0) {
        return Err(Error::domain(format!(
            "significance level {} outside (0, 1)",
            spec.alpha
        )));
    }
    let (p_value, critical_value) = match spec.sidedness {
        Sidedness::OneSidedUpper => {
            let p = tail_one_sided(statistic.value, &spec.reference, &spec.prior);
            let c = critical_one_sided(spec.alpha, &spec.reference, &spec.prior, spec.unit)?;
            (p, c)
        }
        Sidedness::TwoSided => {
            // magnitude is always taken in nats before the tail lookup
            let magnitude = statistic.in_nats().abs();
            let p = tail_two_sided(magnitude, &spec.reference, &spec.prior)?;
            let c = critical_two_sided(spec.alpha, &spec.reference, &spec.prior, spec.mode)?
                .convert(spec.unit);
            (p, c)
        }
    };
    Ok(TestResult {
        statistic,
        p_value,
        critical_value,
        reject: p_value < spec.alpha,
        alpha: spec.alpha,
    })
}

/// `log(p_val/α)` in the requested unit; negative exactly when the test
/// rejects at level α.
pub fn log_pvalue_ratio(p_val: f64, alpha: f64, unit: InfoUnit) -> Result<f64> {
    if !(p_val > 0.0 && p_val <= 1.0) {
        return Err(Error::domain(format!("p-value {p_val} outside (0, 1]")));
    }
    if !(alpha > 0.0 && alpha < 1.0) {
        return Err(Error::domain(format!(
            "significance level {alpha} outside (0, 1)"
        )));
    }
    Ok((p_val.ln() - alpha.ln()) / unit.ln_base())
}
