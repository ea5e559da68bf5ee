//! Goodness of fit between two full-support distributions.
//!
//! The statistic is the total absolute log ratio, `Σ |log(pᵢ/qᵢ)|` for
//! discrete distributions or `∫ |log(p(x)/q(x))| dx` (trapezoid rule) for
//! densities sampled on a uniform grid. It is zero exactly when the two
//! distributions coincide, and it dominates the log ratio of any single
//! support point.
//!
//! No null distribution is provided for it; use [`crate::mc`] to simulate
//! reference values for a concrete setting.

use crate::error::{Error, Result};
use crate::mc::DiscreteDist;
use crate::units::InfoUnit;

/// Input pair for the goodness-of-fit statistic.
#[derive(Debug, Clone, PartialEq)]
pub enum GofInput {
    /// Two discrete distributions on the same support.
    Discrete { p: DiscreteDist, q: DiscreteDist },
    /// Two positive densities sampled on the same uniform grid with the
    /// given step; values are used as-is (no renormalization).
    Grid {
        p_vals: Vec<f64>,
        q_vals: Vec<f64>,
        step: f64,
    },
}

impl GofInput {
    /// Discrete input; the two distributions must have equal support size.
    pub fn discrete(p: DiscreteDist, q: DiscreteDist) -> Result<Self> {
        if p.len() != q.len() {
            return Err(Error::Shape(format!(
                "support sizes differ: {} vs {}",
                p.len(),
                q.len()
            )));
        }
        Ok(GofInput::Discrete { p, q })
    }

    /// Grid input; equal lengths (≥ 2), strictly positive values, and a
    /// positive step.
    pub fn grid(p_vals: Vec<f64>, q_vals: Vec<f64>, step: f64) -> Result<Self> {
        if p_vals.len() != q_vals.len() {
            return Err(Error::Shape(format!(
                "grid lengths differ: {} vs {}",
                p_vals.len(),
                q_vals.len()
            )));
        }
        if p_vals.len() < 2 {
            return Err(Error::Shape(
                "grid needs at least two points for the trapezoid rule".into(),
            ));
        }
        if !(step > 0.0 && step.is_finite()) {
            return Err(Error::domain(format!("grid step {step} must be positive")));
        }
        for (i, (&pv, &qv)) in p_vals.iter().zip(&q_vals).enumerate() {
            if !(pv > 0.0 && pv.is_finite()) || !(qv > 0.0 && qv.is_finite()) {
                return Err(Error::domain(format!(
                    "grid point {i}: densities ({pv}, {qv}) must be positive"
                )));
            }
        }
        Ok(GofInput::Grid {
            p_vals,
            q_vals,
            step,
        })
    }
}

/// The total absolute log ratio in the requested unit.
pub fn gof_statistic(input: &GofInput, unit: InfoUnit) -> f64 {
    let ln_base = unit.ln_base();
    match input {
        GofInput::Discrete { p, q } => {
            p.probs()
                .iter()
                .zip(q.probs())
                .map(|(&pi, &qi)| (pi.ln() - qi.ln()).abs())
                .sum::<f64>()
                / ln_base
        }
        GofInput::Grid {
            p_vals,
            q_vals,
            step,
        } => {
            let f: Vec<f64> = p_vals
                .iter()
                .zip(q_vals)
                .map(|(&pv, &qv)| (pv.ln() - qv.ln()).abs())
                .collect();
            let interior: f64 = f.iter().sum::<f64>() - 0.5 * (f[0] + f[f.len() - 1]);
            step * interior / ln_base
        }
    }
}

/// Checks that the largest single-point log ratio does not exceed the
/// total statistic. True by construction for discrete inputs; exposed as a
/// sanity check. Grid inputs are not supported.
pub fn singleton_bound_check(input: &GofInput, unit: InfoUnit) -> Result<bool> {
    let GofInput::Discrete { p, q } = input else {
        return Err(Error::invalid(
            "gof input",
            "singleton bound check requires a discrete input",
        ));
    };
    let ln_base = unit.ln_base();
    let max_term = p
        .probs()
        .iter()
        .zip(q.probs())
        .map(|(&pi, &qi)| (pi.ln() - qi.ln()).abs() / ln_base)
        .fold(0.0f64, f64::max);
    Ok(max_term <= gof_statistic(input, unit))
}
