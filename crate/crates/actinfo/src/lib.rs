//! Exact hypothesis testing for active information.
//!
//! The active-information statistic of an event is `I = log(p/q)`: the log
//! ratio of the probability `p` the event has under an informed search or
//! alternative model to its probability `q` under the blind (endogenous)
//! reference. Treating `p` as random with a known prior makes `I` a test
//! statistic with a fully closed-form law, so critical values and p-values
//! are exact rather than asymptotic.
//!
//! The crate provides:
//!
//! - [`units`]: bits/nats/base-N units and exact conversions;
//! - [`prior`]: uniform, Beta, and empirical priors for `p` (CDF, quantile,
//!   seeded sampling);
//! - [`dist`]: closed-form CDFs, tails, densities, and critical values of
//!   the statistic for uniform-over-N and general event-probability
//!   references, under any supported prior;
//! - [`engine`]: p-values, critical values, and accept/reject verdicts for
//!   observed probabilities or precomputed statistics;
//! - [`mc`]: a seeded, parallel Monte Carlo oracle that reproduces every
//!   closed form empirically, plus the specified-complexity conservation
//!   bound check;
//! - [`gof`]: the total-absolute-log-ratio goodness-of-fit statistic;
//! - [`table`]: rejection-region table generation (CSV/Markdown).

#![forbid(unsafe_code)]

pub mod dist;
pub mod engine;
mod error;
pub mod gof;
pub mod mc;
mod numeric;
pub mod prior;
pub mod table;
pub mod units;

pub use dist::{
    actinfo, cdf_one_sided, cdf_two_sided, critical_one_sided, critical_two_sided, pdf_two_sided,
    tail_one_sided, tail_two_sided, ActiveInfoStatistic, CriticalMode, ReferenceModel, Sidedness,
};
pub use engine::{log_pvalue_ratio, run_test, run_test_on_statistic, TestResult, TestSpec};
pub use error::{Error, Result};
pub use gof::{gof_statistic, singleton_bound_check, GofInput};
pub use mc::{
    conservation_bound_check, conservation_bound_exact, conservation_bound_mc, empirical_cdf,
    empirical_critical, ConservationCheck, DiscreteDist, MCEstimate,
};
pub use prior::Prior;
pub use table::{generate_table, TableFormat, TableSpec};
pub use units::{log_in_unit, InfoUnit, InfoValue};
