//! Seeded Monte Carlo verification of the closed forms.
//!
//! Sampling is chunked; each chunk owns its own ChaCha stream keyed by the
//! chunk index, so estimates are reproducible for a given `(seed, n)` no
//! matter how rayon schedules the work, and aggregation is a plain sum of
//! counts.
//!
//! Discrete checks enumerate the space exactly when it is small
//! (|Ω| ≤ 20); sampling is reserved for continuous priors and large
//! spaces.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use crate::dist::{ReferenceModel, Sidedness};
use crate::error::{Error, Result};
use crate::prior::Prior;
use crate::units::InfoValue;

/// Samples per deterministic substream.
const CHUNK: u64 = 1 << 16;

/// Spaces up to this size are enumerated instead of sampled.
const ENUMERATION_LIMIT: usize = 20;

/// Slack for exact enumeration sums (float accumulation only).
const SUM_SLACK: f64 = 1e-12;

fn chunk_rng(seed: u64, chunk: u64) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(chunk);
    rng
}

/// A Monte Carlo estimate of a probability.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MCEstimate {
    pub estimate: f64,
    /// Binomial standard error `sqrt(est·(1-est)/n)`.
    pub std_error: f64,
    pub n_samples: u64,
    pub seed: u64,
}

impl MCEstimate {
    fn from_count(count: u64, n: u64, seed: u64) -> Self {
        let estimate = count as f64 / n as f64;
        MCEstimate {
            estimate,
            std_error: (estimate * (1.0 - estimate) / n as f64).sqrt(),
            n_samples: n,
            seed,
        }
    }
}

/// Empirical `P[I ≤ threshold]` (or `P[|I| ≤ threshold]` for the two-sided
/// case) over `n` prior draws. Deterministic for a given seed; a `+∞`
/// threshold yields exactly 1.
pub fn empirical_cdf(
    threshold: InfoValue,
    sidedness: Sidedness,
    reference: &ReferenceModel,
    prior: &Prior,
    seed: u64,
    n: u64,
) -> MCEstimate {
    let n = n.max(1);
    let thr = threshold.to_nats();
    let ln_q = reference.ln_endogenous();
    let n_chunks = n.div_ceil(CHUNK);
    let count: u64 = (0..n_chunks)
        .into_par_iter()
        .map(|c| {
            let mut rng = chunk_rng(seed, c);
            let take = CHUNK.min(n - c * CHUNK);
            let mut hits = 0u64;
            for _ in 0..take {
                let stat = prior.draw(&mut rng).ln() - ln_q;
                let v = match sidedness {
                    Sidedness::OneSidedUpper => stat,
                    Sidedness::TwoSided => stat.abs(),
                };
                if v <= thr {
                    hits += 1;
                }
            }
            hits
        })
        .sum();
    MCEstimate::from_count(count, n, seed)
}

/// Empirical critical value in nats: the `(1-α)` order statistic of the
/// sampled statistic (its magnitude for the two-sided case).
pub fn empirical_critical(
    alpha: f64,
    sidedness: Sidedness,
    reference: &ReferenceModel,
    prior: &Prior,
    seed: u64,
    n: u64,
) -> Result<f64> {
    if !(alpha > 0.0 && alpha < 1.0) {
        return Err(Error::domain(format!(
            "significance level {alpha} outside (0, 1)"
        )));
    }
    if n < 1000 {
        return Err(Error::domain(format!(
            "need at least 1000 samples for a quantile estimate, got {n}"
        )));
    }
    let ln_q = reference.ln_endogenous();
    let mut stats = vec![0.0f64; n as usize];
    stats
        .par_chunks_mut(CHUNK as usize)
        .enumerate()
        .for_each(|(c, chunk)| {
            let mut rng = chunk_rng(seed, c as u64);
            for slot in chunk.iter_mut() {
                let stat = prior.draw(&mut rng).ln() - ln_q;
                *slot = match sidedness {
                    Sidedness::OneSidedUpper => stat,
                    Sidedness::TwoSided => stat.abs(),
                };
            }
        });
    let rank = (((1.0 - alpha) * n as f64).ceil() as usize).clamp(1, n as usize) - 1;
    let (_, value, _) = stats.select_nth_unstable_by(rank, |a, b| a.partial_cmp(b).unwrap());
    Ok(*value)
}

/// A strictly positive probability vector, normalized on construction.
#[derive(Debug, Clone, PartialEq)]
pub struct DiscreteDist {
    probs: Vec<f64>,
}

impl DiscreteDist {
    /// Validates positivity and normalizes the weights to sum to 1.
    pub fn new(weights: Vec<f64>) -> Result<Self> {
        if weights.is_empty() {
            return Err(Error::invalid("distribution", "no probabilities given"));
        }
        for (i, &w) in weights.iter().enumerate() {
            if !(w > 0.0 && w.is_finite()) {
                return Err(Error::invalid(
                    "distribution",
                    format!("entry {i} is {w}; every point needs positive mass"),
                ));
            }
        }
        let total: f64 = weights.iter().sum();
        let probs = weights.iter().map(|w| w / total).collect();
        Ok(DiscreteDist { probs })
    }

    /// Parses a one-probability-per-line text block (blank lines ignored).
    pub fn from_text(text: &str) -> Result<Self> {
        let mut weights = Vec::new();
        for (lineno, line) in text.lines().enumerate() {
            let line = line.trim();
            if line.is_empty() {
                continue;
            }
            let w: f64 = line.parse().map_err(|_| {
                Error::invalid(
                    "distribution",
                    format!("line {}: {line:?} is not a number", lineno + 1),
                )
            })?;
            weights.push(w);
        }
        DiscreteDist::new(weights)
    }

    pub fn probs(&self) -> &[f64] {
        &self.probs
    }

    pub fn len(&self) -> usize {
        self.probs.len()
    }

    pub fn is_empty(&self) -> bool {
        self.probs.is_empty()
    }
}

/// One row of a conservation-bound report.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ConservationCheck {
    pub x: f64,
    pub lhs_estimate: f64,
    /// The bound `e^{-x}`.
    pub bound: f64,
    /// Zero when the space was enumerated exactly.
    pub std_error: f64,
    /// `lhs ≤ bound + 3·SE`.
    pub holds: bool,
}

fn conservation_scores(p: &DiscreteDist, v: &[f64], r: f64) -> Result<Vec<f64>> {
    if v.len() != p.len() {
        return Err(Error::Shape(format!(
            "{} probabilities vs {} specification values",
            p.len(),
            v.len()
        )));
    }
    if !(r > 0.0 && r.is_finite()) {
        return Err(Error::domain(format!("scale r={r} must be positive")));
    }
    for (i, &vi) in v.iter().enumerate() {
        if !(vi >= 0.0 && vi.is_finite()) {
            return Err(Error::invalid(
                "specification",
                format!("v[{i}] = {vi} must be a nonnegative number"),
            ));
        }
        if vi > r {
            return Err(Error::domain(format!(
                "precondition v ≤ r violated: v[{i}] = {vi} > r = {r}"
            )));
        }
    }
    // score = -ln(r p / v); v = 0 makes the score -inf (never counted)
    Ok(p.probs()
        .iter()
        .zip(v)
        .map(|(&pi, &vi)| -(r.ln() + pi.ln() - vi.ln()))
        .collect())
}

/// Exact enumeration of `P[-ln(r·p(X)/v(X)) ≥ x] ≤ e^{-x}` on a grid of x.
pub fn conservation_bound_exact(
    p: &DiscreteDist,
    v: &[f64],
    r: f64,
    x_grid: &[f64],
) -> Result<Vec<ConservationCheck>> {
    let scores = conservation_scores(p, v, r)?;
    Ok(x_grid
        .iter()
        .map(|&x| {
            // + 0.0 turns the empty sum's -0.0 into 0.0
            let lhs: f64 = scores
                .iter()
                .zip(p.probs())
                .filter(|(&s, _)| s >= x)
                .map(|(_, &pi)| pi)
                .sum::<f64>()
                + 0.0;
            let bound = (-x).exp();
            ConservationCheck {
                x,
                lhs_estimate: lhs,
                bound,
                std_error: 0.0,
                holds: lhs <= bound + SUM_SLACK,
            }
        })
        .collect())
}

/// Monte Carlo version of [`conservation_bound_exact`]: draws `X ~ p` and
/// counts threshold exceedances.
pub fn conservation_bound_mc(
    p: &DiscreteDist,
    v: &[f64],
    r: f64,
    x_grid: &[f64],
    seed: u64,
    n: u64,
) -> Result<Vec<ConservationCheck>> {
    let scores = conservation_scores(p, v, r)?;
    let n = n.max(1);
    let mut cumulative = Vec::with_capacity(p.len());
    let mut acc = 0.0;
    for &pi in p.probs() {
        acc += pi;
        cumulative.push(acc);
    }
    let n_chunks = n.div_ceil(CHUNK);
    let counts: Vec<u64> = (0..n_chunks)
        .into_par_iter()
        .map(|c| {
            let mut rng = chunk_rng(seed, c);
            let take = CHUNK.min(n - c * CHUNK);
            let mut hits = vec![0u64; x_grid.len()];
            for _ in 0..take {
                let u: f64 = rand::Rng::random(&mut rng);
                let idx = cumulative
                    .iter()
                    .position(|&edge| u < edge)
                    .unwrap_or(p.len() - 1);
                let score = scores[idx];
                for (k, &x) in x_grid.iter().enumerate() {
                    if score >= x {
                        hits[k] += 1;
                    }
                }
            }
            hits
        })
        .reduce(
            || vec![0u64; x_grid.len()],
            |mut a, b| {
                for (ai, bi) in a.iter_mut().zip(b) {
                    *ai += bi;
                }
                a
            },
        );
    Ok(x_grid
        .iter()
        .zip(counts)
        .map(|(&x, count)| {
            let est = MCEstimate::from_count(count, n, seed);
            let bound = (-x).exp();
            ConservationCheck {
                x,
                lhs_estimate: est.estimate,
                bound,
                std_error: est.std_error,
                holds: est.estimate <= bound + 3.0 * est.std_error,
            }
        })
        .collect())
}

/// Conservation-bound report: exact enumeration for small spaces,
/// Monte Carlo (seeded) otherwise.
pub fn conservation_bound_check(
    p: &DiscreteDist,
    v: &[f64],
    r: f64,
    x_grid: &[f64],
    seed: u64,
    n: u64,
) -> Result<Vec<ConservationCheck>> {
    if p.len() <= ENUMERATION_LIMIT {
        conservation_bound_exact(p, v, r, x_grid)
    } else {
        conservation_bound_mc(p, v, r, x_grid, seed, n)
    }
}
