//! Priors for the exogenous probability `p` on (0, 1].
//!
//! The statistic `log(p/q)` inherits its distribution from the prior of
//! `p`. Three families are supported: the continuous uniform on (0, 1]
//! (the default), Beta(a, b) (e.g. the Jeffreys prior Beta(½, ½)), and an
//! empirical CDF table interpolated piecewise-linearly.
//!
//! `p = 0` is excluded: quantiles and samples are clamped to the smallest
//! positive double so that `log(p/q)` stays finite.

use std::f64::consts::PI;

use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::Deserialize;

use crate::error::{Error, Result};

/// Absolute tolerance for the incomplete-beta continued fraction.
const BETAINC_TOL: f64 = 1e-14;
const BETAINC_MAX_ITER: usize = 300;

/// Target residual |cdf(x) - u| for quantile inversion.
const QUANTILE_RESID_TOL: f64 = 1e-13;

/// Prior distribution of the exogenous probability `p ∈ (0, 1]`.
#[derive(Debug, Clone, Default, PartialEq)]
pub enum Prior {
    /// Continuous uniform on (0, 1]; behaves identically to Beta(1, 1).
    #[default]
    Uniform01,
    /// Beta(a, b) with a, b > 0.
    Beta { a: f64, b: f64 },
    /// Piecewise-linear CDF through user-supplied knots.
    Empirical(EmpiricalCdf),
}

impl Prior {
    /// Beta prior, validated (`a > 0`, `b > 0`, finite).
    pub fn beta(a: f64, b: f64) -> Result<Self> {
        if !(a > 0.0 && a.is_finite()) || !(b > 0.0 && b.is_finite()) {
            return Err(Error::invalid(
                "prior",
                format!("beta parameters must be positive and finite, got a={a}, b={b}"),
            ));
        }
        Ok(Prior::Beta { a, b })
    }

    /// Empirical prior from `(p_i, F_i)` knots; see [`EmpiricalCdf::new`].
    pub fn empirical(knots: Vec<(f64, f64)>) -> Result<Self> {
        Ok(Prior::Empirical(EmpiricalCdf::new(knots)?))
    }

    /// Parses the JSON prior spec:
    /// `{"type":"uniform"}`, `{"type":"beta","a":0.5,"b":0.5}`, or
    /// `{"type":"empirical","table":[[p,F],...]}`.
    pub fn from_json(json: &str) -> Result<Self> {
        let spec: PriorSpec = serde_json::from_str(json)
            .map_err(|e| Error::invalid("prior", format!("bad JSON prior spec: {e}")))?;
        match spec {
            PriorSpec::Uniform => Ok(Prior::Uniform01),
            PriorSpec::Beta { a, b } => Prior::beta(a, b),
            PriorSpec::Empirical { table } => Prior::empirical(table),
        }
    }

    /// CDF `F(p)`. Arguments outside (0, 1] clamp: ≤ 0 ↦ 0, ≥ 1 ↦ 1.
    pub fn cdf(&self, p: f64) -> f64 {
        if p.is_nan() || p <= 0.0 {
            return 0.0;
        }
        if p >= 1.0 {
            return 1.0;
        }
        match self {
            Prior::Uniform01 => p,
            Prior::Beta { a, b } => betainc(*a, *b, p),
            Prior::Empirical(table) => table.cdf(p),
        }
    }

    /// Generalized inverse CDF: the smallest `p` with `F(p) ≥ u`.
    ///
    /// The result is clamped into (0, 1]; `u` outside [0, 1] is a domain error.
    pub fn quantile(&self, u: f64) -> Result<f64> {
        if !(0.0..=1.0).contains(&u) {
            return Err(Error::domain(format!("quantile level {u} outside [0, 1]")));
        }
        let p = match self {
            Prior::Uniform01 => u,
            Prior::Beta { a, b } => beta_quantile(*a, *b, u),
            Prior::Empirical(table) => table.quantile(u),
        };
        Ok(p.clamp(f64::MIN_POSITIVE, 1.0))
    }

    /// One draw from the prior via inverse-CDF sampling.
    pub fn draw<R: Rng + ?Sized>(&self, rng: &mut R) -> f64 {
        // random::<f64>() is uniform on [0, 1); flip to (0, 1]
        let u = 1.0 - rng.random::<f64>();
        match self {
            Prior::Uniform01 => u,
            // u > 0, so quantile cannot fail
            _ => self.quantile(u).expect("u in (0, 1]"),
        }
    }

    /// `count` deterministic draws for the given seed.
    pub fn sample(&self, seed: u64, count: usize) -> Vec<f64> {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        (0..count).map(|_| self.draw(&mut rng)).collect()
    }
}

#[derive(Debug, Clone, Deserialize)]
#[serde(tag = "type", rename_all = "lowercase")]
enum PriorSpec {
    Uniform,
    Beta { a: f64, b: f64 },
    Empirical { table: Vec<(f64, f64)> },
}

/// Piecewise-linear CDF on (0, 1] through validated knots.
///
/// The curve is anchored at (0, 0), rises linearly between knots, and is 1
/// at and beyond the last knot.
#[derive(Debug, Clone, PartialEq)]
pub struct EmpiricalCdf {
    knots: Vec<(f64, f64)>,
}

impl EmpiricalCdf {
    /// Validates: `p_i` strictly increasing in (0, 1], `F_i` nondecreasing
    /// in [0, 1], and the last `F_i` equal to 1.
    pub fn new(knots: Vec<(f64, f64)>) -> Result<Self> {
        if knots.is_empty() {
            return Err(Error::invalid("prior", "empirical table is empty"));
        }
        let mut prev_p = 0.0;
        let mut prev_f = 0.0;
        for (i, &(p, f)) in knots.iter().enumerate() {
            if p.is_nan() || p <= prev_p || p > 1.0 {
                return Err(Error::invalid(
                    "prior",
                    format!("empirical table row {i}: p={p} must be strictly increasing in (0, 1]"),
                ));
            }
            if f.is_nan() || f < prev_f || f > 1.0 {
                return Err(Error::invalid(
                    "prior",
                    format!("empirical table row {i}: F={f} must be nondecreasing in [0, 1]"),
                ));
            }
            prev_p = p;
            prev_f = f;
        }
        if prev_f != 1.0 {
            return Err(Error::invalid(
                "prior",
                format!("empirical table must end at F=1, got {prev_f}"),
            ));
        }
        Ok(EmpiricalCdf { knots })
    }

    pub fn knots(&self) -> &[(f64, f64)] {
        &self.knots
    }

    fn cdf(&self, p: f64) -> f64 {
        let (mut p0, mut f0) = (0.0, 0.0);
        for &(p1, f1) in &self.knots {
            if p <= p1 {
                return f0 + (p - p0) * (f1 - f0) / (p1 - p0);
            }
            p0 = p1;
            f0 = f1;
        }
        1.0
    }

    fn quantile(&self, u: f64) -> f64 {
        let (mut p0, mut f0) = (0.0, 0.0);
        for &(p1, f1) in &self.knots {
            // first knot at or above u; f1 > f0 here since f0 < u <= f1
            if u <= f1 {
                if f1 == f0 {
                    return p0;
                }
                return p0 + (u - f0) * (p1 - p0) / (f1 - f0);
            }
            p0 = p1;
            f0 = f1;
        }
        p0
    }
}

// ---------------------------------------------------------------------------
// Regularized incomplete beta I_x(a, b) and its inverse
// ---------------------------------------------------------------------------

const LANCZOS_COEF: [f64; 8] = [
    676.5203681218851,
    -1259.1392167224028,
    771.3234287776531,
    -176.6150291621406,
    12.507343278686905,
    -0.13857109526572012,
    9.984369578019572e-6,
    1.5056327351493116e-7,
];

/// ln Γ(z) for z > 0 (Lanczos, g = 7).
fn ln_gamma(z: f64) -> f64 {
    if z < 0.5 {
        // reflection keeps small-argument accuracy
        (PI / (PI * z).sin()).ln() - ln_gamma(1.0 - z)
    } else {
        let z = z - 1.0;
        let mut x = 0.999_999_999_999_809_9;
        for (i, c) in LANCZOS_COEF.iter().enumerate() {
            x += c / (z + i as f64 + 1.0);
        }
        let t = z + 7.5;
        0.5 * (2.0 * PI).ln() + (z + 0.5) * t.ln() - t + x.ln()
    }
}

fn ln_beta(a: f64, b: f64) -> f64 {
    ln_gamma(a) + ln_gamma(b) - ln_gamma(a + b)
}

/// Regularized incomplete beta I_x(a, b) by continued fraction with the
/// usual symmetry switch at x = (a+1)/(a+b+2).
pub(crate) fn betainc(a: f64, b: f64, x: f64) -> f64 {
    if x <= 0.0 {
        return 0.0;
    }
    if x >= 1.0 {
        return 1.0;
    }
    let front = (a * x.ln() + b * (-x).ln_1p() - ln_beta(a, b)).exp();
    let v = if x < (a + 1.0) / (a + b + 2.0) {
        front * beta_cf(a, b, x) / a
    } else {
        1.0 - front * beta_cf(b, a, 1.0 - x) / b
    };
    v.clamp(0.0, 1.0)
}

/// Continued fraction for I_x(a, b) (modified Lentz).
fn beta_cf(a: f64, b: f64, x: f64) -> f64 {
    const TINY: f64 = 1e-300;
    let qab = a + b;
    let qap = a + 1.0;
    let qam = a - 1.0;

    let mut c = 1.0;
    let mut d = 1.0 - qab * x / qap;
    if d.abs() < TINY {
        d = TINY;
    }
    d = 1.0 / d;
    let mut h = d;

    for m in 1..=BETAINC_MAX_ITER {
        let m = m as f64;
        let m2 = 2.0 * m;

        let aa = m * (b - m) * x / ((qam + m2) * (a + m2));
        d = 1.0 + aa * d;
        if d.abs() < TINY {
            d = TINY;
        }
        c = 1.0 + aa / c;
        if c.abs() < TINY {
            c = TINY;
        }
        d = 1.0 / d;
        h *= d * c;

        let aa = -(a + m) * (qab + m) * x / ((a + m2) * (qap + m2));
        d = 1.0 + aa * d;
        if d.abs() < TINY {
            d = TINY;
        }
        c = 1.0 + aa / c;
        if c.abs() < TINY {
            c = TINY;
        }
        d = 1.0 / d;
        let del = d * c;
        h *= del;

        if (del - 1.0).abs() < BETAINC_TOL {
            break;
        }
    }
    h
}

/// Inverse of I_x(a, b) in x: safeguarded Newton inside a shrinking
/// bisection bracket; converges on the residual |I_x - u|.
fn beta_quantile(a: f64, b: f64, u: f64) -> f64 {
    if u <= 0.0 {
        return 0.0;
    }
    if u >= 1.0 {
        return 1.0;
    }
    let ln_b = ln_beta(a, b);
    let mut lo = 0.0;
    let mut hi = 1.0;
    let mut x = a / (a + b);
    for _ in 0..200 {
        let f = betainc(a, b, x) - u;
        if f.abs() <= QUANTILE_RESID_TOL {
            return x;
        }
        if f > 0.0 {
            hi = x;
        } else {
            lo = x;
        }
        // Newton proposal from the density; fall back to the midpoint when
        // it leaves the bracket or the density is degenerate
        let ln_pdf = (a - 1.0) * x.ln() + (b - 1.0) * (-x).ln_1p() - ln_b;
        let mut next = x - f * (-ln_pdf).exp();
        if !(next > lo && next < hi) || !next.is_finite() {
            next = 0.5 * (lo + hi);
        }
        if hi - lo < f64::EPSILON * hi {
            return 0.5 * (lo + hi);
        }
        x = next;
    }
    x
}

#[cfg(test)]
mod tests {
    use super::*;

    /// I_x(a, b) for integer a, b via the binomial-sum identity
    /// I_x(a, b) = P[Bin(a+b-1, x) ≥ a]; independent of the continued
    /// fraction path.
    fn betainc_binomial_oracle(a: u32, b: u32, x: f64) -> f64 {
        let n = a + b - 1;
        let mut total = 0.0;
        for j in a..=n {
            let mut coef = 1.0;
            for i in 0..j {
                coef *= (n - i) as f64 / (j - i) as f64;
            }
            total += coef * x.powi(j as i32) * (1.0 - x).powi((n - j) as i32);
        }
        total
    }

    /// Closed-form arcsine CDF of Beta(1/2, 1/2).
    fn arcsine_cdf(p: f64) -> f64 {
        (2.0 / PI) * p.sqrt().asin()
    }

    #[test]
    fn uniform_cdf_is_identity() {
        let prior = Prior::Uniform01;
        assert_eq!(prior.cdf(0.25), 0.25);
        assert_eq!(prior.cdf(-1.0), 0.0);
        assert_eq!(prior.cdf(0.0), 0.0);
        assert_eq!(prior.cdf(1.0), 1.0);
        assert_eq!(prior.cdf(2.0), 1.0);
    }

    #[test]
    fn jeffreys_cdf_closed_form() {
        let prior = Prior::beta(0.5, 0.5).unwrap();
        // symmetry about 1/2
        assert!((prior.cdf(0.5) - 0.5).abs() < 1e-13);
        // (2/pi) asin(sqrt(0.25)) = 1/3
        assert!((prior.cdf(0.25) - 1.0 / 3.0).abs() < 1e-13);
        for i in 1..200 {
            let p = i as f64 / 200.0;
            assert!(
                (prior.cdf(p) - arcsine_cdf(p)).abs() < 1e-12,
                "arcsine mismatch at p={p}"
            );
        }
    }

    #[test]
    fn betainc_matches_binomial_sums() {
        for &(a, b) in &[(2u32, 3u32), (3, 1), (1, 4), (5, 2), (4, 4)] {
            for i in 1..50 {
                let x = i as f64 / 50.0;
                let want = betainc_binomial_oracle(a, b, x);
                let got = betainc(a as f64, b as f64, x);
                assert!(
                    (got - want).abs() < 1e-12,
                    "I_{x}({a},{b}) = {got}, oracle {want}"
                );
            }
        }
    }

    #[test]
    fn beta_one_one_equals_uniform() {
        let beta = Prior::beta(1.0, 1.0).unwrap();
        let unif = Prior::Uniform01;
        for i in 1..=200 {
            let p = i as f64 / 200.0;
            assert!(
                (beta.cdf(p) - unif.cdf(p)).abs() < 1e-12,
                "Beta(1,1) vs uniform at p={p}"
            );
        }
    }

    #[test]
    fn quantile_examples() {
        assert_eq!(Prior::Uniform01.quantile(0.3).unwrap(), 0.3);
        let jeffreys = Prior::beta(0.5, 0.5).unwrap();
        // invert the arcsine CDF: sin^2(pi/6) = 1/4
        assert!((jeffreys.quantile(1.0 / 3.0).unwrap() - 0.25).abs() < 1e-10);
        let emp = Prior::empirical(vec![(0.5, 0.5), (1.0, 1.0)]).unwrap();
        assert!((emp.quantile(0.75).unwrap() - 0.75).abs() < 1e-15);
    }

    #[test]
    fn quantile_domain_and_endpoints() {
        let prior = Prior::Uniform01;
        assert!(prior.quantile(-0.1).is_err());
        assert!(prior.quantile(1.1).is_err());
        assert!(prior.quantile(f64::NAN).is_err());
        assert_eq!(prior.quantile(1.0).unwrap(), 1.0);
        assert_eq!(prior.quantile(0.0).unwrap(), f64::MIN_POSITIVE);
        let jeffreys = Prior::beta(0.5, 0.5).unwrap();
        assert_eq!(jeffreys.quantile(1.0).unwrap(), 1.0);
    }

    #[test]
    fn quantile_cdf_round_trip() {
        let priors = [
            Prior::Uniform01,
            Prior::beta(0.5, 0.5).unwrap(),
            Prior::beta(2.0, 3.0).unwrap(),
            Prior::beta(1.0, 1.0).unwrap(),
            Prior::empirical(vec![(0.2, 0.1), (0.5, 0.6), (0.9, 0.95), (1.0, 1.0)]).unwrap(),
        ];
        for prior in &priors {
            for i in 1..=999 {
                let u = i as f64 / 1000.0;
                let p = prior.quantile(u).unwrap();
                let back = prior.cdf(p);
                assert!(
                    (back - u).abs() <= 1e-10,
                    "{prior:?}: cdf(quantile({u})) = {back}"
                );
            }
        }
    }

    #[test]
    fn quantile_is_monotone() {
        let priors = [
            Prior::beta(0.5, 0.5).unwrap(),
            Prior::empirical(vec![(0.3, 0.4), (0.6, 0.4), (1.0, 1.0)]).unwrap(),
        ];
        for prior in &priors {
            let mut last = 0.0;
            for i in 0..=100 {
                let q = prior.quantile(i as f64 / 100.0).unwrap();
                assert!(
                    q >= last,
                    "{prior:?} not monotone at u={}",
                    i as f64 / 100.0
                );
                last = q;
            }
        }
    }

    #[test]
    fn flat_empirical_segment_takes_left_endpoint() {
        let emp = Prior::empirical(vec![(0.3, 0.4), (0.6, 0.4), (1.0, 1.0)]).unwrap();
        assert!((emp.quantile(0.4).unwrap() - 0.3).abs() < 1e-15);
    }

    #[test]
    fn empirical_validation() {
        assert!(Prior::empirical(vec![]).is_err());
        // non-increasing p
        assert!(Prior::empirical(vec![(0.5, 0.5), (0.5, 1.0)]).is_err());
        // decreasing F
        assert!(Prior::empirical(vec![(0.2, 0.6), (0.8, 0.5), (1.0, 1.0)]).is_err());
        // last F != 1
        assert!(Prior::empirical(vec![(0.5, 0.5), (1.0, 0.9)]).is_err());
        // p = 0 not allowed
        assert!(Prior::empirical(vec![(0.0, 0.0), (1.0, 1.0)]).is_err());
        // p > 1 not allowed
        assert!(Prior::empirical(vec![(0.5, 0.5), (1.5, 1.0)]).is_err());
    }

    #[test]
    fn beta_validation() {
        assert!(Prior::beta(0.0, 1.0).is_err());
        assert!(Prior::beta(1.0, -2.0).is_err());
        assert!(Prior::beta(f64::NAN, 1.0).is_err());
        assert!(Prior::beta(f64::INFINITY, 1.0).is_err());
    }

    #[test]
    fn sampling_is_deterministic() {
        let prior = Prior::Uniform01;
        let a = prior.sample(1, 5);
        let b = prior.sample(1, 5);
        assert_eq!(a, b);
        assert!(a.iter().all(|&p| p > 0.0 && p <= 1.0));
        let c = prior.sample(2, 5);
        assert_ne!(a, c);
    }

    #[test]
    fn sample_means() {
        // 3 sigma for U(0,1] at 1e5 draws is ~0.0027
        let mean = |v: &[f64]| v.iter().sum::<f64>() / v.len() as f64;
        let u = Prior::beta(1.0, 1.0).unwrap().sample(7, 100_000);
        assert!((mean(&u) - 0.5).abs() < 0.005, "uniform mean {}", mean(&u));
        // Beta(1/2,1/2): mean 1/2, variance 1/8, 3 sigma ~ 0.0034
        let j = Prior::beta(0.5, 0.5).unwrap().sample(7, 100_000);
        assert!((mean(&j) - 0.5).abs() < 0.006, "jeffreys mean {}", mean(&j));
    }

    #[test]
    fn kolmogorov_smirnov_distance() {
        for prior in [Prior::Uniform01, Prior::beta(0.5, 0.5).unwrap()] {
            let mut sample = prior.sample(42, 100_000);
            sample.sort_by(|a, b| a.partial_cmp(b).unwrap());
            let n = sample.len() as f64;
            let mut d: f64 = 0.0;
            for (i, &x) in sample.iter().enumerate() {
                let f = prior.cdf(x);
                d = d.max((f - (i + 1) as f64 / n).abs());
                d = d.max((f - i as f64 / n).abs());
            }
            assert!(d < 0.01, "{prior:?}: KS distance {d}");
        }
    }

    #[test]
    fn json_prior_specs() {
        assert_eq!(
            Prior::from_json(r#"{"type":"uniform"}"#).unwrap(),
            Prior::Uniform01
        );
        assert_eq!(
            Prior::from_json(r#"{"type":"beta","a":0.5,"b":0.5}"#).unwrap(),
            Prior::Beta { a: 0.5, b: 0.5 }
        );
        let emp =
            Prior::from_json(r#"{"type":"empirical","table":[[0.5,0.5],[1.0,1.0]]}"#).unwrap();
        match emp {
            Prior::Empirical(t) => assert_eq!(t.knots(), &[(0.5, 0.5), (1.0, 1.0)]),
            other => panic!("expected empirical, got {other:?}"),
        }
        assert!(Prior::from_json(r#"{"type":"beta","a":-1,"b":1}"#).is_err());
        assert!(Prior::from_json("not json").is_err());
    }

    mod properties {
        use super::*;
        use proptest::prelude::*;

        proptest! {
            #[test]
            fn cdf_nondecreasing(a in 0.2f64..5.0, b in 0.2f64..5.0, p in 0.0f64..1.0, dp in 0.0f64..0.5) {
                let prior = Prior::beta(a, b).unwrap();
                prop_assert!(prior.cdf(p + dp) >= prior.cdf(p) - 1e-14);
            }

            #[test]
            fn round_trip_random_beta(a in 0.2f64..5.0, b in 0.2f64..5.0, u in 0.001f64..0.999) {
                let prior = Prior::beta(a, b).unwrap();
                let p = prior.quantile(u).unwrap();
                prop_assert!((prior.cdf(p) - u).abs() < 1e-10);
            }
        }
    }
}
