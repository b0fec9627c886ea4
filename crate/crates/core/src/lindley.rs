//! Lindley cases: sample means for which a conventional (vague-alternative)
//! Bayes factor favours the null by at least `q` while some point
//! alternatives beat the null by at least `q` too.
//!
//! For a given `n` and `q` those means form a band `[a, b]` on each side of
//! zero. The lower end `a = √(2 log q / n)` is where the point-factor region
//! of [`mu_bounds`] first becomes nonempty; the upper end `b` is where the
//! conventional factor drops to `q`. Under H0 the sample mean is N(0, 1/n),
//! so the chance of landing in either band is `2(Φ(b√n) − Φ(a√n))`.

use serde::Serialize;

use crate::bayes_factors::{
    bf_threshold_t_with, conventional_bf01, mu_bounds, robert_bf_upper, robert_required_mean,
    BfKind, GaussianSummary, PriorScales, Threshold,
};
use crate::error::{Error, Result};
use crate::interval::Interval;
use crate::numerics::erfc;

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct LindleyReport {
    kind: BfKind,
    summary: GaussianSummary,
    q: Threshold,
    conventional_bf: f64,
    counter_interval: Option<Interval>,
    is_lindley_case: bool,
}

impl LindleyReport {
    pub fn kind(&self) -> BfKind {
        self.kind
    }

    pub fn summary(&self) -> &GaussianSummary {
        &self.summary
    }

    pub fn q(&self) -> Threshold {
        self.q
    }

    /// B01 of the vague alternative at the observed summary.
    pub fn conventional_bf(&self) -> f64 {
        self.conventional_bf
    }

    /// μ values whose point factor against the null is at least `q`.
    pub fn counter_interval(&self) -> Option<Interval> {
        self.counter_interval
    }

    pub fn is_lindley_case(&self) -> bool {
        self.is_lindley_case
    }
}

/// Smallest |x̄| at which some point alternative beats the null by `q`.
pub fn lindley_lower_mean(n: u64, q: Threshold) -> f64 {
    (2.0 * q.ln() / n as f64).sqrt()
}

/// Largest |x̄| at which B01 of `kind` still reaches `q`, or `None` when it
/// never does at this sample size.
fn vague_upper_mean(
    n: u64,
    q: Threshold,
    kind: BfKind,
    scales: &PriorScales,
) -> Result<Option<f64>> {
    let upper = match kind {
        BfKind::RobertVague => robert_required_mean(q, n),
        _ => bf_threshold_t_with(kind, q, n, scales).map(|t| t / (n as f64).sqrt()),
    };
    match upper {
        Ok(m) => Ok(Some(m)),
        Err(e) if e.is_infeasible() => Ok(None),
        Err(e) => Err(e),
    }
}

/// Band of positive sample means that produce Lindley cases.
pub fn lindley_mean_range(n: u64, q: Threshold, kind: BfKind) -> Result<Option<Interval>> {
    lindley_mean_range_with(n, q, kind, &PriorScales::default())
}

pub fn lindley_mean_range_with(
    n: u64,
    q: Threshold,
    kind: BfKind,
    scales: &PriorScales,
) -> Result<Option<Interval>> {
    if n == 0 {
        return Err(Error::domain("sample size must be at least 1"));
    }
    let lower = lindley_lower_mean(n, q);
    Ok(vague_upper_mean(n, q, kind, scales)?.and_then(|upper| Interval::nonempty(lower, upper)))
}

/// Range `[q, B01(a)]` of conventional factors that coincide with Lindley cases.
pub fn lindley_bf_range(n: u64, q: Threshold, kind: BfKind) -> Result<Interval> {
    lindley_bf_range_with(n, q, kind, &PriorScales::default())
}

pub fn lindley_bf_range_with(
    n: u64,
    q: Threshold,
    kind: BfKind,
    scales: &PriorScales,
) -> Result<Interval> {
    let range = lindley_mean_range_with(n, q, kind, scales)?.ok_or_else(|| {
        Error::EmptyRange(format!(
            "no Lindley cases for {kind} at n = {n}, q = {}",
            q.value()
        ))
    })?;
    let upper = match kind {
        BfKind::RobertVague => robert_bf_upper(n, q)?,
        _ => conventional_bf01(kind, &GaussianSummary::new(n, range.lo())?, scales)?,
    };
    Interval::new(q.value(), upper)
}

/// Probability under H0 (x̄ ~ N(0, 1/n)) of observing a Lindley case,
/// counting both signs of x̄.
pub fn lindley_probability(n: u64, q: Threshold, kind: BfKind) -> Result<f64> {
    lindley_probability_with(n, q, kind, &PriorScales::default())
}

pub fn lindley_probability_with(
    n: u64,
    q: Threshold,
    kind: BfKind,
    scales: &PriorScales,
) -> Result<f64> {
    let Some(range) = lindley_mean_range_with(n, q, kind, scales)? else {
        return Ok(0.0);
    };
    let root_n = (n as f64).sqrt();
    // 2(Φ(b) − Φ(a)) written with upper tails to keep precision for large a, b.
    let upper_tail = |z: f64| 0.5 * erfc(z * std::f64::consts::FRAC_1_SQRT_2);
    Ok(2.0 * (upper_tail(range.lo() * root_n) - upper_tail(range.hi() * root_n)))
}

/// Large-n limit of the Robert-factor Lindley probability: erfc(√log q).
pub fn lindley_asymptote(q: f64) -> Result<f64> {
    if !(q >= 1.0) || !q.is_finite() {
        return Err(Error::domain(format!("threshold must be >= 1, got {q}")));
    }
    Ok(erfc(q.ln().sqrt()))
}

/// Conventional factor, counter-interval and Lindley flag for one summary.
pub fn detect_lindley_case(
    s: &GaussianSummary,
    q: Threshold,
    kind: BfKind,
) -> Result<LindleyReport> {
    detect_lindley_case_with(s, q, kind, &PriorScales::default())
}

pub fn detect_lindley_case_with(
    s: &GaussianSummary,
    q: Threshold,
    kind: BfKind,
    scales: &PriorScales,
) -> Result<LindleyReport> {
    let conventional_bf = conventional_bf01(kind, s, scales)?;
    let counter_interval = mu_bounds(q, s);
    Ok(LindleyReport {
        kind,
        summary: *s,
        q,
        conventional_bf,
        counter_interval,
        is_lindley_case: conventional_bf >= q.value() && counter_interval.is_some(),
    })
}

/// The `is_lindley_case` flag of [`detect_lindley_case_with`], skipping the
/// conventional factor when the counter-interval is already empty.
pub fn is_lindley_case(
    s: &GaussianSummary,
    q: Threshold,
    kind: BfKind,
    scales: &PriorScales,
) -> Result<bool> {
    if mu_bounds(q, s).is_none() {
        return Ok(false);
    }
    Ok(conventional_bf01(kind, s, scales)? >= q.value())
}
