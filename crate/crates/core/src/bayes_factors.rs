//! Bayes factors for point nulls.
//!
//! Conventions used throughout:
//!
//! * `B01`-style functions (`binom_bf01`, `robert_bf`, `jzs_bf01`,
//!   `si_bf01`) return the factor for the null against a vague alternative;
//!   values above one favour the null.
//! * Point-versus-point factors take `(null, alternative)` in that order and
//!   return the factor *for the alternative*, so `point_bf(0, μ, s) > 1`
//!   means μ is better supported than 0.
//! * The t statistic of a [`GaussianSummary`] is `mean * sqrt(n)` (unit
//!   variance is known).

use std::cell::RefCell;
use std::f64::consts::{FRAC_1_SQRT_2, PI};
use std::fmt;
use std::str::FromStr;

use serde::Serialize;

use crate::error::{Error, Result};
use crate::interval::Interval;
use crate::numerics::{self, integrate, ln_choose, xlny, Tolerance};

/// `n` two-outcome trials with `k` successes.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct BinomialData {
    n_trials: u64,
    k_successes: u64,
}

impl BinomialData {
    /// `n = 0` is allowed and describes "no data".
    pub fn new(n_trials: u64, k_successes: u64) -> Result<Self> {
        if k_successes > n_trials {
            return Err(Error::domain(format!(
                "successes ({k_successes}) exceed trials ({n_trials})"
            )));
        }
        Ok(BinomialData {
            n_trials,
            k_successes,
        })
    }

    pub fn n(&self) -> u64 {
        self.n_trials
    }

    pub fn k(&self) -> u64 {
        self.k_successes
    }

    /// Sample proportion `k / n`; one half when there are no trials.
    pub fn proportion(&self) -> f64 {
        if self.n_trials == 0 {
            0.5
        } else {
            self.k_successes as f64 / self.n_trials as f64
        }
    }

    pub(crate) fn ln_choose(&self) -> f64 {
        ln_choose(self.n_trials, self.k_successes).expect("k <= n by construction")
    }

    /// log θᵏ(1−θ)ⁿ⁻ᵏ, without the binomial coefficient.
    pub(crate) fn ln_kernel(&self, theta: f64) -> Result<f64> {
        if !(0.0..=1.0).contains(&theta) {
            return Err(Error::domain(format!(
                "theta must lie in [0, 1], got {theta}"
            )));
        }
        let k = self.k_successes as f64;
        let m = (self.n_trials - self.k_successes) as f64;
        let v = xlny(k, theta) + xlny(m, 1.0 - theta);
        if v.is_nan() {
            return Err(Error::domain(format!(
                "likelihood undefined at theta = {theta}"
            )));
        }
        Ok(v)
    }
}

/// Sample size and sample mean from a unit-variance normal population.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct GaussianSummary {
    n: u64,
    mean: f64,
}

impl GaussianSummary {
    pub fn new(n: u64, mean: f64) -> Result<Self> {
        if n == 0 {
            return Err(Error::domain("sample size must be at least 1"));
        }
        if !mean.is_finite() {
            return Err(Error::domain(format!(
                "sample mean must be finite, got {mean}"
            )));
        }
        Ok(GaussianSummary { n, mean })
    }

    /// Summary with the mean implied by a t statistic, `t / sqrt(n)`.
    pub fn from_t(t: f64, n: u64) -> Result<Self> {
        GaussianSummary::new(n, t / (n as f64).sqrt())
    }

    pub fn n(&self) -> u64 {
        self.n
    }

    pub fn mean(&self) -> f64 {
        self.mean
    }

    pub fn t_statistic(&self) -> f64 {
        self.mean * (self.n as f64).sqrt()
    }

    pub(crate) fn n_f64(&self) -> f64 {
        self.n as f64
    }
}

/// The vague alternative a conventional Bayes factor is computed against.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum BfKind {
    /// Robert's known-variance factor with a unit-information normal prior on μ.
    RobertVague,
    /// Cauchy prior on standardized effect size.
    Jzs,
    /// Normal prior on standardized effect size.
    ScaledInformation,
}

impl BfKind {
    pub const ALL: [BfKind; 3] = [BfKind::RobertVague, BfKind::Jzs, BfKind::ScaledInformation];

    pub fn name(&self) -> &'static str {
        match self {
            BfKind::RobertVague => "robert",
            BfKind::Jzs => "jzs",
            BfKind::ScaledInformation => "si",
        }
    }
}

impl fmt::Display for BfKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for BfKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "robert" | "robert_vague" | "robert-vague" => Ok(BfKind::RobertVague),
            "jzs" => Ok(BfKind::Jzs),
            "si" | "scaled_information" | "scaled-information" => Ok(BfKind::ScaledInformation),
            other => Err(Error::domain(format!(
                "unknown Bayes factor kind '{other}' (expected robert, jzs or si)"
            ))),
        }
    }
}

/// Evidence threshold `q > 1`; `1/q` is the matching rejection level.
#[derive(Debug, Clone, Copy, PartialEq, PartialOrd, Serialize)]
#[serde(transparent)]
pub struct Threshold(f64);

impl Threshold {
    pub fn new(q: f64) -> Result<Self> {
        if !(q > 1.0) || !q.is_finite() {
            return Err(Error::domain(format!(
                "threshold must be finite and > 1, got {q}"
            )));
        }
        Ok(Threshold(q))
    }

    pub fn value(&self) -> f64 {
        self.0
    }

    pub fn ln(&self) -> f64 {
        self.0.ln()
    }
}

/// Prior scales for the t-test Bayes factors.
///
/// The defaults (`r = √2/2` for the Cauchy prior, variance `1/2` for the
/// normal prior) reproduce the published thresholds t = 2.467 (JZS) and
/// t = 2.373 (scaled information) at n = 5000, q = 3.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct PriorScales {
    /// Scale of the Cauchy prior on effect size.
    pub jzs_r: f64,
    /// Variance of the normal prior on effect size.
    pub si_variance: f64,
}

impl Default for PriorScales {
    fn default() -> Self {
        PriorScales {
            jzs_r: FRAC_1_SQRT_2,
            si_variance: 0.5,
        }
    }
}

/// P(data | θ = 1/2) = C(n, k)·0.5ⁿ.
pub fn binom_h0_likelihood(d: &BinomialData) -> f64 {
    (d.ln_choose() + d.n() as f64 * 0.5f64.ln()).exp()
}

/// Marginal likelihood under a uniform prior on θ, exactly `1/(n+1)`.
pub fn binom_h1_marginal(d: &BinomialData) -> f64 {
    1.0 / (d.n() as f64 + 1.0)
}

pub fn ln_binom_bf01(d: &BinomialData) -> f64 {
    let n = d.n() as f64;
    (n + 1.0).ln() + d.ln_choose() + n * 0.5f64.ln()
}

/// B01 for θ = 1/2 against a uniform prior: (n+1)·C(n, k)·0.5ⁿ.
pub fn binom_bf01(d: &BinomialData) -> f64 {
    ln_binom_bf01(d).exp()
}

pub fn ln_binom_point_bf(theta: f64, d: &BinomialData, theta0: f64) -> Result<f64> {
    if !(theta0 > 0.0 && theta0 < 1.0) {
        return Err(Error::domain(format!(
            "theta0 must lie in (0, 1), got {theta0}"
        )));
    }
    let alt = d.ln_kernel(theta)?;
    if alt == f64::NEG_INFINITY {
        return Err(Error::domain(format!(
            "theta = {theta} has zero likelihood for k = {} of n = {}",
            d.k(),
            d.n()
        )));
    }
    Ok(alt - d.ln_kernel(theta0)?)
}

/// Likelihood ratio of a point alternative θ against the point null θ₀.
pub fn binom_point_bf(theta: f64, d: &BinomialData, theta0: f64) -> Result<f64> {
    ln_binom_point_bf(theta, d, theta0).map(f64::exp)
}

pub fn ln_robert_bf(s: &GaussianSummary) -> f64 {
    let n = s.n_f64();
    let m = s.mean();
    0.5 * (n + 1.0).ln() - n * n * m * m / (2.0 * n + 2.0)
}

/// Robert's known-variance B01: √(n+1)·exp(−n²x̄²/(2n+2)).
pub fn robert_bf(s: &GaussianSummary) -> f64 {
    ln_robert_bf(s).exp()
}

/// Nonnegative sample mean at which `robert_bf` equals `q`.
pub fn robert_required_mean(q: Threshold, n: u64) -> Result<f64> {
    if n == 0 {
        return Err(Error::domain("sample size must be at least 1"));
    }
    let nf = n as f64;
    let ln_n1 = (nf + 1.0).ln();
    let radicand = ln_n1 - 2.0 * q.ln();
    if radicand < -4.0 * f64::EPSILON * ln_n1 {
        return Err(Error::infeasible(format!(
            "Robert B01 is at most sqrt(n+1) = {:.6} < q = {} at n = {n}",
            (nf + 1.0).sqrt(),
            q.value()
        )));
    }
    Ok(((nf + 1.0) * radicand.max(0.0)).sqrt() / nf)
}

pub fn ln_point_bf(null_mu: f64, alt_mu: f64, s: &GaussianSummary) -> f64 {
    let m = s.mean();
    let d0 = m - null_mu;
    let d1 = m - alt_mu;
    0.5 * s.n_f64() * (d0 * d0 - d1 * d1)
}

/// Factor for the point alternative `alt_mu` against the point null `null_mu`.
pub fn point_bf(null_mu: f64, alt_mu: f64, s: &GaussianSummary) -> f64 {
    ln_point_bf(null_mu, alt_mu, s).exp()
}

/// μ values whose point factor against μ = 0 reaches `q`: x̄ ± √(x̄² − 2 log q / n).
///
/// `None` when n·x̄² ≤ 2 log q, i.e. no point alternative beats the null by `q`.
pub fn mu_bounds(q: Threshold, s: &GaussianSummary) -> Option<Interval> {
    let half = mu_half_width(s.n_f64(), s.mean(), q.value())?;
    Interval::nonempty(s.mean() - half, s.mean() + half)
}

/// Half-width √(n x̄² − 2 log q)/√n of the point-factor region, for real `n`.
pub fn mu_half_width(n: f64, mean: f64, q: f64) -> Option<f64> {
    let disc = n * mean * mean - 2.0 * q.ln();
    (disc > 0.0).then(|| disc.sqrt() / n.sqrt())
}

/// d/dn of [`mu_half_width`]: log q / (n^{3/2} √(n x̄² − 2 log q)).
pub fn mu_half_width_dn(n: f64, mean: f64, q: f64) -> Option<f64> {
    let disc = n * mean * mean - 2.0 * q.ln();
    (disc > 0.0).then(|| q.ln() / (n.powf(1.5) * disc.sqrt()))
}

/// Robert B01 at the smallest mean for which `mu_bounds` is nonempty,
/// x̄ = √(2 log q / n). This is the largest conventional factor that can
/// still co-occur with point alternatives beating the null by `q`.
pub fn robert_bf_upper(n: u64, q: Threshold) -> Result<f64> {
    let mean = (2.0 * q.ln() / n as f64).sqrt();
    Ok(robert_bf(&GaussianSummary::new(n, mean)?))
}

/// Closed form √(n+1)·exp(−n·2 log q/(2n+2)) of [`robert_bf_upper`] for real n.
pub fn robert_bf_upper_closed(n: f64, q: f64) -> f64 {
    ((n + 1.0).sqrt().ln() - n * 2.0 * q.ln() / (2.0 * n + 2.0)).exp()
}

/// d/dn of [`robert_bf_upper_closed`]: q^{1/(n+1)−1}(n − 2 log q + 1) / (2(n+1)^{3/2}).
pub fn robert_bf_upper_dn(n: f64, q: f64) -> f64 {
    q.powf(1.0 / (n + 1.0) - 1.0) * (n - 2.0 * q.ln() + 1.0) / (2.0 * (n + 1.0).powf(1.5))
}

fn check_t_args(t: f64, n: u64) -> Result<f64> {
    if n < 2 {
        return Err(Error::domain(format!(
            "t-test Bayes factors need n >= 2, got {n}"
        )));
    }
    if !t.is_finite() {
        return Err(Error::domain(format!("t must be finite, got {t}")));
    }
    Ok((n - 1) as f64)
}

/// log of the Student-t kernel (1 + t²/ν)^{−(ν+1)/2}.
fn ln_t_kernel(t2_over_nu: f64, nu: f64) -> f64 {
    -0.5 * (nu + 1.0) * t2_over_nu.ln_1p()
}

pub fn ln_jzs_bf01_with_scale(t: f64, n: u64, r: f64) -> Result<f64> {
    let nu = check_t_args(t, n)?;
    if !(r > 0.0) || !r.is_finite() {
        return Err(Error::domain(format!("Cauchy scale must be > 0, got {r}")));
    }
    let nf = n as f64;
    let t2 = t * t;
    let ln_null = ln_t_kernel(t2 / nu, nu);
    let ln_norm = -0.5 * (2.0 * PI).ln();
    // Alternative marginal relative to the null kernel, as a mixture over
    // the prior variance g of effect size (inverse chi-square, one df).
    let integrand = |g: f64| {
        if g <= 0.0 {
            return 0.0;
        }
        let a = 1.0 + nf * g * r * r;
        let ln_alt = -0.5 * a.ln() + ln_t_kernel(t2 / (a * nu), nu);
        let ln_prior = ln_norm - 1.5 * g.ln() - 0.5 / g;
        (ln_alt - ln_null + ln_prior).exp()
    };
    let ratio = integrate(integrand, 0.0, f64::INFINITY, &Tolerance::default())?;
    Ok(-ratio.ln())
}

/// JZS B01 with Cauchy prior scale `r` on effect size.
pub fn jzs_bf01_with_scale(t: f64, n: u64, r: f64) -> Result<f64> {
    ln_jzs_bf01_with_scale(t, n, r).map(f64::exp)
}

/// JZS B01 at the default prior scale.
pub fn jzs_bf01(t: f64, n: u64) -> Result<f64> {
    jzs_bf01_with_scale(t, n, PriorScales::default().jzs_r)
}

pub fn ln_si_bf01_with_variance(t: f64, n: u64, variance: f64) -> Result<f64> {
    let nu = check_t_args(t, n)?;
    if !(variance > 0.0) || !variance.is_finite() {
        return Err(Error::domain(format!(
            "prior variance must be > 0, got {variance}"
        )));
    }
    let a = 1.0 + n as f64 * variance;
    let t2 = t * t;
    Ok(ln_t_kernel(t2 / nu, nu) + 0.5 * a.ln() - ln_t_kernel(t2 / (a * nu), nu))
}

/// Scaled-information B01 with a normal prior of the given variance on effect size.
pub fn si_bf01_with_variance(t: f64, n: u64, variance: f64) -> Result<f64> {
    ln_si_bf01_with_variance(t, n, variance).map(f64::exp)
}

/// Scaled-information B01 at the default prior variance.
pub fn si_bf01(t: f64, n: u64) -> Result<f64> {
    si_bf01_with_variance(t, n, PriorScales::default().si_variance)
}

/// log B01 of `kind` for the summary `s`.
pub fn ln_conventional_bf01(
    kind: BfKind,
    s: &GaussianSummary,
    scales: &PriorScales,
) -> Result<f64> {
    match kind {
        BfKind::RobertVague => Ok(ln_robert_bf(s)),
        BfKind::Jzs => ln_jzs_bf01_with_scale(s.t_statistic(), s.n(), scales.jzs_r),
        BfKind::ScaledInformation => {
            ln_si_bf01_with_variance(s.t_statistic(), s.n(), scales.si_variance)
        }
    }
}

pub fn conventional_bf01(kind: BfKind, s: &GaussianSummary, scales: &PriorScales) -> Result<f64> {
    ln_conventional_bf01(kind, s, scales).map(f64::exp)
}

/// Upper end of the t bracket searched by [`bf_threshold_t`].
pub const T_SEARCH_MAX: f64 = 10.0;

fn threshold_tolerance() -> Tolerance {
    Tolerance {
        abs_tol: 1e-10,
        ..Tolerance::default()
    }
}

/// The t ≥ 0 at which B01 of `kind` equals `q`, with default prior scales.
pub fn bf_threshold_t(kind: BfKind, q: Threshold, n: u64) -> Result<f64> {
    bf_threshold_t_with(kind, q, n, &PriorScales::default())
}

pub fn bf_threshold_t_with(
    kind: BfKind,
    q: Threshold,
    n: u64,
    scales: &PriorScales,
) -> Result<f64> {
    if kind == BfKind::RobertVague {
        return robert_required_mean(q, n)
            .map(|m| m * (n as f64).sqrt())
            .map_err(|e| match e {
                Error::Infeasible(msg) => Error::NoCrossing(msg),
                other => other,
            });
    }
    let ln_q = q.ln();
    let gap = |t: f64| -> Result<f64> {
        Ok(ln_conventional_bf01(kind, &GaussianSummary::from_t(t, n)?, scales)? - ln_q)
    };
    let at_zero = gap(0.0)?;
    if at_zero < 0.0 {
        return Err(Error::NoCrossing(format!(
            "{kind} B01 at t = 0 is {:.6} < q = {} (n = {n})",
            (at_zero + ln_q).exp(),
            q.value()
        )));
    }
    if gap(T_SEARCH_MAX)? > 0.0 {
        return Err(Error::NoCrossing(format!(
            "{kind} B01 still exceeds q = {} at t = {T_SEARCH_MAX} (n = {n})",
            q.value()
        )));
    }
    try_find_root(gap, 0.0, T_SEARCH_MAX, &threshold_tolerance())
}

/// Prior scale (Cauchy `r` for JZS, normal variance for scaled information)
/// at which the threshold t for `q` at sample size `n` equals `target_t`,
/// searched over `[lo, hi]`.
pub fn calibrate_prior_scale(
    kind: BfKind,
    q: Threshold,
    n: u64,
    target_t: f64,
    lo: f64,
    hi: f64,
) -> Result<f64> {
    let scales_for = |x: f64| match kind {
        BfKind::Jzs => Ok(PriorScales {
            jzs_r: x,
            ..PriorScales::default()
        }),
        BfKind::ScaledInformation => Ok(PriorScales {
            si_variance: x,
            ..PriorScales::default()
        }),
        BfKind::RobertVague => Err(Error::domain("Robert's factor has no free prior scale")),
    };
    let gap = |x: f64| Ok(bf_threshold_t_with(kind, q, n, &scales_for(x)?)? - target_t);
    try_find_root(gap, lo, hi, &threshold_tolerance())
}

/// [`numerics::find_root`] for a fallible function; the first error raised
/// by `f` is returned instead of a root.
pub(crate) fn try_find_root<F>(f: F, lo: f64, hi: f64, tol: &Tolerance) -> Result<f64>
where
    F: Fn(f64) -> Result<f64>,
{
    let failure = RefCell::new(None);
    let wrapped = |x: f64| match f(x) {
        Ok(v) => v,
        Err(e) => {
            failure.borrow_mut().get_or_insert(e);
            f64::NAN
        }
    };
    let root = numerics::find_root(wrapped, lo, hi, tol);
    match failure.into_inner() {
        Some(e) => Err(e),
        None => root,
    }
}

/// Posterior odds of H0 from B01 and prior odds.
pub fn posterior_odds(bf01: f64, prior_odds: f64) -> Result<f64> {
    if !(bf01 > 0.0) || !(prior_odds > 0.0) {
        return Err(Error::domain(format!(
            "Bayes factor and prior odds must be positive, got {bf01} and {prior_odds}"
        )));
    }
    Ok(bf01 * prior_odds)
}
