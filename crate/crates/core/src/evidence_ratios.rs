//! Evidence ratios ER(θ, x) = p(θ | x) / p(θ) and the support / rejection
//! regions they induce.
//!
//! For the normal mean the prior is N(0, 1), weighted as one observation.
//! [`gaussian_log_er`] is the large-n form used for all published numbers;
//! [`gaussian_log_er_exact`] is the exact conjugate ratio. For the binomial
//! proportion the prior is uniform, so ER is the normalized likelihood.

use serde::Serialize;

use crate::bayes_factors::{try_find_root, BinomialData, GaussianSummary, Threshold};
use crate::error::{Error, Result};
use crate::interval::Interval;
use crate::numerics::Tolerance;

/// Support intervals (ER ≥ q) and rejection intervals (ER ≤ 1/q) over a
/// parameter, built from one dataset at one threshold.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct RegionSet {
    support: Vec<Interval>,
    rejection: Vec<Interval>,
    threshold: Threshold,
}

impl RegionSet {
    /// Fails when any two intervals overlap.
    pub fn new(
        support: Vec<Interval>,
        rejection: Vec<Interval>,
        threshold: Threshold,
    ) -> Result<Self> {
        let all: Vec<&Interval> = support.iter().chain(rejection.iter()).collect();
        for (i, a) in all.iter().enumerate() {
            for b in &all[i + 1..] {
                if a.intersects(b) {
                    return Err(Error::domain(format!(
                        "region intervals {a} and {b} overlap"
                    )));
                }
            }
        }
        Ok(RegionSet {
            support,
            rejection,
            threshold,
        })
    }

    pub fn support(&self) -> &[Interval] {
        &self.support
    }

    pub fn rejection(&self) -> &[Interval] {
        &self.rejection
    }

    pub fn threshold(&self) -> Threshold {
        self.threshold
    }

    pub fn is_supported(&self, x: f64) -> bool {
        self.support.iter().any(|i| i.contains(x))
    }

    pub fn is_rejected(&self, x: f64) -> bool {
        self.rejection.iter().any(|i| i.contains(x))
    }
}

/// log ER(μ) = (x̄² − n(x̄ − μ)² + log n) / 2.
pub fn gaussian_log_er(s: &GaussianSummary, mu: f64) -> f64 {
    let n = s.n_f64();
    let m = s.mean();
    let d = m - mu;
    0.5 * (m * m - n * d * d + n.ln())
}

/// Exact log posterior-to-prior density ratio under the N(0, 1) prior:
/// (log(n+1) − n(x̄ − μ)² + n x̄²/(n+1)) / 2.
pub fn gaussian_log_er_exact(s: &GaussianSummary, mu: f64) -> f64 {
    let n = s.n_f64();
    let m = s.mean();
    let d = m - mu;
    0.5 * ((n + 1.0).ln() - n * d * d + n * m * m / (n + 1.0))
}

fn check_er_feasible(q: Threshold, n: u64) -> Result<f64> {
    if n < 2 {
        return Err(Error::domain(format!("needs n >= 2, got {n}")));
    }
    let ln_n = (n as f64).ln();
    let radicand = ln_n - 2.0 * q.ln();
    if radicand < -4.0 * f64::EPSILON * ln_n {
        return Err(Error::infeasible(format!(
            "ER at mu = 0 cannot reach q = {} at n = {n} (needs log n > 2 log q)",
            q.value()
        )));
    }
    Ok(radicand.max(0.0))
}

/// Nonnegative sample mean at which ER(0) = q: √((log n − 2 log q)/(n − 1)).
pub fn gaussian_required_mean(q: Threshold, n: u64) -> Result<f64> {
    let radicand = check_er_feasible(q, n)?;
    Ok((radicand / (n - 1) as f64).sqrt())
}

/// Closed region where ER(μ) ≥ q: x̄ ± √((x̄² + log n − 2 log q)/n).
pub fn gaussian_support_region(s: &GaussianSummary, q: Threshold) -> Option<Interval> {
    let n = s.n_f64();
    let m = s.mean();
    let disc = m * m + n.ln() - 2.0 * q.ln();
    if disc < 0.0 {
        return None;
    }
    let half = (disc / n).sqrt();
    Interval::nonempty(m - half, m + half)
}

/// The two rays where ER(μ) ≤ 1/q.
pub fn gaussian_rejection_region(s: &GaussianSummary, q: Threshold) -> Vec<Interval> {
    let n = s.n_f64();
    let m = s.mean();
    let half = ((m * m + n.ln() + 2.0 * q.ln()) / n).sqrt();
    vec![
        Interval::new(f64::NEG_INFINITY, m - half).expect("finite upper end"),
        Interval::new(m + half, f64::INFINITY).expect("finite lower end"),
    ]
}

pub fn gaussian_regions(s: &GaussianSummary, q: Threshold) -> RegionSet {
    let support = gaussian_support_region(s, q).into_iter().collect();
    RegionSet::new(support, gaussian_rejection_region(s, q), q)
        .expect("ER >= q and ER <= 1/q are disjoint for q > 1")
}

/// The two μ with ER(μ) = 1/q when x̄ = [`gaussian_required_mean`]:
/// x̄ ∓ √((2 log q (n − 2) + n log n)/(n(n − 1))), returned in increasing order.
pub fn quandary_pair(n: u64, q: Threshold) -> Result<(f64, f64)> {
    let mean = gaussian_required_mean(q, n)?;
    let nf = n as f64;
    let spread = ((2.0 * q.ln() * (nf - 2.0) + nf * nf.ln()) / (nf * (nf - 1.0))).sqrt();
    Ok((mean - spread, mean + spread))
}

pub fn ln_binom_er(theta: f64, d: &BinomialData) -> Result<f64> {
    let n = d.n() as f64;
    Ok((n + 1.0).ln() + d.ln_choose() + d.ln_kernel(theta)?)
}

/// (n+1)·C(n, k)·θᵏ(1−θ)ⁿ⁻ᵏ: posterior over prior density under a uniform prior.
pub fn binom_er(theta: f64, d: &BinomialData) -> Result<f64> {
    ln_binom_er(theta, d).map(f64::exp)
}

const THETA_EDGE: f64 = 1e-9;

/// The θ-interval where log ER ≥ `level`. ER is unimodal with mode k/n, so
/// the set is one interval, found by root finding on either side of the mode.
fn binom_superlevel(d: &BinomialData, level: f64) -> Result<Option<Interval>> {
    let mode = d.proportion().clamp(THETA_EDGE, 1.0 - THETA_EDGE);
    let gap = |theta: f64| Ok(ln_binom_er(theta, d)? - level);
    if gap(mode)? < 0.0 {
        return Ok(None);
    }
    let tol = Tolerance::default();
    let lo = if gap(THETA_EDGE)? >= 0.0 {
        0.0
    } else {
        try_find_root(gap, THETA_EDGE, mode, &tol)?
    };
    let hi = if gap(1.0 - THETA_EDGE)? >= 0.0 {
        1.0
    } else {
        try_find_root(gap, mode, 1.0 - THETA_EDGE, &tol)?
    };
    Ok(Interval::nonempty(lo, hi))
}

/// Closed θ-interval where ER ≥ q, or `None` when ER never reaches q.
pub fn binom_support_region(d: &BinomialData, q: Threshold) -> Result<Option<Interval>> {
    binom_superlevel(d, q.ln())
}

/// θ-intervals (within [0, 1]) where ER ≤ 1/q.
pub fn binom_rejection_region(d: &BinomialData, q: Threshold) -> Result<Vec<Interval>> {
    let Some(kept) = binom_superlevel(d, -q.ln())? else {
        return Ok(vec![Interval::new(0.0, 1.0)?]);
    };
    let mut out = Vec::new();
    if kept.lo() > 0.0 {
        out.push(Interval::new(0.0, kept.lo())?);
    }
    if kept.hi() < 1.0 {
        out.push(Interval::new(kept.hi(), 1.0)?);
    }
    Ok(out)
}

pub fn binom_regions(d: &BinomialData, q: Threshold) -> Result<RegionSet> {
    let support = binom_support_region(d, q)?.into_iter().collect();
    RegionSet::new(support, binom_rejection_region(d, q)?, q)
}

/// ER(θ) = B(θ, θ₀) · ER(θ₀).
pub fn er_from_point_bf(point_bf_value: f64, er_at_null: f64) -> Result<f64> {
    if !(point_bf_value > 0.0) || !(er_at_null > 0.0) {
        return Err(Error::domain(format!(
            "point factor and null ER must be positive, got {point_bf_value} and {er_at_null}"
        )));
    }
    Ok(point_bf_value * er_at_null)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::bayes_factors::{binom_bf01, binom_point_bf, point_bf};
    use std::f64::consts::PI;

    fn q3() -> Threshold {
        Threshold::new(3.0).unwrap()
    }

    fn gs(n: u64, mean: f64) -> GaussianSummary {
        GaussianSummary::new(n, mean).unwrap()
    }

    #[test]
    fn log_er_examples() {
        let s = gs(5000, 0.035557);
        let at_mean = gaussian_log_er(&s, s.mean());
        assert!((at_mean - 0.5 * (s.mean().powi(2) + 5000f64.ln())).abs() < 1e-15);
        assert!((gaussian_log_er(&s, 0.0) - 3f64.ln()).abs() < 1e-3);
        assert!((gaussian_log_er(&s, 0.07111) - 3f64.ln()).abs() < 1e-3);
    }

    #[test]
    fn exact_log_er_is_density_ratio() {
        let normal = |x: f64, mu: f64, var: f64| {
            (-(x - mu).powi(2) / (2.0 * var)).exp() / (2.0 * PI * var).sqrt()
        };
        for &(n, m, mu) in &[(10u64, 0.4, 0.1), (5000, 0.035557, 0.02), (3, -1.2, 0.5)] {
            let s = gs(n, m);
            let nf = n as f64;
            let post = normal(mu, nf * m / (nf + 1.0), 1.0 / (nf + 1.0));
            let prior = normal(mu, 0.0, 1.0);
            let direct = (post / prior).ln();
            assert!(
                (gaussian_log_er_exact(&s, mu) - direct).abs() < 1e-10,
                "n={n}"
            );
        }
        // The large-n form tracks the exact one.
        let s = gs(100_000, 0.01);
        assert!((gaussian_log_er(&s, 0.012) - gaussian_log_er_exact(&s, 0.012)).abs() < 1e-4);
    }

    #[test]
    fn required_mean_examples() {
        let m = gaussian_required_mean(q3(), 5000).unwrap();
        assert!((m - 0.035556).abs() < 1e-6, "m={m}");
        let q = Threshold::new(5000f64.sqrt()).unwrap();
        assert!(gaussian_required_mean(q, 5000).unwrap() < 1e-6);
        assert!(matches!(
            gaussian_required_mean(Threshold::new(100.0).unwrap(), 5000),
            Err(Error::Infeasible(_))
        ));
        assert!(gaussian_required_mean(q3(), 1).is_err());
    }

    #[test]
    fn required_mean_round_trip() {
        let mut x = 0.123456789f64;
        for _ in 0..100 {
            x = (x * 9301.0 + 0.49297).fract();
            let q = 1.0 + 9.0 * x;
            let n = 200 + (x * 7919.0 * 131.0) as u64;
            let thr = Threshold::new(q).unwrap();
            let m = gaussian_required_mean(thr, n).unwrap();
            assert!(
                (gaussian_log_er(&gs(n, m), 0.0) - q.ln()).abs() < 1e-10,
                "q={q} n={n}"
            );
        }
    }

    #[test]
    fn support_region_examples() {
        let s = gs(5000, 0.035557);
        let r = gaussian_support_region(&s, q3()).unwrap();
        assert!(
            r.lo().abs() < 1e-4 && (r.hi() - 0.07111).abs() < 1e-4,
            "{r}"
        );
        assert!(r.contains(s.mean()));
        assert!((r.midpoint() - s.mean()).abs() < 1e-15);
        for end in [r.lo(), r.hi()] {
            assert!((gaussian_log_er(&s, end) - 3f64.ln()).abs() < 1e-10);
        }
        assert!(gaussian_support_region(&gs(4, 0.0), Threshold::new(10.0).unwrap()).is_none());
    }

    #[test]
    fn quandary_pair_examples() {
        let (lo, hi) = quandary_pair(5000, q3()).unwrap();
        assert!(
            (lo + 0.01074).abs() < 2e-4 && (hi - 0.08185).abs() < 2e-4,
            "{lo} {hi}"
        );
        let m = gaussian_required_mean(q3(), 5000).unwrap();
        assert!(lo < 0.0 && 0.0 < hi && lo < m && m < hi);
        let s = gs(5000, m);
        for mu in [lo, hi] {
            assert!((gaussian_log_er(&s, mu) + 3f64.ln()).abs() < 1e-8);
        }
        let widths: Vec<f64> = [1e3, 1e4, 1e5, 1e6]
            .iter()
            .map(|&n| {
                let (a, b) = quandary_pair(n as u64, q3()).unwrap();
                b - a
            })
            .collect();
        assert!(widths.windows(2).all(|w| w[1] < w[0]), "{widths:?}");
    }

    #[test]
    fn binom_er_examples() {
        let d = BinomialData::new(985, 524).unwrap();
        let er0 = binom_er(0.5, &d).unwrap();
        assert!((er0 - 3.344).abs() / 3.344 < 5e-3);
        assert!((er0 - binom_bf01(&d)).abs() < 1e-12);
        let none = BinomialData::new(0, 0).unwrap();
        for th in [0.01, 0.5, 0.93] {
            assert!((binom_er(th, &none).unwrap() - 1.0).abs() < 1e-15);
        }
    }

    #[test]
    fn binom_support_region_examples() {
        let d = BinomialData::new(985, 524).unwrap();
        let r = binom_support_region(&d, q3()).unwrap().unwrap();
        assert!(
            (r.lo() - 0.499).abs() < 1e-3 && (r.hi() - 0.565).abs() < 1e-3,
            "{r}"
        );
        // The published endpoints are these roots rounded to three places.
        assert_eq!((r.lo() * 1000.0).round() / 1000.0, 0.499);
        assert_eq!((r.hi() * 1000.0).round() / 1000.0, 0.565);
        for end in [r.lo(), r.hi()] {
            assert!((binom_er(end, &d).unwrap() - 3.0).abs() < 1e-8);
        }
        assert!(r.contains(d.proportion()));

        let boundary = BinomialData::new(6193, 3193).unwrap();
        let regions = binom_regions(&boundary, q3()).unwrap();
        assert!(regions.is_supported(0.5));
        assert!(!regions.is_supported(0.495));
        assert!(regions.is_rejected(0.495));

        let big = Threshold::new(1e6).unwrap();
        assert!(binom_support_region(&d, big).unwrap().is_none());
    }

    #[test]
    fn binom_regions_at_the_edges() {
        let all_fail = BinomialData::new(20, 0).unwrap();
        let r = binom_support_region(&all_fail, q3()).unwrap().unwrap();
        assert_eq!(r.lo(), 0.0);
        let rej = binom_rejection_region(&all_fail, q3()).unwrap();
        assert_eq!(rej.len(), 1);
        assert_eq!(rej[0].hi(), 1.0);
        let none = BinomialData::new(0, 0).unwrap();
        assert!(binom_regions(&none, q3()).unwrap().support().is_empty());
        assert!(binom_regions(&none, q3()).unwrap().rejection().is_empty());
    }

    #[test]
    fn er_from_point_bf_examples() {
        assert!((er_from_point_bf(3.0, 3.344).unwrap() - 10.032).abs() < 1e-12);
        assert_eq!(er_from_point_bf(3.0, 3.0).unwrap(), 9.0);
        assert_eq!(
            er_from_point_bf(1.0, std::f64::consts::E).unwrap(),
            std::f64::consts::E
        );
        assert!(er_from_point_bf(0.0, 1.0).is_err());
    }

    #[test]
    fn binomial_ratio_identity() {
        let d = BinomialData::new(985, 524).unwrap();
        let er0 = binom_er(0.5, &d).unwrap();
        for th in [0.4, 0.51042, 0.532, 0.55349, 0.6] {
            let lhs = binom_er(th, &d).unwrap();
            let rhs = binom_point_bf(th, &d, 0.5).unwrap() * er0;
            assert!((lhs - rhs).abs() <= 1e-10 * lhs.max(1e-300), "th={th}");
        }
    }

    #[test]
    fn gaussian_ratio_identity() {
        let s = gs(5000, 0.035557);
        let pairs = [(0.01, 0.05), (-0.02, 0.03), (0.06, 0.0)];
        let consts: Vec<f64> = pairs
            .iter()
            .map(|&(a, b)| {
                (gaussian_log_er(&s, a) - gaussian_log_er(&s, b)).exp() / point_bf(b, a, &s)
            })
            .collect();
        for c in &consts {
            assert!((c - 1.0).abs() < 1e-9, "{consts:?}");
        }
    }

    #[test]
    fn region_set_rejects_overlap() {
        let a = Interval::new(0.0, 1.0).unwrap();
        let b = Interval::new(0.5, 2.0).unwrap();
        assert!(RegionSet::new(vec![a], vec![b], q3()).is_err());
        let regions = gaussian_regions(&gs(5000, 0.035557), q3());
        assert_eq!(regions.support().len(), 1);
        assert_eq!(regions.rejection().len(), 2);
    }
}
