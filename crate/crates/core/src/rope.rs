//! Decisions about a point null against a region of practical equivalence.
//!
//! The null is accepted when a support interval contains it and lies
//! entirely inside the ROPE, and rejected when a rejection interval covers
//! the whole ROPE. Anything else is indeterminate.

use serde::Serialize;

use crate::bayes_factors::GaussianSummary;
use crate::error::{Error, Result};
use crate::evidence_ratios::{gaussian_log_er, RegionSet};
use crate::interval::Interval;
use crate::numerics::{integrate, Tolerance};

/// Absolute slack on containment tests, absorbing root-finding error at
/// region endpoints.
pub const CONTAINMENT_SLACK: f64 = 1e-12;

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Rope {
    interval: Interval,
    null_value: f64,
}

impl Rope {
    /// The null value must lie strictly inside the interval.
    pub fn new(interval: Interval, null_value: f64) -> Result<Self> {
        if !(interval.lo() < null_value && null_value < interval.hi()) {
            return Err(Error::domain(format!(
                "null value {null_value} is not strictly inside the ROPE {interval}"
            )));
        }
        Ok(Rope {
            interval,
            null_value,
        })
    }

    pub fn interval(&self) -> Interval {
        self.interval
    }

    pub fn null_value(&self) -> f64 {
        self.null_value
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Verdict {
    AcceptNull,
    RejectNull,
    Indeterminate,
}

impl Verdict {
    pub fn name(&self) -> &'static str {
        match self {
            Verdict::AcceptNull => "accept_null",
            Verdict::RejectNull => "reject_null",
            Verdict::Indeterminate => "indeterminate",
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct RopeVerdict {
    verdict: Verdict,
    /// A support interval straddles a ROPE edge, so no verdict is reached.
    partial_overlap: bool,
    regions: RegionSet,
}

impl RopeVerdict {
    pub fn verdict(&self) -> Verdict {
        self.verdict
    }

    pub fn partial_overlap(&self) -> bool {
        self.partial_overlap
    }

    pub fn regions(&self) -> &RegionSet {
        &self.regions
    }
}

pub fn decide(regions: &RegionSet, rope: &Rope) -> RopeVerdict {
    let r = rope.interval();
    let accept = regions.support().iter().any(|s| {
        s.contains_with_slack(rope.null_value(), CONTAINMENT_SLACK)
            && r.encloses(s, CONTAINMENT_SLACK)
    });
    let reject = regions
        .rejection()
        .iter()
        .any(|rej| rej.encloses(&r, CONTAINMENT_SLACK));
    let verdict = match (accept, reject) {
        (true, false) => Verdict::AcceptNull,
        (false, true) => Verdict::RejectNull,
        // Both can only hold within the slack of a degenerate region.
        _ => Verdict::Indeterminate,
    };
    let partial_overlap = verdict == Verdict::Indeterminate
        && regions
            .support()
            .iter()
            .any(|s| s.intersects(&r) && !r.encloses(s, CONTAINMENT_SLACK));
    RopeVerdict {
        verdict,
        partial_overlap,
        regions: regions.clone(),
    }
}

/// Average of ER(μ) over the ROPE.
pub fn mean_er_in_rope(s: &GaussianSummary, rope: &Rope) -> Result<f64> {
    let r = rope.interval();
    if !r.lo().is_finite() || !r.hi().is_finite() {
        return Err(Error::domain("mean ER needs a bounded ROPE"));
    }
    let total = integrate(
        |mu| gaussian_log_er(s, mu).exp(),
        r.lo(),
        r.hi(),
        &Tolerance::default(),
    )?;
    Ok(total / r.width())
}
