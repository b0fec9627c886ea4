//! Numerical toolkit for point-null hypothesis tests.
//!
//! The crate computes conventional Bayes factors (binomial, Robert's
//! known-variance factor, JZS and scaled-information t-test factors),
//! point-versus-point factors, evidence ratios with their support and
//! rejection regions, and diagnoses "Lindley cases": data for which a
//! vague-alternative Bayes factor favours the null while specific point
//! alternatives are favoured over it by the same margin. The `rope` module
//! turns support and rejection regions into accept / reject decisions
//! against a region of practical equivalence, and `simulation` checks the
//! analytic Lindley-case probabilities by Monte Carlo.
//!
//! Population variance is fixed at one throughout, so sample means are in
//! standard-deviation units and the t statistic is `mean * sqrt(n)`.

// `!(x > 0.0)` is used on purpose: it also rejects NaN.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod bayes_factors;
pub mod error;
pub mod evidence_ratios;
pub mod interval;
pub mod lindley;
pub mod numerics;
pub mod rope;
pub mod simulation;

pub use bayes_factors::{BfKind, BinomialData, GaussianSummary, PriorScales, Threshold};
pub use error::{Error, Result};
pub use evidence_ratios::RegionSet;
pub use interval::Interval;
pub use lindley::LindleyReport;
pub use numerics::Tolerance;
pub use rope::{Rope, RopeVerdict, Verdict};
pub use simulation::SimulationResult;
