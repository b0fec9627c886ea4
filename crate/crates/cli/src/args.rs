use std::f64::consts::FRAC_1_SQRT_2;
use std::path::PathBuf;

use bfdx_core::{BfKind, Interval, PriorScales, Threshold};
use clap::{ArgGroup, Args, Parser, Subcommand};

use crate::output::Format;

#[derive(Debug, Parser)]
#[command(
    name = "bfdx",
    version,
    about = "Bayes factors, evidence ratios, Lindley cases and ROPE decisions for point-null tests"
)]
pub struct Cli {
    /// Output format.
    #[arg(long, global = true, value_enum, default_value_t = Format::Human)]
    pub format: Format,

    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Bayes factors.
    #[command(subcommand)]
    Bf(BfCommand),
    /// Support, rejection and point-factor regions.
    #[command(subcommand)]
    Region(RegionCommand),
    /// Lindley-case diagnostics.
    #[command(subcommand)]
    Lindley(LindleyCommand),
    /// Decisions against a region of practical equivalence.
    #[command(subcommand)]
    Rope(RopeCommand),
    /// Monte Carlo checks.
    #[command(subcommand)]
    Sim(SimCommand),
    /// Plot data for the log point-factor curves.
    Fig(FigArgs),
    /// The two μ with ER = 1/q at the mean where ER(0) = q.
    Quandary(QuandaryArgs),
}

#[derive(Debug, Subcommand)]
pub enum BfCommand {
    /// Robert's known-variance factor B01.
    Robert(RobertArgs),
    /// JZS t-test factor B01.
    Jzs(TTestArgs),
    /// Scaled-information t-test factor B01.
    Si(TTestArgs),
    /// Binomial B01 for θ = 1/2 against a uniform prior.
    Binom(BinomArgs),
    /// Point factor for μ against the null value.
    Point(PointArgs),
}

#[derive(Debug, Subcommand)]
pub enum RegionCommand {
    /// Gaussian support and rejection regions.
    SupportGauss(GaussThresholdArgs),
    /// Binomial support and rejection regions.
    SupportBinom(BinomThresholdArgs),
    /// μ whose point factor against μ = 0 is at least q.
    MuBounds(GaussThresholdArgs),
}

#[derive(Debug, Subcommand)]
pub enum LindleyCommand {
    /// Sample means and Bayes factors that produce Lindley cases.
    Range(LindleyArgs),
    /// Probability of a Lindley case under the null.
    Prob(LindleyArgs),
    /// Large-n limit of the Robert-factor probability.
    Asymptote(AsymptoteArgs),
    /// Diagnose one summary.
    Detect(DetectArgs),
}

#[derive(Debug, Subcommand)]
pub enum RopeCommand {
    /// Accept, reject or withhold judgement on the null.
    Decide(RopeArgs),
}

#[derive(Debug, Subcommand)]
pub enum SimCommand {
    /// Simulated Lindley-case rate under the null.
    Lindley(SimArgs),
}

#[derive(Debug, Clone, Copy, Args)]
pub struct GaussianArgs {
    /// Sample size.
    #[arg(long)]
    pub n: u64,
    /// Sample mean (unit population variance).
    #[arg(long, allow_hyphen_values = true)]
    pub mean: f64,
}

#[derive(Debug, Clone, Copy, Args)]
pub struct ScaleArgs {
    /// Scale of the JZS Cauchy prior on effect size.
    #[arg(long, default_value_t = FRAC_1_SQRT_2)]
    pub jzs_r: f64,
    /// Variance of the scaled-information normal prior on effect size.
    #[arg(long, default_value_t = 0.5)]
    pub si_variance: f64,
}

impl ScaleArgs {
    pub fn scales(&self) -> PriorScales {
        PriorScales {
            jzs_r: self.jzs_r,
            si_variance: self.si_variance,
        }
    }
}

#[derive(Debug, Args)]
pub struct RobertArgs {
    #[command(flatten)]
    pub data: GaussianArgs,
    /// Also report the sample mean at which B01 equals q.
    #[arg(long, value_parser = parse_threshold)]
    pub q: Option<Threshold>,
}

#[derive(Debug, Args)]
pub struct TTestArgs {
    #[command(flatten)]
    pub data: GaussianArgs,
    /// Also report the t statistic at which B01 equals q.
    #[arg(long, value_parser = parse_threshold)]
    pub q: Option<Threshold>,
    #[command(flatten)]
    pub scales: ScaleArgs,
}

#[derive(Debug, Args)]
pub struct BinomArgs {
    /// Number of trials.
    #[arg(long)]
    pub n: u64,
    /// Number of successes.
    #[arg(long)]
    pub k: u64,
}

#[derive(Debug, Args)]
pub struct PointArgs {
    #[command(flatten)]
    pub data: GaussianArgs,
    /// Point alternative.
    #[arg(long, allow_hyphen_values = true)]
    pub mu: f64,
    /// Point null.
    #[arg(long, allow_hyphen_values = true, default_value_t = 0.0)]
    pub null: f64,
}

#[derive(Debug, Args)]
pub struct GaussThresholdArgs {
    #[command(flatten)]
    pub data: GaussianArgs,
    /// Evidence threshold, > 1.
    #[arg(long, value_parser = parse_threshold)]
    pub q: Threshold,
}

#[derive(Debug, Args)]
pub struct BinomThresholdArgs {
    #[command(flatten)]
    pub data: BinomArgs,
    /// Evidence threshold, > 1.
    #[arg(long, value_parser = parse_threshold)]
    pub q: Threshold,
}

#[derive(Debug, Args)]
pub struct LindleyArgs {
    /// Sample size.
    #[arg(long)]
    pub n: u64,
    /// Evidence threshold, > 1.
    #[arg(long, value_parser = parse_threshold)]
    pub q: Threshold,
    /// Conventional Bayes factor: robert, jzs or si.
    #[arg(long, value_parser = parse_kind, default_value = "robert")]
    pub kind: BfKind,
    #[command(flatten)]
    pub scales: ScaleArgs,
}

#[derive(Debug, Args)]
pub struct AsymptoteArgs {
    /// Evidence threshold, >= 1.
    #[arg(long)]
    pub q: f64,
}

#[derive(Debug, Args)]
pub struct DetectArgs {
    #[command(flatten)]
    pub data: GaussianArgs,
    /// Evidence threshold, > 1.
    #[arg(long, value_parser = parse_threshold)]
    pub q: Threshold,
    /// Conventional Bayes factor: robert, jzs or si.
    #[arg(long, value_parser = parse_kind, default_value = "robert")]
    pub kind: BfKind,
    #[command(flatten)]
    pub scales: ScaleArgs,
}

#[derive(Debug, Args)]
#[command(group(ArgGroup::new("data").required(true).args(["mean", "k"])))]
pub struct RopeArgs {
    /// Sample size (trials for binomial data).
    #[arg(long)]
    pub n: u64,
    /// Sample mean, for Gaussian data.
    #[arg(long, allow_hyphen_values = true)]
    pub mean: Option<f64>,
    /// Number of successes, for binomial data.
    #[arg(long)]
    pub k: Option<u64>,
    /// Evidence threshold, > 1.
    #[arg(long, value_parser = parse_threshold)]
    pub q: Threshold,
    /// ROPE as LO,HI.
    #[arg(long, allow_hyphen_values = true, value_parser = parse_interval)]
    pub rope: Interval,
    /// Null value; defaults to 0 for Gaussian and 0.5 for binomial data.
    #[arg(long, allow_hyphen_values = true)]
    pub null: Option<f64>,
}

#[derive(Debug, Args)]
pub struct SimArgs {
    #[command(flatten)]
    pub lindley: LindleyArgs,
    /// Number of simulated sample means.
    #[arg(long, default_value_t = 1_000_000)]
    pub reps: u64,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
}

#[derive(Debug, Args)]
pub struct FigArgs {
    /// Figure number: 1 (one curve) or 2 (two sample sizes).
    #[arg(value_parser = clap::value_parser!(u8).range(1..=2))]
    pub figure: u8,
    /// Sample size of the first curve.
    #[arg(long)]
    pub n: u64,
    /// Sample size of the second curve (figure 2); defaults to 2n.
    #[arg(long)]
    pub n2: Option<u64>,
    /// Evidence threshold, > 1.
    #[arg(long, value_parser = parse_threshold)]
    pub q: Threshold,
    /// Sample mean shared by the curves; defaults to the Robert threshold mean at n.
    #[arg(long, allow_hyphen_values = true)]
    pub mean: Option<f64>,
    /// Write the CSV here instead of standard output.
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct QuandaryArgs {
    /// Sample size.
    #[arg(long)]
    pub n: u64,
    /// Evidence threshold, > 1.
    #[arg(long, value_parser = parse_threshold)]
    pub q: Threshold,
}

fn parse_f64(s: &str) -> Result<f64, String> {
    s.trim()
        .parse::<f64>()
        .map_err(|e| format!("'{s}' is not a number: {e}"))
}

fn parse_threshold(s: &str) -> Result<Threshold, String> {
    Threshold::new(parse_f64(s)?).map_err(|e| e.to_string())
}

fn parse_kind(s: &str) -> Result<BfKind, String> {
    s.parse().map_err(|e: bfdx_core::Error| e.to_string())
}

fn parse_interval(s: &str) -> Result<Interval, String> {
    let (lo, hi) = s
        .split_once(',')
        .ok_or_else(|| format!("expected LO,HI, got '{s}'"))?;
    Interval::new(parse_f64(lo)?, parse_f64(hi)?).map_err(|e| e.to_string())
}
