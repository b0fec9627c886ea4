use std::fs::File;
use std::io::BufWriter;

use bfdx_core::bayes_factors::{
    bf_threshold_t_with, binom_h0_likelihood, binom_h1_marginal, ln_binom_bf01,
    ln_conventional_bf01, ln_point_bf, mu_bounds, robert_required_mean,
};
use bfdx_core::evidence_ratios::{
    binom_regions, gaussian_regions, gaussian_required_mean, quandary_pair,
};
use bfdx_core::lindley::{
    detect_lindley_case_with, lindley_asymptote, lindley_bf_range_with, lindley_mean_range_with,
    lindley_probability_with,
};
use bfdx_core::rope::{decide, mean_er_in_rope};
use bfdx_core::simulation::simulate_lindley_rate_with;
use bfdx_core::{BfKind, BinomialData, Error, GaussianSummary, Interval, RegionSet, Rope};

use crate::args::{
    BfCommand, BinomArgs, BinomThresholdArgs, Command, FigArgs, GaussThresholdArgs, LindleyArgs,
    LindleyCommand, QuandaryArgs, RegionCommand, RobertArgs, RopeArgs, RopeCommand, SimCommand,
    TTestArgs,
};
use crate::figures::{emit_figure_data, figure_table, Figure, FigureParams};
use crate::output::{Output, Record};
use crate::CliError;

/// A command's data, plus whether every requested quantity exists.
pub struct Outcome {
    pub output: Output,
    /// False when a region or range is empty or a target is unreachable;
    /// the output then carries empty fields and the exit code is 1.
    pub complete: bool,
}

impl Outcome {
    fn complete(record: Record) -> Self {
        Outcome {
            output: Output::Record(record),
            complete: true,
        }
    }

    fn partial(record: Record, complete: bool) -> Self {
        Outcome {
            output: Output::Record(record),
            complete,
        }
    }
}

/// `Ok(None)` for infeasible targets, other errors passed through.
fn feasible<T>(r: Result<T, Error>) -> Result<Option<T>, CliError> {
    match r {
        Ok(v) => Ok(Some(v)),
        Err(e) if e.is_infeasible() => Ok(None),
        Err(e) => Err(e.into()),
    }
}

pub fn execute(command: Command) -> Result<Outcome, CliError> {
    match command {
        Command::Bf(bf) => bayes_factor(bf),
        Command::Region(region) => match region {
            RegionCommand::SupportGauss(a) => support_gauss(a),
            RegionCommand::SupportBinom(a) => support_binom(a),
            RegionCommand::MuBounds(a) => mu_bounds_cmd(a),
        },
        Command::Lindley(l) => match l {
            LindleyCommand::Range(a) => lindley_range(a),
            LindleyCommand::Prob(a) => lindley_prob(a),
            LindleyCommand::Asymptote(a) => Ok(Outcome::complete(
                Record::new()
                    .with("q", a.q)
                    .with("asymptote", lindley_asymptote(a.q)?),
            )),
            LindleyCommand::Detect(a) => {
                let s = GaussianSummary::new(a.data.n, a.data.mean)?;
                let report = detect_lindley_case_with(&s, a.q, a.kind, &a.scales.scales())?;
                let counter = report.counter_interval();
                Ok(Outcome::complete(
                    Record::new()
                        .with("kind", a.kind.name())
                        .with("n", a.data.n)
                        .with("mean", a.data.mean)
                        .with("q", a.q.value())
                        .with("conventional_bf", report.conventional_bf())
                        .with("counter_lo", counter.map(|c| c.lo()))
                        .with("counter_hi", counter.map(|c| c.hi()))
                        .with("is_lindley_case", report.is_lindley_case()),
                ))
            }
        },
        Command::Rope(RopeCommand::Decide(a)) => rope_decide(a),
        Command::Sim(SimCommand::Lindley(a)) => {
            let l = &a.lindley;
            let sim =
                simulate_lindley_rate_with(l.n, l.q, l.kind, a.reps, a.seed, &l.scales.scales())?;
            let analytic = lindley_probability_with(l.n, l.q, l.kind, &l.scales.scales())?;
            let z = if sim.stderr() > 0.0 {
                Some((sim.rate() - analytic) / sim.stderr())
            } else {
                None
            };
            Ok(Outcome::complete(
                Record::new()
                    .with("kind", l.kind.name())
                    .with("n", l.n)
                    .with("q", l.q.value())
                    .with("reps", sim.reps())
                    .with("seed", sim.seed())
                    .with("hits", sim.hits())
                    .with("rate", sim.rate())
                    .with("stderr", sim.stderr())
                    .with("analytic", analytic)
                    .with("z", z),
            ))
        }
        Command::Fig(a) => figure(a),
        Command::Quandary(a) => quandary(a),
    }
}

fn bayes_factor(command: BfCommand) -> Result<Outcome, CliError> {
    match command {
        BfCommand::Robert(a) => robert(a),
        BfCommand::Jzs(a) => t_test(BfKind::Jzs, a),
        BfCommand::Si(a) => t_test(BfKind::ScaledInformation, a),
        BfCommand::Binom(BinomArgs { n, k }) => {
            let d = BinomialData::new(n, k)?;
            let ln_bf = ln_binom_bf01(&d);
            Ok(Outcome::complete(
                Record::new()
                    .with("n", n)
                    .with("k", k)
                    .with("bf01", ln_bf.exp())
                    .with("ln_bf01", ln_bf)
                    .with("h0_likelihood", binom_h0_likelihood(&d))
                    .with("h1_marginal", binom_h1_marginal(&d)),
            ))
        }
        BfCommand::Point(a) => {
            let s = GaussianSummary::new(a.data.n, a.data.mean)?;
            let ln_bf = ln_point_bf(a.null, a.mu, &s);
            Ok(Outcome::complete(
                Record::new()
                    .with("n", a.data.n)
                    .with("mean", a.data.mean)
                    .with("null", a.null)
                    .with("mu", a.mu)
                    .with("point_bf", ln_bf.exp())
                    .with("ln_point_bf", ln_bf),
            ))
        }
    }
}

fn conventional_record(kind: BfKind, s: &GaussianSummary, ln_bf: f64) -> Record {
    Record::new()
        .with("kind", kind.name())
        .with("n", s.n())
        .with("mean", s.mean())
        .with("t", s.t_statistic())
        .with("bf01", ln_bf.exp())
        .with("ln_bf01", ln_bf)
        .with("bf10", (-ln_bf).exp())
}

fn robert(a: RobertArgs) -> Result<Outcome, CliError> {
    let s = GaussianSummary::new(a.data.n, a.data.mean)?;
    let scales = Default::default();
    let mut record = conventional_record(
        BfKind::RobertVague,
        &s,
        ln_conventional_bf01(BfKind::RobertVague, &s, &scales)?,
    );
    let mut complete = true;
    if let Some(q) = a.q {
        let required = feasible(robert_required_mean(q, a.data.n))?;
        complete = required.is_some();
        record.push("q", q.value());
        record.push("required_mean", required);
    }
    Ok(Outcome::partial(record, complete))
}

fn t_test(kind: BfKind, a: TTestArgs) -> Result<Outcome, CliError> {
    let s = GaussianSummary::new(a.data.n, a.data.mean)?;
    let scales = a.scales.scales();
    let mut record = conventional_record(kind, &s, ln_conventional_bf01(kind, &s, &scales)?);
    match kind {
        BfKind::Jzs => record.push("jzs_r", scales.jzs_r),
        _ => record.push("si_variance", scales.si_variance),
    }
    let mut complete = true;
    if let Some(q) = a.q {
        let t = feasible(bf_threshold_t_with(kind, q, a.data.n, &scales))?;
        complete = t.is_some();
        record.push("q", q.value());
        record.push("threshold_t", t);
        record.push("required_mean", t.map(|t| t / (a.data.n as f64).sqrt()));
    }
    Ok(Outcome::partial(record, complete))
}

/// Upper end of the ray starting at `min` and lower end of the ray ending at `max`.
fn rejection_edges(regions: &RegionSet, min: f64, max: f64) -> (Option<f64>, Option<f64>) {
    let below = regions
        .rejection()
        .iter()
        .find(|r| r.lo() == min)
        .map(Interval::hi);
    let above = regions
        .rejection()
        .iter()
        .find(|r| r.hi() == max)
        .map(Interval::lo);
    (below, above)
}

fn region_fields(record: &mut Record, regions: &RegionSet, min: f64, max: f64) -> bool {
    let support = regions.support().first().copied();
    let (below, above) = rejection_edges(regions, min, max);
    record.push("support_lo", support.map(|s| s.lo()));
    record.push("support_hi", support.map(|s| s.hi()));
    record.push("rejection_below", below);
    record.push("rejection_above", above);
    support.is_some()
}

fn support_gauss(a: GaussThresholdArgs) -> Result<Outcome, CliError> {
    let s = GaussianSummary::new(a.data.n, a.data.mean)?;
    let mut record = Record::new()
        .with("n", a.data.n)
        .with("mean", a.data.mean)
        .with("q", a.q.value());
    let found = region_fields(
        &mut record,
        &gaussian_regions(&s, a.q),
        f64::NEG_INFINITY,
        f64::INFINITY,
    );
    Ok(Outcome::partial(record, found))
}

fn support_binom(a: BinomThresholdArgs) -> Result<Outcome, CliError> {
    let d = BinomialData::new(a.data.n, a.data.k)?;
    let mut record = Record::new()
        .with("n", a.data.n)
        .with("k", a.data.k)
        .with("q", a.q.value());
    let found = region_fields(&mut record, &binom_regions(&d, a.q)?, 0.0, 1.0);
    Ok(Outcome::partial(record, found))
}

fn mu_bounds_cmd(a: GaussThresholdArgs) -> Result<Outcome, CliError> {
    let s = GaussianSummary::new(a.data.n, a.data.mean)?;
    let bounds = mu_bounds(a.q, &s);
    Ok(Outcome::partial(
        Record::new()
            .with("n", a.data.n)
            .with("mean", a.data.mean)
            .with("q", a.q.value())
            .with("lo", bounds.map(|b| b.lo()))
            .with("hi", bounds.map(|b| b.hi())),
        bounds.is_some(),
    ))
}

fn lindley_range(a: LindleyArgs) -> Result<Outcome, CliError> {
    let scales = a.scales.scales();
    let means = lindley_mean_range_with(a.n, a.q, a.kind, &scales)?;
    let bfs = match means {
        Some(_) => Some(lindley_bf_range_with(a.n, a.q, a.kind, &scales)?),
        None => None,
    };
    Ok(Outcome::partial(
        Record::new()
            .with("kind", a.kind.name())
            .with("n", a.n)
            .with("q", a.q.value())
            .with("mean_lo", means.map(|m| m.lo()))
            .with("mean_hi", means.map(|m| m.hi()))
            .with("bf_lo", bfs.map(|b| b.lo()))
            .with("bf_hi", bfs.map(|b| b.hi())),
        means.is_some(),
    ))
}

fn lindley_prob(a: LindleyArgs) -> Result<Outcome, CliError> {
    let p = lindley_probability_with(a.n, a.q, a.kind, &a.scales.scales())?;
    Ok(Outcome::complete(
        Record::new()
            .with("kind", a.kind.name())
            .with("n", a.n)
            .with("q", a.q.value())
            .with("probability", p),
    ))
}

fn rope_decide(a: RopeArgs) -> Result<Outcome, CliError> {
    let mut record = Record::new().with("n", a.n);
    let (regions, gaussian) = match (a.mean, a.k) {
        (Some(mean), None) => {
            record.push("mean", mean);
            let s = GaussianSummary::new(a.n, mean)?;
            (gaussian_regions(&s, a.q), Some(s))
        }
        (None, Some(k)) => {
            record.push("k", k);
            (binom_regions(&BinomialData::new(a.n, k)?, a.q)?, None)
        }
        _ => return Err(CliError::Usage("give exactly one of --mean and --k".into())),
    };
    let null = a.null.unwrap_or(if gaussian.is_some() { 0.0 } else { 0.5 });
    let rope = Rope::new(a.rope, null)?;
    let verdict = decide(&regions, &rope);
    let support = regions.support().first().copied();
    let mean_er = match gaussian {
        Some(s) => Some(mean_er_in_rope(&s, &rope)?),
        None => None,
    };
    record.push("q", a.q.value());
    record.push("rope_lo", a.rope.lo());
    record.push("rope_hi", a.rope.hi());
    record.push("null", null);
    record.push("verdict", verdict.verdict().name());
    record.push("partial_overlap", verdict.partial_overlap());
    record.push("support_lo", support.map(|s| s.lo()));
    record.push("support_hi", support.map(|s| s.hi()));
    record.push("mean_er", mean_er);
    Ok(Outcome::complete(record))
}

fn figure(a: FigArgs) -> Result<Outcome, CliError> {
    let figure = Figure::from_number(a.figure)
        .ok_or_else(|| CliError::Usage(format!("unknown figure {}", a.figure)))?;
    let params = FigureParams {
        q: a.q,
        n: a.n,
        n2: a.n2.unwrap_or(2 * a.n),
        mean: a.mean,
    };
    match a.out {
        None => Ok(Outcome {
            output: Output::Table(figure_table(figure, &params)?),
            complete: true,
        }),
        Some(path) => {
            let mut sink = BufWriter::new(File::create(&path)?);
            let rows = emit_figure_data(figure, &params, &mut sink)?;
            std::io::Write::flush(&mut sink)?;
            Ok(Outcome {
                output: Output::Written(
                    Record::new()
                        .with("figure", u64::from(a.figure))
                        .with("rows", rows as u64)
                        .with("mean", params.resolved_mean()?)
                        .with("path", path.display().to_string().as_str()),
                ),
                complete: true,
            })
        }
    }
}

fn quandary(a: QuandaryArgs) -> Result<Outcome, CliError> {
    let mean = feasible(gaussian_required_mean(a.q, a.n))?;
    let pair = match mean {
        Some(_) => Some(quandary_pair(a.n, a.q)?),
        None => None,
    };
    Ok(Outcome::partial(
        Record::new()
            .with("n", a.n)
            .with("q", a.q.value())
            .with("required_mean", mean)
            .with("lo", pair.map(|p| p.0))
            .with("hi", pair.map(|p| p.1))
            .with("separation", pair.map(|p| p.1 - p.0)),
        mean.is_some(),
    ))
}
