//! Plot data for the log point-factor curves.
//!
//! Each curve samples `log B(0, μ)` (the point factor for μ against the
//! null μ = 0) on an even μ grid, next to constant `log q` and `log(1/q)`
//! reference columns. The sample mean defaults to the Robert threshold mean
//! at the first sample size and is shared by every curve, so curves differ
//! only through n.

use std::io::Write;

use bfdx_core::bayes_factors::{ln_point_bf, robert_required_mean};
use bfdx_core::{GaussianSummary, Threshold};

use crate::output::{Table, Value};
use crate::CliError;

pub const GRID_POINTS: usize = 1001;
pub const MU_MIN: f64 = -0.02;
pub const MU_MAX: f64 = 0.10;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Figure {
    /// One curve.
    Single,
    /// Two curves with different sample sizes; rows carry an `n` column.
    Pair,
}

impl Figure {
    pub fn from_number(k: u8) -> Option<Figure> {
        match k {
            1 => Some(Figure::Single),
            2 => Some(Figure::Pair),
            _ => None,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FigureParams {
    pub q: Threshold,
    pub n: u64,
    /// Second sample size, used by [`Figure::Pair`].
    pub n2: u64,
    /// Overrides the default sample mean.
    pub mean: Option<f64>,
}

impl FigureParams {
    pub fn resolved_mean(&self) -> Result<f64, CliError> {
        match self.mean {
            Some(m) => Ok(m),
            None => Ok(robert_required_mean(self.q, self.n)?),
        }
    }
}

pub fn mu_grid() -> impl Iterator<Item = f64> {
    let step = (MU_MAX - MU_MIN) / (GRID_POINTS - 1) as f64;
    (0..GRID_POINTS).map(move |i| MU_MIN + i as f64 * step)
}

pub fn figure_table(figure: Figure, params: &FigureParams) -> Result<Table, CliError> {
    let mean = params.resolved_mean()?;
    let log_q = params.q.ln();
    let (columns, sizes) = match figure {
        Figure::Single => (vec!["mu", "log_bf", "log_q", "log_inv_q"], vec![params.n]),
        Figure::Pair => (
            vec!["mu", "log_bf", "n", "log_q", "log_inv_q"],
            vec![params.n, params.n2],
        ),
    };
    let mut table = Table::new(columns);
    for n in sizes {
        let s = GaussianSummary::new(n, mean)?;
        for mu in mu_grid() {
            let mut row: Vec<Value> = vec![mu.into(), ln_point_bf(0.0, mu, &s).into()];
            if figure == Figure::Pair {
                row.push(n.into());
            }
            row.extend([log_q.into(), (-log_q).into()]);
            table.push_row(row);
        }
    }
    Ok(table)
}

/// Writes the figure's CSV to `out` and returns the number of data rows.
pub fn emit_figure_data(
    figure: Figure,
    params: &FigureParams,
    out: &mut dyn Write,
) -> Result<usize, CliError> {
    let table = figure_table(figure, params)?;
    table.write_csv(out)?;
    Ok(table.len())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn params() -> FigureParams {
        FigureParams {
            q: Threshold::new(3.0).unwrap(),
            n: 5000,
            n2: 10_000,
            mean: None,
        }
    }

    #[test]
    fn grid_spans_the_range() {
        let grid: Vec<f64> = mu_grid().collect();
        assert_eq!(grid.len(), GRID_POINTS);
        assert_eq!(grid[0], MU_MIN);
        assert!((grid[GRID_POINTS - 1] - MU_MAX).abs() < 1e-15);
    }

    #[test]
    fn row_counts() {
        let mut sink = Vec::new();
        assert_eq!(
            emit_figure_data(Figure::Single, &params(), &mut sink).unwrap(),
            1001
        );
        let text = String::from_utf8(sink).unwrap();
        assert_eq!(text.lines().count(), 1002);
        assert_eq!(text.lines().next(), Some("mu,log_bf,log_q,log_inv_q"));
        let mut sink = Vec::new();
        assert_eq!(
            emit_figure_data(Figure::Pair, &params(), &mut sink).unwrap(),
            2002
        );
    }
}
