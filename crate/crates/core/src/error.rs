use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    /// An argument lies outside the domain of the function.
    #[error("domain error: {0}")]
    Domain(String),

    /// The requested target cannot be reached for these inputs.
    #[error("infeasible: {0}")]
    Infeasible(String),

    #[error("root bracket [{lo}, {hi}] does not change sign")]
    NoSignChange { lo: f64, hi: f64 },

    /// A Bayes factor never crosses the threshold on the search bracket.
    #[error("no threshold crossing: {0}")]
    NoCrossing(String),

    #[error("{what} did not converge after {iterations} iterations")]
    NoConvergence {
        what: &'static str,
        iterations: usize,
    },

    #[error("empty range: {0}")]
    EmptyRange(String),
}

impl Error {
    pub(crate) fn domain(msg: impl Into<String>) -> Self {
        Error::Domain(msg.into())
    }

    pub(crate) fn infeasible(msg: impl Into<String>) -> Self {
        Error::Infeasible(msg.into())
    }

    /// True for conditions that describe the inputs rather than a failure of
    /// the numerics: infeasible targets, missing crossings and empty ranges.
    pub fn is_infeasible(&self) -> bool {
        matches!(
            self,
            Error::Infeasible(_) | Error::NoCrossing(_) | Error::EmptyRange(_)
        )
    }
}
