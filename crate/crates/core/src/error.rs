use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("domain error: {0}")]
    Domain(String),

    #[error("range error: {0}")]
    Range(String),

    #[error("unsupported exponential-integral order {0}; only 1/2 - 2k (k >= 0) is implemented")]
    UnsupportedOrder(f64),

    #[error("{what} did not converge within {terms} terms")]
    Convergence { what: &'static str, terms: usize },

    #[error(
        "requested accuracy not reached after {n_evals} evaluations: best estimate {best} (error estimate {err_estimate:e})"
    )]
    AccuracyNotReached {
        best: f64,
        err_estimate: f64,
        n_evals: usize,
    },

    #[error("precondition violated: {0}")]
    Precondition(String),

    #[error("non-finite derivative at step {step} (x = {x})")]
    Propagation { step: usize, x: f64 },

    #[error("optimization failed: {0}")]
    Optimization(String),

    #[error("fit failed after {} iterations: {reason}; best iterate lambda = {lambda}, mu = {mu}, residual = {residual:e}", trace.len())]
    Fit {
        reason: String,
        lambda: f64,
        mu: f64,
        residual: f64,
        /// `(lambda, mu, residual)` per Newton iterate.
        trace: Vec<(f64, f64, f64)>,
    },

    #[error(transparent)]
    Json(#[from] serde_json::Error),

    #[error(transparent)]
    Csv(#[from] csv::Error),
}

impl Error {
    pub(crate) fn domain(msg: impl Into<String>) -> Self {
        Error::Domain(msg.into())
    }

    pub(crate) fn range(msg: impl Into<String>) -> Self {
        Error::Range(msg.into())
    }

    /// Domain and precondition failures are caller mistakes; everything else is numerical.
    pub fn is_usage(&self) -> bool {
        matches!(
            self,
            Error::Domain(_) | Error::Precondition(_) | Error::UnsupportedOrder(_)
        )
    }
}
