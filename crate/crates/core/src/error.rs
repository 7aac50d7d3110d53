// SPDX-License-Identifier: Apache-2.0

use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error)]
pub enum Error {
    /// An argument lies outside the domain of the operation.
    #[error("domain error in {op}: {detail}")]
    Domain { op: &'static str, detail: String },

    /// A quantity is infinite at the requested arguments.
    #[error("divergence in {op}: {detail}")]
    Divergence { op: &'static str, detail: String },

    /// An iterative method ran out of budget.
    #[error("{op} did not converge after {iterations} iterations (partial value {partial:e})")]
    Convergence {
        op: &'static str,
        iterations: usize,
        partial: f64,
    },

    /// A point falls outside the Euler chart `θ ∈ (0, π)`.
    #[error("point outside the Euler chart: theta = {theta}")]
    Chart { theta: f64 },

    /// Two quantities that must agree by construction do not.
    #[error("numerical inconsistency in {op}: {detail}")]
    Inconsistency { op: &'static str, detail: String },

    #[error("invalid spectral profile: {0}")]
    Profile(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

impl Error {
    pub(crate) fn domain(op: &'static str, detail: impl Into<String>) -> Self {
        Error::Domain {
            op,
            detail: detail.into(),
        }
    }

    pub(crate) fn divergence(op: &'static str, detail: impl Into<String>) -> Self {
        Error::Divergence {
            op,
            detail: detail.into(),
        }
    }
}
