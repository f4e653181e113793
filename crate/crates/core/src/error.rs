use alloc::string::String;
use alloc::vec::Vec;

pub type Result<T, E = Error> = core::result::Result<T, E>;

/// Every failure the numerical core can report.
#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum Error {
    #[error("invalid quadrature configuration: {0}")]
    InvalidSpec(String),

    #[error("non-finite integrand value {value} at grid node {node:?} (point {point:?})")]
    NonFiniteSample {
        node: Vec<usize>,
        point: Vec<f64>,
        value: f64,
    },

    #[error("invalid parameter `{field}`: {reason}")]
    InvalidParameter { field: &'static str, reason: String },

    #[error("argument outside the domain: {0}")]
    Domain(String),

    #[error("phase undefined: effective hopping vanishes on this axis")]
    UndefinedPhase,

    #[error("quadrature did not converge: {0}")]
    QuadratureFailed(String),

    #[error("dispersion equation has no solution: {0}")]
    NoSolution(String),

    #[error("eigenfunction is not square integrable: {0}")]
    NotSquareIntegrable(String),

    #[error("no bound state: {0}")]
    NoEigenfunction(String),

    #[error("one-particle subspace does not exist for these parameters")]
    SubspaceAbsent,

    #[error("operator needs {requested} sites, budget is {budget}")]
    ResourceLimit { requested: u128, budget: u128 },

    #[error("eigensolver did not converge after {iterations} iterations (best residual {best_residual:e})")]
    NotConverged { iterations: usize, best_residual: f64 },

    #[error("operator is not Hermitian")]
    NotHermitian,
}
