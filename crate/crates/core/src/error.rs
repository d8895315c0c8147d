//! Error types, one enum per subsystem plus a crate-level wrapper.

use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum SetError {
    #[error("interval set must contain at least one band")]
    EmptyInput,
    #[error("band [{0}, {1}] is degenerate (need a < b)")]
    DegenerateBand(f64, f64),
    #[error("non-finite endpoint in band [{0}, {1}]")]
    NonFinite(f64, f64),
}

#[derive(Debug, Clone, PartialEq, Error)]
pub enum ChebyshevError {
    #[error("degree must be at least 1 (got {0})")]
    InvalidDegree(usize),
    #[error("tolerance must be positive (got {0})")]
    InvalidTolerance(f64),
    #[error("exchange did not converge after {iterations} iterations (defect {defect:e})")]
    NoConvergence { iterations: usize, defect: f64 },
    #[error("reference system ill-conditioned (min spacing {spacing:e}, defect {defect:e})")]
    IllConditioned { spacing: f64, defect: f64 },
    #[error("root polish failed near x = {0}")]
    RootPolishFailure(f64),
}

#[derive(Debug, Clone, PartialEq, Error)]
pub enum PotentialError {
    #[error("critical-point system is singular (condition {0:e})")]
    SingularSystem(f64),
    #[error("x = {0} is not interior to any band")]
    OutsideSupport(f64),
    #[error("quadrature refinement levels disagree ({0:e})")]
    QuadratureFailure(f64),
    #[error("z = {0} lies on the branch cut of B; only |B| is defined there")]
    BranchDomain(f64),
    #[error("band index {0} out of range")]
    BandIndex(usize),
}

#[derive(Debug, Clone, PartialEq, Error)]
pub enum BandsError {
    #[error("found {found} band edges, expected {expected}")]
    EdgeCountMismatch { found: usize, expected: usize },
    #[error("z is on the spectrum (distance {0:e})")]
    OnSpectrum(f64),
    #[error("x = {0} is not interior to a band of e_n")]
    OutsideSupport(f64),
}

#[derive(Debug, Clone, PartialEq, Error)]
pub enum JacobiError {
    #[error("period must be at least 1")]
    EmptyPeriod,
    #[error("a and b must have equal length ({0} vs {1})")]
    LengthMismatch(usize, usize),
    #[error("off-diagonal a[{0}] = {1} must be positive and finite")]
    InvalidOffDiagonal(usize, f64),
    #[error("diagonal b[{0}] = {1} must be finite")]
    InvalidDiagonal(usize, f64),
}

#[derive(Debug, Clone, PartialEq, Error)]
pub enum AsymptoticsError {
    #[error("set is not period-{period}: band mass {mass} is not a multiple of 1/{period}")]
    NotPeriodic { period: usize, mass: f64 },
    #[error("z = {0} is not in the real branch domain z > b_p")]
    BranchDomain(f64),
}

/// Crate-level error. `code()` gives the module-qualified identifier used
/// by the CLI.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error(transparent)]
    Set(#[from] SetError),
    #[error(transparent)]
    Chebyshev(#[from] ChebyshevError),
    #[error(transparent)]
    Potential(#[from] PotentialError),
    #[error(transparent)]
    Bands(#[from] BandsError),
    #[error(transparent)]
    Jacobi(#[from] JacobiError),
    #[error(transparent)]
    Asymptotics(#[from] AsymptoticsError),
}

impl Error {
    pub fn code(&self) -> String {
        let (module, variant) = match self {
            Error::Set(e) => ("realsets", variant_name(e)),
            Error::Chebyshev(e) => ("chebyshev", variant_name(e)),
            Error::Potential(e) => ("potential", variant_name(e)),
            Error::Bands(e) => ("bands", variant_name(e)),
            Error::Jacobi(e) => ("jacobi", variant_name(e)),
            Error::Asymptotics(e) => ("asymptotics", variant_name(e)),
        };
        format!("{module}::{variant}")
    }
}

fn variant_name<E: std::fmt::Debug>(e: &E) -> String {
    let dbg = format!("{e:?}");
    dbg.split(['(', ' ', '{'])
        .next()
        .unwrap_or_default()
        .to_string()
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
