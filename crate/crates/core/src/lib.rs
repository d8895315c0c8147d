//! Chebyshev polynomials of finite unions of real intervals, the potential
//! theory of such sets, and the Widom factor asymptotics that connect them.

pub mod asymptotics;
pub mod bands;
pub mod chebyshev;
pub mod error;
pub mod jacobi;
pub mod potential;
pub mod quad;
pub mod realsets;

pub use chebyshev::{chebyshev, ChebyshevOptions, ChebyshevResult, Poly, RootForm};
pub use error::{Error, Result};
pub use potential::{capacity, EquilibriumData};
pub use realsets::{validate_set, Band, Gap, Hull, IntervalSet};
