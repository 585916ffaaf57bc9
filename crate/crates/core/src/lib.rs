//! Type-1 and perfect quasi-type-2 fuzzy numbers on level-cut grids,
//! Hukuhara derivatives of fuzzy-valued functions, and a solver for
//! second-order linear fuzzy initial value problems with crisp coefficients.

pub mod calculus;
pub mod error;
pub mod interval;
pub mod ivp;
pub mod suites;
pub mod t1;
pub mod t2;

pub use error::{Error, Result};
pub use interval::Interval;
pub use t1::{AlphaGrid, T1Fuzzy, TriangularT1, ValidityError};
pub use t2::{BetaGrid, Plane, SecondaryMF, T2Fuzzy, T2ValidityError, TriangularQT2};
