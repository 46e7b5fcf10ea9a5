//! Mellin's hypergeometric system for `y^m + x_1 y^{m_1} + ... + x_n y^{m_n} - 1 = 0`.
//!
//! * [`combinatorics`]: exponent data, the index box and dimension counts.
//! * [`series`]: truncated power series, the principal root and the convenient basis.
//! * [`weyl`]: exact differential operators, the Mellin/Horn operators and factorizations.
//! * [`roots`]: numerical root branches, their jets and the logarithmic solutions.

pub mod combinatorics;
pub mod error;
pub mod linalg;
pub mod poly;
pub mod roots;
pub mod series;
pub mod weyl;

pub use combinatorics::{make_profile, ExponentProfile, MultiIndex};
pub use error::{Error, Result};
