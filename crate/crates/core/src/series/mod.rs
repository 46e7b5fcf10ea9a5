//! Truncated power series and the solution families built from them.

pub mod rank;
pub mod ring;
pub mod solutions;
pub mod truncated;

pub use rank::{independence_rank, RankRing, RANK_PIVOT_TOLERANCE};
pub use ring::{
    ComplexFloat, CycElem, Cyclotomic, CyclotomicField, IntoCyclotomic, Rationals, Ring, RingTag,
};
pub use solutions::{
    convenient_basis, convenient_basis_series, is_generating, principal_coefficient,
    principal_series, rotate, scaled_root_series, subseries, substitute_into_equation,
};
pub use truncated::{simplex, TruncatedSeries};
