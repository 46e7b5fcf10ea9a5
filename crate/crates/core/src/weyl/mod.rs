//! Exact arithmetic in the Weyl algebra and the operators attached to the
//! trinomial system.

pub mod operator;
pub mod system;
pub mod theta;
pub mod univariate;

pub use operator::DiffOperator;
pub use system::{
    gj_operators, horn_mellin_comparison, horn_system, lattice_matrices, mellin_system,
    mellin_theta_part, HornComparison, HornSystem, LatticeData,
};
pub use theta::ThetaPolynomial;
pub use univariate::{
    derivative_left_factor, discriminant_poly, factorization_check, leading_coefficient,
    mellin_operator_1d, named_factorizations, right_divide, theta_right_factor,
    FactorizationReport, NamedFactorization, ThetaFactorization,
};
