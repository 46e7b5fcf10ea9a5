//! Numerical root branches, their jets at the origin and the logarithmic
//! solutions built from them.

pub mod branches;
pub mod solutions;

pub use branches::{
    jet_residual, lift_branch, lift_jets, roots_at_point, scaled_root_identity_check, unit_root,
    EquationInstance, PointJet, ScaledRootReport, JET_TOLERANCE,
};
pub use solutions::{
    invariant_subspace_witness, log_solution, mellin_residual, random_polynomial_series,
    relation_check, InvariantSubspaceReport, LogOffset, LogSolution, RootSystem, SubspaceBlock,
    ANNIHILATION_TOLERANCE,
};
