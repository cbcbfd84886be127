//! Numerical realization of weighted Hardy spaces of entire functions
//! `H_E(ξ)` at finite truncation degree, with matrix representations of
//! composition, weighted composition, differentiation and generalized
//! weighted composition operators, and diagnostics that test isometry,
//! unitarity, m-isometry, invertibility and boundedness against closed-form
//! characterizations.

pub mod diagnostics;
pub mod error;
pub mod numeric;
pub mod operators;
pub mod series;
pub mod weights;

pub use diagnostics::{
    boundedness_report, default_tolerance, infeasibility_sweep, invertibility_check, isometry_defect,
    m_isometry_defect, orthogonality_check, unitary_defect, weighted_isometry_infeasibility, BoundednessReport,
    DefectReport, Trend, Verdict,
};
pub use error::{HardyError, Result};
pub use operators::{
    add, adjoint, apply, compose, composition_matrix, differentiation_matrix, generalized_matrix, multiplier_matrix,
    scalar_mul, weighted_composition_matrix, OperatorMatrix, Symbol,
};
pub use series::{
    compose_affine, differentiate, evaluate, inner_product, kernel, multiply, norm, AffineMap, TruncatedEntireFunction,
};
pub use weights::{WeightConfig, WeightKind, WeightSequence};
