//! Twisted exterior calculus on affine Minkowski space-time.
//!
//! The library implements multicovectors, multivectors, and densities that
//! carry a parity with respect to a group of orientation classes — either the
//! two-element determinant group of a bare vector space, or the four-element
//! group of a Lorentzian metric (time reversal, space reversal, and their
//! product). On top of the pointwise algebra it provides differential form
//! fields, cubical chains with quadrature, inertial-frame decomposition of
//! electromagnetic field configurations, and verification suites that check
//! Maxwell's equations and the behaviour of the decomposed fields under time
//! reflection in both orientation models.

pub mod chains;
pub mod electromag;
pub mod forms;
pub mod minkowski;
pub mod multilinear;
pub mod numeric;
pub mod orientation;
pub mod poly;
pub mod report;
pub mod suites;

use thiserror::Error as ThisError;

/// Crate-wide error type.
#[derive(Debug, Clone, ThisError)]
pub enum Error {
    /// Two values built over different orientation models were combined.
    #[error("orientation model mismatch: {0} vs {1}")]
    ModelMismatch(&'static str, &'static str),
    /// Two values of different ambient dimension were combined.
    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },
    /// An operation received a value of unexpected degree.
    #[error("degree mismatch: expected {expected}, found {found}")]
    DegreeMismatch { expected: usize, found: usize },
    /// An operation is not defined for this degree.
    #[error("unsupported degree {degree}: {reason}")]
    UnsupportedDegree { degree: usize, reason: &'static str },
    /// Parities do not match where equality is required.
    #[error("parity mismatch: {0} vs {1}")]
    ParityMismatch(String, String),
    /// A multilinear evaluation received the wrong number of vectors.
    #[error("arity mismatch: degree {expected} needs {expected} vectors, got {found}")]
    ArityMismatch { expected: usize, found: usize },
    /// A matrix that must be invertible is singular within tolerance.
    #[error("matrix is singular (|det| = {det:.3e})")]
    Singular { det: f64 },
    /// A matrix fails the metric-orthonormality test of the Lorentz group.
    #[error(
        "not a Lorentz map: entry ({row},{col}) of m^T G m deviates from G by {deviation:.3e}"
    )]
    NotOrthonormal {
        row: usize,
        col: usize,
        deviation: f64,
    },
    /// A field that must be closed fails the closedness pre-check.
    #[error("form is not closed: ||dA|| = {residual:.3e} at ({point:?})")]
    NotClosed { point: [f64; 4], residual: f64 },
    /// A singular configuration was evaluated inside its excluded ball.
    #[error("evaluation inside excluded ball of radius {r_min} around the singular worldline (point {point:?})")]
    ExcludedRegion { point: [f64; 4], r_min: f64 },
    /// An inertial frame failed validation.
    #[error("invalid frame: {0}")]
    InvalidFrame(String),
    /// A requested parity sign could not be determined from any fixture.
    #[error(
        "time-reflection parity of {field} is indeterminate: field vanishes on all probe points"
    )]
    ParityIndeterminate { field: String },
    /// A configuration or argument value is outside the supported range.
    #[error("invalid argument: {0}")]
    InvalidArgument(String),
}

/// Crate-wide result alias.
pub type Result<T> = std::result::Result<T, Error>;

pub use chains::{
    boundary, current_boundary_residual, integrate, stokes_residual, wedge_current_integral, Cell,
    Chain,
};
pub use electromag::{
    builtin_fields, decompose, integral_laws_stationary, maxwell_residual_3d, maxwell_residual_4d,
    time_reflection_parities, FieldConfiguration, FieldName, FrameFields, FrameResiduals,
    IntegralLaw, ParityTable, SpatialField,
};
pub use forms::{AffineMap, DensityField, DifferentialForm, VectorField};
pub use minkowski::{
    constitutive, constitutive_field, minkowski_metric, spatial_constitutive,
    spatial_constitutive_b, volume_form, InertialFrame,
};
pub use multilinear::{contract, metric_sharp, pair, wedge, Density, MultiCovector, MultiVector};
pub use orientation::{
    classify_gl, classify_lorentz, GroupClass, LorentzClass, Orientation, OrientationModel, Parity,
    ParityTag, StandardClass,
};
pub use report::{Check, Report};
pub use suites::{
    report_parity, resolve_quad_order, verify_algebra, verify_calculus, verify_maxwell,
    DEFAULT_SEED, QUAD_ORDER_ENV,
};
