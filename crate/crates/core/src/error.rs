use thiserror::Error;

/// Errors raised by the field, geometry and solver routines.
#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("grid must have at least 4 points per axis, got {0}")]
    GridTooSmall(usize),
    #[error("grid edge length must be positive and finite, got {0}")]
    InvalidLength(f64),
    #[error("fields live on different grids")]
    GridMismatch,
    #[error("form degree {0} exceeds the dimension 3")]
    DegreeOverflow(usize),
    #[error("operation `{op}` is not defined for degree {degree}")]
    InvalidDegree { op: &'static str, degree: usize },
    #[error("operation `{op}` does not accept {kind} values")]
    InvalidValueKind { op: &'static str, kind: &'static str },
    #[error("field length {got} does not match the expected {expected}")]
    ShapeMismatch { expected: usize, got: usize },
    #[error("input is not skew-symmetric (max |X_ij + X_ji| = {0:e})")]
    NotSkew(f64),
    #[error("coframe is singular at point {point}: det = {det:e}")]
    SingularCoframe { point: usize, det: f64 },
    #[error("rotation field is not in SO(3) at point {point}: defect {defect:e}")]
    NotRotation { point: usize, defect: f64 },
    #[error("deformation gradient has det F = {det:e} <= 0 at point {point}")]
    NonPositiveJacobian { point: usize, det: f64 },
    #[error("placement minus identity is not periodic (mismatch {0:e})")]
    NonPeriodicMotion(f64),
    #[error("coframe not closed: |de| = {norm:e} exceeds tolerance {tol:e}")]
    CoframeNotClosed { norm: f64, tol: f64 },
    #[error("torsion precondition violated: |T| = {norm:e} exceeds tolerance {tol:e}")]
    TorsionNotSmall { norm: f64, tol: f64 },
    #[error("Q^T dQ is too far from skew ({asymmetry:e} relative to |omega| = {scale:e})")]
    AsymmetricConnection { asymmetry: f64, scale: f64 },
    #[error("invalid material: {0}")]
    InvalidMaterial(String),
    #[error("time step {dt:e} exceeds the stability bound {bound:e}")]
    CflViolation { dt: f64, bound: f64 },
    #[error("non-finite value produced at step {0}")]
    NonFinite(usize),
    #[error("{0}")]
    InvalidArgument(String),
}

pub type Result<T> = std::result::Result<T, Error>;
