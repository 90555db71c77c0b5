use thiserror::Error;

/// Errors raised by precondition checks and numerical failures.
///
/// Every variant names the violated precondition and carries the measured
/// quantity that triggered it, so callers can report exactly what went wrong.
#[derive(Debug, Error)]
pub enum DilationError {
    #[error("matrix must be square, got {rows}x{cols}")]
    NotSquare { rows: usize, cols: usize },

    #[error("dimension mismatch: {context} (got {got}, expected {expected})")]
    DimensionMismatch {
        context: &'static str,
        got: usize,
        expected: usize,
    },

    #[error("matrix entries must be finite (found NaN or Inf at entry ({row},{col}))")]
    NonFiniteEntry { row: usize, col: usize },

    #[error("matrix is not Hermitian: ||M - M*|| = {residual:.3e} exceeds {bound:.3e}")]
    NotHermitian { residual: f64, bound: f64 },

    #[error("matrix is not positive semidefinite: lambda_min = {lambda_min:.6e}")]
    NotPsd { lambda_min: f64 },

    #[error("not a contraction: ||T|| = {norm:.12} exceeds 1 + {tol:.1e}")]
    NotContraction { norm: f64, tol: f64 },

    #[error("not an isometric correspondence: max Gram deviation {deviation:.3e} exceeds {bound:.3e}")]
    GramMismatch { deviation: f64, bound: f64 },

    #[error("singular resolvent: smallest singular value {sigma_min:.3e}")]
    SingularResolvent { sigma_min: f64 },

    #[error("eigenvalue decomposition did not converge")]
    EigenFailure,

    #[error("1 is (numerically) an eigenvalue: spectral distance {distance:.3e} <= gap {gap:.3e}")]
    EigenvalueOne { distance: f64, gap: f64 },

    #[error("not dissipative: A + A* has eigenvalue {max_eigenvalue:.6e} > 0")]
    NotDissipative { max_eigenvalue: f64 },

    #[error("operators do not commute: ||AB - BA|| = {residual:.3e} exceeds {bound:.3e}")]
    NotCommuting { residual: f64, bound: f64 },

    #[error("not an isometry: ||V*V - I|| = {residual:.3e}")]
    NotIsometric { residual: f64 },

    #[error("not a coisometry: ||VV* - I|| = {residual:.3e}")]
    NotCoisometric { residual: f64 },

    #[error("coordinate {coord} is negative ({value}); element must lie in the positive cone")]
    NegativeCoordinate { coord: usize, value: String },

    #[error("coordinate {coord} out of range for omega size {omega}")]
    CoordinateOutOfRange { coord: usize, omega: usize },

    #[error("subset contains duplicate coordinate {coord}")]
    DuplicateCoordinate { coord: usize },

    #[error("index element does not lie on the reduced lattice at coordinate {coord} (value {value}, base {base})")]
    NotInLattice {
        coord: usize,
        value: String,
        base: String,
    },

    #[error("omega size mismatch: {got} vs {expected}")]
    OmegaMismatch { got: usize, expected: usize },

    #[error("empty input: {context}")]
    EmptyInput { context: &'static str },

    #[error("subset too large: |v| = {size} exceeds the combinatorial cap {cap}")]
    SubsetTooLarge { size: usize, cap: usize },

    #[error("invalid parameter: {context}")]
    InvalidParameter { context: String },

    #[error("subspace invariance violated for {subspace}: residual {residual:.3e} exceeds {bound:.3e}")]
    InvarianceResidual {
        subspace: &'static str,
        residual: f64,
        bound: f64,
    },

    #[error("kernel gram matrix is not positive semidefinite (lambda_min = {lambda_min:.6e}); no regular dilation exists on this box")]
    GramNotPsd { lambda_min: f64 },

    #[error("fixed-vector space is not orthogonal to H: residual {residual:.3e}")]
    FixedSpaceNotOrthogonal { residual: f64 },

    #[error("bundle kind {got} not accepted here (expected {expected})")]
    WrongBundleKind {
        got: &'static str,
        expected: &'static str,
    },

    #[error("stage `{stage}` failed: {source}")]
    Stage {
        stage: &'static str,
        #[source]
        source: Box<DilationError>,
    },
}

impl DilationError {
    /// Wrap an error with the pipeline stage it occurred in.
    pub fn at_stage(stage: &'static str) -> impl FnOnce(DilationError) -> DilationError {
        move |source| DilationError::Stage {
            stage,
            source: Box::new(source),
        }
    }
}

pub type Result<T> = std::result::Result<T, DilationError>;
