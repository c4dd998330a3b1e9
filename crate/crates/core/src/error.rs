use num_complex::Complex64;
use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("dimension mismatch: {0}")]
    DimensionMismatch(String),

    #[error("q-commutation relation violated: residual {residual:.3e} exceeds bound {bound:.3e}")]
    RelationViolated { residual: f64, bound: f64 },

    #[error("q must be nonzero")]
    ZeroQ,

    #[error("operation requires a contractive q (|q| < 1), got |q| = {modulus}")]
    NonContractiveQ { modulus: f64 },

    #[error("eigenvalue solver did not converge")]
    EigensolverFailure,

    #[error("singular value decomposition did not converge")]
    SvdFailure,

    #[error("truncation boxes differ: ({0}, {1}) vs ({2}, {3})")]
    TruncationMismatch(usize, usize, usize, usize),

    #[error("series are defined over different q")]
    QMismatch,

    #[error(
        "numerical rank ambiguous{}: singular value {singular_value:.3e} within a factor {guard} of threshold {threshold:.3e}",
        .degree.map(|d| format!(" at degree {d}")).unwrap_or_default()
    )]
    RankAmbiguous {
        degree: Option<usize>,
        singular_value: f64,
        threshold: f64,
        guard: f64,
    },

    #[error("shape mismatch: {0}")]
    ShapeMismatch(String),

    #[error("d∘d ≠ 0 at degree {degree}: residual {residual:.3e} exceeds {bound:.3e}")]
    ComplexViolated { degree: usize, residual: f64, bound: f64 },

    #[error("point ({l1}, {l2}) does not lie on the axes ℂ_x ∪ ℂ_y")]
    OffAxisPoint { l1: Complex64, l2: Complex64 },

    #[error("geometry precondition failed: {0}")]
    GeometryPreconditionFailed(String),

    #[error("S is not nilpotent within the truncation order {order}: ‖S^{order}‖ = {residual:.3e}")]
    NotNilpotent { order: usize, residual: f64 },

    #[error("unknown object `{0}`")]
    UnknownObject(String),

    #[error("relation is not a partial order: {0}")]
    NotAPartialOrder(String),

    #[error("not a lattice: {0}")]
    NotALattice(String),

    #[error("not a topology: {0}")]
    NotATopology(String),

    #[error("restriction maps are not functorial: {0}")]
    FunctorialityViolated(String),

    #[error("basis does not cover the open set {0:?}")]
    BasisNotCovering(Vec<usize>),

    #[error("transversality oracle incomplete: {0}")]
    OracleIncomplete(String),

    #[error("invalid input: {0}")]
    InvalidInput(String),

    #[error(transparent)]
    Json(#[from] serde_json::Error),
}
