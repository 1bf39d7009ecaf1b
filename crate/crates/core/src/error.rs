use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("matrix is not square: {rows}x{cols}")]
    NotSquare { rows: usize, cols: usize },

    #[error("matrix must have at least one row and column")]
    Empty,

    #[error("non-finite entry at ({row}, {col})")]
    NonFinite { row: usize, col: usize },

    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },

    #[error("matrix is not Hermitian: max |H - H^+| entry is {asymmetry:.3e}")]
    NotHermitian { asymmetry: f64 },

    #[error("Schatten index must satisfy p >= 1, got {0}")]
    InvalidSchattenIndex(f64),

    #[error("inverse temperature must be non-negative, got {0}")]
    NegativeBeta(f64),

    #[error("site {site} out of range for a space with {sites} sites")]
    SiteOutOfRange { site: usize, sites: usize },

    #[error("invalid space structure: {0}")]
    InvalidStructure(String),

    /// `|Tr A| <= 1e-12 * ||A||_2`, so the non-entangling counterpart is undefined.
    #[error(
        "operator is traceless: |Tr A| = {trace_abs:.3e} with ||A||_2 = {norm:.6} \
         (threshold 1e-12 * ||A||_2)"
    )]
    TracelessOperator { trace_abs: f64, norm: f64 },

    /// The evolution operator at time `t` has vanishing trace.
    #[error("evolution operator is traceless at t = {t}: |Tr U(t)| = {trace_abs:.3e}")]
    TracelessEvolution { t: f64, trace_abs: f64 },

    #[error("zero-norm {0}")]
    ZeroNorm(&'static str),

    #[error("numerical instability: {0}")]
    NumericalInstability(String),

    #[error("{0}")]
    Domain(String),
}

impl Error {
    /// True for both traceless variants.
    pub fn is_traceless(&self) -> bool {
        matches!(
            self,
            Error::TracelessOperator { .. } | Error::TracelessEvolution { .. }
        )
    }
}
