use thiserror::Error;

/// Errors raised by the library.
///
/// Each variant has a stable machine-readable [`kind`](QrootError::kind) used by the CLI.
#[derive(Debug, Clone, Error, PartialEq)]
pub enum QrootError {
    #[error("matrix is not in the Omega subalgebra (residual {residual:.3e} > {tolerance:.3e})")]
    NotInOmega { residual: f64, tolerance: f64 },
    #[error("matrix dimension {0} is odd")]
    OddDimension(usize),
    #[error("dimension mismatch: {0}")]
    DimensionMismatch(String),
    #[error("matrix is not Hermitian (residual {0:.3e})")]
    NotHermitian(f64),
    #[error("matrix is singular or too ill-conditioned (reciprocal condition {0:.3e})")]
    Singular(f64),
    #[error("Hermitian matrix has an eigenvalue within {0:.3e} of zero")]
    NearSingular(f64),
    #[error("matrix is not H-selfadjoint (residual {0:.3e})")]
    NotSelfadjoint(f64),
    #[error("eigenvalue clusters could not be separated: {0}")]
    ClusterOverlap(String),
    #[error(
        "rank decision is ambiguous: singular value {sigma:.3e} is within a factor 10 of threshold {threshold:.3e}"
    )]
    RankAmbiguous { sigma: f64, threshold: f64 },
    #[error("invalid canonical spec: {0}")]
    SpecInvalid(String),
    #[error("block sizes cannot be grouped into m-tuples: {0}")]
    NotPartitionable(String),
    #[error("sign pattern violates the m-tuple sign rule: {0}")]
    SignPatternViolation(String),
    #[error("no real solution of the normalization system: {0}")]
    NoRealSolution(String),
    #[error("degenerate leading coefficient: {0}")]
    DegenerateCoefficient(String),
    #[error("eigenvalue class does not match this builder: {0}")]
    ClassMismatch(String),
    #[error("power oracle disagreement: {0}")]
    OracleDisagreement(String),
    #[error("invalid generator profile: {0}")]
    ProfileInvalid(String),
    #[error("size mismatch: {0}")]
    SizeMismatch(String),
    #[error("numerical failure: {0}")]
    Numerical(String),
    #[error("parse error: {0}")]
    Parse(String),
}

impl QrootError {
    /// Stable identifier of the error variant.
    pub fn kind(&self) -> &'static str {
        match self {
            QrootError::NotInOmega { .. } => "NotInOmega",
            QrootError::OddDimension(_) => "OddDimension",
            QrootError::DimensionMismatch(_) => "DimensionMismatch",
            QrootError::NotHermitian(_) => "NotHermitian",
            QrootError::Singular(_) => "Singular",
            QrootError::NearSingular(_) => "NearSingular",
            QrootError::NotSelfadjoint(_) => "NotSelfadjoint",
            QrootError::ClusterOverlap(_) => "ClusterOverlap",
            QrootError::RankAmbiguous { .. } => "RankAmbiguous",
            QrootError::SpecInvalid(_) => "SpecInvalid",
            QrootError::NotPartitionable(_) => "NotPartitionable",
            QrootError::SignPatternViolation(_) => "SignPatternViolation",
            QrootError::NoRealSolution(_) => "NoRealSolution",
            QrootError::DegenerateCoefficient(_) => "DegenerateCoefficient",
            QrootError::ClassMismatch(_) => "ClassMismatch",
            QrootError::OracleDisagreement(_) => "OracleDisagreement",
            QrootError::ProfileInvalid(_) => "ProfileInvalid",
            QrootError::SizeMismatch(_) => "SizeMismatch",
            QrootError::Numerical(_) => "Numerical",
            QrootError::Parse(_) => "ParseError",
        }
    }
}

pub type Result<T, E = QrootError> = std::result::Result<T, E>;
