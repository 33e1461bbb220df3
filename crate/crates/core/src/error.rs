use thiserror::Error;

/// Every failure mode surfaced by the library.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("NonSkew: basis matrix {0} is not skew-symmetric")]
    NonSkew(usize),
    #[error("DependentBasis: vectorized basis has rank {rank} < {expected}")]
    DependentBasis { rank: usize, expected: usize },
    #[error("NotSquare: matrix {0} is not square or sizes differ")]
    NotSquare(usize),
    #[error("OddDimension: a non-degenerate skew endomorphism needs even k, got {0}")]
    OddDimension(usize),
    #[error("DimensionMismatch: {0}")]
    DimensionMismatch(String),
    #[error("UnsupportedL: cannot build an irreducible Clifford module for l = {0}")]
    UnsupportedL(usize),
    #[error("InvalidMultiplicity: a + b must be at least 1")]
    InvalidMultiplicity,
    #[error("Degenerate: endomorphism is degenerate (smallest singular value {0:.3e})")]
    Degenerate(f64),
    #[error("NotAnticommutator: residual {0:.3e}")]
    NotAnticommutator(f64),
    #[error("NotUnit: A^2 + Id residual {0:.3e}")]
    NotUnit(f64),
    #[error("NotAnticommuting: residual {0:.3e}")]
    NotAnticommuting(f64),
    #[error("BadSigma: {0}")]
    BadSigma(String),
    #[error("IndexOutOfRange: {0}")]
    IndexOutOfRange(usize),
    #[error("NotHomogeneous: polynomial mixes degrees")]
    NotHomogeneous,
    #[error("SingularTruncation: {0}")]
    SingularTruncation(String),
    #[error("UnexpectedEigenvalue: {0}")]
    UnexpectedEigenvalue(String),
    #[error("OffSurface: level-set residual {0:.3e}")]
    OffSurface(f64),
    #[error("RimPoint: profile value {0:.3e} below rim threshold")]
    RimPoint(f64),
    #[error("NotTangent: normal component {0:.3e}")]
    NotTangent(f64),
    #[error("NotEigenvector: residual {0:.3e}")]
    NotEigenvector(f64),
    #[error("WrongGroupFamily: {0}")]
    WrongGroupFamily(String),
    #[error("OutsideBall: squared radius {0:.6}")]
    OutsideBall(f64),
    #[error("NotInDistribution: residual {0:.3e}")]
    NotInDistribution(f64),
    #[error("NotSymmetric: residual {0:.3e}")]
    NotSymmetric(f64),
    #[error("ShapeMismatch: {0}")]
    ShapeMismatch(String),
    #[error("BlockNotInvariant: off-block residual {0:.3e}")]
    BlockNotInvariant(f64),
    #[error("Parse: {0}")]
    Parse(String),
    #[error("InvalidParameter: {0}")]
    InvalidParameter(String),
}

pub type Result<T> = std::result::Result<T, Error>;
