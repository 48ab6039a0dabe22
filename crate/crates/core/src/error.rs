//! Error type shared across the library; each variant maps to a stable
//! process exit code in the CLI.

use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum Error {
    #[error("syntax error at line {line}, column {col}: {msg}")]
    Syntax { line: usize, col: usize, msg: String },
    #[error("unknown identifier `{0}`")]
    UnknownIdentifier(String),
    #[error("transcendental function in exact backend")]
    TranscendentalInExactBackend,
    #[error("unbound parameter `{0}`")]
    UnboundParameter(String),
    #[error("unsupported function `{0}`")]
    UnsupportedFunction(String),
    #[error("domain error: {0}")]
    DomainError(String),
    #[error("division by zero")]
    DivisionByZero,
    #[error("radical obstruction: {0}")]
    RadicalObstruction(String),
    #[error("connection is torsion free; see the torsion-free catalog (Theorem 1 models)")]
    TorsionFree,
    #[error("connection is not a symmetric affine surface (nabla rho != 0)")]
    NotSymmetric,
    #[error("connection is not a Type A or Type B homogeneous model")]
    NotHomogeneousModel,
    #[error("operation requires a Type A connection")]
    NotTypeA,
    #[error("torsion vanishes; nothing to normalize")]
    ZeroTorsion,
    #[error("gauge matrix is singular")]
    SingularMatrix,
    #[error("base connection is not torsion free")]
    BaseNotTorsionFree,
    #[error("parameter constraint violated: {0}")]
    ConstraintViolation(String),
    #[error("sign of `{0}` depends on free parameters")]
    ParameterDependentSign(String),
    #[error("internal error: {0}")]
    Internal(String),
}

impl Error {
    /// Stable CLI exit codes: 0 ok, 2 parse error, 3 torsion free,
    /// 4 not symmetric, 5 not a homogeneous model, 6 radical obstruction,
    /// 1 anything else.
    pub fn exit_code(&self) -> i32 {
        match self {
            Error::Syntax { .. } | Error::UnknownIdentifier(_) => 2,
            Error::TorsionFree => 3,
            Error::NotSymmetric => 4,
            Error::NotHomogeneousModel => 5,
            Error::RadicalObstruction(_) => 6,
            _ => 1,
        }
    }
}
