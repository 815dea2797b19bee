use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("deformation parameter must lie in [-1, 1] \\ {{0}}, got {0}")]
    InvalidMu(f64),

    #[error("deformation parameter mismatch: {left} vs {right}")]
    ParameterMismatch { left: f64, right: f64 },

    #[error("register of {requested} qubits exceeds the symbolic budget of {max}")]
    RegisterBudget { requested: usize, max: usize },

    #[error("dimension mismatch: {0}")]
    Dimension(String),

    #[error("{what} is not hermitian (residual {residual:.3e})")]
    NonHermitian { what: String, residual: f64 },

    #[error("operator is not unitary (residual {0:.3e})")]
    NotUnitary(f64),

    #[error("invalid density matrix: {0}")]
    InvalidDensity(String),

    #[error("invalid bath specification: {0}")]
    InvalidBath(String),

    #[error("precondition violated: {0}")]
    Precondition(String),

    #[error("code vectors are not orthonormal (residual {0:.3e})")]
    NotOrthonormal(f64),

    #[error(
        "not a code of the degenerate form: diagonal blocks vary across code vectors by {0:.3e}"
    )]
    NotACode(f64),

    #[error("code is not a joint eigenspace of the Kraus operators (residual {0:.3e})")]
    NotEigenspace(f64),

    #[error("configuration error: {0}")]
    Config(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),
}
