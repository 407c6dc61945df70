use thiserror::Error;

/// Every failure the solvers can report.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("non-positive density {0}")]
    NonPositiveDensity(f64),
    #[error("non-positive internal energy {0}")]
    NonPositiveInternalEnergy(f64),
    #[error("quartic energy inversion did not converge (E = {energy}, rho = {rho})")]
    NewtonDivergence { rho: f64, energy: f64 },
    #[error("Lambert W argument {0} outside the principal branch domain")]
    LambertWDomain(f64),
    #[error("adaptive quadrature did not reach tolerance (estimate {estimate}, error {error})")]
    QuadratureNonConvergence { estimate: f64, error: f64 },
    #[error("could not bracket a root: {0}")]
    BracketingFailure(&'static str),
    #[error("root iteration did not converge: {0}")]
    RootNotConverged(&'static str),
    #[error("initial data generate vacuum (pressure positivity condition violated)")]
    VacuumGenerated,
    #[error("singular 2x2 system in the GRP solve (determinant {0})")]
    SingularSystem(f64),
    #[error("inadmissible state after update in cell {cell}: {reason}")]
    InadmissibleUpdate { cell: usize, reason: String },
    #[error("invalid model parameter: {0}")]
    InvalidModel(String),
    #[error("invalid grid: {0}")]
    InvalidGrid(String),
    #[error("domain mismatch: {0}")]
    DomainMismatch(String),
    #[error("unknown case `{0}`")]
    UnknownCase(String),
    #[error("line {line}: {message}")]
    Parse { line: usize, message: String },
    #[error("invalid value for `{field}`: {message}")]
    Validation { field: String, message: String },
    #[error("i/o failure: {0}")]
    Io(String),
}

impl From<std::io::Error> for Error {
    fn from(e: std::io::Error) -> Self {
        Error::Io(e.to_string())
    }
}

pub type Result<T> = std::result::Result<T, Error>;
