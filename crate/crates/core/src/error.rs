use thiserror::Error;

/// Errors raised by the numerical kernels and the model checkers.
///
/// Variant names double as the diagnostic strings printed by the CLI, so
/// they are part of the external interface.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("DimensionMismatch: {0}")]
    DimensionMismatch(String),
    #[error("NotHermitian: residual {residual:.3e} exceeds {tol:.1e}")]
    NotHermitian { residual: f64, tol: f64 },
    #[error("NonFinite: matrix contains NaN or infinite entries")]
    NonFinite,
    #[error("NoConvergence: {0}")]
    NoConvergence(String),
    #[error("SingularMatrix: pivot below threshold during LU factorisation")]
    SingularMatrix,
    #[error("DegenerateGround: ground level is {0}-fold degenerate")]
    DegenerateGround(usize),
    #[error("DegenerateSpectrum: energy gap {0:.3e} below resolution")]
    DegenerateSpectrum(f64),
    #[error("NotAState: {0}")]
    NotAState(String),
    #[error("NotThermal: {0}")]
    NotThermal(String),
    #[error("ZeroPopulation: level {0} has vanishing population")]
    ZeroPopulation(usize),
    #[error("NotCP: Choi matrix has eigenvalue {0:.3e}")]
    NotCP(f64),
    #[error("NotTracePreserving: residual {0:.3e}")]
    NotTracePreserving(f64),
    #[error("NotHermiticityPreserving: residual {0:.3e}")]
    NotHermiticityPreserving(f64),
    #[error("KossakowskiNotPSD: minimum eigenvalue {0:.3e}")]
    KossakowskiNotPSD(f64),
    #[error("InvalidBasis: {0}")]
    InvalidBasis(String),
    #[error("JumpNotTraceless: jump operator {0} has a non-zero trace")]
    JumpNotTraceless(usize),
    #[error("HamiltonianMismatch: generator's coherent part differs from H by {0:.3e}")]
    HamiltonianMismatch(f64),
    #[error("SingularWeight: reference state has eigenvalue {0:.3e}")]
    SingularWeight(f64),
    #[error("InvalidTimeReversal: {0}")]
    InvalidTimeReversal(String),
    #[error("ScheduleOutOfRange: {name}({tau}) = {value}")]
    ScheduleOutOfRange { name: &'static str, tau: f64, value: f64 },
    #[error("InvalidParameter: {0}")]
    InvalidParameter(String),
    #[error("NotCPTP: {0}")]
    NotCPTP(String),
    #[error("InconclusiveHorizon: probe states still differ by {0:.3e} at the horizon")]
    InconclusiveHorizon(f64),
    #[error("UnknownParameter: {0}")]
    UnknownParameter(String),
    #[error("InternalCheck: {0}")]
    InternalCheck(String),
}

pub type Result<T> = std::result::Result<T, Error>;

impl Error {
    /// Short diagnostic name (the enum variant), stable across releases.
    pub fn name(&self) -> &'static str {
        match self {
            Error::DimensionMismatch(_) => "DimensionMismatch",
            Error::NotHermitian { .. } => "NotHermitian",
            Error::NonFinite => "NonFinite",
            Error::NoConvergence(_) => "NoConvergence",
            Error::SingularMatrix => "SingularMatrix",
            Error::DegenerateGround(_) => "DegenerateGround",
            Error::DegenerateSpectrum(_) => "DegenerateSpectrum",
            Error::NotAState(_) => "NotAState",
            Error::NotThermal(_) => "NotThermal",
            Error::ZeroPopulation(_) => "ZeroPopulation",
            Error::NotCP(_) => "NotCP",
            Error::NotTracePreserving(_) => "NotTracePreserving",
            Error::NotHermiticityPreserving(_) => "NotHermiticityPreserving",
            Error::KossakowskiNotPSD(_) => "KossakowskiNotPSD",
            Error::InvalidBasis(_) => "InvalidBasis",
            Error::JumpNotTraceless(_) => "JumpNotTraceless",
            Error::HamiltonianMismatch(_) => "HamiltonianMismatch",
            Error::SingularWeight(_) => "SingularWeight",
            Error::InvalidTimeReversal(_) => "InvalidTimeReversal",
            Error::ScheduleOutOfRange { .. } => "ScheduleOutOfRange",
            Error::InvalidParameter(_) => "InvalidParameter",
            Error::NotCPTP(_) => "NotCPTP",
            Error::InconclusiveHorizon(_) => "InconclusiveHorizon",
            Error::UnknownParameter(_) => "UnknownParameter",
            Error::InternalCheck(_) => "InternalCheck",
        }
    }
}
