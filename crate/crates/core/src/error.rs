use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid alphabet: {0}")]
    InvalidAlphabet(String),

    #[error("invalid composition: {0}")]
    InvalidComposition(String),

    #[error("invalid pmf: {0}")]
    InvalidPmf(String),

    #[error("degenerate pmf: second moment is zero")]
    DegeneratePmf,

    #[error("rate infeasible: {0}")]
    RateInfeasible(String),

    #[error("construction bug: {0}")]
    ConstructionBug(String),

    #[error("domain error: {0}")]
    Domain(String),

    #[error("decode error: {0}")]
    Decode(String),

    #[error("invalid configuration: {0}")]
    Config(String),

    #[error("calibration error: {0}")]
    Calibration(String),

    #[error("calibration required: {0}")]
    CalibrationRequired(String),

    #[error("model domain error: {0}")]
    ModelDomain(String),

    #[error("parse error at line {line}: {msg}")]
    Parse { line: usize, msg: String },

    #[error(transparent)]
    Io(#[from] std::io::Error),
}

impl Error {
    /// Process exit code used by the command-line front end.
    pub fn exit_code(&self) -> i32 {
        match self {
            Error::RateInfeasible(_)
            | Error::ConstructionBug(_)
            | Error::Calibration(_)
            | Error::CalibrationRequired(_)
            | Error::ModelDomain(_)
            | Error::DegeneratePmf => 1,
            Error::InvalidAlphabet(_) | Error::Domain(_) => 2,
            _ => 3,
        }
    }
}
