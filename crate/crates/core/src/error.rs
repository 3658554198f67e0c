use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("invalid input: {0}")]
    Validation(String),

    /// The sector matrix at this momentum is a Jordan block; the Bogoliubov
    /// modes do not exist and the caller must use the nilpotent propagator.
    #[error("defective sector at k = {k}: quasiparticle energy vanishes (exceptional point)")]
    DefectiveMode { k: f64 },

    #[error("infinite period at k = {k}: time average undefined")]
    InfinitePeriod { k: f64 },

    #[error("numeric range exceeded: {0}")]
    NumericRange(String),

    #[error("degenerate configuration: {0}")]
    Degenerate(String),

    #[error("matrix exponential did not converge: {0}")]
    Convergence(String),
}

impl Error {
    /// Process exit status used by the command-line front end.
    pub fn exit_code(&self) -> u8 {
        match self {
            Error::Validation(_) | Error::Degenerate(_) => 1,
            _ => 2,
        }
    }
}
