use thiserror::Error;

/// Crate-wide error type. Variants split user-input problems from numerical
/// failures so the CLI can map them to distinct exit codes.
#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid configuration: {0}")]
    InvalidConfig(String),

    #[error("invalid distribution: {0}")]
    InvalidDistribution(String),

    #[error("malformed input: {0}")]
    Parse(String),

    #[error("solver failure: {0}")]
    Solver(String),

    #[error("solver failure at N={n}, f={f}: {source}")]
    SweepCell {
        n: u32,
        f: u32,
        #[source]
        source: Box<Error>,
    },

    #[error("simulation failure: {0}")]
    Simulation(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),
}

impl Error {
    /// True for errors caused by bad user input rather than numerics.
    pub fn is_validation(&self) -> bool {
        match self {
            Error::InvalidConfig(_) | Error::InvalidDistribution(_) | Error::Parse(_) | Error::Io(_) => true,
            Error::Solver(_) | Error::Simulation(_) => false,
            Error::SweepCell { source, .. } => source.is_validation(),
        }
    }
}

pub type Result<T> = std::result::Result<T, Error>;
