use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error)]
pub enum Error {
    /// A parameter or configuration value violates a documented precondition.
    #[error("invalid config: {0}")]
    InvalidConfig(String),

    /// A weight vector fails to be a probability distribution.
    #[error("invalid distribution: {0}")]
    InvalidDistribution(String),

    /// A model is degenerate for the requested statistic (e.g. a zero
    /// pairwise recombination rate in a harmonic mean).
    #[error("degenerate model: {0}")]
    Degenerate(String),

    /// A numerical scheme violated one of its contracts mid-run.
    #[error("numerical failure: {0}")]
    Numerical(String),
}

impl Error {
    pub fn config(msg: impl Into<String>) -> Self {
        Error::InvalidConfig(msg.into())
    }

    pub fn distribution(msg: impl Into<String>) -> Self {
        Error::InvalidDistribution(msg.into())
    }
}
