use thiserror::Error;

/// Errors raised by the numerical kernels and the analyses built on them.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    /// A pivot fell below the absolute threshold during elimination.
    #[error("singular linear system (pivot {pivot:.3e} at column {column})")]
    SingularMatrix { column: usize, pivot: f64 },

    #[error("invalid parameters: {0}")]
    InvalidParams(String),

    /// The covariance matrix does not describe a bona fide quantum state.
    #[error("non-physical covariance matrix: {0}")]
    NonPhysical(String),

    /// Argument of the entropy function lies below 1.
    #[error("entropy function evaluated outside its domain at x = {0}")]
    DomainError(f64),

    #[error("invalid input: {0}")]
    InvalidInput(String),

    /// A row above the discord threshold was found to be separable.
    #[error("discord {discord} > 1 at separable cell t = {t}, T = {temperature}")]
    ThresholdInconsistency {
        t: f64,
        temperature: f64,
        discord: f64,
    },

    /// A failure while evaluating one grid cell of a trajectory or sweep.
    #[error("at t = {t}, T = {temperature}: {source}")]
    AtCell {
        t: f64,
        temperature: f64,
        #[source]
        source: Box<Error>,
    },
}

impl Error {
    pub(crate) fn at_cell(self, t: f64, temperature: f64) -> Self {
        match self {
            Error::AtCell { .. } => self,
            other => Error::AtCell {
                t,
                temperature,
                source: Box::new(other),
            },
        }
    }

    /// Strips any cell context and returns the underlying error.
    pub fn root(&self) -> &Error {
        match self {
            Error::AtCell { source, .. } => source.root(),
            other => other,
        }
    }
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
