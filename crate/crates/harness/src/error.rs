use thiserror::Error;

#[derive(Debug, Error)]
pub enum HarnessError {
    #[error(transparent)]
    Core(#[from] transversal_core::Error),

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error(transparent)]
    Csv(#[from] csv::Error),

    #[error("{0}")]
    Spec(String),
}

pub type Result<T> = std::result::Result<T, HarnessError>;

pub(crate) fn spec_err<T>(msg: impl Into<String>) -> Result<T> {
    Err(HarnessError::Spec(msg.into()))
}
