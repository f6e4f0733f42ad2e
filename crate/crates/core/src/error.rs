use thiserror::Error;

#[derive(Debug, Error)]
pub enum CavityError {
    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    #[error("invalid mode: {0}")]
    InvalidMode(String),

    #[error("point outside cavity: {0}")]
    OutsideDomain(String),

    #[error("non-finite integrand sample at node {index} (r={r}, phi={phi}, z={z})")]
    NonFiniteSample {
        index: usize,
        r: f64,
        phi: f64,
        z: f64,
    },

    #[error("state file: {0}")]
    StateFile(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),
}

pub type Result<T> = std::result::Result<T, CavityError>;
