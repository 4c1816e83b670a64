use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("invalid algebra size: {0}")]
    InvalidSize(String),

    #[error("invalid space spec `{spec}`: {reason}")]
    InvalidSpace { spec: String, reason: String },

    #[error("construction failed: {0}")]
    Construction(String),

    /// A spectral function was asked for a value outside its domain.
    #[error("spectral function undefined at eigenvalue {eigenvalue:e}")]
    Domain { eigenvalue: f64 },

    #[error("singular point: eigenvalue {eigenvalue:e} on the support of w")]
    SingularPoint { eigenvalue: f64 },

    #[error("parameters not admissible: {0}")]
    Params(String),

    #[error("point outside the domain: {0}")]
    OutsideDomain(String),

    #[error("quadrature did not converge: {0}")]
    Quadrature(String),

    #[error("configuration error: {0}")]
    Config(String),

    #[error("io error: {0}")]
    Io(String),
}

pub type Result<T> = std::result::Result<T, Error>;
