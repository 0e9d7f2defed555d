use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Error, Debug)]
pub enum Error {
    /// Joint angle magnitude at (or numerically at) zero: contact force and thrust diverge.
    #[error("singular configuration: joint angle magnitude {alpha0:.3e} rad")]
    SingularConfig { alpha0: f64 },
    #[error("invalid work surface: {0}")]
    InvalidSurface(String),
    #[error("invalid pose configuration: {0}")]
    InvalidConfig(String),
    #[error("thrust direction nearly horizontal (cos(phi) = {cos_phi:.4})")]
    TiltSingular { cos_phi: f64 },
    #[error("state became non-finite")]
    NonFinite,
    #[error("contact never detected within {duration_s} s")]
    DidNotEngage { duration_s: f64 },
    #[error("simulation diverged at t = {t:.4} s")]
    Diverged { t: f64 },
    #[error("invalid scenario: {0}")]
    Validation(String),
    #[error("I/O error: {0}")]
    Io(#[from] std::io::Error),
    #[error("JSON error: {0}")]
    Json(#[from] serde_json::Error),
    #[error("CSV error: {0}")]
    Csv(#[from] csv::Error),
}
