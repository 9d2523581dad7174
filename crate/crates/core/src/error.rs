use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error)]
pub enum Error {
    /// A constructor or operation received a parameter outside its documented domain.
    #[error("invalid parameter `{name}`: {reason}")]
    InvalidParameter { name: &'static str, reason: String },

    /// NaN or infinity reached a routine that requires finite input.
    #[error("non-finite input in {context}")]
    NonFiniteInput { context: &'static str },

    /// Two sampled objects were combined but live on different grids.
    #[error("sample grid mismatch: {detail}")]
    GridMismatch { detail: String },

    /// The requested sample step cannot resolve the frequency content involved.
    #[error("grid too coarse: step {h} cannot resolve frequency support radius {support_radius}")]
    ResolutionTooCoarse { h: f64, support_radius: f64 },

    /// An operation that needs a frame or Riesz basis was invoked on a family
    /// whose scan classified it as not closed.
    #[error("family `{label}` is classified NotClosed; {operation} requires a frame or Riesz basis")]
    NotAFrame {
        label: String,
        operation: &'static str,
    },

    #[error("config error: {0}")]
    Config(String),

    #[error(transparent)]
    Json(#[from] serde_json::Error),

    #[error(transparent)]
    Io(#[from] std::io::Error),
}

impl Error {
    pub fn invalid(name: &'static str, reason: impl Into<String>) -> Self {
        Error::InvalidParameter {
            name,
            reason: reason.into(),
        }
    }
}
