use thiserror::Error;

pub type Result<T> = std::result::Result<T, HwenoError>;

#[derive(Debug, Error)]
pub enum HwenoError {
    #[error("configuration error: {0}")]
    Config(String),

    #[error("non-physical state: {0}")]
    NumericalState(String),

    #[error("kernel construction failed: {0}")]
    Construction(String),

    #[error("non-finite value in cell {cell} after stage {stage} (t = {time})")]
    NonFinite {
        stage: usize,
        cell: usize,
        time: f64,
    },

    #[error("degenerate stencil input in cell {cell}")]
    DegenerateStencil { cell: usize },

    #[error("parse error: {0}")]
    Parse(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),
}

impl HwenoError {
    pub fn config(msg: impl Into<String>) -> Self {
        HwenoError::Config(msg.into())
    }
}
