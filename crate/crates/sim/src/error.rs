use std::path::PathBuf;

use thiserror::Error;

#[derive(Debug, Error)]
pub enum SimError {
    #[error("config error: {0}")]
    Config(String),

    #[error("{}: {source}", path.display())]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },

    #[error("{}: {message}", path.display())]
    Format { path: PathBuf, message: String },

    #[error("simulation failed: {0}")]
    Simulation(#[from] wimax_phy_core::Error),
}

impl SimError {
    pub fn io(path: impl Into<PathBuf>, source: std::io::Error) -> Self {
        SimError::Io {
            path: path.into(),
            source,
        }
    }

    /// Process exit status: 2 for configuration, 3 for file I/O and formats, 4 for simulation.
    pub fn exit_code(&self) -> i32 {
        match self {
            SimError::Config(_) => 2,
            SimError::Io { .. } | SimError::Format { .. } => 3,
            SimError::Simulation(_) => 4,
        }
    }
}

pub type Result<T> = std::result::Result<T, SimError>;
