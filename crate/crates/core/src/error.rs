use std::fmt;

use thiserror::Error;

/// Which conserved-variable check failed when a run blows up.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Offense {
    NonPositiveDensity,
    NonPositivePressure,
    NonFinite,
}

impl fmt::Display for Offense {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = match self {
            Offense::NonPositiveDensity => "non-positive density",
            Offense::NonPositivePressure => "non-positive pressure",
            Offense::NonFinite => "non-finite value",
        };
        f.write_str(s)
    }
}

/// Structured description of a solver failure: where, when and what.
#[derive(Debug, Clone, PartialEq)]
pub struct BlowUp {
    /// Cell index `(i, j)`; `j` is 0 for one-dimensional runs.
    pub cell: (usize, usize),
    pub time: f64,
    pub step: usize,
    /// RK stage (1..=3) whose output was rejected, or 0 when detected outside a step.
    pub stage: u8,
    pub offense: Offense,
    pub value: f64,
}

impl fmt::Display for BlowUp {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "{} ({:e}) in cell ({}, {}) at t = {:e}, step {}, stage {}",
            self.offense, self.value, self.cell.0, self.cell.1, self.time, self.step, self.stage
        )
    }
}

#[derive(Debug, Error)]
pub enum WenoError {
    #[error("invalid input: {0}")]
    InvalidInput(String),

    #[error("invalid configuration: {0}")]
    Config(String),

    #[error("all mapped weights vanished; cannot renormalize")]
    DegenerateWeights,

    #[error("characteristic decomposition failed: {0}")]
    Decomposition(String),

    #[error("solution blew up: {0}")]
    BlowUp(BlowUp),

    #[error("unknown {kind} `{name}`")]
    NotFound { kind: &'static str, name: String },

    #[error("mesh mismatch: {0}")]
    MeshMismatch(String),

    #[error("parse error: {0}")]
    Parse(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),
}

pub type Result<T, E = WenoError> = std::result::Result<T, E>;
