use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid parameter `{name}`: {reason}")]
    InvalidParameter { name: &'static str, reason: String },

    /// `lambda + 2*alpha2 = 0` with `alpha1 != 0`: the displacement that removes
    /// the linear terms does not exist and the model reduces to a shifted linear
    /// potential, which this crate does not solve.
    #[error("out-of-scope parameters: lambda + 2*alpha2 = 0 with alpha1 = {alpha1} (shifted linear potential case is not supported)")]
    OutOfScope { alpha1: f64 },

    #[error("`{op}` is only defined in the {expected} regime")]
    Dispatch {
        op: &'static str,
        expected: &'static str,
    },

    #[error("singular point in `{what}` at Z = {z}")]
    Singular { what: &'static str, z: f64 },

    #[error("index {index} exceeds table size {max}")]
    Range { index: usize, max: usize },

    #[error("step size underflow ({step:e}) at Z = {z}")]
    StepUnderflow { z: f64, step: f64 },

    #[error("matrix dimension {dim} exceeds the oracle limit {max}")]
    Resource { dim: usize, max: usize },

    #[error("malformed intensity file, line {line}: {reason}")]
    Parse { line: usize, reason: String },

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

impl Error {
    pub(crate) fn invalid(name: &'static str, reason: impl Into<String>) -> Self {
        Error::InvalidParameter {
            name,
            reason: reason.into(),
        }
    }

    /// True for errors caused by the lattice parameters themselves (bad or
    /// unsupported values), as opposed to I/O or numerical failures.
    pub fn is_parameter_error(&self) -> bool {
        matches!(
            self,
            Error::InvalidParameter { .. } | Error::OutOfScope { .. } | Error::Dispatch { .. }
        )
    }
}
