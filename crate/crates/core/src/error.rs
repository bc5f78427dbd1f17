use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    /// An argument lies outside the domain of the formula.
    #[error("domain error: {0}")]
    Domain(String),

    /// Two operators or states live on different photon-number sectors.
    #[error("dimension mismatch: sector N={left} vs N={right}")]
    Dimension { left: usize, right: usize },

    /// Evaluation at (or numerically at) the pole of the optomechanical response.
    #[error("pole error: |nu^6 - omega^6|/nu^6 = {relative_distance:.3e} at omega = {omega:.6e}")]
    Pole { omega: f64, relative_distance: f64 },

    /// Evaluation at the resonance of the coupled microwave cavities.
    #[error("resonance error: |L(omega)| = {magnitude:.3e} at omega = {omega:.6e}")]
    Resonance { omega: f64, magnitude: f64 },

    /// A meter model violates the Heisenberg inequality or makes the SNR denominator non-positive.
    #[error("model error: {0}")]
    Model(String),

    /// The speed-meter optimum is only defined for a stable antenna.
    #[error("tuning error: {0}")]
    Tuning(String),

    #[error("unsupported regime: {0}")]
    UnsupportedRegime(String),

    /// A parameter fails validation; `field` names the offending parameter.
    #[error("validation error: {field}: {constraint}")]
    Validation { field: String, constraint: String },

    #[error("parse error at line {line}: {message}")]
    Parse { line: usize, message: String },

    /// Quadrature did not reach the requested tolerance.
    #[error("integration error: {0}")]
    Integration(String),

    #[error("io error: {0}")]
    Io(String),
}

impl Error {
    pub(crate) fn validation(field: impl Into<String>, constraint: impl Into<String>) -> Self {
        Error::Validation {
            field: field.into(),
            constraint: constraint.into(),
        }
    }

    /// Short machine-readable tag for the error kind.
    pub fn kind(&self) -> &'static str {
        match self {
            Error::Domain(_) => "domain",
            Error::Dimension { .. } => "dimension",
            Error::Pole { .. } => "pole",
            Error::Resonance { .. } => "resonance",
            Error::Model(_) => "model",
            Error::Tuning(_) => "tuning",
            Error::UnsupportedRegime(_) => "unsupported_regime",
            Error::Validation { .. } => "validation",
            Error::Parse { .. } => "parse",
            Error::Integration(_) => "integration",
            Error::Io(_) => "io",
        }
    }
}
