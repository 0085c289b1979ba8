use thiserror::Error;

/// Errors raised by the spectral, resonance and probe computations.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("invalid parameter `{name}`: {reason}")]
    InvalidParameter { name: &'static str, reason: String },

    #[error("matrix is not symmetric (max asymmetry {0:e})")]
    NotSymmetric(f64),

    #[error("adiabatic elimination is singular at delta1 = 0")]
    SingularElimination,

    #[error("extremum at {x} lies on the edge of the search bracket [{lo}, {hi}]")]
    BracketFailure { lo: f64, hi: f64, x: f64 },

    #[error("no real dynamical resonance: discriminant {0} is negative")]
    NegativeDiscriminant(f64),

    #[error("state is not normalized (norm^2 = {0})")]
    NotNormalized(f64),

    #[error("effective coupling vanishes; transfer envelope is undefined")]
    DegenerateEnvelope,

    #[error("{steps} integration steps are too few, at least {required} are needed")]
    StepResolution { steps: usize, required: usize },

    #[error("probe grid cannot resolve the spectrum: {0}")]
    GridTooCoarse(String),

    #[error("no probe peak found at negative nu")]
    NoNegativePeak,

    #[error("no probe peak found at positive nu")]
    NoPositivePeak,

    #[error("energy {energy} is within the pole guard of the intermediate level at {pole}")]
    ResolventPole { energy: f64, pole: f64 },

    #[error("fixed-point iteration did not converge after {0} iterations")]
    NoConvergence(usize),

    #[error("g_J equals g_I; the bias field is singular")]
    SingularBias,

    #[error("scenario requires the excited-state decay rate")]
    MissingDecayRate,
}

pub type Result<T> = std::result::Result<T, Error>;
