use thiserror::Error;

/// Errors raised by the solvers and closed forms.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("invalid parameter `{field}`: {reason}")]
    InvalidParameter { field: &'static str, reason: &'static str },

    /// The operation is not defined for this input (for example a retarded
    /// solver asked to handle a zero delay).
    #[error("domain error: {0}")]
    Domain(&'static str),

    #[error("step size {dt} exceeds the limit {limit} (shortest delay / 8)")]
    StepSize { dt: f64, limit: f64 },

    #[error("{what} did not converge (achieved {achieved:e})")]
    NonConvergence { what: &'static str, achieved: f64 },

    #[error("degenerate residue denominator |1 + W| < 1e-12 on branch {branch} (sign {sign})")]
    DegenerateResidue { branch: i32, sign: char },

    #[error("trace too coarse for rate estimation: dt*gamma = {0} > 0.01")]
    Resolution(f64),

    #[error("channel `{channel}` probability {value:e} is below 1e-12 at the evaluation point; nudge the parameters")]
    EvaluationPoint { channel: &'static str, value: f64 },

    /// `1 - (beta cos phi)^2` vanishes: a dark state never finishes decaying
    /// and the steady-state probabilities are undefined.
    #[error("steady-state probabilities are singular at beta = {beta}, phi = {phi} (dark state)")]
    DarkState { beta: f64, phi: f64 },
}

pub type Result<T, E = Error> = core::result::Result<T, E>;
