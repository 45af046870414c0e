use thiserror::Error;

pub type Result<T> = std::result::Result<T, VrtError>;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum VrtError {
    #[error("{name} = {value} is outside its domain ({expected})")]
    Domain {
        name: &'static str,
        value: f64,
        expected: &'static str,
    },

    /// No stable (delta <= 90 deg) operating point carries the requested power.
    #[error("P = {p} pu is not transferable: maximum at delta = 90 deg is {p_max} pu")]
    InfeasiblePower { p: f64, p_max: f64 },

    #[error("no operating point exists at |Vs| = {vs} pu for P = {p} pu (voltage collapse)")]
    VoltageCollapse { vs: f64, p: f64 },

    #[error("load P = {p_load} pu exceeds S_max = {s_max} pu")]
    InfeasibleLoad { p_load: f64, s_max: f64 },

    #[error("invalid substation parameters: {0}")]
    InvalidParams(String),

    #[error("apparent-power curve is empty: every sample in [{vs_lo}, {vs_hi}] is below |Vs| = {vs_theory} pu")]
    EmptyCurve {
        vs_lo: f64,
        vs_hi: f64,
        vs_theory: f64,
    },

    #[error("inconsistent dispatch: {0}")]
    Inconsistent(String),

    #[error("malformed trace at sample {index}: {reason}")]
    MalformedTrace { index: usize, reason: String },

    #[error("invalid UPS configuration: {0}")]
    InvalidUps(String),

    #[error("cannot summarize an empty simulation log")]
    EmptyLog,
}

pub(crate) fn positive(name: &'static str, value: f64) -> Result<f64> {
    if value.is_finite() && value > 0.0 {
        Ok(value)
    } else {
        Err(VrtError::Domain {
            name,
            value,
            expected: "finite and > 0",
        })
    }
}

pub(crate) fn non_negative(name: &'static str, value: f64) -> Result<f64> {
    if value.is_finite() && value >= 0.0 {
        Ok(value)
    } else {
        Err(VrtError::Domain {
            name,
            value,
            expected: "finite and >= 0",
        })
    }
}
