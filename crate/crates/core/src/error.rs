use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    /// Non-finite samples or malformed input data.
    #[error("invalid input: {0}")]
    Input(String),

    #[error("{what} = {value} outside of [{lo}, {hi}]")]
    Domain {
        what: &'static str,
        value: f64,
        lo: f64,
        hi: f64,
    },

    #[error("invalid parameter: {0}")]
    Parameter(String),

    /// A density or series was passed to an operation expecting another
    /// function-space family.
    #[error("contract violation: {0}")]
    Contract(String),

    #[error("unsupported: {0}")]
    Unsupported(String),

    #[error("fundamental solution is singular on the light cone |x| = t = {0}")]
    LightCone(f64),

    #[error("singular linear system (condition estimate {condition:.3e})")]
    SingularSystem { condition: f64 },
}

pub type Result<T> = std::result::Result<T, Error>;

pub(crate) fn check_domain(what: &'static str, value: f64, lo: f64, hi: f64) -> Result<()> {
    // a few ulps of slack so grid-generated times like k*T/m land inside
    let slack = 1e-12 * (1.0 + hi.abs().max(lo.abs()));
    if value.is_finite() && value >= lo - slack && value <= hi + slack {
        Ok(())
    } else {
        Err(Error::Domain { what, value, lo, hi })
    }
}
