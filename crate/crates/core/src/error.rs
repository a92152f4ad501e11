use core::fmt;

pub type Result<T> = core::result::Result<T, Error>;

#[derive(Debug, Clone, PartialEq)]
pub enum Error {
    /// An argument lies outside the domain of the operation (e.g. `r ≤ 0`).
    Domain(&'static str),
    /// Invalid configuration or out-of-range tuning parameter.
    Config(&'static str),
    /// The model lies in the finite-time blow-up regime; carries the origin exponent.
    BlowupRegime { origin_exponent: f64 },
    /// Fewer samples than the fitter needs.
    InsufficientData { needed: usize, got: usize },
    /// The kernel does not support the requested operation.
    UnsupportedKernel(&'static str),
    /// A model parameter outside the supported range.
    Unsupported(&'static str),
    /// Declared decay is too weak to bound the tail integral.
    NonIntegrableTail,
    /// The integrand is not integrable at the origin.
    NonIntegrable { origin_exponent: f64 },
    /// The panel budget was exhausted before the tail bound met the tolerance.
    PanelBudgetExceeded { panels: usize },
}

impl fmt::Display for Error {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Error::Domain(msg) => write!(f, "domain error: {msg}"),
            Error::Config(msg) => write!(f, "config error: {msg}"),
            Error::BlowupRegime { origin_exponent } => write!(
                f,
                "finite-time blow-up regime (origin exponent {origin_exponent} <= -1)"
            ),
            Error::InsufficientData { needed, got } => {
                write!(f, "insufficient data: need at least {needed} samples, got {got}")
            }
            Error::UnsupportedKernel(msg) => write!(f, "unsupported kernel: {msg}"),
            Error::Unsupported(msg) => write!(f, "unsupported parameter: {msg}"),
            Error::NonIntegrableTail => {
                write!(f, "profile decay too weak for a finite tail bound")
            }
            Error::NonIntegrable { origin_exponent } => write!(
                f,
                "integrand not integrable at the origin (exponent {origin_exponent})"
            ),
            Error::PanelBudgetExceeded { panels } => {
                write!(f, "panel budget exhausted after {panels} panels")
            }
        }
    }
}

impl core::error::Error for Error {}
