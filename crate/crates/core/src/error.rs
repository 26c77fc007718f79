use thiserror::Error;

/// Errors raised by the analytic, oracle and simulation routines.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("{name} = {value} is outside its domain ({expected})")]
    Domain {
        name: &'static str,
        value: f64,
        expected: &'static str,
    },
    #[error("degenerate Doppler geometry: the maximum Doppler shift is zero")]
    DegenerateGeometry,
    #[error("quadrature did not reach relative tolerance {tolerance:e} (last change {change:e}) with {panels} panels")]
    Convergence {
        tolerance: f64,
        change: f64,
        panels: usize,
    },
    #[error("sampling interval {dt} s is coarser than 1/(32 f_m) = {max_dt} s")]
    Sampling { dt: f64, max_dt: f64 },
    #[error("{0}")]
    Invalid(String),
}

pub type Result<T> = std::result::Result<T, Error>;

pub(crate) fn domain<T>(name: &'static str, value: f64, expected: &'static str) -> Result<T> {
    Err(Error::Domain {
        name,
        value,
        expected,
    })
}
