use thiserror::Error;

/// Errors raised across the library.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("dimension mismatch: expected {expected}, found {found}")]
    Dimension { expected: usize, found: usize },

    #[error("capacity exceeded: {requested} generators requested, cap is {cap}")]
    Capacity { requested: usize, cap: usize },

    #[error("invalid argument: {0}")]
    Argument(String),

    #[error("logarithm outside its domain: scalar part {re} + {im}i")]
    LogDomain { re: f64, im: f64 },

    #[error("flow left log domain: scalar part of the convolved weight is {re} + {im}i")]
    FlowLeftLogDomain { re: f64, im: f64 },

    #[error("element has odd-degree content of size {magnitude}")]
    Parity { magnitude: f64 },

    #[error("configuration error: {0}")]
    Configuration(String),

    #[error("characteristic crossing: critical z0 = {critical_z0}, |z| must stay below {critical_z} (requested z = {z})")]
    CharacteristicCrossing {
        critical_z0: f64,
        critical_z: f64,
        z: f64,
    },

    #[error("existence condition fails: {0}")]
    Existence(String),

    #[error("insufficient resolution: {0}")]
    Resolution(String),

    #[error("integration did not converge: {0}")]
    Integration(String),

    #[error("quadrature did not converge after {panels} panels (last relative change {change:e})")]
    Quadrature { panels: usize, change: f64 },

    #[error("unsupported dimension d = {0}")]
    UnsupportedDimension(usize),

    #[error("invariant violated: {0}")]
    Invariant(String),
}

pub type Result<T> = core::result::Result<T, Error>;
