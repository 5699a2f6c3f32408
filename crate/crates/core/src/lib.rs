//! Fermionic exact renormalization group on finite Grassmann algebras.
//!
//! The algebra layers (`grassmann`, `gaussian`, `norm`, `flow`) are generic
//! over the real type `T: Real` (`f32` or `f64`) with `Complex<T>`
//! coefficients. The majorant and Ψ⁴ layers work in `f64`.

pub mod error;
pub mod flow;
pub mod gaussian;
pub mod grassmann;
pub mod majorant;
pub mod matrix;
pub mod norm;
pub mod psi4;
pub mod quad;
pub mod random;
pub mod scalar;
pub mod schedule;

pub use error::{Error, Result};
pub use scalar::Real;

/// Algebra element with `f64` complex coefficients.
pub type GrassmannElement = grassmann::Element<f64>;
/// Skew-symmetric covariance over `f64`.
pub type AntisymmetricCovariance = gaussian::Covariance<f64>;
/// Nonnegative norm coefficients over `f64`.
pub type NormSeries = norm::NormSeries<f64>;
/// Scale decomposition over `f64`.
pub type ScaleSchedule = schedule::ScaleSchedule<f64>;
/// Flow trajectory over `f64`.
pub type FlowTrajectory = flow::Trajectory<f64>;
