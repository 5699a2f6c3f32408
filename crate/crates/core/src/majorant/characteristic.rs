//! Characteristic maps `z = z0 − u0(z0) τ` for the logarithmic and quartic
//! initial data, and their inverses on the monotone window around `z0 = 0`.

use num_complex::Complex;

use crate::error::{Error, Result};

/// Residual accepted for a returned inverse, relative to `max(1, |z|)`.
pub const RESIDUAL_TOLERANCE: f64 = 1e-12;

/// Closed-form initial datum of the conservation law.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum InitialDatum {
    /// `u0(z) = λ² z / (1 − λ² z²)`.
    Logarithmic { lambda: f64 },
    /// `u0(z) = 12 α σ² z + 4 α z³`.
    Quartic { alpha: f64, sigma: f64 },
}

impl InitialDatum {
    pub fn u0(&self, z0: f64) -> f64 {
        match *self {
            InitialDatum::Logarithmic { lambda } => {
                let l2 = lambda * lambda;
                l2 * z0 / (1.0 - l2 * z0 * z0)
            }
            InitialDatum::Quartic { alpha, sigma } => {
                12.0 * alpha * sigma * sigma * z0 + 4.0 * alpha * z0 * z0 * z0
            }
        }
    }

    pub fn u0_complex(&self, z0: Complex<f64>) -> Complex<f64> {
        match *self {
            InitialDatum::Logarithmic { lambda } => {
                let l2 = lambda * lambda;
                z0 * l2 / (1.0 - z0 * z0 * l2)
            }
            InitialDatum::Quartic { alpha, sigma } => {
                z0 * (12.0 * alpha * sigma * sigma) + z0 * z0 * z0 * (4.0 * alpha)
            }
        }
    }

    fn u0_prime(&self, z0: f64) -> f64 {
        match *self {
            InitialDatum::Logarithmic { lambda } => {
                let l2 = lambda * lambda;
                let d = 1.0 - l2 * z0 * z0;
                l2 * (1.0 + l2 * z0 * z0) / (d * d)
            }
            InitialDatum::Quartic { alpha, sigma } => {
                12.0 * alpha * sigma * sigma + 12.0 * alpha * z0 * z0
            }
        }
    }

    fn u0_prime_complex(&self, z0: Complex<f64>) -> Complex<f64> {
        match *self {
            InitialDatum::Logarithmic { lambda } => {
                let l2 = lambda * lambda;
                let w = z0 * z0 * l2;
                let d = 1.0 - w;
                (1.0 + w) * l2 / (d * d)
            }
            InitialDatum::Quartic { alpha, sigma } => {
                Complex::new(12.0 * alpha * sigma * sigma, 0.0) + z0 * z0 * (12.0 * alpha)
            }
        }
    }
}

/// How the inverse is computed.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum InversionMethod {
    /// Trigonometric root of the depressed cubic, Newton-polished.
    Cardano,
    /// Newton safeguarded by the monotone bracket `[−z0c, z0c]`.
    BracketedNewton,
    /// Newton continuation in `τ` from the identity map at `τ = 0`.
    Continuation,
}

/// `u(τ, z) = u0(z0(τ, z))` with the validity window of the inverse.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CharacteristicSolution {
    pub datum: InitialDatum,
    pub tau: f64,
    /// `dz/dz0 > 0` exactly for `|z0| < critical_z0`.
    pub critical_z0: f64,
    /// Image of `critical_z0`; the inverse exists for `|z| < critical_z`.
    pub critical_z: f64,
    /// The simpler sufficient bound on `z0²` quoted with the existence condition.
    pub sufficient_z0_sq: f64,
    pub method: InversionMethod,
}

impl CharacteristicSolution {
    pub fn new(datum: InitialDatum, tau: f64) -> Result<Self> {
        if !(tau >= 0.0) || !tau.is_finite() {
            return Err(Error::Argument(format!("rescaled time must be finite and >= 0, got {tau}")));
        }
        let (critical_z0, critical_z, sufficient_z0_sq, method) = match datum {
            InitialDatum::Logarithmic { lambda } => {
                if !(lambda >= 0.0) || !lambda.is_finite() {
                    return Err(Error::Argument(format!("lambda must be finite and >= 0, got {lambda}")));
                }
                let l2 = lambda * lambda;
                if lambda == 0.0 {
                    (f64::INFINITY, f64::INFINITY, f64::INFINITY, InversionMethod::BracketedNewton)
                } else if tau == 0.0 {
                    (1.0 / lambda, 1.0 / lambda, 1.0 / l2, InversionMethod::BracketedNewton)
                } else {
                    let b = l2 * tau + 2.0;
                    let c = 1.0 - l2 * tau;
                    if c <= 0.0 {
                        (0.0, 0.0, 0.0, InversionMethod::BracketedNewton)
                    } else {
                        // smaller root of w² − b w + c, in the stable form
                        let w_minus = 2.0 * c / (b + (b * b - 4.0 * c).sqrt());
                        let z0c = w_minus.sqrt() / lambda;
                        let zc = z0c * (1.0 - l2 * tau / (1.0 - w_minus));
                        (z0c, zc, c / (l2 * b), InversionMethod::BracketedNewton)
                    }
                }
            }
            InitialDatum::Quartic { alpha, sigma } => {
                if !(alpha >= 0.0) || !alpha.is_finite() {
                    return Err(Error::Argument(format!("quartic coupling must be finite and >= 0, got {alpha}")));
                }
                let a = 1.0 - 12.0 * alpha * sigma * sigma * tau;
                let b = 4.0 * alpha * tau;
                if a <= 0.0 {
                    (0.0, 0.0, 0.0, InversionMethod::Cardano)
                } else if b == 0.0 {
                    (f64::INFINITY, f64::INFINITY, f64::INFINITY, InversionMethod::Cardano)
                } else {
                    let z0c = (a / (3.0 * b)).sqrt();
                    (z0c, 2.0 * a / 3.0 * z0c, a / (3.0 * b), InversionMethod::Cardano)
                }
            }
        };
        Ok(Self {
            datum,
            tau,
            critical_z0,
            critical_z,
            sufficient_z0_sq,
            method,
        })
    }

    /// Whether the monotone window is nonempty.
    pub fn has_window(&self) -> bool {
        self.critical_z0 > 0.0
    }

    /// `z = z0 − u0(z0) τ`.
    pub fn forward(&self, z0: f64) -> f64 {
        z0 - self.datum.u0(z0) * self.tau
    }

    pub fn forward_complex(&self, z0: Complex<f64>) -> Complex<f64> {
        z0 - self.datum.u0_complex(z0) * self.tau
    }

    /// `dz/dz0`.
    pub fn slope(&self, z0: f64) -> f64 {
        1.0 - self.datum.u0_prime(z0) * self.tau
    }

    fn crossing(&self, z: f64) -> Error {
        Error::CharacteristicCrossing {
            critical_z0: self.critical_z0,
            critical_z: self.critical_z,
            z,
        }
    }

    fn check_window(&self, z: f64) -> Result<()> {
        if !z.is_finite() || !self.has_window() || z.abs() >= self.critical_z {
            return Err(self.crossing(z));
        }
        Ok(())
    }

    /// `z0(τ, z)` by the default method for the datum.
    pub fn invert(&self, z: f64) -> Result<f64> {
        self.invert_with(z, self.method)
    }

    pub fn invert_with(&self, z: f64, method: InversionMethod) -> Result<f64> {
        self.check_window(z)?;
        if self.tau == 0.0 {
            return Ok(z);
        }
        if z == 0.0 {
            return Ok(0.0);
        }
        let z0 = match method {
            InversionMethod::Cardano => self.cardano(z)?,
            InversionMethod::BracketedNewton => self.bracketed_newton(z),
            InversionMethod::Continuation => self.continuation(z)?,
        };
        let residual = (self.forward(z0) - z).abs();
        if residual > RESIDUAL_TOLERANCE * z.abs().max(1.0) || z0.abs() >= self.critical_z0 {
            return Err(self.crossing(z));
        }
        Ok(z0)
    }

    /// `u(τ, z)`.
    pub fn u(&self, z: f64) -> Result<f64> {
        Ok(self.datum.u0(self.invert(z)?))
    }

    fn cardano(&self, z: f64) -> Result<f64> {
        let InitialDatum::Quartic { alpha, sigma } = self.datum else {
            return Err(Error::Argument("closed-form cubic inversion applies to the quartic datum".into()));
        };
        let a = 1.0 - 12.0 * alpha * sigma * sigma * self.tau;
        let b = 4.0 * alpha * self.tau;
        if b == 0.0 {
            return Ok(z / a);
        }
        // z0³ + p z0 + q = 0, three real roots inside the window
        let p = -a / b;
        let q = z / b;
        let r = (-p / 3.0).sqrt();
        let arg = (1.5 * q / p * (-3.0 / p).sqrt()).clamp(-1.0, 1.0);
        let phi = arg.acos() / 3.0;
        let mut z0 = 2.0 * r * (phi - 2.0 * std::f64::consts::PI / 3.0).cos();
        for _ in 0..3 {
            let f = self.forward(z0) - z;
            let d = self.slope(z0);
            if d <= 0.0 {
                break;
            }
            let step = f / d;
            z0 -= step;
            if step.abs() <= 1e-17 * z0.abs() {
                break;
            }
        }
        Ok(z0)
    }

    fn bracketed_newton(&self, z: f64) -> f64 {
        let sign = z.signum();
        let target = z.abs();
        let mut lo = 0.0;
        let mut hi = self.critical_z0.min(target.max(1.0) * 1e6);
        if !hi.is_finite() {
            hi = target * 2.0 + 1.0;
        }
        while self.forward(hi) < target && hi < self.critical_z0 {
            hi = (2.0 * hi).min(self.critical_z0);
        }
        let mut x = target.clamp(lo, hi);
        if x >= hi {
            x = 0.5 * (lo + hi);
        }
        for _ in 0..200 {
            let f = self.forward(x) - target;
            if f == 0.0 {
                break;
            }
            if f > 0.0 {
                hi = x;
            } else {
                lo = x;
            }
            let d = self.slope(x);
            let mut next = if d > 0.0 { x - f / d } else { f64::NAN };
            if !(next > lo && next < hi) {
                next = 0.5 * (lo + hi);
            }
            if (next - x).abs() <= 1e-16 * x.abs().max(f64::MIN_POSITIVE) || hi - lo <= 1e-16 * hi {
                x = next;
                break;
            }
            x = next;
        }
        sign * x
    }

    fn continuation(&self, z: f64) -> Result<f64> {
        const SUBSTEPS: usize = 16;
        let mut z0 = z;
        for k in 1..=SUBSTEPS {
            let stage = Self::new(self.datum, self.tau * k as f64 / SUBSTEPS as f64)?;
            stage.check_window(z)?;
            for _ in 0..100 {
                let step = (stage.forward(z0) - z) / stage.slope(z0);
                z0 -= step;
                if step.abs() <= 1e-16 * z0.abs().max(1e-300) {
                    break;
                }
            }
            if z0.abs() >= stage.critical_z0 {
                return Err(stage.crossing(z));
            }
        }
        Ok(z0)
    }

    /// Complex `z0(τ, z)` along the ray from the origin, for Cauchy contours
    /// inside `|z| < critical_z`.
    pub fn invert_complex(&self, z: Complex<f64>) -> Result<Complex<f64>> {
        if !self.has_window() || z.norm() >= self.critical_z {
            return Err(self.crossing(z.norm()));
        }
        if self.tau == 0.0 {
            return Ok(z);
        }
        const RAY_STEPS: usize = 16;
        let mut z0 = Complex::new(0.0, 0.0);
        for k in 1..=RAY_STEPS {
            let target = z * (k as f64 / RAY_STEPS as f64);
            for _ in 0..100 {
                let d = 1.0 - self.datum.u0_prime_complex(z0) * self.tau;
                let step = (self.forward_complex(z0) - target) / d;
                z0 -= step;
                if step.norm() <= 1e-16 * z0.norm().max(1e-300) {
                    break;
                }
            }
        }
        let residual = (self.forward_complex(z0) - z).norm();
        if !(residual <= RESIDUAL_TOLERANCE * z.norm().max(1.0)) {
            return Err(Error::Resolution(format!(
                "complex characteristic inversion left residual {residual:e} at z = {z}"
            )));
        }
        Ok(z0)
    }
}

/// Inverse of `z = z0 (1 − λ² τ / (1 − λ² z0²))` on the monotone branch.
pub fn invert_characteristic_log(lambda: f64, tau: f64, z: f64) -> Result<f64> {
    CharacteristicSolution::new(InitialDatum::Logarithmic { lambda }, tau)?.invert(z)
}

/// Inverse of `z = z0 − 12 α σ² z0 τ − 4 α z0³ τ` on the monotone branch.
pub fn invert_characteristic_quartic(alpha: f64, sigma: f64, tau: f64, z: f64) -> Result<f64> {
    CharacteristicSolution::new(InitialDatum::Quartic { alpha, sigma }, tau)?.invert(z)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::random::Sampler;

    #[test]
    fn identity_at_time_zero() {
        assert_eq!(invert_characteristic_log(0.8, 0.0, 0.3).unwrap(), 0.3);
        assert_eq!(invert_characteristic_quartic(0.1, 0.5, 0.0, 0.7).unwrap(), 0.7);
    }

    #[test]
    fn origin_maps_to_origin() {
        assert_eq!(invert_characteristic_log(0.8, 0.3, 0.0).unwrap(), 0.0);
        assert_eq!(invert_characteristic_quartic(0.1, 0.5, 0.3, 0.0).unwrap(), 0.0);
    }

    #[test]
    fn log_forward_residual() {
        let mut s = Sampler::new(1);
        for _ in 0..200 {
            let lambda = s.uniform(0.1, 3.0);
            let tau = s.uniform(0.0, 0.99) / (lambda * lambda);
            let sol = CharacteristicSolution::new(InitialDatum::Logarithmic { lambda }, tau).unwrap();
            let z = s.uniform(-0.999, 0.999) * sol.critical_z;
            let z0 = sol.invert(z).unwrap();
            assert!((sol.forward(z0) - z).abs() <= 1e-12 * z.abs().max(1.0));
            assert!(sol.slope(z0) > 0.0);
            let cont = sol.invert_with(z, InversionMethod::Continuation).unwrap();
            assert!((cont - z0).abs() <= 1e-9 * z0.abs().max(1e-6));
        }
    }

    #[test]
    fn log_window_is_the_exact_monotonicity_boundary() {
        let sol = CharacteristicSolution::new(InitialDatum::Logarithmic { lambda: 1.3 }, 0.2).unwrap();
        assert!(sol.slope(sol.critical_z0).abs() < 1e-12);
        assert!(sol.slope(0.999 * sol.critical_z0) > 0.0);
        assert!(sol.sufficient_z0_sq < sol.critical_z0 * sol.critical_z0);
        assert!(matches!(
            sol.invert(1.0001 * sol.critical_z),
            Err(Error::CharacteristicCrossing { .. })
        ));
        let closed = CharacteristicSolution::new(InitialDatum::Logarithmic { lambda: 1.0 }, 1.0).unwrap();
        assert!(!closed.has_window());
        assert!(closed.invert(0.1).is_err());
    }

    #[test]
    fn quartic_methods_agree() {
        let mut s = Sampler::new(2);
        for _ in 0..200 {
            let alpha = s.uniform(1e-3, 1.0);
            let sigma = s.uniform(0.0, 1.0);
            let tau = s.uniform(0.0, 0.95) / (12.0 * alpha * sigma * sigma + 1e-3);
            let sol = CharacteristicSolution::new(InitialDatum::Quartic { alpha, sigma }, tau).unwrap();
            if !sol.has_window() {
                continue;
            }
            let z = s.uniform(-0.999, 0.999) * sol.critical_z;
            let a = sol.invert_with(z, InversionMethod::Cardano).unwrap();
            let b = sol.invert_with(z, InversionMethod::BracketedNewton).unwrap();
            assert!((a - b).abs() <= 1e-11 * a.abs().max(1.0), "{a} vs {b}");
            assert!((sol.forward(a) - z).abs() <= 1e-12 * z.abs().max(1.0));
        }
    }

    #[test]
    fn quartic_detects_nonmonotone_region() {
        let sol = CharacteristicSolution::new(InitialDatum::Quartic { alpha: 0.5, sigma: 0.3 }, 0.4).unwrap();
        let z0c = sol.critical_z0;
        assert!(sol.slope(z0c).abs() < 1e-12);
        match sol.invert(1.01 * sol.critical_z) {
            Err(Error::CharacteristicCrossing { critical_z0, .. }) => assert_eq!(critical_z0, z0c),
            other => panic!("expected a crossing, got {other:?}"),
        }
        let closed = CharacteristicSolution::new(InitialDatum::Quartic { alpha: 1.0, sigma: 1.0 }, 0.1).unwrap();
        assert!(!closed.has_window());
    }

    #[test]
    fn u_is_odd() {
        for datum in [
            InitialDatum::Logarithmic { lambda: 0.9 },
            InitialDatum::Quartic { alpha: 0.2, sigma: 0.4 },
        ] {
            let sol = CharacteristicSolution::new(datum, 0.3).unwrap();
            for k in 1..10 {
                let z = 0.09 * k as f64 * sol.critical_z;
                assert!((sol.u(z).unwrap() + sol.u(-z).unwrap()).abs() <= 1e-12);
            }
        }
    }

    #[test]
    fn complex_inverse_agrees_on_real_axis() {
        let sol = CharacteristicSolution::new(InitialDatum::Quartic { alpha: 0.3, sigma: 0.5 }, 0.5).unwrap();
        let z = 0.4 * sol.critical_z;
        let real = sol.invert(z).unwrap();
        let cplx = sol.invert_complex(Complex::new(z, 0.0)).unwrap();
        assert!((cplx.re - real).abs() < 1e-13 && cplx.im.abs() < 1e-13);
        let w = Complex::from_polar(0.4 * sol.critical_z, 1.1);
        let z0 = sol.invert_complex(w).unwrap();
        assert!((sol.forward_complex(z0) - w).norm() < 1e-13);
    }

    #[test]
    fn rejects_negative_coupling() {
        assert!(CharacteristicSolution::new(InitialDatum::Quartic { alpha: -0.1, sigma: 0.0 }, 0.1).is_err());
    }
}
