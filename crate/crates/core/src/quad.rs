//! Composite Simpson quadrature with refinement by panel doubling.

use crate::error::{Error, Result};
use crate::matrix::CMatrix;
use crate::scalar::Real;

/// Refinement policy: start at `start_panels`, double until successive
/// values differ by less than `rel_tol` (relative), at most `max_doublings`
/// times.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct QuadratureSettings {
    pub start_panels: usize,
    pub rel_tol: f64,
    pub max_doublings: u32,
}

impl Default for QuadratureSettings {
    fn default() -> Self {
        Self {
            start_panels: 512,
            rel_tol: 1e-10,
            max_doublings: 10,
        }
    }
}

/// Fixed composite Simpson rule; `panels` is rounded up to even.
pub fn simpson<T: Real>(f: impl Fn(T) -> T, a: T, b: T, panels: usize) -> T {
    if a == b {
        return T::zero();
    }
    let n = panels.max(2) + panels % 2;
    let h = (b - a) / T::of_usize(n);
    let mut sum = f(a) + f(b);
    for k in 1..n {
        let w = if k % 2 == 1 { T::of(4.0) } else { T::of(2.0) };
        sum += w * f(a + h * T::of_usize(k));
    }
    sum * h / T::of(3.0)
}

/// Simpson with doubling until the relative change drops below the tolerance.
pub fn integrate<T: Real>(f: impl Fn(T) -> T, a: T, b: T, settings: &QuadratureSettings) -> Result<T> {
    if a == b {
        return Ok(T::zero());
    }
    let tol = T::of(settings.rel_tol);
    let mut panels = settings.start_panels;
    let mut prev = simpson(&f, a, b, panels);
    let mut change = T::infinity();
    for _ in 0..settings.max_doublings {
        panels *= 2;
        let next = simpson(&f, a, b, panels);
        change = (next - prev).abs();
        let scale = next.abs().max(T::min_positive_value());
        if change <= tol * scale || next == prev {
            return Ok(next);
        }
        prev = next;
    }
    Err(Error::Quadrature {
        panels,
        change: (change / prev.abs().max(T::min_positive_value())).as_f64(),
    })
}

/// Fixed composite Simpson rule for matrix-valued integrands.
pub fn simpson_matrix<T: Real>(
    f: impl Fn(T) -> CMatrix<T>,
    dim: usize,
    a: T,
    b: T,
    panels: usize,
) -> CMatrix<T> {
    let mut acc = CMatrix::zeros(dim);
    if a == b {
        return acc;
    }
    let n = panels.max(2) + panels % 2;
    let h = (b - a) / T::of_usize(n);
    for k in 0..=n {
        let w = if k == 0 || k == n {
            T::one()
        } else if k % 2 == 1 {
            T::of(4.0)
        } else {
            T::of(2.0)
        };
        let m = f(a + h * T::of_usize(k));
        acc = &acc + &m.scale(num_complex::Complex::new(w, T::zero()));
    }
    acc.scale(num_complex::Complex::new(h / T::of(3.0), T::zero()))
}

/// Matrix Simpson with doubling, measured by the largest entry change.
pub fn integrate_matrix<T: Real>(
    f: impl Fn(T) -> CMatrix<T>,
    dim: usize,
    a: T,
    b: T,
    settings: &QuadratureSettings,
) -> Result<CMatrix<T>> {
    if a == b {
        return Ok(CMatrix::zeros(dim));
    }
    let tol = T::of(settings.rel_tol);
    let mut panels = settings.start_panels;
    let mut prev = simpson_matrix(&f, dim, a, b, panels);
    let mut change = T::infinity();
    for _ in 0..settings.max_doublings {
        panels *= 2;
        let next = simpson_matrix(&f, dim, a, b, panels);
        change = (&next - &prev).max_abs();
        if change <= tol * next.max_abs().max(T::min_positive_value()) || change == T::zero() {
            return Ok(next);
        }
        prev = next;
    }
    Err(Error::Quadrature {
        panels,
        change: change.as_f64(),
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn simpson_is_exact_on_cubics() {
        let v = simpson(|x: f64| x * x * x - 2.0 * x + 1.0, 0.0, 2.0, 2);
        assert!((v - 2.0).abs() < 1e-14);
    }

    #[test]
    fn integrate_converges() {
        let s = QuadratureSettings::default();
        let v = integrate(|x: f64| x.exp(), 0.0, 1.0, &s).unwrap();
        assert!((v - (1f64.exp() - 1.0)).abs() < 1e-12);
        assert_eq!(integrate(|x: f64| x, 1.0, 1.0, &s).unwrap(), 0.0);
        assert_eq!(integrate(|_x: f64| 0.0, 0.0, 1.0, &s).unwrap(), 0.0);
    }

    #[test]
    fn integrate_reports_failure() {
        let s = QuadratureSettings {
            start_panels: 2,
            rel_tol: 1e-15,
            max_doublings: 1,
        };
        let r = integrate(|x: f64| (50.0 * x).sin(), 0.0, 1.0, &s);
        assert!(matches!(r, Err(Error::Quadrature { .. })));
    }
}
