//! Scale decompositions `A(s, t) = ∫_s^t Ȧ(τ) dτ`.

use std::sync::Arc;

use num_complex::Complex;

use crate::error::{Error, Result};
use crate::gaussian::Covariance;
use crate::matrix::{CMatrix, Matrix};
use crate::quad::{integrate, integrate_matrix, QuadratureSettings};
use crate::scalar::Real;

type RateFn<T> = Arc<dyn Fn(T) -> CMatrix<T> + Send + Sync>;
type ScalarFn<T> = Arc<dyn Fn(T) -> T + Send + Sync>;
type DiagonalFn<T> = Arc<dyn Fn(T) -> (Vec<T>, Vec<T>) + Send + Sync>;

/// Source of the Gram-parameter integrand.
#[derive(Clone)]
pub enum GramSource<T: Real> {
    /// Diagonals of `Ċ⁺(τ)` and `Ċ⁻(τ)`; the integrand is `4 max_{±,i} Ċ^±_ii`.
    Split(DiagonalFn<T>),
    /// A uniform bound `g(τ) ≥ 4 max_{±,i} Ċ^±_ii(τ)`.
    Bound(ScalarFn<T>),
}

impl<T: Real> GramSource<T> {
    pub fn integrand(&self, tau: T) -> T {
        match self {
            GramSource::Split(diag) => {
                let (p, m) = diag(tau);
                T::of(4.0)
                    * p.iter()
                        .chain(m.iter())
                        .fold(T::zero(), |acc, &x| acc.max(x))
            }
            GramSource::Bound(g) => g(tau),
        }
    }
}

/// The family `τ ↦ Ȧ(τ)` on `[0, T]`.
#[derive(Clone)]
pub struct ScaleSchedule<T: Real> {
    dim: usize,
    horizon: T,
    rate: RateFn<T>,
    gram: GramSource<T>,
    breakpoints: Vec<T>,
    quad: QuadratureSettings,
}

impl<T: Real> core::fmt::Debug for ScaleSchedule<T> {
    fn fmt(&self, f: &mut core::fmt::Formatter<'_>) -> core::fmt::Result {
        f.debug_struct("ScaleSchedule")
            .field("dim", &self.dim)
            .field("horizon", &self.horizon)
            .field("breakpoints", &self.breakpoints)
            .finish_non_exhaustive()
    }
}

impl<T: Real> ScaleSchedule<T> {
    /// General schedule; `rate(τ)` must be antisymmetric of size `dim`.
    pub fn from_fn(
        dim: usize,
        horizon: T,
        rate: impl Fn(T) -> CMatrix<T> + Send + Sync + 'static,
        gram: GramSource<T>,
    ) -> Result<Self> {
        if !(horizon >= T::zero()) || !horizon.is_finite() {
            return Err(Error::Argument("horizon must be finite and nonnegative".into()));
        }
        let probe = rate(T::zero());
        if probe.dim() != dim {
            return Err(Error::Dimension {
                expected: dim,
                found: probe.dim(),
            });
        }
        Covariance::new(probe)?;
        Ok(Self {
            dim,
            horizon,
            rate: Arc::new(rate),
            gram,
            breakpoints: Vec::new(),
            quad: QuadratureSettings::default(),
        })
    }

    /// Block schedule `Ċ^±(τ) = w_±(τ) P^±` with fixed positive matrices.
    pub fn block_split(
        plus: Matrix<T>,
        minus: Matrix<T>,
        weight_plus: impl Fn(T) -> T + Send + Sync + 'static,
        weight_minus: impl Fn(T) -> T + Send + Sync + 'static,
        horizon: T,
    ) -> Result<Self> {
        // validates symmetry and positivity
        Covariance::from_split(plus.clone(), minus.clone())?;
        let n = plus.dim();
        let wp: ScalarFn<T> = Arc::new(weight_plus);
        let wm: ScalarFn<T> = Arc::new(weight_minus);
        let (p2, m2, wp2, wm2) = (plus.clone(), minus.clone(), wp.clone(), wm.clone());
        let rate = move |tau: T| {
            let (a, b) = (wp(tau), wm(tau));
            let c = Matrix::from_fn(n, |i, j| a * plus[(i, j)] - b * minus[(i, j)]);
            CMatrix::skew_block(&c.to_complex())
        };
        let diag = move |tau: T| {
            let (a, b) = (wp2(tau), wm2(tau));
            (
                (0..n).map(|i| a * p2[(i, i)]).collect(),
                (0..n).map(|i| b * m2[(i, i)]).collect(),
            )
        };
        Self::from_fn(2 * n, horizon, rate, GramSource::Split(Arc::new(diag)))
    }

    /// Piecewise-linear interpolation of rates tabulated at increasing
    /// `times` starting at 0; the horizon is the last time.
    pub fn piecewise_linear(
        times: Vec<T>,
        rates: Vec<CMatrix<T>>,
        gram: GramSource<T>,
    ) -> Result<Self> {
        if times.len() < 2 || times.len() != rates.len() {
            return Err(Error::Argument(
                "need at least two table rows with matching rates".into(),
            ));
        }
        if times[0] != T::zero() || times.windows(2).any(|w| !(w[1] > w[0])) {
            return Err(Error::Argument("table times must start at 0 and increase".into()));
        }
        let dim = rates[0].dim();
        for r in &rates {
            if r.dim() != dim {
                return Err(Error::Dimension {
                    expected: dim,
                    found: r.dim(),
                });
            }
            Covariance::new(r.clone())?;
        }
        let horizon = *times.last().expect("nonempty");
        let knots = times.clone();
        let rate = move |tau: T| {
            let k = match knots.iter().rposition(|&x| x <= tau) {
                Some(k) if k + 1 < knots.len() => k,
                Some(_) => return rates[rates.len() - 1].clone(),
                None => return rates[0].clone(),
            };
            let w = (tau - knots[k]) / (knots[k + 1] - knots[k]);
            let a = rates[k].scale(Complex::new(T::one() - w, T::zero()));
            let b = rates[k + 1].scale(Complex::new(w, T::zero()));
            &a + &b
        };
        let mut s = Self::from_fn(dim, horizon, rate, gram)?;
        s.breakpoints = times[1..times.len() - 1].to_vec();
        Ok(s)
    }

    pub fn with_quadrature(mut self, settings: QuadratureSettings) -> Self {
        self.quad = settings;
        self
    }

    pub fn with_breakpoints(mut self, mut points: Vec<T>) -> Self {
        points.retain(|&p| p > T::zero() && p < self.horizon);
        points.sort_by(|a, b| a.partial_cmp(b).expect("finite breakpoints"));
        self.breakpoints = points;
        self
    }

    #[inline]
    pub fn dim(&self) -> usize {
        self.dim
    }

    #[inline]
    pub fn horizon(&self) -> T {
        self.horizon
    }

    pub fn quadrature(&self) -> &QuadratureSettings {
        &self.quad
    }

    pub fn gram(&self) -> &GramSource<T> {
        &self.gram
    }

    /// `Ȧ(τ)`.
    pub fn rate(&self, tau: T) -> CMatrix<T> {
        (self.rate)(tau)
    }

    /// `‖Ȧ(τ)‖_{1,∞}`.
    pub fn rate_norm(&self, tau: T) -> T {
        self.rate(tau).norm_1inf()
    }

    pub(crate) fn check_interval(&self, s: T, t: T) -> Result<()> {
        let slack = T::of(1e-12) * T::one().max(self.horizon);
        if !(s >= T::zero()) || !(s <= t) || t > self.horizon + slack {
            return Err(Error::Argument(format!(
                "interval [{s}, {t}] not inside [0, {}] in increasing order",
                self.horizon
            )));
        }
        Ok(())
    }

    /// `[s, t]` cut at the interior breakpoints.
    fn pieces(&self, s: T, t: T) -> Vec<(T, T)> {
        let mut cuts = vec![s];
        cuts.extend(self.breakpoints.iter().copied().filter(|&p| p > s && p < t));
        cuts.push(t);
        cuts.windows(2).map(|w| (w[0], w[1])).collect()
    }

    /// Integral of a scalar function of `τ` over `[s, t]`.
    pub fn integrate_scalar(&self, f: impl Fn(T) -> T, s: T, t: T) -> Result<T> {
        self.check_interval(s, t)?;
        let mut total = T::zero();
        for (a, b) in self.pieces(s, t) {
            total += integrate(&f, a, b, &self.quad)?;
        }
        Ok(total)
    }

    /// `A(s, t) = ∫_s^t Ȧ(τ) dτ`.
    pub fn covariance(&self, s: T, t: T) -> Result<Covariance<T>> {
        self.check_interval(s, t)?;
        let mut acc = CMatrix::zeros(self.dim);
        for (a, b) in self.pieces(s, t) {
            acc = &acc + &integrate_matrix(&*self.rate, self.dim, a, b, &self.quad)?;
        }
        Covariance::new(acc)
    }

    /// `τ(s) = ∫_0^s ‖Ȧ‖_{1,∞}`.
    pub fn tau(&self, s: T) -> Result<T> {
        self.integrate_scalar(|x| self.rate_norm(x), T::zero(), s)
    }
}

/// Rescaled clock `τ(s) = ∫_0^s ‖Ȧ(s′)‖ ds′`.
pub fn tau_rescale<T: Real>(schedule: &ScaleSchedule<T>, s: T) -> Result<T> {
    schedule.tau(s)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::random::Sampler;

    fn constant(c: f64) -> ScaleSchedule<f64> {
        let m = CMatrix::from_rows(&[
            vec![Complex::new(0.0, 0.0), Complex::new(c, 0.0)],
            vec![Complex::new(-c, 0.0), Complex::new(0.0, 0.0)],
        ])
        .unwrap();
        ScaleSchedule::from_fn(2, 3.0, move |_| m.clone(), GramSource::Bound(Arc::new(|_| 1.0)))
            .unwrap()
    }

    #[test]
    fn tau_of_constant_rate() {
        let s = constant(0.7);
        assert_eq!(s.tau(0.0).unwrap(), 0.0);
        assert!((s.tau(2.0).unwrap() - 1.4).abs() < 1e-12);
        assert!((tau_rescale(&s, 3.0).unwrap() - 2.1).abs() < 1e-12);
    }

    #[test]
    fn tau_is_additive() {
        let mut r = Sampler::new(3);
        let s: ScaleSchedule<f64> = r.block_schedule(3, 1.0, 2.0);
        let whole = s.tau(1.7).unwrap();
        let part = s.tau(0.6).unwrap() + s.integrate_scalar(|x| s.rate_norm(x), 0.6, 1.7).unwrap();
        assert!((whole - part).abs() < 1e-10);
    }

    #[test]
    fn covariance_integrates_block_split() {
        let mut r = Sampler::new(4);
        let plus: Matrix<f64> = r.positive_definite(2, 1.0, 0.1);
        let minus: Matrix<f64> = r.positive_definite(2, 1.0, 0.1);
        let s = ScaleSchedule::block_split(
            plus.clone(),
            minus.clone(),
            |t: f64| (-t).exp(),
            |t: f64| (-2.0 * t).exp(),
            2.0,
        )
        .unwrap();
        let a = s.covariance(0.0, 2.0).unwrap();
        let wp = 1.0 - (-2.0f64).exp();
        let wm = (1.0 - (-4.0f64).exp()) / 2.0;
        for i in 0..2 {
            for j in 0..2 {
                let want = wp * plus[(i, j)] - wm * minus[(i, j)];
                assert!((a.entry(i + 1, j + 3).re - want).abs() < 1e-12);
            }
        }
    }

    #[test]
    fn piecewise_table_is_exact_between_knots() {
        let m = |c: f64| {
            CMatrix::from_rows(&[
                vec![Complex::new(0.0, 0.0), Complex::new(c, 0.0)],
                vec![Complex::new(-c, 0.0), Complex::new(0.0, 0.0)],
            ])
            .unwrap()
        };
        let s = ScaleSchedule::piecewise_linear(
            vec![0.0, 1.0, 2.0],
            vec![m(1.0), m(-1.0), m(1.0)],
            GramSource::Bound(Arc::new(|_| 1.0)),
        )
        .unwrap();
        assert!(s.covariance(0.0, 2.0).unwrap().entry(1, 2).norm() < 1e-14);
        assert!((s.covariance(0.0, 0.5).unwrap().entry(1, 2).re - 0.25).abs() < 1e-14);
        assert!((s.tau(2.0).unwrap() - 1.0).abs() < 1e-9);
    }

    #[test]
    fn rejects_bad_intervals() {
        let s = constant(1.0);
        assert!(s.covariance(1.0, 0.5).is_err());
        assert!(s.covariance(0.0, 4.0).is_err());
    }
}
