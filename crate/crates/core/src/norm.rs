//! Matrix and Grassmann norms, the Gram parameter and the radius `R`.

use crate::error::{Error, Result};
use crate::gaussian::{gaussian_moment, Covariance};
use crate::grassmann::{indices_of, Element};
use crate::matrix::CMatrix;
use crate::scalar::Real;
use crate::schedule::ScaleSchedule;

/// Nonnegative coefficients `c_1, …, c_n` of `Σ_m c_m z^{2m}`.
#[derive(Debug, Clone, PartialEq)]
pub struct NormSeries<T: Real> {
    coeffs: Vec<T>,
}

impl<T: Real> NormSeries<T> {
    /// `coeffs[m - 1]` multiplies `z^{2m}`.
    pub fn new(coeffs: Vec<T>) -> Result<Self> {
        if let Some((k, &c)) = coeffs.iter().enumerate().find(|(_, c)| !(**c >= T::zero())) {
            return Err(Error::Invariant(format!(
                "norm coefficient {} is negative or NaN: {c}",
                k + 1
            )));
        }
        Ok(Self { coeffs })
    }

    pub fn zeros(n: usize) -> Self {
        Self {
            coeffs: vec![T::zero(); n],
        }
    }

    /// Number of degrees `n`.
    pub fn len(&self) -> usize {
        self.coeffs.len()
    }

    pub fn is_empty(&self) -> bool {
        self.coeffs.is_empty()
    }

    /// Coefficient of `z^{2m}`, `m ≥ 1`; zero past the end.
    pub fn get(&self, m: usize) -> T {
        if m == 0 {
            return T::zero();
        }
        self.coeffs.get(m - 1).copied().unwrap_or_else(T::zero)
    }

    pub fn as_slice(&self) -> &[T] {
        &self.coeffs
    }

    pub fn eval(&self, z: T) -> T {
        norm_eval(self, z)
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.iter().all(|c| c.is_zero())
    }
}

/// `max_i Σ_j |A_ij|`.
pub fn matrix_norm_1inf<T: Real>(a: &CMatrix<T>) -> T {
    a.norm_1inf()
}

/// `F_m = sup_i (1/2m) Σ_{J ∋ i, |J| = 2m} |ζ_J|` for `m = 1..n`.
pub fn norm_coefficients<T: Real>(f: &Element<T>) -> Result<NormSeries<T>> {
    let odd = f.odd_content();
    let tol = T::of(1e-12).max(T::of(1e-12) * f.max_abs());
    if odd > tol {
        return Err(Error::Parity {
            magnitude: odd.as_f64(),
        });
    }
    let count = f.generators().count();
    let n = count / 2;
    // sums[m - 1][i] = Σ_{J ∋ i, |J| = 2m} |ζ_J|
    let mut sums = vec![vec![T::zero(); count]; n];
    for (mask, c) in f.coeffs().iter().enumerate() {
        let deg = mask.count_ones() as usize;
        if deg == 0 || deg % 2 == 1 {
            continue;
        }
        let a = c.norm();
        if a == T::zero() {
            continue;
        }
        let row = &mut sums[deg / 2 - 1];
        for i in indices_of(mask) {
            row[i - 1] += a;
        }
    }
    let coeffs = sums
        .into_iter()
        .enumerate()
        .map(|(k, row)| {
            let sup = row.into_iter().fold(T::zero(), T::max);
            sup / T::of_usize(2 * (k + 1))
        })
        .collect();
    NormSeries::new(coeffs)
}

/// `‖f‖_z = Σ_m c_m z^{2m}`.
pub fn norm_eval<T: Real>(series: &NormSeries<T>, z: T) -> T {
    let z2 = z * z;
    series
        .coeffs
        .iter()
        .rev()
        .fold(T::zero(), |acc, &c| (acc + c) * z2)
}

/// `σ²_{(s,t)} = ∫_s^t 4 max_{±,i} Ċ^±_ii(τ) dτ` (or the supplied bound).
pub fn sigma_squared<T: Real>(schedule: &ScaleSchedule<T>, s: T, t: T) -> Result<T> {
    if s > t {
        return Err(Error::Argument(format!("sigma_squared needs s <= t, got {s} > {t}")));
    }
    schedule.integrate_scalar(|x| schedule.gram().integrand(x), s, t)
}

/// Outcome of a Gram correlation bound.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GramReport<T> {
    pub lhs: T,
    pub rhs: T,
    pub holds: bool,
}

/// Compares `|E[Ψ_J]|` with `(4 max_{±, i ∈ Λ_J} C^±_ii)^{|J|/2}`.
pub fn gram_bound_check<T: Real>(cov: &Covariance<T>, subset: &[usize]) -> Result<GramReport<T>> {
    let split = cov.split().ok_or_else(|| {
        Error::Configuration("gram_bound_check needs a covariance built from C+ and C-".into())
    })?;
    let n = split.plus.dim();
    let lhs = gaussian_moment(cov, subset)?.norm();
    let mut diag = T::zero();
    for &j in subset {
        let i = if j > n { j - n } else { j } - 1;
        diag = diag.max(split.plus[(i, i)]).max(split.minus[(i, i)]);
    }
    let rhs = (T::of(4.0) * diag).powf(T::of_usize(subset.len()) / T::of(2.0));
    Ok(GramReport {
        lhs,
        rhs,
        holds: lhs <= rhs * (T::one() + T::of(1e-9)),
    })
}

/// `R = [sup_m (2m F_m)^{1/m}]^{-1/2}`; `+∞` for the zero series.
#[allow(non_snake_case)]
pub fn radius_R<T: Real>(series: &NormSeries<T>) -> Result<T> {
    let mut sup = T::zero();
    for (k, &c) in series.coeffs.iter().enumerate() {
        if !(c >= T::zero()) {
            return Err(Error::Invariant(format!("bare coefficient {} is negative", k + 1)));
        }
        let m = T::of_usize(k + 1);
        sup = sup.max((T::of(2.0) * m * c).powf(T::one() / m));
    }
    if sup == T::zero() {
        Ok(T::infinity())
    } else {
        Ok(sup.powf(-T::of(0.5)))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_complex::Complex;
    use crate::grassmann::GeneratorSet;
    use crate::random::Sampler;
    use std::sync::Arc;

    fn c(x: f64) -> Complex<f64> {
        Complex::new(x, 0.0)
    }

    #[test]
    fn matrix_norm_examples() {
        let a = CMatrix::from_rows(&[vec![c(0.0), c(2.0)], vec![c(-2.0), c(0.0)]]).unwrap();
        assert_eq!(matrix_norm_1inf(&a), 2.0);
        assert_eq!(matrix_norm_1inf(&CMatrix::<f64>::zeros(4)), 0.0);
        let mut s = Sampler::new(1);
        let cov: Covariance<f64> = s.covariance(6, 1.0);
        let norm = matrix_norm_1inf(cov.matrix());
        for i in 1..=6 {
            for j in 1..=6 {
                assert!(gaussian_moment(&cov, &[i, j]).unwrap().norm() <= norm);
            }
        }
    }

    #[test]
    fn norm_coefficient_examples() {
        let g = GeneratorSet::with_cap(4, 16).unwrap();
        let f = Element::basis(&g, 0b11, c(3.0)).unwrap();
        assert_eq!(norm_coefficients(&f).unwrap().as_slice(), &[1.5, 0.0]);
        let q = Element::basis(&g, 0b1111, c(0.2)).unwrap();
        assert_eq!(norm_coefficients(&q).unwrap().as_slice(), &[0.0, 0.05]);
        let odd = Element::<f64>::generator(&g, 1).unwrap();
        assert!(matches!(norm_coefficients(&odd), Err(Error::Parity { .. })));
    }

    #[test]
    fn norm_eval_examples() {
        let s = NormSeries::new(vec![0.0, 0.3]).unwrap();
        assert!((norm_eval(&s, 1.5) - 0.3 * 1.5f64.powi(4)).abs() < 1e-15);
        assert_eq!(norm_eval(&s, 0.0), 0.0);
        assert_eq!(norm_eval(&s, -0.7), norm_eval(&s, 0.7));
        assert!(NormSeries::new(vec![-1.0]).is_err());
    }

    #[test]
    fn sigma_squared_of_constant_bound() {
        let m = CMatrix::<f64>::zeros(2);
        let sched = ScaleSchedule::from_fn(
            2,
            2.0,
            move |_| m.clone(),
            crate::schedule::GramSource::Bound(Arc::new(|t| 2.0 * t)),
        )
        .unwrap();
        assert_eq!(sigma_squared(&sched, 0.5, 0.5).unwrap(), 0.0);
        assert!((sigma_squared(&sched, 0.0, 2.0).unwrap() - 4.0).abs() < 1e-12);
        assert!(sigma_squared(&sched, 1.0, 0.5).is_err());
    }

    #[test]
    fn sigma_squared_additive() {
        let mut r = Sampler::new(2);
        let sched: ScaleSchedule<f64> = r.block_schedule(3, 1.0, 2.0);
        let whole = sigma_squared(&sched, 0.1, 1.9).unwrap();
        let split = sigma_squared(&sched, 0.1, 0.8).unwrap() + sigma_squared(&sched, 0.8, 1.9).unwrap();
        assert!((whole - split).abs() < 1e-9 * whole);
    }

    #[test]
    fn gram_bound_examples() {
        let mut r = Sampler::new(3);
        let cov: Covariance<f64> = r.split_covariance(3, 1.0);
        let empty = gram_bound_check(&cov, &[]).unwrap();
        assert_eq!((empty.lhs, empty.rhs, empty.holds), (1.0, 1.0, true));
        for mask in 0..64usize {
            assert!(gram_bound_check(&cov, &indices_of(mask)).unwrap().holds);
        }
        let bare: Covariance<f64> = r.covariance(4, 1.0);
        assert!(matches!(gram_bound_check(&bare, &[1, 2]), Err(Error::Configuration(_))));
    }

    #[test]
    fn radius_examples() {
        let a: f64 = 0.3;
        let r = radius_R(&NormSeries::new(vec![0.0, a]).unwrap()).unwrap();
        assert!((r - (4.0 * a).powf(-0.25)).abs() < 1e-14);
        let r0: f64 = 1.7;
        let s = NormSeries::new((1..=5).map(|m| r0.powi(-2 * m) / (2 * m) as f64).collect()).unwrap();
        assert!((radius_R(&s).unwrap() - r0).abs() < 1e-12);
        assert_eq!(radius_R(&NormSeries::<f64>::zeros(3)).unwrap(), f64::INFINITY);
    }
}
