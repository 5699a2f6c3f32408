//! Seeded instance generators.
//!
//! All randomness comes from `ChaCha8Rng::seed_from_u64`, a counter-based
//! stream cipher, so a seed reproduces the same instance on every platform.

use num_complex::Complex;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::gaussian::Covariance;
use crate::grassmann::{Element, GeneratorSet};
use crate::matrix::{CMatrix, Matrix};
use crate::scalar::Real;
use crate::schedule::ScaleSchedule;

#[derive(Debug, Clone)]
pub struct Sampler {
    rng: ChaCha8Rng,
}

impl Sampler {
    pub fn new(seed: u64) -> Self {
        Self {
            rng: ChaCha8Rng::seed_from_u64(seed),
        }
    }

    /// Uniform on `[lo, hi)`.
    pub fn uniform(&mut self, lo: f64, hi: f64) -> f64 {
        self.rng.gen_range(lo..hi)
    }

    /// Uniform on `[-scale, scale)`.
    pub fn symmetric_unit(&mut self, scale: f64) -> f64 {
        scale * (2.0 * self.rng.gen::<f64>() - 1.0)
    }

    pub fn index(&mut self, n: usize) -> usize {
        self.rng.gen_range(0..n)
    }

    fn real<T: Real>(&mut self, scale: f64) -> T {
        T::of(self.symmetric_unit(scale))
    }

    fn complex<T: Real>(&mut self, scale: f64) -> Complex<T> {
        Complex::new(self.real(scale), self.real(scale))
    }

    /// Complex coefficients on every monomial.
    pub fn element<T: Real>(&mut self, gens: &GeneratorSet, scale: f64) -> Element<T> {
        let coeffs = (0..gens.basis_len()).map(|_| self.complex(scale)).collect();
        Element::from_coeffs(gens, coeffs).expect("length matches")
    }

    /// Complex coefficients on even monomials only.
    pub fn even_element<T: Real>(&mut self, gens: &GeneratorSet, scale: f64) -> Element<T> {
        let coeffs = (0..gens.basis_len())
            .map(|j: usize| {
                if j.count_ones() % 2 == 0 {
                    self.complex(scale)
                } else {
                    Complex::new(T::zero(), T::zero())
                }
            })
            .collect();
        Element::from_coeffs(gens, coeffs).expect("length matches")
    }

    /// Real even element with zero scalar part, coefficients of degree
    /// `>= min_degree` only.
    pub fn real_even_action<T: Real>(
        &mut self,
        gens: &GeneratorSet,
        scale: f64,
        min_degree: usize,
    ) -> Element<T> {
        let coeffs = (0..gens.basis_len())
            .map(|j: usize| {
                let deg = j.count_ones() as usize;
                if deg > 0 && deg % 2 == 0 && deg >= min_degree {
                    Complex::new(self.real(scale), T::zero())
                } else {
                    Complex::new(T::zero(), T::zero())
                }
            })
            .collect();
        Element::from_coeffs(gens, coeffs).expect("length matches")
    }

    /// Real antisymmetric matrix with entries in `[-scale, scale)`.
    pub fn antisymmetric<T: Real>(&mut self, dim: usize, scale: f64) -> CMatrix<T> {
        let mut m = CMatrix::zeros(dim);
        for i in 0..dim {
            for j in i + 1..dim {
                let v = self.real::<T>(scale);
                m[(i, j)] = Complex::new(v, T::zero());
                m[(j, i)] = Complex::new(-v, T::zero());
            }
        }
        m
    }

    pub fn covariance<T: Real>(&mut self, dim: usize, scale: f64) -> Covariance<T> {
        Covariance::new(self.antisymmetric(dim, scale)).expect("antisymmetric by construction")
    }

    /// Antisymmetric with complex entries.
    pub fn complex_covariance<T: Real>(&mut self, dim: usize, scale: f64) -> Covariance<T> {
        let mut m = CMatrix::zeros(dim);
        for i in 0..dim {
            for j in i + 1..dim {
                let v = self.complex::<T>(scale);
                m[(i, j)] = v;
                m[(j, i)] = -v;
            }
        }
        Covariance::new(m).expect("antisymmetric by construction")
    }

    pub fn symmetric<T: Real>(&mut self, n: usize, scale: f64) -> Matrix<T> {
        let mut m = Matrix::zeros(n);
        for i in 0..n {
            for j in i..n {
                let v = self.real::<T>(scale);
                m[(i, j)] = v;
                m[(j, i)] = v;
            }
        }
        m
    }

    /// `M Mᵀ / n + shift · I` with `M` uniform in `[-scale, scale)`.
    pub fn positive_definite<T: Real>(&mut self, n: usize, scale: f64, shift: f64) -> Matrix<T> {
        let m = Matrix::from_fn(n, |_, _| self.real::<T>(scale));
        let inv_n = T::one() / T::of_usize(n);
        Matrix::from_fn(n, |i, j| {
            let mut s = T::zero();
            for k in 0..n {
                s += m[(i, k)] * m[(j, k)];
            }
            s * inv_n + if i == j { T::of(shift) } else { T::zero() }
        })
    }

    /// Block covariance from a random split `C⁺ − C⁻`.
    pub fn split_covariance<T: Real>(&mut self, n: usize, scale: f64) -> Covariance<T> {
        let plus = self.positive_definite(n, scale, 0.05 * scale);
        let minus = self.positive_definite(n, scale, 0.05 * scale);
        Covariance::from_split(plus, minus).expect("positive definite by construction")
    }

    /// Block schedule `Ċ^±(τ) = e^{-τ} P^±` with random positive `P^±`.
    pub fn block_schedule<T: Real>(&mut self, n: usize, scale: f64, horizon: f64) -> ScaleSchedule<T> {
        let plus = self.positive_definite(n, scale, 0.05 * scale);
        let minus = self.positive_definite(n, scale, 0.05 * scale);
        ScaleSchedule::block_split(plus, minus, |t: T| (-t).exp(), |t: T| (-t).exp(), T::of(horizon))
            .expect("positive definite by construction")
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn same_seed_same_stream() {
        let mut a = Sampler::new(42);
        let mut b = Sampler::new(42);
        let xs: Vec<f64> = (0..8).map(|_| a.uniform(0.0, 1.0)).collect();
        let ys: Vec<f64> = (0..8).map(|_| b.uniform(0.0, 1.0)).collect();
        assert_eq!(xs, ys);
    }

    #[test]
    fn generated_shapes() {
        let mut s = Sampler::new(1);
        let g = GeneratorSet::with_cap(4, 16).unwrap();
        assert!(s.even_element::<f64>(&g, 1.0).is_even());
        let act = s.real_even_action::<f64>(&g, 1.0, 4);
        assert!(act.coeffs().iter().enumerate().all(|(j, c)| j == 15 || c.norm() == 0.0));
        assert!(s.positive_definite::<f64>(5, 1.0, 0.1).is_positive_definite());
    }
}
