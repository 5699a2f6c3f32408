//! Finite Grassmann algebra over `2n` generators.
//!
//! A subset `J` of generators is a bitmask: generator `i` (1-based) is bit
//! `i - 1`. Every stored coefficient multiplies the ascending monomial
//! `Ψ_J = ψ_{i1} ∧ … ∧ ψ_{ip}` with `i1 < … < ip`.

use core::ops::{Add, AddAssign, Mul, Neg, Sub, SubAssign};
use std::sync::Arc;

use num_complex::Complex;
use num_traits::{One, Zero};

use crate::error::{Error, Result};
use crate::scalar::{cplx, Real};

/// Default largest generator count.
pub const DEFAULT_MAX_GENERATORS: usize = 16;

/// Environment variable overriding [`DEFAULT_MAX_GENERATORS`].
pub const MAX_GENERATORS_ENV: &str = "FERROFLOW_MAX_GENERATORS";

/// Hard ceiling imposed by the `u32` mask arithmetic and dense storage.
const ABSOLUTE_MAX_GENERATORS: usize = 26;

/// Generator cap currently in force.
pub fn max_generators() -> usize {
    std::env::var(MAX_GENERATORS_ENV)
        .ok()
        .and_then(|v| v.trim().parse::<usize>().ok())
        .filter(|&c| c >= 2)
        .map(|c| c.min(ABSOLUTE_MAX_GENERATORS))
        .unwrap_or(DEFAULT_MAX_GENERATORS)
}

/// The generators `ψ_1, …, ψ_{2n}` of an algebra.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GeneratorSet {
    count: usize,
    labels: Option<Arc<[String]>>,
}

impl GeneratorSet {
    /// `count` generators under the cap from [`max_generators`].
    pub fn new(count: usize) -> Result<Self> {
        Self::with_cap(count, max_generators())
    }

    pub fn with_cap(count: usize, cap: usize) -> Result<Self> {
        if count < 2 || count % 2 != 0 {
            return Err(Error::Argument(format!(
                "generator count must be a positive even number, got {count}"
            )));
        }
        let cap = cap.min(ABSOLUTE_MAX_GENERATORS);
        if count > cap {
            return Err(Error::Capacity {
                requested: count,
                cap,
            });
        }
        Ok(Self {
            count,
            labels: None,
        })
    }

    pub fn with_labels(mut self, labels: Vec<String>) -> Result<Self> {
        if labels.len() != self.count {
            return Err(Error::Dimension {
                expected: self.count,
                found: labels.len(),
            });
        }
        self.labels = Some(labels.into());
        Ok(self)
    }

    /// Number of generators `2n`.
    #[inline]
    pub fn count(&self) -> usize {
        self.count
    }

    /// Number of pairs `n`.
    #[inline]
    pub fn pairs(&self) -> usize {
        self.count / 2
    }

    /// Number of basis monomials `2^{2n}`.
    #[inline]
    pub fn basis_len(&self) -> usize {
        1usize << self.count
    }

    #[inline]
    pub fn full_mask(&self) -> usize {
        self.basis_len() - 1
    }

    pub fn label(&self, i: usize) -> String {
        match &self.labels {
            Some(l) if (1..=self.count).contains(&i) => l[i - 1].clone(),
            _ => format!("psi{i}"),
        }
    }

    /// Algebra on `2 * count` generators: `Ψ` block first, then `Θ`.
    pub fn doubled(&self) -> Result<Self> {
        Self::new(2 * self.count)
    }

    /// Bitmask of a list of 1-based generator indices.
    pub fn mask_of(&self, indices: &[usize]) -> Result<usize> {
        let mut mask = 0usize;
        for &i in indices {
            self.check_index(i)?;
            mask |= 1 << (i - 1);
        }
        Ok(mask)
    }

    fn check_index(&self, i: usize) -> Result<()> {
        if (1..=self.count).contains(&i) {
            Ok(())
        } else {
            Err(Error::Argument(format!(
                "generator index {i} outside 1..={}",
                self.count
            )))
        }
    }
}

/// Ascending 1-based indices of a mask.
pub fn indices_of(mask: usize) -> Vec<usize> {
    let mut out = Vec::with_capacity(mask.count_ones() as usize);
    let mut m = mask;
    while m != 0 {
        out.push(m.trailing_zeros() as usize + 1);
        m &= m - 1;
    }
    out
}

/// True when moving `K` past `J` (to sort `J ++ K`) takes an odd number of
/// transpositions.
#[inline]
pub fn merge_sign_odd(j: usize, k: usize) -> bool {
    let mut parity = 0u32;
    let mut kk = k;
    while kk != 0 {
        let b = kk.trailing_zeros();
        parity ^= ((j >> b) >> 1).count_ones() & 1;
        kk &= kk - 1;
    }
    parity == 1
}

/// Element `Σ_J ζ_J Ψ_J` with dense coefficient storage.
#[derive(Debug, Clone, PartialEq)]
pub struct Element<T: Real> {
    gens: GeneratorSet,
    coeffs: Vec<Complex<T>>,
}

impl<T: Real> Element<T> {
    pub fn zero(gens: &GeneratorSet) -> Self {
        Self {
            gens: gens.clone(),
            coeffs: vec![Complex::zero(); gens.basis_len()],
        }
    }

    pub fn scalar(gens: &GeneratorSet, c: Complex<T>) -> Self {
        let mut e = Self::zero(gens);
        e.coeffs[0] = c;
        e
    }

    pub fn one(gens: &GeneratorSet) -> Self {
        Self::scalar(gens, Complex::one())
    }

    /// The generator `ψ_k`, `k` 1-based.
    pub fn generator(gens: &GeneratorSet, k: usize) -> Result<Self> {
        gens.check_index(k)?;
        let mut e = Self::zero(gens);
        e.coeffs[1 << (k - 1)] = Complex::one();
        Ok(e)
    }

    /// `c · Ψ_J` for the ascending monomial on `mask`.
    pub fn basis(gens: &GeneratorSet, mask: usize, c: Complex<T>) -> Result<Self> {
        if mask > gens.full_mask() {
            return Err(Error::Argument(format!(
                "mask {mask:#b} outside a {}-generator algebra",
                gens.count()
            )));
        }
        let mut e = Self::zero(gens);
        e.coeffs[mask] = c;
        Ok(e)
    }

    /// `ψ_{i1} ∧ ψ_{i2} ∧ …` in the order written.
    pub fn product_of(gens: &GeneratorSet, indices: &[usize]) -> Result<Self> {
        let mut e = Self::one(gens);
        for &i in indices {
            e = e.wedge(&Self::generator(gens, i)?)?;
        }
        Ok(e)
    }

    pub fn from_coeffs(gens: &GeneratorSet, coeffs: Vec<Complex<T>>) -> Result<Self> {
        if coeffs.len() != gens.basis_len() {
            return Err(Error::Dimension {
                expected: gens.basis_len(),
                found: coeffs.len(),
            });
        }
        Ok(Self {
            gens: gens.clone(),
            coeffs,
        })
    }

    #[inline]
    pub fn generators(&self) -> &GeneratorSet {
        &self.gens
    }

    #[inline]
    pub fn coeffs(&self) -> &[Complex<T>] {
        &self.coeffs
    }

    #[inline]
    pub fn coeffs_mut(&mut self) -> &mut [Complex<T>] {
        &mut self.coeffs
    }

    pub fn into_coeffs(self) -> Vec<Complex<T>> {
        self.coeffs
    }

    /// Coefficient of `Ψ_J` by mask.
    #[inline]
    pub fn coeff(&self, mask: usize) -> Complex<T> {
        self.coeffs[mask]
    }

    #[inline]
    pub fn set_coeff(&mut self, mask: usize, c: Complex<T>) {
        self.coeffs[mask] = c;
    }

    /// Scalar part `f_0`.
    #[inline]
    pub fn scalar_part(&self) -> Complex<T> {
        self.coeffs[0]
    }

    /// `ζ_J` for a subset given as 1-based indices in any order.
    pub fn coefficient(&self, subset: &[usize]) -> Result<Complex<T>> {
        let mask = self.gens.mask_of(subset)?;
        if mask.count_ones() as usize != subset.len() {
            return Err(Error::Argument("repeated index in subset".into()));
        }
        Ok(self.coeffs[mask])
    }

    fn same_algebra(&self, other: &Self) -> Result<()> {
        if self.gens.count() != other.gens.count() {
            return Err(Error::Dimension {
                expected: self.gens.count(),
                found: other.gens.count(),
            });
        }
        Ok(())
    }

    /// Exterior product `f ∧ g`.
    pub fn wedge(&self, other: &Self) -> Result<Self> {
        self.same_algebra(other)?;
        let full = self.gens.full_mask();
        let mut out = vec![Complex::<T>::zero(); self.coeffs.len()];
        for (j, &fj) in self.coeffs.iter().enumerate() {
            if fj.is_zero() {
                continue;
            }
            let comp = full & !j;
            let mut k = comp;
            loop {
                let gk = other.coeffs[k];
                if !gk.is_zero() {
                    let p = fj * gk;
                    if merge_sign_odd(j, k) {
                        out[j | k] -= p;
                    } else {
                        out[j | k] += p;
                    }
                }
                if k == 0 {
                    break;
                }
                k = (k - 1) & comp;
            }
        }
        Ok(Self {
            gens: self.gens.clone(),
            coeffs: out,
        })
    }

    /// Left derivative `∂/∂ψ_k`, `k` 1-based.
    pub fn derivative(&self, k: usize) -> Result<Self> {
        self.gens.check_index(k)?;
        let bit = 1usize << (k - 1);
        let below = bit - 1;
        let mut out = vec![Complex::<T>::zero(); self.coeffs.len()];
        for (j, &c) in self.coeffs.iter().enumerate() {
            if j & bit == 0 || c.is_zero() {
                continue;
            }
            out[j ^ bit] = if (j & below).count_ones() % 2 == 1 {
                -c
            } else {
                c
            };
        }
        Ok(Self {
            gens: self.gens.clone(),
            coeffs: out,
        })
    }

    /// Berezin integral over `dψ_{m1} ∧ … ∧ dψ_{mk}`: `∂_{m1}` acts first.
    pub fn berezin_integrate(&self, measure: &[usize]) -> Result<Self> {
        let mut seen = 0usize;
        for &m in measure {
            self.gens.check_index(m)?;
            let bit = 1 << (m - 1);
            if seen & bit != 0 {
                return Err(Error::Argument(format!(
                    "generator {m} repeated in the integration measure"
                )));
            }
            seen |= bit;
        }
        let mut out = self.clone();
        for &m in measure {
            out = out.derivative(m)?;
        }
        Ok(out)
    }

    /// `f(Ψ + Θ)` on the doubled algebra, `θ_i` being generator `i + 2n`.
    pub fn translate_double(&self) -> Result<Self> {
        let n = self.gens.count();
        let doubled = self.gens.doubled()?;
        let mut out = vec![Complex::<T>::zero(); doubled.basis_len()];
        for (j, &c) in self.coeffs.iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            // S ⊆ J are the factors replaced by θ; each θ_a passes every
            // later ψ_b, b > a, b ∈ J \ S.
            let mut s = j;
            loop {
                let psi = j & !s;
                let mut parity = 0u32;
                let mut ss = s;
                while ss != 0 {
                    let a = ss.trailing_zeros();
                    parity ^= ((psi >> a) >> 1).count_ones() & 1;
                    ss &= ss - 1;
                }
                let target = psi | (s << n);
                if parity == 1 {
                    out[target] -= c;
                } else {
                    out[target] += c;
                }
                if s == 0 {
                    break;
                }
                s = (s - 1) & j;
            }
        }
        Ok(Self {
            gens: doubled,
            coeffs: out,
        })
    }

    /// `F(f_0) + Σ_k F^{(k)}(f_0)/k! · f_1^k` from the jet `F^{(k)}(f_0)`.
    pub fn analytic_apply(&self, jet: &[Complex<T>]) -> Result<Self> {
        let mut f1 = self.clone();
        f1.coeffs[0] = Complex::zero();
        let mut result = Self::scalar(&self.gens, jet.first().copied().unwrap_or_default());
        let mut power = f1.clone();
        let mut k = 1usize;
        let mut factorial = T::one();
        while !power.is_zero() {
            let Some(&dk) = jet.get(k) else {
                return Err(Error::Argument(format!(
                    "jet of length {} too short for a nilpotent part of order > {}",
                    jet.len(),
                    k - 1
                )));
            };
            factorial *= T::of_usize(k);
            result.add_scaled(&power, dk / factorial);
            power = power.wedge(&f1)?;
            k += 1;
        }
        Ok(result)
    }

    /// `e^f`.
    pub fn exp_of(&self) -> Result<Self> {
        let e = self.coeffs[0].exp();
        let jet = vec![e; self.gens.count() + 1];
        self.analytic_apply(&jet)
    }

    /// `log f`; the scalar part must be real and positive.
    pub fn log_of(&self) -> Result<Self> {
        let f0 = self.coeffs[0];
        let tol = T::of(1e-12).max(T::epsilon() * T::of(16.0));
        if !(f0.re > T::zero()) || f0.im.abs() > tol * f0.norm() {
            return Err(Error::LogDomain {
                re: f0.re.as_f64(),
                im: f0.im.as_f64(),
            });
        }
        let x = cplx(f0.re);
        let mut jet = Vec::with_capacity(self.gens.count() + 1);
        jet.push(x.ln());
        let mut fact = T::one();
        for k in 1..=self.gens.count() {
            if k > 1 {
                fact *= T::of_usize(k - 1);
            }
            let sign = if k % 2 == 1 { T::one() } else { -T::one() };
            jet.push(cplx(sign * fact) / x.powu(k as u32));
        }
        self.analytic_apply(&jet)
    }

    /// `(even, odd)` parts.
    pub fn parity_split(&self) -> (Self, Self) {
        let mut even = self.clone();
        let mut odd = self.clone();
        for (j, (e, o)) in even.coeffs.iter_mut().zip(odd.coeffs.iter_mut()).enumerate() {
            if j.count_ones() % 2 == 0 {
                *o = Complex::zero();
            } else {
                *e = Complex::zero();
            }
        }
        (even, odd)
    }

    /// Zeroes every coefficient of degree below `d`.
    pub fn project_degree_ge(&self, d: usize) -> Self {
        let mut out = self.clone();
        out.project_degree_ge_in_place(d);
        out
    }

    pub fn project_degree_ge_in_place(&mut self, d: usize) {
        for (j, c) in self.coeffs.iter_mut().enumerate() {
            if (j.count_ones() as usize) < d {
                *c = Complex::zero();
            }
        }
    }

    /// Largest odd-degree coefficient modulus.
    pub fn odd_content(&self) -> T {
        self.coeffs
            .iter()
            .enumerate()
            .filter(|(j, _)| j.count_ones() % 2 == 1)
            .map(|(_, c)| c.norm())
            .fold(T::zero(), T::max)
    }

    pub fn is_even(&self) -> bool {
        self.coeffs
            .iter()
            .enumerate()
            .all(|(j, c)| j.count_ones() % 2 == 0 || c.is_zero())
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.iter().all(|c| c.is_zero())
    }

    pub fn max_abs(&self) -> T {
        self.coeffs.iter().map(|c| c.norm()).fold(T::zero(), T::max)
    }

    /// Largest coefficient-wise deviation from `other`.
    pub fn max_deviation(&self, other: &Self) -> Result<T> {
        self.same_algebra(other)?;
        Ok(self
            .coeffs
            .iter()
            .zip(&other.coeffs)
            .map(|(a, b)| (a - b).norm())
            .fold(T::zero(), T::max))
    }

    /// `self += c · other`.
    pub fn add_scaled(&mut self, other: &Self, c: Complex<T>) {
        assert_eq!(self.gens.count(), other.gens.count(), "algebra mismatch");
        for (a, b) in self.coeffs.iter_mut().zip(&other.coeffs) {
            *a += *b * c;
        }
    }

    pub fn scale(&self, c: Complex<T>) -> Self {
        Self {
            gens: self.gens.clone(),
            coeffs: self.coeffs.iter().map(|&x| x * c).collect(),
        }
    }

    /// Nonzero terms as `(ascending indices, coefficient)`.
    pub fn terms(&self) -> impl Iterator<Item = (Vec<usize>, Complex<T>)> + '_ {
        self.coeffs
            .iter()
            .enumerate()
            .filter(|(_, c)| !c.is_zero())
            .map(|(j, &c)| (indices_of(j), c))
    }
}

impl<T: Real> Add for &Element<T> {
    type Output = Element<T>;
    fn add(self, rhs: Self) -> Element<T> {
        let mut out = self.clone();
        out += rhs;
        out
    }
}

impl<T: Real> Sub for &Element<T> {
    type Output = Element<T>;
    fn sub(self, rhs: Self) -> Element<T> {
        let mut out = self.clone();
        out -= rhs;
        out
    }
}

impl<T: Real> AddAssign<&Element<T>> for Element<T> {
    fn add_assign(&mut self, rhs: &Element<T>) {
        assert_eq!(self.gens.count(), rhs.gens.count(), "algebra mismatch");
        for (a, b) in self.coeffs.iter_mut().zip(&rhs.coeffs) {
            *a += *b;
        }
    }
}

impl<T: Real> SubAssign<&Element<T>> for Element<T> {
    fn sub_assign(&mut self, rhs: &Element<T>) {
        assert_eq!(self.gens.count(), rhs.gens.count(), "algebra mismatch");
        for (a, b) in self.coeffs.iter_mut().zip(&rhs.coeffs) {
            *a -= *b;
        }
    }
}

impl<T: Real> Neg for &Element<T> {
    type Output = Element<T>;
    fn neg(self) -> Element<T> {
        self.scale(-Complex::one())
    }
}

impl<T: Real> Mul<Complex<T>> for &Element<T> {
    type Output = Element<T>;
    fn mul(self, c: Complex<T>) -> Element<T> {
        self.scale(c)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::random::Sampler;

    type E = Element<f64>;

    fn gens(n: usize) -> GeneratorSet {
        GeneratorSet::with_cap(n, 16).unwrap()
    }

    fn c(x: f64) -> Complex<f64> {
        Complex::new(x, 0.0)
    }

    fn psi(g: &GeneratorSet, k: usize) -> E {
        E::generator(g, k).unwrap()
    }

    #[test]
    fn generator_set_limits() {
        assert!(GeneratorSet::with_cap(0, 16).is_err());
        assert!(GeneratorSet::with_cap(3, 16).is_err());
        assert!(matches!(
            GeneratorSet::with_cap(18, 16),
            Err(Error::Capacity { requested: 18, cap: 16 })
        ));
        assert_eq!(GeneratorSet::with_cap(14, 16).unwrap().pairs(), 7);
    }

    #[test]
    fn wedge_of_generators() {
        let g = gens(2);
        let e12 = psi(&g, 1).wedge(&psi(&g, 2)).unwrap();
        assert_eq!(e12.coeff(0b11), c(1.0));
        let e21 = psi(&g, 2).wedge(&psi(&g, 1)).unwrap();
        assert_eq!(e21.coeff(0b11), c(-1.0));
        assert!(psi(&g, 1).wedge(&psi(&g, 1)).unwrap().is_zero());
    }

    #[test]
    fn wedge_distributes() {
        let g = gens(2);
        let a = &E::one(&g) + &psi(&g, 1);
        let b = &E::one(&g) + &psi(&g, 2);
        let p = a.wedge(&b).unwrap();
        assert_eq!(p.coeffs(), &[c(1.0), c(1.0), c(1.0), c(1.0)]);
    }

    #[test]
    fn wedge_rejects_mismatched_algebras() {
        assert!(matches!(
            E::one(&gens(2)).wedge(&E::one(&gens(4))),
            Err(Error::Dimension { .. })
        ));
    }

    #[test]
    fn derivative_signs() {
        let g = gens(2);
        let e12 = E::basis(&g, 0b11, c(1.0)).unwrap();
        assert_eq!(e12.derivative(1).unwrap(), psi(&g, 2));
        assert_eq!(e12.derivative(2).unwrap(), -&psi(&g, 1));
        assert!(E::scalar(&g, c(2.0)).derivative(1).unwrap().is_zero());
        assert!(e12.derivative(3).is_err());
    }

    #[test]
    fn coefficient_lookup() {
        let g = gens(4);
        let f = E::basis(&g, 0b11, c(3.0)).unwrap();
        assert_eq!(f.coefficient(&[1, 2]).unwrap(), c(3.0));
        assert_eq!(f.coefficient(&[2, 1]).unwrap(), c(3.0));
        assert_eq!(f.coefficient(&[]).unwrap(), c(0.0));
    }

    #[test]
    fn coefficient_equals_iterated_derivatives() {
        let g = gens(6);
        let mut s = Sampler::new(3);
        let f: E = s.element(&g, 1.0);
        for mask in 0..g.basis_len() {
            let mut d = f.clone();
            for i in indices_of(mask) {
                d = d.derivative(i).unwrap();
            }
            assert!((d.scalar_part() - f.coeff(mask)).norm() < 1e-15);
        }
    }

    #[test]
    fn berezin_basics() {
        let g = gens(4);
        for m in 1..=4 {
            for n in 1..=4 {
                let v = psi(&g, m).berezin_integrate(&[n]).unwrap().scalar_part();
                assert_eq!(v, c(if m == n { 1.0 } else { 0.0 }));
            }
        }
        assert!(E::scalar(&g, c(5.0))
            .berezin_integrate(&[2])
            .unwrap()
            .is_zero());
        let mut s = Sampler::new(11);
        let f: E = s.element(&g, 1.0);
        let top = f.berezin_integrate(&[1, 2, 3, 4]).unwrap();
        assert_eq!(top.scalar_part(), f.coeff(0b1111));
        assert!(f.berezin_integrate(&[1, 1]).is_err());
    }

    #[test]
    fn translation_examples() {
        let g = gens(2);
        let t = psi(&g, 1).translate_double().unwrap();
        let g2 = g.doubled().unwrap();
        assert_eq!(t, &psi(&g2, 1) + &psi(&g2, 3));

        let e12 = E::basis(&g, 0b11, c(1.0)).unwrap();
        let direct = (&psi(&g2, 1) + &psi(&g2, 3))
            .wedge(&(&psi(&g2, 2) + &psi(&g2, 4)))
            .unwrap();
        assert_eq!(e12.translate_double().unwrap(), direct);
    }

    #[test]
    fn translation_restricts_to_original() {
        let g = gens(4);
        let mut s = Sampler::new(5);
        let f: E = s.element(&g, 1.0);
        let t = f.translate_double().unwrap();
        for mask in 0..g.basis_len() {
            assert_eq!(t.coeff(mask), f.coeff(mask));
        }
    }

    #[test]
    fn translation_matches_substitution() {
        let g = gens(4);
        let g2 = g.doubled().unwrap();
        let mut s = Sampler::new(8);
        let f: E = s.element(&g, 1.0);
        let mut want = E::zero(&g2);
        for (idx, coef) in f.terms() {
            let mut p = E::one(&g2);
            for i in idx {
                let sum = &psi(&g2, i) + &psi(&g2, i + 4);
                p = p.wedge(&sum).unwrap();
            }
            want.add_scaled(&p, coef);
        }
        assert!(f.translate_double().unwrap().max_deviation(&want).unwrap() < 1e-14);
    }

    #[test]
    fn translation_needs_room() {
        if max_generators() < 20 {
            let g = GeneratorSet::with_cap(10, 16).unwrap();
            assert!(matches!(
                E::zero(&g).translate_double(),
                Err(Error::Capacity { .. })
            ));
        }
    }

    #[test]
    fn exp_examples() {
        let g = gens(4);
        assert_eq!(E::zero(&g).exp_of().unwrap(), E::one(&g));
        let f = E::basis(&g, 0b11, c(0.7)).unwrap();
        assert_eq!(f.exp_of().unwrap(), &E::one(&g) + &f);
    }

    #[test]
    fn log_rejects_bad_scalar() {
        let g = gens(2);
        assert!(matches!(E::zero(&g).log_of(), Err(Error::LogDomain { .. })));
        assert!(E::scalar(&g, c(-1.0)).log_of().is_err());
        assert!(E::scalar(&g, Complex::new(1.0, 0.1)).log_of().is_err());
    }

    #[test]
    fn log_inverts_exp() {
        let g = gens(8);
        let mut s = Sampler::new(21);
        for _ in 0..5 {
            let f: E = s.even_element(&g, 1.0);
            let mut f = f;
            f.set_coeff(0, c(0.1));
            let back = f.exp_of().unwrap().log_of().unwrap();
            assert!(back.max_deviation(&f).unwrap() < 1e-10);
        }
    }

    #[test]
    fn parity_and_projection() {
        let g = gens(4);
        let f = &E::one(&g) + &psi(&g, 1);
        let (e, o) = f.parity_split();
        assert_eq!(e, E::one(&g));
        assert_eq!(o, psi(&g, 1));

        let h = &(&E::one(&g) + &E::basis(&g, 0b11, c(1.0)).unwrap())
            + &E::basis(&g, 0b1111, c(1.0)).unwrap();
        assert_eq!(h.project_degree_ge(0), h);
        assert_eq!(
            h.project_degree_ge(4),
            E::basis(&g, 0b1111, c(1.0)).unwrap()
        );
    }

    #[test]
    fn analytic_apply_needs_long_enough_jet() {
        let g = gens(4);
        let f = E::basis(&g, 0b11, c(1.0)).unwrap();
        assert!(f.analytic_apply(&[c(1.0)]).is_err());
    }

    #[test]
    fn works_in_single_precision() {
        let g = gens(4);
        let a = Element::<f32>::generator(&g, 3).unwrap();
        let b = Element::<f32>::generator(&g, 1).unwrap();
        assert_eq!(a.wedge(&b).unwrap().coeff(0b101), Complex::new(-1.0f32, 0.0));
    }
}
