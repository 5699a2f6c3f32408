//! Pfaffians, Grassmann Gaussian moments, the weighted Laplacian and the
//! heat-kernel convolution.

use num_complex::Complex;
use num_traits::{One, Zero};

use crate::error::{Error, Result};
use crate::grassmann::{Element, GeneratorSet};
use crate::matrix::{CMatrix, Matrix};
use crate::scalar::Real;

/// Positive split `C = C⁺ − C⁻` of a symmetric block source.
#[derive(Debug, Clone, PartialEq)]
pub struct BlockSplit<T: Real> {
    pub plus: Matrix<T>,
    pub minus: Matrix<T>,
}

/// Skew-symmetric `2n × 2n` covariance, optionally carrying its block source.
#[derive(Debug, Clone, PartialEq)]
pub struct Covariance<T: Real> {
    a: CMatrix<T>,
    split: Option<BlockSplit<T>>,
}

fn skew_tolerance<T: Real>(a: &CMatrix<T>) -> T {
    T::of(1e-12) * T::one().max(a.max_abs())
}

impl<T: Real> Covariance<T> {
    /// Validates skew-symmetry (1e-12 relative) and stores the exactly
    /// antisymmetrized matrix.
    pub fn new(a: CMatrix<T>) -> Result<Self> {
        let dim = a.dim();
        if dim % 2 != 0 {
            return Err(Error::Argument(format!(
                "singular: odd dimension {dim}"
            )));
        }
        let defect = a.max_skew_defect();
        if defect > skew_tolerance(&a) {
            return Err(Error::Argument(format!(
                "matrix is not antisymmetric (defect {})",
                defect.as_f64()
            )));
        }
        let half = Complex::new(T::of(0.5), T::zero());
        let exact = CMatrix::from_fn(dim, |i, j| (a[(i, j)] - a[(j, i)]) * half);
        Ok(Self {
            a: exact,
            split: None,
        })
    }

    pub fn zero(dim: usize) -> Result<Self> {
        Self::new(CMatrix::zeros(dim))
    }

    /// `[[0, C], [−C, 0]]` from a symmetric `n × n` matrix `C`.
    pub fn from_block(c: &CMatrix<T>) -> Result<Self> {
        let asym = c.max_skew_defect_symmetric();
        if asym > skew_tolerance(c) {
            return Err(Error::Argument(format!(
                "block source is not symmetric (defect {})",
                asym.as_f64()
            )));
        }
        Self::new(CMatrix::skew_block(c))
    }

    /// Block covariance of `C = C⁺ − C⁻`, both positive (semi)definite.
    pub fn from_split(plus: Matrix<T>, minus: Matrix<T>) -> Result<Self> {
        if plus.dim() != minus.dim() {
            return Err(Error::Dimension {
                expected: plus.dim(),
                found: minus.dim(),
            });
        }
        for (name, m) in [("C+", &plus), ("C-", &minus)] {
            let scale = T::one().max(m.as_slice().iter().fold(T::zero(), |a, x| a.max(x.abs())));
            if m.max_asymmetry() > T::of(1e-12) * scale {
                return Err(Error::Argument(format!("{name} is not symmetric")));
            }
            let jitter = T::of(1e-12) * scale;
            let shifted = Matrix::from_fn(m.dim(), |i, j| {
                if i == j {
                    m[(i, j)] + jitter
                } else {
                    m[(i, j)]
                }
            });
            if !shifted.is_positive_definite() {
                return Err(Error::Argument(format!("{name} is not positive definite")));
            }
        }
        let c = (&plus - &minus).to_complex();
        let mut cov = Self::new(CMatrix::skew_block(&c))?;
        cov.split = Some(BlockSplit { plus, minus });
        Ok(cov)
    }

    #[inline]
    pub fn matrix(&self) -> &CMatrix<T> {
        &self.a
    }

    #[inline]
    pub fn dim(&self) -> usize {
        self.a.dim()
    }

    pub fn split(&self) -> Option<&BlockSplit<T>> {
        self.split.as_ref()
    }

    /// Entry `A_ij`, 1-based.
    pub fn entry(&self, i: usize, j: usize) -> Complex<T> {
        self.a[(i - 1, j - 1)]
    }

    pub fn sum(&self, other: &Self) -> Result<Self> {
        if self.dim() != other.dim() {
            return Err(Error::Dimension {
                expected: self.dim(),
                found: other.dim(),
            });
        }
        let split = match (&self.split, &other.split) {
            (Some(x), Some(y)) => Some(BlockSplit {
                plus: &x.plus + &y.plus,
                minus: &x.minus + &y.minus,
            }),
            _ => None,
        };
        Ok(Self {
            a: &self.a + &other.a,
            split,
        })
    }

    pub fn scaled(&self, c: T) -> Self {
        Self {
            a: self.a.scale(Complex::new(c, T::zero())),
            split: self.split.as_ref().map(|s| BlockSplit {
                plus: s.plus.scale(c),
                minus: s.minus.scale(c),
            }),
        }
    }

    fn check_algebra(&self, f: &Element<T>) -> Result<()> {
        if f.generators().count() != self.dim() {
            return Err(Error::Dimension {
                expected: self.dim(),
                found: f.generators().count(),
            });
        }
        Ok(())
    }
}

impl<T: Real> CMatrix<T> {
    fn max_skew_defect_symmetric(&self) -> T {
        let n = self.dim();
        let mut worst = T::zero();
        for i in 0..n {
            for j in 0..i {
                worst = worst.max((self[(i, j)] - self[(j, i)]).norm());
            }
        }
        worst
    }
}

/// Pfaffian with `Pf([[0, a], [−a, 0]]) = a`.
pub fn pfaffian<T: Real>(a: &CMatrix<T>) -> Complex<T> {
    let n = a.dim();
    if n % 2 == 1 {
        return Complex::zero();
    }
    if n <= 6 {
        pfaffian_expansion(a)
    } else {
        pfaffian_parlett_reid(a)
    }
}

/// Expansion along the first row; exponential cost, used for small blocks.
pub fn pfaffian_expansion<T: Real>(a: &CMatrix<T>) -> Complex<T> {
    let idx: Vec<usize> = (0..a.dim()).collect();
    expand(a, &idx)
}

fn expand<T: Real>(a: &CMatrix<T>, idx: &[usize]) -> Complex<T> {
    match idx.len() {
        0 => Complex::one(),
        n if n % 2 == 1 => Complex::zero(),
        2 => a[(idx[0], idx[1])],
        _ => {
            let first = idx[0];
            let mut total = Complex::zero();
            let mut rest: Vec<usize> = Vec::with_capacity(idx.len() - 2);
            for (pos, &j) in idx.iter().enumerate().skip(1) {
                let aij = a[(first, j)];
                if aij.is_zero() {
                    continue;
                }
                rest.clear();
                rest.extend(idx[1..].iter().copied().filter(|&k| k != j));
                let term = aij * expand(a, &rest);
                if pos % 2 == 1 {
                    total += term;
                } else {
                    total -= term;
                }
            }
            total
        }
    }
}

/// Skew-symmetric tridiagonalization with partial pivoting.
pub fn pfaffian_parlett_reid<T: Real>(a: &CMatrix<T>) -> Complex<T> {
    let n = a.dim();
    if n % 2 == 1 {
        return Complex::zero();
    }
    let mut m = a.clone();
    let mut pf = Complex::<T>::one();
    let mut k = 0;
    while k + 1 < n {
        let (kp, _) = (k + 1..n)
            .map(|r| (r, m[(r, k)].norm()))
            .fold((k + 1, -T::one()), |acc, x| if x.1 > acc.1 { x } else { acc });
        if kp != k + 1 {
            for c in 0..n {
                let t = m[(k + 1, c)];
                m[(k + 1, c)] = m[(kp, c)];
                m[(kp, c)] = t;
            }
            for r in 0..n {
                let t = m[(r, k + 1)];
                m[(r, k + 1)] = m[(r, kp)];
                m[(r, kp)] = t;
            }
            pf = -pf;
        }
        if m[(k + 1, k)].is_zero() {
            return Complex::zero();
        }
        let pivot = m[(k, k + 1)];
        pf *= pivot;
        if k + 2 < n {
            let tau: Vec<Complex<T>> = (k + 2..n).map(|c| m[(k, c)] / pivot).collect();
            let col: Vec<Complex<T>> = (k + 2..n).map(|r| m[(r, k + 1)]).collect();
            for (r, &tr) in tau.iter().enumerate() {
                for (c, &tc) in tau.iter().enumerate() {
                    let upd = tr * col[c] - col[r] * tc;
                    m[(k + 2 + r, k + 2 + c)] += upd;
                }
            }
        }
        k += 2;
    }
    pf
}

impl<T: Real> Covariance<T> {
    pub fn pfaffian(&self) -> Complex<T> {
        pfaffian(&self.a)
    }
}

/// `E[ψ_{i1} ∧ … ∧ ψ_{ip}]` for 1-based indices in the order given.
pub fn gaussian_moment<T: Real>(cov: &Covariance<T>, subset: &[usize]) -> Result<Complex<T>> {
    for &i in subset {
        if !(1..=cov.dim()).contains(&i) {
            return Err(Error::Argument(format!(
                "index {i} outside 1..={}",
                cov.dim()
            )));
        }
    }
    if subset.len() % 2 == 1 {
        return Ok(Complex::zero());
    }
    let idx: Vec<usize> = subset.iter().map(|&i| i - 1).collect();
    Ok(pfaffian(&cov.a.submatrix(&idx, &idx)))
}

/// Moments of every ascending monomial, indexed by mask.
pub fn moment_table<T: Real>(cov: &Covariance<T>) -> Vec<Complex<T>> {
    let dim = cov.dim();
    let mut table = vec![Complex::<T>::zero(); 1usize << dim];
    table[0] = Complex::one();
    for mask in 1usize..(1 << dim) {
        if mask.count_ones() % 2 == 1 {
            continue;
        }
        let i = mask.trailing_zeros() as usize;
        let rest = mask ^ (1 << i);
        let mut acc = Complex::zero();
        let mut bits = rest;
        let mut pos = 0usize;
        while bits != 0 {
            let k = bits.trailing_zeros() as usize;
            let term = cov.a[(i, k)] * table[rest ^ (1 << k)];
            if pos % 2 == 0 {
                acc += term;
            } else {
                acc -= term;
            }
            bits &= bits - 1;
            pos += 1;
        }
        table[mask] = acc;
    }
    table
}

/// `E_A[f]`, the linear extension of the moments.
pub fn gaussian_expectation<T: Real>(cov: &Covariance<T>, f: &Element<T>) -> Result<Complex<T>> {
    cov.check_algebra(f)?;
    let table = moment_table(cov);
    Ok(f
        .coeffs()
        .iter()
        .zip(&table)
        .filter(|(c, _)| !c.is_zero())
        .map(|(c, m)| c * m)
        .fold(Complex::zero(), |a, b| a + b))
}

/// Computes `Σ_j ∂_j (Σ_i A_ij ∂_i f)` on raw coefficient arrays.
pub(crate) fn laplacian_coeffs<T: Real>(
    a: &CMatrix<T>,
    f: &[Complex<T>],
) -> Vec<Complex<T>> {
    let dim = a.dim();
    let len = f.len();
    let derivs: Vec<Vec<Complex<T>>> = (0..dim).map(|i| derivative_coeffs(f, i)).collect();
    let mut out = vec![Complex::zero(); len];
    let mut g = vec![Complex::zero(); len];
    for j in 0..dim {
        g.iter_mut().for_each(|x| *x = Complex::zero());
        let mut any = false;
        for (i, d) in derivs.iter().enumerate() {
            let aij = a[(i, j)];
            if aij.is_zero() {
                continue;
            }
            any = true;
            for (gx, &dx) in g.iter_mut().zip(d) {
                *gx += aij * dx;
            }
        }
        if any {
            accumulate_derivative(&g, j, &mut out);
        }
    }
    out
}

/// Left derivative by 0-based bit.
pub(crate) fn derivative_coeffs<T: Real>(f: &[Complex<T>], bit: usize) -> Vec<Complex<T>> {
    let mut out = vec![Complex::zero(); f.len()];
    accumulate_derivative(f, bit, &mut out);
    out
}

/// `out += ∂_{bit} f`.
pub(crate) fn accumulate_derivative<T: Real>(
    f: &[Complex<T>],
    bit: usize,
    out: &mut [Complex<T>],
) {
    let b = 1usize << bit;
    let below = b - 1;
    for (j, &c) in f.iter().enumerate() {
        if j & b == 0 || c.is_zero() {
            continue;
        }
        if (j & below).count_ones() % 2 == 1 {
            out[j ^ b] -= c;
        } else {
            out[j ^ b] += c;
        }
    }
}

/// Weighted Laplacian `Δ_A f = Σ_{ij} A_ij ∂_j ∂_i f` (`∂_i` applied first).
pub fn laplacian<T: Real>(cov: &Covariance<T>, f: &Element<T>) -> Result<Element<T>> {
    cov.check_algebra(f)?;
    Element::from_coeffs(f.generators(), laplacian_coeffs(&cov.a, f.coeffs()))
}

/// `e^{½Δ_A} f` as the terminating exponential series.
pub fn heat_kernel_convolve<T: Real>(cov: &Covariance<T>, f: &Element<T>) -> Result<Element<T>> {
    cov.check_algebra(f)?;
    let mut result = f.clone();
    let mut term = f.coeffs().to_vec();
    let mut k = 1usize;
    loop {
        let next = laplacian_coeffs(&cov.a, &term);
        let scale = Complex::new(T::of(0.5) / T::of_usize(k), T::zero());
        term = next.into_iter().map(|x| x * scale).collect();
        if term.iter().all(|x| x.is_zero()) {
            break;
        }
        for (r, t) in result.coeffs_mut().iter_mut().zip(&term) {
            *r += *t;
        }
        k += 1;
    }
    Ok(result)
}

/// Largest coefficient deviation between `e^{½Δ_{A+B}} f` and
/// `e^{½Δ_B} e^{½Δ_A} f`.
pub fn covariance_split_check<T: Real>(
    a: &Covariance<T>,
    b: &Covariance<T>,
    f: &Element<T>,
) -> Result<T> {
    let joint = heat_kernel_convolve(&a.sum(b)?, f)?;
    let staged = heat_kernel_convolve(b, &heat_kernel_convolve(a, f)?)?;
    joint.max_deviation(&staged)
}

/// `E[ψ_{j1} ψ̄_{k1} ⋯ ψ_{jp} ψ̄_{kp}] = det C_{J×K}` for the block covariance
/// of a symmetric `C`; 1-based indices.
pub fn det_correlation<T: Real>(
    c: &CMatrix<T>,
    rows: &[usize],
    cols: &[usize],
) -> Result<Complex<T>> {
    if rows.is_empty() || cols.is_empty() {
        return Err(Error::Argument("correlation subsets must be nonempty".into()));
    }
    let n = c.dim();
    for &i in rows.iter().chain(cols) {
        if !(1..=n).contains(&i) {
            return Err(Error::Argument(format!("index {i} outside 1..={n}")));
        }
    }
    if rows.len() != cols.len() {
        return Ok(Complex::zero());
    }
    let r: Vec<usize> = rows.iter().map(|&i| i - 1).collect();
    let k: Vec<usize> = cols.iter().map(|&i| i - 1).collect();
    Ok(c.submatrix(&r, &k).det())
}

/// `ψ_{j1} ψ̄_{k1} ⋯` as an element of the `2n`-generator block algebra.
pub fn interleaved_product<T: Real>(
    gens: &GeneratorSet,
    rows: &[usize],
    cols: &[usize],
) -> Result<Element<T>> {
    let n = gens.pairs();
    let order: Vec<usize> = rows
        .iter()
        .zip(cols)
        .flat_map(|(&j, &k)| [j, k + n])
        .collect();
    Element::product_of(gens, &order)
}
