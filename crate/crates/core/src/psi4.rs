//! The fermionic Ψ⁴ model with Gaussian-regularized covariance
//! `Ĉ_s(p) = e^{−(p²+m²)/Λ_s²}/(p²+m²)`, `Λ_s = Λ0 e^{−s}`, on a torus of side `L`.
//!
//! Finite covariance matrices are Fourier sums over the momentum cube
//! `|p_k| ≤ κ Λ0`, certified by a Gaussian tail bound. The continuum closed
//! forms (`σ²`, `‖Ċ_s‖`, `τ̃`) are exposed separately.

use std::f64::consts::{E, PI};
use std::sync::Arc;

use num_complex::Complex;

use crate::error::{Error, Result};
use crate::grassmann::{Element, GeneratorSet};
use crate::matrix::{CMatrix, Matrix};
use crate::norm::{norm_coefficients, NormSeries};
use crate::quad::{integrate, QuadratureSettings};
use crate::schedule::{GramSource, ScaleSchedule};

/// Largest admissible tail of a truncated Fourier sum, relative to its `p = 0` term.
pub const TAIL_TOLERANCE: f64 = 1e-10;

/// Model parameters.
#[derive(Debug, Clone, PartialEq)]
pub struct Psi4Params {
    pub d: usize,
    pub mass: f64,
    pub lambda0: f64,
    pub box_len: f64,
    pub sites: Vec<Vec<f64>>,
    /// Momenta are summed over `|p_k| ≤ cutoff_factor · Λ0`.
    pub cutoff_factor: f64,
}

impl Default for Psi4Params {
    fn default() -> Self {
        Self::desk(4, 1.0, E, 4.0, 4).expect("valid defaults")
    }
}

impl Psi4Params {
    /// `n_sites` points along the first axis at spacing `L/8`.
    pub fn desk(d: usize, mass: f64, lambda0: f64, box_len: f64, n_sites: usize) -> Result<Self> {
        let sites = (0..n_sites)
            .map(|i| {
                let mut x = vec![0.0; d];
                if d > 0 {
                    x[0] = i as f64 * box_len / 8.0;
                }
                x
            })
            .collect();
        let p = Self {
            d,
            mass,
            lambda0,
            box_len,
            sites,
            cutoff_factor: 6.0,
        };
        p.validate()?;
        Ok(p)
    }

    pub fn validate(&self) -> Result<()> {
        if self.d <= 2 {
            return Err(Error::Argument(format!("dimension must exceed 2, got {}", self.d)));
        }
        if !(self.mass > 0.0) || !(self.lambda0 > self.mass) || !self.lambda0.is_finite() {
            return Err(Error::Argument(format!(
                "need 0 < m < Lambda0, got m = {}, Lambda0 = {}",
                self.mass, self.lambda0
            )));
        }
        if !(self.box_len > 0.0) || !self.box_len.is_finite() {
            return Err(Error::Argument(format!("box size must be positive, got {}", self.box_len)));
        }
        if !(self.cutoff_factor > 0.0) {
            return Err(Error::Argument("momentum cutoff factor must be positive".into()));
        }
        if self.sites.is_empty() {
            return Err(Error::Argument("site list is empty".into()));
        }
        for (i, x) in self.sites.iter().enumerate() {
            if x.len() != self.d {
                return Err(Error::Dimension {
                    expected: self.d,
                    found: x.len(),
                });
            }
            if self.sites[..i].contains(x) {
                return Err(Error::Argument(format!("site {i} repeats an earlier site")));
            }
        }
        Ok(())
    }

    /// `Λ_s = Λ0 e^{−s}`.
    pub fn lambda(&self, s: f64) -> f64 {
        self.lambda0 * (-s).exp()
    }

    fn spacing(&self) -> f64 {
        2.0 * PI / self.box_len
    }

    /// Largest lattice index kept per axis.
    fn index_cutoff(&self) -> i64 {
        (self.cutoff_factor * self.lambda0 / self.spacing()).floor() as i64
    }

    /// Relative tail of the truncated sum of `e^{−|p|²/Λ²}` outside the cube.
    pub fn tail_ratio(&self, lambda: f64) -> f64 {
        if lambda == 0.0 {
            return 0.0;
        }
        let c = (self.spacing() / lambda).powi(2);
        let k = self.index_cutoff() as f64 + 1.0;
        // Σ_{|n| > K} e^{−c n²} ≤ 2 e^{−c(K+1)²} / (1 − e^{−2c(K+1)})
        let tail = 2.0 * (-c * k * k).exp() / (1.0 - (-2.0 * c * k).exp());
        let full = 1.0 + (PI / c).sqrt();
        self.d as f64 * tail * full.powi(self.d as i32 - 1)
    }

    fn for_each_momentum(&self, mut f: impl FnMut(&[f64])) {
        let k = self.index_cutoff();
        let h = self.spacing();
        let mut idx = vec![-k; self.d];
        let mut p = vec![0.0; self.d];
        loop {
            for (pk, &n) in p.iter_mut().zip(&idx) {
                *pk = h * n as f64;
            }
            f(&p);
            let mut axis = 0;
            loop {
                if axis == self.d {
                    return;
                }
                idx[axis] += 1;
                if idx[axis] <= k {
                    break;
                }
                idx[axis] = -k;
                axis += 1;
            }
        }
    }
}

/// `Ĉ_s(p)`.
pub fn chat(params: &Psi4Params, s: f64, p: &[f64]) -> f64 {
    let e = p.iter().map(|x| x * x).sum::<f64>() + params.mass * params.mass;
    let l = params.lambda(s);
    (-e / (l * l)).exp() / e
}

/// `C_{s,t}` on the sites, with `C⁺ = C_s` and `C⁻ = C_t`.
#[derive(Debug, Clone, PartialEq)]
pub struct CovarianceBlocks {
    pub c: Matrix<f64>,
    pub plus: Matrix<f64>,
    pub minus: Matrix<f64>,
    /// Certified bound on the neglected momenta relative to the `p = 0` term.
    pub tail_ratio: f64,
}

/// Position-space covariance between the sites; `t = ∞` gives `C_t = 0`.
pub fn covariance_matrix(params: &Psi4Params, s: f64, t: f64) -> Result<CovarianceBlocks> {
    params.validate()?;
    if !(s >= 0.0) || !(t >= s) {
        return Err(Error::Argument(format!("need 0 <= s <= t, got s = {s}, t = {t}")));
    }
    let tail_ratio = params.tail_ratio(params.lambda(s));
    if tail_ratio > TAIL_TOLERANCE {
        return Err(Error::Resolution(format!(
            "momentum tail bound {tail_ratio:e} exceeds {TAIL_TOLERANCE:e}; raise the cutoff factor"
        )));
    }
    let n = params.sites.len();
    let diffs: Vec<(usize, usize, Vec<f64>)> = (0..n)
        .flat_map(|i| (i..n).map(move |j| (i, j)))
        .map(|(i, j)| {
            let d = params.sites[i].iter().zip(&params.sites[j]).map(|(a, b)| a - b).collect();
            (i, j, d)
        })
        .collect();
    let (ls, lt) = (params.lambda(s), if t.is_infinite() { 0.0 } else { params.lambda(t) });
    let m2 = params.mass * params.mass;
    let mut plus = vec![0.0; diffs.len()];
    let mut minus = vec![0.0; diffs.len()];
    params.for_each_momentum(|p| {
        let e = p.iter().map(|x| x * x).sum::<f64>() + m2;
        let ws = (-e / (ls * ls)).exp() / e;
        let wt = if lt == 0.0 { 0.0 } else { (-e / (lt * lt)).exp() / e };
        for (k, (_, _, dx)) in diffs.iter().enumerate() {
            let phase = p.iter().zip(dx).map(|(a, b)| a * b).sum::<f64>().cos();
            plus[k] += ws * phase;
            minus[k] += wt * phase;
        }
    });
    let vol = params.box_len.powi(params.d as i32);
    let fill = |vals: &[f64]| {
        let mut m = Matrix::zeros(n);
        for (k, &(i, j, _)) in diffs.iter().enumerate() {
            m[(i, j)] = vals[k] / vol;
            m[(j, i)] = vals[k] / vol;
        }
        m
    };
    let (plus, minus) = (fill(&plus), fill(&minus));
    Ok(CovarianceBlocks {
        c: &plus - &minus,
        plus,
        minus,
        tail_ratio,
    })
}

/// `Σ_{|n| ≤ K} e^{−p_n²/Λ²} cos(p_n y)` along one axis.
fn axis_sum(params: &Psi4Params, lambda: f64, y: f64) -> f64 {
    let k = params.index_cutoff();
    let h = params.spacing();
    let mut sum = 1.0;
    for n in 1..=k {
        let p = h * n as f64;
        sum += 2.0 * (-(p * p) / (lambda * lambda)).exp() * (p * y).cos();
    }
    sum
}

/// `−dC_τ/dτ` on the sites: `L^{−d} Σ_p (2/Λ_τ²) e^{−(p²+m²)/Λ_τ²} cos(p·(x_i − x_j))`.
pub fn rate_matrix(params: &Psi4Params, tau: f64) -> Matrix<f64> {
    let l = params.lambda(tau);
    let pref = 2.0 / (l * l) * (-(params.mass * params.mass) / (l * l)).exp()
        / params.box_len.powi(params.d as i32);
    let n = params.sites.len();
    Matrix::from_fn(n, |i, j| {
        let (a, b) = (&params.sites[i], &params.sites[j]);
        pref * a
            .iter()
            .zip(b)
            .map(|(x, y)| axis_sum(params, l, x - y))
            .product::<f64>()
    })
}

/// `ρ_d = 2π^{d/2}/(d − 2)`.
pub fn rho(d: usize) -> f64 {
    2.0 * PI.powf(d as f64 / 2.0) / (d as f64 - 2.0)
}

/// `σ²_{(s,t)} = ρ_d (Λ_s^{d−2} − Λ_t^{d−2})`.
pub fn sigma_psi4(params: &Psi4Params, s: f64, t: f64) -> Result<f64> {
    if !(t >= s) {
        return Err(Error::Argument(format!("need s <= t, got s = {s}, t = {t}")));
    }
    let e = params.d as i32 - 2;
    Ok(rho(params.d) * (params.lambda(s).powi(e) - params.lambda(t).powi(e)))
}

/// `2π^{d/2} ∫_s^t Λ_τ^{d−2} dτ` by quadrature; the closed form of [`sigma_psi4`].
pub fn sigma_psi4_quadrature(params: &Psi4Params, s: f64, t: f64) -> Result<f64> {
    let e = params.d as i32 - 2;
    let c = 2.0 * PI.powf(params.d as f64 / 2.0);
    integrate(|x| c * params.lambda(x).powi(e), s, t, &QuadratureSettings::default())
}

/// `σ̃_{(s,t)} = Λ_s^{−1} σ_{(s,t)}` (d = 4).
pub fn sigma_tilde(params: &Psi4Params, s: f64, t: f64) -> Result<f64> {
    require_d4(params)?;
    Ok(sigma_psi4(params, s, t)?.sqrt() / params.lambda(s))
}

/// `‖Ċ_s‖ = (2/Λ_s²) e^{−m²/Λ_s²}`.
pub fn cdot_norm(params: &Psi4Params, s: f64) -> f64 {
    let l2 = params.lambda(s).powi(2);
    2.0 / l2 * (-(params.mass * params.mass) / l2).exp()
}

/// `a(s) = e^{−m²/Λ_s²}`.
pub fn clock_rate(params: &Psi4Params, s: f64) -> f64 {
    (-(params.mass / params.lambda(s)).powi(2)).exp()
}

/// Rescaled clock with its analytic bound.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TauTilde {
    pub value: f64,
    pub bound: f64,
    pub within_bound: bool,
}

/// `τ̃(t) = ∫_0^t e^{−m²/Λ_s²} ds` against `1/(2e) + min(t, ln(Λ0/m))`.
pub fn tau_tilde(params: &Psi4Params, t: f64) -> Result<TauTilde> {
    if !(t >= 0.0) {
        return Err(Error::Argument(format!("need t >= 0, got {t}")));
    }
    let t0 = (params.lambda0 / params.mass).ln();
    // the integrand switches from ≈1 to ≈0 near t0
    let f = |s: f64| clock_rate(params, s);
    let settings = QuadratureSettings::default();
    let value = if t > t0 {
        integrate(f, 0.0, t0, &settings)? + integrate(f, t0, t, &settings)?
    } else {
        integrate(f, 0.0, t, &settings)?
    };
    let bound = 1.0 / (2.0 * E) + t.min(t0);
    Ok(TauTilde {
        value,
        bound,
        within_bound: value <= bound,
    })
}

fn require_d4(params: &Psi4Params) -> Result<()> {
    if params.d != 4 {
        return Err(Error::UnsupportedDimension(params.d));
    }
    Ok(())
}

/// `F̃_m = Λ_t^{−(a+2bm)} F_m`.
pub fn rescale_coefficients(
    params: &Psi4Params,
    series: &NormSeries<f64>,
    t: f64,
    a: f64,
    b: f64,
) -> Result<NormSeries<f64>> {
    scale_by(params, series, t, a, b, -1.0)
}

/// `F_m = Λ_t^{a+2bm} F̃_m`.
pub fn unscale_coefficients(
    params: &Psi4Params,
    series: &NormSeries<f64>,
    t: f64,
    a: f64,
    b: f64,
) -> Result<NormSeries<f64>> {
    scale_by(params, series, t, a, b, 1.0)
}

fn scale_by(
    params: &Psi4Params,
    series: &NormSeries<f64>,
    t: f64,
    a: f64,
    b: f64,
    sign: f64,
) -> Result<NormSeries<f64>> {
    let l = params.lambda(t);
    if !(l > 0.0) {
        return Err(Error::Argument(format!("Lambda_t must be positive at t = {t}")));
    }
    let ln = l.ln();
    NormSeries::new(
        series
            .as_slice()
            .iter()
            .enumerate()
            .map(|(k, &f)| f * (sign * (a + 2.0 * b * (k + 1) as f64) * ln).exp())
            .collect(),
    )
}

/// `1/(12 ρ_4 (1 + ln(Λ0/m)))` (d = 4).
pub fn coupling_bound(params: &Psi4Params) -> Result<f64> {
    require_d4(params)?;
    Ok(1.0 / (12.0 * rho(4) * (1.0 + (params.lambda0 / params.mass).ln())))
}

/// Right-hand side of `z0² < (1 − 12|α| τ̃ σ̃²)/(12|α| τ̃)` with `σ̃² = ρ_4`
/// (its uniform bound) and `τ̃ = τ̃(t)`; positive iff the window is nonempty.
pub fn rescaled_quartic_window(params: &Psi4Params, alpha: f64, t: f64) -> Result<f64> {
    require_d4(params)?;
    let tt = tau_tilde(params, t)?.value;
    let x = 12.0 * alpha.abs() * tt;
    if x == 0.0 {
        return Ok(f64::INFINITY);
    }
    Ok((1.0 - x * rho(4)) / x)
}

/// Schedule, bare action and its norm series for a finite set of sites.
#[derive(Debug, Clone)]
pub struct DeskInstance {
    pub params: Psi4Params,
    pub alpha: f64,
    pub schedule: ScaleSchedule<f64>,
    pub action: Element<f64>,
    pub bare: NormSeries<f64>,
}

/// Ring of `n_sites` sites with `ψ_x ψ̄_x ψ_{x+1} ψ̄_{x+1}` couplings, scaled
/// so the bare norm series is `F_2 = |α|`, over `[0, horizon]`.
pub fn build_desk_instance(params: &Psi4Params, alpha: f64, horizon: f64) -> Result<DeskInstance> {
    params.validate()?;
    let n = params.sites.len();
    let gens = GeneratorSet::new(2 * n)?;
    if n < 2 {
        return Err(Error::Argument("a desk instance needs at least two sites".into()));
    }
    if !alpha.is_finite() {
        return Err(Error::Argument(format!("coupling must be finite, got {alpha}")));
    }
    let bonds: Vec<(usize, usize)> = if n == 2 {
        vec![(1, 2)]
    } else {
        (1..=n).map(|x| (x, x % n + 1)).collect()
    };
    let degree = if n == 2 { 1.0 } else { 2.0 };
    let c = Complex::new(4.0 * alpha / degree, 0.0);
    let mut action = Element::zero(&gens);
    for &(x, y) in &bonds {
        action += &(&Element::product_of(&gens, &[x, n + x, y, n + y])? * c);
    }
    let bare = norm_coefficients(&action)?;

    let p = Arc::new(params.clone());
    let rate_params = p.clone();
    let rate = move |tau: f64| CMatrix::skew_block(&rate_matrix(&rate_params, tau).to_complex());
    let gram_params = p.clone();
    let gram = GramSource::Bound(Arc::new(move |tau: f64| {
        let r = rate_matrix(&gram_params, tau);
        4.0 * (0..r.dim()).map(|i| r[(i, i)]).fold(0.0, f64::max)
    }));
    let schedule = ScaleSchedule::from_fn(2 * n, horizon, rate, gram)?;
    Ok(DeskInstance {
        params: params.clone(),
        alpha,
        schedule,
        action,
        bare,
    })
}

/// Summary rows `s, Λ_s, ‖Ċ_s‖, σ²_{(0,s)}, τ̃(s), τ̃ bound` on `grid`.
pub fn instance_summary(params: &Psi4Params, grid: &[f64]) -> Result<Vec<[f64; 6]>> {
    grid.iter()
        .map(|&s| {
            let tt = tau_tilde(params, s)?;
            Ok([
                s,
                params.lambda(s),
                cdot_norm(params, s),
                sigma_psi4(params, 0.0, s)?,
                tt.value,
                tt.bound,
            ])
        })
        .collect()
}
