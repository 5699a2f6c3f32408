//! RG transformation, exact effective action and the Polchinski flow.

use core::fmt::Write as _;

use num_complex::Complex;
use num_traits::Zero;

use crate::error::{Error, Result};
use crate::gaussian::{accumulate_derivative, derivative_coeffs, heat_kernel_convolve, Covariance};
use crate::grassmann::{merge_sign_odd, Element, GeneratorSet};
use crate::matrix::CMatrix;
use crate::norm::{norm_coefficients, NormSeries};
use crate::scalar::Real;
use crate::schedule::ScaleSchedule;

/// Expectation weight below which a trajectory is flagged as ill-conditioned.
pub const WEIGHT_WARNING: f64 = 0.1;

fn require_even<T: Real>(f: &Element<T>) -> Result<()> {
    let odd = f.odd_content();
    if odd > T::of(1e-12) * T::one().max(f.max_abs()) {
        return Err(Error::Parity {
            magnitude: odd.as_f64(),
        });
    }
    Ok(())
}

/// `T_A f = −log(e^{½Δ_A} e^{−f})`.
pub fn rg_map<T: Real>(cov: &Covariance<T>, f: &Element<T>) -> Result<Element<T>> {
    require_even(f)?;
    let weight = heat_kernel_convolve(cov, &(-f).exp_of()?)?;
    let w0 = weight.scalar_part();
    if !(w0.re > T::zero()) {
        return Err(Error::FlowLeftLogDomain {
            re: w0.re.as_f64(),
            im: w0.im.as_f64(),
        });
    }
    // log w = log w0 + log(w / w0); the second factor has scalar part 1
    let mut log = weight.scale(w0.inv()).log_of()?;
    log.set_coeff(0, log.scalar_part() + w0.ln());
    Ok(-&log)
}

/// `F(t) = T_{A(0,t)} f0`, with the scalar part removed when `normalized`.
pub fn effective_action_exact<T: Real>(
    schedule: &ScaleSchedule<T>,
    f0: &Element<T>,
    t: T,
    normalized: bool,
) -> Result<Element<T>> {
    let cov = schedule.covariance(T::zero(), t)?;
    let mut f = rg_map(&cov, f0)?;
    if normalized {
        f.set_coeff(0, Complex::zero());
    }
    Ok(f)
}

/// Integrator controls.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FlowOptions {
    /// RK4 steps across the whole grid span.
    pub steps: usize,
    /// Apply the degree `>= 4` projection to the right-hand side.
    pub truncate: bool,
    /// Rerun with doubled steps and compare.
    pub certify: bool,
    /// Largest admissible certificate deviation, relative to `max(1, |F|)`.
    pub tolerance: f64,
}

impl Default for FlowOptions {
    fn default() -> Self {
        Self {
            steps: 400,
            truncate: false,
            certify: true,
            tolerance: 1e-7,
        }
    }
}

/// States `F(t_k, Ψ)` on a time grid.
#[derive(Debug, Clone, PartialEq)]
pub struct Trajectory<T: Real> {
    pub grid: Vec<T>,
    pub states: Vec<Element<T>>,
    /// Scalar part is held at zero.
    pub normalized: bool,
    pub truncated: bool,
    /// `E[e^{−f0}]` under `A(0, t_k)`, reconstructed from the subtracted
    /// scalar parts.
    pub weights: Vec<T>,
    /// Certificate deviation between the base and doubled step counts.
    pub certificate: Option<T>,
    pub warnings: Vec<String>,
}

impl<T: Real> Trajectory<T> {
    pub fn generators(&self) -> &GeneratorSet {
        self.states[0].generators()
    }

    /// Largest odd-degree coefficient over all states, relative to the state size.
    pub fn max_odd_content(&self) -> T {
        self.states
            .iter()
            .map(|s| s.odd_content() / T::one().max(s.max_abs()))
            .fold(T::zero(), T::max)
    }
}

/// `Σ_j ∂_jF ∧ G_j` with `G_j = Σ_i Ȧ_ij ∂_iF`, together with `Δ_Ȧ F`.
fn flow_rhs<T: Real>(rate: &CMatrix<T>, f: &[Complex<T>], truncate: bool) -> (Vec<Complex<T>>, Complex<T>) {
    let dim = rate.dim();
    let len = f.len();
    let full = len - 1;
    let half = Complex::new(T::of(0.5), T::zero());
    let derivs: Vec<Vec<Complex<T>>> = (0..dim).map(|i| derivative_coeffs(f, i)).collect();
    let mut lap = vec![Complex::zero(); len];
    let mut quad = vec![Complex::zero(); len];
    let mut g = vec![Complex::zero(); len];
    for j in 0..dim {
        g.iter_mut().for_each(|x| *x = Complex::zero());
        let mut any = false;
        for (i, d) in derivs.iter().enumerate() {
            let aij = rate[(i, j)];
            if aij.is_zero() {
                continue;
            }
            any = true;
            for (gx, &dx) in g.iter_mut().zip(d) {
                *gx += aij * dx;
            }
        }
        if !any {
            continue;
        }
        accumulate_derivative(&g, j, &mut lap);
        // quad += ∂_jF ∧ G_j
        for (a, &da) in derivs[j].iter().enumerate() {
            if da.is_zero() {
                continue;
            }
            let comp = full & !a;
            let mut b = comp;
            loop {
                let gb = g[b];
                if !gb.is_zero() {
                    let p = da * gb;
                    if merge_sign_odd(a, b) {
                        quad[a | b] -= p;
                    } else {
                        quad[a | b] += p;
                    }
                }
                if b == 0 {
                    break;
                }
                b = (b - 1) & comp;
            }
        }
    }
    // ∂_t F = ½ Δ F + ½ Σ Ȧ_ij ∂_iF ∧ ∂_jF = ½ Δ F − ½ Σ_j ∂_jF ∧ G_j
    let mut rhs: Vec<Complex<T>> = lap
        .iter()
        .zip(&quad)
        .map(|(&l, &q)| (l - q) * half)
        .collect();
    let scalar = rhs[0];
    if truncate {
        for (mask, c) in rhs.iter_mut().enumerate() {
            if mask.count_ones() < 4 {
                *c = Complex::zero();
            }
        }
    }
    rhs[0] = Complex::zero();
    (rhs, scalar)
}

fn axpy<T: Real>(y: &[Complex<T>], h: T, k: &[Complex<T>]) -> Vec<Complex<T>> {
    let h = Complex::new(h, T::zero());
    y.iter().zip(k).map(|(&a, &b)| a + b * h).collect()
}

struct RawRun<T: Real> {
    states: Vec<Vec<Complex<T>>>,
    log_weights: Vec<T>,
}

fn integrate_rk4<T: Real>(
    schedule: &ScaleSchedule<T>,
    f0: &[Complex<T>],
    grid: &[T],
    steps: usize,
    truncate: bool,
) -> RawRun<T> {
    let span = grid[grid.len() - 1] - grid[0];
    let h_target = if span > T::zero() {
        span / T::of_usize(steps.max(1))
    } else {
        T::one()
    };
    let mut y = f0.to_vec();
    let mut log_w = T::zero();
    let mut states = vec![y.clone()];
    let mut log_weights = vec![T::zero()];
    for w in grid.windows(2) {
        let (a, b) = (w[0], w[1]);
        let len = b - a;
        let n = (len / h_target - T::of(1e-9)).ceil().to_usize().unwrap_or(1).max(1);
        let h = len / T::of_usize(n);
        let half = h / T::of(2.0);
        for k in 0..n {
            let t = a + h * T::of_usize(k);
            let r0 = schedule.rate(t);
            let rm = schedule.rate(t + half);
            let r1 = schedule.rate(t + h);
            let (k1, s1) = flow_rhs(&r0, &y, truncate);
            let (k2, s2) = flow_rhs(&rm, &axpy(&y, half, &k1), truncate);
            let (k3, s3) = flow_rhs(&rm, &axpy(&y, half, &k2), truncate);
            let (k4, s4) = flow_rhs(&r1, &axpy(&y, h, &k3), truncate);
            let sixth = h / T::of(6.0);
            for (idx, yv) in y.iter_mut().enumerate() {
                let inc = k1[idx] + (k2[idx] + k3[idx]) * T::of(2.0) + k4[idx];
                *yv += inc * sixth;
            }
            let s = s1 + (s2 + s3) * T::of(2.0) + s4;
            log_w -= s.re * sixth;
        }
        states.push(y.clone());
        log_weights.push(log_w);
    }
    RawRun {
        states,
        log_weights,
    }
}

/// Integrates the normalized Polchinski equation with fixed-step RK4.
pub fn flow_integrate<T: Real>(
    schedule: &ScaleSchedule<T>,
    f0: &Element<T>,
    grid: &[T],
    options: &FlowOptions,
) -> Result<Trajectory<T>> {
    require_even(f0)?;
    if f0.generators().count() != schedule.dim() {
        return Err(Error::Dimension {
            expected: schedule.dim(),
            found: f0.generators().count(),
        });
    }
    if f0.scalar_part().norm() > T::of(1e-12) * T::one().max(f0.max_abs()) {
        return Err(Error::Argument(
            "bare action must be normalized (zero scalar part)".into(),
        ));
    }
    if grid.is_empty() || grid[0] != T::zero() || grid.windows(2).any(|w| !(w[1] > w[0])) {
        return Err(Error::Argument("grid must start at 0 and increase strictly".into()));
    }
    schedule.check_interval(T::zero(), grid[grid.len() - 1])?;
    let mut start = f0.coeffs().to_vec();
    start[0] = Complex::zero();

    let base = integrate_rk4(schedule, &start, grid, options.steps, options.truncate);
    let (run, certificate) = if options.certify {
        let fine = integrate_rk4(schedule, &start, grid, 2 * options.steps, options.truncate);
        let mut worst = T::zero();
        for (a, b) in base.states.iter().zip(&fine.states) {
            let scale = b.iter().map(|c| c.norm()).fold(T::one(), T::max);
            let dev = a
                .iter()
                .zip(b)
                .map(|(x, y)| (x - y).norm())
                .fold(T::zero(), T::max);
            worst = worst.max(dev / scale);
        }
        if worst > T::of(options.tolerance) {
            return Err(Error::Integration(format!(
                "doubling {} steps changed the trajectory by {:e} (tolerance {:e})",
                options.steps,
                worst.as_f64(),
                options.tolerance
            )));
        }
        (fine, Some(worst))
    } else {
        (base, None)
    };

    let gens = f0.generators();
    let states = run
        .states
        .into_iter()
        .map(|c| Element::from_coeffs(gens, c))
        .collect::<Result<Vec<_>>>()?;
    let weights: Vec<T> = run.log_weights.iter().map(|l| l.exp()).collect();
    let mut warnings = Vec::new();
    if let Some((k, w)) = weights
        .iter()
        .enumerate()
        .find(|(_, w)| **w < T::of(WEIGHT_WARNING))
    {
        warnings.push(format!(
            "expectation weight E[exp(-f0)] fell to {:e} at t = {}; the logarithm is ill-conditioned",
            w.as_f64(),
            grid[k]
        ));
    }
    Ok(Trajectory {
        grid: grid.to_vec(),
        states,
        normalized: true,
        truncated: options.truncate,
        weights,
        certificate,
        warnings,
    })
}

/// Norm coefficients of every state.
pub fn trajectory_norms<T: Real>(traj: &Trajectory<T>) -> Result<Vec<NormSeries<T>>> {
    traj.states.iter().map(norm_coefficients).collect()
}

/// CSV with columns `t,m,F_m`, 12 significant digits.
pub fn trajectory_csv<T: Real>(traj: &Trajectory<T>) -> Result<String> {
    let norms = trajectory_norms(traj)?;
    let mut out = String::from("t,m,F_m\n");
    for (t, series) in traj.grid.iter().zip(&norms) {
        for m in 1..=series.len() {
            writeln!(out, "{:.11e},{},{:.11e}", t.as_f64(), m, series.get(m).as_f64())
                .expect("writing to a String");
        }
    }
    Ok(out)
}

/// Uniform grid `0, t/k, …, t`.
pub fn uniform_grid<T: Real>(t: T, points: usize) -> Vec<T> {
    let k = points.max(2) - 1;
    (0..=k).map(|i| t * T::of_usize(i) / T::of_usize(k)).collect()
}
