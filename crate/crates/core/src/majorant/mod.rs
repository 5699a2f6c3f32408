//! Hamilton–Jacobi majorants of the norm coefficients along the flow.
//!
//! The majorant `φ(t, z)` solves `φ_τ − ½ φ_z² = 0` in the rescaled time
//! `τ(t)`, starting from `½[φ(0, σ + z) + φ(0, σ − z)]` with `σ = σ_{(0,t)}`.
//! Values come from the characteristic form `φ = g(z0) − ½ τ u0(z0)²`.

mod bound;
mod characteristic;
mod hopflax;

pub use bound::{gamma, rhs_coefficient_bound, rhs_coefficient_bounds};
pub use characteristic::{
    invert_characteristic_log, invert_characteristic_quartic, CharacteristicSolution,
    InitialDatum, InversionMethod,
};
pub use hopflax::{hopflax_solve, hopflax_solve_with, HopfLaxMethod, HopfLaxValue, SampledFunction};

use num_complex::Complex;

use crate::error::{Error, Result};
use crate::norm::{radius_R, sigma_squared, NormSeries};
use crate::schedule::ScaleSchedule;

/// Contour nodes used by [`majorant_coefficients`].
pub const CAUCHY_NODES: usize = 128;
/// Extracted coefficients down to this value (or the rounding level of the
/// contour sum, if larger) are clamped to zero.
pub const CLAMP_THRESHOLD: f64 = 1e-12;

/// Bare data of a majorant.
#[derive(Debug, Clone, PartialEq)]
pub enum BareData {
    /// `φ(0, z) = α z⁴`.
    Quartic { alpha: f64 },
    /// General bare series, bounded through its radius.
    Series(NormSeries<f64>),
    /// Only the radius is known.
    Logarithmic { radius: f64 },
}

/// Bare data together with the scale decomposition it flows under.
#[derive(Debug, Clone)]
pub struct MajorantSpec {
    bare: BareData,
    schedule: ScaleSchedule<f64>,
    radius: f64,
}

/// Terms of the existence inequality at time `t`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ExistenceReport {
    pub radius: f64,
    pub tau: f64,
    pub sigma: f64,
    pub holds: bool,
}

impl std::fmt::Display for ExistenceReport {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        writeln!(f, "R = {:.11e}", self.radius)?;
        writeln!(f, "tau = {:.11e}", self.tau)?;
        writeln!(f, "sigma = {:.11e}", self.sigma)?;
        writeln!(f, "holds = {}", self.holds)
    }
}

/// Majorant coefficients `φ_m(t)`, `m ≥ 1`, plus the constant term.
#[derive(Debug, Clone, PartialEq)]
pub struct MajorantCoefficients {
    pub coefficients: NormSeries<f64>,
    pub constant: f64,
    pub contour_radius: f64,
    /// Degrees whose tiny negative quadrature value was clamped to zero.
    pub clamped: Vec<usize>,
}

impl MajorantSpec {
    pub fn quartic(alpha: f64, schedule: ScaleSchedule<f64>) -> Result<Self> {
        if !(alpha >= 0.0) || !alpha.is_finite() {
            return Err(Error::Invariant(format!("quartic coupling must be >= 0, got {alpha}")));
        }
        let radius = if alpha == 0.0 {
            f64::INFINITY
        } else {
            (4.0 * alpha).powf(-0.25)
        };
        Ok(Self {
            bare: BareData::Quartic { alpha },
            schedule,
            radius,
        })
    }

    pub fn series(series: NormSeries<f64>, schedule: ScaleSchedule<f64>) -> Result<Self> {
        let radius = radius_R(&series)?;
        Ok(Self {
            bare: BareData::Series(series),
            schedule,
            radius,
        })
    }

    pub fn logarithmic(radius: f64, schedule: ScaleSchedule<f64>) -> Result<Self> {
        if !(radius > 0.0) {
            return Err(Error::Invariant(format!("radius must be positive, got {radius}")));
        }
        Ok(Self {
            bare: BareData::Logarithmic { radius },
            schedule,
            radius,
        })
    }

    pub fn bare(&self) -> &BareData {
        &self.bare
    }

    pub fn schedule(&self) -> &ScaleSchedule<f64> {
        &self.schedule
    }

    pub fn radius(&self) -> f64 {
        self.radius
    }

    /// `(τ(t), σ_{(0,t)})`.
    pub fn clock(&self, t: f64) -> Result<(f64, f64)> {
        let tau = self.schedule.tau(t)?;
        let sigma = sigma_squared(&self.schedule, 0.0, t)?.max(0.0).sqrt();
        Ok((tau, sigma))
    }

    fn datum(&self, sigma: f64) -> Result<InitialDatum> {
        match self.bare {
            BareData::Quartic { alpha } => Ok(InitialDatum::Quartic { alpha, sigma }),
            _ => {
                if self.radius.is_infinite() {
                    return Ok(InitialDatum::Logarithmic { lambda: 0.0 });
                }
                if sigma >= self.radius {
                    return Err(Error::Existence(format!(
                        "sigma = {sigma} reaches the radius R = {}",
                        self.radius
                    )));
                }
                Ok(InitialDatum::Logarithmic {
                    lambda: 1.0 / (self.radius - sigma),
                })
            }
        }
    }

    /// Characteristic solution at time `t` and the datum offset `φ(t, 0)`.
    pub fn characteristic(&self, t: f64) -> Result<CharacteristicSolution> {
        let (tau, sigma) = self.clock(t)?;
        CharacteristicSolution::new(self.datum(sigma)?, tau)
    }

    fn offset(&self, sigma: f64) -> f64 {
        match self.bare {
            BareData::Quartic { alpha } => alpha * sigma.powi(4),
            _ if self.radius.is_infinite() => 0.0,
            _ => -(1.0 - sigma / self.radius).ln(),
        }
    }
}

/// Evaluates the existence inequality; the quartic variant is
/// `1 − 12 α σ² τ > 0`, the general one `√τ + σ < R`.
pub fn existence_check(spec: &MajorantSpec, t: f64) -> Result<ExistenceReport> {
    let (tau, sigma) = spec.clock(t)?;
    let holds = match spec.bare {
        BareData::Quartic { alpha } => 1.0 - 12.0 * alpha * sigma * sigma * tau > 0.0,
        _ => tau.sqrt() + sigma < spec.radius,
    };
    Ok(ExistenceReport {
        radius: spec.radius,
        tau,
        sigma,
        holds,
    })
}

/// `g(z0) = φ̃(0, z0; t)` in closed form.
fn datum_value(datum: &InitialDatum, offset: f64, z0: Complex<f64>) -> Complex<f64> {
    match *datum {
        InitialDatum::Quartic { alpha, sigma } => {
            let z2 = z0 * z0;
            (z2 * z2 + z2 * (6.0 * sigma * sigma) + sigma.powi(4)) * alpha
        }
        InitialDatum::Logarithmic { lambda } => {
            let l2 = lambda * lambda;
            Complex::new(offset, 0.0) - 0.5 * (1.0 - z0 * z0 * l2).ln()
        }
    }
}

fn value_on(sol: &CharacteristicSolution, offset: f64, z0: Complex<f64>) -> Complex<f64> {
    let u0 = sol.datum.u0_complex(z0);
    datum_value(&sol.datum, offset, z0) - 0.5 * sol.tau * u0 * u0
}

/// `φ(t, z)`.
pub fn majorant_value(spec: &MajorantSpec, t: f64, z: f64) -> Result<f64> {
    let (tau, sigma) = spec.clock(t)?;
    let sol = CharacteristicSolution::new(spec.datum(sigma)?, tau)?;
    let z0 = sol.invert(z)?;
    Ok(value_on(&sol, spec.offset(sigma), Complex::new(z0, 0.0)).re)
}

/// `φ(t, 0) + ∫_0^z u(τ(t), z′) dz′` by Simpson quadrature.
pub fn majorant_value_by_integration(spec: &MajorantSpec, t: f64, z: f64) -> Result<f64> {
    let (tau, sigma) = spec.clock(t)?;
    let sol = CharacteristicSolution::new(spec.datum(sigma)?, tau)?;
    sol.invert(z)?;
    let mut panels = 64;
    let integral = |panels: usize| -> Result<f64> {
        let h = z / panels as f64;
        let mut sum = 0.0;
        for k in 0..=panels {
            let w = if k == 0 || k == panels {
                1.0
            } else if k % 2 == 1 {
                4.0
            } else {
                2.0
            };
            sum += w * sol.u(h * k as f64)?;
        }
        Ok(sum * h / 3.0)
    };
    let mut prev = integral(panels)?;
    for _ in 0..12 {
        panels *= 2;
        let next = integral(panels)?;
        if (next - prev).abs() <= 1e-13 * next.abs().max(1e-300) {
            return Ok(spec.offset(sigma) + next);
        }
        prev = next;
    }
    Ok(spec.offset(sigma) + prev)
}

/// `φ_m(t)` for `m = 1..=m_max` by Cauchy integration with [`CAUCHY_NODES`] nodes.
pub fn majorant_coefficients(spec: &MajorantSpec, t: f64, m_max: usize) -> Result<MajorantCoefficients> {
    majorant_coefficients_with(spec, t, m_max, CAUCHY_NODES)
}

/// As [`majorant_coefficients`] with an explicit even node count.
pub fn majorant_coefficients_with(
    spec: &MajorantSpec,
    t: f64,
    m_max: usize,
    nodes: usize,
) -> Result<MajorantCoefficients> {
    if nodes < 4 || nodes % 2 != 0 {
        return Err(Error::Argument(format!("node count must be even and >= 4, got {nodes}")));
    }
    let (tau, sigma) = spec.clock(t)?;
    let analytic = spec.radius - sigma;
    if !(analytic > 0.0) {
        return Err(Error::Existence(format!(
            "analyticity window is empty: R = {}, sigma = {sigma}",
            spec.radius
        )));
    }
    let sol = CharacteristicSolution::new(spec.datum(sigma)?, tau)?;
    if !sol.has_window() {
        return Err(Error::Existence(format!(
            "characteristic window is empty at t = {t} (tau = {tau}, sigma = {sigma})"
        )));
    }
    let mut r = 0.5 * analytic.min(sol.critical_z);
    if r.is_infinite() {
        r = 1.0;
    }
    let offset = spec.offset(sigma);
    // φ is even: the nodes on the upper half circle suffice
    let half = nodes / 2;
    let mut samples = Vec::with_capacity(half);
    for k in 0..half {
        let theta = 2.0 * std::f64::consts::PI * k as f64 / nodes as f64;
        let z = Complex::from_polar(r, theta);
        let z0 = sol.invert_complex(z)?;
        samples.push((theta, value_on(&sol, offset, z0)));
    }
    let peak = samples.iter().map(|(_, v)| v.norm()).fold(0.0, f64::max);
    let mut coeffs = Vec::with_capacity(m_max);
    let mut clamped = Vec::new();
    for m in 1..=m_max {
        // rounding in the node values is amplified by r^{-2m}
        let noise = (CLAMP_THRESHOLD).max(64.0 * f64::EPSILON * peak / r.powi(2 * m as i32));
        let acc: f64 = samples
            .iter()
            .map(|&(theta, v)| (v * Complex::from_polar(1.0, -2.0 * m as f64 * theta)).re)
            .sum();
        let mut c = 2.0 * acc / nodes as f64 / r.powi(2 * m as i32);
        if c < 0.0 {
            if c >= -noise {
                clamped.push(m);
                c = 0.0;
            } else {
                return Err(Error::Invariant(format!(
                    "majorant coefficient {m} is negative ({c:e}) beyond quadrature noise"
                )));
            }
        }
        coeffs.push(c);
    }
    Ok(MajorantCoefficients {
        coefficients: NormSeries::new(coeffs)?,
        constant: value_on(&sol, offset, Complex::new(0.0, 0.0)).re,
        contour_radius: r,
        clamped,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::matrix::{CMatrix, Matrix};
    use crate::random::Sampler;
    use crate::schedule::GramSource;
    use std::sync::Arc;

    fn zero_schedule() -> ScaleSchedule<f64> {
        ScaleSchedule::from_fn(
            2,
            1.0,
            |_| CMatrix::zeros(2),
            GramSource::Bound(Arc::new(|_| 0.0)),
        )
        .unwrap()
    }

    fn block(seed: u64, scale: f64) -> ScaleSchedule<f64> {
        Sampler::new(seed).block_schedule(2, scale, 1.0)
    }

    #[test]
    fn quartic_at_time_zero_is_bare() {
        let spec = MajorantSpec::quartic(0.3, block(1, 0.2)).unwrap();
        for z in [0.0, 0.2, -0.5, 0.9] {
            let v = majorant_value(&spec, 0.0, z).unwrap();
            assert!((v - 0.3 * z.powi(4)).abs() < 1e-15);
        }
        let c = majorant_coefficients(&spec, 0.0, 4).unwrap();
        assert!((c.coefficients.get(2) - 0.3).abs() < 1e-12);
        for m in [1, 3, 4] {
            assert!(c.coefficients.get(m) <= 1e-10);
        }
    }

    #[test]
    fn value_is_even_and_flat_at_origin() {
        let spec = MajorantSpec::quartic(0.2, block(2, 0.3)).unwrap();
        let sol = spec.characteristic(0.8).unwrap();
        let zc = sol.critical_z;
        for k in 1..8 {
            let z = 0.1 * k as f64 * zc;
            let a = majorant_value(&spec, 0.8, z).unwrap();
            let b = majorant_value(&spec, 0.8, -z).unwrap();
            assert!((a - b).abs() <= 1e-14 * a.abs().max(1.0));
        }
        let h = 1e-5 * zc;
        let d = (majorant_value(&spec, 0.8, h).unwrap() - majorant_value(&spec, 0.8, -h).unwrap()) / (2.0 * h);
        assert!(d.abs() < 1e-12);
    }

    #[test]
    fn characteristic_form_matches_integrated_velocity() {
        let mut s = Sampler::new(3);
        let series = NormSeries::new(vec![0.05, 0.02, 0.01]).unwrap();
        let specs = [
            MajorantSpec::quartic(0.25, block(4, 0.3)).unwrap(),
            MajorantSpec::series(series, block(5, 0.05)).unwrap(),
        ];
        for spec in &specs {
            for _ in 0..5 {
                let t = s.uniform(0.1, 1.0);
                let sol = spec.characteristic(t).unwrap();
                let z = s.uniform(-0.9, 0.9) * sol.critical_z.min(2.0);
                let a = majorant_value(spec, t, z).unwrap();
                let b = majorant_value_by_integration(spec, t, z).unwrap();
                assert!((a - b).abs() <= 1e-10 * a.abs().max(1.0), "{a} vs {b}");
            }
        }
    }

    #[test]
    fn quartic_majorant_grows_in_time() {
        let spec = MajorantSpec::quartic(0.2, block(6, 0.3)).unwrap();
        let zc = spec.characteristic(1.0).unwrap().critical_z;
        for k in 0..6 {
            let z = 0.15 * k as f64 * zc;
            let mut prev = majorant_value(&spec, 0.0, z).unwrap();
            for j in 1..=10 {
                let v = majorant_value(&spec, 0.1 * j as f64, z).unwrap();
                assert!(v >= prev - 1e-14);
                prev = v;
            }
        }
    }

    #[test]
    fn cauchy_extraction_is_spectrally_converged() {
        let series = NormSeries::new(vec![0.1, 0.04, 0.0, 0.01]).unwrap();
        let specs = [
            MajorantSpec::quartic(0.4, block(7, 0.3)).unwrap(),
            MajorantSpec::series(series, block(8, 0.05)).unwrap(),
        ];
        for spec in &specs {
            let a = majorant_coefficients_with(spec, 0.7, 4, 128).unwrap();
            let b = majorant_coefficients_with(spec, 0.7, 4, 256).unwrap();
            for m in 1..=4 {
                let (x, y) = (a.coefficients.get(m), b.coefficients.get(m));
                assert!((x - y).abs() < 1e-10, "m = {m}: {x} vs {y}");
            }
        }
    }

    #[test]
    fn coefficients_resum_to_value() {
        let spec = MajorantSpec::quartic(0.3, block(9, 0.3)).unwrap();
        let c = majorant_coefficients_with(&spec, 0.6, 12, 256).unwrap();
        let z = 0.5 * c.contour_radius;
        let resummed = c.constant + c.coefficients.eval(z);
        let direct = majorant_value(&spec, 0.6, z).unwrap();
        assert!((resummed - direct).abs() < 1e-12);
    }

    #[test]
    fn log_datum_dominates_bare_series_coefficients() {
        let series = NormSeries::new(vec![0.2, 0.05, 0.03]).unwrap();
        let spec = MajorantSpec::series(series.clone(), zero_schedule()).unwrap();
        let c = majorant_coefficients(&spec, 0.0, 3).unwrap();
        for m in 1..=3 {
            assert!(c.coefficients.get(m) >= series.get(m) - 1e-14);
        }
    }

    #[test]
    fn existence_for_zero_schedule() {
        for r in [1e-3, 1.0, 10.0] {
            let spec = MajorantSpec::logarithmic(r, zero_schedule()).unwrap();
            let rep = existence_check(&spec, 1.0).unwrap();
            assert!(rep.holds && rep.tau == 0.0 && rep.sigma == 0.0);
        }
    }

    #[test]
    fn quartic_existence_fails_for_large_coupling() {
        let sched = block(10, 1.0);
        let spec = MajorantSpec::quartic(1.0, sched.clone()).unwrap();
        let rep = existence_check(&spec, 1.0).unwrap();
        assert!(12.0 * rep.sigma * rep.sigma * rep.tau >= 1.0);
        assert!(!rep.holds);
        assert!(majorant_coefficients(&spec, 1.0, 2).is_err());
        let mut alpha = 1.0;
        while !existence_check(&MajorantSpec::quartic(alpha, sched.clone()).unwrap(), 1.0).unwrap().holds {
            alpha *= 0.5;
            assert!(alpha > 1e-12);
        }
    }

    #[test]
    fn split_positive_matrices_give_positive_gram() {
        let p = Matrix::from_rows(&[vec![1.0, 0.0], vec![0.0, 1.0]]).unwrap();
        let sched = ScaleSchedule::block_split(p.clone(), p, |_| 1.0, |_| 0.0, 1.0).unwrap();
        let spec = MajorantSpec::quartic(0.01, sched).unwrap();
        let (tau, sigma) = spec.clock(0.5).unwrap();
        assert!((sigma * sigma - 2.0).abs() < 1e-10);
        assert!((tau - 0.5).abs() < 1e-10);
    }
}
