//! Seeded synthetic instances shared by the subcommands.

use num_complex::Complex;

use ferroflow::grassmann::{Element, GeneratorSet};
use ferroflow::norm::norm_coefficients;
use ferroflow::random::Sampler;
use ferroflow::{Result, ScaleSchedule};

/// Random real quartic action rescaled so that its norm series is `F_2 = α`.
pub fn quartic_action(s: &mut Sampler, gens: &GeneratorSet, alpha: f64) -> Result<Element<f64>> {
    let coeffs: Vec<Complex<f64>> = (0..gens.basis_len())
        .map(|mask: usize| {
            let x = s.symmetric_unit(1.0);
            if mask.count_ones() == 4 {
                Complex::new(x, 0.0)
            } else {
                Complex::new(0.0, 0.0)
            }
        })
        .collect();
    let f = Element::from_coeffs(gens, coeffs)?;
    if gens.count() < 4 || alpha == 0.0 {
        return Ok(Element::zero(gens));
    }
    let f2 = norm_coefficients(&f)?.get(2);
    Ok(f.scale(Complex::new(alpha / f2, 0.0)))
}

/// Block schedule `Ċ^± = e^{−τ} P^±` with random positive `P^±`.
pub fn synthetic_schedule(s: &mut Sampler, pairs: usize, scale: f64, horizon: f64) -> ScaleSchedule {
    s.block_schedule(pairs, scale, horizon)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn quartic_action_has_requested_norm() {
        let g = GeneratorSet::new(8).unwrap();
        let f = quartic_action(&mut Sampler::new(3), &g, 0.04).unwrap();
        let n = norm_coefficients(&f).unwrap();
        assert!((n.get(2) - 0.04).abs() < 1e-15);
        assert_eq!(n.get(1), 0.0);
        assert!(quartic_action(&mut Sampler::new(3), &g, 0.0).unwrap().is_zero());
    }
}
