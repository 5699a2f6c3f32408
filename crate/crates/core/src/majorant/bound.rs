//! Coefficient-wise upper bound on `F_k(t)` obtained by integrating the flow
//! equation against Gaussian moment estimates.

use crate::error::{Error, Result};
use crate::flow::{trajectory_norms, Trajectory};
use crate::norm::NormSeries;
use crate::quad::simpson;
use crate::schedule::ScaleSchedule;

const REL_TOL: f64 = 1e-6;
const MAX_DOUBLINGS: u32 = 12;

fn binomial(n: usize, k: usize) -> f64 {
    if k > n {
        return 0.0;
    }
    let k = k.min(n - k);
    (0..k).fold(1.0, |acc, i| acc * (n - i) as f64 / (i + 1) as f64)
}

/// `Γ_{l,m}(ξ)` for target degree `k`:
/// `4lm Σ C(2l−1, k′) ξ^{2l−1−k′} C(2m−1, k″) ξ^{2m−1−k″}` over odd
/// `k′ + k″ = 2k`.
pub fn gamma(l: usize, m: usize, k: usize, xi: f64) -> f64 {
    let mut sum = 0.0;
    let mut kp = 1;
    while kp <= 2 * l - 1 && kp < 2 * k {
        let kpp = 2 * k - kp;
        if kpp <= 2 * m - 1 {
            sum += binomial(2 * l - 1, kp)
                * binomial(2 * m - 1, kpp)
                * xi.powi((2 * l - 1 - kp + 2 * m - 1 - kpp) as i32);
        }
        kp += 2;
    }
    4.0 * (l * m) as f64 * sum
}

fn interpolate(norms: &[NormSeries<f64>], grid: &[f64], i: usize, s: f64, m: usize) -> f64 {
    let w = (s - grid[i]) / (grid[i + 1] - grid[i]);
    (1.0 - w) * norms[i].get(m) + w * norms[i + 1].get(m)
}

/// Right-hand side of the bound for every `k = 1..=n` at time `t`.
pub fn rhs_coefficient_bounds(
    traj: &Trajectory<f64>,
    schedule: &ScaleSchedule<f64>,
    t: f64,
) -> Result<Vec<f64>> {
    let grid = &traj.grid;
    let last = *grid.last().expect("trajectory grid is nonempty");
    if !(t >= grid[0]) || t > last + 1e-12 * last.max(1.0) {
        return Err(Error::Argument(format!(
            "t = {t} is outside the trajectory grid [{}, {last}]",
            grid[0]
        )));
    }
    let norms = trajectory_norms(traj)?;
    let n = norms[0].len();
    let gram = |s: f64| schedule.gram().integrand(s);
    let sigma2_total = crate::norm::sigma_squared(schedule, 0.0, t)?;

    let mut out: Vec<f64> = (1..=n)
        .map(|k| {
            (k..=n)
                .map(|m| norms[0].get(m) * binomial(2 * m, 2 * k) * sigma2_total.powi((m - k) as i32))
                .sum()
        })
        .collect();
    if t == grid[0] {
        return Ok(out);
    }

    // intervals of the trajectory grid clipped to [grid[0], t]
    let intervals: Vec<(usize, f64, f64)> = (0..grid.len() - 1)
        .filter(|&i| grid[i] < t)
        .map(|i| (i, grid[i], grid[i + 1].min(t)))
        .collect();

    let evaluate = |panels: usize| -> Vec<f64> {
        let mut nodes = Vec::new();
        for &(i, a, b) in &intervals {
            let h = (b - a) / panels as f64;
            for j in 0..=panels {
                let w = if j == 0 || j == panels {
                    1.0
                } else if j % 2 == 1 {
                    4.0
                } else {
                    2.0
                };
                nodes.push((i, a + h * j as f64, w * h / 3.0));
            }
        }
        // σ²_{(s,t)} = G(t) − G(s), accumulated backwards from t
        let mut tail = vec![0.0; nodes.len()];
        for j in (0..nodes.len().saturating_sub(1)).rev() {
            let (a, b) = (nodes[j].1, nodes[j + 1].1);
            tail[j] = tail[j + 1] + if b > a { simpson(gram, a, b, 8) } else { 0.0 };
        }
        let mut acc = vec![0.0; n];
        for (j, &(i, s, w)) in nodes.iter().enumerate() {
            let rate = schedule.rate_norm(s);
            if rate == 0.0 {
                continue;
            }
            let f: Vec<f64> = (1..=n).map(|m| interpolate(&norms, grid, i, s, m)).collect();
            let xi = tail[j].max(0.0).sqrt();
            for k in 1..=n {
                let mut sum = 0.0;
                for l in 1..=n {
                    for m in 1..=n {
                        if l + m >= k + 1 && f[l - 1] != 0.0 && f[m - 1] != 0.0 {
                            sum += f[l - 1] * f[m - 1] * gamma(l, m, k, xi);
                        }
                    }
                }
                acc[k - 1] += 0.5 * w * rate * sum;
            }
        }
        acc
    };

    let mut panels = 2;
    let mut prev = evaluate(panels);
    for _ in 0..MAX_DOUBLINGS {
        panels *= 2;
        let next = evaluate(panels);
        let change = next
            .iter()
            .zip(&prev)
            .map(|(x, y)| (x - y).abs() / x.abs().max(f64::MIN_POSITIVE))
            .filter(|c| c.is_finite())
            .fold(0.0, f64::max);
        if change <= REL_TOL || next == prev {
            for (o, v) in out.iter_mut().zip(next) {
                *o += v;
            }
            return Ok(out);
        }
        prev = next;
    }
    Err(Error::Resolution(format!(
        "Simpson refinement of the bound integral did not settle to {REL_TOL:e} with {panels} panels per grid interval"
    )))
}

/// Right-hand side of the bound on `F_k(t)`.
pub fn rhs_coefficient_bound(
    traj: &Trajectory<f64>,
    schedule: &ScaleSchedule<f64>,
    k: usize,
    t: f64,
) -> Result<f64> {
    let all = rhs_coefficient_bounds(traj, schedule, t)?;
    if k == 0 || k > all.len() {
        return Err(Error::Argument(format!("degree k = {k} outside 1..={}", all.len())));
    }
    Ok(all[k - 1])
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::flow::{flow_integrate, uniform_grid, FlowOptions};
    use crate::grassmann::{Element, GeneratorSet};
    use crate::norm::norm_coefficients;
    use crate::random::Sampler;

    #[test]
    fn gamma_at_zero() {
        for k in 1..5 {
            for l in 1..5 {
                for m in 1..5 {
                    let expected = if l + m == k + 1 { 4.0 * (l * m) as f64 } else { 0.0 };
                    assert_eq!(gamma(l, m, k, 0.0), expected);
                }
            }
        }
    }

    #[test]
    fn gamma_matches_direct_polynomial_product() {
        // Γ collects the z^{2k} coefficient of 4lm · odd(σ+z)^{2l−1} · odd(σ+z)^{2m−1}
        let xi: f64 = 0.7;
        for (l, m, k) in [(1, 1, 1), (2, 1, 1), (2, 3, 2), (3, 3, 4), (2, 2, 3)] {
            let odd_part = |n: usize| -> Vec<f64> {
                (0..=n)
                    .map(|j| if j % 2 == 1 { binomial(n, j) * xi.powi((n - j) as i32) } else { 0.0 })
                    .collect()
            };
            let (a, b) = (odd_part(2 * l - 1), odd_part(2 * m - 1));
            let mut c = 0.0;
            for (i, x) in a.iter().enumerate() {
                if 2 * k >= i && 2 * k - i < b.len() {
                    c += x * b[2 * k - i];
                }
            }
            assert!((gamma(l, m, k, xi) - 4.0 * (l * m) as f64 * c).abs() < 1e-12);
        }
    }

    #[test]
    fn time_zero_returns_bare_norms() {
        let gens = GeneratorSet::new(6).unwrap();
        let mut s = Sampler::new(11);
        let f0: Element<f64> = s.real_even_action(&gens, 0.05, 2);
        let sched = s.block_schedule(3, 0.2, 1.0);
        let traj = flow_integrate(&sched, &f0, &uniform_grid(1.0, 11), &FlowOptions::default()).unwrap();
        let bare = norm_coefficients(&f0).unwrap();
        let rhs = rhs_coefficient_bounds(&traj, &sched, 0.0).unwrap();
        for k in 1..=3 {
            assert_eq!(rhs[k - 1], bare.get(k));
        }
    }

    #[test]
    fn bound_dominates_flow() {
        let gens = GeneratorSet::new(6).unwrap();
        let mut s = Sampler::new(12);
        for _ in 0..3 {
            let f0: Element<f64> = s.real_even_action(&gens, 0.05, 2);
            let sched = s.block_schedule(3, 0.2, 1.0);
            let traj = flow_integrate(&sched, &f0, &uniform_grid(1.0, 21), &FlowOptions::default()).unwrap();
            let norms = trajectory_norms(&traj).unwrap();
            for (j, &t) in traj.grid.iter().enumerate().step_by(4) {
                let rhs = rhs_coefficient_bounds(&traj, &sched, t).unwrap();
                for k in 1..=3 {
                    assert!(rhs[k - 1] - norms[j].get(k) >= -1e-8, "k = {k}, t = {t}");
                }
            }
        }
    }

    #[test]
    fn rejects_times_beyond_grid() {
        let gens = GeneratorSet::new(4).unwrap();
        let mut s = Sampler::new(13);
        let f0: Element<f64> = s.real_even_action(&gens, 0.05, 2);
        let sched = s.block_schedule(2, 0.2, 1.0);
        let traj = flow_integrate(&sched, &f0, &uniform_grid(0.5, 6), &FlowOptions::default()).unwrap();
        assert!(rhs_coefficient_bound(&traj, &sched, 1, 0.8).is_err());
        assert!(rhs_coefficient_bound(&traj, &sched, 3, 0.2).is_err());
    }
}
