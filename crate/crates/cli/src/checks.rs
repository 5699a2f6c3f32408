//! Property checks with independent oracles, shared by `verify` and the
//! acceptance suite. Each check is seeded and returns its worst metric.

use std::f64::consts::{E, PI};

use num_complex::Complex;

use ferroflow::flow::{effective_action_exact, flow_integrate, rg_map, trajectory_norms, uniform_grid, FlowOptions};
use ferroflow::gaussian::{
    covariance_split_check, gaussian_expectation, gaussian_moment, heat_kernel_convolve, pfaffian,
    Covariance,
};
use ferroflow::grassmann::{indices_of, Element, GeneratorSet};
use ferroflow::majorant::{
    existence_check, hopflax_solve, invert_characteristic_quartic, majorant_coefficients,
    rhs_coefficient_bounds, MajorantSpec, SampledFunction,
};
use ferroflow::norm::{gram_bound_check, norm_coefficients, sigma_squared};
use ferroflow::psi4::{
    build_desk_instance, cdot_norm, coupling_bound, sigma_psi4, sigma_psi4_quadrature, tau_tilde,
    Psi4Params,
};
use ferroflow::random::Sampler;
use ferroflow::{Error, Result};

use crate::instances::{quartic_action, synthetic_schedule};

/// Result of one property check.
#[derive(Debug, Clone, PartialEq)]
pub struct CheckOutcome {
    pub name: String,
    pub passed: bool,
    /// Worst observed value of the checked quantity.
    pub metric: f64,
    pub threshold: f64,
    pub detail: String,
    pub counterexample: Option<String>,
}

impl CheckOutcome {
    fn at_most(name: &str, metric: f64, threshold: f64, detail: String, counterexample: Option<String>) -> Self {
        let passed = metric <= threshold;
        Self {
            name: name.to_string(),
            passed,
            metric,
            threshold,
            detail,
            counterexample: if passed { None } else { counterexample },
        }
    }

    fn at_least(name: &str, metric: f64, threshold: f64, detail: String, counterexample: Option<String>) -> Self {
        let passed = metric >= threshold;
        Self {
            name: name.to_string(),
            passed,
            metric,
            threshold,
            detail,
            counterexample: if passed { None } else { counterexample },
        }
    }

    /// `PASS name  metric (threshold) detail`.
    pub fn line(&self) -> String {
        format!(
            "{} {:<22} metric {:.3e} (threshold {:.1e}) {}",
            if self.passed { "PASS" } else { "FAIL" },
            self.name,
            self.metric,
            self.threshold,
            self.detail
        )
    }
}

/// `E[f] = Pf(A) ∫ f e^{−½⟨Ψ, A⁻¹Ψ⟩} dψ_1 ⋯ dψ_2n` for invertible `A`.
pub fn berezin_expectation(cov: &Covariance<f64>, f: &Element<f64>) -> Result<Complex<f64>> {
    let a = cov.matrix();
    let inv = a
        .inverse()
        .ok_or_else(|| Error::Argument("density formula needs an invertible covariance".into()))?;
    let gens = f.generators();
    let dim = gens.count();
    let mut q = Element::zero(gens);
    for i in 0..dim {
        for j in i + 1..dim {
            q.set_coeff((1 << i) | (1 << j), -inv[(i, j)]);
        }
    }
    let measure: Vec<usize> = (1..=dim).collect();
    let top = f.wedge(&q.exp_of()?)?.berezin_integrate(&measure)?;
    Ok(pfaffian(a) * top.scalar_part())
}

/// `Pf(A)² = det A` on random antisymmetric matrices of even size up to `max_dim`.
pub fn pfaffian_identity(seed: u64, count: usize, max_dim: usize, corrupt: bool) -> CheckOutcome {
    let mut s = Sampler::new(seed);
    let (mut worst, mut example) = (0.0f64, None);
    for k in 0..count {
        let dim = 2 * (1 + k % (max_dim / 2));
        let a = s.antisymmetric::<f64>(dim, 1.0);
        let mut pf = pfaffian(&a);
        if corrupt {
            pf *= 2.0;
        }
        let det = a.det();
        let rel = (pf * pf - det).norm() / det.norm().max(f64::MIN_POSITIVE);
        if rel > worst {
            worst = rel;
            example = Some(format!("dim {dim}: Pf = {pf}, det = {det}"));
        }
    }
    CheckOutcome::at_most("pfaffian-identity", worst, 1e-9, format!("{count} matrices"), example)
}

/// Moments against the density formula for every subset at `2n = 6`.
pub fn moment_oracle(seed: u64, instances: usize) -> Result<CheckOutcome> {
    let mut s = Sampler::new(seed);
    let gens = GeneratorSet::new(6)?;
    let (mut worst, mut example) = (0.0f64, None);
    for _ in 0..instances {
        let cov: Covariance<f64> = s.complex_covariance(6, 1.0);
        for mask in 0..gens.basis_len() {
            let subset = indices_of(mask);
            let monomial = Element::basis(&gens, mask, Complex::new(1.0, 0.0))?;
            let dev = (gaussian_moment(&cov, &subset)? - berezin_expectation(&cov, &monomial)?).norm();
            if dev > worst {
                worst = dev;
                example = Some(format!("J = {subset:?}"));
            }
        }
    }
    Ok(CheckOutcome::at_most(
        "moment-oracle",
        worst,
        1e-10,
        format!("{instances} covariances x 64 subsets"),
        example,
    ))
}

/// Heat kernel scalar part against moments, and `e^{½Δ_{A+B}} = e^{½Δ_B} e^{½Δ_A}`.
pub fn heat_kernel_split(seed: u64, triples: usize, generators: usize) -> Result<CheckOutcome> {
    let mut s = Sampler::new(seed);
    let gens = GeneratorSet::new(generators)?;
    let (mut worst, mut example) = (0.0f64, None);
    for k in 0..triples {
        let a: Covariance<f64> = s.covariance(generators, 0.5);
        let b: Covariance<f64> = s.covariance(generators, 0.5);
        let f: Element<f64> = s.element(&gens, 1.0);
        let moment = (gaussian_expectation(&a, &f)? - heat_kernel_convolve(&a, &f)?.scalar_part()).norm();
        let split = covariance_split_check(&a, &b, &f)?;
        let dev = moment.max(split);
        if dev > worst {
            worst = dev;
            example = Some(format!("triple {k}: moment residual {moment:e}, split residual {split:e}"));
        }
    }
    Ok(CheckOutcome::at_most(
        "heat-kernel-split",
        worst,
        1e-10,
        format!("{triples} triples at 2n = {generators}"),
        example,
    ))
}

/// `T_{A+B} = T_B ∘ T_A` and parity of the image.
pub fn semigroup_parity(seed: u64, instances: usize, generators: usize) -> Result<CheckOutcome> {
    let mut s = Sampler::new(seed);
    let gens = GeneratorSet::new(generators)?;
    let (mut dev_worst, mut odd_worst, mut example) = (0.0f64, 0.0f64, None);
    for k in 0..instances {
        let a: Covariance<f64> = s.covariance(generators, 0.3);
        let b: Covariance<f64> = s.covariance(generators, 0.3);
        let f: Element<f64> = s.real_even_action(&gens, 0.05, 2);
        let joint = rg_map(&a.sum(&b)?, &f)?;
        let staged = rg_map(&b, &rg_map(&a, &f)?)?;
        let dev = joint.max_deviation(&staged)?;
        let odd = joint.odd_content().max(staged.odd_content());
        if dev > dev_worst || odd > odd_worst {
            example = Some(format!("instance {k}: deviation {dev:e}, odd content {odd:e}"));
        }
        dev_worst = dev_worst.max(dev);
        odd_worst = odd_worst.max(odd);
    }
    let mut out = CheckOutcome::at_most(
        "semigroup-parity",
        dev_worst,
        1e-9,
        format!("{instances} instances at 2n = {generators}, odd content {odd_worst:.1e}"),
        example.clone(),
    );
    if odd_worst > 1e-10 {
        out.passed = false;
        out.counterexample = example;
    }
    Ok(out)
}

/// Gram bound on every subset at `n = 4` for split covariances.
pub fn gram_bound(seed: u64, instances: usize) -> Result<CheckOutcome> {
    let mut s = Sampler::new(seed);
    let mut violations = 0usize;
    let mut example = None;
    for k in 0..instances {
        let cov: Covariance<f64> = s.split_covariance(4, 1.0);
        for mask in 1usize..(1 << 8) {
            let subset = indices_of(mask);
            let rep = gram_bound_check(&cov, &subset)?;
            if !rep.holds {
                violations += 1;
                example.get_or_insert(format!("instance {k}, J = {subset:?}: {} > {}", rep.lhs, rep.rhs));
            }
        }
    }
    Ok(CheckOutcome::at_most(
        "gram-bound",
        violations as f64,
        0.0,
        format!("{instances} instances x 255 subsets"),
        example,
    ))
}

/// Flow at the given steps against the exact map, and the observed order.
pub fn flow_vs_exact(seed: u64, alpha: f64, t: f64, steps: usize) -> Result<(CheckOutcome, CheckOutcome)> {
    let mut s = Sampler::new(seed);
    let gens = GeneratorSet::new(8)?;
    let f0 = quartic_action(&mut s, &gens, alpha)?;
    let sched = synthetic_schedule(&mut s, 4, 0.2, t);
    let grid = uniform_grid(t, 5);
    let exact: Vec<Element<f64>> = grid
        .iter()
        .map(|&x| effective_action_exact(&sched, &f0, x, true))
        .collect::<Result<_>>()?;
    let error_at = |n: usize| -> Result<f64> {
        let opts = FlowOptions {
            steps: n,
            certify: false,
            ..FlowOptions::default()
        };
        let traj = flow_integrate(&sched, &f0, &grid, &opts)?;
        let mut worst = 0.0f64;
        for (st, ex) in traj.states.iter().zip(&exact) {
            worst = worst.max(st.max_deviation(ex)?);
        }
        Ok(worst)
    };
    let dev = error_at(steps)?;
    let (coarse, fine) = (error_at(4)?, error_at(8)?);
    let order = (coarse / fine).log2();
    Ok((
        CheckOutcome::at_most(
            "flow-vs-exact",
            dev,
            1e-7,
            format!("{steps} steps, alpha = {alpha}, t = {t}"),
            Some(format!("seed {seed}")),
        ),
        CheckOutcome::at_least(
            "flow-order",
            order,
            3.7,
            format!("errors {coarse:.2e} -> {fine:.2e} at 4 -> 8 steps"),
            Some(format!("seed {seed}")),
        ),
    ))
}

/// Coefficient bound against flowed norms at `times` grid points.
pub fn coefficient_bound(seed: u64, instances: usize, times: usize) -> Result<CheckOutcome> {
    let mut s = Sampler::new(seed);
    let gens = GeneratorSet::new(8)?;
    let (mut worst, mut example) = (f64::INFINITY, None);
    for k in 0..instances {
        let f0: Element<f64> = s.real_even_action(&gens, 0.02, 2);
        let sched = synthetic_schedule(&mut s, 4, 0.1, 1.0);
        let grid = uniform_grid(1.0, times + 1);
        let traj = flow_integrate(&sched, &f0, &grid, &FlowOptions::default())?;
        let norms = trajectory_norms(&traj)?;
        for (j, &t) in grid.iter().enumerate().skip(1) {
            let rhs = rhs_coefficient_bounds(&traj, &sched, t)?;
            for m in 1..=4 {
                let margin = rhs[m - 1] - norms[j].get(m);
                if margin < worst {
                    worst = margin;
                    example = Some(format!("instance {k}, t = {t}, k = {m}: bound {} vs F {}", rhs[m - 1], norms[j].get(m)));
                }
            }
        }
    }
    Ok(CheckOutcome::at_least(
        "coefficient-bound",
        worst,
        -1e-8,
        format!("{instances} instances x {times} times"),
        example,
    ))
}

fn domination_margin(
    spec: &MajorantSpec,
    f0: &Element<f64>,
    grid: &[f64],
    label: &str,
    worst: &mut f64,
    example: &mut Option<String>,
) -> Result<()> {
    let traj = flow_integrate(spec.schedule(), f0, grid, &FlowOptions::default())?;
    let norms = trajectory_norms(&traj)?;
    let n = f0.generators().pairs();
    for (j, &t) in grid.iter().enumerate().skip(1) {
        let phi = majorant_coefficients(spec, t, n)?;
        for m in 1..=n {
            let margin = phi.coefficients.get(m) - norms[j].get(m);
            if margin < *worst {
                *worst = margin;
                *example = Some(format!(
                    "{label}, t = {t}, m = {m}: phi = {}, F = {}",
                    phi.coefficients.get(m),
                    norms[j].get(m)
                ));
            }
        }
    }
    Ok(())
}

/// `φ_m(t) ≥ F_m(t)` on a Ψ⁴ desk instance and on synthetic admissible instances.
pub fn majorant_domination(seed: u64, synthetic: usize, times: usize) -> Result<CheckOutcome> {
    let (mut worst, mut example) = (f64::INFINITY, None);
    let params = Psi4Params::default();
    let alpha = 0.5 * coupling_bound(&params)?;
    let inst = build_desk_instance(&params, alpha, 1.0)?;
    let grid = uniform_grid(1.0, times + 1);
    let desk = MajorantSpec::quartic(alpha, inst.schedule.clone())?;
    if !existence_check(&desk, 1.0)?.holds {
        return Err(Error::Existence("desk instance is not admissible".into()));
    }
    domination_margin(&desk, &inst.action, &grid, "desk", &mut worst, &mut example)?;

    let mut s = Sampler::new(seed);
    let gens = GeneratorSet::new(8)?;
    let mut done = 0;
    let mut attempts = 0;
    while done < synthetic {
        attempts += 1;
        if attempts > 100 * synthetic.max(1) {
            return Err(Error::Existence("could not draw admissible synthetic instances".into()));
        }
        let f0: Element<f64> = s.real_even_action(&gens, 0.02, 2);
        let sched = synthetic_schedule(&mut s, 4, 0.05, 1.0);
        let spec = MajorantSpec::series(norm_coefficients(&f0)?, sched)?;
        if !existence_check(&spec, 1.0)?.holds {
            continue;
        }
        domination_margin(&spec, &f0, &grid, &format!("synthetic {done}"), &mut worst, &mut example)?;
        done += 1;
    }
    Ok(CheckOutcome::at_least(
        "majorant-domination",
        worst,
        -1e-8,
        format!("desk + {synthetic} synthetic instances x {times} times"),
        example,
    ))
}

/// Sweeps `α` upward; a crossing may only be reported once the closed-form
/// window `1 − 12ασ²τ > 0`, `|z| < (2a/3)√(a/(12ατ))` has closed.
pub fn existence_boundary(seed: u64) -> Result<CheckOutcome> {
    let mut s = Sampler::new(seed);
    let sched = synthetic_schedule(&mut s, 2, 0.5, 1.0);
    let tau = sched.tau(1.0)?;
    let sigma = sigma_squared(&sched, 0.0, 1.0)?.sqrt();
    let zs = [0.05, 0.2, 0.5, 1.0, 2.0];
    let mut early = 0usize;
    let mut example = None;
    let mut closed_all = false;
    let mut alpha = 1e-4;
    while alpha < 1e4 {
        let a = 1.0 - 12.0 * alpha * sigma * sigma * tau;
        let mut all_closed = true;
        for &z in &zs {
            let certified = a > 0.0 && z < 2.0 * a / 3.0 * (a / (12.0 * alpha * tau)).sqrt();
            all_closed &= !certified;
            match invert_characteristic_quartic(alpha, sigma, tau, z) {
                Err(Error::CharacteristicCrossing { .. }) if certified => {
                    early += 1;
                    example.get_or_insert(format!("alpha = {alpha}, z = {z}"));
                }
                Ok(_) if !certified => {
                    early += 1;
                    example.get_or_insert(format!("inverse returned outside the window: alpha = {alpha}, z = {z}"));
                }
                Err(e) if !matches!(e, Error::CharacteristicCrossing { .. }) => return Err(e),
                _ => {}
            }
        }
        if all_closed {
            closed_all = true;
            break;
        }
        alpha *= 1.05;
    }
    let mut out = CheckOutcome::at_most(
        "existence-boundary",
        early as f64,
        0.0,
        format!("sweep up to alpha = {alpha:.3e}, sigma = {sigma:.3}, tau = {tau:.3}"),
        example,
    );
    if !closed_all {
        out.passed = false;
        out.counterexample = Some("window never closed within the sweep".into());
    }
    Ok(out)
}

/// `g1 ≤ g2 ⇒ ω1 ≤ ω2` on random pairs sampled on `points` nodes.
pub fn hopf_lax(seed: u64, pairs: usize, points: usize) -> Result<CheckOutcome> {
    let mut s = Sampler::new(seed);
    let (mut worst, mut example) = (f64::NEG_INFINITY, None);
    for k in 0..pairs {
        let c: Vec<f64> = (0..6).map(|_| s.symmetric_unit(1.0)).collect();
        let t = s.uniform(0.1, 2.0);
        let g1 = SampledFunction::uniform(-3.0, 3.0, points, |y| {
            c[0] * (y + c[1]).sin() + c[2] * (2.0 * y).cos() + c[3] * y - 0.3 * y * y + c[4] * (c[5] * y).sin()
        })?;
        let lifted: Vec<f64> = g1
            .values()
            .iter()
            .zip(g1.grid())
            .map(|(v, y)| v + s.uniform(0.0, 0.1) * (1.0 + (y * c[5]).cos()))
            .collect();
        let g2 = SampledFunction::new(g1.grid().to_vec(), lifted)?;
        for &z in g1.grid() {
            let diff = hopflax_solve(&g1, t, z)?.value - hopflax_solve(&g2, t, z)?.value;
            if diff > worst {
                worst = diff;
                example = Some(format!("pair {k}, t = {t}, z = {z}: omega1 - omega2 = {diff:e}"));
            }
        }
    }
    Ok(CheckOutcome::at_most(
        "hopf-lax-comparison",
        worst,
        1e-10,
        format!("{pairs} pairs on {points} nodes"),
        example,
    ))
}

/// Closed forms of the Ψ⁴ model: σ², the τ̃ bound, `‖Ċ_s‖ ≤ 2/m²`, coupling bound.
pub fn psi4_closed_forms() -> Result<CheckOutcome> {
    let mut params = Psi4Params::default();
    let mut sigma_dev = 0.0f64;
    for d in [3, 4, 5, 6] {
        params.d = d;
        params.sites = vec![vec![0.0; d]];
        for &(s, t) in &[(0.0, 0.5), (0.2, 1.7), (1.0, 4.0), (0.0, 8.0)] {
            let closed = sigma_psi4(&params, s, t)?;
            let quad = sigma_psi4_quadrature(&params, s, t)?;
            sigma_dev = sigma_dev.max((closed - quad).abs() / closed.max(1.0));
        }
    }
    let mut tau_violations = 0usize;
    let mut cdot_excess = f64::NEG_INFINITY;
    let mut example = None;
    for i in 0..20 {
        let ratio = 1.5 * (100.0f64 / 1.5).powf(i as f64 / 19.0);
        let p = Psi4Params::desk(4, 1.0, ratio, 4.0, 1)?;
        for j in 0..20 {
            let t = 10.0 * j as f64 / 19.0;
            let tt = tau_tilde(&p, t)?;
            if !tt.within_bound || tt.value > t + 1e-12 {
                tau_violations += 1;
                example.get_or_insert(format!("Lambda0/m = {ratio}, t = {t}: {} > {}", tt.value, tt.bound));
            }
            cdot_excess = cdot_excess.max(cdot_norm(&p, t) - 2.0);
        }
    }
    let bound = coupling_bound(&Psi4Params::desk(4, 1.0, E, 4.0, 1)?)?;
    let coupling_dev = (bound - 1.0 / (24.0 * PI * PI)).abs();
    let passed = sigma_dev <= 1e-10 && tau_violations == 0 && cdot_excess <= 0.0 && coupling_dev <= 1e-12;
    Ok(CheckOutcome {
        name: "psi4-closed-forms".into(),
        passed,
        metric: sigma_dev,
        threshold: 1e-10,
        detail: format!(
            "sigma dev {sigma_dev:.1e}, tau violations {tau_violations}, max cdot - 2/m^2 {cdot_excess:.2e}, coupling dev {coupling_dev:.1e}"
        ),
        counterexample: if passed { None } else { example.or(Some("see detail".into())) },
    })
}
