//! Subcommand bodies. Each returns its output as a string so that runs can
//! be compared byte for byte.

use std::fmt::Write;

use ferroflow::flow::{flow_integrate, trajectory_csv, trajectory_norms, uniform_grid, FlowOptions};
use ferroflow::grassmann::GeneratorSet;
use ferroflow::majorant::{existence_check, majorant_coefficients, ExistenceReport, MajorantSpec};
use ferroflow::psi4::{build_desk_instance, coupling_bound, instance_summary, Psi4Params};
use ferroflow::random::Sampler;
use ferroflow::{Error, FlowTrajectory, GrassmannElement, ScaleSchedule};

use crate::checks::{self, CheckOutcome};
use crate::config::RunConfig;
use crate::error::CliError;
use crate::instances::{quartic_action, synthetic_schedule};

/// Default quartic coupling of the synthetic instances.
pub const DEFAULT_ALPHA: f64 = 0.05;

fn flow_options(cfg: &RunConfig) -> FlowOptions {
    FlowOptions {
        steps: cfg.steps,
        truncate: cfg.truncate,
        certify: true,
        tolerance: cfg.tolerance,
    }
}

/// Seeded quartic action and block schedule on `cfg.generators` generators.
fn synthetic_instance(cfg: &RunConfig) -> Result<(GrassmannElement, ScaleSchedule, f64), CliError> {
    let gens = GeneratorSet::new(cfg.generators)?;
    let alpha = cfg.alpha.unwrap_or(DEFAULT_ALPHA);
    let mut s = Sampler::new(cfg.seed);
    let f0 = quartic_action(&mut s, &gens, alpha)?;
    let sched = synthetic_schedule(&mut s, gens.pairs(), cfg.schedule_scale, cfg.t_max);
    Ok((f0, sched, alpha))
}

fn run_flow(cfg: &RunConfig, sched: &ScaleSchedule, f0: &GrassmannElement) -> Result<FlowTrajectory, CliError> {
    let grid = uniform_grid(cfg.t_max, cfg.grid_points);
    Ok(flow_integrate(sched, f0, &grid, &flow_options(cfg))?)
}

/// CSV `t,m,F_m` of the flowed synthetic instance.
pub fn cmd_flow(cfg: &RunConfig) -> Result<String, CliError> {
    let (f0, sched, _) = synthetic_instance(cfg)?;
    let traj = run_flow(cfg, &sched, &f0)?;
    Ok(trajectory_csv(&traj)?)
}

/// Output of the majorant command.
#[derive(Debug, Clone, PartialEq)]
pub struct MajorantRun {
    pub report: ExistenceReport,
    pub csv: String,
    pub min_margin: f64,
}

/// CSV `t,m,F_m,phi_m,margin` for the quartic majorant of the synthetic
/// instance; inadmissible instances stop after the existence report.
pub fn cmd_majorant(cfg: &RunConfig) -> Result<MajorantRun, CliError> {
    let (f0, sched, alpha) = synthetic_instance(cfg)?;
    let spec = MajorantSpec::quartic(alpha, sched.clone())?;
    let report = existence_check(&spec, cfg.t_max)?;
    if !report.holds {
        return Err(CliError::Inadmissible(report.to_string()));
    }
    let traj = run_flow(cfg, &sched, &f0)?;
    let norms = trajectory_norms(&traj)?;
    let mut csv = String::from("t,m,F_m,phi_m,margin\n");
    let mut min_margin = f64::INFINITY;
    for (t, series) in traj.grid.iter().zip(&norms) {
        let phi = majorant_coefficients(&spec, *t, series.len())?;
        for m in 1..=series.len() {
            let (f, p) = (series.get(m), phi.coefficients.get(m));
            min_margin = min_margin.min(p - f);
            writeln!(csv, "{t:.11e},{m},{f:.11e},{p:.11e},{:.11e}", p - f).expect("writing to a String");
        }
    }
    Ok(MajorantRun {
        report,
        csv,
        min_margin,
    })
}

fn psi4_params(cfg: &RunConfig) -> Result<Psi4Params, CliError> {
    Ok(Psi4Params::desk(cfg.dimension, cfg.mass, cfg.lambda0, cfg.box_len, cfg.sites)?)
}

/// Instance summary CSV of the Ψ⁴ model with the desk pipeline results as
/// `#` header lines.
pub fn cmd_psi4(cfg: &RunConfig) -> Result<String, CliError> {
    let params = psi4_params(cfg)?;
    let mut out = String::new();
    let bound = match coupling_bound(&params) {
        Ok(b) => {
            writeln!(out, "# coupling_bound = {b:.11e}").expect("writing to a String");
            Some(b)
        }
        Err(Error::UnsupportedDimension(d)) => {
            writeln!(out, "# coupling_bound = unavailable for d = {d}").expect("writing to a String");
            None
        }
        Err(e) => return Err(e.into()),
    };
    let alpha = match (cfg.alpha, bound) {
        (Some(a), _) => a,
        (None, Some(b)) => 0.5 * b,
        (None, None) => {
            return Err(CliError::Config(format!(
                "alpha must be given explicitly for d = {}",
                params.d
            )))
        }
    };
    writeln!(out, "# alpha = {alpha:.11e}").expect("writing to a String");
    if bound.is_some_and(|b| alpha >= b) {
        writeln!(out, "# warning: alpha is not below the coupling bound").expect("writing to a String");
    }
    let inst = build_desk_instance(&params, alpha, cfg.t_max)?;
    let spec = MajorantSpec::quartic(alpha, inst.schedule.clone())?;
    let report = existence_check(&spec, cfg.t_max)?;
    let certificate = 1.0 - 12.0 * alpha * report.sigma * report.sigma * report.tau;
    writeln!(out, "# instance_existence = {certificate:.11e}").expect("writing to a String");
    if !report.holds {
        return Err(CliError::Inadmissible(format!("{out}{report}")));
    }
    let traj = run_flow(cfg, &inst.schedule, &inst.action)?;
    let norms = trajectory_norms(&traj)?;
    let mut min_margin = f64::INFINITY;
    for (t, series) in traj.grid.iter().zip(&norms).skip(1) {
        let phi = majorant_coefficients(&spec, *t, series.len())?;
        for m in 1..=series.len() {
            min_margin = min_margin.min(phi.coefficients.get(m) - series.get(m));
        }
    }
    writeln!(out, "# truncated = {}", cfg.truncate).expect("writing to a String");
    writeln!(out, "# min_majorant_margin = {min_margin:.11e}").expect("writing to a String");
    out.push_str("s,Lambda_s,cdot_norm,sigma2,tau_tilde,tau_tilde_bound\n");
    for row in instance_summary(&params, &traj.grid)? {
        let cells: Vec<String> = row.iter().map(|x| format!("{x:.11e}")).collect();
        writeln!(out, "{}", cells.join(",")).expect("writing to a String");
    }
    Ok(out)
}

/// Outcome of the verification battery.
#[derive(Debug, Clone, PartialEq)]
pub struct VerifyReport {
    pub checks: Vec<CheckOutcome>,
}

impl VerifyReport {
    pub fn passed(&self) -> bool {
        self.checks.iter().all(|c| c.passed)
    }

    pub fn render(&self) -> String {
        let mut out = String::new();
        for c in &self.checks {
            writeln!(out, "{}", c.line()).expect("writing to a String");
        }
        if let Some(bad) = self.checks.iter().find(|c| !c.passed) {
            writeln!(
                out,
                "first counterexample ({}): {}",
                bad.name,
                bad.counterexample.as_deref().unwrap_or("none recorded")
            )
            .expect("writing to a String");
        }
        out
    }
}

/// Runs the invariant battery at reduced sizes with the configured seed.
pub fn cmd_verify(cfg: &RunConfig, corrupt_pfaffian: bool) -> Result<VerifyReport, CliError> {
    GeneratorSet::new(cfg.generators)?;
    let seed = cfg.seed;
    let gens = cfg.generators;
    let (flow, order) = checks::flow_vs_exact(seed, DEFAULT_ALPHA, 1.0, cfg.steps)?;
    let checks = vec![
        checks::pfaffian_identity(seed, 50, 12, corrupt_pfaffian),
        checks::moment_oracle(seed, 3)?,
        checks::heat_kernel_split(seed, 5, gens)?,
        checks::semigroup_parity(seed, 5, gens)?,
        checks::gram_bound(seed, 5)?,
        flow,
        order,
        checks::coefficient_bound(seed, 2, 5)?,
        checks::majorant_domination(seed, 1, 5)?,
        checks::existence_boundary(seed)?,
        checks::hopf_lax(seed, 5, 201)?,
        checks::psi4_closed_forms()?,
    ];
    Ok(VerifyReport { checks })
}
