use ferroflow::flow::{flow_integrate, trajectory_norms, uniform_grid, FlowOptions};
use ferroflow::grassmann::{Element, GeneratorSet};
use ferroflow::majorant::{existence_check, majorant_coefficients, rhs_coefficient_bounds, MajorantSpec};
use ferroflow::norm::norm_coefficients;
use ferroflow::psi4::{build_desk_instance, coupling_bound, Psi4Params};
use ferroflow::random::Sampler;

#[test]
fn desk_instance_is_dominated() {
    let p = Psi4Params::default();
    let alpha = 0.5 * coupling_bound(&p).unwrap();
    let inst = build_desk_instance(&p, alpha, 2.0).unwrap();
    let grid = uniform_grid(2.0, 11);
    for truncate in [false, true] {
        let opts = FlowOptions { truncate, ..FlowOptions::default() };
        let traj = flow_integrate(&inst.schedule, &inst.action, &grid, &opts).unwrap();
        let norms = trajectory_norms(&traj).unwrap();
        let spec = MajorantSpec::quartic(alpha, inst.schedule.clone()).unwrap();
        let mut worst = f64::INFINITY;
        for (j, &t) in grid.iter().enumerate().skip(1) {
            assert!(existence_check(&spec, t).unwrap().holds);
            let phi = majorant_coefficients(&spec, t, 4).unwrap();
            for m in 1..=4 {
                let margin = phi.coefficients.get(m) - norms[j].get(m);
                worst = worst.min(margin);
                assert!(margin >= -1e-8, "t = {t}, m = {m}: phi = {}, F = {}", phi.coefficients.get(m), norms[j].get(m));
            }
        }
        eprintln!("desk truncate={truncate}: worst margin {worst:e}");
    }
}

#[test]
fn synthetic_instances_are_dominated() {
    let mut s = Sampler::new(77);
    let gens = GeneratorSet::new(8).unwrap();
    let mut checked = 0;
    while checked < 5 {
        let f0: Element<f64> = s.real_even_action(&gens, 0.02, 2);
        let bare = norm_coefficients(&f0).unwrap();
        let sched = s.block_schedule(4, 0.05, 1.0);
        let spec = MajorantSpec::series(bare, sched.clone()).unwrap();
        if !existence_check(&spec, 1.0).unwrap().holds {
            continue;
        }
        checked += 1;
        let grid = uniform_grid(1.0, 11);
        let traj = flow_integrate(&sched, &f0, &grid, &FlowOptions::default()).unwrap();
        let norms = trajectory_norms(&traj).unwrap();
        let mut worst = f64::INFINITY;
        for (j, &t) in grid.iter().enumerate().skip(1) {
            let phi = majorant_coefficients(&spec, t, 4).unwrap();
            let rhs = rhs_coefficient_bounds(&traj, &sched, t).unwrap();
            for m in 1..=4 {
                let margin = phi.coefficients.get(m) - norms[j].get(m);
                worst = worst.min(margin);
                assert!(margin >= -1e-8, "t = {t}, m = {m}");
                assert!(rhs[m - 1] - norms[j].get(m) >= -1e-8);
            }
        }
        eprintln!("synthetic: worst margin {worst:e}, R = {}", spec.radius());
    }
}
