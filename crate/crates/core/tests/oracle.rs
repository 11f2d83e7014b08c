//! Solver and objective checks against an exhaustive enumeration oracle that
//! shares no code with the library's evaluators.

use vmplace::baselines::{ga_solve, pso_solve, GaParams, PsoParams};
use vmplace::experiments::snapshot_pareto;
use vmplace::instance::{generate_instance, read_instance, validate_placement, GeneratorConfig};
use vmplace::lamocs::{brute_force, for_each_assignment, solve, SolverParams};
use vmplace::objectives::{energy, evaluate, utilization, waste};
use vmplace::search::lamocs_budget;
use vmplace::{Placement, PlacementProblem};

const FIXTURE: &str = concat!(env!("CARGO_MANIFEST_DIR"), "/tests/fixtures/fix.inst");

fn fixture() -> PlacementProblem {
    read_instance(FIXTURE).unwrap()
}

/// Per-machine summation written out longhand.
struct Oracle {
    feasible: bool,
    energy: f64,
    waste: f64,
    utilization: f64,
}

fn oracle(p: &PlacementProblem, a: &[usize]) -> Oracle {
    let mut out = Oracle {
        feasible: true,
        energy: 0.0,
        waste: 0.0,
        utilization: 0.0,
    };
    for (j, pm) in p.pms.iter().enumerate() {
        let mut cpu = 0.0;
        let mut mem = 0.0;
        for (i, vm) in p.vms.iter().enumerate() {
            if a[i] == j {
                cpu += vm.cpu_demand;
                mem += vm.mem_demand;
            }
        }
        if cpu > p.cpu_threshold * pm.cpu_capacity || mem > pm.mem_capacity {
            out.feasible = false;
        }
        let u = cpu / pm.cpu_capacity;
        let m = mem / pm.mem_capacity;
        out.utilization += p.alpha * u + p.beta * m;
        if cpu > 0.0 {
            let watts = pm.p_idle + (pm.p_busy - pm.p_idle) * u;
            out.energy += cpu * watts;
            out.waste += ((p.cpu_threshold - u).max(0.0) + (1.0 - m).max(0.0)) / 2.0;
        }
    }
    out
}

/// Minimum oracle energy over all feasible assignments.
fn oracle_optimum(p: &PlacementProblem) -> f64 {
    let mut best = f64::INFINITY;
    for_each_assignment(p.n_vms(), p.n_pms(), |a| {
        let o = oracle(p, a);
        if o.feasible {
            best = best.min(o.energy);
        }
    });
    best
}

fn close(a: f64, b: f64) -> bool {
    (a - b).abs() <= 1e-9 * a.abs().max(b.abs()).max(1.0)
}

fn instance(seed: u64) -> PlacementProblem {
    generate_instance(3, 5, seed, &GeneratorConfig::default()).unwrap()
}

#[test]
fn fixture_file_is_the_seed_42_instance() {
    assert_eq!(fixture(), instance(42));
}

#[test]
fn fixture_has_a_feasible_assignment() {
    let p = fixture();
    let mut count = 0;
    for_each_assignment(5, 3, |a| count += usize::from(oracle(&p, a).feasible));
    assert!(count >= 1);
}

#[test]
fn evaluators_agree_with_oracle_on_every_assignment() {
    for seed in [42, 1, 2, 3] {
        let p = instance(seed);
        for_each_assignment(5, 3, |a| {
            let x = Placement(a.to_vec());
            let o = oracle(&p, a);
            let report = validate_placement(&p, &x).unwrap();
            assert_eq!(report.feasible, o.feasible, "{a:?}");
            assert!(close(energy(&p, &x).unwrap(), o.energy));
            assert!(close(waste(&p, &x).unwrap(), o.waste));
            assert!(close(utilization(&p, &x).unwrap(), o.utilization));
            let v = evaluate(&p, &x).unwrap();
            assert!(close(v.neg_utilization, -o.utilization));
        });
    }
}

#[test]
fn brute_force_matches_oracle() {
    for seed in 0..10 {
        let p = instance(seed);
        let b = brute_force(&p).unwrap();
        assert!(
            close(b.objectives.energy, oracle_optimum(&p)),
            "seed {seed}"
        );
        assert!(validate_placement(&p, &b.placement).unwrap().feasible);
    }
}

#[test]
fn lamocs_reaches_the_optimum_on_the_fixture() {
    let p = fixture();
    let opt = oracle_optimum(&p);
    let mut hits = 0;
    for seed in 0..20 {
        let r = solve(
            &p,
            &SolverParams {
                seed,
                ..Default::default()
            },
        )
        .unwrap();
        assert!(
            r.best.objectives.energy >= opt - 1e-9 * opt,
            "seed {seed} beat the oracle"
        );
        assert!(validate_placement(&p, &r.best.placement).unwrap().feasible);
        hits += usize::from(close(r.best.objectives.energy, opt));
    }
    assert!(hits >= 18, "{hits}/20");
}

#[test]
fn ga_is_near_the_optimum_on_the_fixture() {
    let p = fixture();
    let opt = oracle_optimum(&p);
    let mut near = 0;
    for seed in 0..20 {
        let r = ga_solve(
            &p,
            &GaParams {
                seed,
                ..Default::default()
            },
        )
        .unwrap();
        let e = r.best.objectives.energy;
        assert!(e >= opt - 1e-9 * opt);
        near += usize::from(e <= 1.1 * opt);
    }
    assert!(near >= 15, "{near}/20");
}

#[test]
fn pso_never_beats_the_oracle() {
    let p = fixture();
    let opt = oracle_optimum(&p);
    for seed in 0..5 {
        let r = pso_solve(
            &p,
            &PsoParams {
                seed,
                ..Default::default()
            },
        )
        .unwrap();
        assert!(r.best.objectives.energy >= opt - 1e-9 * opt);
        assert!(r.best.feasible);
    }
}

#[test]
fn evaluation_budgets_match_within_five_percent() {
    let p = generate_instance(8, 20, 5, &GeneratorConfig::default()).unwrap();
    let (pop, cycles) = (30, 20);
    let l = solve(
        &p,
        &SolverParams {
            population_size: pop,
            max_cycles: cycles,
            ..Default::default()
        },
    )
    .unwrap();
    let g = ga_solve(
        &p,
        &GaParams {
            population_size: pop,
            max_cycles: cycles,
            ..Default::default()
        },
    )
    .unwrap();
    let s = pso_solve(
        &p,
        &PsoParams {
            population_size: pop,
            max_cycles: cycles,
            ..Default::default()
        },
    )
    .unwrap();
    assert_eq!(l.evaluations, lamocs_budget(pop, cycles, 0.25));
    for other in [g.evaluations, s.evaluations] {
        let rel = (other as f64 - l.evaluations as f64).abs() / l.evaluations as f64;
        assert!(rel <= 0.05, "{other} vs {}", l.evaluations);
    }
}

#[test]
fn final_front_contains_the_optimum_and_improves() {
    let p = fixture();
    let b = brute_force(&p).unwrap();
    let (snaps, result) = snapshot_pareto(&p, &SolverParams::default(), &[100, 500]).unwrap();
    assert_eq!(snaps.len(), 2);
    let min = |k: usize| {
        snaps[k]
            .points
            .iter()
            .map(|v| v.energy)
            .fold(f64::INFINITY, f64::min)
    };
    assert!(min(1) <= min(0));
    assert!(result
        .pareto_front
        .iter()
        .any(|s| s.objectives == b.objectives));
    assert!(snaps[1].points.contains(&b.objectives));
}

#[test]
fn automata_rewarded_toward_the_optimum_sample_it_more_often() {
    use vmplace::lamocs::{init_ensemble, sample_placement};
    let p = fixture();
    let target = brute_force(&p).unwrap().placement;
    let mut ens = init_ensemble(5, 3, 0.3, 0.5).unwrap();
    let mut rng = vmplace::seed::rng(11);
    let mut freq = Vec::new();
    for _ in 0..4 {
        let hits = (0..500)
            .filter(|_| sample_placement(&ens, &mut rng) == target)
            .count();
        freq.push(hits);
        for _ in 0..2 {
            ens.reward_all(&target, None).unwrap();
        }
    }
    assert!(freq.windows(2).all(|w| w[1] > w[0]), "{freq:?}");
}
