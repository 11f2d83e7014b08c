use std::collections::BTreeMap;
use std::fs;

use vmplace::experiments::{
    emit_csv, emit_plot_data, emit_time_plot, emit_timings, read_csv, run_popsize_sweep,
    run_vm_sweep, Axis, ScenarioConfig, SolverKind,
};
use vmplace::instance::validate_placement;

fn small() -> ScenarioConfig {
    let mut c = ScenarioConfig {
        vm_counts: vec![10, 20],
        repetitions: 3,
        base_seed: 9,
        ..Default::default()
    };
    c.lamocs.population_size = 12;
    c.lamocs.max_cycles = 10;
    c.ga.population_size = 12;
    c.ga.max_cycles = 10;
    c.pso.population_size = 12;
    c.pso.max_cycles = 10;
    c
}

#[test]
fn csv_has_one_line_per_record_plus_header() {
    let records = run_vm_sweep(&small(), 1).unwrap();
    assert_eq!(records.len(), 2 * 3 * 3);
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("records.csv");
    emit_csv(&records, &path).unwrap();
    let text = fs::read_to_string(&path).unwrap();
    assert_eq!(text.lines().count(), records.len() + 1);
    assert!(
        text.starts_with("solver,vm_count,pm_count,population_size,repetition,seed,instance_hash,")
    );
    assert!(!text.contains('\r'));
    assert!(records.iter().all(|r| r.feasible));
}

#[test]
fn identical_configs_give_byte_identical_outputs() {
    let c = small();
    let dirs = [tempfile::tempdir().unwrap(), tempfile::tempdir().unwrap()];
    for (dir, jobs) in dirs.iter().zip([1, 4]) {
        let records = run_vm_sweep(&c, jobs).unwrap();
        emit_csv(&records, dir.path().join("records.csv")).unwrap();
        emit_plot_data(&records, dir.path(), Axis::VmCount).unwrap();
    }
    let names: Vec<_> = fs::read_dir(dirs[0].path())
        .unwrap()
        .map(|e| e.unwrap().file_name())
        .collect();
    assert_eq!(names.len(), 7);
    for name in names {
        let a = fs::read(dirs[0].path().join(&name)).unwrap();
        let b = fs::read(dirs[1].path().join(&name)).unwrap();
        assert_eq!(a, b, "{name:?}");
    }
}

#[test]
fn plot_means_match_recomputation_from_csv() {
    let records = run_vm_sweep(&small(), 2).unwrap();
    let dir = tempfile::tempdir().unwrap();
    emit_csv(&records, dir.path().join("records.csv")).unwrap();
    emit_plot_data(&records, dir.path(), Axis::VmCount).unwrap();

    let back = read_csv(dir.path().join("records.csv")).unwrap();
    let mut sums: BTreeMap<(usize, SolverKind), (f64, usize)> = BTreeMap::new();
    for r in &back {
        let e = sums.entry((r.vm_count, r.solver)).or_default();
        e.0 += r.metrics.energy;
        e.1 += 1;
    }
    let plot = fs::read_to_string(dir.path().join("energy_vs_vm_count.dat")).unwrap();
    let mut lines = plot.lines();
    assert_eq!(
        lines.next().unwrap(),
        "# vm_count lamocs_mean lamocs_std ga_mean ga_std pso_mean pso_std"
    );
    let mut rows = 0;
    for line in lines {
        let cols: Vec<f64> = line
            .split_whitespace()
            .map(|s| s.parse().unwrap())
            .collect();
        let x = cols[0] as usize;
        for (k, s) in SolverKind::ALL.iter().enumerate() {
            let (sum, count) = sums[&(x, *s)];
            let mean = sum / count as f64;
            assert!((cols[1 + 2 * k] - mean).abs() <= 1e-9 * mean.abs());
        }
        rows += 1;
    }
    assert_eq!(rows, 2);
}

#[test]
fn placements_stay_feasible_and_instances_are_shared() {
    let c = small();
    let records = run_vm_sweep(&c, 2).unwrap();
    for vm in &c.vm_counts {
        for rep in 0..c.repetitions {
            let p = c.instance(*vm, rep).unwrap();
            let hash = vmplace::instance::content_hash(&p);
            let group: Vec<_> = records
                .iter()
                .filter(|r| r.vm_count == *vm && r.repetition == rep)
                .collect();
            assert_eq!(group.len(), 3);
            assert!(group.iter().all(|r| r.instance_hash == hash));
            let ffd = vmplace::instance::first_fit_decreasing(&p).unwrap();
            assert!(validate_placement(&p, &ffd).unwrap().feasible);
        }
    }
}

#[test]
fn popsize_sweep_scales_evaluations() {
    let mut c = small();
    c.repetitions = 1;
    let records = run_popsize_sweep(&c, &[10, 20], 20, 2).unwrap();
    assert_eq!(records.len(), 3 * 2);
    for s in SolverKind::ALL {
        let evals: Vec<u64> = records
            .iter()
            .filter(|r| r.solver == s)
            .map(|r| r.evaluations)
            .collect();
        let ratio = evals[1] as f64 / evals[0] as f64;
        assert!((ratio - 2.0).abs() <= 0.2, "{s}: {evals:?}");
    }
    let hashes: Vec<_> = records.iter().map(|r| &r.instance_hash).collect();
    assert!(hashes.iter().all(|h| *h == hashes[0]));

    let dir = tempfile::tempdir().unwrap();
    emit_timings(&records, dir.path().join("timings.csv")).unwrap();
    emit_time_plot(&records, dir.path(), Axis::PopulationSize).unwrap();
    let t = fs::read_to_string(dir.path().join("processing_time_vs_population_size.dat")).unwrap();
    assert_eq!(t.lines().count(), 3);
}

#[test]
fn single_population_size_is_one_column() {
    let mut c = small();
    c.repetitions = 1;
    let records = run_popsize_sweep(&c, &[12], 10, 1).unwrap();
    assert_eq!(records.len(), 3);
    assert!(run_popsize_sweep(&c, &[], 10, 1).is_err());
}
