use kac::experiments::{run_scenario, Scenario, ScenarioConfig};
use kac::io::{records_csv, summary_csv, write_report};

fn small(scenario: Scenario) -> ScenarioConfig {
    let mut cfg = ScenarioConfig::defaults(scenario);
    if cfg.needs_nu() {
        cfg.nu = Some(1.2);
    }
    cfg.base_seed = 4242;
    cfg.n = 300;
    cfg.n_ref = 2_000;
    cfg.ref_replicas = 4;
    cfg.replicas = 5;
    cfg.floor_samples = 2;
    cfg.n_list = vec![50, 200];
    cfg.eps_list = cfg.eps_list.iter().map(|e| e.max(0.2)).collect();
    cfg.eps_ref = 0.1;
    cfg.t_final = cfg.t_final.min(0.3);
    cfg.snapshot_times = vec![cfg.t_final / 2.0, cfg.t_final];
    cfg.emit_histograms = true;
    cfg.bins = 8;
    cfg
}

fn run_with_threads(cfg: &ScenarioConfig, threads: usize) -> (String, String) {
    let pool = rayon::ThreadPoolBuilder::new().num_threads(threads).build().unwrap();
    let report = pool.install(|| run_scenario(cfg)).unwrap();
    (records_csv(&report.records), summary_csv(&report.summary))
}

#[test]
fn every_scenario_is_independent_of_thread_count() {
    for scenario in Scenario::ALL {
        let cfg = small(scenario);
        let one = run_with_threads(&cfg, 1);
        let four = run_with_threads(&cfg, 4);
        assert!(one.0.lines().count() > 1, "{scenario} produced no records");
        assert_eq!(one, four, "{scenario} differs between 1 and 4 threads");
    }
}

#[test]
fn rerun_writes_byte_identical_records() {
    let cfg = small(Scenario::SchemeCompare);
    let a = tempfile::tempdir().unwrap();
    let b = tempfile::tempdir().unwrap();
    write_report(&run_scenario(&cfg).unwrap(), a.path()).unwrap();
    write_report(&run_scenario(&cfg).unwrap(), b.path()).unwrap();
    for file in ["records.csv", "summary.csv", "hist_reference.csv", "hist_diffusion_eps0.2.csv"] {
        let x = std::fs::read(a.path().join(file)).unwrap();
        let y = std::fs::read(b.path().join(file)).unwrap();
        assert_eq!(x, y, "{file}");
    }
}

#[test]
fn different_seeds_give_different_records() {
    let cfg = small(Scenario::Simulate);
    let mut other = cfg.clone();
    other.base_seed = 99_999;
    assert_ne!(run_with_threads(&cfg, 1).0, run_with_threads(&other, 1).0);
}
