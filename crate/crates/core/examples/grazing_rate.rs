//! Grazing-collision convergence toward the Fokker–Planck limit law, at a
//! reduced size. Pass `--full` for the default configuration.

use kac::experiments::{run_scenario, Scenario, ScenarioConfig};
use kac::io::summary_csv;

fn main() -> kac::Result<()> {
    let mut cfg = ScenarioConfig::defaults(Scenario::GrazingRate);
    if !std::env::args().any(|a| a == "--full") {
        cfg.n = 2_000;
        cfg.replicas = 5;
        cfg.t_final = 0.5;
        cfg.snapshot_times = vec![0.5];
    }
    let report = run_scenario(&cfg)?;
    print!("{}", summary_csv(&report.summary));
    Ok(())
}
