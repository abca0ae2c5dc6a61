//! Fourth moment of the particle system against its exact trajectory.

use kac::experiments::{run_scenario, Scenario, ScenarioConfig};

fn main() -> kac::Result<()> {
    let mut cfg = ScenarioConfig::defaults(Scenario::MomentTrack);
    cfg.nu = Some(0.5);
    cfg.snapshot_times = vec![0.0, 0.25, 0.5, 1.0];
    let report = run_scenario(&cfg)?;
    let exact: Vec<_> = report.summary_for("m4_exact").collect();
    for row in report.summary_for("m4") {
        let target = exact.iter().find(|e| e.t == row.t).and_then(|e| e.mean).unwrap();
        let (m, se) = (row.mean.unwrap(), row.stderr.unwrap_or(0.0));
        println!("t={:<5} m4={m:.4} ± {se:.4}  exact {target:.4}", row.t.unwrap());
    }
    Ok(())
}
