//! Diffusion against truncation at equal compute, both measured against a
//! fine reference ensemble.

use kac::experiments::{run_scenario, Scenario, ScenarioConfig};

fn main() -> kac::Result<()> {
    let mut cfg = ScenarioConfig::defaults(Scenario::SchemeCompare);
    cfg.nu = Some(1.5);
    cfg.n = 5_000;
    cfg.n_ref = 200_000;
    cfg.replicas = 8;
    let report = run_scenario(&cfg)?;
    for metric in ["w2_ref_diffusion", "w2_ref_truncation", "events_diffusion", "events_truncation"] {
        for row in report.summary_for(metric) {
            println!(
                "{metric:<20} eps={:<5} mean={:.6} stderr={:.6}",
                row.eps.unwrap_or(f64::NAN),
                row.mean.unwrap_or(f64::NAN),
                row.stderr.unwrap_or(f64::NAN)
            );
        }
    }
    println!("reference {}", report.notes["reference_hash"]);
    Ok(())
}
