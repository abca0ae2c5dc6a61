//! Rates in the truncation parameter and in the particle number, with
//! sampling floors removed.

use kac::experiments::{run_scenario, Scenario, ScenarioConfig};

fn main() -> kac::Result<()> {
    let mut eps = ScenarioConfig::defaults(Scenario::EpsRate);
    eps.nu = Some(0.5);
    eps.n = 20_000;
    eps.n_ref = 200_000;
    let report = run_scenario(&eps)?;
    for row in report.summary_for("w2_corrected") {
        println!("eps={:<5} corrected W2 {:.5}", row.eps.unwrap(), row.mean.unwrap());
    }
    if let Some(row) = report.summary_for("w2_corrected_max_vs_eps").next() {
        println!("slope in eps: {:?} ± {:?}", row.slope, row.slope_halfwidth);
    }

    let mut n = ScenarioConfig::defaults(Scenario::NRate);
    n.nu = Some(0.5);
    n.n_list = vec![500, 2_000, 8_000];
    n.n_ref = 200_000;
    let report = run_scenario(&n)?;
    for row in report.summary_for("w2sq_ref_max") {
        println!("n={:<6} max squared W2 to reference {:.3e}", row.n.unwrap(), row.mean.unwrap());
    }
    if let Some(row) = report.summary_for("w2sq_ref_max_vs_n").next() {
        println!("slope in n: {:?} ± {:?}", row.slope, row.slope_halfwidth);
    }
    Ok(())
}
