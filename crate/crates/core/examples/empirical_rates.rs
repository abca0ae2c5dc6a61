//! Mean W1 and W_gamma^gamma between i.i.d. samples and their law.

use kac::engine::InitialDatum;
use kac::experiments::{run_scenario, Scenario, ScenarioConfig};

fn main() -> kac::Result<()> {
    for scenario in [Scenario::EmpiricalW1Rate, Scenario::EmpiricalWgammaRate] {
        for f0 in [InitialDatum::Gaussian { mean: 0.0, variance: 1.0 }, InitialDatum::Rademacher] {
            let mut cfg = ScenarioConfig::defaults(scenario);
            cfg.f0 = f0.clone();
            let report = run_scenario(&cfg)?;
            let metric = if scenario == Scenario::EmpiricalW1Rate { "w1" } else { "wgamma_pow" };
            let fit = report.summary_for(&format!("{metric}_vs_n")).next().cloned().unwrap();
            println!(
                "{scenario} {f0:?}: slope {:.3} ± {:.3}",
                fit.slope.unwrap(),
                fit.slope_halfwidth.unwrap_or(f64::NAN)
            );
        }
    }
    Ok(())
}
