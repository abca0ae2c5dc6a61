//! Squared W2 between a scaled compensated Poisson variable and its
//! Gaussian limit, as the jump size h shrinks.

use kac::experiments::{run_scenario, Scenario, ScenarioConfig};

fn main() -> kac::Result<()> {
    let cfg = ScenarioConfig::defaults(Scenario::PoissonGaussianDemo);
    let report = run_scenario(&cfg)?;
    let predictor: Vec<_> = report.summary_for("bound_predictor").collect();
    for (row, bound) in report.summary_for("w2sq_corrected").zip(predictor) {
        println!(
            "h={:<6} W2^2 {:.3e}  h^2 {:.3e}",
            row.eps.unwrap(),
            row.mean.unwrap(),
            bound.mean.unwrap()
        );
    }
    let slope = report.summary_for("w2sq_corrected_vs_h").next().and_then(|r| r.slope);
    println!("slope in h: {slope:?}");
    Ok(())
}
