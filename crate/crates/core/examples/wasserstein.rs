//! Wasserstein distances between samples and against analytic laws.

use kac::engine::InitialDatum;
use kac::limit_laws::OULimitLaw;
use kac::metrics::{wasserstein_empirical, wasserstein_vs_quantile};
use kac::{EmpiricalMeasure, QuantileFunction};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, StandardNormal};

fn main() -> kac::Result<()> {
    let x = EmpiricalMeasure::from_slice(&[0.0, 1.0, 3.0])?;
    let y = EmpiricalMeasure::from_slice(&[5.0, -1.0, 2.0])?;
    for p in [1.0, 1.5, 2.0] {
        println!("W{p}(x, y) = {:.6}", wasserstein_empirical(&x, &y, p)?);
    }

    let mut rng = ChaCha8Rng::seed_from_u64(1);
    let normal = QuantileFunction::gaussian(0.0, 1.0)?;
    for n in [100, 1_000, 10_000, 100_000] {
        let sample: Vec<f64> = (0..n).map(|_| StandardNormal.sample(&mut rng)).collect();
        let w = wasserstein_vs_quantile(&EmpiricalMeasure::new(sample)?, &normal, 2.0, 1e-8)?;
        println!("n = {n:>6}: W2(sample, N(0,1)) = {w:.5}");
    }

    // the limit law from Rademacher data is a two-component mixture
    let law = OULimitLaw::new(InitialDatum::Rademacher, 0.5)?;
    let atoms = QuantileFunction::discrete(&[-1.0, 1.0], &[0.5, 0.5])?;
    let q = law.quantile_function()?;
    let sample: Vec<f64> = (0..10_000).map(|_| law.sample(&mut rng)).collect();
    let m = EmpiricalMeasure::new(sample)?;
    println!("W2(limit law sample, limit law) = {:.5}", wasserstein_vs_quantile(&m, &q, 2.0, 1e-8)?);
    println!("W2(limit law sample, f0)        = {:.5}", wasserstein_vs_quantile(&m, &atoms, 2.0, 1e-8)?);
    Ok(())
}
