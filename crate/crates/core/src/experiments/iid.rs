//! Runners on i.i.d. samples: empirical-measure rates and the
//! Poisson-versus-Gaussian comparison.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, Poisson, StandardNormal};
use rayon::prelude::*;
use statrs::function::gamma::ln_gamma;

use super::{derive_seed, record, slope_row, summarize, value_row, RunReport, Scenario, ScenarioConfig};
use crate::engine::InitialDatum;
use crate::error::{Error, Result};
use crate::limit_laws::OULimitLaw;
use crate::metrics::{wasserstein_vs_quantile_pow, EmpiricalMeasure, QuantileFunction, DEFAULT_QUANTILE_TOL};

/// `E[W₁(μ, μ_n)]` for Rademacher `μ`: `E|2K/n − 1|` with `K ~ Bin(n, ½)`.
pub(crate) fn rademacher_w1_mean(n: usize) -> f64 {
    let ln_half_n = n as f64 * 0.5f64.ln();
    let ln_fact_n = ln_gamma(n as f64 + 1.0);
    (0..=n)
        .map(|k| {
            let ln_pmf = ln_fact_n - ln_gamma(k as f64 + 1.0) - ln_gamma((n - k) as f64 + 1.0) + ln_half_n;
            ln_pmf.exp() * (2.0 * k as f64 / n as f64 - 1.0).abs()
        })
        .sum()
}

/// For each `n` in `n_list`, `replicas` i.i.d. samples from `f0` measured
/// by `W₁` (scenario `EmpiricalW1Rate`) or `W_γ^γ` (`EmpiricalWgammaRate`)
/// against the exact quantile of `f0`, with the slope of the mean in `n`.
pub fn empirical_rate_lemmas(cfg: &ScenarioConfig) -> Result<RunReport> {
    cfg.validate()?;
    let (p, metric) = match cfg.scenario {
        Scenario::EmpiricalW1Rate => (1.0, "w1"),
        Scenario::EmpiricalWgammaRate => (cfg.gamma, "wgamma_pow"),
        other => {
            return Err(Error::Logic(format!("empirical_rate_lemmas called for {other}")));
        }
    };
    let law = OULimitLaw::new(cfg.f0.clone(), 0.0)?;
    let q = law.quantile_function()?;
    let mut report = RunReport::new(cfg.clone());
    let mut extra = Vec::new();
    let mut sweep = Vec::new();
    for &n in &cfg.n_list {
        let label = format!("iid/{n}");
        let values: Vec<(u64, f64)> = (0..cfg.replicas)
            .into_par_iter()
            .map(|r| {
                let seed = derive_seed(cfg.base_seed, &label, r as u64);
                let mut rng = ChaCha8Rng::seed_from_u64(seed);
                let x: Vec<f64> = (0..n).map(|_| cfg.f0.sample(&mut rng)).collect();
                let v = wasserstein_vs_quantile_pow(&EmpiricalMeasure::new(x)?, &q, p, DEFAULT_QUANTILE_TOL)?;
                Ok((seed, v))
            })
            .collect::<Result<_>>()?;
        for (r, &(seed, v)) in values.iter().enumerate() {
            report.records.push(record(cfg, None, n, 0.0, r, seed, metric, v));
        }
        let mean = values.iter().map(|v| v.1).sum::<f64>() / values.len() as f64;
        sweep.push((n as f64, mean));
        if cfg.scenario == Scenario::EmpiricalW1Rate && cfg.f0 == InitialDatum::Rademacher {
            extra.push(value_row(cfg, None, Some(n), Some(0.0), "w1_exact", rademacher_w1_mean(n)));
        }
    }
    report.summary = summarize(&report.records);
    report.summary.extend(extra);
    report
        .summary
        .extend(slope_row(cfg, None, Some(0.0), &format!("{metric}_vs_n"), &sweep));
    Ok(report)
}

/// `X = h (N⁺ − N⁻)` with `N^±` independent Poisson of mean `t_final / h²`,
/// against the Gaussian of the same variance `q = 2 t_final`.
///
/// For each `h` in `h_list`, `replicas` samples of size `n` give the mean
/// `W₂²`; `floor_samples` Gaussian samples of the same size give the floor.
/// The `eps` column of the records holds `h`.
pub fn poisson_gaussian_demo(cfg: &ScenarioConfig) -> Result<RunReport> {
    cfg.validate()?;
    let t = cfg.t_final;
    let q_t = 2.0 * t;
    let gauss = QuantileFunction::gaussian(0.0, q_t.sqrt())?;
    let mut report = RunReport::new(cfg.clone());
    let mut extra = Vec::new();
    let mut sweep = Vec::new();
    let w2sq = |x: Vec<f64>| wasserstein_vs_quantile_pow(&EmpiricalMeasure::new(x)?, &gauss, 2.0, DEFAULT_QUANTILE_TOL);

    for (hi, &h) in cfg.h_list.iter().enumerate() {
        let lambda = t / (h * h);
        let poisson = Poisson::new(lambda).map_err(|e| Error::domain(format!("Poisson mean {lambda}: {e}")))?;
        let raw_label = format!("poisson/{hi}");
        let raw: Vec<(u64, f64)> = (0..cfg.replicas)
            .into_par_iter()
            .map(|r| {
                let seed = derive_seed(cfg.base_seed, &raw_label, r as u64);
                let mut rng = ChaCha8Rng::seed_from_u64(seed);
                let x: Vec<f64> = (0..cfg.n)
                    .map(|_| {
                        let up: f64 = poisson.sample(&mut rng);
                        let down: f64 = poisson.sample(&mut rng);
                        h * (up - down)
                    })
                    .collect();
                Ok((seed, w2sq(x)?))
            })
            .collect::<Result<_>>()?;
        let floor_label = format!("floor/poisson/{hi}");
        let floor: Vec<(u64, f64)> = (0..cfg.floor_samples)
            .into_par_iter()
            .map(|k| {
                let seed = derive_seed(cfg.base_seed, &floor_label, k as u64);
                let mut rng = ChaCha8Rng::seed_from_u64(seed);
                let sd = q_t.sqrt();
                let x: Vec<f64> = (0..cfg.n)
                    .map(|_| {
                        let z: f64 = StandardNormal.sample(&mut rng);
                        sd * z
                    })
                    .collect();
                Ok((seed, w2sq(x)?))
            })
            .collect::<Result<_>>()?;
        for (r, &(seed, v)) in raw.iter().enumerate() {
            report.records.push(record(cfg, Some(h), cfg.n, t, r, seed, "w2sq_raw", v));
        }
        for (k, &(seed, v)) in floor.iter().enumerate() {
            report.records.push(record(cfg, Some(h), cfg.n, t, k, seed, "w2sq_floor", v));
        }
        let raw_mean = raw.iter().map(|v| v.1).sum::<f64>() / raw.len() as f64;
        let floor_mean = floor.iter().map(|v| v.1).sum::<f64>() / floor.len() as f64;
        let corrected = (raw_mean - floor_mean).max(0.0);
        extra.push(value_row(cfg, Some(h), Some(cfg.n), Some(t), "q_t", q_t));
        extra.push(value_row(cfg, Some(h), Some(cfg.n), Some(t), "bound_predictor", h * h));
        extra.push(value_row(cfg, Some(h), Some(cfg.n), Some(t), "w2sq_corrected", corrected));
        sweep.push((h, corrected));
    }
    report.summary = summarize(&report.records);
    report.summary.extend(extra);
    report
        .summary
        .extend(slope_row(cfg, Some(cfg.n), Some(t), "w2sq_corrected_vs_h", &sweep));
    Ok(report)
}
