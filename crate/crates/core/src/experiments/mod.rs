//! Scenario runners: each turns one convergence statement into a measured
//! rate or an analytic comparison and returns a [`RunReport`].
//!
//! All runners are deterministic given `base_seed`. Replica `r` of any
//! particle simulation uses seed `base_seed ^ r`; auxiliary streams
//! (reference samples, sampling floors, i.i.d. draws) use seeds derived
//! from `base_seed` and a stream label by [`derive_seed`], so they never
//! coincide with replica streams.

mod config;
mod fit;
mod iid;
mod particles;
mod reference;
mod report;

use std::time::Instant;

use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

pub use config::ScenarioConfig;
pub use fit::{loglog_slope, LogLogFit};
pub use iid::{empirical_rate_lemmas, poisson_gaussian_demo};
pub use particles::{eps_rate, grazing_rate, moment_track, n_rate, scheme_compare};
pub use reference::{Reference, ReferenceCache, ReferenceSpec};
pub use report::{mean_stderr, summarize, Histogram, HistogramBin, Record, RunReport, SummaryRow, Timing};

use crate::error::Result;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Scenario {
    /// Plain replicated simulation recording moments and event counts.
    Simulate,
    GrazingRate,
    SchemeCompare,
    EpsRate,
    NRate,
    MomentTrack,
    /// `E W₁(μ, μ_n)` against `n` for i.i.d. samples.
    EmpiricalW1Rate,
    /// `E W_γ^γ(μ, μ_n)` against `n` for i.i.d. samples.
    EmpiricalWgammaRate,
    PoissonGaussianDemo,
}

impl Scenario {
    pub const ALL: [Scenario; 9] = [
        Scenario::Simulate,
        Scenario::GrazingRate,
        Scenario::SchemeCompare,
        Scenario::EpsRate,
        Scenario::NRate,
        Scenario::MomentTrack,
        Scenario::EmpiricalW1Rate,
        Scenario::EmpiricalWgammaRate,
        Scenario::PoissonGaussianDemo,
    ];

    pub fn as_str(self) -> &'static str {
        match self {
            Scenario::Simulate => "simulate",
            Scenario::GrazingRate => "grazing-rate",
            Scenario::SchemeCompare => "scheme-compare",
            Scenario::EpsRate => "eps-rate",
            Scenario::NRate => "n-rate",
            Scenario::MomentTrack => "moment-track",
            Scenario::EmpiricalW1Rate => "empirical-w1-rate",
            Scenario::EmpiricalWgammaRate => "empirical-wgamma-rate",
            Scenario::PoissonGaussianDemo => "poisson-gaussian-demo",
        }
    }
}

impl std::fmt::Display for Scenario {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(self.as_str())
    }
}

/// Seed of auxiliary stream `label` number `index`: the first eight bytes
/// of `SHA-256(label ‖ base_seed ‖ index)`.
pub fn derive_seed(base_seed: u64, label: &str, index: u64) -> u64 {
    let mut h = Sha256::new();
    h.update(label.as_bytes());
    h.update(base_seed.to_le_bytes());
    h.update(index.to_le_bytes());
    let digest = h.finalize();
    u64::from_le_bytes(digest[..8].try_into().expect("digest has 32 bytes"))
}

/// `sqrt(max(raw² − floor², 0))`.
pub fn floor_corrected(raw: f64, floor: f64) -> f64 {
    (raw * raw - floor * floor).max(0.0).sqrt()
}

/// Runs the scenario named in `config` with a private in-memory reference
/// cache.
pub fn run_scenario(config: &ScenarioConfig) -> Result<RunReport> {
    run_scenario_with_cache(config, &ReferenceCache::in_memory())
}

pub fn run_scenario_with_cache(config: &ScenarioConfig, cache: &ReferenceCache) -> Result<RunReport> {
    config.validate()?;
    let start = Instant::now();
    let mut report = match config.scenario {
        Scenario::Simulate => crate::engine::run_replicas(config)?,
        Scenario::GrazingRate => grazing_rate(config)?,
        Scenario::SchemeCompare => scheme_compare(config, cache)?,
        Scenario::EpsRate => eps_rate(config, cache)?,
        Scenario::NRate => n_rate(config, cache)?,
        Scenario::MomentTrack => moment_track(config)?,
        Scenario::EmpiricalW1Rate | Scenario::EmpiricalWgammaRate => empirical_rate_lemmas(config)?,
        Scenario::PoissonGaussianDemo => poisson_gaussian_demo(config)?,
    };
    report.timings.push(Timing {
        label: "total".into(),
        seconds: start.elapsed().as_secs_f64(),
    });
    Ok(report)
}

/// Record constructor shared by the runners.
pub(crate) fn record(
    cfg: &ScenarioConfig,
    eps: Option<f64>,
    n: usize,
    t: f64,
    replicate: usize,
    seed: u64,
    metric: &str,
    value: f64,
) -> Record {
    Record {
        scenario: cfg.scenario,
        nu: cfg.nu,
        eps,
        n,
        t,
        replicate,
        seed,
        metric: metric.to_string(),
        value,
    }
}

/// Summary row holding a single derived value (no replicate spread).
pub(crate) fn value_row(
    cfg: &ScenarioConfig,
    eps: Option<f64>,
    n: Option<usize>,
    t: Option<f64>,
    metric: &str,
    value: f64,
) -> SummaryRow {
    SummaryRow {
        scenario: cfg.scenario,
        nu: cfg.nu,
        eps,
        n,
        t,
        metric: metric.to_string(),
        mean: Some(value),
        stderr: None,
        slope: None,
        slope_halfwidth: None,
    }
}

/// Summary row holding a log-log fit of `metric` against the swept variable.
pub(crate) fn slope_row(
    cfg: &ScenarioConfig,
    n: Option<usize>,
    t: Option<f64>,
    metric: &str,
    points: &[(f64, f64)],
) -> Option<SummaryRow> {
    let fit = loglog_slope(points).ok()?;
    Some(SummaryRow {
        scenario: cfg.scenario,
        nu: cfg.nu,
        eps: None,
        n,
        t,
        metric: metric.to_string(),
        mean: None,
        stderr: None,
        slope: Some(fit.slope),
        slope_halfwidth: fit.half_width,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn scenario_names_match_serde() {
        for s in Scenario::ALL {
            let json = serde_json::to_string(&s).unwrap();
            assert_eq!(json, format!("\"{}\"", s.as_str()));
        }
    }

    #[test]
    fn derived_seeds_differ_by_label_and_index() {
        let a = derive_seed(7, "floor", 0);
        assert_eq!(a, derive_seed(7, "floor", 0));
        assert_ne!(a, derive_seed(7, "floor", 1));
        assert_ne!(a, derive_seed(7, "reference", 0));
        assert_ne!(a, derive_seed(8, "floor", 0));
    }

    #[test]
    fn floor_correction_is_never_negative() {
        assert_eq!(floor_corrected(0.1, 0.2), 0.0);
        assert!((floor_corrected(0.5, 0.3) - 0.4).abs() < 1e-15);
    }
}
