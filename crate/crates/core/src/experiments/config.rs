use serde::{Deserialize, Serialize};

use super::Scenario;
use crate::cross_section::CrossSection;
use crate::engine::{InitialDatum, Scheme};
use crate::error::{Error, Result};

/// Fully resolved parameters of one scenario run.
///
/// Build one with [`ScenarioConfig::defaults`] and adjust fields, or parse
/// a configuration file through [`crate::io::parse_config`].
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ScenarioConfig {
    pub scenario: Scenario,
    /// Power-law exponent; `None` only where no power-law kernel is used.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub nu: Option<f64>,
    pub eps_list: Vec<f64>,
    pub n: usize,
    pub n_ref: usize,
    pub eps_ref: f64,
    /// Number of independent runs the reference sample is pooled from.
    pub ref_replicas: usize,
    pub t_final: f64,
    pub snapshot_times: Vec<f64>,
    pub replicas: usize,
    pub base_seed: u64,
    pub f0: InitialDatum,
    /// Scheme for the `simulate` scenario.
    pub scheme: Scheme,
    pub n_list: Vec<usize>,
    pub h_list: Vec<f64>,
    /// Order of the fractional Wasserstein distance.
    pub gamma: f64,
    /// Independent draws averaged into each sampling floor.
    pub floor_samples: usize,
    pub exclude_self_collision: bool,
    pub emit_histograms: bool,
    pub bins: usize,
}

impl ScenarioConfig {
    /// Defaults for `scenario`. `nu` is left unset.
    pub fn defaults(scenario: Scenario) -> Self {
        let mut cfg = ScenarioConfig {
            scenario,
            nu: None,
            eps_list: vec![0.1],
            n: 10_000,
            n_ref: 1_000_000,
            eps_ref: 0.03,
            ref_replicas: 10,
            t_final: 0.1,
            snapshot_times: vec![0.1],
            replicas: 1,
            base_seed: 0,
            f0: InitialDatum::Rademacher,
            scheme: Scheme::Diffusion,
            n_list: vec![100, 1_000, 10_000],
            h_list: vec![0.5, 0.25, 0.125],
            gamma: 1.5,
            floor_samples: 4,
            exclude_self_collision: false,
            emit_histograms: false,
            bins: 100,
        };
        match scenario {
            Scenario::Simulate => {}
            Scenario::GrazingRate => {
                cfg.scheme = Scheme::GrazingFinite;
                cfg.eps_list = vec![0.4, 0.2, 0.1];
                cfg.t_final = 1.0;
                cfg.snapshot_times = vec![1.0];
                cfg.replicas = 20;
            }
            Scenario::SchemeCompare => cfg.replicas = 20,
            Scenario::EpsRate => {
                cfg.eps_list = vec![0.2, 0.1, 0.05];
                cfg.n = 100_000;
                cfg.replicas = 4;
            }
            Scenario::NRate => {
                cfg.eps_list = vec![0.05];
                cfg.n_list = vec![1_000, 10_000, 100_000];
                cfg.replicas = 4;
            }
            Scenario::MomentTrack => {
                cfg.eps_list = vec![0.01];
                cfg.t_final = 1.0;
                cfg.snapshot_times = vec![0.25, 0.5, 1.0];
                cfg.replicas = 20;
            }
            Scenario::EmpiricalW1Rate | Scenario::EmpiricalWgammaRate => {
                cfg.f0 = InitialDatum::Gaussian {
                    mean: 0.0,
                    variance: 1.0,
                };
                cfg.replicas = 100;
            }
            Scenario::PoissonGaussianDemo => {
                cfg.t_final = 1.0;
                cfg.snapshot_times = vec![1.0];
                cfg.replicas = 10;
            }
        }
        cfg
    }

    /// Whether this scenario simulates a power-law kernel and so needs `nu`.
    pub fn needs_nu(&self) -> bool {
        match self.scenario {
            Scenario::Simulate => self.scheme != Scheme::GrazingFinite,
            Scenario::SchemeCompare | Scenario::EpsRate | Scenario::NRate | Scenario::MomentTrack => {
                true
            }
            _ => false,
        }
    }

    pub fn cross_section_for(&self, scheme: Scheme) -> Result<CrossSection> {
        match scheme {
            Scheme::GrazingFinite => Ok(CrossSection::UniformGrazing),
            _ => {
                let nu = self.nu.ok_or_else(|| invalid("nu", "required for power-law kernels"))?;
                CrossSection::power_law(nu).map_err(|e| invalid("nu", e.to_string()))
            }
        }
    }

    /// Checks every constraint; errors name the offending key.
    pub fn validate(&self) -> Result<()> {
        if let Some(nu) = self.nu {
            if !(nu > 0.0 && nu < 2.0) {
                return Err(invalid("nu", format!("{nu} must lie in (0, 2)")));
            }
        } else if self.needs_nu() {
            return Err(invalid("nu", "required for this scenario"));
        }
        non_empty("eps_list", &self.eps_list)?;
        for &eps in &self.eps_list {
            if !(eps > 0.0 && eps <= std::f64::consts::PI) {
                return Err(invalid("eps_list", format!("{eps} must lie in (0, pi]")));
            }
        }
        if self.n < 2 {
            return Err(invalid("n", "must be at least 2"));
        }
        if self.n_ref < 2 * self.ref_replicas.max(1) {
            return Err(invalid("n_ref", "must be at least 2 * ref_replicas"));
        }
        if !(self.eps_ref > 0.0 && self.eps_ref < std::f64::consts::PI) {
            return Err(invalid("eps_ref", format!("{} must lie in (0, pi)", self.eps_ref)));
        }
        if self.ref_replicas < 1 {
            return Err(invalid("ref_replicas", "must be at least 1"));
        }
        if !(self.t_final > 0.0 && self.t_final.is_finite()) {
            return Err(invalid("t_final", format!("{} must be positive", self.t_final)));
        }
        non_empty("snapshot_times", &self.snapshot_times)?;
        for &t in &self.snapshot_times {
            if !(t >= 0.0 && t <= self.t_final) {
                return Err(invalid("snapshot_times", format!("{t} must lie in [0, t_final]")));
            }
        }
        if self.replicas < 1 {
            return Err(invalid("replicas", "must be at least 1"));
        }
        if self.base_seed > i64::MAX as u64 {
            return Err(invalid("base_seed", "must be below 2^63"));
        }
        self.f0.validate().map_err(|e| invalid("f0", e.to_string()))?;
        non_empty("n_list", &self.n_list)?;
        if self.n_list.iter().any(|&n| n < 2) {
            return Err(invalid("n_list", "every entry must be at least 2"));
        }
        non_empty("h_list", &self.h_list)?;
        if self.h_list.iter().any(|&h| !(h > 0.0 && h.is_finite())) {
            return Err(invalid("h_list", "every entry must be positive"));
        }
        if !(self.gamma >= 1.0 && self.gamma.is_finite()) {
            return Err(invalid("gamma", format!("{} must be at least 1", self.gamma)));
        }
        if self.floor_samples < 1 {
            return Err(invalid("floor_samples", "must be at least 1"));
        }
        if self.bins < 1 {
            return Err(invalid("bins", "must be at least 1"));
        }
        match (self.scenario, self.scheme) {
            (Scenario::GrazingRate, s) if s != Scheme::GrazingFinite => {
                return Err(invalid("scheme", "grazing-rate runs the grazing-finite scheme"));
            }
            (Scenario::Simulate | Scenario::GrazingRate, _) => {}
            (_, Scheme::GrazingFinite) => {
                return Err(invalid("scheme", "grazing-finite is only used by simulate and grazing-rate"));
            }
            _ => {}
        }
        if self.scheme == Scheme::GrazingFinite && self.scenario == Scenario::Simulate && self.nu.is_some() {
            return Err(invalid("nu", "the grazing-finite scheme has no power-law exponent"));
        }
        Ok(())
    }
}

fn invalid(key: &str, message: impl Into<String>) -> Error {
    Error::Config {
        key: key.into(),
        line: None,
        message: message.into(),
    }
}

fn non_empty<T>(key: &str, list: &[T]) -> Result<()> {
    if list.is_empty() {
        return Err(invalid(key, "must not be empty"));
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn key_of(e: Error) -> String {
        match e {
            Error::Config { key, .. } => key,
            other => panic!("unexpected {other}"),
        }
    }

    #[test]
    fn defaults_validate_once_nu_is_set() {
        for s in Scenario::ALL {
            let mut cfg = ScenarioConfig::defaults(s);
            if cfg.needs_nu() {
                assert_eq!(key_of(cfg.validate().unwrap_err()), "nu");
                cfg.nu = Some(0.5);
            }
            cfg.validate().unwrap();
        }
    }

    #[test]
    fn constraint_errors_name_the_key() {
        let mut cfg = ScenarioConfig::defaults(Scenario::Simulate);
        cfg.nu = Some(2.5);
        assert_eq!(key_of(cfg.validate().unwrap_err()), "nu");
        cfg.nu = Some(0.5);
        cfg.replicas = 0;
        assert_eq!(key_of(cfg.validate().unwrap_err()), "replicas");
    }
}
