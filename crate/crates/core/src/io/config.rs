use serde::{Deserialize, Serialize};

use crate::engine::{InitialDatum, Scheme};
use crate::error::{Error, Result};
use crate::experiments::{Scenario, ScenarioConfig};

/// Partially specified configuration: every [`ScenarioConfig`] field is
/// optional. A configuration file deserializes into this type, command-line
/// flags build one directly, and [`resolve_config`] layers both over the
/// scenario defaults.
#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ConfigOverrides {
    pub scenario: Option<Scenario>,
    pub nu: Option<f64>,
    pub eps_list: Option<Vec<f64>>,
    pub n: Option<usize>,
    pub n_ref: Option<usize>,
    pub eps_ref: Option<f64>,
    pub ref_replicas: Option<usize>,
    pub t_final: Option<f64>,
    pub snapshot_times: Option<Vec<f64>>,
    pub replicas: Option<usize>,
    pub base_seed: Option<u64>,
    pub f0: Option<InitialDatum>,
    pub scheme: Option<Scheme>,
    pub n_list: Option<Vec<usize>>,
    pub h_list: Option<Vec<f64>>,
    pub gamma: Option<f64>,
    pub floor_samples: Option<usize>,
    pub exclude_self_collision: Option<bool>,
    pub emit_histograms: Option<bool>,
    pub bins: Option<usize>,
}

macro_rules! each_field {
    ($m:ident) => {
        $m!(scenario, nu, eps_list, n, n_ref, eps_ref, ref_replicas, t_final, snapshot_times, replicas,
            base_seed, f0, scheme, n_list, h_list, gamma, floor_samples, exclude_self_collision,
            emit_histograms, bins)
    };
}

impl ConfigOverrides {
    /// Field-wise union; values in `other` win.
    pub fn merged(self, other: ConfigOverrides) -> ConfigOverrides {
        macro_rules! merge {
            ($($f:ident),*) => { ConfigOverrides { $($f: other.$f.or(self.$f)),* } };
        }
        each_field!(merge)
    }

    /// Names of the fields that are set.
    pub fn keys(&self) -> Vec<&'static str> {
        let mut keys = Vec::new();
        macro_rules! collect {
            ($($f:ident),*) => { $(if self.$f.is_some() { keys.push(stringify!($f)); })* };
        }
        each_field!(collect);
        keys
    }
}

fn config_error(key: &str, line: Option<usize>, message: impl Into<String>) -> Error {
    Error::Config {
        key: key.into(),
        line,
        message: message.into(),
    }
}

fn line_of_offset(text: &str, offset: usize) -> usize {
    text[..offset.min(text.len())].bytes().filter(|&b| b == b'\n').count() + 1
}

/// 1-based line on which `key` is assigned (or opened as a table).
fn line_of_key(text: &str, key: &str) -> Option<usize> {
    text.lines().position(|l| {
        let l = l.trim_start();
        if let Some(rest) = l.strip_prefix(key) {
            rest.trim_start().starts_with('=') || rest.trim_start().starts_with('.')
        } else {
            l.strip_prefix('[')
                .and_then(|r| r.trim_start().strip_prefix(key))
                .is_some_and(|r| r.trim_start().starts_with(']') || r.starts_with('.'))
        }
    })
    .map(|i| i + 1)
}

/// Parses a configuration document into overrides. Unknown keys, syntax
/// and type errors name the key and line.
pub fn parse_overrides(text: &str) -> Result<ConfigOverrides> {
    toml::from_str(text).map_err(|e| {
        let line = e.span().map(|s| line_of_offset(text, s.start));
        let message = e.message().trim().to_string();
        let key = message
            .strip_prefix("unknown field `")
            .and_then(|r| r.split('`').next())
            .map(str::to_string)
            .or_else(|| {
                let l = line?;
                let src = text.lines().nth(l - 1)?;
                let (k, _) = src.split_once('=')?;
                Some(k.trim().trim_matches(['[', ']']).to_string())
            })
            .unwrap_or_else(|| "<document>".into());
        config_error(&key, line, message)
    })
}

/// Layers `file` (if any) and then `cli` over the defaults of `scenario`
/// and validates the result. Constraint errors on keys that came from the
/// file carry the file line.
pub fn resolve_config(file: Option<&str>, cli: ConfigOverrides, scenario: Scenario) -> Result<ScenarioConfig> {
    let from_file = match file {
        Some(text) => parse_overrides(text)?,
        None => ConfigOverrides::default(),
    };
    let cli_keys = cli.keys();
    let o = from_file.merged(cli);
    let attach_line = |e: Error| match (e, file) {
        (Error::Config { key, line: None, message }, Some(text)) if !cli_keys.contains(&key.as_str()) => {
            let line = line_of_key(text, &key);
            config_error(&key, line, message)
        }
        (e, _) => e,
    };

    if let Some(s) = o.scenario {
        if s != scenario {
            return Err(attach_line(config_error(
                "scenario",
                None,
                format!("document is for `{s}` but `{scenario}` was requested"),
            )));
        }
    }
    let mut cfg = ScenarioConfig::defaults(scenario);
    let default_snapshots = cfg.snapshot_times.clone();
    let default_t = cfg.t_final;
    macro_rules! apply {
        ($($f:ident),*) => { $(if let Some(v) = o.$f.clone() { cfg.$f = v; })* };
    }
    apply!(
        eps_list, n, n_ref, eps_ref, ref_replicas, t_final, snapshot_times, replicas, base_seed, f0, scheme,
        n_list, h_list, gamma, floor_samples, exclude_self_collision, emit_histograms, bins
    );
    cfg.nu = o.nu.or(cfg.nu);
    if o.snapshot_times.is_none() && cfg.t_final != default_t {
        cfg.snapshot_times = if default_snapshots == [default_t] {
            vec![cfg.t_final]
        } else {
            let mut s: Vec<f64> = default_snapshots.into_iter().filter(|&t| t <= cfg.t_final).collect();
            if s.last() != Some(&cfg.t_final) {
                s.push(cfg.t_final);
            }
            s
        };
    }
    cfg.validate().map_err(attach_line)?;
    Ok(cfg)
}

/// Parses a complete configuration document for `scenario`.
pub fn parse_config(text: &str, scenario: Scenario) -> Result<ScenarioConfig> {
    resolve_config(Some(text), ConfigOverrides::default(), scenario)
}

/// Renders a configuration document that [`parse_config`] reads back to an
/// equal configuration.
pub fn render_config(cfg: &ScenarioConfig) -> Result<String> {
    toml::to_string(cfg).map_err(|e| Error::Logic(format!("config does not render: {e}")))
}
