use std::collections::BTreeMap;

use serde::Serialize;

use super::{Scenario, ScenarioConfig};
use crate::io::histogram;

/// One measured value from one replica (or one pooled computation).
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Record {
    pub scenario: Scenario,
    pub nu: Option<f64>,
    pub eps: Option<f64>,
    pub n: usize,
    pub t: f64,
    pub replicate: usize,
    pub seed: u64,
    pub metric: String,
    pub value: f64,
}

/// Aggregate over replicas, or a fitted slope. Empty `stderr` marks a
/// single-replica mean.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SummaryRow {
    pub scenario: Scenario,
    pub nu: Option<f64>,
    pub eps: Option<f64>,
    pub n: Option<usize>,
    pub t: Option<f64>,
    pub metric: String,
    pub mean: Option<f64>,
    pub stderr: Option<f64>,
    pub slope: Option<f64>,
    pub slope_halfwidth: Option<f64>,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct HistogramBin {
    pub left: f64,
    pub right: f64,
    pub density: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Histogram {
    pub tag: String,
    pub bins: Vec<HistogramBin>,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Timing {
    pub label: String,
    pub seconds: f64,
}

/// Everything a scenario run produced.
#[derive(Debug, Clone, Serialize)]
pub struct RunReport {
    pub config: ScenarioConfig,
    pub records: Vec<Record>,
    pub summary: Vec<SummaryRow>,
    #[serde(skip)]
    pub histograms: Vec<Histogram>,
    /// Wall-clock measurements; machine dependent, so kept out of the CSVs.
    pub timings: Vec<Timing>,
    /// Extra provenance such as reference hashes.
    pub notes: BTreeMap<String, String>,
}

impl RunReport {
    pub fn new(config: ScenarioConfig) -> Self {
        RunReport {
            config,
            records: Vec::new(),
            summary: Vec::new(),
            histograms: Vec::new(),
            timings: Vec::new(),
            notes: BTreeMap::new(),
        }
    }

    pub fn push_histogram(&mut self, tag: String, values: &[f64], bins: usize) {
        let (lo, hi) = values
            .iter()
            .fold((f64::INFINITY, f64::NEG_INFINITY), |(a, b), &v| (a.min(v), b.max(v)));
        if let Ok(bins) = histogram(values, bins, lo, hi) {
            self.histograms.push(Histogram { tag, bins });
        }
    }

    /// Records whose metric equals `metric`.
    pub fn metric<'a>(&'a self, metric: &'a str) -> impl Iterator<Item = &'a Record> + 'a {
        self.records.iter().filter(move |r| r.metric == metric)
    }

    /// Summary rows whose metric equals `metric`.
    pub fn summary_for<'a>(&'a self, metric: &'a str) -> impl Iterator<Item = &'a SummaryRow> + 'a {
        self.summary.iter().filter(move |r| r.metric == metric)
    }
}

/// Mean and standard error (`sample sd / sqrt(R)`); the error is `None`
/// for a single value.
pub fn mean_stderr(values: &[f64]) -> (f64, Option<f64>) {
    let r = values.len();
    let mean = values.iter().sum::<f64>() / r as f64;
    if r < 2 {
        return (mean, None);
    }
    let var = values.iter().map(|v| (v - mean).powi(2)).sum::<f64>() / (r - 1) as f64;
    (mean, Some((var / r as f64).sqrt()))
}

/// Groups records by `(nu, eps, n, t, metric)` in first-seen order and
/// averages over replicates.
pub fn summarize(records: &[Record]) -> Vec<SummaryRow> {
    let mut order: Vec<(Option<u64>, Option<u64>, usize, u64, String)> = Vec::new();
    let mut groups: BTreeMap<usize, (Scenario, Vec<f64>)> = BTreeMap::new();
    let mut index: std::collections::HashMap<(Option<u64>, Option<u64>, usize, u64, String), usize> =
        std::collections::HashMap::new();
    for r in records {
        let key = (
            r.nu.map(f64::to_bits),
            r.eps.map(f64::to_bits),
            r.n,
            r.t.to_bits(),
            r.metric.clone(),
        );
        let slot = *index.entry(key.clone()).or_insert_with(|| {
            order.push(key);
            order.len() - 1
        });
        groups.entry(slot).or_insert_with(|| (r.scenario, Vec::new())).1.push(r.value);
    }
    order
        .into_iter()
        .enumerate()
        .map(|(slot, (nu, eps, n, t, metric))| {
            let (scenario, values) = &groups[&slot];
            let (mean, stderr) = mean_stderr(values);
            SummaryRow {
                scenario: *scenario,
                nu: nu.map(f64::from_bits),
                eps: eps.map(f64::from_bits),
                n: Some(n),
                t: Some(f64::from_bits(t)),
                metric,
                mean: Some(mean),
                stderr,
                slope: None,
                slope_halfwidth: None,
            }
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn rec(eps: f64, rep: usize, metric: &str, value: f64) -> Record {
        Record {
            scenario: Scenario::Simulate,
            nu: Some(0.5),
            eps: Some(eps),
            n: 10,
            t: 1.0,
            replicate: rep,
            seed: rep as u64,
            metric: metric.into(),
            value,
        }
    }

    #[test]
    fn summary_groups_and_standard_errors() {
        let rows = summarize(&[
            rec(0.1, 0, "m2", 1.0),
            rec(0.1, 1, "m2", 3.0),
            rec(0.2, 0, "m2", 5.0),
        ]);
        assert_eq!(rows.len(), 2);
        assert_eq!(rows[0].mean, Some(2.0));
        // sd = sqrt(2), R = 2
        assert!((rows[0].stderr.unwrap() - 1.0).abs() < 1e-15);
        assert_eq!(rows[1].stderr, None);
    }
}
