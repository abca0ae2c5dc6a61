use std::fmt::Write as _;
use std::fs;
use std::path::{Path, PathBuf};

use serde_json::json;

use crate::engine::replica_seed;
use crate::error::{Error, Result};
use crate::experiments::{Histogram, Record, RunReport, SummaryRow};

pub const RECORDS_HEADER: &str = "scenario,nu,eps,n,t,replicate,seed,metric,value";
pub const SUMMARY_HEADER: &str = "scenario,nu,eps,n,t,metric,mean,stderr,slope,slope_halfwidth";
pub const HISTOGRAM_HEADER: &str = "bin_left,bin_right,density";

/// Shortest decimal that parses back to `x`; exponent form outside
/// `[1e-5, 1e16)`.
pub fn format_number(x: f64) -> String {
    let a = x.abs();
    if x == 0.0 || !x.is_finite() || (1e-5..1e16).contains(&a) {
        format!("{x}")
    } else {
        format!("{x:e}")
    }
}

fn opt(x: Option<f64>) -> String {
    x.map(format_number).unwrap_or_default()
}

pub fn records_csv(records: &[Record]) -> String {
    let mut out = String::from(RECORDS_HEADER);
    out.push('\n');
    for r in records {
        let _ = writeln!(
            out,
            "{},{},{},{},{},{},{},{},{}",
            r.scenario,
            opt(r.nu),
            opt(r.eps),
            r.n,
            format_number(r.t),
            r.replicate,
            r.seed,
            r.metric,
            format_number(r.value)
        );
    }
    out
}

pub fn summary_csv(rows: &[SummaryRow]) -> String {
    let mut out = String::from(SUMMARY_HEADER);
    out.push('\n');
    for r in rows {
        let _ = writeln!(
            out,
            "{},{},{},{},{},{},{},{},{},{}",
            r.scenario,
            opt(r.nu),
            opt(r.eps),
            r.n.map(|n| n.to_string()).unwrap_or_default(),
            opt(r.t),
            r.metric,
            opt(r.mean),
            opt(r.stderr),
            opt(r.slope),
            opt(r.slope_halfwidth)
        );
    }
    out
}

pub fn histogram_csv(h: &Histogram) -> String {
    let mut out = String::from(HISTOGRAM_HEADER);
    out.push('\n');
    for b in &h.bins {
        let _ = writeln!(
            out,
            "{},{},{}",
            format_number(b.left),
            format_number(b.right),
            format_number(b.density)
        );
    }
    out
}

fn write_file(path: PathBuf, contents: &str) -> Result<PathBuf> {
    fs::write(&path, contents).map_err(|source| Error::Io {
        path: path.clone(),
        source,
    })?;
    Ok(path)
}

/// Writes `records.csv`, `summary.csv`, one `hist_<tag>.csv` per histogram
/// and `manifest.json` into `dir`, creating it if needed. Returns the paths
/// written.
pub fn write_report(report: &RunReport, dir: &Path) -> Result<Vec<PathBuf>> {
    fs::create_dir_all(dir).map_err(|source| Error::Io {
        path: dir.to_path_buf(),
        source,
    })?;
    let mut written = vec![
        write_file(dir.join("records.csv"), &records_csv(&report.records))?,
        write_file(dir.join("summary.csv"), &summary_csv(&report.summary))?,
    ];
    for h in &report.histograms {
        written.push(write_file(dir.join(format!("hist_{}.csv", h.tag)), &histogram_csv(h))?);
    }
    let cfg = &report.config;
    let files: Vec<String> = written
        .iter()
        .filter_map(|p| p.file_name().map(|f| f.to_string_lossy().into_owned()))
        .collect();
    let manifest = json!({
        "package": env!("CARGO_PKG_NAME"),
        "version": env!("CARGO_PKG_VERSION"),
        "config": cfg,
        "base_seed": cfg.base_seed,
        "replica_seeds": (0..cfg.replicas).map(|r| replica_seed(cfg.base_seed, r)).collect::<Vec<_>>(),
        "notes": report.notes,
        "timings": report.timings,
        "files": files,
    });
    let text = serde_json::to_string_pretty(&manifest).map_err(|e| Error::Logic(e.to_string()))? + "\n";
    written.push(write_file(dir.join("manifest.json"), &text)?);
    Ok(written)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::experiments::{Scenario, ScenarioConfig};

    #[test]
    fn numbers_round_trip() {
        for x in [0.1, 1.0, 1e-7, 3.0e20, -2.5, 0.0, 1.0 / 3.0, 12345.678] {
            let s = format_number(x);
            assert_eq!(s.parse::<f64>().unwrap(), x, "{s}");
        }
        assert_eq!(format_number(0.1), "0.1");
        assert_eq!(format_number(2.0), "2");
        assert_eq!(format_number(1e-7), "1e-7");
    }

    #[test]
    fn empty_report_writes_headers_only() {
        let dir = tempfile::tempdir().unwrap();
        let report = RunReport::new(ScenarioConfig::defaults(Scenario::EmpiricalW1Rate));
        write_report(&report, dir.path()).unwrap();
        let records = fs::read_to_string(dir.path().join("records.csv")).unwrap();
        assert_eq!(records, format!("{RECORDS_HEADER}\n"));
        let summary = fs::read_to_string(dir.path().join("summary.csv")).unwrap();
        assert_eq!(summary, format!("{SUMMARY_HEADER}\n"));
        let manifest: serde_json::Value =
            serde_json::from_str(&fs::read_to_string(dir.path().join("manifest.json")).unwrap()).unwrap();
        assert_eq!(manifest["config"]["replicas"], 100);
    }

    #[test]
    fn unwritable_directory_reports_the_path() {
        let dir = tempfile::tempdir().unwrap();
        let blocker = dir.path().join("file");
        fs::write(&blocker, "x").unwrap();
        let report = RunReport::new(ScenarioConfig::defaults(Scenario::EmpiricalW1Rate));
        let err = write_report(&report, &blocker.join("out")).unwrap_err();
        assert_eq!(err.kind(), "io");
        assert!(err.to_string().contains("file"));
    }
}
