//! Runners built on the particle system.

use std::time::Instant;

use rand::seq::IndexedRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use super::{
    derive_seed, floor_corrected, record, slope_row, summarize, value_row, ReferenceCache, ReferenceSpec,
    RunReport, ScenarioConfig, Timing,
};
use crate::cross_section::{compute_coefficients, CrossSection};
use crate::engine::{observation_times, replica_seed, run_single, ReplicaSnapshot, Scheme};
use crate::error::Result;
use crate::io::kde;
use crate::limit_laws::{m4_trajectory, OULimitLaw};
use crate::metrics::{
    wasserstein_empirical, wasserstein_empirical_pow, wasserstein_vs_quantile, EmpiricalMeasure,
    DEFAULT_QUANTILE_TOL,
};

type Measure<'a> = dyn Fn(usize, &[f64]) -> Result<Vec<(&'static str, f64)>> + Sync + 'a;

struct Replica {
    seed: u64,
    snaps: Vec<ReplicaSnapshot>,
    /// Per observation time, the values returned by the measure callback.
    measured: Vec<Vec<(&'static str, f64)>>,
}

struct Arm<'a> {
    scheme: Scheme,
    cs: CrossSection,
    n: usize,
    eps: f64,
    times: &'a [f64],
    keep: bool,
}

/// Runs `cfg.replicas` copies of one arm in parallel and applies `measure`
/// to each snapshot inside the worker, dropping velocities unless `keep`.
fn replicate(cfg: &ScenarioConfig, arm: &Arm, measure: &Measure) -> Result<Vec<Replica>> {
    (0..cfg.replicas)
        .into_par_iter()
        .map(|r| {
            let seed = replica_seed(cfg.base_seed, r);
            let mut snaps = run_single(
                &cfg.f0,
                arm.n,
                arm.scheme,
                arm.cs,
                arm.eps,
                seed,
                arm.times,
                cfg.exclude_self_collision,
                true,
            )?;
            let mut measured = Vec::with_capacity(snaps.len());
            for (ti, snap) in snaps.iter_mut().enumerate() {
                measured.push(measure(ti, snap.velocities.as_deref().expect("velocities kept"))?);
                if !arm.keep {
                    snap.velocities = None;
                }
            }
            Ok(Replica { seed, snaps, measured })
        })
        .collect()
}

/// Pushes moment, event and measured records of every replica.
fn push_replicas(report: &mut RunReport, eps: f64, n: usize, suffix: &str, reps: &[Replica]) {
    let cfg = report.config.clone();
    for (r, rep) in reps.iter().enumerate() {
        for (snap, measured) in rep.snaps.iter().zip(&rep.measured) {
            let base = [("m2", snap.m2), ("m4", snap.m4), ("events", snap.events as f64)];
            for (metric, value) in base.iter().chain(measured) {
                let name = format!("{metric}{suffix}");
                report.records.push(record(&cfg, Some(eps), n, snap.t, r, rep.seed, &name, *value));
            }
        }
    }
}

fn pooled_at(reps: &[Replica], ti: usize) -> Vec<f64> {
    reps.iter()
        .flat_map(|r| r.snaps[ti].velocities.iter().flatten().copied())
        .collect()
}

fn mean(values: impl IntoIterator<Item = f64>) -> f64 {
    let (s, k) = values.into_iter().fold((0.0, 0usize), |(s, k), v| (s + v, k + 1));
    s / k as f64
}

fn timed<T>(report: &mut RunReport, label: String, f: impl FnOnce() -> Result<T>) -> Result<T> {
    let start = Instant::now();
    let out = f()?;
    report.timings.push(Timing {
        label,
        seconds: start.elapsed().as_secs_f64(),
    });
    Ok(out)
}

/// Grazing-kernel Kac system against its Ornstein–Uhlenbeck limit.
///
/// Velocities are pooled over replicas; at each observation time the
/// report holds the raw `W₂` to the limit law, the sampling floor (`W₂` of
/// an equally large exact sample, root mean square over `floor_samples`
/// draws), the corrected distance, its maximum over the grid, and the slope
/// of that maximum against `ε`.
pub fn grazing_rate(cfg: &ScenarioConfig) -> Result<RunReport> {
    cfg.validate()?;
    let mut report = RunReport::new(cfg.clone());
    let times = observation_times(&cfg.snapshot_times, cfg.t_final);
    let laws: Vec<OULimitLaw> = times
        .iter()
        .map(|&t| OULimitLaw::new(cfg.f0.clone(), t))
        .collect::<Result<_>>()?;
    let quantiles = laws.iter().map(|l| l.quantile_function()).collect::<Result<Vec<_>>>()?;
    let pooled_n = cfg.n * cfg.replicas;
    let mut sweep = Vec::new();

    for (ei, &eps) in cfg.eps_list.iter().enumerate() {
        let arm = Arm {
            scheme: Scheme::GrazingFinite,
            cs: CrossSection::UniformGrazing,
            n: cfg.n,
            eps,
            times: &times,
            keep: true,
        };
        let reps = timed(&mut report, format!("grazing eps={eps}"), || {
            replicate(cfg, &arm, &|_, _| Ok(Vec::new()))
        })?;
        push_replicas(&mut report, eps, cfg.n, "", &reps);

        let mut worst = 0.0_f64;
        for (ti, &t) in times.iter().enumerate() {
            let pooled = EmpiricalMeasure::new(pooled_at(&reps, ti))?;
            let raw = wasserstein_vs_quantile(&pooled, &quantiles[ti], 2.0, DEFAULT_QUANTILE_TOL)?;
            report
                .records
                .push(record(cfg, Some(eps), pooled_n, t, 0, cfg.base_seed, "w2_raw", raw));

            let label = format!("floor/grazing/{ei}/{ti}");
            let floors: Vec<(u64, f64)> = (0..cfg.floor_samples)
                .into_par_iter()
                .map(|k| {
                    let seed = derive_seed(cfg.base_seed, &label, k as u64);
                    let mut rng = ChaCha8Rng::seed_from_u64(seed);
                    let sample: Vec<f64> = (0..pooled_n).map(|_| laws[ti].sample(&mut rng)).collect();
                    let w = wasserstein_vs_quantile(
                        &EmpiricalMeasure::new(sample)?,
                        &quantiles[ti],
                        2.0,
                        DEFAULT_QUANTILE_TOL,
                    )?;
                    Ok((seed, w))
                })
                .collect::<Result<_>>()?;
            for (k, &(seed, w)) in floors.iter().enumerate() {
                report
                    .records
                    .push(record(cfg, Some(eps), pooled_n, t, k, seed, "w2_floor_sample", w));
            }
            let floor = mean(floors.iter().map(|f| f.1 * f.1)).sqrt();
            let corrected = floor_corrected(raw, floor);
            worst = worst.max(corrected);
            report.summary.push(value_row(cfg, Some(eps), Some(pooled_n), Some(t), "w2_floor", floor));
            report
                .summary
                .push(value_row(cfg, Some(eps), Some(pooled_n), Some(t), "w2_corrected", corrected));
        }
        report.summary.push(value_row(
            cfg,
            Some(eps),
            Some(pooled_n),
            None,
            "theta4_moment",
            0.6 * eps * eps,
        ));
        report
            .summary
            .push(value_row(cfg, Some(eps), Some(pooled_n), None, "w2_corrected_max", worst));
        sweep.push((eps, worst));
    }
    finish(&mut report);
    report
        .summary
        .extend(slope_row(cfg, Some(pooled_n), None, "w2_corrected_max_vs_eps", &sweep));
    Ok(report)
}

/// Prepends replica aggregates to the rows a runner already pushed.
fn finish(report: &mut RunReport) {
    let mut rows = summarize(&report.records);
    rows.append(&mut report.summary);
    report.summary = rows;
}

fn reference_for(
    cfg: &ScenarioConfig,
    cache: &ReferenceCache,
    times: &[f64],
    report: &mut RunReport,
) -> Result<std::sync::Arc<super::Reference>> {
    let spec = ReferenceSpec::from_config(cfg, times)?;
    let reference = timed(report, "reference".into(), || cache.get_or_build(&spec))?;
    report.notes.insert("reference_hash".into(), reference.hash.clone());
    report.notes.insert("reference_seed".into(), spec.seed.to_string());
    Ok(reference)
}

/// Diffusion scheme with `n` particles against truncation-only with `2n`,
/// both at each `ε`, measured by `W₂` to a pooled high-resolution
/// reference.
pub fn scheme_compare(cfg: &ScenarioConfig, cache: &ReferenceCache) -> Result<RunReport> {
    cfg.validate()?;
    let mut report = RunReport::new(cfg.clone());
    let times = observation_times(&cfg.snapshot_times, cfg.t_final);
    let reference = reference_for(cfg, cache, &times, &mut report)?;
    let cs = cfg.cross_section_for(Scheme::Diffusion)?;
    let refs: Vec<&EmpiricalMeasure> = times.iter().map(|&t| reference.at(t).expect("reference time")).collect();
    let measure = |ti: usize, v: &[f64]| -> Result<Vec<(&'static str, f64)>> {
        let x = EmpiricalMeasure::from_slice(v)?;
        Ok(vec![("w2_ref", wasserstein_empirical(&x, refs[ti], 2.0)?)])
    };
    let last = times.len() - 1;
    let mut extra = Vec::new();

    for &eps in &cfg.eps_list {
        let lambda = cs.jump_rate(eps)?;
        for (scheme, n, suffix) in [
            (Scheme::Diffusion, cfg.n, "_diffusion"),
            (Scheme::TruncationOnly, 2 * cfg.n, "_truncation"),
        ] {
            let arm = Arm {
                scheme,
                cs,
                n,
                eps,
                times: &times,
                keep: cfg.emit_histograms,
            };
            let reps = timed(&mut report, format!("{} eps={eps}", scheme.as_str()), || {
                replicate(cfg, &arm, &measure)
            })?;
            push_replicas(&mut report, eps, n, suffix, &reps);
            extra.push(value_row(
                cfg,
                Some(eps),
                Some(n),
                Some(cfg.t_final),
                &format!("expected_events{suffix}"),
                n as f64 * cfg.t_final * lambda,
            ));
            if cfg.emit_histograms {
                let pooled = pooled_at(&reps, last);
                report.push_histogram(format!("{}_eps{eps}", scheme.as_str()), &pooled, cfg.bins);
            }
        }
    }
    if cfg.emit_histograms {
        let r = refs[last].sorted_values();
        report.push_histogram("reference".into(), r, cfg.bins);
        if let Some(h) = report.histograms.last() {
            let centers: Vec<f64> = h.bins.iter().map(|b| 0.5 * (b.left + b.right)).collect();
            let edges: Vec<(f64, f64)> = h.bins.iter().map(|b| (b.left, b.right)).collect();
            let dens = kde(r, &centers)?;
            report.histograms.push(super::Histogram {
                tag: "reference_kde".into(),
                bins: edges
                    .into_iter()
                    .zip(dens)
                    .map(|((left, right), density)| super::HistogramBin { left, right, density })
                    .collect(),
            });
        }
    }
    finish(&mut report);
    report.summary.extend(extra);
    Ok(report)
}

/// `floor_samples` bootstrap resamples of size `n` from `reference`, each
/// measured by `W₂²` against the reference itself.
fn bootstrap_floor(
    cfg: &ScenarioConfig,
    reference: &EmpiricalMeasure,
    n: usize,
    label: &str,
) -> Result<Vec<(u64, f64)>> {
    let values = reference.sorted_values();
    (0..cfg.floor_samples)
        .into_par_iter()
        .map(|k| {
            let seed = derive_seed(cfg.base_seed, label, k as u64);
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            let sample: Vec<f64> = (0..n).map(|_| *values.choose(&mut rng).expect("non-empty")).collect();
            let w2sq = wasserstein_empirical_pow(&EmpiricalMeasure::new(sample)?, reference, 2.0)?;
            Ok((seed, w2sq))
        })
        .collect()
}

/// Sweeps `ε` at fixed `n`. Per `ε` and time the corrected distance is
/// `sqrt(max(mean W₂² − mean floor², 0))`; its maximum over the grid is fit
/// against `ε`.
pub fn eps_rate(cfg: &ScenarioConfig, cache: &ReferenceCache) -> Result<RunReport> {
    cfg.validate()?;
    let mut report = RunReport::new(cfg.clone());
    let times = observation_times(&cfg.snapshot_times, cfg.t_final);
    let reference = reference_for(cfg, cache, &times, &mut report)?;
    let cs = cfg.cross_section_for(Scheme::Diffusion)?;
    let refs: Vec<&EmpiricalMeasure> = times.iter().map(|&t| reference.at(t).expect("reference time")).collect();
    let measure = |ti: usize, v: &[f64]| -> Result<Vec<(&'static str, f64)>> {
        let x = EmpiricalMeasure::from_slice(v)?;
        Ok(vec![("w2_ref", wasserstein_empirical(&x, refs[ti], 2.0)?)])
    };

    let floors: Vec<Vec<(u64, f64)>> = times
        .iter()
        .enumerate()
        .map(|(ti, _)| bootstrap_floor(cfg, refs[ti], cfg.n, &format!("floor/bootstrap/{ti}")))
        .collect::<Result<_>>()?;
    for (ti, &t) in times.iter().enumerate() {
        for (k, &(seed, w2sq)) in floors[ti].iter().enumerate() {
            report
                .records
                .push(record(cfg, None, cfg.n, t, k, seed, "w2_floor_sample", w2sq.sqrt()));
        }
    }

    let mut extra = Vec::new();
    let mut sweep = Vec::new();
    for &eps in &cfg.eps_list {
        let arm = Arm {
            scheme: Scheme::Diffusion,
            cs,
            n: cfg.n,
            eps,
            times: &times,
            keep: false,
        };
        let reps = timed(&mut report, format!("diffusion eps={eps}"), || {
            replicate(cfg, &arm, &measure)
        })?;
        push_replicas(&mut report, eps, cfg.n, "", &reps);
        let mut worst = 0.0_f64;
        for (ti, &t) in times.iter().enumerate() {
            let raw_sq = mean(reps.iter().map(|r| r.measured[ti][0].1.powi(2)));
            let floor_sq = mean(floors[ti].iter().map(|f| f.1));
            let corrected = (raw_sq - floor_sq).max(0.0).sqrt();
            worst = worst.max(corrected);
            extra.push(value_row(cfg, Some(eps), Some(cfg.n), Some(t), "w2_ref_rms", raw_sq.sqrt()));
            extra.push(value_row(cfg, Some(eps), Some(cfg.n), Some(t), "w2_floor", floor_sq.sqrt()));
            extra.push(value_row(cfg, Some(eps), Some(cfg.n), Some(t), "w2_corrected", corrected));
        }
        extra.push(value_row(cfg, Some(eps), Some(cfg.n), None, "w2_corrected_max", worst));
        sweep.push((eps, worst));
    }
    finish(&mut report);
    report.summary.extend(extra);
    report
        .summary
        .extend(slope_row(cfg, Some(cfg.n), None, "w2_corrected_max_vs_eps", &sweep));
    Ok(report)
}

/// Sweeps `n` at the first `ε` of the list, measuring `E W₂²` to the
/// reference, the bootstrap floor of the same size, and the distance
/// between independent replica pairs.
pub fn n_rate(cfg: &ScenarioConfig, cache: &ReferenceCache) -> Result<RunReport> {
    cfg.validate()?;
    let mut report = RunReport::new(cfg.clone());
    let times = observation_times(&cfg.snapshot_times, cfg.t_final);
    let reference = reference_for(cfg, cache, &times, &mut report)?;
    let cs = cfg.cross_section_for(Scheme::Diffusion)?;
    let refs: Vec<&EmpiricalMeasure> = times.iter().map(|&t| reference.at(t).expect("reference time")).collect();
    let measure = |ti: usize, v: &[f64]| -> Result<Vec<(&'static str, f64)>> {
        let x = EmpiricalMeasure::from_slice(v)?;
        Ok(vec![("w2sq_ref", wasserstein_empirical_pow(&x, refs[ti], 2.0)?)])
    };
    let eps = cfg.eps_list[0];
    let last = times.len() - 1;
    let t_final = times[last];

    let mut extra = Vec::new();
    let (mut raw_sweep, mut corrected_sweep, mut floor_sweep) = (Vec::new(), Vec::new(), Vec::new());
    for (ni, &n) in cfg.n_list.iter().enumerate() {
        let arm = Arm {
            scheme: Scheme::Diffusion,
            cs,
            n,
            eps,
            times: &times,
            keep: true,
        };
        let mut reps = timed(&mut report, format!("diffusion n={n}"), || {
            replicate(cfg, &arm, &measure)
        })?;
        for (k, pair) in reps.chunks(2).filter(|c| c.len() == 2).enumerate() {
            let a = EmpiricalMeasure::from_slice(pair[0].snaps[last].velocities.as_deref().unwrap())?;
            let b = EmpiricalMeasure::from_slice(pair[1].snaps[last].velocities.as_deref().unwrap())?;
            let w = wasserstein_empirical_pow(&a, &b, 2.0)?;
            report
                .records
                .push(record(cfg, Some(eps), n, t_final, k, pair[0].seed, "w2sq_pair", w));
        }
        for rep in &mut reps {
            for s in &mut rep.snaps {
                s.velocities = None;
            }
        }
        push_replicas(&mut report, eps, n, "", &reps);

        let mut worst_raw = 0.0_f64;
        let mut worst = 0.0_f64;
        let mut floor_last = 0.0;
        for (ti, &t) in times.iter().enumerate() {
            let floors = bootstrap_floor(cfg, refs[ti], n, &format!("floor/bootstrap/{ni}/{ti}"))?;
            for (k, &(seed, w2sq)) in floors.iter().enumerate() {
                report.records.push(record(cfg, Some(eps), n, t, k, seed, "w2sq_floor", w2sq));
            }
            let raw = mean(reps.iter().map(|r| r.measured[ti][0].1));
            let floor = mean(floors.iter().map(|f| f.1));
            let corrected = (raw - floor).max(0.0);
            worst_raw = worst_raw.max(raw);
            worst = worst.max(corrected);
            floor_last = floor;
            extra.push(value_row(cfg, Some(eps), Some(n), Some(t), "w2sq_corrected", corrected));
        }
        extra.push(value_row(cfg, Some(eps), Some(n), None, "w2sq_ref_max", worst_raw));
        extra.push(value_row(cfg, Some(eps), Some(n), None, "w2sq_corrected_max", worst));
        raw_sweep.push((n as f64, worst_raw));
        corrected_sweep.push((n as f64, worst));
        floor_sweep.push((n as f64, floor_last));
    }
    finish(&mut report);
    report.summary.extend(extra);
    report
        .summary
        .extend(slope_row(cfg, None, None, "w2sq_ref_max_vs_n", &raw_sweep));
    report
        .summary
        .extend(slope_row(cfg, None, None, "w2sq_corrected_max_vs_n", &corrected_sweep));
    report
        .summary
        .extend(slope_row(cfg, None, Some(t_final), "w2sq_floor_vs_n", &floor_sweep));
    Ok(report)
}

/// Empirical second and fourth moments under the diffusion scheme next to
/// the exact energy and fourth-moment trajectory.
pub fn moment_track(cfg: &ScenarioConfig) -> Result<RunReport> {
    cfg.validate()?;
    let mut report = RunReport::new(cfg.clone());
    let times = observation_times(&cfg.snapshot_times, cfg.t_final);
    let cs = cfg.cross_section_for(Scheme::Diffusion)?;
    let energy = cfg.f0.energy();
    let mut extra = Vec::new();
    for &eps in &cfg.eps_list {
        let arm = Arm {
            scheme: Scheme::Diffusion,
            cs,
            n: cfg.n,
            eps,
            times: &times,
            keep: false,
        };
        let reps = timed(&mut report, format!("diffusion eps={eps}"), || {
            replicate(cfg, &arm, &|_, _| Ok(Vec::new()))
        })?;
        push_replicas(&mut report, eps, cfg.n, "", &reps);
        let c = compute_coefficients(&cs, eps)?.m4_decay_c;
        for &t in &times {
            extra.push(value_row(cfg, Some(eps), Some(cfg.n), Some(t), "m2_exact", energy));
            extra.push(value_row(
                cfg,
                Some(eps),
                Some(cfg.n),
                Some(t),
                "m4_exact",
                m4_trajectory(&cfg.f0, c, t),
            ));
        }
    }
    finish(&mut report);
    report.summary.extend(extra);
    Ok(report)
}
