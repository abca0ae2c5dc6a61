//! Event-driven particle system.
//!
//! One aggregated exponential clock of rate `n Λ_ε` drives all collisions.
//! At each event a particle `i` and a partner `j` are drawn uniformly and
//! only `V(i)` is rotated: `V(i) ← cos Θ V(i) − sin Θ V(j)`. Under the
//! [`Scheme::Diffusion`] scheme each particle additionally follows an
//! Ornstein–Uhlenbeck flow `dV = −b_ε V dt + sqrt(2 E b_ε) dB` between its
//! own events. That flow is never time-stepped: a particle is refreshed
//! with the exact Gaussian transition only when it is touched by an event,
//! observed, or reaches the final time.
//!
//! Random draws per event are consumed in the fixed order
//! `(T, i, j, u_Θ, sign_Θ, gauss_i, gauss_j)`, the Gaussian pair only under
//! the diffusion scheme. Terminal and snapshot sweeps refresh particles in
//! index order.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::{Exp1, StandardNormal};
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::cross_section::{compute_coefficients, CollisionCoefficients, CrossSection, ThetaSampler};
use crate::error::{Error, Result};
use crate::experiments::{summarize, Record, RunReport, ScenarioConfig};
use crate::limit_laws::empirical_moments;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Scheme {
    /// Jumps `|θ| ≥ ε` plus the Ornstein–Uhlenbeck replacement of small jumps.
    Diffusion,
    /// Jumps `|θ| ≥ ε` only.
    TruncationOnly,
    /// All jumps of a finite grazing kernel.
    GrazingFinite,
}

impl Scheme {
    pub fn as_str(self) -> &'static str {
        match self {
            Scheme::Diffusion => "diffusion",
            Scheme::TruncationOnly => "truncation-only",
            Scheme::GrazingFinite => "grazing-finite",
        }
    }
}

/// Law of the initial velocities.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "kebab-case", deny_unknown_fields)]
pub enum InitialDatum {
    /// `½δ₋₁ + ½δ₊₁`.
    Rademacher,
    DiscreteAtoms { points: Vec<f64>, weights: Vec<f64> },
    Gaussian { mean: f64, variance: f64 },
}

impl Default for InitialDatum {
    fn default() -> Self {
        InitialDatum::Rademacher
    }
}

impl InitialDatum {
    pub fn validate(&self) -> Result<()> {
        match self {
            InitialDatum::Rademacher => Ok(()),
            InitialDatum::DiscreteAtoms { points, weights } => {
                if points.is_empty() || points.len() != weights.len() {
                    return Err(Error::domain(
                        "discrete initial datum needs as many weights as points (at least one)",
                    ));
                }
                if points.iter().any(|p| !p.is_finite()) {
                    return Err(Error::domain("discrete atoms must be finite"));
                }
                if weights.iter().any(|w| !(*w >= 0.0)) {
                    return Err(Error::domain("discrete weights must be non-negative"));
                }
                let total: f64 = weights.iter().sum();
                if (total - 1.0).abs() > 1e-12 {
                    return Err(Error::domain(format!("discrete weights sum to {total}, not 1")));
                }
                Ok(())
            }
            InitialDatum::Gaussian { mean, variance } => {
                if !mean.is_finite() || !(*variance >= 0.0 && variance.is_finite()) {
                    return Err(Error::domain("gaussian datum needs finite mean and variance >= 0"));
                }
                Ok(())
            }
        }
    }

    /// Atoms and weights for the discrete kinds; `None` for the Gaussian.
    pub fn atoms(&self) -> Option<(Vec<f64>, Vec<f64>)> {
        match self {
            InitialDatum::Rademacher => Some((vec![-1.0, 1.0], vec![0.5, 0.5])),
            InitialDatum::DiscreteAtoms { points, weights } => {
                Some((points.clone(), weights.clone()))
            }
            InitialDatum::Gaussian { .. } => None,
        }
    }

    /// Exact `∫ v^p f₀(dv)` for even `p`.
    pub fn moment(&self, p: u32) -> f64 {
        match self {
            InitialDatum::Gaussian { mean, variance } => gaussian_moment(*mean, *variance, p),
            _ => {
                let (points, weights) = self.atoms().unwrap_or_default();
                points
                    .iter()
                    .zip(&weights)
                    .map(|(x, w)| w * x.powi(p as i32))
                    .sum()
            }
        }
    }

    /// `E = ∫ v² f₀(dv)`.
    pub fn energy(&self) -> f64 {
        self.moment(2)
    }

    pub fn sample<R: Rng + ?Sized>(&self, rng: &mut R) -> f64 {
        match self {
            InitialDatum::Rademacher => {
                if rng.random::<bool>() {
                    1.0
                } else {
                    -1.0
                }
            }
            InitialDatum::DiscreteAtoms { points, weights } => {
                let u: f64 = rng.random();
                let mut acc = 0.0;
                for (x, w) in points.iter().zip(weights) {
                    acc += w;
                    if u < acc {
                        return *x;
                    }
                }
                // u landed in the rounding gap above the last partial sum
                *points
                    .iter()
                    .zip(weights)
                    .rev()
                    .find(|(_, w)| **w > 0.0)
                    .map(|(x, _)| x)
                    .unwrap_or(&points[points.len() - 1])
            }
            InitialDatum::Gaussian { mean, variance } => {
                let z: f64 = rng.sample(StandardNormal);
                mean + variance.sqrt() * z
            }
        }
    }
}

/// Raw moment `E[X^p]` of `N(mean, variance)` by the binomial expansion.
fn gaussian_moment(mean: f64, variance: f64, p: u32) -> f64 {
    // E[Z^k] = (k-1)!! for even k
    let mut total = 0.0;
    let mut binom = 1.0;
    for k in 0..=p {
        if k > 0 {
            binom = binom * (p - k + 1) as f64 / k as f64;
        }
        if k % 2 == 0 {
            let dfact: f64 = (1..k).step_by(2).map(|x| x as f64).product();
            total += binom * mean.powi((p - k) as i32) * variance.powi(k as i32 / 2) * dfact;
        }
    }
    total
}

/// Seed of replica `index` given the base seed.
pub fn replica_seed(base_seed: u64, index: usize) -> u64 {
    base_seed ^ index as u64
}

/// The simulation state: `n` velocities and their clocks.
#[derive(Debug, Clone)]
pub struct ParticleEnsemble {
    velocities: Vec<f64>,
    last_update: Vec<f64>,
    now: f64,
    scheme: Scheme,
    energy: f64,
    cross_section: CrossSection,
    coeffs: CollisionCoefficients,
    sampler: ThetaSampler,
    rng: ChaCha8Rng,
    seed: u64,
    event_count: u64,
    exclude_self_collision: bool,
}

impl ParticleEnsemble {
    /// Draws `n` i.i.d. velocities from `f0` with a generator seeded by
    /// `seed`. The energy is the exact second moment of `f0`, not the sample
    /// one.
    pub fn new(
        f0: &InitialDatum,
        n: usize,
        scheme: Scheme,
        cross_section: CrossSection,
        eps: f64,
        seed: u64,
    ) -> Result<Self> {
        f0.validate()?;
        if n < 2 {
            return Err(Error::domain(format!("ensemble needs n >= 2, got {n}")));
        }
        match (scheme, cross_section) {
            (Scheme::GrazingFinite, CrossSection::UniformGrazing) => {}
            (Scheme::GrazingFinite, _) | (_, CrossSection::UniformGrazing) => {
                return Err(Error::domain(
                    "the grazing-finite scheme pairs exactly with the uniform grazing kernel",
                ))
            }
            _ => {}
        }
        let coeffs = compute_coefficients(&cross_section, eps)?;
        let sampler = ThetaSampler::new(&cross_section, eps).or_else(|e| {
            // eps = pi leaves no jumps to sample; keep a placeholder sampler
            if coeffs.lambda_eps == 0.0 {
                ThetaSampler::new(&CrossSection::UniformGrazing, eps)
            } else {
                Err(e)
            }
        })?;
        let energy = f0.energy();
        if !(energy > 0.0) {
            return Err(Error::domain("initial datum must have positive energy"));
        }
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let velocities: Vec<f64> = (0..n).map(|_| f0.sample(&mut rng)).collect();
        Ok(ParticleEnsemble {
            velocities,
            last_update: vec![0.0; n],
            now: 0.0,
            scheme,
            energy,
            cross_section,
            coeffs,
            sampler,
            rng,
            seed,
            event_count: 0,
            exclude_self_collision: false,
        })
    }

    /// Draw partners among the other `n − 1` particles only.
    pub fn exclude_self_collision(mut self, exclude: bool) -> Self {
        self.exclude_self_collision = exclude;
        self
    }

    pub fn len(&self) -> usize {
        self.velocities.len()
    }

    pub fn is_empty(&self) -> bool {
        self.velocities.is_empty()
    }

    /// Raw velocities. Under the diffusion scheme these are stale for every
    /// particle whose clock is behind [`now`](Self::now); use
    /// [`snapshot`](Self::snapshot) to observe the state at the current time.
    pub fn velocities(&self) -> &[f64] {
        &self.velocities
    }

    pub fn last_update(&self) -> &[f64] {
        &self.last_update
    }

    pub fn now(&self) -> f64 {
        self.now
    }

    pub fn scheme(&self) -> Scheme {
        self.scheme
    }

    pub fn energy(&self) -> f64 {
        self.energy
    }

    pub fn cross_section(&self) -> CrossSection {
        self.cross_section
    }

    pub fn coefficients(&self) -> &CollisionCoefficients {
        &self.coeffs
    }

    pub fn event_count(&self) -> u64 {
        self.event_count
    }

    pub fn seed(&self) -> u64 {
        self.seed
    }

    /// Exact Ornstein–Uhlenbeck transition of particle `i` from its last
    /// refresh to `t`, driven by the standard normal draw `gauss`.
    pub fn ou_refresh(&mut self, i: usize, t: f64, gauss: f64) -> Result<f64> {
        if self.scheme != Scheme::Diffusion {
            return Err(Error::Logic(format!(
                "ou_refresh called on a {} ensemble",
                self.scheme.as_str()
            )));
        }
        let last = self.last_update[i];
        if t < last {
            return Err(Error::Logic(format!(
                "particle {i} refreshed at t = {t} before its last update {last}"
            )));
        }
        Ok(self.refresh_unchecked(i, t, gauss))
    }

    #[inline]
    fn refresh_unchecked(&mut self, i: usize, t: f64, gauss: f64) -> f64 {
        let dt = t - self.last_update[i];
        let b = self.coeffs.b_eps;
        let v = &mut self.velocities[i];
        if dt > 0.0 && b > 0.0 {
            let decay = (-b * dt).exp();
            let var = -self.energy * (-2.0 * b * dt).exp_m1();
            *v = *v * decay + var.sqrt() * gauss;
        }
        self.last_update[i] = t;
        *v
    }

    /// Rotates `V(i)` against the pre-collision `V(j)`; `V(j)` is untouched.
    #[inline]
    pub fn apply_collision(&mut self, i: usize, j: usize, theta: f64) {
        let (s, c) = theta.sin_cos();
        let vi = self.velocities[i];
        let vj = self.velocities[j];
        self.velocities[i] = c * vi - s * vj;
    }

    /// Runs the dynamics to `t_final` and, for the diffusion scheme, brings
    /// every particle's clock to `t_final`.
    pub fn advance(&mut self, t_final: f64) -> Result<()> {
        let sampler = self.sampler;
        self.advance_with_angles(t_final, move |u, neg| sampler.sample(u, neg))
    }

    /// [`advance`](Self::advance) with a caller-supplied map from the
    /// `(u_Θ, sign_Θ)` draws to the collision angle.
    pub fn advance_with_angles<A>(&mut self, t_final: f64, mut angle: A) -> Result<()>
    where
        A: FnMut(f64, bool) -> f64,
    {
        if !(t_final >= self.now) {
            return Err(Error::Logic(format!(
                "cannot advance from t = {} back to {t_final}",
                self.now
            )));
        }
        let n = self.velocities.len();
        let rate = n as f64 * self.coeffs.lambda_eps;
        let diffusion = self.scheme == Scheme::Diffusion;
        if rate > 0.0 {
            loop {
                let wait: f64 = self.rng.sample::<f64, _>(Exp1) / rate;
                let t = self.now + wait;
                if t > t_final {
                    break;
                }
                self.now = t;
                let i = self.rng.random_range(0..n);
                let j = if self.exclude_self_collision {
                    let j = self.rng.random_range(0..n - 1);
                    if j >= i {
                        j + 1
                    } else {
                        j
                    }
                } else {
                    self.rng.random_range(0..n)
                };
                let u: f64 = self.rng.random();
                let negative: bool = self.rng.random();
                if diffusion {
                    let gi: f64 = self.rng.sample(StandardNormal);
                    let gj: f64 = self.rng.sample(StandardNormal);
                    self.refresh_unchecked(i, t, gi);
                    self.refresh_unchecked(j, t, gj);
                }
                let theta = angle(u, negative);
                self.apply_collision(i, j, theta);
                self.event_count += 1;
            }
        }
        self.now = t_final;
        self.synchronize();
        Ok(())
    }

    /// Refreshes every particle to the current time (diffusion only).
    fn synchronize(&mut self) {
        if self.scheme != Scheme::Diffusion {
            return;
        }
        let now = self.now;
        for i in 0..self.velocities.len() {
            let g: f64 = self.rng.sample(StandardNormal);
            self.refresh_unchecked(i, now, g);
        }
    }

    /// Velocities at the current time. The diffusion sweep this requires is
    /// itself a valid transition, so it is applied to the live state.
    pub fn snapshot(&mut self) -> &[f64] {
        if self.last_update.iter().any(|&t| t < self.now) {
            self.synchronize();
        }
        &self.velocities
    }
}

/// Observation of one replica at one time.
#[derive(Debug, Clone, PartialEq)]
pub struct ReplicaSnapshot {
    pub t: f64,
    pub m2: f64,
    pub m4: f64,
    pub events: u64,
    pub velocities: Option<Vec<f64>>,
}

/// Runs one replica through the given (sorted) observation times.
pub fn run_single(
    f0: &InitialDatum,
    n: usize,
    scheme: Scheme,
    cs: CrossSection,
    eps: f64,
    seed: u64,
    times: &[f64],
    exclude_self_collision: bool,
    keep_velocities: bool,
) -> Result<Vec<ReplicaSnapshot>> {
    let mut ens =
        ParticleEnsemble::new(f0, n, scheme, cs, eps, seed)?.exclude_self_collision(exclude_self_collision);
    let mut out = Vec::with_capacity(times.len());
    for &t in times {
        ens.advance(t)?;
        let events = ens.event_count();
        let v = ens.snapshot();
        let moments = empirical_moments(v, &[2, 4])?;
        out.push(ReplicaSnapshot {
            t,
            m2: moments[&2],
            m4: moments[&4],
            events,
            velocities: keep_velocities.then(|| v.to_vec()),
        });
    }
    Ok(out)
}

/// Observation grid: configured snapshot times plus the final time, sorted
/// and deduplicated.
pub fn observation_times(snapshot_times: &[f64], t_final: f64) -> Vec<f64> {
    let mut times: Vec<f64> = snapshot_times.iter().copied().filter(|&t| t <= t_final).collect();
    times.push(t_final);
    times.sort_by(f64::total_cmp);
    times.dedup();
    times
}

/// Runs `config.replicas` independent copies of the configured scheme for
/// every `eps` in the configuration and records second and fourth moments
/// and event counts at each observation time.
///
/// Replica `r` uses seed `base_seed ^ r`; replicas run on the rayon pool and
/// are collected in index order, so the report does not depend on the
/// number of threads.
pub fn run_replicas(config: &ScenarioConfig) -> Result<RunReport> {
    config.validate()?;
    let cs = config.cross_section_for(config.scheme)?;
    let times = observation_times(&config.snapshot_times, config.t_final);
    let mut report = RunReport::new(config.clone());
    for &eps in &config.eps_list {
        let runs: Vec<Result<Vec<ReplicaSnapshot>>> = (0..config.replicas)
            .into_par_iter()
            .map(|r| {
                run_single(
                    &config.f0,
                    config.n,
                    config.scheme,
                    cs,
                    eps,
                    replica_seed(config.base_seed, r),
                    &times,
                    config.exclude_self_collision,
                    config.emit_histograms,
                )
            })
            .collect();
        let mut pooled = Vec::new();
        for (r, run) in runs.into_iter().enumerate() {
            let seed = replica_seed(config.base_seed, r);
            for snap in run? {
                for (metric, value) in [
                    ("m2", snap.m2),
                    ("m4", snap.m4),
                    ("events", snap.events as f64),
                ] {
                    report.records.push(Record {
                        scenario: config.scenario,
                        nu: config.nu,
                        eps: Some(eps),
                        n: config.n,
                        t: snap.t,
                        replicate: r,
                        seed,
                        metric: metric.to_string(),
                        value,
                    });
                }
                if snap.t == config.t_final {
                    if let Some(v) = snap.velocities {
                        pooled.extend(v);
                    }
                }
            }
        }
        if config.emit_histograms && !pooled.is_empty() {
            report.push_histogram(
                format!("{}_eps{eps}", config.scheme.as_str()),
                &pooled,
                config.bins,
            );
        }
    }
    report.summary = summarize(&report.records);
    Ok(report)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn power_law(nu: f64) -> CrossSection {
        CrossSection::power_law(nu).unwrap()
    }

    #[test]
    fn init_energy_and_support() {
        let ens = ParticleEnsemble::new(
            &InitialDatum::Rademacher,
            4,
            Scheme::Diffusion,
            power_law(0.5),
            0.1,
            7,
        )
        .unwrap();
        assert_eq!(ens.energy(), 1.0);
        assert!(ens.velocities().iter().all(|v| v.abs() == 1.0));
        assert_eq!(ens.now(), 0.0);
        assert!(ens.last_update().iter().all(|&t| t == 0.0));

        let g = InitialDatum::Gaussian {
            mean: 0.0,
            variance: 2.0,
        };
        let ens = ParticleEnsemble::new(&g, 10, Scheme::TruncationOnly, power_law(0.5), 0.1, 1)
            .unwrap();
        assert_eq!(ens.energy(), 2.0);
    }

    #[test]
    fn init_rejects_invalid_inputs() {
        let bad = InitialDatum::DiscreteAtoms {
            points: vec![-1.0, 1.0],
            weights: vec![1.5, -0.5],
        };
        assert!(ParticleEnsemble::new(&bad, 10, Scheme::Diffusion, power_law(0.5), 0.1, 0).is_err());
        let r = InitialDatum::Rademacher;
        assert!(ParticleEnsemble::new(&r, 1, Scheme::Diffusion, power_law(0.5), 0.1, 0).is_err());
        assert!(ParticleEnsemble::new(&r, 10, Scheme::Diffusion, power_law(0.5), 0.0, 0).is_err());
        assert!(ParticleEnsemble::new(&r, 10, Scheme::GrazingFinite, power_law(0.5), 0.1, 0).is_err());
        assert!(ParticleEnsemble::new(
            &r,
            10,
            Scheme::Diffusion,
            CrossSection::UniformGrazing,
            0.1,
            0
        )
        .is_err());
    }

    #[test]
    fn gaussian_moments_match_closed_forms() {
        assert_eq!(gaussian_moment(0.0, 2.0, 2), 2.0);
        assert_eq!(gaussian_moment(0.0, 1.0, 4), 3.0);
        // mean 1, var 1: E X^4 = 1 + 6 + 3 = 10
        assert!((gaussian_moment(1.0, 1.0, 4) - 10.0).abs() < 1e-12);
    }

    #[test]
    fn ou_refresh_examples() {
        let mut ens = ParticleEnsemble::new(
            &InitialDatum::Rademacher,
            4,
            Scheme::Diffusion,
            power_law(0.5),
            0.1,
            3,
        )
        .unwrap();
        let v0 = ens.velocities()[0];
        assert_eq!(ens.ou_refresh(0, 0.0, 1.7).unwrap(), v0);
        ens.coeffs.b_eps = 0.5;
        ens.velocities[1] = 1.0;
        let v = ens.ou_refresh(1, 2.0, 0.0).unwrap();
        assert!((v - (-1.0f64).exp()).abs() < 1e-15);
        assert!((v - 0.367_879_4).abs() < 1e-7);
        assert_eq!(ens.last_update()[1], 2.0);
        assert!(matches!(ens.ou_refresh(1, 1.0, 0.0), Err(Error::Logic(_))));

        ens.coeffs.b_eps = 0.0;
        let before = ens.velocities()[2];
        assert_eq!(ens.ou_refresh(2, 5.0, 2.0).unwrap(), before);
    }

    #[test]
    fn apply_collision_examples() {
        let mut ens = ParticleEnsemble::new(
            &InitialDatum::Rademacher,
            4,
            Scheme::TruncationOnly,
            power_law(0.5),
            0.1,
            3,
        )
        .unwrap();
        ens.velocities = vec![1.0, 2.0, 3.0, 4.0];
        ens.apply_collision(0, 1, 0.0);
        assert_eq!(ens.velocities[0], 1.0);
        ens.apply_collision(2, 3, std::f64::consts::FRAC_PI_2);
        assert!((ens.velocities[2] + 4.0).abs() < 1e-15);
        assert_eq!(ens.velocities[3], 4.0);
        ens.velocities = vec![1.0, 2.0, 3.0, 4.0];
        ens.apply_collision(0, 1, std::f64::consts::FRAC_PI_3);
        assert!((ens.velocities[0] - (0.5 - 3f64.sqrt())).abs() < 1e-15);
        assert_eq!(ens.velocities[1], 2.0);
    }

    #[test]
    fn zero_angles_leave_truncation_state_invariant() {
        let mut ens = ParticleEnsemble::new(
            &InitialDatum::Gaussian {
                mean: 0.0,
                variance: 1.0,
            },
            200,
            Scheme::TruncationOnly,
            power_law(1.0),
            0.1,
            11,
        )
        .unwrap();
        let before = ens.velocities().to_vec();
        ens.advance_with_angles(0.5, |_, _| 0.0).unwrap();
        assert!(ens.event_count() > 0);
        assert_eq!(ens.velocities(), &before[..]);
        assert_eq!(ens.now(), 0.5);
    }

    #[test]
    fn no_jumps_gives_pure_ou() {
        let n = 20_000;
        let mut ens = ParticleEnsemble::new(
            &InitialDatum::Rademacher,
            n,
            Scheme::Diffusion,
            power_law(0.5),
            std::f64::consts::PI,
            5,
        )
        .unwrap();
        let init = ens.velocities().to_vec();
        let b = ens.coefficients().b_eps;
        let t = 0.7;
        ens.advance(t).unwrap();
        assert_eq!(ens.event_count(), 0);
        assert!(ens.last_update().iter().all(|&s| s == t));
        // residuals V_t - V_0 e^{-bt} must be N(0, 1 - e^{-2bt})
        let var = 1.0 - (-2.0 * b * t).exp();
        let resid: Vec<f64> = ens
            .velocities()
            .iter()
            .zip(&init)
            .map(|(v, v0)| v - v0 * (-b * t).exp())
            .collect();
        let mean = resid.iter().sum::<f64>() / n as f64;
        let m2 = resid.iter().map(|r| r * r).sum::<f64>() / n as f64;
        assert!(mean.abs() < 4.0 * (var / n as f64).sqrt());
        assert!((m2 - var).abs() < 4.0 * var * (2.0 / n as f64).sqrt());
    }

    #[test]
    fn partner_is_untouched_and_clock_is_monotone() {
        let mut ens = ParticleEnsemble::new(
            &InitialDatum::Rademacher,
            50,
            Scheme::Diffusion,
            power_law(1.5),
            0.1,
            9,
        )
        .unwrap();
        ens.advance(0.05).unwrap();
        ens.advance(0.1).unwrap();
        assert!(ens.last_update().iter().all(|&t| t <= ens.now()));
        assert!(ens.advance(0.05).is_err());
    }

    #[test]
    fn self_collision_exclusion_changes_stream_but_runs() {
        let ens = ParticleEnsemble::new(
            &InitialDatum::Rademacher,
            2,
            Scheme::TruncationOnly,
            power_law(0.5),
            0.1,
            1,
        )
        .unwrap();
        let mut a = ens.clone().exclude_self_collision(true);
        a.advance(1.0).unwrap();
        assert!(a.event_count() > 0);
    }

    #[test]
    fn same_seed_same_trajectory() {
        let make = || {
            let mut e = ParticleEnsemble::new(
                &InitialDatum::Rademacher,
                100,
                Scheme::Diffusion,
                power_law(1.5),
                0.1,
                42,
            )
            .unwrap();
            e.advance(0.1).unwrap();
            (e.velocities().to_vec(), e.event_count())
        };
        assert_eq!(make(), make());
    }

    #[test]
    fn observation_grid() {
        assert_eq!(observation_times(&[0.5, 0.25, 2.0], 1.0), vec![0.25, 0.5, 1.0]);
        assert_eq!(observation_times(&[1.0], 1.0), vec![1.0]);
    }
}
