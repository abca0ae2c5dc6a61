//! Analytic reference laws.
//!
//! The Fokker–Planck limit of grazing collisions is the Ornstein–Uhlenbeck
//! flow `dY = −Y/2 dt + sqrt(E) dB`, so starting from `Y₀ ~ f₀` the law at
//! time `t` is that of `Y₀ e^{−t/2} + sqrt(E (1 − e^{−t})) ξ`. For discrete
//! `f₀` this is a Gaussian mixture; for Gaussian `f₀` it is Gaussian.
//!
//! The fourth moment of the Kac solution itself relaxes exponentially:
//! `m₄(t) = (m₄(0) − 3E²) e^{−ct} + 3E²` with `c` the full-kernel
//! [`m4_decay_c`](crate::cross_section::CollisionCoefficients::m4_decay_c).

use std::collections::BTreeMap;
use std::f64::consts::{FRAC_1_SQRT_2, SQRT_2};

use rand::Rng;
use rand_distr::StandardNormal;
use serde::{Deserialize, Serialize};
use statrs::function::erf::{erfc, erfc_inv};

use crate::engine::InitialDatum;
use crate::error::{Error, Result};
use crate::metrics::QuantileFunction;

const FRAC_1_SQRT_2PI: f64 = 0.398_942_280_401_432_677_94;

/// Standard normal CDF.
pub fn normal_cdf(z: f64) -> f64 {
    0.5 * erfc(-z * FRAC_1_SQRT_2)
}

/// Standard normal upper tail `1 − Φ(z)`.
pub fn normal_sf(z: f64) -> f64 {
    0.5 * erfc(z * FRAC_1_SQRT_2)
}

pub fn normal_pdf(z: f64) -> f64 {
    FRAC_1_SQRT_2PI * (-0.5 * z * z).exp()
}

/// Standard normal quantile for `alpha ∈ (0, 1)`.
pub fn normal_quantile(alpha: f64) -> f64 {
    -SQRT_2 * erfc_inv(2.0 * alpha)
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct GaussianComponent {
    pub weight: f64,
    pub mean: f64,
    pub sd: f64,
}

/// Finite mixture of Gaussians with strictly positive standard deviations.
#[derive(Debug, Clone, PartialEq)]
pub struct GaussianMixture {
    components: Vec<GaussianComponent>,
}

impl GaussianMixture {
    pub fn new(components: Vec<GaussianComponent>) -> Result<Self> {
        let components: Vec<_> = components.into_iter().filter(|c| c.weight > 0.0).collect();
        if components.is_empty() {
            return Err(Error::domain("mixture needs at least one positive weight"));
        }
        if components
            .iter()
            .any(|c| !(c.sd > 0.0) || !c.mean.is_finite() || !c.sd.is_finite())
        {
            return Err(Error::domain("mixture components need finite mean and sd > 0"));
        }
        let total: f64 = components.iter().map(|c| c.weight).sum();
        if (total - 1.0).abs() > 1e-12 {
            return Err(Error::domain(format!("mixture weights sum to {total}")));
        }
        Ok(GaussianMixture { components })
    }

    pub fn components(&self) -> &[GaussianComponent] {
        &self.components
    }

    pub fn cdf(&self, x: f64) -> f64 {
        self.components
            .iter()
            .map(|c| c.weight * normal_cdf((x - c.mean) / c.sd))
            .sum()
    }

    pub fn sf(&self, x: f64) -> f64 {
        self.components
            .iter()
            .map(|c| c.weight * normal_sf((x - c.mean) / c.sd))
            .sum()
    }

    pub fn pdf(&self, x: f64) -> f64 {
        self.components
            .iter()
            .map(|c| c.weight * normal_pdf((x - c.mean) / c.sd) / c.sd)
            .sum()
    }

    pub fn max_sd(&self) -> f64 {
        self.components.iter().map(|c| c.sd).fold(0.0, f64::max)
    }

    /// `F⁻¹(alpha)` to absolute accuracy `1e−12`, by Newton steps kept
    /// inside a bisection bracket. The lower half is solved on the CDF and
    /// the upper half on the survival function, so both tails keep full
    /// relative precision.
    pub fn quantile(&self, alpha: f64) -> Result<f64> {
        if !(alpha > 0.0 && alpha < 1.0) {
            return Err(Error::domain(format!("alpha = {alpha} must lie in (0, 1)")));
        }
        if let [c] = self.components.as_slice() {
            return Ok(c.mean + c.sd * normal_quantile(alpha));
        }
        let upper = alpha > 0.5;
        let target = if upper { 1.0 - alpha } else { alpha };
        // g is increasing in x and vanishes at the quantile
        let g = |x: f64| {
            if upper {
                target - self.sf(x)
            } else {
                self.cdf(x) - target
            }
        };
        let s = self.max_sd();
        let (lo_mean, hi_mean) = self
            .components
            .iter()
            .fold((f64::INFINITY, f64::NEG_INFINITY), |(a, b), c| {
                (a.min(c.mean), b.max(c.mean))
            });
        let mut lo = lo_mean - 10.0 * s;
        let mut hi = hi_mean + 10.0 * s;
        for _ in 0..64 {
            if g(lo) <= 0.0 {
                break;
            }
            lo -= 10.0 * s;
        }
        for _ in 0..64 {
            if g(hi) >= 0.0 {
                break;
            }
            hi += 10.0 * s;
        }
        let mut x = 0.5 * (lo + hi);
        for _ in 0..300 {
            let gx = g(x);
            if gx == 0.0 {
                return Ok(x);
            }
            if gx < 0.0 {
                lo = x;
            } else {
                hi = x;
            }
            let d = self.pdf(x);
            let newton = x - gx / d;
            let next = if d > 0.0 && newton > lo && newton < hi {
                newton
            } else {
                0.5 * (lo + hi)
            };
            let step = (next - x).abs();
            x = next;
            if step < 1e-13 || hi - lo < 1e-12 {
                return Ok(x);
            }
        }
        Err(Error::Numeric {
            message: format!("mixture quantile at alpha = {alpha} did not converge"),
            achieved: hi - lo,
            partial: Some(x),
        })
    }
}

/// Law at time `t` of the Ornstein–Uhlenbeck limit started from `f₀`.
#[derive(Debug, Clone, PartialEq)]
pub struct OULimitLaw {
    f0: InitialDatum,
    energy: f64,
    t: f64,
}

impl OULimitLaw {
    /// Uses the exact energy of `f0`.
    pub fn new(f0: InitialDatum, t: f64) -> Result<Self> {
        let energy = f0.energy();
        Self::with_energy(f0, energy, t)
    }

    pub fn with_energy(f0: InitialDatum, energy: f64, t: f64) -> Result<Self> {
        f0.validate()?;
        if !(energy > 0.0 && energy.is_finite()) {
            return Err(Error::domain(format!("energy = {energy} must be positive")));
        }
        if !(t >= 0.0 && t.is_finite()) {
            return Err(Error::domain(format!("t = {t} must be non-negative")));
        }
        Ok(OULimitLaw { f0, energy, t })
    }

    pub fn time(&self) -> f64 {
        self.t
    }

    pub fn energy(&self) -> f64 {
        self.energy
    }

    fn decay(&self) -> f64 {
        (-0.5 * self.t).exp()
    }

    /// Standard deviation of the Gaussian noise accumulated since time 0.
    fn noise_sd(&self) -> f64 {
        (-self.energy * (-self.t).exp_m1()).sqrt()
    }

    /// Gaussian components, or `None` when the law is still discrete
    /// (`t = 0` with a discrete `f₀`).
    pub fn mixture(&self) -> Option<GaussianMixture> {
        let a = self.decay();
        let s = self.noise_sd();
        let comps = match &self.f0 {
            InitialDatum::Gaussian { mean, variance } => {
                let sd = (variance * a * a + s * s).sqrt();
                if sd == 0.0 {
                    return None;
                }
                vec![GaussianComponent {
                    weight: 1.0,
                    mean: mean * a,
                    sd,
                }]
            }
            other => {
                if s == 0.0 {
                    return None;
                }
                let (points, weights) = other.atoms()?;
                points
                    .iter()
                    .zip(&weights)
                    .map(|(p, w)| GaussianComponent {
                        weight: *w,
                        mean: p * a,
                        sd: s,
                    })
                    .collect()
            }
        };
        GaussianMixture::new(comps).ok()
    }

    pub fn cdf(&self, x: f64) -> f64 {
        match self.mixture() {
            Some(m) => m.cdf(x),
            None => match self.f0.atoms() {
                Some((points, weights)) => points
                    .iter()
                    .zip(&weights)
                    .filter(|(p, _)| **p <= x)
                    .map(|(_, w)| w)
                    .sum(),
                // degenerate Gaussian f0 (variance 0) at t = 0
                None => match &self.f0 {
                    InitialDatum::Gaussian { mean, .. } if x >= *mean => 1.0,
                    _ => 0.0,
                },
            },
        }
    }

    pub fn sample<R: Rng + ?Sized>(&self, rng: &mut R) -> f64 {
        let y0 = self.f0.sample(rng);
        let z: f64 = rng.sample(StandardNormal);
        y0 * self.decay() + self.noise_sd() * z
    }

    /// The law's quantile function.
    pub fn quantile_function(&self) -> Result<QuantileFunction> {
        match self.mixture() {
            Some(m) => Ok(QuantileFunction::gaussian_mixture(m)),
            None => match &self.f0 {
                InitialDatum::Gaussian { mean, .. } => {
                    QuantileFunction::discrete(&[*mean], &[1.0])
                }
                other => {
                    let (points, weights) = other.atoms().unwrap_or_default();
                    QuantileFunction::discrete(&points, &weights)
                }
            },
        }
    }
}

/// `F⁻¹(alpha)` of the limit law.
pub fn ou_limit_quantile(law: &OULimitLaw, alpha: f64) -> Result<f64> {
    if !(alpha > 0.0 && alpha < 1.0) {
        return Err(Error::domain(format!("alpha = {alpha} must lie in (0, 1)")));
    }
    match law.mixture() {
        Some(m) => m.quantile(alpha),
        None => Ok(law.quantile_function()?.eval(alpha)),
    }
}

/// Fourth moment of the Kac solution at time `t`.
pub fn m4_trajectory(f0: &InitialDatum, m4_decay_c: f64, t: f64) -> f64 {
    let e = f0.energy();
    let fixed = 3.0 * e * e;
    (f0.moment(4) - fixed) * (-m4_decay_c * t).exp() + fixed
}

/// `(1/n) Σ v_i^p` for each requested order.
pub fn empirical_moments(sample: &[f64], orders: &[u32]) -> Result<BTreeMap<u32, f64>> {
    if sample.is_empty() {
        return Err(Error::domain("moments of an empty sample"));
    }
    let n = sample.len() as f64;
    let mut sums = vec![0.0; orders.len()];
    for &v in sample {
        let v2 = v * v;
        for (acc, &p) in sums.iter_mut().zip(orders) {
            *acc += match p {
                2 => v2,
                4 => v2 * v2,
                _ => v.powi(p as i32),
            };
        }
    }
    Ok(orders.iter().zip(sums).map(|(&p, s)| (p, s / n)).collect())
}
