//! Angular cross sections, their coefficient integrals, and exact sampling of
//! collision angles.
//!
//! Two kernel families are supported:
//!
//! - [`CrossSection::PowerLaw`]: `β(θ) = |θ|^(-1-ν)` on `[-π, π] \ {0}`, a
//!   non-integrable kernel whose small angles are either discarded or
//!   replaced by a diffusion term, depending on the simulation scheme.
//! - [`CrossSection::UniformGrazing`]: `β_ε(θ) = 3 / (2ε³)` on `|θ| < ε`, a
//!   finite kernel with `∫θ²β_ε = 1` and `∫θ⁴β_ε = 3ε²/5`, used to observe
//!   the grazing-collision limit.
//!
//! All one-sided integrals go through [`integrate_kernel`], which splits
//! `(lo, hi]` into panels `[h/2^(k+1), h/2^k]` with a 15-point
//! Gauss–Legendre rule on each. When `lo = 0` the panels stop at
//! [`PANEL_CUTOFF`] and the remainder is closed with a geometric series fitted
//! to the last two panels. This is exact for power-law integrands and the
//! relative correction near the cutoff is `O(θ²)`.

use std::f64::consts::PI;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::quadrature::gauss15;

/// Smallest panel edge used before closing the singular tail analytically.
pub const PANEL_CUTOFF: f64 = 1e-7;

/// Relative tolerance used when building [`CollisionCoefficients`].
pub const COEFFICIENT_TOL: f64 = 1e-11;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "kebab-case")]
pub enum CrossSection {
    PowerLaw { nu: f64 },
    UniformGrazing,
}

impl CrossSection {
    pub fn power_law(nu: f64) -> Result<Self> {
        if !(nu > 0.0 && nu < 2.0) {
            return Err(Error::domain(format!("nu = {nu} must lie in (0, 2)")));
        }
        Ok(CrossSection::PowerLaw { nu })
    }

    /// `β(θ)`. For the grazing family `eps` selects the member; the power law
    /// ignores it.
    pub fn density(&self, theta: f64, eps: f64) -> f64 {
        let a = theta.abs();
        match *self {
            CrossSection::PowerLaw { nu } => {
                if a == 0.0 || a > PI {
                    0.0
                } else {
                    a.powf(-1.0 - nu)
                }
            }
            CrossSection::UniformGrazing => {
                if a < eps {
                    1.5 / (eps * eps * eps)
                } else {
                    0.0
                }
            }
        }
    }

    pub fn check_eps(&self, eps: f64) -> Result<()> {
        if !(eps > 0.0 && eps <= PI) {
            return Err(Error::domain(format!("eps = {eps} must lie in (0, pi]")));
        }
        if let CrossSection::PowerLaw { nu } = *self {
            if !(nu > 0.0 && nu < 2.0) {
                return Err(Error::domain(format!("nu = {nu} must lie in (0, 2)")));
            }
        }
        Ok(())
    }

    /// Closed-form total jump rate per particle.
    pub fn jump_rate(&self, eps: f64) -> Result<f64> {
        self.check_eps(eps)?;
        Ok(match *self {
            CrossSection::PowerLaw { nu } => 2.0 * (eps.powf(-nu) - PI.powf(-nu)) / nu,
            CrossSection::UniformGrazing => 3.0 / (eps * eps),
        })
    }
}

/// Derived scalars of a kernel truncated at `eps`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct CollisionCoefficients {
    pub eps: f64,
    /// `∫_{|θ|≥ε} β`: jump rate per particle.
    pub lambda_eps: f64,
    /// `∫_{|θ|<ε} (1 - cos θ) β`: drift of the replacement diffusion.
    pub b_eps: f64,
    /// `∫_{|θ|≥ε} sin²θ β`.
    pub d_eps: f64,
    /// `2 b_eps + d_eps`.
    pub c_eps: f64,
    /// `∫_{|θ|<ε} (1 - cos θ)² β`.
    pub gamma_eps: f64,
    /// `∫ (1 - cos⁴θ - sin⁴θ) β` over the whole kernel; the fourth-moment
    /// relaxation rate.
    pub m4_decay_c: f64,
}

/// Builds all coefficients for `cs` truncated at `eps`.
///
/// For the grazing family the whole (finite) kernel is simulated as jumps,
/// so the small-angle region is empty: `b_eps = gamma_eps = 0` and
/// `lambda_eps = 3/ε²`.
pub fn compute_coefficients(cs: &CrossSection, eps: f64) -> Result<CollisionCoefficients> {
    cs.check_eps(eps)?;
    let tol = COEFFICIENT_TOL;
    let sin2 = |t: f64| {
        let s = t.sin();
        s * s
    };
    // 1 - cos θ without cancellation.
    let one_minus_cos = |t: f64| {
        let s = (0.5 * t).sin();
        2.0 * s * s
    };
    let m4_integrand = |t: f64| 0.5 * sin2(2.0 * t);

    let coeffs = match *cs {
        CrossSection::PowerLaw { .. } => {
            let lambda_eps = cs.jump_rate(eps)?;
            let b_eps = 2.0 * integrate_kernel(cs, eps, one_minus_cos, 0.0, eps, tol)?;
            let gamma_eps = 2.0
                * integrate_kernel(
                    cs,
                    eps,
                    |t| {
                        let v = one_minus_cos(t);
                        v * v
                    },
                    0.0,
                    eps,
                    tol,
                )?;
            let d_eps = if eps < PI {
                2.0 * integrate_kernel(cs, eps, sin2, eps, PI, tol)?
            } else {
                0.0
            };
            let m4_decay_c = 2.0 * integrate_kernel(cs, eps, m4_integrand, 0.0, PI, tol)?;
            CollisionCoefficients {
                eps,
                lambda_eps,
                b_eps,
                d_eps,
                c_eps: 2.0 * b_eps + d_eps,
                gamma_eps,
                m4_decay_c,
            }
        }
        CrossSection::UniformGrazing => {
            let d_eps = 2.0 * integrate_kernel(cs, eps, sin2, 0.0, eps, tol)?;
            let m4_decay_c = 2.0 * integrate_kernel(cs, eps, m4_integrand, 0.0, eps, tol)?;
            CollisionCoefficients {
                eps,
                lambda_eps: cs.jump_rate(eps)?,
                b_eps: 0.0,
                d_eps,
                c_eps: d_eps,
                gamma_eps: 0.0,
                m4_decay_c,
            }
        }
    };
    Ok(coeffs)
}

/// One-sided integral `∫_lo^hi integrand(θ) β(θ) dθ` with `0 ≤ lo < hi ≤ π`.
///
/// `tol` is the relative tolerance demanded of the singular-tail closure
/// when `lo = 0`; away from the origin the panel rule is accurate to machine
/// precision.
pub fn integrate_kernel<F>(
    cs: &CrossSection,
    eps: f64,
    integrand: F,
    lo: f64,
    hi: f64,
    tol: f64,
) -> Result<f64>
where
    F: Fn(f64) -> f64,
{
    if !(lo >= 0.0 && lo < hi && hi <= PI) {
        return Err(Error::domain(format!(
            "integration bounds [{lo}, {hi}] must satisfy 0 <= lo < hi <= pi"
        )));
    }
    let hi = match cs {
        CrossSection::UniformGrazing => {
            cs.check_eps(eps)?;
            if lo >= eps {
                return Ok(0.0);
            }
            hi.min(eps)
        }
        CrossSection::PowerLaw { .. } => hi,
    };
    let mut f = |t: f64| integrand(t) * cs.density(t, eps);
    geometric_panels(&mut f, lo, hi, tol)
}

fn geometric_panels<F: FnMut(f64) -> f64>(f: &mut F, lo: f64, hi: f64, tol: f64) -> Result<f64> {
    let mut total = 0.0;
    let mut upper = hi;
    let mut last = f64::NAN;
    let mut last_ratio = f64::NAN;
    loop {
        let lower = (0.5 * upper).max(lo);
        let piece = gauss15(f, lower, upper);
        total += piece;
        if lo > 0.0 && lower <= lo {
            return Ok(total);
        }
        if !piece.is_finite() {
            return Err(Error::Numeric {
                message: format!("non-finite integrand on [{lower}, {upper}]"),
                achieved: f64::INFINITY,
                partial: Some(total),
            });
        }
        let ratio = piece / last;
        if lo == 0.0 && upper <= PANEL_CUTOFF {
            if piece == 0.0 {
                return Ok(total);
            }
            if !(ratio > 0.0 && ratio < 1.0) {
                return Err(Error::Numeric {
                    message: format!(
                        "integrand does not decay near the origin (panel ratio {ratio})"
                    ),
                    achieved: f64::INFINITY,
                    partial: Some(total),
                });
            }
            let tail = piece * ratio / (1.0 - ratio);
            let alt = if last_ratio > 0.0 && last_ratio < 1.0 {
                piece * last_ratio / (1.0 - last_ratio)
            } else {
                tail
            };
            let result = total + tail;
            let achieved = (tail - alt).abs() / result.abs().max(f64::MIN_POSITIVE);
            if achieved > tol {
                return Err(Error::Numeric {
                    message: "singular tail closure did not settle".into(),
                    achieved,
                    partial: Some(result),
                });
            }
            return Ok(result);
        }
        last_ratio = ratio;
        last = piece;
        upper = lower;
    }
}

/// Inverse-CDF sampler for the jump angle, with the kernel constants
/// precomputed.
#[derive(Debug, Clone, Copy)]
pub struct ThetaSampler {
    kind: SamplerKind,
}

#[derive(Debug, Clone, Copy)]
enum SamplerKind {
    PowerLaw {
        inv_nu: f64,
        eps: f64,
        eps_pow: f64,
        span: f64,
    },
    Uniform {
        eps: f64,
    },
}

impl ThetaSampler {
    pub fn new(cs: &CrossSection, eps: f64) -> Result<Self> {
        cs.check_eps(eps)?;
        let kind = match *cs {
            CrossSection::PowerLaw { nu } => {
                if eps >= PI {
                    return Err(Error::domain("power-law angle sampling needs eps < pi"));
                }
                let eps_pow = eps.powf(-nu);
                SamplerKind::PowerLaw {
                    inv_nu: 1.0 / nu,
                    eps,
                    eps_pow,
                    span: eps_pow - PI.powf(-nu),
                }
            }
            CrossSection::UniformGrazing => SamplerKind::Uniform { eps },
        };
        Ok(ThetaSampler { kind })
    }

    /// Maps `u ∈ [0, 1]` and a sign to an angle.
    #[inline]
    pub fn sample(&self, u: f64, negative: bool) -> f64 {
        let magnitude = match self.kind {
            SamplerKind::PowerLaw {
                inv_nu,
                eps,
                eps_pow,
                span,
            } => (eps_pow - u * span).powf(-inv_nu).clamp(eps, PI),
            SamplerKind::Uniform { eps } => eps * u,
        };
        if negative {
            -magnitude
        } else {
            magnitude
        }
    }
}

/// Angle with law `β_ε / ‖β_ε‖₁` from a uniform `u` and a sign.
///
/// Power law: `|Θ| = (ε^-ν - u (ε^-ν - π^-ν))^(-1/ν)` on `[ε, π]`.
/// Grazing: `|Θ| = ε u` on `[0, ε)`.
pub fn sample_theta(cs: &CrossSection, eps: f64, u: f64, negative: bool) -> Result<f64> {
    if !(0.0..=1.0).contains(&u) {
        return Err(Error::domain(format!("u = {u} must lie in [0, 1]")));
    }
    Ok(ThetaSampler::new(cs, eps)?.sample(u, negative))
}

#[cfg(test)]
mod tests {
    use super::*;

    /// Composite Simpson on `θ = s²`, which makes the power-law integrands
    /// smooth at the origin. Independent of the panel scheme.
    fn simpson_sqrt_sub(g: impl Fn(f64) -> f64, nu: f64, lo: f64, hi: f64, m: usize) -> f64 {
        let (a, b) = (lo.sqrt(), hi.sqrt());
        let h = (b - a) / m as f64;
        let f = |s: f64| {
            if s == 0.0 {
                return 0.0;
            }
            let t = s * s;
            g(t) * t.powf(-1.0 - nu) * 2.0 * s
        };
        let mut acc = f(a) + f(b);
        for k in 1..m {
            let w = if k % 2 == 1 { 4.0 } else { 2.0 };
            acc += w * f(a + k as f64 * h);
        }
        acc * h / 3.0
    }

    #[test]
    fn power_law_rate_at_pi_is_zero() {
        let cs = CrossSection::power_law(0.5).unwrap();
        let c = compute_coefficients(&cs, PI).unwrap();
        assert_eq!(c.lambda_eps, 0.0);
        assert_eq!(c.d_eps, 0.0);
    }

    #[test]
    fn power_law_rate_example() {
        let cs = CrossSection::power_law(0.5).unwrap();
        let c = compute_coefficients(&cs, 0.1).unwrap();
        // Oracle: Simpson on the substituted integral over [0.1, pi], doubled.
        let oracle = 2.0 * simpson_sqrt_sub(|_| 1.0, 0.5, 0.1, PI, 20_000);
        assert!((oracle - 10.392_352_4).abs() < 1e-6, "oracle {oracle}");
        assert!((c.lambda_eps - oracle).abs() < 1e-9 * oracle);
    }

    #[test]
    fn power_law_drift_example() {
        let cs = CrossSection::power_law(0.5).unwrap();
        let c = compute_coefficients(&cs, 0.1).unwrap();
        let oracle = 2.0 * simpson_sqrt_sub(|t| 1.0 - t.cos(), 0.5, 0.0, 0.1, 20_000);
        assert!((c.b_eps - oracle).abs() < 1e-10 * oracle, "{} vs {oracle}", c.b_eps);
        // leading order eps^(2-nu)/(2-nu)
        let lead = 0.1f64.powf(1.5) / 1.5;
        assert!((c.b_eps - lead).abs() < 0.01 * lead);
        assert!((c.b_eps - 0.02108).abs() < 5e-5);
    }

    #[test]
    fn coefficient_invariants_on_grid() {
        for &nu in &[0.25, 0.5, 1.0, 1.5, 1.9] {
            let cs = CrossSection::power_law(nu).unwrap();
            let mut prev: Option<CollisionCoefficients> = None;
            for &eps in &[0.01, 0.1, 0.5] {
                let c = compute_coefficients(&cs, eps).unwrap();
                assert_eq!(c.c_eps, 2.0 * c.b_eps + c.d_eps);
                assert!(c.gamma_eps <= c.b_eps * eps * eps / 2.0);
                assert!(c.c_eps >= c.d_eps);
                let theta2 =
                    2.0 * integrate_kernel(&cs, eps, |t| t * t, 0.0, eps, 1e-11).unwrap();
                assert!(c.b_eps >= 0.25 * theta2);
                let quad = 2.0 * integrate_kernel(&cs, eps, |_| 1.0, eps, PI, 1e-11).unwrap();
                assert!((quad - c.lambda_eps).abs() <= 1e-9 * c.lambda_eps);
                if let Some(p) = prev {
                    assert!(c.lambda_eps < p.lambda_eps);
                    assert!(c.b_eps > p.b_eps);
                }
                prev = Some(c);
            }
        }
    }

    #[test]
    fn m4_rate_two_integrands_agree() {
        for &nu in &[0.25, 0.5] {
            let cs = CrossSection::power_law(nu).unwrap();
            let c = compute_coefficients(&cs, 0.1).unwrap();
            let direct = 2.0
                * integrate_kernel(
                    &cs,
                    0.1,
                    |t| 1.0 - t.cos().powi(4) - t.sin().powi(4),
                    0.0,
                    PI,
                    1e-9,
                )
                .unwrap();
            assert!(
                (direct - c.m4_decay_c).abs() <= 1e-10 * c.m4_decay_c,
                "nu {nu}: {direct} vs {}",
                c.m4_decay_c
            );
        }
    }

    #[test]
    fn integrate_kernel_examples() {
        let cs = CrossSection::power_law(1.0).unwrap();
        assert_eq!(integrate_kernel(&cs, 0.1, |_| 0.0, 0.0, PI, 1e-10).unwrap(), 0.0);
        let v = integrate_kernel(&cs, 0.1, |t| t * t, 0.0, PI, 1e-10).unwrap();
        assert!((v - PI).abs() < 1e-12);
        let cs = CrossSection::power_law(0.5).unwrap();
        let v = integrate_kernel(&cs, 0.1, |_| 1.0, 0.1, PI, 1e-10).unwrap();
        assert!((v - 5.196_176_2).abs() < 1e-6);
    }

    #[test]
    fn integrate_kernel_rejects_bad_bounds_and_divergence() {
        let cs = CrossSection::power_law(0.5).unwrap();
        assert!(integrate_kernel(&cs, 0.1, |_| 1.0, 1.0, 0.5, 1e-10).is_err());
        assert!(integrate_kernel(&cs, 0.1, |_| 1.0, 0.0, 4.0, 1e-10).is_err());
        let err = integrate_kernel(&cs, 0.1, |_| 1.0, 0.0, 1.0, 1e-10).unwrap_err();
        assert!(matches!(err, Error::Numeric { .. }));
    }

    #[test]
    fn grazing_moments() {
        let cs = CrossSection::UniformGrazing;
        for &eps in &[0.05, 0.1, 0.2, 0.4, 0.9] {
            let m2 = 2.0 * integrate_kernel(&cs, eps, |t| t * t, 0.0, PI, 1e-12).unwrap();
            let m4 = 2.0 * integrate_kernel(&cs, eps, |t| t.powi(4), 0.0, PI, 1e-12).unwrap();
            assert!((m2 - 1.0).abs() < 1e-12);
            assert!((m4 - 0.6 * eps * eps).abs() < 1e-12 * m4.max(1.0));
            let mass = 2.0 * integrate_kernel(&cs, eps, |_| 1.0, 0.0, PI, 1e-12).unwrap();
            assert!((mass - 3.0 / (eps * eps)).abs() < 1e-10 * mass);
        }
        let c = compute_coefficients(&cs, 0.1).unwrap();
        assert!((c.lambda_eps - 300.0).abs() < 1e-9);
        assert_eq!(c.b_eps, 0.0);
        assert_eq!(c.c_eps, c.d_eps);
        let m4 = 2.0 * integrate_kernel(&cs, 0.2, |t| t.powi(4), 0.0, PI, 1e-12).unwrap();
        assert!((m4 - 0.024).abs() < 1e-14);
    }

    #[test]
    fn kernels_are_even() {
        let pl = CrossSection::power_law(1.3).unwrap();
        for k in 1..200 {
            let t = k as f64 * PI / 200.0;
            assert_eq!(pl.density(t, 0.1), pl.density(-t, 0.1));
            let g = CrossSection::UniformGrazing;
            assert_eq!(g.density(t * 0.01, 0.1), g.density(-t * 0.01, 0.1));
        }
    }

    #[test]
    fn sample_theta_boundaries_and_median() {
        let cs = CrossSection::power_law(0.5).unwrap();
        assert!((sample_theta(&cs, 0.1, 0.0, false).unwrap() - 0.1).abs() < 1e-15);
        assert!((sample_theta(&cs, 0.1, 1.0, false).unwrap() - PI).abs() < 1e-12);
        assert!(sample_theta(&cs, 0.1, 0.3, true).unwrap() < 0.0);

        // Oracle: bisection on the normalized CDF.
        let cdf = |x: f64| (0.1f64.powf(-0.5) - x.powf(-0.5)) / (0.1f64.powf(-0.5) - PI.powf(-0.5));
        let (mut lo, mut hi) = (0.1, PI);
        for _ in 0..200 {
            let mid = 0.5 * (lo + hi);
            if cdf(mid) < 0.5 {
                lo = mid;
            } else {
                hi = mid;
            }
        }
        let got = sample_theta(&cs, 0.1, 0.5, false).unwrap();
        assert!((got - lo).abs() < 1e-13);
        // closed form: 1 / (0.1^-½ − ½(0.1^-½ − π^-½))² = 0.2880483
        assert!((got - 0.288_048_3).abs() < 1e-7);

        let g = CrossSection::UniformGrazing;
        assert_eq!(sample_theta(&g, 0.2, 0.5, true).unwrap(), -0.1);
        assert!(sample_theta(&cs, PI, 0.5, false).is_err());
        assert!(sample_theta(&cs, 0.1, 1.5, false).is_err());
    }

    #[test]
    fn rejects_bad_parameters() {
        assert!(CrossSection::power_law(2.5).is_err());
        assert!(CrossSection::power_law(0.0).is_err());
        let cs = CrossSection::power_law(0.5).unwrap();
        assert!(compute_coefficients(&cs, 0.0).is_err());
        assert!(compute_coefficients(&cs, 4.0).is_err());
    }
}
