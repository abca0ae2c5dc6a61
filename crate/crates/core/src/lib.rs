//! Monte Carlo simulation of the spatially homogeneous Kac equation without
//! angular cutoff.
//!
//! Small-angle collisions are replaced by an Ornstein–Uhlenbeck drift and
//! diffusion, the remaining large-angle collisions are simulated exactly by
//! an event-driven particle system, and the results are compared against
//! analytic reference laws with one-dimensional Wasserstein distances.
//!
//! Module map:
//!
//! - [`cross_section`]: angular kernels, coefficient integrals, angle sampling.
//! - [`engine`]: the particle ensemble and its three collision schemes.
//! - [`limit_laws`]: the Fokker–Planck limit law and exact moment trajectories.
//! - [`metrics`]: Wasserstein distances through quantile functions.
//! - [`experiments`]: scenario runners and rate fits.
//! - [`io`]: configuration parsing and report serialization.

pub mod cross_section;
pub mod engine;
pub mod error;
pub mod experiments;
pub mod io;
pub mod limit_laws;
pub mod metrics;
mod quadrature;

pub use cross_section::{compute_coefficients, sample_theta, CollisionCoefficients, CrossSection};
pub use engine::{InitialDatum, ParticleEnsemble, Scheme};
pub use error::{Error, Result};
pub use experiments::{RunReport, Scenario, ScenarioConfig};
pub use metrics::{EmpiricalMeasure, QuantileFunction};
