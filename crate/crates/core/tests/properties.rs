use std::f64::consts::PI;

use proptest::prelude::*;

use kac::engine::InitialDatum;
use kac::experiments::{Scenario, ScenarioConfig};
use kac::io::{parse_config, render_config};
use kac::limit_laws::{GaussianComponent, GaussianMixture, OULimitLaw};
use kac::metrics::{wasserstein_empirical, EmpiricalMeasure, QuantileFunction};
use kac::{sample_theta, CrossSection, ParticleEnsemble, Scheme};

fn emp(v: &[f64]) -> EmpiricalMeasure {
    EmpiricalMeasure::from_slice(v).unwrap()
}

fn sample(len: std::ops::Range<usize>) -> impl Strategy<Value = Vec<f64>> {
    prop::collection::vec(-5.0..5.0f64, len)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(256))]

    #[test]
    fn ou_two_steps_equal_one_combined_step(
        nu in 0.2..1.9f64,
        eps in 0.02..1.0f64,
        s in 0.0..2.0f64,
        t in 0.0..2.0f64,
        g1 in -4.0..4.0f64,
        g2 in -4.0..4.0f64,
        seed in any::<u64>(),
    ) {
        let cs = CrossSection::power_law(nu).unwrap();
        let f0 = InitialDatum::Gaussian { mean: 0.3, variance: 1.7 };
        let mut two = ParticleEnsemble::new(&f0, 4, Scheme::Diffusion, cs, eps, seed).unwrap();
        let mut one = two.clone();
        let b = two.coefficients().b_eps;
        let e = two.energy();
        let sd = |h: f64| (-e * (-2.0 * b * h).exp_m1()).sqrt();
        two.ou_refresh(0, s, g1).unwrap();
        let v2 = two.ou_refresh(0, s + t, g2).unwrap();
        let total = sd(s + t);
        let g = if total > 0.0 { ((-b * t).exp() * sd(s) * g1 + sd(t) * g2) / total } else { 0.0 };
        let v1 = one.ou_refresh(0, s + t, g).unwrap();
        prop_assert!((v1 - v2).abs() <= 1e-12 * (1.0 + v1.abs()), "{v1} vs {v2}");
    }

    #[test]
    fn sample_theta_inverts_the_angular_cdf(
        nu in 0.05..1.95f64,
        eps in 1e-3..3.0f64,
        u in 0.0..=1.0f64,
        negative in any::<bool>(),
    ) {
        let cs = CrossSection::power_law(nu).unwrap();
        let theta = sample_theta(&cs, eps, u, negative).unwrap();
        prop_assert_eq!(theta < 0.0, negative);
        let x = theta.abs();
        prop_assert!(x >= eps * (1.0 - 1e-15) && x <= PI * (1.0 + 1e-15));
        let cdf = (eps.powf(-nu) - x.powf(-nu)) / (eps.powf(-nu) - PI.powf(-nu));
        prop_assert!((cdf - u).abs() <= 1e-12, "F(theta) = {cdf}, u = {u}");
    }

    #[test]
    fn mixture_quantile_inverts_the_cdf(
        a in -2.0..2.0f64,
        sd in 0.05..3.0f64,
        w in 0.05..0.95f64,
        log_alpha in -25.0..-0.7f64,
        upper in any::<bool>(),
    ) {
        let m = GaussianMixture::new(vec![
            GaussianComponent { weight: w, mean: -a, sd },
            GaussianComponent { weight: 1.0 - w, mean: a, sd: 0.5 * sd },
        ]).unwrap();
        let tail = log_alpha.exp();
        let alpha = if upper { 1.0 - tail } else { tail };
        // far upper quantiles are not representable as 1 − tail
        prop_assume!(!upper || tail > 1e-15);
        let x = m.quantile(alpha).unwrap();
        let got = if upper { m.sf(x) } else { m.cdf(x) };
        let want = if upper { 1.0 - alpha } else { alpha };
        prop_assert!((got - want).abs() <= 1e-8 * want, "alpha {alpha}: {got} vs {want}");
    }

    #[test]
    fn ou_limit_quantile_inverts_its_cdf(t in 0.01..5.0f64, alpha in 1e-6..0.999_999f64) {
        let law = OULimitLaw::new(InitialDatum::Rademacher, t).unwrap();
        let q = law.quantile_function().unwrap();
        let x = q.eval(alpha);
        let tail = alpha.min(1.0 - alpha);
        prop_assert!((law.cdf(x) - alpha).abs() <= 1e-8 * tail + 1e-15);
    }

    #[test]
    fn empirical_quantile_is_the_generalized_inverse(x in sample(1..40), alpha in 1e-9..1.0f64) {
        let m = emp(&x);
        let q = m.quantile(alpha);
        let n = m.len() as f64;
        let below = m.sorted_values().iter().filter(|&&v| v < q).count() as f64 / n;
        let at_most = m.sorted_values().iter().filter(|&&v| v <= q).count() as f64 / n;
        // F(q−) < alpha <= F(q)
        prop_assert!(below < alpha && alpha <= at_most + 1e-15);
        let f = m.quantile_function();
        prop_assert_eq!(f.eval(alpha), q);
    }

    #[test]
    fn discrete_quantile_is_the_generalized_inverse(
        atoms in prop::collection::vec((-3.0..3.0f64, 0.01..1.0f64), 1..6),
        alpha in 1e-9..1.0f64,
    ) {
        let total: f64 = atoms.iter().map(|a| a.1).sum();
        let points: Vec<f64> = atoms.iter().map(|a| a.0).collect();
        let weights: Vec<f64> = atoms.iter().map(|a| a.1 / total).collect();
        let q = QuantileFunction::discrete(&points, &weights).unwrap().eval(alpha);
        let cdf = |x: f64| points.iter().zip(&weights).filter(|(p, _)| **p <= x).map(|(_, w)| w).sum::<f64>();
        let left = points.iter().zip(&weights).filter(|(p, _)| **p < q).map(|(_, w)| w).sum::<f64>();
        prop_assert!(cdf(q) >= alpha - 1e-12 && left < alpha + 1e-12);
    }

    #[test]
    fn wasserstein_is_a_metric(
        x in sample(1..30),
        y in sample(1..30),
        z in sample(1..30),
        p in prop::sample::select(vec![1.0, 1.5, 2.0, 3.0]),
    ) {
        let (x, y, z) = (emp(&x), emp(&y), emp(&z));
        let w = |a: &EmpiricalMeasure, b: &EmpiricalMeasure| wasserstein_empirical(a, b, p).unwrap();
        prop_assert_eq!(w(&x, &x), 0.0);
        prop_assert_eq!(w(&x, &y), w(&y, &x));
        prop_assert!(w(&x, &y) >= 0.0);
        prop_assert!(w(&x, &z) <= w(&x, &y) + w(&y, &z) + 1e-12);
    }

    #[test]
    fn wasserstein_orders_are_monotone(x in sample(1..30), y in sample(1..30)) {
        let (x, y) = (emp(&x), emp(&y));
        let w1 = wasserstein_empirical(&x, &y, 1.0).unwrap();
        let w15 = wasserstein_empirical(&x, &y, 1.5).unwrap();
        let w2 = wasserstein_empirical(&x, &y, 2.0).unwrap();
        prop_assert!(w1 <= w15 * (1.0 + 1e-12) + 1e-15);
        prop_assert!(w15 <= w2 * (1.0 + 1e-12) + 1e-15);
    }

    #[test]
    fn wasserstein_scales_and_is_translation_invariant(
        x in sample(1..30),
        y in sample(1..30),
        a in -4.0..4.0f64,
        c in -10.0..10.0f64,
        p in prop::sample::select(vec![1.0, 1.5, 2.0]),
    ) {
        let base = wasserstein_empirical(&emp(&x), &emp(&y), p).unwrap();
        let scale = |v: &[f64]| v.iter().map(|u| a * u).collect::<Vec<_>>();
        let shift = |v: &[f64]| v.iter().map(|u| u + c).collect::<Vec<_>>();
        let scaled = wasserstein_empirical(&emp(&scale(&x)), &emp(&scale(&y)), p).unwrap();
        prop_assert!((scaled - a.abs() * base).abs() <= 1e-12 * (1.0 + a.abs() * base));
        let shifted = wasserstein_empirical(&emp(&shift(&x)), &emp(&shift(&y)), p).unwrap();
        prop_assert!((shifted - base).abs() <= 1e-11 * (1.0 + base));
    }
}

fn initial_datum() -> impl Strategy<Value = InitialDatum> {
    prop_oneof![
        Just(InitialDatum::Rademacher),
        (-2.0..2.0f64, 0.01..4.0f64).prop_map(|(mean, variance)| InitialDatum::Gaussian { mean, variance }),
        (prop::collection::vec(-3.0..3.0f64, 2), 0.0..1.0f64).prop_map(|(points, w)| {
            InitialDatum::DiscreteAtoms {
                points,
                weights: vec![w, 1.0 - w],
            }
        }),
    ]
}

prop_compose! {
    fn scenario_config()(
        scenario in prop::sample::select(Scenario::ALL.to_vec()),
        nu in 0.01..1.99f64,
        grazing in any::<bool>(),
        eps_list in prop::collection::vec(1e-3..3.1f64, 1..4),
        n in 2usize..1_000_000,
        ref_replicas in 1usize..20,
        n_ref_extra in 0usize..1_000_000,
        eps_ref in 1e-3..3.0f64,
        t_final in 1e-3..10.0f64,
        fractions in prop::collection::vec(0.0..=1.0f64, 1..5),
        replicas in 1usize..200,
        base_seed in 0..=i64::MAX as u64,
        f0 in initial_datum(),
        truncation in any::<bool>(),
        n_list in prop::collection::vec(2usize..100_000, 1..4),
        h_list in prop::collection::vec(1e-3..2.0f64, 1..4),
        gamma in 1.0..2.5f64,
        floor_samples in 1usize..10,
        flags in any::<(bool, bool)>(),
        bins in 1usize..500,
    ) -> ScenarioConfig {
        let mut cfg = ScenarioConfig::defaults(scenario);
        cfg.scheme = match scenario {
            Scenario::GrazingRate => Scheme::GrazingFinite,
            Scenario::Simulate if grazing => Scheme::GrazingFinite,
            _ if truncation => Scheme::TruncationOnly,
            _ => Scheme::Diffusion,
        };
        cfg.nu = (cfg.needs_nu() || (cfg.scheme != Scheme::GrazingFinite && grazing)).then_some(nu);
        cfg.eps_list = eps_list;
        cfg.n = n;
        cfg.ref_replicas = ref_replicas;
        cfg.n_ref = 2 * ref_replicas + n_ref_extra;
        cfg.eps_ref = eps_ref;
        cfg.t_final = t_final;
        cfg.snapshot_times = fractions.iter().map(|f| f * t_final).collect();
        cfg.replicas = replicas;
        cfg.base_seed = base_seed;
        cfg.f0 = f0;
        cfg.n_list = n_list;
        cfg.h_list = h_list;
        cfg.gamma = gamma;
        cfg.floor_samples = floor_samples;
        cfg.exclude_self_collision = flags.0;
        cfg.emit_histograms = flags.1;
        cfg.bins = bins;
        cfg
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(256))]

    #[test]
    fn config_round_trips_through_its_document(cfg in scenario_config()) {
        prop_assume!(cfg.validate().is_ok());
        let text = render_config(&cfg).unwrap();
        let back = parse_config(&text, cfg.scenario).unwrap();
        prop_assert_eq!(back, cfg, "{}", text);
    }
}
