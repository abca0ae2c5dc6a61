//! Gauss–Legendre rules shared by the kernel integrals and the quantile
//! integrals.

use crate::error::{Error, Result};

/// Non-negative half of the 7-point rule as (node, weight).
const GL7: [(f64, f64); 4] = [
    (0.0, 0.417_959_183_673_469_387_76),
    (0.405_845_151_377_397_166_91, 0.381_830_050_505_118_944_95),
    (0.741_531_185_599_394_439_86, 0.279_705_391_489_276_667_9),
    (0.949_107_912_342_758_524_53, 0.129_484_966_168_869_693_27),
];

/// Non-negative half of the 15-point rule as (node, weight).
const GL15: [(f64, f64); 8] = [
    (0.0, 0.202_578_241_925_561_272_88),
    (0.201_194_093_997_434_522_3, 0.198_431_485_327_111_576_46),
    (0.394_151_347_077_563_369_9, 0.186_161_000_015_562_211_03),
    (0.570_972_172_608_538_847_54, 0.166_269_205_816_993_933_55),
    (0.724_417_731_360_170_047_42, 0.139_570_677_926_154_314_45),
    (0.848_206_583_410_427_216_2, 0.107_159_220_467_171_935_01),
    (0.937_273_392_400_705_904_31, 0.070_366_047_488_108_124_709),
    (0.987_992_518_020_485_428_49, 0.030_753_241_996_117_268_355),
];

fn apply_rule<F: FnMut(f64) -> f64>(rule: &[(f64, f64)], f: &mut F, a: f64, b: f64) -> f64 {
    let half = 0.5 * (b - a);
    let mid = 0.5 * (a + b);
    let (x0, w0) = rule[0];
    debug_assert_eq!(x0, 0.0);
    let mut acc = w0 * f(mid);
    for &(x, w) in &rule[1..] {
        let dx = half * x;
        acc += w * (f(mid - dx) + f(mid + dx));
    }
    acc * half
}

/// 15-point Gauss–Legendre on `[a, b]`.
pub(crate) fn gauss15<F: FnMut(f64) -> f64>(f: &mut F, a: f64, b: f64) -> f64 {
    apply_rule(&GL15, f, a, b)
}

/// 7-point Gauss–Legendre on `[a, b]`.
pub(crate) fn gauss7<F: FnMut(f64) -> f64>(f: &mut F, a: f64, b: f64) -> f64 {
    apply_rule(&GL7, f, a, b)
}

/// Adaptive bisection with the 7-point rule. A subinterval is accepted when
/// the whole-interval estimate and the sum of its halves agree to
/// `rel_tol * |estimate| + abs_tol * width`.
pub(crate) fn adaptive_gauss7<F: FnMut(f64) -> f64>(
    f: &mut F,
    a: f64,
    b: f64,
    rel_tol: f64,
    abs_tol: f64,
    max_depth: u32,
) -> Result<f64> {
    let whole = gauss7(f, a, b);
    let mut worst = 0.0_f64;
    let value = refine(f, a, b, whole, rel_tol, abs_tol, max_depth, &mut worst);
    if worst > 0.0 {
        return Err(Error::Numeric {
            message: format!("adaptive quadrature on [{a}, {b}] hit depth {max_depth}"),
            achieved: worst,
            partial: Some(value),
        });
    }
    Ok(value)
}

const NOISE_FLOOR: f64 = 64.0 * f64::EPSILON;

#[allow(clippy::too_many_arguments)]
fn refine<F: FnMut(f64) -> f64>(
    f: &mut F,
    a: f64,
    b: f64,
    whole: f64,
    rel_tol: f64,
    abs_tol: f64,
    depth_left: u32,
    worst: &mut f64,
) -> f64 {
    let m = 0.5 * (a + b);
    let left = gauss7(f, a, m);
    let right = gauss7(f, m, b);
    let split = left + right;
    let err = (split - whole).abs();
    // below a few ulps the difference is rounding noise in f, not error
    if err <= rel_tol.max(NOISE_FLOOR) * split.abs() + abs_tol * (b - a) {
        return split;
    }
    if depth_left == 0 || m <= a || m >= b {
        let rel = if split != 0.0 { err / split.abs() } else { err };
        *worst = worst.max(rel);
        return split;
    }
    refine(f, a, m, left, rel_tol, abs_tol, depth_left - 1, worst)
        + refine(f, m, b, right, rel_tol, abs_tol, depth_left - 1, worst)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rules_integrate_polynomials_exactly() {
        // 7 points: exact through degree 13; 15 points through degree 29.
        let mut p13 = |x: f64| x.powi(13) + 3.0 * x.powi(12);
        let exact13 = (2f64.powi(14) - 1.0) / 14.0 + 3.0 * (2f64.powi(13) - 1.0) / 13.0;
        assert!((gauss7(&mut p13, 1.0, 2.0) - exact13).abs() < 1e-10 * exact13);

        let mut p29 = |x: f64| x.powi(28);
        let exact29 = 2.0 / 29.0;
        assert!((gauss15(&mut p29, -1.0, 1.0) - exact29).abs() < 1e-14);
    }

    #[test]
    fn adaptive_handles_kink() {
        let mut f = |x: f64| (x - 0.3).abs();
        let v = adaptive_gauss7(&mut f, 0.0, 1.0, 1e-12, 0.0, 60).unwrap();
        let exact = 0.5 * 0.09 + 0.5 * 0.49;
        assert!((v - exact).abs() < 1e-11);
    }

    #[test]
    fn adaptive_reports_depth_exhaustion() {
        let mut f = |x: f64| if x < 1.0 / 3.0 { 0.0 } else { 1.0 };
        let err = adaptive_gauss7(&mut f, 0.0, 1.0, 1e-15, 0.0, 2).unwrap_err();
        match err {
            Error::Numeric { partial, .. } => assert!(partial.is_some()),
            other => panic!("unexpected {other}"),
        }
    }
}
