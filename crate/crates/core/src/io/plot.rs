use crate::error::{Error, Result};
use crate::experiments::HistogramBin;
use crate::limit_laws::normal_pdf;

/// Equal-width histogram on `[lo, hi]` normalized to integrate to one over
/// the sample (values outside the range count toward the total but fall in
/// no bin). A degenerate range is widened to `[lo − ½, lo + ½]`.
pub fn histogram(values: &[f64], bins: usize, lo: f64, hi: f64) -> Result<Vec<HistogramBin>> {
    if values.is_empty() || bins == 0 {
        return Err(Error::domain("histogram needs values and at least one bin"));
    }
    if !(lo.is_finite() && hi.is_finite() && lo <= hi) {
        return Err(Error::domain(format!("histogram range [{lo}, {hi}] is invalid")));
    }
    let (lo, hi) = if lo == hi { (lo - 0.5, hi + 0.5) } else { (lo, hi) };
    let width = (hi - lo) / bins as f64;
    let mut counts = vec![0usize; bins];
    for &v in values {
        if v < lo || v > hi {
            continue;
        }
        let k = (((v - lo) / width) as usize).min(bins - 1);
        counts[k] += 1;
    }
    let total = values.len() as f64;
    Ok(counts
        .into_iter()
        .enumerate()
        .map(|(k, c)| HistogramBin {
            left: lo + k as f64 * width,
            right: if k + 1 == bins { hi } else { lo + (k + 1) as f64 * width },
            density: c as f64 / (total * width),
        })
        .collect())
}

/// Gaussian kernel density estimate at `points` with bandwidth
/// `1.06 σ n^{-1/5}`.
pub fn kde(values: &[f64], points: &[f64]) -> Result<Vec<f64>> {
    let n = values.len();
    if n < 2 {
        return Err(Error::domain("kernel density estimate needs at least 2 values"));
    }
    let mean = values.iter().sum::<f64>() / n as f64;
    let sd = (values.iter().map(|v| (v - mean).powi(2)).sum::<f64>() / (n - 1) as f64).sqrt();
    if sd == 0.0 {
        return Err(Error::domain("kernel density estimate of a constant sample"));
    }
    let h = 1.06 * sd * (n as f64).powf(-0.2);
    Ok(points
        .iter()
        .map(|&x| values.iter().map(|&v| normal_pdf((x - v) / h)).sum::<f64>() / (n as f64 * h))
        .collect())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn two_point_histogram_splits_evenly() {
        let h = histogram(&[-1.0, -1.0, 1.0, 1.0], 2, -1.0, 1.0).unwrap();
        let d: Vec<f64> = h.iter().map(|b| b.density).collect();
        // each bin has width 1 and half the mass
        assert_eq!(d, vec![0.5, 0.5]);
        let area: f64 = h.iter().map(|b| b.density * (b.right - b.left)).sum();
        assert_eq!(area, 1.0);
    }

    #[test]
    fn kde_integrates_to_about_one() {
        let values: Vec<f64> = (0..200).map(|i| (i as f64 / 199.0) * 2.0 - 1.0).collect();
        let grid: Vec<f64> = (0..=800).map(|i| -4.0 + i as f64 * 0.01).collect();
        let d = kde(&values, &grid).unwrap();
        let area: f64 = d.iter().sum::<f64>() * 0.01;
        assert!((area - 1.0).abs() < 1e-3, "{area}");
    }
}
