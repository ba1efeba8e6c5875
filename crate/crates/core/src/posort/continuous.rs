//! Closed forms for two independent continuous coordinates and Monte Carlo
//! samples of the unit square.

use rand::Rng as _;
use serde::{Deserialize, Serialize};

use super::{PoRanking, PointSet};
use crate::error::{Error, Result};
use crate::matrix::Matrix;
use crate::measures::DiscreteMeasure;
use crate::rng;

fn check_k(k: f64) -> Result<()> {
    if k > 0.0 && k <= 1.0 {
        Ok(())
    } else {
        Err(Error::InvalidParameter(format!("k must lie in (0, 1], got {k}")))
    }
}

/// Probability mass of `T_k` for two independent continuous coordinates: `k - k ln k`.
pub fn analytic_p_tk(k: f64) -> Result<f64> {
    check_k(k)?;
    Ok(k - k * k.ln())
}

/// Choice of `T_k`: `(k - k ln k)^2 - k^2 (1/2 - ln k)`.
pub fn analytic_cho_tk(k: f64) -> Result<f64> {
    let p = analytic_p_tk(k)?;
    Ok(p * p - k * k * (0.5 - k.ln()))
}

/// Diversity of `T_k`, `cho / P^2`.
pub fn analytic_diversity_tk(k: f64) -> Result<f64> {
    let p = analytic_p_tk(k)?;
    Ok(analytic_cho_tk(k)? / (p * p))
}

/// Sampling density on the unit square.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum SquareDensity {
    /// `dx1 dx2`
    Uniform,
    /// `2 x2 dx1 dx2`: small values of `x2` are rare.
    Rarefy2,
    /// `4 x1 x2 dx1 dx2`: small values of both coordinates are rare.
    Rarefy4,
}

/// `n` points drawn from `density`, with the counting measure.
///
/// The densities are separable, so each axis is drawn by inverting its
/// marginal CDF (`x` for the uniform marginal, `x^2` for the `2x` marginal).
pub fn mc_sample_square(n: usize, density: SquareDensity, seed: u64) -> Result<PointSet> {
    if n == 0 {
        return Err(Error::EmptyInput);
    }
    let mut r = rng::rng(seed);
    let mut data = Vec::with_capacity(2 * n);
    for _ in 0..n {
        let u1: f64 = r.gen();
        let u2: f64 = r.gen();
        let (x1, x2) = match density {
            SquareDensity::Uniform => (u1, u2),
            SquareDensity::Rarefy2 => (u1, u2.sqrt()),
            SquareDensity::Rarefy4 => (u1.sqrt(), u2.sqrt()),
        };
        data.push(x1);
        data.push(x2);
    }
    PointSet::new(Matrix::new(data, 2)?, DiscreteMeasure::counting(n))
}

/// Smallest `k` (in the units of `ranking.po`) such that `mu(T_k) >= target * mu(X)`.
pub fn find_k_for_measure(
    ranking: &PoRanking,
    measure: &DiscreteMeasure,
    target_fraction: f64,
) -> Result<f64> {
    if !(target_fraction > 0.0 && target_fraction <= 1.0) {
        return Err(Error::InvalidParameter(format!(
            "target fraction must lie in (0, 1], got {target_fraction}"
        )));
    }
    if ranking.is_empty() || ranking.len() != measure.len() {
        return Err(Error::DimensionMismatch {
            expected: measure.len(),
            got: ranking.len(),
        });
    }
    let goal = target_fraction * measure.total();
    let mut mass = 0.0;
    for &i in &ranking.order {
        mass += measure.weight(i);
        // absorb rounding in the running sum
        if mass >= goal * (1.0 - 1e-12) {
            return Ok(ranking.po[i]);
        }
    }
    Ok(ranking.po[*ranking.order.last().expect("non-empty ranking")])
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn closed_forms_at_one() {
        assert_eq!(analytic_p_tk(1.0).unwrap(), 1.0);
        assert_eq!(analytic_cho_tk(1.0).unwrap(), 0.5);
        assert_eq!(analytic_diversity_tk(1.0).unwrap(), 0.5);
    }

    #[test]
    fn closed_form_at_one_tenth() {
        // 0.1 + 0.1 * ln 10
        assert!((analytic_p_tk(0.1).unwrap() - 0.330_258_509_3).abs() < 1e-9);
    }

    #[test]
    fn diversity_tends_to_one() {
        let mut last = 0.0;
        for k in [0.5, 0.1, 1e-2, 1e-4, 1e-8, 1e-12] {
            let d = analytic_diversity_tk(k).unwrap();
            assert!(d > last);
            last = d;
        }
        assert!(last > 0.95);
        assert!(last < 1.0);
    }

    #[test]
    fn k_outside_unit_interval_rejected() {
        assert!(analytic_p_tk(0.0).is_err());
        assert!(analytic_p_tk(1.5).is_err());
        assert!(analytic_cho_tk(-1.0).is_err());
    }

    #[test]
    fn p_tk_matches_numeric_integration() {
        // area under min(1, k / x1) on [0, 1], midpoint rule
        let k = 0.1;
        let steps = 2_000_000;
        let h = 1.0 / steps as f64;
        let area: f64 = (0..steps)
            .map(|i| {
                let x = (i as f64 + 0.5) * h;
                (k / x).min(1.0) * h
            })
            .sum();
        assert!((area - analytic_p_tk(k).unwrap()).abs() < 1e-6);
    }

    #[test]
    fn rarefied_marginal_mean() {
        let ps = mc_sample_square(200_000, SquareDensity::Rarefy2, 7).unwrap();
        let mean2: f64 = (0..ps.len()).map(|i| ps.point(i)[1]).sum::<f64>() / ps.len() as f64;
        let mean1: f64 = (0..ps.len()).map(|i| ps.point(i)[0]).sum::<f64>() / ps.len() as f64;
        assert!((mean2 - 2.0 / 3.0).abs() < 0.005, "{mean2}");
        assert!((mean1 - 0.5).abs() < 0.005, "{mean1}");
        let ps = mc_sample_square(200_000, SquareDensity::Rarefy4, 7).unwrap();
        let mean1: f64 = (0..ps.len()).map(|i| ps.point(i)[0]).sum::<f64>() / ps.len() as f64;
        assert!((mean1 - 2.0 / 3.0).abs() < 0.005, "{mean1}");
    }

    #[test]
    fn sampling_is_seeded() {
        let a = mc_sample_square(100, SquareDensity::Uniform, 3).unwrap();
        let b = mc_sample_square(100, SquareDensity::Uniform, 3).unwrap();
        let c = mc_sample_square(100, SquareDensity::Uniform, 4).unwrap();
        assert_eq!(a, b);
        assert_ne!(a, c);
    }

    #[test]
    fn find_k_picks_smallest_sufficient_level() {
        let ranking = PoRanking::from_po(vec![0.0, 0.0, 1.0, 2.0, 2.0, 5.0]);
        let m = DiscreteMeasure::counting(6);
        assert_eq!(find_k_for_measure(&ranking, &m, 0.3).unwrap(), 0.0);
        assert_eq!(find_k_for_measure(&ranking, &m, 0.5).unwrap(), 1.0);
        assert_eq!(find_k_for_measure(&ranking, &m, 0.6).unwrap(), 2.0);
        assert_eq!(find_k_for_measure(&ranking, &m, 1.0).unwrap(), 5.0);
        assert!(find_k_for_measure(&ranking, &m, 0.0).is_err());
        assert!(find_k_for_measure(&ranking, &m, 1.1).is_err());
    }
}
