//! Evaluation metrics for populations and samples.

mod hypervolume;
mod kendall;

pub use hypervolume::{hypervolume, hypervolume_mc, HypervolumeMode, McEstimate, EXACT_MAX_DIM};
pub use kendall::{kendall_tau, largest_uncorrelated_pareto_set, KendallTau};

use crate::error::{Error, Result};
use crate::matrix::Matrix;
use crate::par;
use crate::relations::{ComparisonOutcome, RelationSpec};

/// Rows of `m` with exact duplicates removed, first occurrence kept.
pub fn dedup_rows(m: &Matrix) -> Matrix {
    let mut keep: Vec<usize> = Vec::with_capacity(m.rows());
    let mut order: Vec<usize> = (0..m.rows()).collect();
    order.sort_by(|&a, &b| {
        m.row(a)
            .iter()
            .zip(m.row(b))
            .map(|(x, y)| x.total_cmp(y))
            .find(|o| o.is_ne())
            .unwrap_or(std::cmp::Ordering::Equal)
            .then(a.cmp(&b))
    });
    for (k, &i) in order.iter().enumerate() {
        if k == 0 || m.row(order[k - 1]) != m.row(i) {
            keep.push(i);
        }
    }
    keep.sort_unstable();
    m.select(&keep)
}

/// Average share, in percent, of `target`'s points strictly dominated by at
/// least one point of each sample in `by`.
///
/// Both the target and the dominating samples are deduplicated first.
pub fn dominated_fraction(target: &Matrix, by: &[Matrix], rel: &RelationSpec) -> Result<f64> {
    if by.is_empty() {
        return Err(Error::InvalidParameter("no dominating samples given".into()));
    }
    rel.check_dim(target.cols())?;
    let target = dedup_rows(target);
    let mut total = 0.0;
    for sample in by {
        if sample.cols() != target.cols() {
            return Err(Error::DimensionMismatch {
                expected: target.cols(),
                got: sample.cols(),
            });
        }
        let sample = dedup_rows(sample);
        let dominated = par::map_range(target.rows(), |i| {
            sample.iter_rows().any(|y| {
                rel.compare_unchecked(y, target.row(i)) == ComparisonOutcome::StrictlyBetter
            })
        });
        let count = dominated.into_iter().filter(|d| *d).count();
        total += count as f64 / target.rows() as f64;
    }
    Ok(100.0 * total / by.len() as f64)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn m(rows: &[[f64; 2]]) -> Matrix {
        Matrix::from_rows(rows).unwrap()
    }

    #[test]
    fn fully_dominated_target() {
        let target = m(&[[1.0, 1.0], [2.0, 0.5]]);
        let by = m(&[[3.0, 3.0]]);
        assert_eq!(dominated_fraction(&target, &[by], &RelationSpec::all_max()).unwrap(), 100.0);
    }

    #[test]
    fn identical_populations_do_not_dominate() {
        let a = m(&[[1.0, 2.0], [2.0, 1.0]]);
        assert_eq!(
            dominated_fraction(&a, std::slice::from_ref(&a), &RelationSpec::all_max()).unwrap(),
            0.0
        );
    }

    #[test]
    fn half_dominated() {
        let target = m(&[[1.0, 1.0], [5.0, 5.0]]);
        let by = m(&[[3.0, 3.0]]);
        assert_eq!(dominated_fraction(&target, &[by], &RelationSpec::all_max()).unwrap(), 50.0);
    }

    #[test]
    fn averages_over_dominators_and_dedups() {
        let target = m(&[[1.0, 1.0], [1.0, 1.0], [5.0, 5.0]]);
        let a = m(&[[3.0, 3.0]]);
        let b = m(&[[6.0, 6.0], [6.0, 6.0]]);
        let theta = dominated_fraction(&target, &[a, b], &RelationSpec::all_max()).unwrap();
        assert_eq!(theta, 75.0);
    }

    #[test]
    fn strict_domination_is_one_sided() {
        let a = m(&[[3.0, 3.0], [4.0, 2.5]]);
        let b = m(&[[1.0, 1.0], [2.0, 0.0]]);
        let rel = RelationSpec::all_max();
        assert_eq!(dominated_fraction(&b, std::slice::from_ref(&a), &rel).unwrap(), 100.0);
        assert_eq!(dominated_fraction(&a, &[b], &rel).unwrap(), 0.0);
    }

    #[test]
    fn rejects_empty_dominator_list() {
        assert!(dominated_fraction(&m(&[[1.0, 1.0]]), &[], &RelationSpec::all_max()).is_err());
    }

    #[test]
    fn dedup_keeps_first_occurrence_order() {
        let d = dedup_rows(&m(&[[2.0, 1.0], [1.0, 1.0], [2.0, 1.0], [0.0, 0.0]]));
        assert_eq!(d.to_rows(), vec![vec![2.0, 1.0], vec![1.0, 1.0], vec![0.0, 0.0]]);
    }
}
