use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::matrix::Matrix;
use crate::measures::DiscreteMeasure;
use crate::posort::{po_dominance_2d, PointSet, PoRanking};
use crate::relations::Orientation;

use super::dedup_rows;

/// Kendall's τ computed through the counting choice of a 2-column sample.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct KendallTau {
    pub n: usize,
    /// Counting choice over all ordered pairs, diagonal included.
    pub choice: f64,
    pub diversity: f64,
    /// `(n² + n − 2·choice) / (n² − n)`.
    pub tau: f64,
    /// `1 − 2·diversity`.
    pub via_choice: f64,
}

fn two_column_ranking(points: &Matrix, orientations: [Orientation; 2]) -> Result<PoRanking> {
    if points.cols() != 2 {
        return Err(Error::DimensionMismatch {
            expected: 2,
            got: points.cols(),
        });
    }
    if points.rows() < 2 {
        return Err(Error::InvalidParameter("need at least two points".into()));
    }
    let ps = PointSet::new(points.clone(), DiscreteMeasure::counting(points.rows()))?;
    po_dominance_2d(&ps, orientations)
}

/// τ for distinct 2-D points, O(n log n).
///
/// The whole sample is a selection, so `cho = n² − 2·Σ po`.
pub fn kendall_tau(points: &Matrix) -> Result<KendallTau> {
    let ranking = two_column_ranking(points, [Orientation::Min, Orientation::Min])?;
    if dedup_rows(points).rows() != points.rows() {
        return Err(Error::DuplicateRows);
    }
    let n = points.rows() as f64;
    let choice = n * n - 2.0 * ranking.po.iter().sum::<f64>();
    let diversity = choice / (n * n);
    Ok(KendallTau {
        n: points.rows(),
        choice,
        diversity,
        tau: (n * n + n - 2.0 * choice) / (n * n - n),
        via_choice: 1.0 - 2.0 * diversity,
    })
}

/// Largest `T_k` (both columns higher-is-better) whose counting diversity is
/// at least 1/2. Empty if no `T_k` qualifies.
pub fn largest_uncorrelated_pareto_set(points: &Matrix) -> Result<Vec<usize>> {
    let ranking = two_column_ranking(points, [Orientation::Max, Orientation::Max])?;
    // T_k grows along `order`; each class boundary closes one candidate.
    let mut best = 0usize;
    let mut size = 0usize;
    let mut po_sum = 0.0;
    for class in &ranking.classes {
        size += class.len();
        po_sum += class.iter().map(|&i| ranking.po[i]).sum::<f64>();
        let s = size as f64;
        if (s * s - 2.0 * po_sum) / (s * s) >= 0.5 {
            best = size;
        }
    }
    let mut members = ranking.order[..best].to_vec();
    members.sort_unstable();
    Ok(members)
}
