use super::{PoRanking, PointSet};
use crate::error::{Error, Result};
use crate::par;
use crate::relations::{ComparisonOutcome, RelationSpec};

/// Largest point set accepted by [`max_choice_oracle`].
pub const ORACLE_MAX_ITEMS: usize = 16;

/// Product-measure mass of the ordered pairs of `subset` on which the relation
/// gives no strict verdict. Diagonal pairs always count.
pub fn choice(ps: &PointSet, subset: &[usize], rel: &RelationSpec) -> Result<f64> {
    rel.check_dim(ps.dim())?;
    ps.check_indices(subset)?;
    let rows = par::map_slice(subset, |&i| {
        let xi = ps.point(i);
        let mut s = 0.0;
        for &j in subset {
            if i == j || rel.compare_unchecked(xi, ps.point(j)).offers_choice() {
                s += ps.weight(j);
            }
        }
        ps.weight(i) * s
    });
    Ok(rows.iter().sum())
}

/// Choice of a selection through the integral formula
/// `mu(S)^2 - 2 * sum_{i in S} weight(i) * po(i)`.
///
/// Only meaningful when `subset` is a selection; no check is made. See
/// [`choice_of_selection`] for the checked version.
pub fn choice_by_integral(ps: &PointSet, subset: &[usize], ranking: &PoRanking) -> Result<f64> {
    ps.check_indices(subset)?;
    let mu = ps.measure().measure_of(subset)?;
    let weighted_po: f64 = subset.iter().map(|&i| ps.weight(i) * ranking.po[i]).sum();
    Ok(mu * mu - 2.0 * weighted_po)
}

/// Choice of a selection through the integral formula, after checking that
/// `subset` is a selection for `rel`.
pub fn choice_of_selection(
    ps: &PointSet,
    subset: &[usize],
    ranking: &PoRanking,
    rel: &RelationSpec,
) -> Result<f64> {
    if !is_selection(ps, subset, rel)? {
        return Err(Error::NotSelection);
    }
    choice_by_integral(ps, subset, ranking)
}

/// `choice(subset) / mu(subset)^2`.
pub fn diversity(ps: &PointSet, subset: &[usize], rel: &RelationSpec) -> Result<f64> {
    if subset.is_empty() {
        return Err(Error::EmptyInput);
    }
    let mu = ps.measure().measure_of(subset)?;
    Ok(choice(ps, subset, rel)? / (mu * mu))
}

/// True iff no point outside `subset` is strictly preferable to a point inside.
pub fn is_selection(ps: &PointSet, subset: &[usize], rel: &RelationSpec) -> Result<bool> {
    rel.check_dim(ps.dim())?;
    ps.check_indices(subset)?;
    let mut inside = vec![false; ps.len()];
    for &i in subset {
        inside[i] = true;
    }
    let outside: Vec<usize> = (0..ps.len()).filter(|&j| !inside[j]).collect();
    let violated = par::map_slice(subset, |&i| {
        outside.iter().any(|&j| {
            rel.compare_unchecked(ps.point(j), ps.point(i)) == ComparisonOutcome::StrictlyBetter
        })
    });
    Ok(!violated.into_iter().any(|v| v))
}

/// Result of the exhaustive maximum-choice search.
#[derive(Debug, Clone, PartialEq)]
pub struct OracleResult {
    pub best_choice: f64,
    /// Every selection attaining `best_choice`, each as sorted indices.
    pub maximizers: Vec<Vec<usize>>,
    /// Number of selections with measure `<= m` that were examined.
    pub selections_examined: usize,
}

/// Every selection of `ps` with measure at most `m`, as bitmasks over item indices.
///
/// Selections are enumerated by a depth-first walk over a linear extension of
/// the strict relation: an item may join only after all of its strict
/// predecessors did, so each down-set is produced exactly once.
pub fn enumerate_selections(ps: &PointSet, rel: &RelationSpec, m: f64) -> Result<Vec<u32>> {
    rel.check_dim(ps.dim())?;
    let n = ps.len();
    if n > ORACLE_MAX_ITEMS {
        return Err(Error::TooLarge {
            n,
            max: ORACLE_MAX_ITEMS,
        });
    }
    let mut pred = vec![0u32; n];
    for (i, p) in pred.iter_mut().enumerate() {
        for j in 0..n {
            if j != i
                && rel.compare_unchecked(ps.point(j), ps.point(i)) == ComparisonOutcome::StrictlyBetter
            {
                *p |= 1 << j;
            }
        }
    }
    let topo = linear_extension(&pred)?;

    #[allow(clippy::too_many_arguments)]
    fn walk(
        depth: usize,
        mask: u32,
        mass: f64,
        topo: &[usize],
        pred: &[u32],
        weights: &[f64],
        m: f64,
        out: &mut Vec<u32>,
    ) {
        if depth == topo.len() {
            out.push(mask);
            return;
        }
        let i = topo[depth];
        walk(depth + 1, mask, mass, topo, pred, weights, m, out);
        if pred[i] & !mask == 0 && mass + weights[i] <= m {
            walk(depth + 1, mask | 1 << i, mass + weights[i], topo, pred, weights, m, out);
        }
    }

    let mut out = Vec::new();
    walk(0, 0, 0.0, &topo, &pred, ps.measure().weights(), m, &mut out);
    Ok(out)
}

fn linear_extension(pred: &[u32]) -> Result<Vec<usize>> {
    let n = pred.len();
    let mut placed = 0u32;
    let mut topo = Vec::with_capacity(n);
    while topo.len() < n {
        let next = (0..n).find(|&i| placed & (1 << i) == 0 && pred[i] & !placed == 0);
        match next {
            Some(i) => {
                placed |= 1 << i;
                topo.push(i);
            }
            None => return Err(Error::NoNonDominated),
        }
    }
    Ok(topo)
}

fn mask_to_indices(mask: u32, n: usize) -> Vec<usize> {
    (0..n).filter(|&i| mask & (1 << i) != 0).collect()
}

/// Exhaustive search for the selections of measure at most `m` offering
/// maximum choice. Choice is evaluated pair by pair, independently of `po`.
///
/// Values within a relative `1e-12` of the best count as ties.
pub fn max_choice_oracle(ps: &PointSet, rel: &RelationSpec, m: f64) -> Result<OracleResult> {
    let selections = enumerate_selections(ps, rel, m)?;
    let n = ps.len();
    // pairs offering choice, diagonal included
    let mut choice_mask = vec![0u32; n];
    for (i, cm) in choice_mask.iter_mut().enumerate() {
        for j in 0..n {
            if i == j || rel.compare_unchecked(ps.point(i), ps.point(j)).offers_choice() {
                *cm |= 1 << j;
            }
        }
    }
    let w = ps.measure().weights();
    let value = |mask: u32| -> f64 {
        let mut s = 0.0;
        for i in 0..n {
            if mask & (1 << i) == 0 {
                continue;
            }
            let row = mask & choice_mask[i];
            let mut inner = 0.0;
            for (j, wj) in w.iter().enumerate() {
                if row & (1 << j) != 0 {
                    inner += wj;
                }
            }
            s += w[i] * inner;
        }
        s
    };
    let values: Vec<f64> = selections.iter().map(|&s| value(s)).collect();
    let best = values.iter().cloned().fold(f64::NEG_INFINITY, f64::max);
    let tol = 1e-12 * best.abs().max(1.0);
    let maximizers = selections
        .iter()
        .zip(&values)
        .filter(|(_, v)| (best - **v).abs() <= tol)
        .map(|(s, _)| mask_to_indices(*s, n))
        .collect();
    Ok(OracleResult {
        best_choice: best,
        maximizers,
        selections_examined: selections.len(),
    })
}
