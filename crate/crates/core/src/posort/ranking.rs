use std::io::Write;

use serde::{Deserialize, Serialize};

use super::PointSet;
use crate::error::{Error, Result};
use crate::matrix::Matrix;
use crate::measures::{Ecdf, HStar};
use crate::par;
use crate::relations::{ComparisonOutcome, Orientation, RelationSpec};

/// k-Pareto optimality of every item plus the induced ordering.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PoRanking {
    /// `po[i]`: measure of the items strictly preferable to item `i`.
    pub po: Vec<f64>,
    /// Indices by ascending `po`, ties by index.
    pub order: Vec<usize>,
    /// Groups of equal `po`, in ascending `po`.
    pub classes: Vec<Vec<usize>>,
}

impl PoRanking {
    pub fn from_po(po: Vec<f64>) -> Self {
        let mut order: Vec<usize> = (0..po.len()).collect();
        order.sort_by(|&a, &b| po[a].total_cmp(&po[b]).then(a.cmp(&b)));
        let mut classes: Vec<Vec<usize>> = Vec::new();
        for &i in &order {
            match classes.last_mut() {
                Some(c) if po[c[0]] == po[i] => c.push(i),
                _ => classes.push(vec![i]),
            }
        }
        Self { po, order, classes }
    }

    pub fn len(&self) -> usize {
        self.po.len()
    }

    pub fn is_empty(&self) -> bool {
        self.po.is_empty()
    }

    /// Class number of every item.
    pub fn class_labels(&self) -> Vec<usize> {
        let mut labels = vec![0; self.po.len()];
        for (c, members) in self.classes.iter().enumerate() {
            for &i in members {
                labels[i] = c;
            }
        }
        labels
    }

    /// Writes `index,po,class`.
    pub fn write_csv<W: Write>(&self, writer: W) -> Result<()> {
        let labels = self.class_labels();
        let mut w = csv::Writer::from_writer(writer);
        w.write_record(["index", "po", "class"])?;
        for (i, po) in self.po.iter().enumerate() {
            w.write_record([i.to_string(), format!("{po:?}"), labels[i].to_string()])?;
        }
        w.flush()?;
        Ok(())
    }
}

/// Exact k-Pareto optimality by a full pairwise pass, `O(n^2)` comparisons.
///
/// `po(i) = sum of weight(j) over j with x_j R* x_i`. Rows are processed in
/// parallel when the `parallel` feature is on; each row sums in index order so
/// the result does not depend on the backend.
pub fn po_exact(ps: &PointSet, rel: &RelationSpec) -> Result<PoRanking> {
    rel.check_dim(ps.dim())?;
    let n = ps.len();
    let po = par::map_range(n, |i| {
        let xi = ps.point(i);
        let mut s = 0.0;
        for j in 0..n {
            if j != i
                && rel.compare_unchecked(ps.point(j), xi) == ComparisonOutcome::StrictlyBetter
            {
                s += ps.weight(j);
            }
        }
        s
    });
    Ok(PoRanking::from_po(po))
}

/// Exact k-Pareto optimality for two-dimensional componentwise relations in
/// `O(n log n)`: a sweep over the first axis with a Fenwick tree over the
/// ranks of the second.
pub fn po_dominance_2d(ps: &PointSet, orientations: [Orientation; 2]) -> Result<PoRanking> {
    if ps.dim() != 2 {
        return Err(Error::DimensionMismatch {
            expected: 2,
            got: ps.dim(),
        });
    }
    let n = ps.len();
    let a: Vec<f64> = (0..n).map(|i| orientations[0].to_min(ps.point(i)[0])).collect();
    let b: Vec<f64> = (0..n).map(|i| orientations[1].to_min(ps.point(i)[1])).collect();

    // dense ranks of the second coordinate
    let mut bs = b.clone();
    bs.sort_by(f64::total_cmp);
    bs.dedup();
    let rank: Vec<usize> = b.iter().map(|v| bs.partition_point(|u| u < v)).collect();

    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&i, &j| a[i].total_cmp(&a[j]).then(b[i].total_cmp(&b[j])).then(i.cmp(&j)));

    let mut tree = vec![0.0f64; bs.len() + 1];
    let add = |tree: &mut [f64], r: usize, w: f64| {
        let mut k = r + 1;
        while k < tree.len() {
            tree[k] += w;
            k += k & k.wrapping_neg();
        }
    };
    let prefix = |tree: &[f64], r: usize| {
        let mut k = r + 1;
        let mut s = 0.0;
        while k > 0 {
            s += tree[k];
            k -= k & k.wrapping_neg();
        }
        s
    };

    let mut po = vec![0.0; n];
    let mut start = 0;
    while start < n {
        // every item sharing the first coordinate goes in before the queries
        let mut end = start;
        while end < n && a[order[end]] == a[order[start]] {
            end += 1;
        }
        for &i in &order[start..end] {
            add(&mut tree, rank[i], ps.weight(i));
        }
        // items with identical coordinates are equivalent, not strictly better
        let mut g = start;
        while g < end {
            let mut h = g;
            let mut same = 0.0;
            while h < end && b[order[h]] == b[order[g]] {
                same += ps.weight(order[h]);
                h += 1;
            }
            let dominated_or_equal = prefix(&tree, rank[order[g]]);
            for &i in &order[g..h] {
                po[i] = (dominated_or_equal - same).max(0.0);
            }
            g = h;
        }
        start = end;
    }
    Ok(PoRanking::from_po(po))
}

/// Probabilistic k-Pareto optimality for componentwise relations, assuming
/// independent coordinates:
/// `po(x) = prod_d F_d(x_d) - prod_d p_d(x_d)`
/// with `F_d` the (orientation-adjusted, weighted) empirical CDF of axis `d`
/// and `p_d` its point mass. Cost `O(n M log n)`.
pub fn po_prob(ps: &PointSet, orientations: &[Orientation]) -> Result<PoRanking> {
    if orientations.is_empty() {
        return Err(Error::InvalidParameter("at least one axis is required".into()));
    }
    if orientations.len() != ps.dim() {
        return Err(Error::DimensionMismatch {
            expected: ps.dim(),
            got: orientations.len(),
        });
    }
    let n = ps.len();
    let uniform = ps.measure().is_uniform();
    let ecdfs: Vec<Ecdf> = orientations
        .iter()
        .enumerate()
        .map(|(d, o)| {
            let col: Vec<f64> = (0..n).map(|i| o.to_min(ps.point(i)[d])).collect();
            if uniform {
                Ecdf::new(&col)
            } else {
                Ecdf::weighted(&col, ps.measure().weights())
            }
        })
        .collect::<Result<_>>()?;
    let po = par::map_range(n, |i| {
        let x = ps.point(i);
        let (mut cdf, mut mass) = (1.0, 1.0);
        for (d, f) in ecdfs.iter().enumerate() {
            let (c, m) = f.query_with_mass(orientations[d].to_min(x[d]));
            cdf *= c;
            mass *= m;
        }
        (cdf - mass).max(0.0)
    });
    Ok(PoRanking::from_po(po))
}

/// Probabilistic k-Pareto optimality for constrained problems.
///
/// `evals` rows are laid out as `(g_1..g_ng, h_1..h_nh, f_1..f_M)`. With
/// `G_i`, `F_i` the empirical CDFs of the columns and `H*_j` the
/// interval-anchored functions of the equality columns:
///
/// * feasible rows: `P(feasible) * (prod F_i(f_i) - prod p_i(f_i))` where
///   `P(feasible) = prod G_i(0) * prod H*_j(a_j)`;
/// * infeasible rows: `prod G_i(max(g_i, 0)) * prod H*_j(h_j)`.
///
/// Cost `O((ng + nh + M) n log n)`.
pub fn po_cmop(evals: &Matrix, ng: usize, nh: usize, eq_bounds: &[[f64; 2]]) -> Result<PoRanking> {
    if eq_bounds.len() != nh {
        return Err(Error::InvalidParameter(format!(
            "expected {nh} equality bounds, got {}",
            eq_bounds.len()
        )));
    }
    let cols = evals.cols();
    if cols < ng + nh {
        return Err(Error::DimensionMismatch {
            expected: ng + nh + 1,
            got: cols,
        });
    }
    if cols == ng + nh {
        return Err(Error::EmptyObjectiveBlock);
    }
    let g: Vec<Ecdf> = (0..ng)
        .map(|i| Ecdf::new(&evals.column(i)))
        .collect::<Result<_>>()?;
    let h: Vec<HStar> = eq_bounds
        .iter()
        .enumerate()
        .map(|(j, [a, b])| HStar::new(&evals.column(ng + j), *a, *b))
        .collect::<Result<_>>()?;
    let f: Vec<Ecdf> = (ng + nh..cols)
        .map(|i| Ecdf::new(&evals.column(i)))
        .collect::<Result<_>>()?;

    let p_feasible: f64 = g.iter().map(|e| e.query(0.0)).product::<f64>()
        * h.iter()
            .zip(eq_bounds)
            .map(|(e, [a, _])| e.query(*a))
            .product::<f64>();

    let po = par::map_range(evals.rows(), |r| {
        let row = evals.row(r);
        let feasible = row[..ng].iter().all(|v| *v <= 0.0)
            && row[ng..ng + nh]
                .iter()
                .zip(eq_bounds)
                .all(|(v, [a, b])| *a <= *v && *v <= *b);
        if feasible {
            let (mut cdf, mut mass) = (1.0, 1.0);
            for (k, e) in f.iter().enumerate() {
                let (c, m) = e.query_with_mass(row[ng + nh + k]);
                cdf *= c;
                mass *= m;
            }
            p_feasible * (cdf - mass).max(0.0)
        } else {
            let gp: f64 = g
                .iter()
                .enumerate()
                .map(|(i, e)| e.query(row[i].max(0.0)))
                .product();
            let hp: f64 = h.iter().enumerate().map(|(j, e)| e.query(row[ng + j])).product();
            gp * hp
        }
    });
    Ok(PoRanking::from_po(po))
}

/// `T_k = {i : po(i) <= k}`, or `T_k* = {i : po(i) < k}` when `strict`.
pub fn t_k(ranking: &PoRanking, k: f64, strict: bool) -> Vec<usize> {
    (0..ranking.po.len())
        .filter(|&i| {
            if strict {
                ranking.po[i] < k
            } else {
                ranking.po[i] <= k
            }
        })
        .collect()
}

/// Front index of every point under iterative peeling of the non-dominated set.
///
/// Fails with [`Error::NoNonDominated`] when the strict part of `rel` has a
/// cycle among the remaining points.
pub fn pareto_fronts(ps: &PointSet, rel: &RelationSpec) -> Result<Vec<usize>> {
    rel.check_dim(ps.dim())?;
    peel_fronts(ps.len(), |i, j| {
        rel.compare_unchecked(ps.point(i), ps.point(j)) == ComparisonOutcome::StrictlyBetter
    })
}

/// Iterative peeling for an arbitrary strict relation `beats(i, j)`.
pub(crate) fn peel_fronts<F>(n: usize, beats: F) -> Result<Vec<usize>>
where
    F: Fn(usize, usize) -> bool + Sync + Send,
{
    // dominated[i]: items that i strictly dominates
    let dominated: Vec<Vec<usize>> =
        par::map_range(n, |i| (0..n).filter(|&j| j != i && beats(i, j)).collect());
    let mut count = vec![0usize; n];
    for list in &dominated {
        for &j in list {
            count[j] += 1;
        }
    }
    let mut front = vec![usize::MAX; n];
    let mut current: Vec<usize> = (0..n).filter(|&i| count[i] == 0).collect();
    let mut assigned = 0;
    let mut level = 0;
    while !current.is_empty() {
        let mut next = Vec::new();
        for &i in &current {
            front[i] = level;
            assigned += 1;
        }
        for &i in &current {
            for &j in &dominated[i] {
                count[j] -= 1;
                if count[j] == 0 {
                    next.push(j);
                }
            }
        }
        next.sort_unstable();
        current = next;
        level += 1;
    }
    if assigned < n {
        return Err(Error::NoNonDominated);
    }
    Ok(front)
}

/// Groups front labels into index lists.
pub fn fronts_as_sets(front: &[usize]) -> Vec<Vec<usize>> {
    let levels = front.iter().max().map_or(0, |m| m + 1);
    let mut sets = vec![Vec::new(); levels];
    for (i, &f) in front.iter().enumerate() {
        sets[f].push(i);
    }
    sets
}
