use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::matrix::Matrix;
use crate::measures::DiscreteMeasure;
use crate::posort::{pareto_fronts, po_exact, po_prob, PointSet};
use crate::relations::{Axes, Orientation, RelationSpec};

/// Environmental selection operator.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Selector {
    /// Front peeling plus crowding distance.
    Nsga2,
    /// Exact po under the counting measure.
    PoCount,
    /// po from per-objective empirical CDFs.
    PoProb,
}

impl Selector {
    pub const ALL: [Selector; 3] = [Selector::Nsga2, Selector::PoCount, Selector::PoProb];

    pub fn name(self) -> &'static str {
        match self {
            Selector::Nsga2 => "nsga2",
            Selector::PoCount => "po_count",
            Selector::PoProb => "po_prob",
        }
    }
}

impl std::str::FromStr for Selector {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.trim() {
            "nsga2" => Ok(Selector::Nsga2),
            "po_count" | "po-count" => Ok(Selector::PoCount),
            "po_prob" | "po-prob" => Ok(Selector::PoProb),
            other => Err(Error::Parse {
                input: other.to_string(),
                reason: "expected nsga2, po_count or po_prob".into(),
            }),
        }
    }
}

impl std::fmt::Display for Selector {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(self.name())
    }
}

/// Crowding distance of each member of `subset`, computed within the subset.
/// Boundary members get infinity.
pub fn crowding_distance(objectives: &Matrix, subset: &[usize]) -> Vec<f64> {
    let n = subset.len();
    let mut dist = vec![0.0; n];
    if n <= 2 {
        return vec![f64::INFINITY; n];
    }
    let mut idx: Vec<usize> = (0..n).collect();
    for m in 0..objectives.cols() {
        let val = |i: usize| objectives.row(subset[i])[m];
        idx.sort_by(|&a, &b| val(a).total_cmp(&val(b)).then(a.cmp(&b)));
        let lo = val(idx[0]);
        let hi = val(idx[n - 1]);
        // a flat axis carries no spread information
        if hi > lo {
            dist[idx[0]] = f64::INFINITY;
            dist[idx[n - 1]] = f64::INFINITY;
            for w in 1..n - 1 {
                dist[idx[w]] += (val(idx[w + 1]) - val(idx[w - 1])) / (hi - lo);
            }
        }
    }
    dist
}

/// `keep` members of `group` with the largest crowding distance, ties by index.
fn truncate_by_crowding(objectives: &Matrix, group: &[usize], keep: usize) -> Vec<usize> {
    let dist = crowding_distance(objectives, group);
    let mut pos: Vec<usize> = (0..group.len()).collect();
    pos.sort_by(|&a, &b| dist[b].total_cmp(&dist[a]).then(group[a].cmp(&group[b])));
    pos.truncate(keep);
    pos.into_iter().map(|p| group[p]).collect()
}

/// Keeps `n` rows of `objectives` (every axis oriented by `orientation`).
/// Returns the survivors' indices in ascending order.
pub fn environmental_selection(
    objectives: &Matrix,
    selector: Selector,
    n: usize,
    orientation: Orientation,
) -> Result<Vec<usize>> {
    let total = objectives.rows();
    if n > total {
        return Err(Error::InvalidParameter(format!(
            "cannot keep {n} of {total} individuals"
        )));
    }
    let ps = PointSet::new(objectives.clone(), DiscreteMeasure::counting(total))?;
    let rel = RelationSpec::Componentwise {
        offset: 0,
        axes: Axes::All(orientation),
    };
    let groups: Vec<Vec<usize>> = match selector {
        Selector::Nsga2 => {
            let front = pareto_fronts(&ps, &rel)?;
            let count = front.iter().max().map_or(0, |m| m + 1);
            let mut groups = vec![Vec::new(); count];
            for (i, f) in front.iter().enumerate() {
                groups[*f].push(i);
            }
            groups
        }
        Selector::PoCount => po_exact(&ps, &rel)?.classes,
        Selector::PoProb => po_prob(&ps, &vec![orientation; objectives.cols()])?.classes,
    };
    let mut kept: Vec<usize> = Vec::with_capacity(n);
    for g in groups {
        let room = n - kept.len();
        if room == 0 {
            break;
        }
        if g.len() <= room {
            kept.extend(g);
        } else {
            kept.extend(truncate_by_crowding(objectives, &g, room));
        }
    }
    kept.sort_unstable();
    Ok(kept)
}
