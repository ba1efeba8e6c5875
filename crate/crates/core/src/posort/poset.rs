//! Finite partial orders given by their Hasse diagram, embedded as points.

use super::PointSet;
use crate::error::{Error, Result};

/// Embeds a finite poset so that componentwise minimisation reproduces it.
///
/// `covers` lists `(upper, lower)` edges of the Hasse diagram, with `lower`
/// preferred to `upper`. Item `i` maps to the indicator vector of its down-set
/// (everything reachable below it, itself included); inclusion of down-sets is
/// exactly the order, so `po(i)` under the counting measure is the number of
/// items strictly below `i`.
pub fn poset_points(n: usize, covers: &[(usize, usize)]) -> Result<PointSet> {
    if n == 0 {
        return Err(Error::EmptyInput);
    }
    let mut below = vec![Vec::new(); n];
    for &(upper, lower) in covers {
        for &v in &[upper, lower] {
            if v >= n {
                return Err(Error::IndexOutOfRange { index: v, len: n });
            }
        }
        below[upper].push(lower);
    }
    let mut rows = vec![vec![0.0; n]; n];
    for (i, row) in rows.iter_mut().enumerate() {
        let mut stack = vec![i];
        while let Some(v) = stack.pop() {
            if row[v] == 0.0 {
                row[v] = 1.0;
                stack.extend(&below[v]);
            }
        }
    }
    // a cycle would make two down-sets equal
    for i in 0..n {
        for j in 0..i {
            if rows[i] == rows[j] {
                return Err(Error::InvalidParameter(
                    "cover relation contains a cycle".into(),
                ));
            }
        }
    }
    PointSet::from_rows(&rows)
}
