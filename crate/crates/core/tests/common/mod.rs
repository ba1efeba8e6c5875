#![allow(dead_code)]

use kpareto::posort::PointSet;
use kpareto::relations::{Orientation, RelationSpec};
use kpareto::rng::Rng;
use rand::Rng as _;

/// Small random instance: 1..=max_n points in 2 or 3 dimensions on a coarse
/// grid (so ties and duplicates occur), counting or integer weights, and a
/// random componentwise relation.
pub fn random_instance(r: &mut Rng, max_n: usize) -> (PointSet, RelationSpec) {
    let n = r.gen_range(1..=max_n);
    let dim = r.gen_range(2..=3);
    let rows: Vec<Vec<f64>> = (0..n)
        .map(|_| (0..dim).map(|_| f64::from(r.gen_range(0..5u8))).collect())
        .collect();
    let ps = if r.gen_bool(0.5) {
        PointSet::from_rows(&rows).unwrap()
    } else {
        let w = (0..n).map(|_| f64::from(r.gen_range(1..=5u8))).collect();
        PointSet::weighted(&rows, w).unwrap()
    };
    let orientations: Vec<Orientation> = (0..dim)
        .map(|_| if r.gen_bool(0.5) { Orientation::Min } else { Orientation::Max })
        .collect();
    (ps, RelationSpec::componentwise(&orientations))
}

/// Brute-force po: mass of points strictly preferred under `rel`.
pub fn naive_po(ps: &PointSet, rel: &RelationSpec) -> Vec<f64> {
    (0..ps.len())
        .map(|i| {
            let mut s = 0.0;
            for j in 0..ps.len() {
                if rel.strictly_prefers(ps.point(j), ps.point(i)).unwrap() {
                    s += ps.weight(j);
                }
            }
            s
        })
        .collect()
}

/// Indices set in a selection bitmask.
pub fn members(mask: u32, n: usize) -> Vec<usize> {
    (0..n).filter(|i| mask >> i & 1 == 1).collect()
}
