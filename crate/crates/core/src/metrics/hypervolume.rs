use rand::Rng as _;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::matrix::Matrix;
use crate::{par, rng};

/// Largest objective count handled by the exact sweep.
pub const EXACT_MAX_DIM: usize = 4;

const MC_CHUNK: usize = 4096;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum HypervolumeMode {
    Exact,
    MonteCarlo { samples: usize, seed: u64 },
}

/// Monte Carlo estimate with its binomial standard error.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct McEstimate {
    pub value: f64,
    pub std_error: f64,
    pub box_volume: f64,
}

fn check_front(front: &Matrix) -> Result<()> {
    match front.as_slice().iter().find(|v| v.is_nan() || **v < 0.0) {
        Some(v) => Err(Error::NegativeCoordinate { value: *v }),
        None => Ok(()),
    }
}

/// Volume of the union of the boxes `[0, f]` over the rows of `front`
/// (maximisation, origin as reference point).
pub fn hypervolume(front: &Matrix, mode: HypervolumeMode) -> Result<f64> {
    check_front(front)?;
    match mode {
        HypervolumeMode::Exact => {
            if front.cols() > EXACT_MAX_DIM {
                return Err(Error::InvalidParameter(format!(
                    "exact hypervolume supports at most {EXACT_MAX_DIM} objectives, got {}",
                    front.cols()
                )));
            }
            let pts: Vec<&[f64]> = front.iter_rows().collect();
            Ok(sweep(&non_dominated(&pts), front.cols()))
        }
        HypervolumeMode::MonteCarlo { samples, seed } => {
            Ok(hypervolume_mc(front, samples, seed)?.value)
        }
    }
}

/// Hit-or-miss estimate inside the bounding box `[0, max(front)]`.
///
/// Samples are drawn in fixed chunks of 4096, chunk `c` on ChaCha stream `c`,
/// so the estimate depends only on `(front, samples, seed)`.
pub fn hypervolume_mc(front: &Matrix, samples: usize, seed: u64) -> Result<McEstimate> {
    check_front(front)?;
    if samples == 0 {
        return Err(Error::InvalidParameter("sample count must be positive".into()));
    }
    let dim = front.cols();
    let mut upper = vec![0.0f64; dim];
    for r in front.iter_rows() {
        for (u, v) in upper.iter_mut().zip(r) {
            *u = u.max(*v);
        }
    }
    let box_volume: f64 = upper.iter().product();
    if box_volume == 0.0 {
        return Ok(McEstimate {
            value: 0.0,
            std_error: 0.0,
            box_volume,
        });
    }
    // big boxes first so hits exit early
    let pts: Vec<&[f64]> = front.iter_rows().collect();
    let mut pts = non_dominated(&pts);
    pts.sort_by(|a, b| {
        let va: f64 = a.iter().product();
        let vb: f64 = b.iter().product();
        vb.total_cmp(&va)
    });
    let chunks = samples.div_ceil(MC_CHUNK);
    let hits: Vec<u64> = par::map_range(chunks, |c| {
        let mut r = rng::rng_stream(seed, c as u64);
        let count = MC_CHUNK.min(samples - c * MC_CHUNK);
        let mut z = vec![0.0; dim];
        let mut hits = 0u64;
        for _ in 0..count {
            for (zj, uj) in z.iter_mut().zip(&upper) {
                *zj = r.gen::<f64>() * uj;
            }
            if pts.iter().any(|p| p.iter().zip(&z).all(|(pj, zj)| zj <= pj)) {
                hits += 1;
            }
        }
        hits
    });
    let hits: u64 = hits.iter().sum();
    let p = hits as f64 / samples as f64;
    Ok(McEstimate {
        value: box_volume * p,
        std_error: box_volume * (p * (1.0 - p) / samples as f64).sqrt(),
        box_volume,
    })
}

fn dominates_weakly(a: &[f64], b: &[f64]) -> bool {
    a.iter().zip(b).all(|(x, y)| x >= y)
}

fn non_dominated<'a>(pts: &[&'a [f64]]) -> Vec<&'a [f64]> {
    let mut out: Vec<&[f64]> = Vec::new();
    for (i, p) in pts.iter().enumerate() {
        // drop p if another point covers it (ties: keep the first copy)
        let covered = pts.iter().enumerate().any(|(j, q)| {
            j != i && dominates_weakly(q, p) && (q != p || j < i)
        });
        if !covered {
            out.push(p);
        }
    }
    out
}

/// Dimension sweep: slice along the last axis, recurse on the rest.
fn sweep(pts: &[&[f64]], dim: usize) -> f64 {
    if pts.is_empty() {
        return 0.0;
    }
    match dim {
        1 => pts.iter().map(|p| p[0]).fold(0.0, f64::max),
        2 => {
            let mut sorted: Vec<&[f64]> = pts.to_vec();
            sorted.sort_by(|a, b| b[0].total_cmp(&a[0]));
            let mut area = 0.0;
            let mut top = 0.0;
            for p in sorted {
                if p[1] > top {
                    area += p[0] * (p[1] - top);
                    top = p[1];
                }
            }
            area
        }
        _ => {
            let last = dim - 1;
            let mut sorted: Vec<&[f64]> = pts.to_vec();
            sorted.sort_by(|a, b| b[last].total_cmp(&a[last]));
            let mut volume = 0.0;
            for i in 0..sorted.len() {
                let next = sorted.get(i + 1).map_or(0.0, |p| p[last]);
                let depth = sorted[i][last] - next;
                if depth > 0.0 {
                    let slice: Vec<&[f64]> = sorted[..=i].iter().map(|p| &p[..last]).collect();
                    volume += depth * sweep(&non_dominated(&slice), last);
                }
            }
            volume
        }
    }
}
