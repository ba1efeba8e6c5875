//! Discrete measures and empirical distribution functions.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Positive weights, one per item.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DiscreteMeasure {
    weights: Vec<f64>,
    total: f64,
}

impl DiscreteMeasure {
    pub fn new(weights: Vec<f64>) -> Result<Self> {
        if weights.iter().any(|w| !(w.is_finite() && *w > 0.0)) {
            return Err(Error::InvalidWeight);
        }
        let total = weights.iter().sum::<f64>();
        if !total.is_finite() {
            return Err(Error::InvalidWeight);
        }
        Ok(Self { weights, total })
    }

    /// Counting measure on `n` items.
    pub fn counting(n: usize) -> Self {
        Self {
            weights: vec![1.0; n],
            total: n as f64,
        }
    }

    pub fn len(&self) -> usize {
        self.weights.len()
    }

    pub fn is_empty(&self) -> bool {
        self.weights.is_empty()
    }

    pub fn weight(&self, i: usize) -> f64 {
        self.weights[i]
    }

    pub fn weights(&self) -> &[f64] {
        &self.weights
    }

    pub fn total(&self) -> f64 {
        self.total
    }

    /// True when every weight equals the first one.
    pub fn is_uniform(&self) -> bool {
        self.weights.windows(2).all(|w| w[0] == w[1])
    }

    /// Mass of `subset`.
    pub fn measure_of(&self, subset: &[usize]) -> Result<f64> {
        let mut s = 0.0;
        for &i in subset {
            s += self.weights.get(i).ok_or(Error::IndexOutOfRange {
                index: i,
                len: self.weights.len(),
            })?;
        }
        Ok(s)
    }
}

/// Empirical cumulative distribution `F(v) = mass{values <= v}`.
///
/// Stored as the distinct values in ascending order together with the
/// cumulative mass up to and including each of them, so a query is one
/// binary search.
#[derive(Debug, Clone, PartialEq)]
pub struct Ecdf {
    values: Vec<f64>,
    cumulative: Vec<f64>,
}

impl Ecdf {
    /// ECDF of `values` under the counting measure (each value has mass `1/n`).
    pub fn new(values: &[f64]) -> Result<Self> {
        if values.is_empty() {
            return Err(Error::EmptyInput);
        }
        let mut sorted = values.to_vec();
        sorted.sort_by(f64::total_cmp);
        let n = sorted.len() as f64;
        let mut out = Ecdf {
            values: Vec::new(),
            cumulative: Vec::new(),
        };
        // walk the sorted values; each time a new distinct value starts, close the previous one
        for (count, pair) in sorted.windows(2).enumerate() {
            if pair[0] != pair[1] {
                out.values.push(pair[0]);
                out.cumulative.push((count + 1) as f64 / n);
            }
        }
        out.values.push(sorted[sorted.len() - 1]);
        out.cumulative.push(1.0);
        Ok(out)
    }

    /// ECDF where item `i` carries mass `weights[i] / sum(weights)`.
    pub fn weighted(values: &[f64], weights: &[f64]) -> Result<Self> {
        if values.is_empty() {
            return Err(Error::EmptyInput);
        }
        if values.len() != weights.len() {
            return Err(Error::DimensionMismatch {
                expected: values.len(),
                got: weights.len(),
            });
        }
        let mut order: Vec<usize> = (0..values.len()).collect();
        order.sort_by(|&a, &b| values[a].total_cmp(&values[b]).then(a.cmp(&b)));
        let total: f64 = weights.iter().sum();
        let mut out = Ecdf {
            values: Vec::new(),
            cumulative: Vec::new(),
        };
        let mut running = 0.0;
        for (k, &i) in order.iter().enumerate() {
            running += weights[i];
            let last = k + 1 == order.len();
            if last || values[order[k + 1]] != values[i] {
                out.values.push(values[i]);
                out.cumulative.push(if last { 1.0 } else { running / total });
            }
        }
        Ok(out)
    }

    /// `F(v)`.
    #[inline]
    pub fn query(&self, v: f64) -> f64 {
        let idx = self.values.partition_point(|d| *d <= v);
        if idx == 0 {
            0.0
        } else {
            self.cumulative[idx - 1]
        }
    }

    /// Mass sitting exactly at `v`.
    #[inline]
    pub fn point_mass(&self, v: f64) -> f64 {
        let idx = self.values.partition_point(|d| *d < v);
        match self.values.get(idx) {
            Some(d) if *d == v => {
                let below = if idx == 0 { 0.0 } else { self.cumulative[idx - 1] };
                self.cumulative[idx] - below
            }
            _ => 0.0,
        }
    }

    /// `(F(v), point_mass(v))` with a single search.
    #[inline]
    pub fn query_with_mass(&self, v: f64) -> (f64, f64) {
        let idx = self.values.partition_point(|d| *d <= v);
        if idx == 0 {
            return (0.0, 0.0);
        }
        let f = self.cumulative[idx - 1];
        if self.values[idx - 1] == v {
            let below = if idx == 1 { 0.0 } else { self.cumulative[idx - 2] };
            (f, f - below)
        } else {
            (f, 0.0)
        }
    }

    pub fn distinct_values(&self) -> &[f64] {
        &self.values
    }

    pub fn cumulative_mass(&self) -> &[f64] {
        &self.cumulative
    }
}

/// Interval-anchored empirical function used for equality constraints
/// `h(x) in [a, b]`.
///
/// For a query `z` it returns the fraction of values lying in `[z, b]` when
/// `z < a`, in `[a, b]` when `a <= z <= b`, and in `[a, z]` when `z > b`.
#[derive(Debug, Clone, PartialEq)]
pub struct HStar {
    sorted: Vec<f64>,
    a: f64,
    b: f64,
}

impl HStar {
    pub fn new(values: &[f64], a: f64, b: f64) -> Result<Self> {
        if values.is_empty() {
            return Err(Error::EmptyInput);
        }
        if a > b {
            return Err(Error::InvalidInterval { lo: a, hi: b });
        }
        let mut sorted = values.to_vec();
        sorted.sort_by(f64::total_cmp);
        Ok(Self { sorted, a, b })
    }

    fn count_closed(&self, lo: f64, hi: f64) -> usize {
        let upper = self.sorted.partition_point(|v| *v <= hi);
        let lower = self.sorted.partition_point(|v| *v < lo);
        upper.saturating_sub(lower)
    }

    pub fn query(&self, z: f64) -> f64 {
        let count = if z < self.a {
            self.count_closed(z, self.b)
        } else if z <= self.b {
            self.count_closed(self.a, self.b)
        } else {
            self.count_closed(self.a, z)
        };
        count as f64 / self.sorted.len() as f64
    }
}
