use std::io::{Read, Write};

use rand::Rng as _;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::rng;

/// Multi-objective 0/1 knapsack: one profit and one weight row per knapsack.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct KnapsackInstance {
    pub n_items: usize,
    pub n_knapsacks: usize,
    /// `profits[k][j]`.
    pub profits: Vec<Vec<u32>>,
    /// `weights[k][j]`.
    pub weights: Vec<Vec<u32>>,
    pub capacities: Vec<f64>,
    pub seed: u64,
    /// Items in removal order for [`repair`]: ascending best profit/weight ratio.
    #[serde(skip)]
    removal_order: Vec<usize>,
}

pub const VALUE_RANGE: std::ops::RangeInclusive<u32> = 10..=100;

impl KnapsackInstance {
    /// Builds an instance from explicit tables. Capacities are half of each
    /// knapsack's total weight.
    pub fn new(profits: Vec<Vec<u32>>, weights: Vec<Vec<u32>>, seed: u64) -> Result<Self> {
        let n_knapsacks = profits.len();
        if n_knapsacks == 0 || weights.len() != n_knapsacks {
            return Err(Error::InvalidParameter(
                "profits and weights need the same positive number of knapsacks".into(),
            ));
        }
        let n_items = profits[0].len();
        if n_items == 0 {
            return Err(Error::EmptyInput);
        }
        for row in profits.iter().chain(&weights) {
            if row.len() != n_items {
                return Err(Error::DimensionMismatch {
                    expected: n_items,
                    got: row.len(),
                });
            }
            if row.contains(&0) {
                return Err(Error::InvalidParameter("profits and weights must be positive".into()));
            }
        }
        let capacities = weights
            .iter()
            .map(|w| 0.5 * w.iter().map(|v| f64::from(*v)).sum::<f64>())
            .collect();
        let best_ratio: Vec<f64> = (0..n_items)
            .map(|j| {
                (0..n_knapsacks)
                    .map(|k| f64::from(profits[k][j]) / f64::from(weights[k][j]))
                    .fold(f64::NEG_INFINITY, f64::max)
            })
            .collect();
        let mut removal_order: Vec<usize> = (0..n_items).collect();
        removal_order.sort_by(|&a, &b| best_ratio[a].total_cmp(&best_ratio[b]).then(a.cmp(&b)));
        Ok(KnapsackInstance {
            n_items,
            n_knapsacks,
            profits,
            weights,
            capacities,
            seed,
            removal_order,
        })
    }

    pub fn is_feasible(&self, genome: &[bool]) -> bool {
        self.loads(genome)
            .iter()
            .zip(&self.capacities)
            .all(|(l, c)| *l <= *c)
    }

    fn loads(&self, genome: &[bool]) -> Vec<f64> {
        self.weights
            .iter()
            .map(|w| {
                w.iter()
                    .zip(genome)
                    .filter(|(_, g)| **g)
                    .map(|(v, _)| f64::from(*v))
                    .sum()
            })
            .collect()
    }

    /// CSV bundle: `knapsack,item,profit,weight`, one row per cell.
    pub fn write_csv<W: Write>(&self, writer: W) -> Result<()> {
        let mut w = csv::Writer::from_writer(writer);
        w.write_record(["knapsack", "item", "profit", "weight"])?;
        for k in 0..self.n_knapsacks {
            for j in 0..self.n_items {
                w.write_record([
                    k.to_string(),
                    j.to_string(),
                    self.profits[k][j].to_string(),
                    self.weights[k][j].to_string(),
                ])?;
            }
        }
        w.flush()?;
        Ok(())
    }

    pub fn read_csv<R: Read>(reader: R, seed: u64) -> Result<Self> {
        let mut r = csv::ReaderBuilder::new().trim(csv::Trim::All).from_reader(reader);
        let mut cells: Vec<(usize, usize, u32, u32)> = Vec::new();
        for rec in r.records() {
            let rec = rec?;
            let field = |i: usize| -> Result<&str> {
                rec.get(i).ok_or_else(|| Error::Parse {
                    input: format!("{rec:?}"),
                    reason: "expected 4 fields".into(),
                })
            };
            let parse = |s: &str| -> Result<u64> {
                s.parse().map_err(|_| Error::Parse {
                    input: s.to_string(),
                    reason: "expected a non-negative integer".into(),
                })
            };
            cells.push((
                parse(field(0)?)? as usize,
                parse(field(1)?)? as usize,
                parse(field(2)?)? as u32,
                parse(field(3)?)? as u32,
            ));
        }
        if cells.is_empty() {
            return Err(Error::EmptyInput);
        }
        let nk = cells.iter().map(|c| c.0).max().unwrap_or(0) + 1;
        let ni = cells.iter().map(|c| c.1).max().unwrap_or(0) + 1;
        if cells.len() != nk * ni {
            return Err(Error::InvalidParameter(format!(
                "expected {} cells for {nk} knapsacks x {ni} items, got {}",
                nk * ni,
                cells.len()
            )));
        }
        let mut profits = vec![vec![0u32; ni]; nk];
        let mut weights = vec![vec![0u32; ni]; nk];
        for (k, j, p, w) in cells {
            profits[k][j] = p;
            weights[k][j] = w;
        }
        Self::new(profits, weights, seed)
    }
}

/// Random instance with integer profits and weights uniform in `[10, 100]`.
pub fn knapsack_generate(n_items: usize, n_knapsacks: usize, seed: u64) -> Result<KnapsackInstance> {
    if n_items == 0 || n_knapsacks == 0 {
        return Err(Error::InvalidParameter("need at least one item and one knapsack".into()));
    }
    let mut r = rng::rng(seed);
    let mut table = || -> Vec<Vec<u32>> {
        (0..n_knapsacks)
            .map(|_| (0..n_items).map(|_| r.gen_range(VALUE_RANGE)).collect())
            .collect()
    };
    let profits = table();
    let weights = table();
    KnapsackInstance::new(profits, weights, seed)
}

/// Drops selected items, lowest best profit/weight ratio first, until every
/// capacity holds.
pub fn repair(genome: &mut [bool], instance: &KnapsackInstance) {
    let mut loads = instance.loads(genome);
    let over = |loads: &[f64]| loads.iter().zip(&instance.capacities).any(|(l, c)| *l > *c);
    if !over(&loads) {
        return;
    }
    for &j in &instance.removal_order {
        if !genome[j] {
            continue;
        }
        genome[j] = false;
        for (k, l) in loads.iter_mut().enumerate() {
            *l -= f64::from(instance.weights[k][j]);
        }
        if !over(&loads) {
            return;
        }
    }
}

/// Total profit per knapsack.
pub fn evaluate(genome: &[bool], instance: &KnapsackInstance) -> Vec<f64> {
    instance
        .profits
        .iter()
        .map(|p| {
            p.iter()
                .zip(genome)
                .filter(|(_, g)| **g)
                .map(|(v, _)| f64::from(*v))
                .sum()
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn generator_contract() {
        for seed in 0..20 {
            let inst = knapsack_generate(50, 3, seed).unwrap();
            for row in inst.profits.iter().chain(&inst.weights) {
                assert!(row.iter().all(|v| VALUE_RANGE.contains(v)));
            }
            for k in 0..3 {
                let total: u32 = inst.weights[k].iter().sum();
                assert_eq!(inst.capacities[k], f64::from(total) / 2.0);
            }
            assert_eq!(inst, knapsack_generate(50, 3, seed).unwrap());
        }
    }

    #[test]
    fn repair_leaves_feasible_genomes_alone() {
        let inst = knapsack_generate(30, 2, 0).unwrap();
        let mut empty = vec![false; 30];
        repair(&mut empty, &inst);
        assert_eq!(empty, vec![false; 30]);
        let mut some: Vec<bool> = (0..30).map(|j| j % 5 == 0).collect();
        let before = some.clone();
        assert!(inst.is_feasible(&some));
        repair(&mut some, &inst);
        assert_eq!(some, before);
    }

    #[test]
    fn repair_all_ones() {
        let inst = knapsack_generate(100, 2, 0).unwrap();
        let mut g = vec![true; 100];
        repair(&mut g, &inst);
        assert!(inst.is_feasible(&g));
        let loads = inst.loads(&g);
        for (l, c) in loads.iter().zip(&inst.capacities) {
            assert!(*l > 0.8 * c, "load {l} of capacity {c}");
        }
        // removing stops as soon as everything fits: re-adding the last removed item breaks it
        let last = inst.removal_order.iter().rev().find(|&&j| !g[j]).copied().unwrap();
        let mut g2 = g.clone();
        g2[last] = true;
        assert!(!inst.is_feasible(&g2));
    }

    #[test]
    fn evaluate_is_additive() {
        let inst = knapsack_generate(10, 3, 4).unwrap();
        assert_eq!(evaluate(&[false; 10], &inst), vec![0.0; 3]);
        let mut one = vec![false; 10];
        one[4] = true;
        let col: Vec<f64> = (0..3).map(|k| f64::from(inst.profits[k][4])).collect();
        assert_eq!(evaluate(&one, &inst), col);
        let a: Vec<bool> = (0..10).map(|j| j < 4).collect();
        let b: Vec<bool> = (0..10).map(|j| j >= 6).collect();
        let u: Vec<bool> = a.iter().zip(&b).map(|(x, y)| *x || *y).collect();
        let sum: Vec<f64> = evaluate(&a, &inst)
            .iter()
            .zip(evaluate(&b, &inst))
            .map(|(x, y)| x + y)
            .collect();
        assert_eq!(evaluate(&u, &inst), sum);
    }

    #[test]
    fn csv_round_trip() {
        let inst = knapsack_generate(7, 2, 9).unwrap();
        let mut buf = Vec::new();
        inst.write_csv(&mut buf).unwrap();
        let back = KnapsackInstance::read_csv(buf.as_slice(), 9).unwrap();
        assert_eq!(inst, back);
        assert_eq!(inst.removal_order, back.removal_order);
    }
}
