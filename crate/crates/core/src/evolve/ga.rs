use std::time::Instant;

use rand::Rng as _;
use serde::{Deserialize, Serialize};

use super::knapsack::{evaluate, repair, KnapsackInstance};
use super::selection::{environmental_selection, Selector};
use crate::error::{Error, Result};
use crate::matrix::Matrix;
use crate::metrics::{hypervolume, HypervolumeMode, EXACT_MAX_DIM};
use crate::relations::Orientation;
use crate::{par, rng};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct GaConfig {
    pub pop_size: usize,
    pub generations: usize,
    /// Per-bit flip probability.
    pub mutation_prob: f64,
    pub selector: Selector,
    pub seed: u64,
    /// Hypervolume is recorded every `hv_interval` generations and at the end.
    pub hv_interval: usize,
    /// Monte Carlo samples when the objective count exceeds the exact limit.
    pub hv_samples: usize,
}

impl Default for GaConfig {
    fn default() -> Self {
        GaConfig {
            pop_size: 250,
            generations: 500,
            mutation_prob: 0.01,
            selector: Selector::PoProb,
            seed: 0,
            hv_interval: 10,
            hv_samples: 100_000,
        }
    }
}

impl GaConfig {
    pub fn validate(&self) -> Result<()> {
        if self.pop_size < 2 || !self.pop_size.is_multiple_of(2) {
            return Err(Error::InvalidParameter(format!(
                "pop_size must be even and at least 2, got {}",
                self.pop_size
            )));
        }
        if !(0.0..=1.0).contains(&self.mutation_prob) {
            return Err(Error::InvalidParameter(format!(
                "mutation_prob must lie in [0, 1], got {}",
                self.mutation_prob
            )));
        }
        if self.hv_interval == 0 || self.hv_samples == 0 {
            return Err(Error::InvalidParameter(
                "hv_interval and hv_samples must be positive".into(),
            ));
        }
        Ok(())
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GenerationRecord {
    pub gen: usize,
    pub hypervolume: f64,
}

#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
pub struct WallTimes {
    pub total_secs: f64,
    pub selection_secs: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct InstanceInfo {
    pub n_items: usize,
    pub n_knapsacks: usize,
    pub seed: u64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ExperimentResult {
    pub config: GaConfig,
    pub instance: InstanceInfo,
    pub seed: u64,
    pub per_generation: Vec<GenerationRecord>,
    /// Final population, one `0`/`1` string per individual.
    pub final_genomes: Vec<String>,
    pub final_objectives: Vec<Vec<f64>>,
    /// Set by callers that also write the final population to disk.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub final_front_csv: Option<String>,
    /// Timing varies run to run; take it out before comparing results.
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub wall_times: Option<WallTimes>,
}

impl ExperimentResult {
    pub fn final_hypervolume(&self) -> f64 {
        self.per_generation.last().map_or(0.0, |r| r.hypervolume)
    }

    pub fn final_matrix(&self) -> Matrix {
        Matrix::from_rows(&self.final_objectives).expect("population is non-empty")
    }

    /// Pretty JSON without wall times; identical configs give identical bytes.
    pub fn deterministic_json(&self) -> String {
        let mut copy = self.clone();
        copy.wall_times = None;
        serde_json::to_string_pretty(&copy).expect("result serializes")
    }
}

fn population_hv(objectives: &Matrix, config: &GaConfig) -> Result<f64> {
    let mode = if objectives.cols() <= EXACT_MAX_DIM {
        HypervolumeMode::Exact
    } else {
        HypervolumeMode::MonteCarlo {
            samples: config.hv_samples,
            seed: config.seed,
        }
    };
    hypervolume(objectives, mode)
}

fn repair_and_evaluate(genomes: &mut [Vec<bool>], instance: &KnapsackInstance) -> Vec<Vec<f64>> {
    let fixed: Vec<(Vec<bool>, Vec<f64>)> = par::map_slice(genomes, |g| {
        let mut g = g.clone();
        repair(&mut g, instance);
        let f = evaluate(&g, instance);
        (g, f)
    });
    let mut objs = Vec::with_capacity(fixed.len());
    for (slot, (g, f)) in genomes.iter_mut().zip(fixed) {
        *slot = g;
        objs.push(f);
    }
    objs
}

/// Generational GA on a knapsack instance. Parents are drawn uniformly with
/// replacement, recombined by uniform crossover, mutated bitwise, repaired,
/// and the next population is chosen from parents and offspring together.
pub fn evolve(instance: &KnapsackInstance, config: &GaConfig) -> Result<ExperimentResult> {
    config.validate()?;
    let start = Instant::now();
    let mut selection_secs = 0.0;
    let n = config.pop_size;
    let bits = instance.n_items;
    let mut r = rng::rng(config.seed);

    let mut pop: Vec<Vec<bool>> = (0..n)
        .map(|_| (0..bits).map(|_| r.gen_bool(0.5)).collect())
        .collect();
    let mut objs = repair_and_evaluate(&mut pop, instance);
    let mut per_generation = vec![GenerationRecord {
        gen: 0,
        hypervolume: population_hv(&Matrix::from_rows(&objs)?, config)?,
    }];

    for gen in 1..=config.generations {
        let mut offspring: Vec<Vec<bool>> = Vec::with_capacity(n);
        for _ in 0..n / 2 {
            let mut a = pop[r.gen_range(0..n)].clone();
            let mut b = pop[r.gen_range(0..n)].clone();
            for j in 0..bits {
                if r.gen_bool(0.5) {
                    std::mem::swap(&mut a[j], &mut b[j]);
                }
            }
            for child in [&mut a, &mut b] {
                for bit in child.iter_mut() {
                    if r.gen_bool(config.mutation_prob) {
                        *bit = !*bit;
                    }
                }
            }
            offspring.push(a);
            offspring.push(b);
        }
        let off_objs = repair_and_evaluate(&mut offspring, instance);
        pop.extend(offspring);
        objs.extend(off_objs);

        let t = Instant::now();
        let keep = environmental_selection(
            &Matrix::from_rows(&objs)?,
            config.selector,
            n,
            Orientation::Max,
        )?;
        selection_secs += t.elapsed().as_secs_f64();
        pop = keep.iter().map(|&i| std::mem::take(&mut pop[i])).collect();
        objs = keep.iter().map(|&i| std::mem::take(&mut objs[i])).collect();

        if gen % config.hv_interval == 0 || gen == config.generations {
            per_generation.push(GenerationRecord {
                gen,
                hypervolume: population_hv(&Matrix::from_rows(&objs)?, config)?,
            });
        }
    }

    Ok(ExperimentResult {
        config: config.clone(),
        instance: InstanceInfo {
            n_items: instance.n_items,
            n_knapsacks: instance.n_knapsacks,
            seed: instance.seed,
        },
        seed: config.seed,
        per_generation,
        final_genomes: pop
            .iter()
            .map(|g| g.iter().map(|b| if *b { '1' } else { '0' }).collect())
            .collect(),
        final_objectives: objs,
        final_front_csv: None,
        wall_times: Some(WallTimes {
            total_secs: start.elapsed().as_secs_f64(),
            selection_secs,
        }),
    })
}

/// Runs every config against the same instance, in parallel across configs.
pub fn run_many(instance: &KnapsackInstance, configs: &[GaConfig]) -> Result<Vec<ExperimentResult>> {
    par::map_slice(configs, |c| evolve(instance, c)).into_iter().collect()
}
