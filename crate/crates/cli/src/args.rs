use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};
use kpareto::evolve::Selector;
use serde::{Deserialize, Serialize};

use crate::config::Section;

#[derive(Debug, Parser)]
#[command(name = "kpareto", version, about = "k-Pareto optimality sorting, selection and experiments")]
pub struct Cli {
    /// TOML file with one table per subcommand; flags override it.
    #[arg(long, global = true)]
    pub config: Option<PathBuf>,
    /// Worker threads (default: all cores).
    #[arg(long, global = true)]
    pub threads: Option<usize>,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Rank points by po and by Pareto front.
    Sort(SortArgs),
    /// Pick T_k by k, by measure budget m or by measure fraction; report choice.
    Select(SelectArgs),
    /// Exhaustive maximum-choice search over all selections (at most 16 points).
    Oracle(OracleArgs),
    /// Front labels from both sorting methods on a grid or a uniform sample.
    SortGrid(GridArgs),
    /// Kendall's tau through choice.
    Tau(TauArgs),
    /// Largest T_k of a 2-column sample whose diversity is at least 1/2.
    Partition(PartitionArgs),
    /// Knapsack GA runs over seeds and selectors.
    Ga(GaArgs),
    /// jDE on a built-in constrained problem.
    Cmop(CmopArgs),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum MeasureKind {
    /// Weight column if present, else counting.
    File,
    /// One per row; a weight column is ignored.
    Counting,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum SortMode {
    /// Pairwise comparison under the relation.
    Exact,
    /// Product of per-axis empirical CDFs (componentwise relations only).
    Prob,
}

pub const DEFAULT_RELATION: &str = "componentwise(all=min)";

#[derive(Debug, Clone, Default, Args, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SortArgs {
    /// Points CSV: header x1..xM, optional trailing `weight` column.
    #[arg(long)]
    pub input: Option<PathBuf>,
    /// Relation text, e.g. `componentwise(min,max)` or `cone(a=1)`.
    #[arg(long)]
    pub relation: Option<String>,
    #[arg(long, value_enum)]
    pub measure: Option<MeasureKind>,
    #[arg(long, value_enum)]
    pub mode: Option<SortMode>,
    #[arg(long)]
    pub out_dir: Option<PathBuf>,
}

#[derive(Debug, Clone, Default, Args, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SelectArgs {
    #[arg(long)]
    pub input: Option<PathBuf>,
    #[arg(long)]
    pub relation: Option<String>,
    #[arg(long, value_enum)]
    pub measure: Option<MeasureKind>,
    /// Keep items with po <= k (po < k with --strict).
    #[arg(long)]
    pub k: Option<f64>,
    /// Largest T_k with measure at most m.
    #[arg(long)]
    pub m: Option<f64>,
    /// Smallest T_k holding at least this share of the total measure.
    #[arg(long)]
    pub fraction: Option<f64>,
    #[arg(long, num_args = 0..=1, default_missing_value = "true")]
    pub strict: Option<bool>,
    #[arg(long)]
    pub out_dir: Option<PathBuf>,
}

#[derive(Debug, Clone, Default, Args, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct OracleArgs {
    #[arg(long)]
    pub input: Option<PathBuf>,
    #[arg(long)]
    pub relation: Option<String>,
    #[arg(long, value_enum)]
    pub measure: Option<MeasureKind>,
    /// Measure budget.
    #[arg(long)]
    pub m: Option<f64>,
    #[arg(long)]
    pub out_dir: Option<PathBuf>,
}

#[derive(Debug, Clone, Default, Args, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct GridArgs {
    /// Side of an n x n integer grid.
    #[arg(long)]
    pub grid: Option<usize>,
    /// Number of uniform points in the unit square.
    #[arg(long)]
    pub uniform: Option<usize>,
    #[arg(long)]
    pub seed: Option<u64>,
    #[arg(long)]
    pub out_dir: Option<PathBuf>,
}

#[derive(Debug, Clone, Default, Args, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct TauArgs {
    /// Two-column CSV with distinct rows.
    #[arg(long)]
    pub input: Option<PathBuf>,
    #[arg(long)]
    pub out_dir: Option<PathBuf>,
}

#[derive(Debug, Clone, Default, Args, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct PartitionArgs {
    /// Two-column CSV, both columns higher-is-better.
    #[arg(long)]
    pub input: Option<PathBuf>,
    #[arg(long)]
    pub out_dir: Option<PathBuf>,
}

fn parse_selector(s: &str) -> Result<Selector, String> {
    s.parse().map_err(|e: kpareto::Error| e.to_string())
}

#[derive(Debug, Clone, Default, Args, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct GaArgs {
    /// Instance CSV bundle (`knapsack,item,profit,weight`); generated if absent.
    #[arg(long)]
    pub instance: Option<PathBuf>,
    #[arg(long)]
    pub n_items: Option<usize>,
    #[arg(long)]
    pub n_knapsacks: Option<usize>,
    #[arg(long)]
    pub instance_seed: Option<u64>,
    /// Comma-separated: nsga2,po_count,po_prob.
    #[arg(long, value_delimiter = ',', value_parser = parse_selector)]
    pub selectors: Option<Vec<Selector>>,
    /// Comma-separated run seeds.
    #[arg(long, value_delimiter = ',')]
    pub seeds: Option<Vec<u64>>,
    #[arg(long)]
    pub pop_size: Option<usize>,
    #[arg(long)]
    pub generations: Option<usize>,
    #[arg(long)]
    pub mutation_prob: Option<f64>,
    #[arg(long)]
    pub hv_interval: Option<usize>,
    #[arg(long)]
    pub hv_samples: Option<usize>,
    #[arg(long)]
    pub out_dir: Option<PathBuf>,
}

#[derive(Debug, Clone, Default, Args, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct CmopArgs {
    /// sphere, sphere-halfspace, sphere-simplex, sphere-plane or binh-korn.
    #[arg(long)]
    pub problem: Option<String>,
    #[arg(long)]
    pub pop_size: Option<usize>,
    #[arg(long)]
    pub generations: Option<usize>,
    #[arg(long)]
    pub tau1: Option<f64>,
    #[arg(long)]
    pub tau2: Option<f64>,
    #[arg(long)]
    pub seed: Option<u64>,
    #[arg(long)]
    pub out_dir: Option<PathBuf>,
}

fn default_out(o: &mut Option<PathBuf>) {
    o.get_or_insert_with(|| PathBuf::from("out"));
}

impl Section for SortArgs {
    const NAME: &'static str = "sort";
    fn fill_defaults(&mut self) {
        self.relation.get_or_insert_with(|| DEFAULT_RELATION.into());
        self.measure.get_or_insert(MeasureKind::File);
        self.mode.get_or_insert(SortMode::Exact);
        default_out(&mut self.out_dir);
    }
}

impl Section for SelectArgs {
    const NAME: &'static str = "select";
    fn fill_defaults(&mut self) {
        self.relation.get_or_insert_with(|| DEFAULT_RELATION.into());
        self.measure.get_or_insert(MeasureKind::File);
        self.strict.get_or_insert(false);
        default_out(&mut self.out_dir);
    }
}

impl Section for OracleArgs {
    const NAME: &'static str = "oracle";
    fn fill_defaults(&mut self) {
        self.relation.get_or_insert_with(|| DEFAULT_RELATION.into());
        self.measure.get_or_insert(MeasureKind::File);
        default_out(&mut self.out_dir);
    }
}

impl Section for GridArgs {
    const NAME: &'static str = "sort-grid";
    fn fill_defaults(&mut self) {
        if self.grid.is_none() && self.uniform.is_none() {
            self.uniform = Some(500);
        }
        self.seed.get_or_insert(0);
        default_out(&mut self.out_dir);
    }
}

impl Section for TauArgs {
    const NAME: &'static str = "tau";
    fn fill_defaults(&mut self) {
        default_out(&mut self.out_dir);
    }
}

impl Section for PartitionArgs {
    const NAME: &'static str = "partition";
    fn fill_defaults(&mut self) {
        default_out(&mut self.out_dir);
    }
}

impl Section for GaArgs {
    const NAME: &'static str = "ga";
    fn fill_defaults(&mut self) {
        if self.instance.is_none() {
            self.n_items.get_or_insert(100);
            self.n_knapsacks.get_or_insert(2);
        }
        self.instance_seed.get_or_insert(0);
        self.selectors.get_or_insert_with(|| Selector::ALL.to_vec());
        self.seeds.get_or_insert_with(|| (0..5).collect());
        self.pop_size.get_or_insert(100);
        self.generations.get_or_insert(100);
        self.mutation_prob.get_or_insert(0.01);
        self.hv_interval.get_or_insert(10);
        self.hv_samples.get_or_insert(100_000);
        default_out(&mut self.out_dir);
    }
}

impl Section for CmopArgs {
    const NAME: &'static str = "cmop";
    fn fill_defaults(&mut self) {
        let d = kpareto::evolve::JdeConfig::default();
        self.problem.get_or_insert_with(|| "sphere-simplex".into());
        self.pop_size.get_or_insert(d.pop_size);
        self.generations.get_or_insert(d.generations);
        self.tau1.get_or_insert(d.tau1);
        self.tau2.get_or_insert(d.tau2);
        self.seed.get_or_insert(d.seed);
        default_out(&mut self.out_dir);
    }
}

pub const SECTIONS: [&str; 8] = [
    SortArgs::NAME,
    SelectArgs::NAME,
    OracleArgs::NAME,
    GridArgs::NAME,
    TauArgs::NAME,
    PartitionArgs::NAME,
    GaArgs::NAME,
    CmopArgs::NAME,
];
