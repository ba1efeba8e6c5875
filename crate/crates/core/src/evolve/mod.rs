//! Evolutionary engine: multi-objective knapsack GA with interchangeable
//! environmental selection, and a jDE solver for constrained problems.

mod ga;
mod jde;
mod knapsack;
mod selection;

pub use ga::{
    evolve, run_many, ExperimentResult, GaConfig, GenerationRecord, InstanceInfo, WallTimes,
};
pub use jde::{
    jde_solve, jde_solve_from, reflect, CmopFn, CmopProblem, JdeConfig, JdeResult,
    BUILTIN_PROBLEMS,
};
pub use knapsack::{evaluate, knapsack_generate, repair, KnapsackInstance, VALUE_RANGE};
pub use selection::{crowding_distance, environmental_selection, Selector};
