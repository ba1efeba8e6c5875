//! k-Pareto optimality, `T_k` selections, choice and diversity.

mod choice;
mod continuous;
mod pointset;
mod poset;
mod ranking;

pub use choice::{
    choice, choice_by_integral, choice_of_selection, diversity, enumerate_selections,
    is_selection, max_choice_oracle, OracleResult, ORACLE_MAX_ITEMS,
};
pub use continuous::{
    analytic_cho_tk, analytic_diversity_tk, analytic_p_tk, find_k_for_measure, mc_sample_square,
    SquareDensity,
};
pub use pointset::PointSet;
pub use poset::poset_points;
pub use ranking::{
    fronts_as_sets, pareto_fronts, po_cmop, po_dominance_2d, po_exact, po_prob, t_k, PoRanking,
};
