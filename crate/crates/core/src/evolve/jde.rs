use std::fmt;
use std::sync::Arc;

use rand::Rng as _;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::matrix::Matrix;
use crate::measures::DiscreteMeasure;
use crate::posort::{pareto_fronts, po_cmop, PointSet};
use crate::relations::RelationSpec;
use crate::{par, rng};

/// Maps a decision vector to `(g_1..g_ng, h_1..h_nh, f_1..f_M)`.
pub type CmopFn = Arc<dyn Fn(&[f64]) -> Vec<f64> + Send + Sync>;

/// Constrained multi-objective minimisation problem with box bounds.
#[derive(Clone)]
pub struct CmopProblem {
    pub name: String,
    pub n_obj: usize,
    pub ng: usize,
    pub nh: usize,
    pub lower: Vec<f64>,
    pub upper: Vec<f64>,
    /// Equality constraints count as met when `|h| <= epsilon`.
    pub epsilon: f64,
    /// Known best objective value, single-objective problems only.
    pub optimum: Option<f64>,
    func: CmopFn,
}

impl fmt::Debug for CmopProblem {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("CmopProblem")
            .field("name", &self.name)
            .field("n_obj", &self.n_obj)
            .field("ng", &self.ng)
            .field("nh", &self.nh)
            .field("lower", &self.lower)
            .field("upper", &self.upper)
            .field("epsilon", &self.epsilon)
            .finish_non_exhaustive()
    }
}

pub const BUILTIN_PROBLEMS: [&str; 5] = [
    "sphere",
    "sphere-halfspace",
    "sphere-simplex",
    "sphere-plane",
    "binh-korn",
];

fn sphere(x: &[f64]) -> f64 {
    x.iter().map(|v| v * v).sum()
}

impl CmopProblem {
    #[allow(clippy::too_many_arguments)]
    pub fn new(
        name: &str,
        n_obj: usize,
        ng: usize,
        nh: usize,
        lower: Vec<f64>,
        upper: Vec<f64>,
        epsilon: f64,
        func: CmopFn,
    ) -> Result<Self> {
        if n_obj == 0 {
            return Err(Error::EmptyObjectiveBlock);
        }
        if lower.is_empty() || lower.len() != upper.len() {
            return Err(Error::InvalidParameter(
                "bounds must be non-empty and of equal length".into(),
            ));
        }
        if let Some((l, u)) = lower.iter().zip(&upper).find(|(l, u)| l.partial_cmp(u) != Some(std::cmp::Ordering::Less)) {
            return Err(Error::InvalidInterval { lo: *l, hi: *u });
        }
        if epsilon.is_nan() || epsilon <= 0.0 {
            return Err(Error::InvalidParameter("epsilon must be positive".into()));
        }
        Ok(CmopProblem {
            name: name.to_string(),
            n_obj,
            ng,
            nh,
            lower,
            upper,
            epsilon,
            optimum: None,
            func,
        })
    }

    /// One of [`BUILTIN_PROBLEMS`].
    pub fn builtin(name: &str) -> Result<Self> {
        let d5 = |lo: f64, hi: f64| (vec![lo; 5], vec![hi; 5]);
        let (lo, hi) = d5(-5.0, 5.0);
        let (p, optimum) = match name {
            "sphere" => (
                Self::new(name, 1, 0, 0, lo, hi, 1e-4, Arc::new(|x| vec![sphere(x)]))?,
                0.0,
            ),
            "sphere-halfspace" => (
                Self::new(name, 1, 1, 0, lo, hi, 1e-4, Arc::new(|x| vec![x[0] - 0.5, sphere(x)]))?,
                0.0,
            ),
            // min at x_i = 1/5
            "sphere-simplex" => (
                Self::new(
                    name,
                    1,
                    1,
                    0,
                    lo,
                    hi,
                    1e-4,
                    Arc::new(|x| vec![1.0 - x.iter().sum::<f64>(), sphere(x)]),
                )?,
                0.2,
            ),
            "sphere-plane" => (
                Self::new(
                    name,
                    1,
                    0,
                    1,
                    lo,
                    hi,
                    1e-3,
                    Arc::new(|x| vec![x.iter().sum::<f64>() - 1.0, sphere(x)]),
                )?,
                0.2,
            ),
            "binh-korn" => {
                let f: CmopFn = Arc::new(|x| {
                    let (a, b) = (x[0], x[1]);
                    vec![
                        (a - 5.0).powi(2) + b * b - 25.0,
                        7.7 - (a - 8.0).powi(2) - (b + 3.0).powi(2),
                        4.0 * a * a + 4.0 * b * b,
                        (a - 5.0).powi(2) + (b - 5.0).powi(2),
                    ]
                });
                let p = Self::new(name, 2, 2, 0, vec![0.0, 0.0], vec![5.0, 3.0], 1e-4, f)?;
                return Ok(p);
            }
            other => {
                return Err(Error::InvalidParameter(format!(
                    "unknown problem '{other}', expected one of {BUILTIN_PROBLEMS:?}"
                )))
            }
        };
        Ok(CmopProblem {
            optimum: Some(optimum),
            ..p
        })
    }

    pub fn dim(&self) -> usize {
        self.lower.len()
    }

    pub fn eq_bounds(&self) -> Vec<[f64; 2]> {
        vec![[-self.epsilon, self.epsilon]; self.nh]
    }

    /// Constraint and objective values, checked for length and finiteness.
    pub fn evaluate(&self, x: &[f64]) -> Result<Vec<f64>> {
        if x.len() != self.dim() {
            return Err(Error::DimensionMismatch {
                expected: self.dim(),
                got: x.len(),
            });
        }
        let out = (self.func)(x);
        let want = self.ng + self.nh + self.n_obj;
        if out.len() != want {
            return Err(Error::Evaluation(format!(
                "{} returned {} values, expected {want}",
                self.name,
                out.len()
            )));
        }
        if let Some(v) = out.iter().find(|v| !v.is_finite()) {
            return Err(Error::Evaluation(format!("{} returned {v} at {x:?}", self.name)));
        }
        Ok(out)
    }

    pub fn is_feasible(&self, evals: &[f64]) -> bool {
        evals[..self.ng].iter().all(|g| *g <= 0.0)
            && evals[self.ng..self.ng + self.nh]
                .iter()
                .all(|h| h.abs() <= self.epsilon)
    }

    pub fn objectives<'a>(&self, evals: &'a [f64]) -> &'a [f64] {
        &evals[self.ng + self.nh..]
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct JdeConfig {
    pub pop_size: usize,
    pub generations: usize,
    pub tau1: f64,
    pub tau2: f64,
    pub f_lower: f64,
    pub f_upper: f64,
    pub cr_lower: f64,
    pub cr_upper: f64,
    pub f_init: f64,
    pub cr_init: f64,
    pub seed: u64,
}

impl Default for JdeConfig {
    fn default() -> Self {
        JdeConfig {
            pop_size: 50,
            generations: 300,
            tau1: 0.1,
            tau2: 0.1,
            f_lower: 0.1,
            f_upper: 1.0,
            cr_lower: 0.0,
            cr_upper: 1.0,
            f_init: 0.5,
            cr_init: 0.9,
            seed: 0,
        }
    }
}

impl JdeConfig {
    pub fn validate(&self) -> Result<()> {
        let unit = |v: f64| (0.0..=1.0).contains(&v);
        if self.pop_size < 4 {
            return Err(Error::InvalidParameter("jDE needs pop_size >= 4".into()));
        }
        if !unit(self.tau1) || !unit(self.tau2) {
            return Err(Error::InvalidParameter("tau1 and tau2 must lie in [0, 1]".into()));
        }
        if !(0.0 < self.f_lower && self.f_lower <= self.f_upper)
            || !(self.f_lower..=self.f_upper).contains(&self.f_init)
        {
            return Err(Error::InvalidParameter("invalid F bounds or initial F".into()));
        }
        if !(unit(self.cr_lower) && unit(self.cr_upper) && self.cr_lower <= self.cr_upper)
            || !(self.cr_lower..=self.cr_upper).contains(&self.cr_init)
        {
            return Err(Error::InvalidParameter("invalid CR bounds or initial CR".into()));
        }
        Ok(())
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct JdeResult {
    pub problem: String,
    pub config: JdeConfig,
    pub population: Vec<Vec<f64>>,
    /// `(g, h, f)` rows matching `population`.
    pub evaluations: Vec<Vec<f64>>,
    /// po of the final population under the lexicographic constraint/objective relation.
    pub po: Vec<f64>,
    pub feasible: Vec<bool>,
    /// Feasible individuals not dominated in objectives by another feasible one.
    pub feasible_front: Vec<usize>,
    /// Individuals with the smallest po.
    pub best: Vec<usize>,
}

impl JdeResult {
    /// Smallest first objective among feasible individuals.
    pub fn best_feasible_objective(&self, problem: &CmopProblem) -> Option<f64> {
        self.evaluations
            .iter()
            .zip(&self.feasible)
            .filter(|(_, f)| **f)
            .map(|(e, _)| problem.objectives(e)[0])
            .reduce(f64::min)
    }
}

/// Folds `v` back into `[lo, hi]` by mirroring at the bounds.
pub fn reflect(v: f64, lo: f64, hi: f64) -> f64 {
    if (lo..=hi).contains(&v) {
        return v;
    }
    let w = hi - lo;
    let t = (v - lo).rem_euclid(2.0 * w);
    let out = if t > w { lo + 2.0 * w - t } else { lo + t };
    out.clamp(lo, hi)
}

fn evaluate_all(problem: &CmopProblem, xs: &[Vec<f64>]) -> Result<Vec<Vec<f64>>> {
    par::map_slice(xs, |x| problem.evaluate(x)).into_iter().collect()
}

fn cmop_po(problem: &CmopProblem, evals: &[Vec<f64>]) -> Result<Vec<f64>> {
    Ok(po_cmop(&Matrix::from_rows(evals)?, problem.ng, problem.nh, &problem.eq_bounds())?.po)
}

/// jDE (rand/1/bin, self-adaptive F and CR) with po as fitness, started from
/// a uniform random population.
pub fn jde_solve(problem: &CmopProblem, config: &JdeConfig) -> Result<JdeResult> {
    config.validate()?;
    let mut r = rng::rng_stream(config.seed, 1);
    let init = (0..config.pop_size)
        .map(|_| {
            problem
                .lower
                .iter()
                .zip(&problem.upper)
                .map(|(l, u)| r.gen_range(*l..=*u))
                .collect()
        })
        .collect();
    jde_solve_from(problem, config, init)
}

/// jDE from a given initial population.
///
/// Each generation builds one trial per target, evaluates all trials, computes
/// po over targets and trials together, and replaces a target when the
/// trial's po is not larger.
pub fn jde_solve_from(
    problem: &CmopProblem,
    config: &JdeConfig,
    initial: Vec<Vec<f64>>,
) -> Result<JdeResult> {
    config.validate()?;
    let ps = initial.len();
    if ps != config.pop_size {
        return Err(Error::InvalidParameter(format!(
            "initial population has {ps} members, config expects {}",
            config.pop_size
        )));
    }
    let dim = problem.dim();
    for x in &initial {
        if x.len() != dim {
            return Err(Error::DimensionMismatch {
                expected: dim,
                got: x.len(),
            });
        }
    }
    let mut r = rng::rng(config.seed);
    let mut pop: Vec<Vec<f64>> = initial
        .into_iter()
        .map(|x| {
            x.iter()
                .enumerate()
                .map(|(k, v)| reflect(*v, problem.lower[k], problem.upper[k]))
                .collect()
        })
        .collect();
    let mut evals = evaluate_all(problem, &pop)?;
    let mut f_param = vec![config.f_init; ps];
    let mut cr_param = vec![config.cr_init; ps];

    for _ in 0..config.generations {
        let mut trials = Vec::with_capacity(ps);
        let mut trial_f = Vec::with_capacity(ps);
        let mut trial_cr = Vec::with_capacity(ps);
        for i in 0..ps {
            let f = if r.gen_bool(config.tau1) {
                config.f_lower + r.gen::<f64>() * (config.f_upper - config.f_lower)
            } else {
                f_param[i]
            };
            let cr = if r.gen_bool(config.tau2) {
                config.cr_lower + r.gen::<f64>() * (config.cr_upper - config.cr_lower)
            } else {
                cr_param[i]
            };
            let mut pick = |taken: &[usize]| loop {
                let c = r.gen_range(0..ps);
                if c != i && !taken.contains(&c) {
                    break c;
                }
            };
            let r1 = pick(&[]);
            let r2 = pick(&[r1]);
            let r3 = pick(&[r1, r2]);
            let jrand = r.gen_range(0..dim);
            let trial: Vec<f64> = (0..dim)
                .map(|k| {
                    if k == jrand || r.gen::<f64>() < cr {
                        let v = pop[r1][k] + f * (pop[r2][k] - pop[r3][k]);
                        reflect(v, problem.lower[k], problem.upper[k])
                    } else {
                        pop[i][k]
                    }
                })
                .collect();
            trials.push(trial);
            trial_f.push(f);
            trial_cr.push(cr);
        }
        let trial_evals = evaluate_all(problem, &trials)?;
        let mut union = evals.clone();
        union.extend(trial_evals.iter().cloned());
        let po = cmop_po(problem, &union)?;
        for (i, ((t, e), (f, cr))) in trials
            .into_iter()
            .zip(trial_evals)
            .zip(trial_f.into_iter().zip(trial_cr))
            .enumerate()
        {
            if po[ps + i] <= po[i] {
                pop[i] = t;
                evals[i] = e;
                f_param[i] = f;
                cr_param[i] = cr;
            }
        }
    }

    let po = cmop_po(problem, &evals)?;
    let feasible: Vec<bool> = evals.iter().map(|e| problem.is_feasible(e)).collect();
    let feasible_idx: Vec<usize> = (0..ps).filter(|&i| feasible[i]).collect();
    let feasible_front = if feasible_idx.is_empty() {
        Vec::new()
    } else {
        let objs: Vec<&[f64]> = feasible_idx.iter().map(|&i| problem.objectives(&evals[i])).collect();
        let sub = PointSet::new(Matrix::from_rows(&objs)?, DiscreteMeasure::counting(objs.len()))?;
        let front = pareto_fronts(&sub, &RelationSpec::all_min())?;
        feasible_idx
            .iter()
            .zip(front)
            .filter(|(_, f)| *f == 0)
            .map(|(i, _)| *i)
            .collect()
    };
    let min_po = po.iter().copied().fold(f64::INFINITY, f64::min);
    let best = (0..ps).filter(|&i| po[i] == min_po).collect();
    Ok(JdeResult {
        problem: problem.name.clone(),
        config: config.clone(),
        population: pop,
        evaluations: evals,
        po,
        feasible,
        feasible_front,
        best,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn cfg(generations: usize, seed: u64) -> JdeConfig {
        JdeConfig {
            generations,
            seed,
            ..JdeConfig::default()
        }
    }

    #[test]
    fn reflection_stays_in_bounds() {
        assert_eq!(reflect(0.3, 0.0, 1.0), 0.3);
        assert!((reflect(1.25, 0.0, 1.0) - 0.75).abs() < 1e-15);
        assert!((reflect(-0.25, 0.0, 1.0) - 0.25).abs() < 1e-15);
        assert!((reflect(2.25, 0.0, 1.0) - 0.25).abs() < 1e-15);
        for v in [-1e9, -3.7, 12.0, 1e12] {
            let x = reflect(v, -5.0, 5.0);
            assert!((-5.0..=5.0).contains(&x));
        }
    }

    #[test]
    fn unconstrained_sphere_converges() {
        let p = CmopProblem::builtin("sphere").unwrap();
        let res = jde_solve(&p, &cfg(200, 1)).unwrap();
        assert!(res.best_feasible_objective(&p).unwrap() < 1e-3);
    }

    #[test]
    fn halfspace_best_are_feasible() {
        let p = CmopProblem::builtin("sphere-halfspace").unwrap();
        let res = jde_solve(&p, &cfg(100, 2)).unwrap();
        assert!(res.best.iter().all(|&i| res.feasible[i]));
        for x in &res.population {
            assert!(x.iter().all(|v| (-5.0..=5.0).contains(v)));
        }
    }

    #[test]
    fn simplex_sphere_reaches_optimum() {
        let p = CmopProblem::builtin("sphere-simplex").unwrap();
        let res = jde_solve(&p, &cfg(300, 3)).unwrap();
        assert!(res.best.iter().all(|&i| res.feasible[i]));
        assert!((res.best_feasible_objective(&p).unwrap() - 0.2).abs() < 1e-2);
    }

    #[test]
    fn plane_sphere_finds_feasible_points() {
        let p = CmopProblem::builtin("sphere-plane").unwrap();
        let res = jde_solve(&p, &cfg(300, 4)).unwrap();
        assert!(res.best.iter().all(|&i| res.feasible[i]));
        assert!((res.best_feasible_objective(&p).unwrap() - 0.2).abs() < 1e-2);
    }

    #[test]
    fn binh_korn_front_is_feasible_and_spread() {
        let p = CmopProblem::builtin("binh-korn").unwrap();
        let res = jde_solve(&p, &cfg(100, 5)).unwrap();
        assert!(res.feasible_front.len() >= 5);
        for &i in &res.feasible_front {
            assert!(p.is_feasible(&res.evaluations[i]));
        }
    }

    #[test]
    fn identical_population_stays_put() {
        let p = CmopProblem::builtin("sphere").unwrap();
        let start = vec![vec![1.0, -2.0, 0.5, 0.0, 3.0]; 10];
        let c = JdeConfig {
            pop_size: 10,
            ..cfg(5, 0)
        };
        let res = jde_solve_from(&p, &c, start.clone()).unwrap();
        assert_eq!(res.population, start);
        assert!(res.po.iter().all(|v| *v == res.po[0]));
    }

    #[test]
    fn deterministic_for_seed() {
        let p = CmopProblem::builtin("binh-korn").unwrap();
        let a = jde_solve(&p, &cfg(20, 8)).unwrap();
        let b = jde_solve(&p, &cfg(20, 8)).unwrap();
        assert_eq!(serde_json::to_string(&a).unwrap(), serde_json::to_string(&b).unwrap());
    }

    #[test]
    fn evaluation_errors_surface() {
        let p = CmopProblem::new(
            "nan",
            1,
            0,
            0,
            vec![0.0],
            vec![1.0],
            1e-4,
            Arc::new(|x| vec![if x[0] > 0.5 { f64::NAN } else { x[0] }]),
        )
        .unwrap();
        assert!(matches!(
            jde_solve(&p, &cfg(10, 0)),
            Err(Error::Evaluation(_))
        ));
        assert!(CmopProblem::builtin("nope").is_err());
        assert!(CmopProblem::new("bad", 1, 0, 0, vec![1.0], vec![1.0], 1e-4, Arc::new(|x| x.to_vec())).is_err());
    }
}
