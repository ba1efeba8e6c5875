//! Acceptance gate: one line per criterion, then a determinism rerun.
//!
//! Run with `cargo test -p kpareto --test acceptance -- --nocapture` to see
//! the report.

mod common;

use std::time::{Duration, Instant};

use common::{members, random_instance};
use kpareto::evolve::*;
use kpareto::metrics::{dominated_fraction, kendall_tau};
use kpareto::posort::*;
use kpareto::relations::{Orientation, RelationSpec};
use kpareto::{rng, Matrix};
use rand::Rng as _;

struct Outcome {
    pass: bool,
    detail: String,
    /// Everything the criterion computed that must be reproducible.
    digest: String,
}

fn outcome(pass: bool, detail: String, digest: String) -> Outcome {
    Outcome { pass, detail, digest }
}

fn six_points() -> PointSet {
    PointSet::from_rows(&[
        [6.5, 0.5],
        [4.5, 1.5],
        [0.5, 3.5],
        [7.5, 2.5],
        [3.0, 4.5],
        [4.0, 5.5],
    ])
    .unwrap()
}

fn c1_worked_example() -> Outcome {
    let start = Instant::now();
    let ps = six_points();
    let rel = RelationSpec::all_min();
    let ranking = po_exact(&ps, &rel).unwrap();
    let fronts = fronts_as_sets(&pareto_fronts(&ps, &rel).unwrap());
    let elapsed = start.elapsed();
    let pass = ranking.po == [0.0, 0.0, 0.0, 2.0, 1.0, 2.0]
        && ranking.classes == [vec![0, 1, 2], vec![4], vec![3, 5]]
        && fronts == [vec![0, 1, 2], vec![3, 4], vec![5]]
        && elapsed < Duration::from_secs(1);
    outcome(
        pass,
        format!("po {:?}, classes {:?}, fronts {:?}, {elapsed:.2?}", ranking.po, ranking.classes, fronts),
        format!("{ranking:?}{fronts:?}"),
    )
}

fn c2_hasse() -> Outcome {
    let [a, b, c, d, e, f, g, h, i] = [0, 1, 2, 3, 4, 5, 6, 7, 8];
    let ps = poset_points(
        9,
        &[(i, g), (i, h), (f, d), (g, d), (g, e), (h, e), (e, b), (d, b), (d, a)],
    )
    .unwrap();
    let ranking = po_exact(&ps, &RelationSpec::all_min()).unwrap();
    let t2 = t_k(&ranking, 2.0, false);
    let pass = ranking.po == [0.0, 0.0, 0.0, 2.0, 1.0, 3.0, 4.0, 2.0, 6.0] && t2 == [a, b, c, d, e, h];
    outcome(pass, format!("po a..i {:?}, T_2 {t2:?}", ranking.po), format!("{ranking:?}{t2:?}"))
}

fn c3_oracle_suite() -> Outcome {
    let start = Instant::now();
    let mut r = rng::rng(3);
    let (mut checks, mut violations) = (0, 0);
    let mut digest = String::new();
    for _ in 0..200 {
        let (ps, rel) = random_instance(&mut r, 10);
        let ranking = po_exact(&ps, &rel).unwrap();
        for class in &ranking.classes {
            let t = t_k(&ranking, ranking.po[class[0]], false);
            let m = ps.measure().measure_of(&t).unwrap();
            let oracle = max_choice_oracle(&ps, &rel, m).unwrap();
            let ok = oracle.best_choice == choice(&ps, &t, &rel).unwrap()
                && oracle.maximizers.iter().all(|s| s.iter().all(|i| t.contains(i)));
            checks += 1;
            violations += usize::from(!ok);
            digest.push_str(&format!("{:?}{:?};", oracle.best_choice, oracle.maximizers));
        }
    }
    let elapsed = start.elapsed();
    outcome(
        violations == 0 && elapsed < Duration::from_secs(60),
        format!("{checks} level sets over 200 instances, {violations} violations, {elapsed:.2?}"),
        digest,
    )
}

fn c4_integral_formula() -> Outcome {
    let mut r = rng::rng(4);
    let (mut pairs, mut mismatches) = (0, 0);
    let mut digest = String::new();
    while pairs < 1000 {
        let (ps, rel) = random_instance(&mut r, 10);
        let ranking = po_exact(&ps, &rel).unwrap();
        for mask in enumerate_selections(&ps, &rel, ps.measure().total()).unwrap() {
            let s = members(mask, ps.len());
            let direct = choice(&ps, &s, &rel).unwrap();
            let integral = choice_of_selection(&ps, &s, &ranking, &rel).unwrap();
            mismatches += usize::from(direct != integral);
            pairs += 1;
            digest.push_str(&format!("{direct:?},"));
        }
    }
    outcome(mismatches == 0, format!("{pairs} selections, {mismatches} mismatches"), digest)
}

fn c5_counterexample() -> Outcome {
    let ps = PointSet::weighted(
        &[[0.0, 0.0], [1.0, 2.0], [2.0, 1.0], [-1.0, 5.0]],
        vec![1.0, 1.0, 1.0, 4.0],
    )
    .unwrap();
    let rel = RelationSpec::all_min();
    let oracle = max_choice_oracle(&ps, &rel, 3.0).unwrap();
    let ranking = po_exact(&ps, &rel).unwrap();
    let unique = oracle.maximizers.len() == 1 && oracle.best_choice == 5.0;
    let s = &oracle.maximizers[0];
    // candidate k: every po level, points between levels, and above the top
    let mut levels: Vec<f64> = ranking.classes.iter().map(|c| ranking.po[c[0]]).collect();
    let mut ks = levels.clone();
    levels.push(levels.last().unwrap() + 2.0);
    ks.extend(levels.windows(2).map(|w| (w[0] + w[1]) / 2.0));
    ks.push(*levels.last().unwrap());
    let expressible = ks.iter().any(|&k| {
        let strict = t_k(&ranking, k, true);
        strict.iter().all(|i| s.contains(i))
            && s.iter().all(|i| strict.contains(i) || ranking.po[*i] == k)
    });
    outcome(
        unique && !expressible && *s == [0, 1, 2],
        format!(
            "maximizers {:?} with choice {}, expressible as strict level set plus ties: {expressible}",
            oracle.maximizers, oracle.best_choice
        ),
        format!("{oracle:?}"),
    )
}

fn c6_continuous() -> Outcome {
    let n = 1_000_000;
    let ps = mc_sample_square(n, SquareDensity::Uniform, 6).unwrap();
    let ranking = po_dominance_2d(&ps, [Orientation::Min, Orientation::Min]).unwrap();
    let nf = n as f64;
    let level = |k: f64| -> (f64, f64) {
        let mut size = 0.0;
        let mut po_sum = 0.0;
        for &p in &ranking.po {
            if p <= k * nf {
                size += 1.0;
                po_sum += p;
            }
        }
        (size / nf, (size * size - 2.0 * po_sum) / (size * size))
    };
    let (p01, _) = level(0.1);
    let (_, full) = level(1.0);
    let divs: Vec<f64> = [0.2, 0.1, 0.05, 0.02].iter().map(|&k| level(k).1).collect();
    let increasing = divs.windows(2).all(|w| w[1] > w[0]) && divs[3] < 1.0;
    let pass = (p01 - 0.33026).abs() < 0.005 && (full - 0.5).abs() < 0.01 && increasing;
    outcome(
        pass,
        format!(
            "P(T_0.1) {p01:.5} (analytic {:.5}), full diversity {full:.5}, diversity at k=0.2,0.1,0.05,0.02: {:.3?} (analytic {:.3?})",
            analytic_p_tk(0.1).unwrap(),
            divs,
            [0.2, 0.1, 0.05, 0.02].map(|k| analytic_diversity_tk(k).unwrap())
        ),
        format!("{p01:?}{full:?}{divs:?}"),
    )
}

fn c7_rank_invariance() -> Outcome {
    let mut r = rng::rng(7);
    let mut failures = 0;
    let mut digest = String::new();
    for _ in 0..50 {
        let n = r.gen_range(2..200);
        let dim = r.gen_range(1..=4);
        let rows: Vec<Vec<f64>> = (0..n)
            .map(|_| (0..dim).map(|_| f64::from(r.gen_range(-30..30i8)) / 10.0).collect())
            .collect();
        let maps: Vec<u8> = (0..dim).map(|_| r.gen_range(0..3)).collect();
        let scale: f64 = r.gen_range(0.5..4.0);
        let mapped: Vec<Vec<f64>> = rows
            .iter()
            .map(|row| {
                row.iter()
                    .zip(&maps)
                    .map(|(v, m)| match m {
                        0 => v.exp(),
                        1 => v.powi(3),
                        _ => scale * v - 1.0,
                    })
                    .collect()
            })
            .collect();
        let orientations: Vec<Orientation> = (0..dim)
            .map(|_| if r.gen_bool(0.5) { Orientation::Min } else { Orientation::Max })
            .collect();
        let a = po_prob(&PointSet::from_rows(&rows).unwrap(), &orientations).unwrap();
        let b = po_prob(&PointSet::from_rows(&mapped).unwrap(), &orientations).unwrap();
        failures += usize::from(a.order != b.order || a.classes != b.classes);
        digest.push_str(&format!("{:?}", a.order));
    }
    outcome(failures == 0, format!("50 datasets, {failures} ordering changes"), digest)
}

fn c8_kendall() -> Outcome {
    let mut r = rng::rng(8);
    let (mut mismatches, mut gap_violations) = (0, 0);
    let mut digest = String::new();
    for _ in 0..100 {
        let n = r.gen_range(2..300);
        let rho: f64 = r.gen_range(-1.0..1.0);
        let rows: Vec<[f64; 2]> = (0..n)
            .map(|_| {
                let a: f64 = r.gen();
                [a, rho * a + (1.0 - rho.abs()) * r.gen::<f64>()]
            })
            .collect();
        let k = kendall_tau(&Matrix::from_rows(&rows).unwrap()).unwrap();
        let mut s = 0i64;
        for i in 0..n {
            for j in i + 1..n {
                let c = (rows[i][0] - rows[j][0]) * (rows[i][1] - rows[j][1]);
                s += if c > 0.0 { 1 } else if c < 0.0 { -1 } else { 0 };
            }
        }
        let counted = s as f64 / (n * (n - 1) / 2) as f64;
        mismatches += usize::from((k.tau - counted).abs() > 1e-12);
        gap_violations += usize::from((k.tau - k.via_choice).abs() > 2.0 / n as f64);
        digest.push_str(&format!("{:?},", k.tau));
    }
    outcome(
        mismatches == 0 && gap_violations == 0,
        format!("100 datasets, {mismatches} mismatches vs pair counter, {gap_violations} gaps above 2/n"),
        digest,
    )
}

/// One-sided sign test p-value for `wins` successes out of `n`.
fn sign_test_p(wins: usize, n: usize) -> f64 {
    let binom = |k: usize| -> f64 { (0..k).fold(1.0, |acc, i| acc * (n - i) as f64 / (i + 1) as f64) };
    (wins..=n).map(binom).sum::<f64>() / 2f64.powi(n as i32)
}

fn c9_ga_direction() -> Outcome {
    let start = Instant::now();
    let seeds = 10u64;
    let mut pass = true;
    let mut detail = Vec::new();
    let mut digest = String::new();
    for nk in [2usize, 10] {
        let instance = knapsack_generate(100, nk, 0).unwrap();
        let configs: Vec<GaConfig> = (0..seeds)
            .flat_map(|seed| {
                Selector::ALL.map(|selector| GaConfig {
                    pop_size: 100,
                    generations: 100,
                    selector,
                    seed,
                    hv_interval: 100,
                    ..GaConfig::default()
                })
            })
            .collect();
        let results = run_many(&instance, &configs).unwrap();
        let by = |s: Selector| -> Vec<&ExperimentResult> {
            results.iter().filter(|r| r.config.selector == s).collect()
        };
        let (nsga, count, prob) = (by(Selector::Nsga2), by(Selector::PoCount), by(Selector::PoProb));
        let hv = |rs: &[&ExperimentResult]| -> Vec<f64> { rs.iter().map(|r| r.final_hypervolume()).collect() };
        let (hv_n, hv_p) = (hv(&nsga), hv(&prob));
        let mean = |v: &[f64]| v.iter().sum::<f64>() / v.len() as f64;
        let wins = hv_p.iter().zip(&hv_n).filter(|(p, n)| p > n).count();
        let p_value = sign_test_p(wins, seeds as usize);
        let hv_ok = mean(&hv_p) > mean(&hv_n) && p_value < 0.05;
        pass &= hv_ok;
        detail.push(format!(
            "n_k={nk}: mean hv po_prob/nsga2 {:.4}, wins {wins}/{seeds}, sign p {p_value:.4}",
            mean(&hv_p) / mean(&hv_n)
        ));
        if nk == 10 {
            let rel = RelationSpec::all_max();
            let mut th_p = Vec::new();
            let mut th_n = Vec::new();
            for i in 0..seeds as usize {
                let (n, c, p) = (nsga[i].final_matrix(), count[i].final_matrix(), prob[i].final_matrix());
                th_p.push(dominated_fraction(&p, &[n.clone(), c.clone()], &rel).unwrap());
                th_n.push(dominated_fraction(&n, &[c, p], &rel).unwrap());
            }
            let theta_ok = mean(&th_p) < mean(&th_n);
            pass &= theta_ok;
            detail.push(format!(
                "theta by others: po_prob {:.1}% vs nsga2 {:.1}%",
                mean(&th_p),
                mean(&th_n)
            ));
        }
        for r in &results {
            digest.push_str(&r.deterministic_json());
        }
    }
    let elapsed = start.elapsed();
    pass &= elapsed < Duration::from_secs(15 * 60);
    detail.push(format!("{elapsed:.1?}"));
    outcome(pass, detail.join("; "), digest)
}

fn log_log_slope(points: &[(f64, f64)]) -> f64 {
    let n = points.len() as f64;
    let (xs, ys): (Vec<f64>, Vec<f64>) = points.iter().map(|(x, y)| (x.ln(), y.ln())).unzip();
    let mx = xs.iter().sum::<f64>() / n;
    let my = ys.iter().sum::<f64>() / n;
    let sxy: f64 = xs.iter().zip(&ys).map(|(x, y)| (x - mx) * (y - my)).sum();
    let sxx: f64 = xs.iter().map(|x| (x - mx).powi(2)).sum();
    sxy / sxx
}

fn c10_scaling() -> Outcome {
    let instance = knapsack_generate(100, 10, 0).unwrap();
    let mut r = rng::rng(10);
    let pool = rayon::ThreadPoolBuilder::new().num_threads(1).build().unwrap();
    let mut digest = String::new();
    let mut slopes = Vec::new();
    let mut at_500 = Vec::new();
    let sizes: Vec<usize> = (50..=500).step_by(50).collect();
    let pops: Vec<Matrix> = sizes
        .iter()
        .map(|&n| {
            let rows: Vec<Vec<f64>> = (0..2 * n)
                .map(|_| {
                    let mut g: Vec<bool> = (0..instance.n_items).map(|_| r.gen_bool(0.5)).collect();
                    repair(&mut g, &instance);
                    evaluate(&g, &instance)
                })
                .collect();
            Matrix::from_rows(&rows).unwrap()
        })
        .collect();
    for selector in [Selector::PoProb, Selector::PoCount, Selector::Nsga2] {
        let mut points = Vec::new();
        for (&n, objs) in sizes.iter().zip(&pops) {
            let mut times = Vec::new();
            for _ in 0..5 {
                let t = Instant::now();
                let kept = pool.install(|| environmental_selection(objs, selector, n, Orientation::Max).unwrap());
                times.push(t.elapsed().as_secs_f64());
                if times.len() == 1 {
                    digest.push_str(&format!("{kept:?}"));
                }
            }
            times.sort_by(f64::total_cmp);
            points.push((n as f64, times[2]));
        }
        slopes.push(log_log_slope(&points));
        at_500.push(points.last().unwrap().1);
    }
    let speedup = at_500[1] / at_500[0];
    let pass = slopes[0] <= 1.4 && slopes[1] >= 1.8 && speedup >= 3.0;
    outcome(
        pass,
        format!(
            "log-log slope po_prob {:.2}, po_count {:.2}, nsga2 {:.2}; po_prob {speedup:.1}x faster at 500",
            slopes[0], slopes[1], slopes[2]
        ),
        digest,
    )
}

fn c11_jde() -> Outcome {
    let start = Instant::now();
    let problem = CmopProblem::builtin("sphere-simplex").unwrap();
    let config = JdeConfig {
        pop_size: 50,
        generations: 300,
        seed: 11,
        ..JdeConfig::default()
    };
    let res = jde_solve(&problem, &config).unwrap();
    let elapsed = start.elapsed();
    let best = res.best_feasible_objective(&problem);
    let all_feasible = res.best.iter().all(|&i| res.feasible[i]);
    let pass = !res.feasible_front.is_empty()
        && all_feasible
        && best.is_some_and(|b| (b - problem.optimum.unwrap()).abs() < 1e-2)
        && elapsed < Duration::from_secs(30);
    outcome(
        pass,
        format!(
            "best feasible {best:?} (optimum {:?}), best-po all feasible {all_feasible}, front {}, {elapsed:.2?}",
            problem.optimum,
            res.feasible_front.len()
        ),
        serde_json::to_string(&res).unwrap(),
    )
}

type Criterion = (u8, &'static str, fn() -> Outcome);

const CRITERIA: [Criterion; 11] = [
    (1, "six-point worked example", c1_worked_example),
    (2, "nine-element Hasse diagram", c2_hasse),
    (3, "maximum-choice oracle suite", c3_oracle_suite),
    (4, "integral formula", c4_integral_formula),
    (5, "weighted counterexample", c5_counterexample),
    (6, "continuous unit square", c6_continuous),
    (7, "rank invariance of po_prob", c7_rank_invariance),
    (8, "Kendall tau", c8_kendall),
    (9, "GA direction", c9_ga_direction),
    (10, "selection cost scaling", c10_scaling),
    (11, "jDE constrained sphere", c11_jde),
];

fn line(id: u8, name: &str, pass: bool, detail: &str) -> String {
    format!(
        "criterion {id:>2} {} {name}: {detail}",
        if pass { "PASS" } else { "FAIL" }
    )
}

#[test]
fn acceptance() {
    let mut all = true;
    let mut digests = Vec::new();
    for (id, name, run) in CRITERIA {
        let o = run();
        println!("{}", line(id, name, o.pass, &o.detail));
        all &= o.pass;
        digests.push(o.digest);
    }
    let mut differing = Vec::new();
    for ((id, _, run), first) in CRITERIA.iter().zip(&digests) {
        if run().digest != *first {
            differing.push(*id);
        }
    }
    let deterministic = differing.is_empty();
    println!(
        "{}",
        line(
            12,
            "determinism",
            deterministic,
            &format!("criteria 1-11 rerun, outputs differing: {differing:?}")
        )
    );
    all &= deterministic;
    assert!(all, "acceptance criteria failed; see the report above");
}
