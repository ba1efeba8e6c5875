use std::collections::BTreeMap;
use std::fmt::Write as _;
use std::fs::{self, File};
use std::path::{Path, PathBuf};

use kpareto::evolve::{
    evolve, knapsack_generate, jde_solve, CmopProblem, ExperimentResult, GaConfig, JdeConfig,
    KnapsackInstance, Selector, WallTimes,
};
use kpareto::metrics::{dominated_fraction, kendall_tau, largest_uncorrelated_pareto_set};
use kpareto::posort::{
    choice_of_selection, find_k_for_measure, max_choice_oracle, mc_sample_square, pareto_fronts,
    po_dominance_2d, po_exact, po_prob, t_k, PointSet, PoRanking, SquareDensity,
};
use kpareto::relations::{Axes, Orientation, RelationSpec};
use kpareto::{par, DiscreteMeasure, Matrix};
use serde::Serialize;
use serde_json::json;

use crate::args::*;
use crate::config::{config_err, data_err, resolve, write_manifest, CliError, Section};

type Res<T> = Result<T, CliError>;

fn require<T: Clone>(v: &Option<T>, flag: &str) -> Res<T> {
    v.clone().ok_or_else(|| config_err(format!("missing --{flag}")))
}

/// Resolves the section, creates the output directory and writes the manifest.
fn prepare<T: Section>(flags: &T, file: Option<&toml::Table>, out: impl Fn(&T) -> PathBuf) -> Res<(T, PathBuf)> {
    let resolved = resolve(flags, file)?;
    let dir = out(&resolved);
    fs::create_dir_all(&dir)
        .map_err(|e| data_err(format!("cannot create {}: {e}", dir.display())))?;
    write_manifest(&dir, &resolved)?;
    Ok((resolved, dir))
}

fn out_dir(o: &Option<PathBuf>) -> PathBuf {
    o.clone().expect("defaulted")
}

fn read_points(path: &Path, measure: MeasureKind) -> Res<PointSet> {
    let file = File::open(path).map_err(|e| data_err(format!("{}: {e}", path.display())))?;
    let ps = PointSet::read_csv(file).map_err(|e| data_err(format!("{}: {e}", path.display())))?;
    Ok(match measure {
        MeasureKind::File => ps,
        MeasureKind::Counting => {
            let n = ps.len();
            PointSet::new(ps.points().clone(), DiscreteMeasure::counting(n))?
        }
    })
}

fn relation_for(text: &str, dim: usize) -> Res<RelationSpec> {
    let rel = RelationSpec::parse(text).map_err(config_err)?;
    rel.check_dim(dim).map_err(config_err)?;
    Ok(rel)
}

fn f(v: f64) -> String {
    format!("{v:?}")
}

fn write_text(path: &Path, text: &str) -> Res<()> {
    fs::write(path, text).map_err(|e| data_err(format!("{}: {e}", path.display())))
}

fn write_json<T: Serialize>(path: &Path, value: &T) -> Res<()> {
    let mut text = serde_json::to_string_pretty(value).map_err(data_err)?;
    text.push('\n');
    write_text(path, &text)
}

fn t_k_label(k: Option<f64>) -> serde_json::Value {
    k.map_or(serde_json::Value::Null, |v| json!(v))
}

pub fn sort(flags: &SortArgs, file: Option<&toml::Table>) -> Res<()> {
    let (a, dir) = prepare(flags, file, |a| out_dir(&a.out_dir))?;
    let ps = read_points(&require(&a.input, "input")?, a.measure.unwrap())?;
    let rel = relation_for(a.relation.as_deref().unwrap(), ps.dim())?;
    let ranking = match a.mode.unwrap() {
        SortMode::Exact => po_exact(&ps, &rel)?,
        SortMode::Prob => {
            let orientations = match &rel {
                RelationSpec::Componentwise { offset: 0, axes } => match axes {
                    Axes::Each(v) => v.clone(),
                    Axes::All(o) => vec![*o; ps.dim()],
                },
                _ => {
                    return Err(config_err(
                        "mode = prob needs a componentwise relation without offset",
                    ))
                }
            };
            po_prob(&ps, &orientations)?
        }
    };
    let fronts = pareto_fronts(&ps, &rel)?;
    let classes = ranking.class_labels();
    let mut out = String::from("index,po,class,front\n");
    for i in 0..ps.len() {
        writeln!(out, "{i},{},{},{}", f(ranking.po[i]), classes[i], fronts[i]).unwrap();
    }
    write_text(&dir.join("ranking.csv"), &out)?;
    println!(
        "{} points, {} po classes, {} fronts -> {}",
        ps.len(),
        ranking.classes.len(),
        fronts.iter().max().map_or(0, |m| m + 1),
        dir.join("ranking.csv").display()
    );
    Ok(())
}

/// Largest prefix of whole po classes with measure at most `m`.
fn largest_within(ranking: &PoRanking, measure: &DiscreteMeasure, m: f64) -> (Vec<usize>, Option<f64>) {
    let mut mass = 0.0;
    let mut members = Vec::new();
    let mut k = None;
    for class in &ranking.classes {
        let add: f64 = class.iter().map(|&i| measure.weight(i)).sum();
        if mass + add > m * (1.0 + 1e-12) {
            break;
        }
        mass += add;
        members.extend(class.iter().copied());
        k = Some(ranking.po[class[0]]);
    }
    members.sort_unstable();
    (members, k)
}

pub fn select(flags: &SelectArgs, file: Option<&toml::Table>) -> Res<()> {
    let (a, dir) = prepare(flags, file, |a| out_dir(&a.out_dir))?;
    let given = [a.k.is_some(), a.m.is_some(), a.fraction.is_some()];
    if given.iter().filter(|g| **g).count() != 1 {
        return Err(config_err("give exactly one of --k, --m, --fraction"));
    }
    let ps = read_points(&require(&a.input, "input")?, a.measure.unwrap())?;
    let rel = relation_for(a.relation.as_deref().unwrap(), ps.dim())?;
    let ranking = po_exact(&ps, &rel)?;
    let strict = a.strict.unwrap();
    let (members, k) = if let Some(k) = a.k {
        (t_k(&ranking, k, strict), Some(k))
    } else if let Some(m) = a.m {
        largest_within(&ranking, ps.measure(), m)
    } else {
        let k = find_k_for_measure(&ranking, ps.measure(), a.fraction.unwrap())
            .map_err(config_err)?;
        (t_k(&ranking, k, false), Some(k))
    };
    let mut out = String::from("index,po\n");
    for &i in &members {
        writeln!(out, "{i},{}", f(ranking.po[i])).unwrap();
    }
    write_text(&dir.join("selection.csv"), &out)?;
    let mu = ps.measure().measure_of(&members)?;
    let choice = choice_of_selection(&ps, &members, &ranking, &rel)?;
    let report = json!({
        "n": ps.len(),
        "k": t_k_label(k),
        "strict": strict,
        "size": members.len(),
        "measure": mu,
        "choice": choice,
        "diversity": if members.is_empty() { serde_json::Value::Null } else { json!(choice / (mu * mu)) },
    });
    write_json(&dir.join("report.json"), &report)?;
    println!("{report}");
    Ok(())
}

pub fn oracle(flags: &OracleArgs, file: Option<&toml::Table>) -> Res<()> {
    let (a, dir) = prepare(flags, file, |a| out_dir(&a.out_dir))?;
    let m = require(&a.m, "m")?;
    let ps = read_points(&require(&a.input, "input")?, a.measure.unwrap())?;
    let rel = relation_for(a.relation.as_deref().unwrap(), ps.dim())?;
    let result = max_choice_oracle(&ps, &rel, m)?;
    let ranking = po_exact(&ps, &rel)?;
    let mut level_sets: Vec<Vec<usize>> = Vec::new();
    for class in &ranking.classes {
        let k = ranking.po[class[0]];
        level_sets.push(t_k(&ranking, k, false));
        level_sets.push(t_k(&ranking, k, true));
    }
    let maximizers: Vec<serde_json::Value> = result
        .maximizers
        .iter()
        .map(|s| json!({ "members": s, "is_t_k": level_sets.contains(s) }))
        .collect();
    let report = json!({
        "m": m,
        "best_choice": result.best_choice,
        "selections_examined": result.selections_examined,
        "maximizers": maximizers,
    });
    write_json(&dir.join("oracle.json"), &report)?;
    println!("{report}");
    Ok(())
}

pub fn sort_grid(flags: &GridArgs, file: Option<&toml::Table>) -> Res<()> {
    let (a, dir) = prepare(flags, file, |a| out_dir(&a.out_dir))?;
    let ps = match (a.grid, a.uniform) {
        (Some(_), Some(_)) => return Err(config_err("give either --grid or --uniform, not both")),
        (Some(n), None) => {
            let rows: Vec<[f64; 2]> = (0..n * n).map(|i| [(i / n) as f64, (i % n) as f64]).collect();
            PointSet::from_rows(&rows)?
        }
        (None, Some(n)) => mc_sample_square(n, SquareDensity::Uniform, a.seed.unwrap())?,
        (None, None) => unreachable!("defaulted"),
    };
    let rel = RelationSpec::all_min();
    let exact = po_exact(&ps, &rel)?;
    let prob = po_prob(&ps, &[Orientation::Min, Orientation::Min])?;
    let fronts = pareto_fronts(&ps, &rel)?;
    let labels = exact.class_labels();
    let mut out = String::from("x,y,po,class,front,po_prob\n");
    for i in 0..ps.len() {
        let p = ps.point(i);
        writeln!(
            out,
            "{},{},{},{},{},{}",
            f(p[0]),
            f(p[1]),
            f(exact.po[i]),
            labels[i],
            fronts[i],
            f(prob.po[i])
        )
        .unwrap();
    }
    write_text(&dir.join("grid.csv"), &out)?;
    let summary = json!({
        "points": ps.len(),
        "po_classes": exact.classes.len(),
        "po_prob_classes": prob.classes.len(),
        "fronts": fronts.iter().max().map_or(0, |m| m + 1),
    });
    write_json(&dir.join("summary.json"), &summary)?;
    println!("{summary}");
    Ok(())
}

fn read_two_columns(path: &Path) -> Res<Matrix> {
    let ps = read_points(path, MeasureKind::Counting)?;
    if ps.dim() != 2 {
        return Err(data_err(format!(
            "{}: expected 2 columns, got {}",
            path.display(),
            ps.dim()
        )));
    }
    Ok(ps.points().clone())
}

pub fn tau(flags: &TauArgs, file: Option<&toml::Table>) -> Res<()> {
    let (a, dir) = prepare(flags, file, |a| out_dir(&a.out_dir))?;
    let points = read_two_columns(&require(&a.input, "input")?)?;
    let k = kendall_tau(&points)?;
    let report = json!({
        "n": k.n,
        "choice": k.choice,
        "diversity": k.diversity,
        "tau": k.tau,
        "via_choice": k.via_choice,
        "gap": (k.tau - k.via_choice).abs(),
    });
    write_json(&dir.join("tau.json"), &report)?;
    println!("{report}");
    Ok(())
}

pub fn partition(flags: &PartitionArgs, file: Option<&toml::Table>) -> Res<()> {
    let (a, dir) = prepare(flags, file, |a| out_dir(&a.out_dir))?;
    let points = read_two_columns(&require(&a.input, "input")?)?;
    let members = largest_uncorrelated_pareto_set(&points)?;
    let ps = PointSet::new(points.clone(), DiscreteMeasure::counting(points.rows()))?;
    let ranking = po_dominance_2d(&ps, [Orientation::Max, Orientation::Max])?;
    let mut inside = vec![false; points.rows()];
    for &i in &members {
        inside[i] = true;
    }
    let mut out = String::from("index,x1,x2,po,member\n");
    for (i, row) in points.iter_rows().enumerate() {
        writeln!(
            out,
            "{i},{},{},{},{}",
            f(row[0]),
            f(row[1]),
            f(ranking.po[i]),
            u8::from(inside[i])
        )
        .unwrap();
    }
    write_text(&dir.join("partition.csv"), &out)?;
    let size = members.len() as f64;
    let po_sum: f64 = members.iter().map(|&i| ranking.po[i]).sum();
    let summary = json!({
        "n": points.rows(),
        "members": members.len(),
        "k": members.iter().map(|&i| ranking.po[i]).reduce(f64::max),
        "diversity": if members.is_empty() { serde_json::Value::Null } else { json!((size * size - 2.0 * po_sum) / (size * size)) },
    });
    write_json(&dir.join("summary.json"), &summary)?;
    println!("{summary}");
    Ok(())
}

fn matrix_csv(m: &Matrix, prefix: &str) -> String {
    let mut out = (1..=m.cols()).map(|j| format!("{prefix}{j}")).collect::<Vec<_>>().join(",");
    out.push('\n');
    for row in m.iter_rows() {
        out.push_str(&row.iter().map(|v| f(*v)).collect::<Vec<_>>().join(","));
        out.push('\n');
    }
    out
}

fn mean(v: &[f64]) -> f64 {
    v.iter().sum::<f64>() / v.len() as f64
}

pub fn ga(flags: &GaArgs, file: Option<&toml::Table>) -> Res<()> {
    let (a, dir) = prepare(flags, file, |a| out_dir(&a.out_dir))?;
    let instance = match &a.instance {
        Some(path) => {
            let r = File::open(path).map_err(|e| data_err(format!("{}: {e}", path.display())))?;
            KnapsackInstance::read_csv(r, a.instance_seed.unwrap())?
        }
        None => knapsack_generate(a.n_items.unwrap(), a.n_knapsacks.unwrap(), a.instance_seed.unwrap())
            .map_err(config_err)?,
    };
    let mut bundle = Vec::new();
    instance.write_csv(&mut bundle)?;
    write_text(&dir.join("instance.csv"), &String::from_utf8_lossy(&bundle))?;

    let selectors = a.selectors.clone().unwrap();
    let seeds = a.seeds.clone().unwrap();
    if selectors.is_empty() || seeds.is_empty() {
        return Err(config_err("selectors and seeds must be non-empty"));
    }
    let mut configs = Vec::new();
    for &seed in &seeds {
        for &selector in &selectors {
            configs.push(GaConfig {
                pop_size: a.pop_size.unwrap(),
                generations: a.generations.unwrap(),
                mutation_prob: a.mutation_prob.unwrap(),
                selector,
                seed,
                hv_interval: a.hv_interval.unwrap(),
                hv_samples: a.hv_samples.unwrap(),
            });
        }
    }
    configs[0].validate().map_err(config_err)?;
    let results: Vec<ExperimentResult> = par::map_slice(&configs, |c| evolve(&instance, c))
        .into_iter()
        .collect::<Result<_, _>>()?;

    let mut timings = String::from("selector,seed,total_secs,selection_secs\n");
    // runs[selector][seed index]
    let mut runs: BTreeMap<Selector, Vec<ExperimentResult>> = BTreeMap::new();
    for mut r in results {
        let stem = format!("{}_seed{}", r.config.selector, r.seed);
        let front = format!("front_{stem}.csv");
        write_text(&dir.join(&front), &matrix_csv(&r.final_matrix(), "f"))?;
        r.final_front_csv = Some(front);
        let t: WallTimes = r.wall_times.take().unwrap_or_default();
        writeln!(timings, "{},{},{},{}", r.config.selector, r.seed, t.total_secs, t.selection_secs).unwrap();
        let mut text = r.deterministic_json();
        text.push('\n');
        write_text(&dir.join(format!("run_{stem}.json")), &text)?;
        runs.entry(r.config.selector).or_default().push(r);
    }
    write_text(&dir.join("timings.csv"), &timings)?;

    let mut history = String::from("selector,gen,mean_hypervolume\n");
    for (s, rs) in &runs {
        for (g, rec) in rs[0].per_generation.iter().enumerate() {
            let hv: Vec<f64> = rs.iter().map(|r| r.per_generation[g].hypervolume).collect();
            writeln!(history, "{s},{},{}", rec.gen, f(mean(&hv))).unwrap();
        }
    }
    write_text(&dir.join("hv_history.csv"), &history)?;

    let rel = RelationSpec::all_max();
    let theta = |target: Selector, by: &[Selector]| -> Res<f64> {
        let mut vals = Vec::new();
        for (i, run) in runs[&target].iter().enumerate() {
            let others: Vec<Matrix> = by.iter().map(|b| runs[b][i].final_matrix()).collect();
            vals.push(dominated_fraction(&run.final_matrix(), &others, &rel)?);
        }
        Ok(mean(&vals))
    };
    let order: Vec<Selector> = runs.keys().copied().collect();
    let mut theta_csv = format!(
        "target,{},others\n",
        order.iter().map(|s| s.name()).collect::<Vec<_>>().join(",")
    );
    let mut theta_others = BTreeMap::new();
    for &t in &order {
        let mut cells = vec![t.name().to_string()];
        for &b in &order {
            cells.push(if b == t { String::new() } else { f(theta(t, &[b])?) });
        }
        let others: Vec<Selector> = order.iter().copied().filter(|s| *s != t).collect();
        let v = if others.is_empty() { None } else { Some(theta(t, &others)?) };
        cells.push(v.map(f).unwrap_or_default());
        theta_others.insert(t, v);
        theta_csv.push_str(&cells.join(","));
        theta_csv.push('\n');
    }
    write_text(&dir.join("theta.csv"), &theta_csv)?;

    let final_hv: BTreeMap<Selector, f64> = runs
        .iter()
        .map(|(s, rs)| (*s, mean(&rs.iter().map(|r| r.final_hypervolume()).collect::<Vec<_>>())))
        .collect();
    let mut summary = String::from("selector,mean_final_hypervolume,hv_increase_vs_nsga2_pct,theta_by_others_pct\n");
    for (s, hv) in &final_hv {
        let inc = final_hv
            .get(&Selector::Nsga2)
            .map(|base| f(100.0 * (hv / base - 1.0)))
            .unwrap_or_default();
        let th = theta_others[s].map(f).unwrap_or_default();
        writeln!(summary, "{s},{},{inc},{th}", f(*hv)).unwrap();
    }
    write_text(&dir.join("summary.csv"), &summary)?;
    print!("{summary}");
    Ok(())
}

pub fn cmop(flags: &CmopArgs, file: Option<&toml::Table>) -> Res<()> {
    let (a, dir) = prepare(flags, file, |a| out_dir(&a.out_dir))?;
    let problem = CmopProblem::builtin(a.problem.as_deref().unwrap()).map_err(config_err)?;
    let config = JdeConfig {
        pop_size: a.pop_size.unwrap(),
        generations: a.generations.unwrap(),
        tau1: a.tau1.unwrap(),
        tau2: a.tau2.unwrap(),
        seed: a.seed.unwrap(),
        ..JdeConfig::default()
    };
    config.validate().map_err(config_err)?;
    let res = jde_solve(&problem, &config)?;
    let d = problem.dim();
    let cons = problem.ng + problem.nh;

    let mut head: Vec<String> = (1..=d).map(|j| format!("x{j}")).collect();
    head.extend((1..=problem.ng).map(|j| format!("g{j}")));
    head.extend((1..=problem.nh).map(|j| format!("h{j}")));
    head.extend((1..=problem.n_obj).map(|j| format!("f{j}")));
    let row = |i: usize| -> String {
        res.population[i]
            .iter()
            .chain(&res.evaluations[i])
            .map(|v| f(*v))
            .collect::<Vec<_>>()
            .join(",")
    };
    let mut pop = format!("index,{},po,feasible\n", head.join(","));
    for i in 0..res.population.len() {
        writeln!(pop, "{i},{},{},{}", row(i), f(res.po[i]), u8::from(res.feasible[i])).unwrap();
    }
    write_text(&dir.join("population.csv"), &pop)?;
    let mut front = format!("index,{}\n", head.join(","));
    for &i in &res.feasible_front {
        writeln!(front, "{i},{}", row(i)).unwrap();
    }
    write_text(&dir.join("front.csv"), &front)?;

    let report = json!({
        "problem": problem.name,
        "dim": d,
        "constraints": cons,
        "pop_size": config.pop_size,
        "generations": config.generations,
        "feasible": res.feasible.iter().filter(|f| **f).count(),
        "front_size": res.feasible_front.len(),
        "best_po_all_feasible": res.best.iter().all(|&i| res.feasible[i]),
        "best_objective": if problem.n_obj == 1 { json!(res.best_feasible_objective(&problem)) } else { serde_json::Value::Null },
        "known_optimum": problem.optimum,
    });
    write_json(&dir.join("report.json"), &report)?;
    println!("{report}");
    Ok(())
}
