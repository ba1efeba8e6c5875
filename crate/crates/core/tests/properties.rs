mod common;

use common::{members, naive_po, random_instance};
use kpareto::evolve::{environmental_selection, Selector};
use kpareto::metrics::{dominated_fraction, hypervolume, hypervolume_mc, HypervolumeMode};
use kpareto::posort::*;
use kpareto::relations::{Orientation, RelationSpec};
use kpareto::{rng, Matrix};
use proptest::prelude::*;
use rand::Rng as _;

#[test]
fn t_k_maximizes_choice() {
    let mut r = rng::rng(101);
    for _ in 0..100 {
        let (ps, rel) = random_instance(&mut r, 9);
        let ranking = po_exact(&ps, &rel).unwrap();
        for class in &ranking.classes {
            let t = t_k(&ranking, ranking.po[class[0]], false);
            let m = ps.measure().measure_of(&t).unwrap();
            let oracle = max_choice_oracle(&ps, &rel, m).unwrap();
            assert_eq!(oracle.best_choice, choice(&ps, &t, &rel).unwrap());
            for s in &oracle.maximizers {
                assert!(s.iter().all(|i| t.contains(i)));
            }
        }
    }
}

#[test]
fn integral_formula_on_every_selection() {
    let mut r = rng::rng(102);
    let mut pairs = 0;
    for _ in 0..200 {
        let (ps, rel) = random_instance(&mut r, 10);
        let ranking = po_exact(&ps, &rel).unwrap();
        let total = ps.measure().total();
        for mask in enumerate_selections(&ps, &rel, total).unwrap() {
            let s = members(mask, ps.len());
            assert_eq!(
                choice(&ps, &s, &rel).unwrap(),
                choice_of_selection(&ps, &s, &ranking, &rel).unwrap()
            );
            pairs += 1;
        }
    }
    assert!(pairs >= 1000, "{pairs}");
}

#[test]
fn level_sets_are_nested_selections() {
    let mut r = rng::rng(103);
    for _ in 0..100 {
        let (ps, rel) = random_instance(&mut r, 12);
        let ranking = po_exact(&ps, &rel).unwrap();
        let levels: Vec<f64> = ranking.classes.iter().map(|c| ranking.po[c[0]]).collect();
        let mut prev: Vec<usize> = Vec::new();
        for &k in &levels {
            let strict = t_k(&ranking, k, true);
            let t = t_k(&ranking, k, false);
            assert!(strict.iter().all(|i| t.contains(i)));
            assert!(prev.iter().all(|i| t.contains(i)));
            assert!(is_selection(&ps, &t, &rel).unwrap());
            assert!(is_selection(&ps, &strict, &rel).unwrap());
            prev = t;
        }
    }
}

#[test]
fn diversity_corollary_uniform_weights() {
    let mut r = rng::rng(104);
    let mut checked = 0;
    while checked < 100 {
        let (ps, rel) = random_instance(&mut r, 9);
        if !ps.measure().is_uniform() {
            continue;
        }
        checked += 1;
        let ranking = po_exact(&ps, &rel).unwrap();
        let selections = enumerate_selections(&ps, &rel, ps.measure().total()).unwrap();
        for class in &ranking.classes {
            let t = t_k(&ranking, ranking.po[class[0]], false);
            let d_t = diversity(&ps, &t, &rel).unwrap();
            for &mask in &selections {
                let s = members(mask, ps.len());
                if s.len() != t.len() || s == t {
                    continue;
                }
                assert!(diversity(&ps, &s, &rel).unwrap() < d_t, "{s:?} vs {t:?}");
            }
        }
    }
}

#[test]
fn counting_identity_for_distinct_points() {
    let mut r = rng::rng(105);
    for _ in 0..50 {
        let n = r.gen_range(1..40);
        let rows: Vec<[f64; 3]> = (0..n).map(|_| [r.gen(), r.gen(), r.gen()]).collect();
        let ps = PointSet::from_rows(&rows).unwrap();
        let rel = RelationSpec::all_min();
        let mut incomparable = 0;
        for i in 0..n {
            for j in i + 1..n {
                if rel.compare(&rows[i], &rows[j]).unwrap().offers_choice() {
                    incomparable += 1;
                }
            }
        }
        let all: Vec<usize> = (0..n).collect();
        assert_eq!(choice(&ps, &all, &rel).unwrap(), (2 * incomparable + n) as f64);
    }
}

#[test]
fn first_front_is_po_zero() {
    let mut r = rng::rng(106);
    for _ in 0..100 {
        let (ps, rel) = random_instance(&mut r, 30);
        let ranking = po_exact(&ps, &rel).unwrap();
        let fronts = pareto_fronts(&ps, &rel).unwrap();
        for (f, po) in fronts.iter().zip(&ranking.po) {
            assert_eq!(*f == 0, *po == 0.0);
        }
    }
}

#[test]
fn po_count_keeps_exactly_the_first_front() {
    let mut r = rng::rng(112);
    for _ in 0..100 {
        let n = r.gen_range(1..40);
        let rows: Vec<[f64; 2]> = (0..n)
            .map(|_| [f64::from(r.gen_range(0..8u8)), f64::from(r.gen_range(0..8u8))])
            .collect();
        let ps = PointSet::from_rows(&rows).unwrap();
        let fronts = pareto_fronts(&ps, &RelationSpec::all_min()).unwrap();
        let first: Vec<usize> = (0..n).filter(|&i| fronts[i] == 0).collect();
        let kept =
            environmental_selection(ps.points(), Selector::PoCount, first.len(), Orientation::Min)
                .unwrap();
        assert_eq!(kept, first);
    }
}

#[test]
fn cone_weakened_transitivity() {
    let mut r = rng::rng(107);
    for a in [0.25, 1.0, 3.0] {
        let rel = RelationSpec::cone(a).unwrap();
        let rows: Vec<[f64; 2]> = (0..400).map(|_| [r.gen(), r.gen()]).collect();
        let ps = PointSet::from_rows(&rows).unwrap();
        let ranking = po_exact(&ps, &rel).unwrap();
        for _ in 0..2000 {
            let (i, j) = (r.gen_range(0..400), r.gen_range(0..400));
            if rel.strictly_prefers(&rows[i], &rows[j]).unwrap() {
                assert!(ranking.po[i] <= ranking.po[j]);
            }
        }
    }
}

#[test]
fn copula_invariance_of_po_prob() {
    let mut r = rng::rng(108);
    for _ in 0..50 {
        let n = r.gen_range(2..80);
        let rows: Vec<[f64; 2]> = (0..n)
            .map(|_| [f64::from(r.gen_range(0..20u8)) / 10.0, r.gen_range(-1.0..1.0)])
            .collect();
        let mapped: Vec<[f64; 2]> = rows.iter().map(|p| [p[0].exp(), p[1].powi(3) * 2.0 + 7.0]).collect();
        let o = [Orientation::Min, Orientation::Max];
        let a = po_prob(&PointSet::from_rows(&rows).unwrap(), &o).unwrap();
        let b = po_prob(&PointSet::from_rows(&mapped).unwrap(), &o).unwrap();
        assert_eq!(a.order, b.order);
        assert_eq!(a.classes, b.classes);
    }
}

#[test]
fn theta_degenerate_antisymmetry() {
    let mut r = rng::rng(109);
    let rel = RelationSpec::all_max();
    for _ in 0..20 {
        let b: Vec<[f64; 2]> = (0..10).map(|_| [r.gen(), r.gen()]).collect();
        let a: Vec<[f64; 2]> = b.iter().map(|p| [p[0] + 2.0, p[1] + 2.0]).collect();
        let (a, b) = (Matrix::from_rows(&a).unwrap(), Matrix::from_rows(&b).unwrap());
        assert_eq!(dominated_fraction(&b, std::slice::from_ref(&a), &rel).unwrap(), 100.0);
        assert_eq!(dominated_fraction(&a, &[b], &rel).unwrap(), 0.0);
    }
}

#[test]
fn hypervolume_exact_within_monte_carlo_bound() {
    let mut r = rng::rng(110);
    let mut outside = 0;
    for case in 0..50 {
        let dim = if case % 2 == 0 { 2 } else { 3 };
        let n = r.gen_range(1..30);
        let data: Vec<f64> = (0..n * dim).map(|_| r.gen_range(0.0..10.0)).collect();
        let front = Matrix::new(data, dim).unwrap();
        let exact = hypervolume(&front, HypervolumeMode::Exact).unwrap();
        let mc = hypervolume_mc(&front, 20_000, case as u64).unwrap();
        if (exact - mc.value).abs() > 3.0 * mc.std_error {
            outside += 1;
        }
    }
    // a 3-sigma band misses about 0.3% of the time
    assert!(outside <= 1, "{outside} of 50 outside 3 sigma");
}

#[test]
fn parallel_and_single_thread_agree() {
    let mut r = rng::rng(111);
    let rows: Vec<[f64; 3]> = (0..300).map(|_| [r.gen(), r.gen(), r.gen()]).collect();
    let ps = PointSet::from_rows(&rows).unwrap();
    let rel = RelationSpec::all_min();
    let all: Vec<usize> = (0..300).collect();
    let run = || {
        (
            po_exact(&ps, &rel).unwrap(),
            po_prob(&ps, &[Orientation::Min; 3]).unwrap(),
            choice(&ps, &all, &rel).unwrap(),
            hypervolume_mc(ps.points(), 50_000, 3).unwrap().value,
        )
    };
    let one = rayon::ThreadPoolBuilder::new().num_threads(1).build().unwrap().install(run);
    let many = rayon::ThreadPoolBuilder::new().num_threads(4).build().unwrap().install(run);
    assert_eq!(one, many);
    assert_eq!(one.0.po, naive_po(&ps, &rel));
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(200))]

    #[test]
    fn sweep_matches_pairwise(
        pts in prop::collection::vec((0u8..6, 0u8..6), 1..60),
        omin in any::<bool>(),
        omax in any::<bool>(),
    ) {
        let rows: Vec<[f64; 2]> = pts.iter().map(|(a, b)| [f64::from(*a), f64::from(*b)]).collect();
        let ps = PointSet::from_rows(&rows).unwrap();
        let o = |b: bool| if b { Orientation::Min } else { Orientation::Max };
        let orient = [o(omin), o(omax)];
        let sweep = po_dominance_2d(&ps, orient).unwrap();
        let exact = po_exact(&ps, &RelationSpec::componentwise(&orient)).unwrap();
        prop_assert_eq!(sweep, exact);
    }

    #[test]
    fn po_exact_matches_naive(seed in any::<u64>()) {
        let mut r = rng::rng(seed);
        let (ps, rel) = random_instance(&mut r, 25);
        prop_assert_eq!(po_exact(&ps, &rel).unwrap().po, naive_po(&ps, &rel));
    }
}
