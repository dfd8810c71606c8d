use std::collections::BTreeSet;

use itertools::Itertools;
use num_traits::{Signed, Zero};
use proptest::prelude::*;

use outer_approx::harness::{brute_force_hull, brute_force_q};
use outer_approx::io::{generate_instance, GenKind};
use outer_approx::num::{rank, rat};
use outer_approx::oracles::{
    ideal_point, ws_solve, AssignmentInstance, ExplicitSet, Instance, KnapsackInstance, Weight,
};
use outer_approx::separation::{
    separate, shift_for_tsep, MasterLp, Mode, OracleKind, SepOptions, Status, TsepShift,
};
use outer_approx::{run, Halfspace, ObjPoint, OuterApprox, Rational, RunConfig};

fn knapsack() -> impl Strategy<Value = Instance> {
    (2usize..=3, 1usize..=7).prop_flat_map(|(p, n)| {
        (
            prop::collection::vec(prop::collection::vec(1i64..=30, n), p),
            prop::collection::vec(1i64..=20, n),
            0i64..=60,
        )
            .prop_map(|(profits, weights, capacity)| {
                Instance::Knapsack(KnapsackInstance {
                    profits,
                    weights,
                    capacity,
                })
            })
    })
}

fn assignment() -> impl Strategy<Value = Instance> {
    (2usize..=3, 1usize..=4).prop_flat_map(|(p, n)| {
        prop::collection::vec(
            prop::collection::vec(prop::collection::vec(1i64..=9, n), n),
            p,
        )
        .prop_map(|costs| Instance::Assignment(AssignmentInstance { costs }))
    })
}

fn point_set() -> impl Strategy<Value = Instance> {
    (2usize..=3).prop_flat_map(|p| {
        prop::collection::vec(prop::collection::vec(0i64..=12, p), 1..=12)
            .prop_map(move |points| Instance::Explicit(ExplicitSet { p, points }))
    })
}

fn any_instance() -> impl Strategy<Value = Instance> {
    prop_oneof![knapsack(), assignment(), point_set()]
}

fn weight(p: usize) -> impl Strategy<Value = Weight> {
    prop::collection::vec(0i64..=5, p)
        .prop_filter("nonzero", |w| w.iter().any(|x| *x > 0))
        .prop_map(|w| Weight::from_ints(&w).unwrap())
}

fn dot(w: &[Rational], y: &ObjPoint) -> Rational {
    w.iter().zip(y.coords()).map(|(a, b)| a * b).sum()
}

fn q_points(inst: &Instance) -> Vec<ObjPoint> {
    brute_force_q(inst)
        .unwrap()
        .iter()
        .map(|y| ObjPoint::from_ints(y))
        .collect()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn weighted_sum_oracle_is_optimal(
        (inst, w) in any_instance().prop_flat_map(|i| { let p = i.p(); (Just(i), weight(p)) })
    ) {
        let q = q_points(&inst);
        let r = ws_solve(&inst, &w).unwrap();
        let best = q.iter().map(|y| dot(w.as_slice(), y)).min().unwrap();
        prop_assert_eq!(&r.value, &best);
        prop_assert!(q.contains(&r.point));
        prop_assert_eq!(dot(w.as_slice(), &r.point), r.value.clone());
        // lexicographic tie-breaking among the optimal points
        let lex_min = q.iter().filter(|y| dot(w.as_slice(), y) == best).min().unwrap();
        prop_assert_eq!(&r.point, lex_min);
    }

    #[test]
    fn batch_update_matches_naive_vertex_enumeration(
        (p, cuts) in (2usize..=3).prop_flat_map(|p| {
            (Just(p), prop::collection::vec((prop::collection::vec(0i64..=4, p), 0i64..=30), 1..=5))
        })
    ) {
        let cuts: Vec<Halfspace> = cuts
            .into_iter()
            .filter(|(w, _)| w.iter().any(|x| *x > 0))
            .map(|(w, a)| Halfspace::from_ints(&w, a))
            .collect();
        let s0 = OuterApprox::init_from_ideal(&ObjPoint::from_ints(&vec![0; p]));
        let s = s0.add_halfspaces(&cuts).unwrap();
        prop_assert!(s.check_invariants().is_ok());

        let mut all: Vec<Halfspace> = (0..p)
            .map(|i| Halfspace::new(ObjPoint::unit(p, i).coords().to_vec(), rat(0)))
            .collect();
        all.extend(cuts.iter().cloned());
        let naive = naive_vertices(&all, p);
        let got: BTreeSet<ObjPoint> = s.vertices().iter().cloned().collect();
        prop_assert_eq!(got, naive);

        // one at a time gives the same polyhedron
        let mut seq = s0.clone();
        for c in &cuts {
            seq = seq.add_halfspaces(std::slice::from_ref(c)).unwrap();
        }
        prop_assert_eq!(seq.vertices(), s.vertices());
        let a: BTreeSet<Halfspace> = seq.halfspaces().iter().map(Halfspace::canonical).collect();
        let b: BTreeSet<Halfspace> = s.halfspaces().iter().map(Halfspace::canonical).collect();
        prop_assert_eq!(a, b);

        // re-adding facets is a no-op
        let again = s.add_halfspaces(s.halfspaces()).unwrap();
        prop_assert_eq!(again.vertices(), s.vertices());
        prop_assert_eq!(again.halfspaces().len(), s.halfspaces().len());
    }

    #[test]
    fn separation_is_sound_and_complete(
        (inst, y) in point_set().prop_flat_map(|i| {
            let p = i.p();
            (Just(i), prop::collection::vec(0i64..=14, p))
        }),
        tsep in any::<bool>(),
    ) {
        // queries never lie below the ideal point
        let (ideal, seeds) = ideal_point(&inst).unwrap();
        let y = ideal.translate(&ObjPoint::from_ints(&y).0);
        let q = q_points(&inst);
        let hull = brute_force_hull(&brute_force_q(&inst).unwrap()).unwrap();
        let kind = if tsep { OracleKind::TSep } else { OracleKind::Sep };
        let shift = if tsep { shift_for_tsep(&inst, Mode::Exact) } else { TsepShift::none(inst.p()) };
        let mut master = MasterLp::new(kind, inst.p(), &seeds, shift);
        let ans = separate(&y, &mut master, &inst, &SepOptions::default()).unwrap();
        match ans.status {
            Status::Outside => {
                let cut = ans.cut.unwrap();
                prop_assert!(cut.w.iter().all(|x| !x.is_negative()));
                prop_assert!(cut.slack(&y).is_negative());
                prop_assert!(q.iter().all(|z| cut.contains(z)));
                prop_assert!(!hull.contains(&y));
            }
            Status::Inside => prop_assert!(hull.contains(&y)),
        }
    }

    #[test]
    fn approximations_shrink_and_end_at_the_hull(inst in prop_oneof![knapsack(), assignment(), point_set()], tsep in any::<bool>()) {
        let kind = if tsep { OracleKind::TSep } else { OracleKind::Sep };
        let r = run(&inst, &RunConfig::new(kind, Mode::Exact)).unwrap();
        prop_assert!(r.solved);
        for pair in r.snapshots.windows(2) {
            // later vertices satisfy earlier halfspaces
            for v in &pair[1].vertices {
                prop_assert!(pair[0].halfspaces.iter().all(|h| h.contains(v)));
            }
        }
        let hull = brute_force_hull(&brute_force_q(&inst).unwrap()).unwrap();
        prop_assert_eq!(&r.extreme_points, &hull.extreme_points);
        let a: BTreeSet<Halfspace> = r.facets.iter().map(Halfspace::canonical).collect();
        let b: BTreeSet<Halfspace> = hull.facets.iter().cloned().collect();
        prop_assert_eq!(a, b);
    }
}

/// Vertices of `{y : all halfspaces}` by solving every `p`-subset of
/// constraints as equalities.
fn naive_vertices(hs: &[Halfspace], p: usize) -> BTreeSet<ObjPoint> {
    let mut out = BTreeSet::new();
    for idx in (0..hs.len()).combinations(p) {
        let rows: Vec<Vec<Rational>> = idx.iter().map(|&i| hs[i].w.clone()).collect();
        if rank(&rows) < p {
            continue;
        }
        let rhs: Vec<Rational> = idx.iter().map(|&i| hs[i].alpha.clone()).collect();
        let y = ObjPoint::new(solve(rows, rhs));
        if hs.iter().all(|h| h.contains(&y)) {
            out.insert(y);
        }
    }
    out
}

fn solve(mut a: Vec<Vec<Rational>>, mut b: Vec<Rational>) -> Vec<Rational> {
    let n = a.len();
    for c in 0..n {
        let piv = (c..n).find(|&i| !a[i][c].is_zero()).unwrap();
        a.swap(c, piv);
        b.swap(c, piv);
        for i in 0..n {
            if i != c && !a[i][c].is_zero() {
                let f = &a[i][c] / &a[c][c];
                let row = a[c].clone();
                for (x, r) in a[i].iter_mut().zip(&row) {
                    *x -= &f * r;
                }
                let bc = b[c].clone();
                b[i] -= &f * bc;
            }
        }
    }
    (0..n).map(|i| &b[i] / &a[i][i]).collect()
}

#[test]
fn generated_instances_solve_like_brute_force() {
    for seed in 0..6 {
        for (kind, n) in [(GenKind::Mkp, 8), (GenKind::Map, 3)] {
            let inst = generate_instance(kind, 3, n, seed).unwrap();
            let hull = brute_force_hull(&brute_force_q(&inst).unwrap()).unwrap();
            let r = run(&inst, &RunConfig::new(OracleKind::TSep, Mode::Exact)).unwrap();
            assert_eq!(r.extreme_points, hull.extreme_points);
        }
    }
}
