//! Acceptance checks. Prints one PASS/FAIL line per criterion and exits
//! nonzero if any fails.

use std::collections::BTreeSet;
use std::time::{Duration, Instant};

use num_traits::{ToPrimitive, Zero};
use outer_approx::harness::cli::run_cli;
use outer_approx::harness::{brute_force_hull, brute_force_q, compare, BruteHull};
use outer_approx::io::{generate_instance, parse_result, write_instance, GenKind};
use outer_approx::oracles::{ws_solve, ExplicitSet, Instance, KnapsackRelaxation, Weight};
use outer_approx::separation::{Mode, OracleKind};
use outer_approx::{run, run_with_oracle, Halfspace, ObjPoint, Rational, RunConfig, RunResult};

struct Case {
    name: String,
    inst: Instance,
    q: Vec<ObjPoint>,
    hull: BruteHull,
}

fn case(name: String, inst: Instance) -> Case {
    let raw = brute_force_q(&inst).expect("small instance");
    let hull = brute_force_hull(&raw).expect("small hull");
    let q = raw.iter().map(|y| ObjPoint::from_ints(y)).collect();
    Case {
        name,
        inst,
        q,
        hull,
    }
}

/// 100 knapsack instances with p in {2,3,4} and 6..=12 items, then 50
/// assignment instances with p = 3 and n in 2..=4.
fn random_cases() -> Vec<Case> {
    let mut out = Vec::new();
    for i in 0..100u64 {
        let p = 2 + (i % 3) as usize;
        let n = 6 + (i % 7) as usize;
        let inst = generate_instance(GenKind::Mkp, p, n, 1000 + i).unwrap();
        out.push(case(format!("mkp p={p} n={n} seed={}", 1000 + i), inst));
    }
    for i in 0..50u64 {
        let n = 2 + (i % 3) as usize;
        let inst = generate_instance(GenKind::Map, 3, n, 2000 + i).unwrap();
        out.push(case(format!("map p=3 n={n} seed={}", 2000 + i), inst));
    }
    out
}

fn exact_cfg(kind: OracleKind) -> RunConfig {
    RunConfig {
        trace: true,
        snapshot_every: Some(1),
        ..RunConfig::new(kind, Mode::Exact)
    }
}

fn canonical_set(hs: &[Halfspace]) -> BTreeSet<Halfspace> {
    hs.iter().map(Halfspace::canonical).collect()
}

fn rank(rows: &[Vec<Rational>]) -> usize {
    let mut m = rows.to_vec();
    let cols = m.first().map_or(0, Vec::len);
    let mut r = 0;
    for c in 0..cols {
        let Some(piv) = (r..m.len()).find(|&i| !m[i][c].is_zero()) else {
            continue;
        };
        m.swap(r, piv);
        for i in 0..m.len() {
            if i != r && !m[i][c].is_zero() {
                let f = &m[i][c] / &m[r][c];
                let pivot_row = m[r].clone();
                for (x, pv) in m[i].iter_mut().zip(&pivot_row) {
                    *x -= &f * pv;
                }
            }
        }
        r += 1;
    }
    r
}

/// Number of affinely independent generators (points and unit rays)
/// on the hyperplane of `h`, minus one.
fn tight_affine_rank(h: &Halfspace, points: &[ObjPoint]) -> usize {
    let p = h.dim();
    let tight: Vec<&ObjPoint> = points.iter().filter(|y| h.slack(y).is_zero()).collect();
    let Some(base) = tight.first() else {
        return 0;
    };
    let mut rows: Vec<Vec<Rational>> = tight[1..].iter().map(|y| y.sub(base)).collect();
    for i in 0..p {
        if h.w[i].is_zero() {
            rows.push(ObjPoint::unit(p, i).coords().to_vec());
        }
    }
    rank(&rows)
}

/// Integer form of a halfspace when all its coefficients fit.
fn as_i128(h: &Halfspace) -> Option<(Vec<i128>, i128)> {
    let c = h.canonical();
    let w =
        c.w.iter()
            .map(|x| x.to_integer().to_i128())
            .collect::<Option<Vec<_>>>()?;
    Some((w, c.alpha.to_integer().to_i128()?))
}

fn violations(q: &[ObjPoint], hs: &[Halfspace]) -> usize {
    let ints: Option<Vec<Vec<i128>>> = q
        .iter()
        .map(|y| {
            y.coords()
                .iter()
                .map(|c| c.is_integer().then(|| c.to_integer().to_i128()).flatten())
                .collect()
        })
        .collect();
    let mut count = 0;
    for h in hs {
        match (as_i128(h), &ints) {
            (Some((w, a)), Some(ys)) => {
                count += ys
                    .iter()
                    .filter(|y| {
                        w.iter()
                            .zip(y.iter())
                            .try_fold(0i128, |acc, (x, c)| acc.checked_add(x.checked_mul(*c)?))
                            .is_none_or(|v| v < a)
                    })
                    .count();
            }
            _ => count += q.iter().filter(|y| !h.contains(y)).count(),
        }
    }
    count
}

struct Report {
    failed: usize,
}

impl Report {
    fn line(&mut self, id: &str, title: &str, ok: bool, detail: String) {
        println!(
            "{} {id} {title}: {detail}",
            if ok { "PASS" } else { "FAIL" }
        );
        if !ok {
            self.failed += 1;
        }
    }
}

fn fourteen_points() -> Instance {
    let pts = [
        [2, 9],
        [3, 7],
        [4, 6],
        [4, 7],
        [5, 4],
        [5, 5],
        [5, 6],
        [6, 4],
        [6, 6],
        [7, 2],
        [7, 3],
        [7, 4],
        [7, 6],
        [8, 5],
    ];
    Instance::Explicit(ExplicitSet {
        p: 2,
        points: pts.iter().map(|y| y.to_vec()).collect(),
    })
}

fn c1(rep: &mut Report) {
    let inst = fourteen_points();
    let want_pts: BTreeSet<ObjPoint> = [[2, 9], [3, 7], [5, 4], [7, 2]]
        .iter()
        .map(|y| ObjPoint::from_ints(y))
        .collect();
    let want_facets: BTreeSet<Halfspace> = [
        Halfspace::from_ints(&[1, 0], 2),
        Halfspace::from_ints(&[0, 1], 2),
        Halfspace::from_ints(&[2, 1], 13),
        Halfspace::from_ints(&[3, 2], 23),
        Halfspace::from_ints(&[1, 1], 9),
    ]
    .into_iter()
    .collect();
    let hull = brute_force_hull(&brute_force_q(&inst).unwrap()).unwrap();
    let mut ok = hull.extreme_points.iter().cloned().collect::<BTreeSet<_>>() == want_pts
        && canonical_set(&hull.facets) == want_facets;
    let start = Instant::now();
    for kind in [OracleKind::Sep, OracleKind::TSep] {
        let r = run(&inst, &RunConfig::new(kind, Mode::Exact)).unwrap();
        ok &= r.solved
            && r.extreme_points.iter().cloned().collect::<BTreeSet<_>>() == want_pts
            && canonical_set(&r.facets) == want_facets;
    }
    let secs = start.elapsed().as_secs_f64();
    ok &= secs < 1.0;
    rep.line(
        "C1",
        "fourteen-point example, both oracles",
        ok,
        format!("4 points and 5 facets expected, {secs:.3}s"),
    );
}

struct Runs {
    sep: RunResult,
    tsep: RunResult,
}

fn c2_to_c6(rep: &mut Report, cases: &[Case], runs: &[Runs], secs: f64) {
    // C2
    let mut matches = 0;
    let mut bad = Vec::new();
    for (c, r) in cases.iter().zip(runs) {
        let ok = [&r.sep, &r.tsep]
            .iter()
            .all(|x| x.solved && compare(&x.extreme_points, &x.facets, &c.hull).is_match());
        if ok {
            matches += 1;
        } else {
            bad.push(c.name.clone());
        }
    }
    rep.line(
        "C2",
        "exact solver equals brute force",
        matches == cases.len() && secs < 300.0,
        format!("{matches}/{} match, {secs:.1}s {bad:?}", cases.len()),
    );

    // C3
    let mut snaps = 0;
    let mut viol = 0;
    for (c, r) in cases.iter().zip(runs) {
        for x in [&r.sep, &r.tsep] {
            for s in &x.snapshots {
                snaps += 1;
                viol += violations(&c.q, &s.halfspaces);
            }
        }
    }
    rep.line(
        "C3",
        "every snapshot is a lower bound set",
        viol == 0 && snaps > 0,
        format!("{snaps} snapshots, {viol} violations"),
    );

    // C4
    let agree = runs
        .iter()
        .filter(|r| {
            r.sep.extreme_points.iter().collect::<BTreeSet<_>>()
                == r.tsep.extreme_points.iter().collect::<BTreeSet<_>>()
                && canonical_set(&r.sep.facets) == canonical_set(&r.tsep.facets)
        })
        .count();
    rep.line(
        "C4",
        "both oracles agree",
        agree == runs.len(),
        format!("{agree}/{} agree", runs.len()),
    );

    // C5
    let mut checked = 0;
    let mut wrong = 0;
    for (c, r) in cases.iter().zip(runs) {
        for rec in &r.sep.trace {
            let Some(cert) = &rec.certificate else {
                continue;
            };
            checked += 1;
            let w = Weight::new(cert.weight.clone()).unwrap();
            let ws = ws_solve(&c.inst, &w).unwrap().value;
            let brute =
                c.q.iter()
                    .map(|y| {
                        y.coords()
                            .iter()
                            .zip(&cert.weight)
                            .map(|(a, b)| a * b)
                            .sum::<Rational>()
                    })
                    .min()
                    .unwrap();
            if ws != cert.rhs || brute != cert.rhs {
                wrong += 1;
            }
        }
    }
    rep.line(
        "C5",
        "cut offset equals the weighted-sum minimum",
        wrong == 0 && checked > 0,
        format!("{checked} separations, {wrong} mismatches"),
    );

    // C6
    let mut facets = 0;
    let mut unsupported = 0;
    for r in runs {
        for x in [&r.sep, &r.tsep] {
            if !x.solved {
                continue;
            }
            for h in &x.facets {
                facets += 1;
                if tight_affine_rank(h, &x.extreme_points) + 1 < h.dim() {
                    unsupported += 1;
                }
            }
        }
    }
    rep.line(
        "C6",
        "every facet is tight at p affinely independent generators",
        unsupported == 0 && facets > 0,
        format!("{facets} facets, {unsupported} unsupported"),
    );
}

fn c7(rep: &mut Report, cases: &[Case]) {
    let mut n = 0;
    let mut viol = 0;
    let mut not_containing = 0;
    for c in cases
        .iter()
        .filter(|c| matches!(c.inst, Instance::Knapsack(_)) && c.inst.p() == 3)
        .take(20)
    {
        n += 1;
        let relax = KnapsackRelaxation::new(&c.inst).unwrap();
        let r = run_with_oracle(&relax, &RunConfig::new(OracleKind::Sep, Mode::Exact)).unwrap();
        viol += violations(&c.q, &r.facets);
        viol += r
            .snapshots
            .iter()
            .map(|s| violations(&c.q, &s.halfspaces))
            .sum::<usize>();
        not_containing += violations(&c.hull.extreme_points, &r.facets);
    }
    rep.line(
        "C7",
        "relaxation bound holds",
        n == 20 && viol == 0 && not_containing == 0,
        format!(
            "{n} instances, {viol} violated points, {not_containing} exact extreme points outside"
        ),
    );
}

fn c8(rep: &mut Report) {
    let mut ok = true;
    let mut detail = Vec::new();
    let runs = [
        (GenKind::Map, 10, 20..=200usize),
        (GenKind::Mkp, 30, 15..=150usize),
    ];
    for (kind, n, band) in runs {
        let inst = generate_instance(kind, 3, n, 7).unwrap();
        for oracle in [OracleKind::Sep, OracleKind::TSep] {
            let cfg = RunConfig {
                time_limit: Some(Duration::from_secs(10)),
                snapshot_every: None,
                ..RunConfig::new(oracle, Mode::Float)
            };
            let r = run(&inst, &cfg).unwrap();
            let good = r.solved && r.stats.seconds < 10.0 && band.contains(&r.facets.len());
            ok &= good;
            detail.push(format!(
                "{} n={n} {}: {} facets {:.2}s",
                inst.kind_name(),
                oracle.name(),
                r.facets.len(),
                r.stats.seconds
            ));
        }
    }
    rep.line("C8", "float mode at larger sizes", ok, detail.join("; "));
}

fn c9(rep: &mut Report, cases: &[Case]) {
    let dir = tempfile::tempdir().unwrap();
    let mut good = 0;
    for (i, c) in cases.iter().enumerate() {
        let path = dir.path().join(format!("inst{i}.txt"));
        std::fs::write(&path, write_instance(&c.inst)).unwrap();
        let mut out = Vec::new();
        let mut err = Vec::new();
        let code = run_cli(
            ["oa", "solve", path.to_str().unwrap(), "--time-limit", "0"],
            &mut out,
            &mut err,
        );
        let Ok(res) = parse_result(&String::from_utf8(out).unwrap()) else {
            continue;
        };
        if code == 0
            && !res.solved()
            && !res.facets.is_empty()
            && violations(&c.q, &res.facets) == 0
        {
            good += 1;
        }
    }
    rep.line(
        "C9",
        "zero time limit returns a partial bound set",
        good == cases.len(),
        format!("{good}/{} instances", cases.len()),
    );
}

fn main() {
    let mut rep = Report { failed: 0 };
    c1(&mut rep);

    let start = Instant::now();
    let cases = random_cases();
    let runs: Vec<Runs> = cases
        .iter()
        .map(|c| Runs {
            sep: run(&c.inst, &exact_cfg(OracleKind::Sep)).unwrap(),
            tsep: run(&c.inst, &exact_cfg(OracleKind::TSep)).unwrap(),
        })
        .collect();
    let secs = start.elapsed().as_secs_f64();
    c2_to_c6(&mut rep, &cases, &runs, secs);
    c7(&mut rep, &cases);
    c8(&mut rep);
    c9(&mut rep, &cases);

    if rep.failed > 0 {
        println!("{} criteria failed", rep.failed);
        std::process::exit(1);
    }
    println!("all criteria passed");
}
