//! Cross-check of the solver against plain enumeration on a small
//! instance.
//!
//! cargo run --example brute_force_check

use outer_approx::harness::{brute_force_hull, brute_force_q, compare};
use outer_approx::io::{generate_instance, GenKind};
use outer_approx::{run, Mode, OracleKind, RunConfig};

fn main() {
    for (kind, p, n) in [(GenKind::Mkp, 4, 10), (GenKind::Map, 3, 5)] {
        let inst = generate_instance(kind, p, n, 42).unwrap();
        let q = brute_force_q(&inst).unwrap();
        let hull = brute_force_hull(&q).unwrap();
        let res = run(&inst, &RunConfig::new(OracleKind::Sep, Mode::Exact)).unwrap();
        let cmp = compare(&res.extreme_points, &res.facets, &hull);
        println!(
            "{} p={p} n={n}: |Q|={}, {} extreme points, {} facets, {}",
            inst.kind_name(),
            q.len(),
            hull.extreme_points.len(),
            hull.facets.len(),
            if cmp.is_match() { "MATCH" } else { "MISMATCH" }
        );
    }
}
