//! Extreme points and facets of a small two-objective point set, computed
//! with both separation oracles.
//!
//! cargo run --example point_set

use outer_approx::{run, ExplicitSet, Instance, Mode, OracleKind, RunConfig};

fn main() {
    let points = vec![
        vec![2, 9],
        vec![3, 7],
        vec![4, 6],
        vec![4, 7],
        vec![5, 4],
        vec![5, 5],
        vec![5, 6],
        vec![6, 4],
        vec![6, 6],
        vec![7, 2],
        vec![7, 3],
        vec![7, 4],
        vec![7, 6],
        vec![8, 5],
    ];
    let inst = Instance::Explicit(ExplicitSet { p: 2, points });

    for oracle in [OracleKind::Sep, OracleKind::TSep] {
        let res = run(&inst, &RunConfig::new(oracle, Mode::Exact)).expect("valid instance");
        println!(
            "{} oracle, {} sweeps, {} oracle calls",
            oracle.name(),
            res.stats.sweeps,
            res.stats.oracle_calls
        );
        for y in &res.extreme_points {
            println!("  extreme point {y}");
        }
        for h in &res.facets {
            println!("  facet {h}");
        }
    }
}
