//! Bound sets from the fractional-knapsack relaxation.
//!
//! Any oracle that under-estimates the weighted-sum optimum yields a valid
//! (weaker) lower bound set. Here the relaxed and the exact bound sets of
//! the same knapsack instance are compared.
//!
//! cargo run --example knapsack_relaxation

use outer_approx::io::{generate_instance, GenKind};
use outer_approx::{run, run_with_oracle, KnapsackRelaxation, Mode, OracleKind, RunConfig};

fn main() {
    let inst = generate_instance(GenKind::Mkp, 3, 12, 3).unwrap();
    let cfg = RunConfig::new(OracleKind::Sep, Mode::Exact);

    let exact = run(&inst, &cfg).unwrap();
    let relaxed = run_with_oracle(&KnapsackRelaxation::new(&inst).unwrap(), &cfg).unwrap();

    println!(
        "exact:   {} points, {} facets",
        exact.extreme_points.len(),
        exact.facets.len()
    );
    println!(
        "relaxed: {} points, {} facets",
        relaxed.extreme_points.len(),
        relaxed.facets.len()
    );

    let inside = exact
        .extreme_points
        .iter()
        .filter(|y| relaxed.facets.iter().all(|h| h.contains(y)))
        .count();
    println!(
        "exact extreme points inside the relaxed bound set: {inside}/{}",
        exact.extreme_points.len()
    );
}
