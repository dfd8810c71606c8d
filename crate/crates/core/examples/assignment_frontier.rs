//! Three-objective assignment problem: the weighted-sum oracle is a
//! Hungarian-method solve, and the run returns every extreme supported
//! assignment.
//!
//! cargo run --release --example assignment_frontier -- [n] [seed]

use outer_approx::io::{generate_instance, GenKind};
use outer_approx::{run, Mode, OracleKind, RunConfig};

fn main() {
    let mut args = std::env::args().skip(1);
    let n: usize = args.next().map_or(8, |s| s.parse().expect("n"));
    let seed: u64 = args.next().map_or(1, |s| s.parse().expect("seed"));

    let inst = generate_instance(GenKind::Map, 3, n, seed).unwrap();
    let res = run(&inst, &RunConfig::new(OracleKind::TSep, Mode::Exact)).unwrap();

    println!(
        "n={n}: {} extreme points, {} facets, {} weighted-sum calls, {:.3}s",
        res.extreme_points.len(),
        res.facets.len(),
        res.stats.ws_calls,
        res.stats.seconds
    );
    for y in res.extreme_points.iter().take(10) {
        println!("  {y}");
    }
    if res.extreme_points.len() > 10 {
        println!("  ...");
    }
}
