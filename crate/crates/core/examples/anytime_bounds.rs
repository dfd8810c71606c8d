//! Stopping early. Every intermediate approximation is a valid lower bound
//! set; the snapshots show it shrinking sweep by sweep.
//!
//! cargo run --release --example anytime_bounds

use std::time::Duration;

use outer_approx::io::{generate_instance, GenKind};
use outer_approx::{run, Mode, OracleKind, RunConfig};

fn main() {
    let inst = generate_instance(GenKind::Mkp, 3, 25, 11).unwrap();

    let full = run(&inst, &RunConfig::new(OracleKind::Sep, Mode::Exact)).unwrap();
    for s in &full.snapshots {
        println!(
            "after {:>2} batches: {:>3} vertices, {:>3} halfspaces",
            s.iteration,
            s.vertices.len(),
            s.halfspaces.len()
        );
    }

    let cfg = RunConfig {
        max_iterations: Some(2),
        ..RunConfig::new(OracleKind::Sep, Mode::Exact)
    };
    let partial = run(&inst, &cfg).unwrap();
    println!(
        "stopped after 2 batches: solved={}, {} halfspaces",
        partial.solved,
        partial.facets.len()
    );

    let cfg = RunConfig {
        time_limit: Some(Duration::from_millis(20)),
        ..RunConfig::new(OracleKind::Sep, Mode::Exact)
    };
    let timed = run(&inst, &cfg).unwrap();
    println!(
        "20 ms limit: solved={}, {} halfspaces",
        timed.solved,
        timed.facets.len()
    );

    // final points of the full run lie in every partial bound set
    let ok = full.extreme_points.iter().all(|y| {
        partial
            .facets
            .iter()
            .chain(&timed.facets)
            .all(|h| h.contains(y))
    });
    println!("exact frontier inside both partial bounds: {ok}");
}
