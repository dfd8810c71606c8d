//! Floating-point separation LPs next to exact ones. Float cuts are rescaled
//! to integers before they reach the polyhedron, which is always exact.
//!
//! cargo run --release --example float_mode

use outer_approx::io::{generate_instance, GenKind};
use outer_approx::{run, Mode, OracleKind, RunConfig};

fn main() {
    let inst = generate_instance(GenKind::Mkp, 3, 30, 7).unwrap();
    for mode in [Mode::Exact, Mode::Float] {
        let res = run(&inst, &RunConfig::new(OracleKind::TSep, mode)).unwrap();
        println!(
            "{:>5}: {} points, {} facets, {} LP pivots, {} skipped cuts, {:.3}s",
            mode.name(),
            res.extreme_points.len(),
            res.facets.len(),
            res.stats.lp_pivots,
            res.stats.numeric_skips,
            res.stats.seconds
        );
    }
}
