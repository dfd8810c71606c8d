//! Plugging in your own weighted-sum solver. The algorithm only ever asks
//! for `min wᵀy` over the feasible objective vectors, so any problem with
//! such a solver works. Here: a two-objective shortest path on a small
//! layered graph, solved by dynamic programming.
//!
//! cargo run --example custom_oracle

use outer_approx::num::{dot, rat};
use outer_approx::oracles::{OracleError, Weight, WeightedSumOracle, WsResult};
use outer_approx::{run_with_oracle, Mode, ObjPoint, OracleKind, Rational, RunConfig};

/// `layers` columns of `width` nodes; every node links to every node of the
/// next column with a (time, cost) pair.
struct LayeredPaths {
    width: usize,
    // arcs[l][i][j] = objective vector of the arc from node i in column l to node j in column l + 1
    arcs: Vec<Vec<Vec<[i64; 2]>>>,
}

impl LayeredPaths {
    fn new(layers: usize, width: usize) -> Self {
        let arcs = (0..layers)
            .map(|l| {
                (0..width)
                    .map(|i| {
                        (0..width)
                            .map(|j| {
                                let t = 1 + ((3 * l + 5 * i + 7 * j) % 9) as i64;
                                [t, 10 - t + ((l + i * j) % 3) as i64]
                            })
                            .collect()
                    })
                    .collect()
            })
            .collect();
        LayeredPaths { width, arcs }
    }
}

impl WeightedSumOracle for LayeredPaths {
    fn dim(&self) -> usize {
        2
    }

    fn solve(&self, w: &Weight) -> Result<WsResult, OracleError> {
        let w = w.as_slice();
        let arc_value = |v: &[i64; 2]| &w[0] * rat(v[0]) + &w[1] * rat(v[1]);
        // best[j] = (weighted length, objective vector) of the best path ending at node j,
        // ties broken by the lexicographically smaller vector
        let mut best: Vec<(Rational, [i64; 2])> = vec![(rat(0), [0, 0]); self.width];
        for layer in &self.arcs {
            best = (0..self.width)
                .map(|j| {
                    (0..self.width)
                        .map(|i| {
                            let a = &layer[i][j];
                            let y = [best[i].1[0] + a[0], best[i].1[1] + a[1]];
                            (&best[i].0 + arc_value(a), y)
                        })
                        .min()
                        .expect("width > 0")
                })
                .collect();
        }
        let (_, y) = best.into_iter().min().expect("width > 0");
        let point = ObjPoint::from_ints(&y);
        Ok(WsResult {
            value: dot(w, point.coords()),
            point,
            witness: None,
        })
    }
}

fn main() {
    let graph = LayeredPaths::new(6, 4);
    for oracle in [OracleKind::Sep, OracleKind::TSep] {
        let res = run_with_oracle(&graph, &RunConfig::new(oracle, Mode::Exact)).unwrap();
        println!(
            "{}: {} supported extreme paths",
            oracle.name(),
            res.extreme_points.len()
        );
        for y in &res.extreme_points {
            println!("  time/cost {y}");
        }
    }
}
