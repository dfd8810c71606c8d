//! Outer approximation of the nondominated frontier of multiobjective
//! integer programs.
//!
//! The frontier `conv(Q) + R^p_≥` is approximated from outside by a
//! polyhedron that is refined with cuts from a separation oracle. Each
//! separation call only needs a weighted-sum oracle for the underlying
//! problem. When the loop ends without new cuts, the polyhedron vertices
//! are exactly the extreme supported points.
//!
//! ```
//! use outer_approx::{run, Instance, ExplicitSet, Mode, OracleKind, RunConfig};
//!
//! let inst = Instance::Explicit(ExplicitSet {
//!     p: 2,
//!     points: vec![vec![2, 9], vec![3, 7], vec![5, 4], vec![7, 2], vec![6, 6]],
//! });
//! let res = run(&inst, &RunConfig::new(OracleKind::Sep, Mode::Exact)).unwrap();
//! assert!(res.solved);
//! assert_eq!(res.extreme_points.len(), 4);
//! ```

pub mod driver;
pub mod harness;
pub mod io;
pub mod num;
pub mod oracles;
pub mod polyhedron;
pub mod separation;

pub use driver::{
    run, run_with_oracle, DriverError, LowerBoundSet, RunConfig, RunResult, RunStats,
};
pub use num::Rational;
pub use oracles::{
    ideal_point, ws_solve, AssignmentInstance, ExplicitSet, Instance, KnapsackInstance,
    KnapsackRelaxation, OracleError, Weight, WeightedSumOracle, WsResult,
};
pub use polyhedron::{Halfspace, ObjPoint, OuterApprox, PolyhedronError};
pub use separation::{separate, MasterLp, Mode, OracleAnswer, OracleKind, SepOptions, Status};
