//! The outer-approximation main loop.
//!
//! Starting from `ideal + R^p_≥`, every sweep sends each vertex of the
//! current approximation that is not yet known to lie in `Q⁺` to the
//! separation oracle, collects the returned cuts, and intersects them all at
//! once. A sweep without cuts means the approximation equals `Q⁺`. Because
//! every intermediate approximation contains `Q⁺`, the run can stop at any
//! time and still return a valid lower bound set.

use std::collections::BTreeSet;
use std::time::{Duration, Instant};

use num_traits::Signed;
use thiserror::Error;

use crate::num::{self, ratio, to_f64, Rational};
use crate::oracles::{ideal_point, Instance, OracleError, WeightedSumOracle};
use crate::polyhedron::{Halfspace, ObjPoint, OuterApprox, PolyhedronError};
use crate::separation::{
    separate, shift_for_tsep, Certificate, MasterLp, Mode, OracleKind, SepOptions, SeparationError,
    Status, TsepShift,
};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum DriverError {
    #[error(transparent)]
    Oracle(#[from] OracleError),
    #[error(transparent)]
    Separation(#[from] SeparationError),
    #[error(transparent)]
    Polyhedron(#[from] PolyhedronError),
}

#[derive(Clone, Debug)]
pub struct RunConfig {
    pub oracle: OracleKind,
    pub mode: Mode,
    pub time_limit: Option<Duration>,
    /// Float mode only.
    pub violation_eps: Rational,
    /// Float mode only: a vertex within this distance of a known inside
    /// point in every coordinate is treated as that point.
    pub inside_match_eps: Rational,
    /// Float mode only: cuts are rescaled by this factor and truncated to
    /// integers before entering the polyhedron.
    pub scale_factor: u64,
    pub max_iterations: Option<usize>,
    /// Record a snapshot every this many sweeps; `None` disables snapshots.
    pub snapshot_every: Option<usize>,
    /// Keep one record per oracle call in the result.
    pub trace: bool,
}

impl Default for RunConfig {
    fn default() -> Self {
        RunConfig {
            oracle: OracleKind::Sep,
            mode: Mode::Exact,
            time_limit: None,
            violation_eps: ratio(1, 1000),
            inside_match_eps: ratio(1, 1000),
            scale_factor: 1_000_000_000,
            max_iterations: None,
            snapshot_every: Some(1),
            trace: false,
        }
    }
}

impl RunConfig {
    pub fn new(oracle: OracleKind, mode: Mode) -> Self {
        RunConfig {
            oracle,
            mode,
            ..RunConfig::default()
        }
    }

    fn sep_options(&self) -> SepOptions {
        SepOptions {
            mode: self.mode,
            violation_eps: to_f64(&self.violation_eps),
            weight_scale: self.scale_factor,
            max_row_generations: None,
        }
    }
}

#[derive(Clone, Debug, Default, PartialEq)]
pub struct RunStats {
    pub oracle_calls: usize,
    pub ws_calls: usize,
    pub lp_solves: usize,
    pub lp_pivots: usize,
    pub cuts_added: usize,
    pub sweeps: usize,
    /// Float mode: outside answers whose scaled cut no longer separated the
    /// vertex; the vertex was then treated as inside.
    pub numeric_skips: usize,
    pub seconds: f64,
}

/// A valid lower bound set: `Q⁺` is contained in the intersection of the
/// halfspaces.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LowerBoundSet {
    pub iteration: usize,
    pub vertices: Vec<ObjPoint>,
    pub halfspaces: Vec<Halfspace>,
}

impl LowerBoundSet {
    pub fn contains(&self, y: &ObjPoint) -> bool {
        self.halfspaces.iter().all(|h| h.contains(y))
    }
}

/// One oracle call, for auditing.
#[derive(Clone, Debug)]
pub struct SeparationRecord {
    pub iteration: usize,
    pub y_star: ObjPoint,
    pub status: Status,
    pub certificate: Option<Certificate>,
}

/// Points already known to lie in `Q⁺`.
#[derive(Clone, Debug, Default)]
pub struct InsideCache {
    exact: BTreeSet<ObjPoint>,
    approx: Vec<(Vec<f64>, ObjPoint)>,
}

impl InsideCache {
    pub fn insert(&mut self, y: &ObjPoint) {
        if self.exact.insert(y.clone()) {
            self.approx.push((y.to_f64(), y.clone()));
        }
    }

    pub fn len(&self) -> usize {
        self.exact.len()
    }

    pub fn is_empty(&self) -> bool {
        self.exact.is_empty()
    }

    pub fn iter(&self) -> impl Iterator<Item = &ObjPoint> {
        self.exact.iter()
    }

    /// The cached point `y` matches: itself, or with `eps` the first one
    /// within `eps` in every coordinate.
    pub fn find(&self, y: &ObjPoint, eps: Option<&Rational>) -> Option<&ObjPoint> {
        if let Some(hit) = self.exact.get(y) {
            return Some(hit);
        }
        let eps = to_f64(eps?);
        let q = y.to_f64();
        self.approx
            .iter()
            .find(|(c, _)| c.iter().zip(&q).all(|(a, b)| (a - b).abs() <= eps))
            .map(|(_, y)| y)
    }

    /// The cached point closest to `y` in the max norm, if within `tol`.
    pub fn nearest(&self, y: &ObjPoint, tol: f64) -> Option<&ObjPoint> {
        let q = y.to_f64();
        self.approx
            .iter()
            .map(|(c, p)| {
                (
                    c.iter()
                        .zip(&q)
                        .map(|(a, b)| (a - b).abs())
                        .fold(0.0, f64::max),
                    p,
                )
            })
            .filter(|(d, _)| *d <= tol)
            .min_by(|a, b| a.0.total_cmp(&b.0))
            .map(|(_, p)| p)
    }
}

/// Relative distance within which a final float-mode vertex is identified
/// with a known point of `Q`.
pub const FLOAT_VERTEX_REL_TOL: f64 = 1e-5;

pub struct RunState {
    pub approx: OuterApprox,
    pub inside: InsideCache,
    pub master: MasterLp,
    pub iteration: usize,
    pub stats: RunStats,
}

#[derive(Clone, Debug)]
pub struct RunResult {
    pub solved: bool,
    pub oracle: OracleKind,
    pub mode: Mode,
    pub dim: usize,
    /// Number of batch intersections performed.
    pub iterations: usize,
    /// Vertices of the final approximation. After a finished float-mode
    /// run, each vertex is replaced by the point of `Q` it was matched to.
    pub extreme_points: Vec<ObjPoint>,
    /// Canonical integer form, in the order held by the approximation.
    pub facets: Vec<Halfspace>,
    pub stats: RunStats,
    pub snapshots: Vec<LowerBoundSet>,
    pub trace: Vec<SeparationRecord>,
}

impl RunResult {
    pub fn lower_bound_set(&self) -> LowerBoundSet {
        LowerBoundSet {
            iteration: self.iterations,
            vertices: self.extreme_points.clone(),
            halfspaces: self.facets.clone(),
        }
    }
}

/// Copy of the current approximation.
pub fn snapshot(state: &RunState) -> LowerBoundSet {
    LowerBoundSet {
        iteration: state.iteration,
        vertices: state.approx.vertices().to_vec(),
        halfspaces: state.approx.halfspaces().to_vec(),
    }
}

/// Whether `y` is a cached inside point: exact equality when `eps` is
/// `None`, otherwise closeness within `eps` in every coordinate.
pub fn match_inside(y: &ObjPoint, inside: &InsideCache, eps: Option<&Rational>) -> bool {
    inside.find(y, eps).is_some()
}

/// Solves `inst` with its exact weighted-sum oracle.
pub fn run(inst: &Instance, cfg: &RunConfig) -> Result<RunResult, DriverError> {
    inst.validate()?;
    run_with_oracle(inst, cfg)
}

/// Solves with any weighted-sum oracle, e.g. a relaxation.
pub fn run_with_oracle<O: WeightedSumOracle + ?Sized>(
    oracle: &O,
    cfg: &RunConfig,
) -> Result<RunResult, DriverError> {
    let start = Instant::now();
    let p = oracle.dim();
    let opts = cfg.sep_options();
    let float = cfg.mode == Mode::Float;
    let match_eps = float.then_some(&cfg.inside_match_eps);

    let (ideal, seeds) = ideal_point(oracle)?;
    let shift = match oracle.instance() {
        Some(inst) => shift_for_tsep(inst, cfg.mode),
        None => TsepShift::above(&ideal),
    };
    let mut state = RunState {
        approx: OuterApprox::init_from_ideal(&ideal),
        inside: InsideCache::default(),
        master: MasterLp::new(cfg.oracle, p, &seeds, shift),
        iteration: 0,
        stats: RunStats {
            ws_calls: p,
            ..RunStats::default()
        },
    };
    // points of Q only, as opposed to vertices accepted as inside
    let mut found = InsideCache::default();
    for s in &seeds {
        state.inside.insert(s);
        found.insert(s);
    }

    let out_of_time = |start: &Instant| cfg.time_limit.is_some_and(|t| start.elapsed() >= t);
    let mut snapshots = Vec::new();
    let mut trace = Vec::new();
    let mut solved = false;

    loop {
        if let Some(every) = cfg.snapshot_every {
            if every > 0 && state.iteration.is_multiple_of(every) {
                snapshots.push(snapshot(&state));
            }
        }
        if out_of_time(&start) || cfg.max_iterations.is_some_and(|m| state.iteration >= m) {
            break;
        }
        state.stats.sweeps += 1;

        let mut cuts: Vec<Halfspace> = Vec::new();
        let mut seen_cuts: BTreeSet<Halfspace> = BTreeSet::new();
        let mut interrupted = false;
        let vertices = state.approx.vertices().to_vec();
        for v in &vertices {
            if match_inside(v, &state.inside, match_eps) {
                continue;
            }
            if out_of_time(&start) {
                interrupted = true;
                break;
            }
            let ans = separate(v, &mut state.master, oracle, &opts)?;
            state.stats.oracle_calls += 1;
            state.stats.ws_calls += ans.ws_calls;
            state.stats.lp_solves += ans.lp_solves;
            state.stats.lp_pivots += ans.lp_pivots;
            for d in &ans.discovered {
                state.inside.insert(d);
                found.insert(d);
            }
            if cfg.trace {
                trace.push(SeparationRecord {
                    iteration: state.iteration,
                    y_star: v.clone(),
                    status: ans.status,
                    certificate: ans.certificate.clone(),
                });
            }
            match (ans.status, ans.cut) {
                (Status::Outside, Some(cut)) => {
                    let cut = if float {
                        scale_cut(&cut, cfg.scale_factor)
                    } else {
                        cut
                    };
                    if !cut.slack(v).is_negative() {
                        state.stats.numeric_skips += 1;
                        state.inside.insert(v);
                        continue;
                    }
                    if seen_cuts.insert(cut.canonical()) {
                        cuts.push(cut);
                    }
                }
                _ => state.inside.insert(v),
            }
        }

        if !cuts.is_empty() {
            state.approx = state.approx.add_halfspaces(&cuts)?;
            state.stats.cuts_added += cuts.len();
            state.iteration += 1;
        } else if !interrupted {
            solved = true;
            break;
        }
        if interrupted {
            break;
        }
    }

    if cfg.snapshot_every.is_some_and(|e| e > 0)
        && snapshots
            .last()
            .is_none_or(|s: &LowerBoundSet| s.iteration != state.iteration)
    {
        snapshots.push(snapshot(&state));
    }
    state.stats.seconds = start.elapsed().as_secs_f64();

    // truncated float cuts leave clusters of nearly equal vertices
    let extreme_points = if float && solved {
        let matched: BTreeSet<ObjPoint> = state
            .approx
            .vertices()
            .iter()
            .map(|v| {
                let scale = v.to_f64().iter().fold(1.0, |m: f64, x| m.max(x.abs()));
                let tol = to_f64(&cfg.inside_match_eps) + FLOAT_VERTEX_REL_TOL * scale;
                found.nearest(v, tol).unwrap_or(v).clone()
            })
            .collect();
        matched.into_iter().collect()
    } else {
        state.approx.vertices().to_vec()
    };

    Ok(RunResult {
        solved,
        oracle: cfg.oracle,
        mode: cfg.mode,
        dim: p,
        iterations: state.iteration,
        extreme_points,
        facets: state.approx.halfspaces().to_vec(),
        stats: state.stats,
        snapshots,
        trace,
    })
}

/// Float-mode hand-off to the polyhedron: normalize to `Σ w = 1`, multiply
/// by `scale` and keep the integer parts.
fn scale_cut(cut: &Halfspace, scale: u64) -> Halfspace {
    let n = cut.sum_normalized();
    let w: Vec<Rational> =
        n.w.iter()
            .map(|x| Rational::from_integer(num::truncate_scaled(to_f64(x), scale)))
            .collect();
    let alpha = Rational::from_integer(num::truncate_scaled(to_f64(&n.alpha), scale));
    Halfspace::new(w, alpha)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::num::rat;
    use crate::oracles::{AssignmentInstance, ExplicitSet};

    fn explicit(points: &[&[i64]]) -> Instance {
        Instance::Explicit(ExplicitSet {
            p: points[0].len(),
            points: points.iter().map(|y| y.to_vec()).collect(),
        })
    }

    #[test]
    fn single_point_needs_no_cuts() {
        let inst = explicit(&[&[3, 3]]);
        for kind in [OracleKind::Sep, OracleKind::TSep] {
            let r = run(&inst, &RunConfig::new(kind, Mode::Exact)).unwrap();
            assert!(r.solved);
            assert_eq!(r.extreme_points, vec![ObjPoint::from_ints(&[3, 3])]);
            assert_eq!(
                r.facets,
                vec![
                    Halfspace::from_ints(&[1, 0], 3),
                    Halfspace::from_ints(&[0, 1], 3)
                ]
            );
            assert_eq!(r.stats.cuts_added, 0);
        }
    }

    #[test]
    fn two_by_two_assignment() {
        let inst = Instance::Assignment(AssignmentInstance {
            costs: vec![vec![vec![1, 2], vec![2, 1]], vec![vec![2, 1], vec![1, 2]]],
        });
        let r = run(&inst, &RunConfig::new(OracleKind::Sep, Mode::Exact)).unwrap();
        assert!(r.solved);
        assert_eq!(
            r.extreme_points,
            vec![ObjPoint::from_ints(&[2, 4]), ObjPoint::from_ints(&[4, 2])]
        );
        let facets: BTreeSet<Halfspace> = r.facets.iter().cloned().collect();
        let want: BTreeSet<Halfspace> = [
            Halfspace::from_ints(&[1, 0], 2),
            Halfspace::from_ints(&[0, 1], 2),
            Halfspace::from_ints(&[1, 1], 6),
        ]
        .into_iter()
        .collect();
        assert_eq!(facets, want);
    }

    #[test]
    fn snapshots_start_at_ideal_orthant_and_end_at_result() {
        let inst = explicit(&[&[2, 9], &[3, 7], &[5, 4], &[7, 2], &[6, 6]]);
        let r = run(&inst, &RunConfig::new(OracleKind::Sep, Mode::Exact)).unwrap();
        let first = &r.snapshots[0];
        assert_eq!(first.iteration, 0);
        assert_eq!(first.vertices, vec![ObjPoint::from_ints(&[2, 2])]);
        assert_eq!(first.halfspaces.len(), 2);
        assert_eq!(r.snapshots.last().unwrap(), &r.lower_bound_set());
    }

    #[test]
    fn zero_time_limit_returns_orthant() {
        let inst = explicit(&[&[2, 9], &[7, 2]]);
        let cfg = RunConfig {
            time_limit: Some(Duration::ZERO),
            ..RunConfig::default()
        };
        let r = run(&inst, &cfg).unwrap();
        assert!(!r.solved);
        assert_eq!(r.facets.len(), 2);
        assert_eq!(r.extreme_points, vec![ObjPoint::from_ints(&[2, 2])]);
    }

    #[test]
    fn inside_matching() {
        let mut cache = InsideCache::default();
        cache.insert(&ObjPoint::from_ints(&[2, 9]));
        let eps = ratio(1, 1000);
        assert!(match_inside(&ObjPoint::from_ints(&[2, 9]), &cache, None));
        let near = ObjPoint::new(vec![ratio(20005, 10000), ratio(90002, 10000)]);
        assert!(match_inside(&near, &cache, Some(&eps)));
        assert!(!match_inside(&near, &cache, None));
        let far = ObjPoint::new(vec![ratio(201, 100), rat(9)]);
        assert!(!match_inside(&far, &cache, Some(&eps)));
    }

    #[test]
    fn float_scaling_truncates() {
        let cut = Halfspace::new(vec![ratio(2, 3), ratio(1, 3)], ratio(13, 3));
        let s = scale_cut(&cut, 1000);
        assert_eq!(s, Halfspace::from_ints(&[666, 333], 4333));
    }
}
