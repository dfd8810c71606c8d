//! Point separating oracles.
//!
//! Both oracles decide whether a point `y*` lies in `Q⁺` by solving a small
//! master LP over `(w, α)` (or just `w`) whose rows are points of `Q`. The
//! rows are generated lazily: after each LP solve a weighted-sum call with
//! the current weights either finds a point whose row is violated (it joins
//! the pool and the LP is solved again) or certifies that the LP solution
//! is feasible for all of `Q`. The pool lives in [`MasterLp`] and persists
//! across calls.
//!
//! * [`sep_point`]: `min y*ᵀw − α` s.t. `yᵀw − α ≥ 0` for pooled `y`,
//!   `Σ w_i = 1`, `w ≥ 0`. Negative optimum means `y*` is outside and
//!   `(w, α)` is a facet-supporting cut.
//! * [`tsep_point`]: target-cut form `min y*ᵀw` s.t. `yᵀw ≥ r`, `w ≥ 0`, in
//!   coordinates shifted so every point of `Q` is `≥ 1`. Optimum below `r`
//!   means outside.

pub mod lp;

use std::collections::BTreeSet;

use num_traits::{Signed, Zero};
use thiserror::Error;

use crate::num::{self, rat, Rational, Scalar};
use crate::oracles::{Instance, OracleError, Weight, WeightedSumOracle};
use crate::polyhedron::{Halfspace, ObjPoint};

pub use lp::{lp_solve, Bound, LpError, LpProblem, LpSolution, Objective, Row, Sense};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum OracleKind {
    Sep,
    TSep,
}

impl OracleKind {
    pub fn name(self) -> &'static str {
        match self {
            OracleKind::Sep => "sep",
            OracleKind::TSep => "tsep",
        }
    }
}

/// Exact rational decisions, or `f64` LPs with the fixed tolerances of the
/// floating-point setup.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Mode {
    Exact,
    Float,
}

impl Mode {
    pub fn name(self) -> &'static str {
        match self {
            Mode::Exact => "exact",
            Mode::Float => "float",
        }
    }
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum SeparationError {
    #[error(transparent)]
    Lp(#[from] LpError),
    #[error(transparent)]
    Oracle(#[from] OracleError),
    #[error("row generation did not converge within {0} rounds")]
    IterationLimit(usize),
    #[error("optimal alpha {alpha} differs from weighted-sum optimum {ws_value}")]
    AlphaMismatch { alpha: String, ws_value: String },
    #[error("master LP is a {have} master, {want} was requested")]
    KindMismatch {
        have: &'static str,
        want: &'static str,
    },
}

#[derive(Clone, Debug)]
pub struct SepOptions {
    pub mode: Mode,
    /// Violation and inside/outside tolerance in float mode.
    pub violation_eps: f64,
    /// Weights handed to the oracle in float mode are rounded to multiples
    /// of `1 / weight_scale`.
    pub weight_scale: u64,
    /// Cap on row generations per call; `None` means `10·|pool| + 1000`.
    pub max_row_generations: Option<usize>,
}

impl Default for SepOptions {
    fn default() -> Self {
        SepOptions {
            mode: Mode::Exact,
            violation_eps: 1e-3,
            weight_scale: 1_000_000_000,
            max_row_generations: None,
        }
    }
}

/// Coordinate shift for the target-cut oracle.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TsepShift {
    pub shift: Vec<Rational>,
    pub rhs_scale: Rational,
}

impl TsepShift {
    pub fn none(p: usize) -> Self {
        TsepShift {
            shift: vec![Rational::zero(); p],
            rhs_scale: rat(1),
        }
    }

    /// Smallest shift moving every point above `lower` to at least 1.
    pub fn above(lower: &ObjPoint) -> Self {
        let one = rat(1);
        TsepShift {
            shift: lower
                .coords()
                .iter()
                .map(|lo| {
                    if *lo >= one {
                        Rational::zero()
                    } else {
                        &one - lo
                    }
                })
                .collect(),
            rhs_scale: one,
        }
    }

    /// Maps a cut `wᵀy' ≥ r` in shifted coordinates back to `wᵀy ≥ r − wᵀs`.
    pub fn unshift(&self, cut: &Halfspace) -> Halfspace {
        Halfspace::new(cut.w.clone(), &cut.alpha - num::dot(&cut.w, &self.shift))
    }
}

/// Shift so that every point of `Q` (and of its knapsack relaxation) is at
/// least 1 in each coordinate. Objectives already bounded below by 1 are not
/// shifted. In float mode the target right-hand side is the total absolute
/// coefficient sum; exact mode uses 1.
pub fn shift_for_tsep(inst: &Instance, mode: Mode) -> TsepShift {
    let lower = inst.objective_lower_bounds();
    let sums = inst.coefficient_sums();
    let one = rat(1);
    let shift = lower
        .iter()
        .zip(&sums)
        .map(|(lo, sum)| {
            if *lo >= one {
                Rational::zero()
            } else if matches!(inst, Instance::Explicit(_)) {
                &one - lo
            } else {
                &one + sum
            }
        })
        .collect();
    let rhs_scale = match (mode, inst) {
        (Mode::Float, Instance::Assignment(_) | Instance::Knapsack(_)) => {
            sums.iter().fold(Rational::zero(), |a, b| a + b)
        }
        _ => one,
    };
    TsepShift { shift, rhs_scale }
}

/// Row pool of a separation LP, shared by all oracle calls of one run.
/// Points are stored in the LP's own coordinates (shifted for TSep).
#[derive(Clone, Debug)]
pub struct MasterLp {
    kind: OracleKind,
    dim: usize,
    pool: Vec<ObjPoint>,
    members: BTreeSet<ObjPoint>,
    shift: TsepShift,
}

impl MasterLp {
    /// `seeds` are points of `Q` in original coordinates, normally the
    /// ideal-point minimizers. `shift` is ignored for [`OracleKind::Sep`].
    pub fn new(kind: OracleKind, dim: usize, seeds: &[ObjPoint], shift: TsepShift) -> Self {
        let shift = match kind {
            OracleKind::Sep => TsepShift::none(dim),
            OracleKind::TSep => shift,
        };
        let mut m = MasterLp {
            kind,
            dim,
            pool: Vec::new(),
            members: BTreeSet::new(),
            shift,
        };
        for s in seeds {
            m.insert(s);
        }
        m
    }

    pub fn kind(&self) -> OracleKind {
        self.kind
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    /// Pooled points in LP coordinates.
    pub fn pool(&self) -> &[ObjPoint] {
        &self.pool
    }

    pub fn shift(&self) -> &TsepShift {
        &self.shift
    }

    pub fn to_lp_coords(&self, y: &ObjPoint) -> ObjPoint {
        y.translate(&self.shift.shift)
    }

    /// Adds a point given in original coordinates; false if already pooled.
    fn insert(&mut self, y: &ObjPoint) -> bool {
        let z = self.to_lp_coords(y);
        if self.members.insert(z.clone()) {
            self.pool.push(z);
            true
        } else {
            false
        }
    }

    fn contains(&self, y: &ObjPoint) -> bool {
        self.members.contains(&self.to_lp_coords(y))
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Status {
    Inside,
    Outside,
}

/// The optimal LP weights at termination, in original coordinates: the
/// hyperplane `weightᵀy = rhs`. For Sep `rhs` is `α̂`; for TSep it is the
/// un-shifted target right-hand side.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Certificate {
    pub weight: Vec<Rational>,
    pub rhs: Rational,
}

#[derive(Clone, Debug)]
pub struct OracleAnswer {
    pub status: Status,
    pub cut: Option<Halfspace>,
    /// Weighted-sum points found while generating rows, original coordinates.
    pub discovered: Vec<ObjPoint>,
    /// `None` when the membership shortcut answered without an LP.
    pub certificate: Option<Certificate>,
    pub ws_calls: usize,
    pub lp_solves: usize,
    pub lp_pivots: usize,
}

impl OracleAnswer {
    fn shortcut() -> Self {
        OracleAnswer {
            status: Status::Inside,
            cut: None,
            discovered: Vec::new(),
            certificate: None,
            ws_calls: 0,
            lp_solves: 0,
            lp_pivots: 0,
        }
    }
}

/// Dispatches on the master's kind.
pub fn separate<O: WeightedSumOracle + ?Sized>(
    y_star: &ObjPoint,
    master: &mut MasterLp,
    oracle: &O,
    opts: &SepOptions,
) -> Result<OracleAnswer, SeparationError> {
    match master.kind {
        OracleKind::Sep => sep_point(y_star, master, oracle, opts),
        OracleKind::TSep => tsep_point(y_star, master, oracle, opts),
    }
}

/// Separation with the `Σ w = 1` normalized LP.
///
/// In exact mode every terminating solve is checked against the final
/// weighted-sum call: the optimal `α̂` must equal `min {ŵᵀy : y ∈ Q}`.
pub fn sep_point<O: WeightedSumOracle + ?Sized>(
    y_star: &ObjPoint,
    master: &mut MasterLp,
    oracle: &O,
    opts: &SepOptions,
) -> Result<OracleAnswer, SeparationError> {
    if master.kind != OracleKind::Sep {
        return Err(SeparationError::KindMismatch {
            have: master.kind.name(),
            want: "sep",
        });
    }
    if master.contains(y_star) {
        return Ok(OracleAnswer::shortcut());
    }
    match opts.mode {
        Mode::Exact => run_loop::<Rational, O>(y_star, master, oracle, opts),
        Mode::Float => run_loop::<f64, O>(y_star, master, oracle, opts),
    }
}

/// Separation with the target-cut LP.
pub fn tsep_point<O: WeightedSumOracle + ?Sized>(
    y_star: &ObjPoint,
    master: &mut MasterLp,
    oracle: &O,
    opts: &SepOptions,
) -> Result<OracleAnswer, SeparationError> {
    if master.kind != OracleKind::TSep {
        return Err(SeparationError::KindMismatch {
            have: master.kind.name(),
            want: "tsep",
        });
    }
    if master.contains(y_star) {
        return Ok(OracleAnswer::shortcut());
    }
    match opts.mode {
        Mode::Exact => run_loop::<Rational, O>(y_star, master, oracle, opts),
        Mode::Float => run_loop::<f64, O>(y_star, master, oracle, opts),
    }
}

fn build_master<T: Scalar>(master: &MasterLp, y_lp: &[T], rhs: &T) -> LpProblem<T> {
    let p = master.dim;
    let point = |y: &ObjPoint| -> Vec<T> { y.coords().iter().map(T::from_rational).collect() };
    match master.kind {
        OracleKind::Sep => {
            let mut costs = y_lp.to_vec();
            costs.push(-T::s_one());
            let mut rows: Vec<Row<T>> = master
                .pool
                .iter()
                .map(|y| {
                    let mut c = point(y);
                    c.push(-T::s_one());
                    Row::new(c, Sense::Ge, T::s_zero())
                })
                .collect();
            let mut ones = vec![T::s_one(); p];
            ones.push(T::s_zero());
            rows.push(Row::new(ones, Sense::Eq, T::s_one()));
            let mut bounds = vec![Bound::NonNegative; p];
            bounds.push(Bound::Free);
            LpProblem {
                objective: Objective::Minimize,
                costs,
                rows,
                bounds,
            }
        }
        OracleKind::TSep => LpProblem {
            objective: Objective::Minimize,
            costs: y_lp.to_vec(),
            rows: master
                .pool
                .iter()
                .map(|y| Row::new(point(y), Sense::Ge, rhs.clone()))
                .collect(),
            bounds: vec![Bound::NonNegative; p],
        },
    }
}

/// Weights handed to the oracle. Exact mode passes the LP weights as they
/// are; float mode normalizes them to sum 1, clips LP noise below zero, and
/// rounds to the configured grid.
fn oracle_weight<T: Scalar>(w: &[T], opts: &SepOptions) -> Result<Weight, SeparationError> {
    match opts.mode {
        Mode::Exact => Ok(Weight::new(w.iter().map(T::to_rational).collect())?),
        Mode::Float => {
            let vals: Vec<f64> = w
                .iter()
                .map(|x| x.magnitude() * f64::from(x.sign()))
                .collect();
            let clipped: Vec<f64> = vals.iter().map(|&x| x.max(0.0)).collect();
            let total: f64 = clipped.iter().sum();
            let mut rounded: Vec<Rational> = clipped
                .iter()
                .map(|&x| num::from_f64_rounded(x / total, opts.weight_scale))
                .collect();
            if rounded.iter().all(|x| x.is_zero()) {
                let k = clipped
                    .iter()
                    .enumerate()
                    .max_by(|a, b| a.1.total_cmp(b.1))
                    .map_or(0, |(k, _)| k);
                rounded[k] = rat(1);
            }
            Ok(Weight::new(rounded)?)
        }
    }
}

fn run_loop<T: Scalar, O: WeightedSumOracle + ?Sized>(
    y_star: &ObjPoint,
    master: &mut MasterLp,
    oracle: &O,
    opts: &SepOptions,
) -> Result<OracleAnswer, SeparationError> {
    let p = master.dim;
    let float = opts.mode == Mode::Float;
    let eps =
        T::from_rational(&Rational::from_float(opts.violation_eps).unwrap_or_else(Rational::zero));
    let y_lp: Vec<T> = master
        .to_lp_coords(y_star)
        .coords()
        .iter()
        .map(T::from_rational)
        .collect();
    let rhs = T::from_rational(&master.shift.rhs_scale);
    let shift: Vec<T> = master.shift.shift.iter().map(T::from_rational).collect();
    let limit = opts
        .max_row_generations
        .unwrap_or(10 * master.pool.len() + 1000);

    let mut discovered: Vec<ObjPoint> = Vec::new();
    let mut seen: BTreeSet<ObjPoint> = BTreeSet::new();
    let mut ws_calls = 0;
    let mut lp_solves = 0;
    let mut lp_pivots = 0;
    let mut rounds = 0;

    let (w_hat, rhs_hat, lp_value) = loop {
        let sol = lp_solve(&build_master(master, &y_lp, &rhs))?;
        lp_solves += 1;
        lp_pivots += sol.pivots;
        let w_hat: Vec<T> = sol.variables[..p].to_vec();
        // right-hand side of the LP's hyperplane in LP coordinates
        let rhs_hat = match master.kind {
            OracleKind::Sep => sol.variables[p].clone(),
            OracleKind::TSep => rhs.clone(),
        };

        let weight = oracle_weight(&w_hat, opts)?;
        let res = oracle.solve(&weight)?;
        ws_calls += 1;
        if seen.insert(res.point.clone()) {
            discovered.push(res.point.clone());
        }

        let y_new: Vec<T> = res
            .point
            .coords()
            .iter()
            .zip(&shift)
            .map(|(c, s)| T::from_rational(c) + s.clone())
            .collect();
        let row_value = w_hat
            .iter()
            .zip(&y_new)
            .fold(T::s_zero(), |acc, (a, b)| acc + a.clone() * b.clone());
        let threshold = if float {
            rhs_hat.clone() - eps.clone()
        } else {
            rhs_hat.clone()
        };
        let violated = row_value.lt_s(&threshold);

        if violated && master.insert(&res.point) {
            rounds += 1;
            if rounds > limit {
                return Err(SeparationError::IterationLimit(limit));
            }
            continue;
        }
        if !float && master.kind == OracleKind::Sep && res.value != rhs_hat.to_rational() {
            return Err(SeparationError::AlphaMismatch {
                alpha: num::format_rational(&rhs_hat.to_rational()),
                ws_value: num::format_rational(&res.value),
            });
        }
        break (w_hat, rhs_hat, sol.objective);
    };

    let outside = match master.kind {
        OracleKind::Sep => {
            if float {
                lp_value.lt_s(&-eps.clone())
            } else {
                lp_value.is_neg()
            }
        }
        OracleKind::TSep => {
            let bound = if float {
                rhs.clone() - eps.clone()
            } else {
                rhs.clone()
            };
            lp_value.lt_s(&bound)
        }
    };

    let weight: Vec<Rational> = w_hat.iter().map(T::to_rational).collect();
    let lp_cut = Halfspace::new(weight, rhs_hat.to_rational());
    let cut_orig = master.shift.unshift(&lp_cut);
    let certificate = Certificate {
        weight: cut_orig.w.clone(),
        rhs: cut_orig.alpha.clone(),
    };

    let cut = if outside {
        let w_clean: Vec<Rational> = cut_orig
            .w
            .iter()
            .map(|x| {
                if x.is_negative() {
                    Rational::zero()
                } else {
                    x.clone()
                }
            })
            .collect();
        Some(Halfspace::new(w_clean, cut_orig.alpha))
    } else {
        None
    };

    Ok(OracleAnswer {
        status: if outside {
            Status::Outside
        } else {
            Status::Inside
        },
        cut,
        discovered,
        certificate: Some(certificate),
        ws_calls,
        lp_solves,
        lp_pivots,
    })
}
