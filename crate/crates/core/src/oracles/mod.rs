//! Weighted-sum oracles.
//!
//! The solver never looks at an instance directly: it only asks for
//! `min {wᵀy : y ∈ Q}` through [`WeightedSumOracle`]. All instances are
//! minimization problems in objective space; knapsack profits are negated
//! when a point is produced.

mod assignment;
mod knapsack;

use std::cmp::Ordering;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};
use thiserror::Error;

use crate::num::{self, rat, Rational};
use crate::polyhedron::ObjPoint;

pub use assignment::ws_assignment;
pub use knapsack::{ws_knapsack, ws_knapsack_relax};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum OracleError {
    #[error("instance has no feasible solution")]
    InfeasibleInstance,
    #[error("invalid weight: {0}")]
    InvalidWeight(String),
    #[error("invalid instance: {0}")]
    Validation(String),
    #[error("oracle does not support {0} instances")]
    WrongKind(&'static str),
}

/// `p` cost matrices of size `n × n`; `costs[k][i][j]` is the cost of
/// assigning agent `i` to task `j` in objective `k`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct AssignmentInstance {
    pub costs: Vec<Vec<Vec<i64>>>,
}

impl AssignmentInstance {
    pub fn p(&self) -> usize {
        self.costs.len()
    }
    pub fn n(&self) -> usize {
        self.costs.first().map_or(0, |c| c.len())
    }
}

/// 0/1 knapsack with `p` profit vectors. Profits are stored as given
/// (positive); points are reported negated.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct KnapsackInstance {
    pub profits: Vec<Vec<i64>>,
    pub weights: Vec<i64>,
    pub capacity: i64,
}

impl KnapsackInstance {
    pub fn p(&self) -> usize {
        self.profits.len()
    }
    pub fn n(&self) -> usize {
        self.weights.len()
    }
}

/// `Q` given point by point.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ExplicitSet {
    pub p: usize,
    pub points: Vec<Vec<i64>>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Instance {
    Assignment(AssignmentInstance),
    Knapsack(KnapsackInstance),
    Explicit(ExplicitSet),
}

impl Instance {
    pub fn p(&self) -> usize {
        match self {
            Instance::Assignment(a) => a.p(),
            Instance::Knapsack(k) => k.p(),
            Instance::Explicit(e) => e.p,
        }
    }

    /// Items, agents, or points.
    pub fn n(&self) -> usize {
        match self {
            Instance::Assignment(a) => a.n(),
            Instance::Knapsack(k) => k.n(),
            Instance::Explicit(e) => e.points.len(),
        }
    }

    pub fn kind_name(&self) -> &'static str {
        match self {
            Instance::Assignment(_) => "map",
            Instance::Knapsack(_) => "mkp",
            Instance::Explicit(_) => "pts",
        }
    }

    pub fn validate(&self) -> Result<(), OracleError> {
        let bad = |m: String| Err(OracleError::Validation(m));
        match self {
            Instance::Assignment(a) => {
                let n = a.n();
                if a.p() == 0 || n == 0 {
                    return bad("assignment needs p ≥ 1 and n ≥ 1".into());
                }
                for (k, m) in a.costs.iter().enumerate() {
                    if m.len() != n || m.iter().any(|r| r.len() != n) {
                        return bad(format!("cost matrix {k} is not {n}×{n}"));
                    }
                }
            }
            Instance::Knapsack(k) => {
                let n = k.n();
                if k.p() == 0 || n == 0 {
                    return bad("knapsack needs p ≥ 1 and n ≥ 1".into());
                }
                if let Some(j) = k.weights.iter().position(|&w| w <= 0) {
                    return bad(format!("item {j} has nonpositive weight"));
                }
                for (o, row) in k.profits.iter().enumerate() {
                    if row.len() != n {
                        return bad(format!(
                            "profit row {o} has {} entries, expected {n}",
                            row.len()
                        ));
                    }
                    if let Some(j) = row.iter().position(|&x| x <= 0) {
                        return bad(format!("profit {o},{j} is nonpositive"));
                    }
                }
            }
            Instance::Explicit(e) => {
                if e.p == 0 {
                    return bad("point set needs p ≥ 1".into());
                }
                if e.points.is_empty() {
                    return bad("point set is empty".into());
                }
                if let Some(i) = e.points.iter().position(|y| y.len() != e.p) {
                    return bad(format!("point {i} does not have {} coordinates", e.p));
                }
            }
        }
        Ok(())
    }

    /// Sum of absolute objective coefficients per objective: an upper bound
    /// on `|y_k|` over `Q`.
    pub fn coefficient_sums(&self) -> Vec<Rational> {
        match self {
            Instance::Assignment(a) => a
                .costs
                .iter()
                .map(|m| rat(m.iter().flatten().map(|c| c.abs()).sum()))
                .collect(),
            Instance::Knapsack(k) => k
                .profits
                .iter()
                .map(|row| rat(row.iter().map(|c| c.abs()).sum()))
                .collect(),
            Instance::Explicit(e) => (0..e.p)
                .map(|k| rat(e.points.iter().map(|y| y[k].abs()).max().unwrap_or(0)))
                .collect(),
        }
    }

    /// A componentwise lower bound on `Q` that needs no oracle call.
    pub fn objective_lower_bounds(&self) -> Vec<Rational> {
        match self {
            Instance::Assignment(a) => a
                .costs
                .iter()
                .map(|m| {
                    rat(m
                        .iter()
                        .map(|row| row.iter().copied().min().unwrap_or(0))
                        .sum())
                })
                .collect(),
            Instance::Knapsack(k) => k.profits.iter().map(|row| -rat(row.iter().sum())).collect(),
            Instance::Explicit(e) => (0..e.p)
                .map(|k| rat(e.points.iter().map(|y| y[k]).min().unwrap_or(0)))
                .collect(),
        }
    }
}

/// A nonnegative, nonzero weight vector.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Weight(Vec<Rational>);

impl Weight {
    pub fn new(w: Vec<Rational>) -> Result<Self, OracleError> {
        if w.iter().any(|x| x.is_negative()) {
            return Err(OracleError::InvalidWeight("negative component".into()));
        }
        if w.iter().all(|x| x.is_zero()) {
            return Err(OracleError::InvalidWeight("all components zero".into()));
        }
        Ok(Weight(w))
    }

    pub fn from_ints(w: &[i64]) -> Result<Self, OracleError> {
        Weight::new(w.iter().map(|&x| rat(x)).collect())
    }

    pub fn unit(p: usize, i: usize) -> Self {
        Weight(ObjPoint::unit(p, i).0)
    }

    pub fn as_slice(&self) -> &[Rational] {
        &self.0
    }

    pub fn dim(&self) -> usize {
        self.0.len()
    }

    /// Only results for strictly positive weights are certified supported
    /// non-dominated points.
    pub fn is_strictly_positive(&self) -> bool {
        self.0.iter().all(|x| x.is_positive())
    }

    /// Integer multiples `a_k = w_k · lcm(denominators)`, same ordering of
    /// weighted sums as `w`.
    pub(crate) fn integer_multiples(&self) -> Vec<BigInt> {
        let l = self
            .0
            .iter()
            .fold(BigInt::one(), |acc, x| acc.lcm(x.denom()));
        self.0.iter().map(|x| (x * &l).to_integer()).collect()
    }
}

/// Decision-space solution behind a weighted-sum result.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Witness {
    /// `perm[i]` is the task of agent `i`.
    Permutation(Vec<usize>),
    /// Item amounts in `[0, 1]`.
    Selection(Vec<Rational>),
    /// Index into an explicit point list.
    Index(usize),
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct WsResult {
    pub value: Rational,
    pub point: ObjPoint,
    pub witness: Option<Witness>,
}

/// Anything that can minimize a nonnegative weighted sum over a fixed
/// objective-space set.
pub trait WeightedSumOracle {
    fn dim(&self) -> usize;
    fn solve(&self, w: &Weight) -> Result<WsResult, OracleError>;
    /// The instance behind the oracle, if any. Its coefficient bounds give
    /// the target-cut coordinate shift; without one the shift is derived
    /// from the ideal point.
    fn instance(&self) -> Option<&Instance> {
        None
    }
}

impl WeightedSumOracle for Instance {
    fn dim(&self) -> usize {
        self.p()
    }
    fn solve(&self, w: &Weight) -> Result<WsResult, OracleError> {
        ws_solve(self, w)
    }
    fn instance(&self) -> Option<&Instance> {
        Some(self)
    }
}

/// Fractional-knapsack relaxation of a knapsack instance. Its weighted-sum
/// optimum lower-bounds the integer one, so outer approximations built from
/// it remain valid lower bound sets for the integer problem.
#[derive(Clone, Debug)]
pub struct KnapsackRelaxation<'a> {
    inst: &'a Instance,
}

impl<'a> KnapsackRelaxation<'a> {
    pub fn new(inst: &'a Instance) -> Result<Self, OracleError> {
        match inst {
            Instance::Knapsack(_) => Ok(KnapsackRelaxation { inst }),
            _ => Err(OracleError::WrongKind(inst.kind_name())),
        }
    }
}

impl WeightedSumOracle for KnapsackRelaxation<'_> {
    fn dim(&self) -> usize {
        self.inst.p()
    }
    fn solve(&self, w: &Weight) -> Result<WsResult, OracleError> {
        ws_knapsack_relax(self.inst, w)
    }
    fn instance(&self) -> Option<&Instance> {
        Some(self.inst)
    }
}

/// Exact minimizer of `wᵀy` over `Q`. Ties go to the lexicographically
/// smallest objective point.
pub fn ws_solve(inst: &Instance, w: &Weight) -> Result<WsResult, OracleError> {
    if w.dim() != inst.p() {
        return Err(OracleError::InvalidWeight(format!(
            "weight has {} components, instance has {} objectives",
            w.dim(),
            inst.p()
        )));
    }
    match inst {
        Instance::Assignment(_) => ws_assignment(inst, w),
        Instance::Knapsack(_) => ws_knapsack(inst, w),
        Instance::Explicit(e) => ws_explicit(e, w),
    }
}

fn ws_explicit(e: &ExplicitSet, w: &Weight) -> Result<WsResult, OracleError> {
    let mut best: Option<(Rational, ObjPoint, usize)> = None;
    for (i, y) in e.points.iter().enumerate() {
        let point = ObjPoint::from_ints(y);
        let value = num::dot(w.as_slice(), point.coords());
        let better = match &best {
            None => true,
            Some((bv, bp, _)) => match value.cmp(bv) {
                Ordering::Less => true,
                Ordering::Equal => point < *bp,
                Ordering::Greater => false,
            },
        };
        if better {
            best = Some((value, point, i));
        }
    }
    let (value, point, i) = best.ok_or(OracleError::InfeasibleInstance)?;
    Ok(WsResult {
        value,
        point,
        witness: Some(Witness::Index(i)),
    })
}

/// Ideal point and the `p` minimizers found while computing it.
pub fn ideal_point<O: WeightedSumOracle + ?Sized>(
    oracle: &O,
) -> Result<(ObjPoint, Vec<ObjPoint>), OracleError> {
    let p = oracle.dim();
    let mut ideal = Vec::with_capacity(p);
    let mut seeds = Vec::with_capacity(p);
    for i in 0..p {
        let r = oracle.solve(&Weight::unit(p, i))?;
        ideal.push(r.value);
        seeds.push(r.point);
    }
    Ok((ObjPoint::new(ideal), seeds))
}

/// Base for packing a vector of bounded integer totals under a leading
/// weighted value: any base larger than twice the largest possible total
/// makes integer comparison of the packed keys lexicographic.
pub(crate) fn lex_base(max_abs_total: &BigInt) -> BigInt {
    max_abs_total * 2 + 1
}

/// `lead · base^p + Σ_k parts[k] · base^(p-1-k)`.
pub(crate) fn pack_key(lead: &BigInt, parts: &[BigInt], base: &BigInt) -> BigInt {
    parts
        .iter()
        .fold(lead.clone(), |acc, part| acc * base + part)
}

pub(crate) fn fits_i128(
    values: impl Iterator<Item = BigInt>,
    multiplier: usize,
) -> Option<Vec<i128>> {
    let limit = BigInt::from(i128::MAX) / BigInt::from(multiplier.max(1) as u64 + 1);
    values
        .map(|v| {
            if v.abs() > limit {
                None
            } else {
                i128::try_from(&v).ok()
            }
        })
        .collect()
}
