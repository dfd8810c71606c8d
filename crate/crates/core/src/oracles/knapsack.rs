use std::cmp::Ordering;
use std::ops::Add;

use num_bigint::BigInt;
use num_traits::{One, Zero};

use super::{fits_i128, lex_base, pack_key, Instance, OracleError, Weight, Witness, WsResult};
use crate::num::{self, rat, Rational};
use crate::polyhedron::ObjPoint;

/// Weighted-sum oracle for 0/1 knapsack instances.
///
/// Maximizes `Σ_k w_k · profit_k` by dynamic programming over the capacity.
/// Item values are packed with the per-objective profits so that, among
/// optimal subsets, the one with the lexicographically smallest (negated)
/// profit vector wins.
pub fn ws_knapsack(inst: &Instance, w: &Weight) -> Result<WsResult, OracleError> {
    let Instance::Knapsack(k) = inst else {
        return Err(OracleError::WrongKind(inst.kind_name()));
    };
    if k.capacity < 0 {
        return Err(OracleError::InfeasibleInstance);
    }
    let n = k.n();
    let p = k.p();
    let mult = w.integer_multiples();
    let max_total: i64 = k
        .profits
        .iter()
        .map(|row| row.iter().sum::<i64>())
        .max()
        .unwrap_or(0);
    let base = lex_base(&BigInt::from(max_total));

    let keys: Vec<BigInt> = (0..n)
        .map(|j| {
            let parts: Vec<BigInt> = (0..p).map(|o| BigInt::from(k.profits[o][j])).collect();
            let lead = parts
                .iter()
                .zip(&mult)
                .fold(BigInt::zero(), |acc, (c, m)| acc + c * m);
            pack_key(&lead, &parts, &base)
        })
        .collect();

    // all subsets fit below Σ weights
    let total_weight: i64 = k.weights.iter().sum();
    let cap = k.capacity.min(total_weight) as usize;
    let weights: Vec<usize> = k.weights.iter().map(|&x| x as usize).collect();

    let chosen = match fits_i128(keys.iter().cloned(), n) {
        Some(small) => knapsack_dp(&small, &weights, cap),
        None => knapsack_dp(&keys, &weights, cap),
    };

    let point = ObjPoint::new(
        (0..p)
            .map(|o| -rat(chosen.iter().map(|&j| k.profits[o][j]).sum()))
            .collect(),
    );
    let mut x = vec![Rational::zero(); n];
    for &j in &chosen {
        x[j] = Rational::one();
    }
    Ok(WsResult {
        value: num::dot(w.as_slice(), point.coords()),
        point,
        witness: Some(Witness::Selection(x)),
    })
}

/// Returns the chosen item indices of a maximum-value subset with total
/// weight at most `cap`. Values must be nonnegative.
fn knapsack_dp<T>(values: &[T], weights: &[usize], cap: usize) -> Vec<usize>
where
    T: Clone + Ord + Zero + Add<Output = T>,
{
    let n = values.len();
    let width = cap + 1;
    let mut best = vec![T::zero(); width];
    let mut take = vec![false; n * width];
    for j in 0..n {
        let wt = weights[j];
        if wt > cap {
            continue;
        }
        for c in (wt..=cap).rev() {
            let cand = best[c - wt].clone() + values[j].clone();
            if cand > best[c] {
                best[c] = cand;
                take[j * width + c] = true;
            }
        }
    }
    let mut chosen = Vec::new();
    let mut c = cap;
    for j in (0..n).rev() {
        if take[j * width + c] {
            chosen.push(j);
            c -= weights[j];
        }
    }
    chosen.reverse();
    chosen
}

/// Fractional-knapsack relaxation: greedy by aggregated profit per unit of
/// weight (ties by item index), splitting the first item that does not fit.
pub fn ws_knapsack_relax(inst: &Instance, w: &Weight) -> Result<WsResult, OracleError> {
    let Instance::Knapsack(k) = inst else {
        return Err(OracleError::WrongKind(inst.kind_name()));
    };
    if k.capacity < 0 {
        return Err(OracleError::InfeasibleInstance);
    }
    if w.dim() != k.p() {
        return Err(OracleError::InvalidWeight(format!(
            "weight has {} components, instance has {} objectives",
            w.dim(),
            k.p()
        )));
    }
    let n = k.n();
    let p = k.p();
    let ratios: Vec<Rational> = (0..n)
        .map(|j| {
            let agg = (0..p).fold(Rational::zero(), |acc, o| {
                acc + &w.as_slice()[o] * rat(k.profits[o][j])
            });
            agg / rat(k.weights[j])
        })
        .collect();
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&a, &b| match ratios[b].cmp(&ratios[a]) {
        Ordering::Equal => a.cmp(&b),
        o => o,
    });

    let mut remaining = rat(k.capacity);
    let mut x = vec![Rational::zero(); n];
    for j in order {
        if remaining.is_zero() {
            break;
        }
        let wt = rat(k.weights[j]);
        if wt <= remaining {
            x[j] = Rational::one();
            remaining -= wt;
        } else {
            x[j] = &remaining / wt;
            break;
        }
    }
    let point = ObjPoint::new(
        (0..p)
            .map(|o| {
                -(0..n).fold(Rational::zero(), |acc, j| {
                    acc + &x[j] * rat(k.profits[o][j])
                })
            })
            .collect(),
    );
    Ok(WsResult {
        value: num::dot(w.as_slice(), point.coords()),
        point,
        witness: Some(Witness::Selection(x)),
    })
}
