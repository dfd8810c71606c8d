use std::ops::{Add, Sub};

use num_bigint::BigInt;
use num_traits::Zero;

use super::{fits_i128, lex_base, pack_key, Instance, OracleError, Weight, Witness, WsResult};
use crate::num::{self, rat};
use crate::polyhedron::ObjPoint;

/// Weighted-sum oracle for assignment instances.
///
/// The aggregated cost of a pair is packed together with the individual
/// objective costs into one integer key, so a single Hungarian run returns
/// the weighted optimum with the lexicographically smallest objective vector.
pub fn ws_assignment(inst: &Instance, w: &Weight) -> Result<WsResult, OracleError> {
    let Instance::Assignment(a) = inst else {
        return Err(OracleError::WrongKind(inst.kind_name()));
    };
    let n = a.n();
    let p = a.p();
    let mult = w.integer_multiples();
    let max_abs = a
        .costs
        .iter()
        .flatten()
        .flatten()
        .map(|c| c.unsigned_abs())
        .max()
        .unwrap_or(0);
    let base = lex_base(&(BigInt::from(max_abs) * BigInt::from(n as u64)));

    let keys: Vec<BigInt> = (0..n)
        .flat_map(|i| (0..n).map(move |j| (i, j)))
        .map(|(i, j)| {
            let parts: Vec<BigInt> = (0..p).map(|k| BigInt::from(a.costs[k][i][j])).collect();
            let lead = parts
                .iter()
                .zip(&mult)
                .fold(BigInt::zero(), |acc, (c, m)| acc + c * m);
            pack_key(&lead, &parts, &base)
        })
        .collect();

    let perm = match fits_i128(keys.iter().cloned(), 4 * n) {
        Some(small) => hungarian(&to_matrix(small, n)),
        None => hungarian(&to_matrix(keys, n)),
    };

    let point = ObjPoint::new(
        (0..p)
            .map(|k| rat((0..n).map(|i| a.costs[k][i][perm[i]]).sum()))
            .collect(),
    );
    Ok(WsResult {
        value: num::dot(w.as_slice(), point.coords()),
        point,
        witness: Some(Witness::Permutation(perm)),
    })
}

fn to_matrix<T>(flat: Vec<T>, n: usize) -> Vec<Vec<T>> {
    let mut it = flat.into_iter();
    (0..n).map(|_| it.by_ref().take(n).collect()).collect()
}

/// Minimum-cost perfect matching on a square matrix (shortest augmenting
/// paths with potentials). Returns the column assigned to each row.
pub(crate) fn hungarian<T>(cost: &[Vec<T>]) -> Vec<usize>
where
    T: Clone + Ord + Zero + Add<Output = T> + Sub<Output = T>,
{
    let n = cost.len();
    let mut u = vec![T::zero(); n + 1];
    let mut v = vec![T::zero(); n + 1];
    // row matched to column j (1-based, 0 = none)
    let mut row_of = vec![0usize; n + 1];
    let mut way = vec![0usize; n + 1];

    for i in 1..=n {
        row_of[0] = i;
        let mut j0 = 0;
        let mut minv: Vec<Option<T>> = vec![None; n + 1];
        let mut used = vec![false; n + 1];
        loop {
            used[j0] = true;
            let i0 = row_of[j0];
            let mut delta: Option<T> = None;
            let mut j1 = 0;
            for j in 1..=n {
                if used[j] {
                    continue;
                }
                let cur = cost[i0 - 1][j - 1].clone() - u[i0].clone() - v[j].clone();
                if minv[j].as_ref().is_none_or(|m| cur < *m) {
                    minv[j] = Some(cur);
                    way[j] = j0;
                }
                let mj = minv[j].as_ref().expect("set above");
                if delta.as_ref().is_none_or(|d| mj < d) {
                    delta = Some(mj.clone());
                    j1 = j;
                }
            }
            let delta = delta.expect("an unused column remains while row is unmatched");
            for j in 0..=n {
                if used[j] {
                    let r = row_of[j];
                    u[r] = u[r].clone() + delta.clone();
                    v[j] = v[j].clone() - delta.clone();
                } else if let Some(m) = minv[j].as_mut() {
                    *m = m.clone() - delta.clone();
                }
            }
            j0 = j1;
            if row_of[j0] == 0 {
                break;
            }
        }
        loop {
            let j1 = way[j0];
            row_of[j0] = row_of[j1];
            j0 = j1;
            if j0 == 0 {
                break;
            }
        }
    }

    let mut assignment = vec![0; n];
    for j in 1..=n {
        if row_of[j] != 0 {
            assignment[row_of[j] - 1] = j - 1;
        }
    }
    assignment
}
