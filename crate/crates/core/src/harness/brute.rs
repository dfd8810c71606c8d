//! Brute-force reference for small instances.
//!
//! Everything here is written from scratch on purpose: enumeration of the
//! feasible set, a dense phase-1 simplex for the extremality test, and
//! facet candidates from integer cofactor determinants. Only the rational
//! number type is shared with the solver.

use std::collections::BTreeSet;

use itertools::Itertools;
use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};
use thiserror::Error;

use crate::num::Rational;
use crate::oracles::Instance;
use crate::polyhedron::{Halfspace, ObjPoint};

pub const MAX_ASSIGNMENT_N: usize = 8;
pub const MAX_KNAPSACK_N: usize = 20;
pub const MAX_HULL_POINTS: usize = 5000;
pub const MAX_HULL_DIM: usize = 5;
/// Upper bound on the number of facet candidates examined.
pub const MAX_CANDIDATES: u128 = 200_000_000;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum BruteError {
    #[error("instance too large for brute force: {0}")]
    TooLarge(String),
    #[error("brute-force hull is inconsistent: {0}")]
    Inconsistent(String),
}

/// Extreme points and facets of `conv(points) + R^p_≥`. Facets are
/// integer coprime, both sets sorted.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BruteHull {
    pub extreme_points: Vec<ObjPoint>,
    pub facets: Vec<Halfspace>,
}

impl BruteHull {
    pub fn contains(&self, y: &ObjPoint) -> bool {
        self.facets.iter().all(|h| {
            let lhs =
                h.w.iter()
                    .zip(y.coords())
                    .fold(Rational::zero(), |a, (w, c)| a + w * c);
            lhs >= h.alpha
        })
    }
}

/// All objective vectors of the feasible solutions, as integer vectors.
pub fn brute_force_q(inst: &Instance) -> Result<Vec<Vec<i64>>, BruteError> {
    match inst {
        Instance::Assignment(a) => {
            let n = a.n();
            if n > MAX_ASSIGNMENT_N {
                return Err(BruteError::TooLarge(format!(
                    "assignment with n={n} (limit {MAX_ASSIGNMENT_N})"
                )));
            }
            Ok((0..n)
                .permutations(n)
                .map(|perm| {
                    a.costs
                        .iter()
                        .map(|m| perm.iter().enumerate().map(|(i, &j)| m[i][j]).sum())
                        .collect()
                })
                .collect())
        }
        Instance::Knapsack(k) => {
            let n = k.n();
            if n > MAX_KNAPSACK_N {
                return Err(BruteError::TooLarge(format!(
                    "knapsack with n={n} (limit {MAX_KNAPSACK_N})"
                )));
            }
            let mut out = Vec::new();
            for mask in 0u32..(1u32 << n) {
                let chosen = |j: usize| mask >> j & 1 == 1;
                let weight: i64 = (0..n).filter(|&j| chosen(j)).map(|j| k.weights[j]).sum();
                if weight <= k.capacity {
                    out.push(
                        k.profits
                            .iter()
                            .map(|row| -(0..n).filter(|&j| chosen(j)).map(|j| row[j]).sum::<i64>())
                            .collect(),
                    );
                }
            }
            Ok(out)
        }
        Instance::Explicit(e) => Ok(e.points.clone()),
    }
}

fn dominated_or_equal(a: &[i64], b: &[i64]) -> bool {
    // b ≤ a componentwise
    a.iter().zip(b).all(|(x, y)| y <= x)
}

/// Distinct points not dominated by any other point.
pub fn pareto_filter(points: &[Vec<i64>]) -> Vec<Vec<i64>> {
    let distinct: Vec<Vec<i64>> = points
        .iter()
        .cloned()
        .collect::<BTreeSet<_>>()
        .into_iter()
        .collect();
    distinct
        .iter()
        .filter(|a| !distinct.iter().any(|b| b != *a && dominated_or_equal(a, b)))
        .cloned()
        .collect()
}

/// Computes the hull of `conv(points) + R^p_≥` by enumeration.
pub fn brute_force_hull(points: &[Vec<i64>]) -> Result<BruteHull, BruteError> {
    if points.len() > MAX_HULL_POINTS {
        return Err(BruteError::TooLarge(format!(
            "{} points (limit {MAX_HULL_POINTS})",
            points.len()
        )));
    }
    let Some(p) = points.first().map(Vec::len) else {
        return Ok(BruteHull {
            extreme_points: Vec::new(),
            facets: Vec::new(),
        });
    };
    if p > MAX_HULL_DIM {
        return Err(BruteError::TooLarge(format!(
            "p={p} (limit {MAX_HULL_DIM})"
        )));
    }
    let front = pareto_filter(points);

    // extremality by LP: y is not in conv(others) + R^p_≥
    let lp_extreme: Vec<Vec<i64>> = front
        .iter()
        .enumerate()
        .filter(|(i, y)| {
            let others: Vec<&Vec<i64>> = front
                .iter()
                .enumerate()
                .filter(|(j, _)| j != i)
                .map(|(_, z)| z)
                .collect();
            !in_convex_plus_orthant(y, &others)
        })
        .map(|(_, y)| y.clone())
        .collect();

    let facets = enumerate_facets(&lp_extreme, p)?;

    // every extreme point must be tight at facets whose normals span R^p
    let mut extreme_points = Vec::new();
    for y in &lp_extreme {
        let tight: Vec<Vec<i128>> = facets
            .iter()
            .filter(|(w, a)| dot_i128(w, y) == *a)
            .map(|(w, _)| w.clone())
            .collect();
        if integer_rank(&tight) < p {
            return Err(BruteError::Inconsistent(format!(
                "point {y:?} passes the LP test but is tight at fewer than {p} independent facets"
            )));
        }
        extreme_points.push(ObjPoint::from_ints(y));
    }
    extreme_points.sort();

    let facets = facets
        .into_iter()
        .map(|(w, a)| {
            Halfspace::new(
                w.iter()
                    .map(|&x| Rational::from_integer(BigInt::from(x)))
                    .collect(),
                Rational::from_integer(BigInt::from(a)),
            )
        })
        .collect();
    Ok(BruteHull {
        extreme_points,
        facets,
    })
}

fn dot_i128(w: &[i128], y: &[i64]) -> i128 {
    w.iter().zip(y).map(|(a, &b)| a * b as i128).sum()
}

fn choose(n: usize, k: usize) -> u128 {
    if k > n {
        return 0;
    }
    (0..k).fold(1u128, |acc, i| acc * (n - i) as u128 / (i + 1) as u128)
}

/// Candidate hyperplanes through `a ≥ 1` points with the remaining `p − a`
/// directions taken from unit rays; kept when the normal is nonnegative and
/// every point lies on the nonnegative side. Returned as coprime
/// `(w, alpha)` pairs, sorted.
fn enumerate_facets(points: &[Vec<i64>], p: usize) -> Result<Vec<(Vec<i128>, i128)>, BruteError> {
    let m = points.len();
    let total: u128 = (1..=p.min(m))
        .map(|a| choose(m, a) * choose(p, p - a))
        .sum();
    if total > MAX_CANDIDATES {
        return Err(BruteError::TooLarge(format!("{total} facet candidates")));
    }
    let mut found: BTreeSet<(Vec<i128>, i128)> = BTreeSet::new();
    for a in 1..=p.min(m) {
        for pts in (0..m).combinations(a) {
            for rays in (0..p).combinations(p - a) {
                let base = &points[pts[0]];
                let mut rows: Vec<Vec<i128>> = pts[1..]
                    .iter()
                    .map(|&j| {
                        points[j]
                            .iter()
                            .zip(base)
                            .map(|(x, y)| (x - y) as i128)
                            .collect()
                    })
                    .collect();
                for &r in &rays {
                    let mut e = vec![0i128; p];
                    e[r] = 1;
                    rows.push(e);
                }
                let Some(mut w) = cofactor_normal(&rows, p) else {
                    return Err(BruteError::TooLarge("determinant overflow".into()));
                };
                if w.iter().all(|x| *x == 0) {
                    continue;
                }
                if w.iter().any(|x| *x < 0) {
                    if w.iter().any(|x| *x > 0) {
                        continue;
                    }
                    w.iter_mut().for_each(|x| *x = -*x);
                }
                let alpha = dot_i128(&w, base);
                if points.iter().all(|y| dot_i128(&w, y) >= alpha) {
                    found.insert(normalize(w, alpha));
                }
            }
        }
    }
    Ok(found.into_iter().collect())
}

fn normalize(w: Vec<i128>, alpha: i128) -> (Vec<i128>, i128) {
    let g = w
        .iter()
        .chain(std::iter::once(&alpha))
        .fold(0i128, |g, x| g.gcd(x));
    if g <= 1 {
        return (w, alpha);
    }
    (w.into_iter().map(|x| x / g).collect(), alpha / g)
}

/// Vector orthogonal to the `p − 1` given rows: component `j` is the signed
/// minor with column `j` removed. `None` on overflow.
fn cofactor_normal(rows: &[Vec<i128>], p: usize) -> Option<Vec<i128>> {
    (0..p)
        .map(|j| {
            let minor: Vec<Vec<i128>> = rows
                .iter()
                .map(|r| {
                    r.iter()
                        .enumerate()
                        .filter(|(c, _)| *c != j)
                        .map(|(_, x)| *x)
                        .collect()
                })
                .collect();
            let d = det(&minor)?;
            if j % 2 == 0 {
                Some(d)
            } else {
                d.checked_neg()
            }
        })
        .collect()
}

/// Laplace expansion along the first row with checked arithmetic.
fn det(m: &[Vec<i128>]) -> Option<i128> {
    match m.len() {
        0 => Some(1),
        1 => Some(m[0][0]),
        n => {
            let mut acc: i128 = 0;
            for c in 0..n {
                if m[0][c] == 0 {
                    continue;
                }
                let sub: Vec<Vec<i128>> = m[1..]
                    .iter()
                    .map(|r| {
                        r.iter()
                            .enumerate()
                            .filter(|(k, _)| *k != c)
                            .map(|(_, x)| *x)
                            .collect()
                    })
                    .collect();
                let term = m[0][c].checked_mul(det(&sub)?)?;
                acc = if c % 2 == 0 {
                    acc.checked_add(term)?
                } else {
                    acc.checked_sub(term)?
                };
            }
            Some(acc)
        }
    }
}

fn integer_rank(rows: &[Vec<i128>]) -> usize {
    let mut m: Vec<Vec<Rational>> = rows
        .iter()
        .map(|r| {
            r.iter()
                .map(|&x| Rational::from_integer(BigInt::from(x)))
                .collect()
        })
        .collect();
    let cols = m.first().map_or(0, Vec::len);
    let mut rank = 0;
    for c in 0..cols {
        let Some(piv) = (rank..m.len()).find(|&i| !m[i][c].is_zero()) else {
            continue;
        };
        m.swap(rank, piv);
        for i in 0..m.len() {
            if i != rank && !m[i][c].is_zero() {
                let f = &m[i][c] / &m[rank][c];
                let pivot_row = m[rank].clone();
                for (x, pv) in m[i].iter_mut().zip(&pivot_row) {
                    *x -= &f * pv;
                }
            }
        }
        rank += 1;
    }
    rank
}

/// Whether some convex combination of `others` is `≤ y` componentwise.
///
/// Phase 1 of the simplex method on `Σ λ_j z_j + s = y`, `Σ λ_j = 1`,
/// `λ, s ≥ 0`, with one artificial per row and Bland's rule.
fn in_convex_plus_orthant(y: &[i64], others: &[&Vec<i64>]) -> bool {
    if others.is_empty() {
        return false;
    }
    let p = y.len();
    let m = others.len();
    let rows = p + 1;
    let cols = m + p + rows;
    let r = |x: i64| Rational::from_integer(BigInt::from(x));
    let mut t: Vec<Vec<Rational>> = vec![vec![Rational::zero(); cols + 1]; rows];
    for k in 0..p {
        for (j, z) in others.iter().enumerate() {
            t[k][j] = r(z[k]);
        }
        t[k][m + k] = Rational::one();
        t[k][cols] = r(y[k]);
    }
    t[p][..m].iter_mut().for_each(|x| *x = Rational::one());
    t[p][cols] = Rational::one();
    for (i, row) in t.iter_mut().enumerate() {
        if row[cols].is_negative() {
            row.iter_mut().for_each(|x| *x = -x.clone());
        }
        row[m + p + i] = Rational::one();
    }
    let mut basis: Vec<usize> = (0..rows).map(|i| m + p + i).collect();

    // reduced costs of "minimize the sum of artificials"
    loop {
        let reduced = |j: usize, t: &Vec<Vec<Rational>>| -> Rational {
            let own = if j >= m + p {
                Rational::one()
            } else {
                Rational::zero()
            };
            own - (0..rows)
                .filter(|&i| basis[i] >= m + p)
                .fold(Rational::zero(), |a, i| a + &t[i][j])
        };
        let Some(enter) = (0..cols).find(|&j| reduced(j, &t).is_negative()) else {
            break;
        };
        let mut leave: Option<(usize, Rational)> = None;
        for i in 0..rows {
            if t[i][enter].is_positive() {
                let ratio = &t[i][cols] / &t[i][enter];
                let better = match &leave {
                    None => true,
                    Some((l, best)) => ratio < *best || (ratio == *best && basis[i] < basis[*l]),
                };
                if better {
                    leave = Some((i, ratio));
                }
            }
        }
        let Some((lr, _)) = leave else {
            // phase 1 is bounded below by zero
            unreachable!("unbounded phase 1");
        };
        let piv = t[lr][enter].clone();
        t[lr].iter_mut().for_each(|x| *x /= &piv);
        let pivot_row = t[lr].clone();
        for (i, row) in t.iter_mut().enumerate() {
            if i != lr && !row[enter].is_zero() {
                let f = row[enter].clone();
                for (x, pr) in row.iter_mut().zip(&pivot_row) {
                    *x -= &f * pr;
                }
            }
        }
        basis[lr] = enter;
    }
    (0..rows)
        .filter(|&i| basis[i] >= m + p)
        .all(|i| t[i][cols].is_zero())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::oracles::{AssignmentInstance, ExplicitSet, KnapsackInstance};

    fn fig1() -> Vec<Vec<i64>> {
        vec![
            vec![2, 9],
            vec![3, 7],
            vec![4, 6],
            vec![4, 7],
            vec![5, 4],
            vec![5, 5],
            vec![5, 6],
            vec![6, 4],
            vec![6, 6],
            vec![7, 2],
            vec![7, 3],
            vec![7, 4],
            vec![7, 6],
            vec![8, 5],
        ]
    }

    fn hs(w: &[i64], a: i64) -> Halfspace {
        Halfspace::from_ints(w, a)
    }

    #[test]
    fn enumerates_feasible_sets() {
        let a = Instance::Assignment(AssignmentInstance {
            costs: vec![vec![vec![1, 2], vec![2, 1]], vec![vec![2, 1], vec![1, 2]]],
        });
        let mut q = brute_force_q(&a).unwrap();
        q.sort();
        assert_eq!(q, vec![vec![2, 4], vec![4, 2]]);

        let k = Instance::Knapsack(KnapsackInstance {
            profits: vec![vec![3, 1], vec![1, 3]],
            weights: vec![1, 1],
            capacity: 2,
        });
        assert_eq!(brute_force_q(&k).unwrap().len(), 4);

        let e = Instance::Explicit(ExplicitSet {
            p: 2,
            points: fig1(),
        });
        assert_eq!(brute_force_q(&e).unwrap(), fig1());

        let big = Instance::Assignment(AssignmentInstance {
            costs: vec![vec![vec![1; 9]; 9]; 2],
        });
        assert!(matches!(brute_force_q(&big), Err(BruteError::TooLarge(_))));
    }

    #[test]
    fn figure_one_hull() {
        let h = brute_force_hull(&fig1()).unwrap();
        let pts: Vec<ObjPoint> = [[2, 9], [3, 7], [5, 4], [7, 2]]
            .iter()
            .map(|y| ObjPoint::from_ints(y))
            .collect();
        assert_eq!(h.extreme_points, pts);
        let want: BTreeSet<Halfspace> = [
            hs(&[1, 0], 2),
            hs(&[0, 1], 2),
            hs(&[2, 1], 13),
            hs(&[3, 2], 23),
            hs(&[1, 1], 9),
        ]
        .into_iter()
        .collect();
        assert_eq!(h.facets.iter().cloned().collect::<BTreeSet<_>>(), want);
        assert!(h.contains(&ObjPoint::from_ints(&[5, 5])));
        assert!(!h.contains(&ObjPoint::from_ints(&[2, 2])));
    }

    #[test]
    fn small_hulls() {
        let h = brute_force_hull(&[vec![1, 3], vec![3, 1]]).unwrap();
        assert_eq!(h.facets.len(), 3);
        assert!(h.facets.contains(&hs(&[1, 1], 4)));

        let h = brute_force_hull(&[vec![4, 1, 7]]).unwrap();
        assert_eq!(
            h.facets,
            vec![hs(&[0, 0, 1], 7), hs(&[0, 1, 0], 1), hs(&[1, 0, 0], 4)]
        );
        assert_eq!(h.extreme_points, vec![ObjPoint::from_ints(&[4, 1, 7])]);
    }

    #[test]
    fn collinear_middle_point_is_not_extreme() {
        let h = brute_force_hull(&[vec![0, 4], vec![2, 2], vec![4, 0]]).unwrap();
        assert_eq!(h.extreme_points.len(), 2);
        assert!(h.facets.contains(&hs(&[1, 1], 4)));
    }

    #[test]
    fn three_objective_hull() {
        let pts = vec![vec![0, 2, 2], vec![2, 0, 2], vec![2, 2, 0], vec![2, 2, 2]];
        let h = brute_force_hull(&pts).unwrap();
        assert_eq!(h.extreme_points.len(), 3);
        assert!(h.facets.contains(&hs(&[1, 1, 1], 4)));
        assert!(h.contains(&ObjPoint::from_ints(&[2, 2, 2])));
        assert!(!h.contains(&ObjPoint::from_ints(&[1, 1, 1])));
    }

    #[test]
    fn determinants() {
        assert_eq!(det(&[vec![2, 1], vec![1, 3]]), Some(5));
        assert_eq!(det(&[vec![1, 2, 3], vec![0, 1, 4], vec![5, 6, 0]]), Some(1));
        assert_eq!(det(&[vec![i128::MAX, 0], vec![0, 2]]), None);
    }
}
