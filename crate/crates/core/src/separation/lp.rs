//! Small dense simplex.
//!
//! The separation LPs have very few variables (`p` or `p + 1`) and a row
//! pool that only grows. The solver therefore works on the dual: with the
//! primal written as `min cᵀx s.t. a_gᵀx ≥ b_g` (equalities allowed), the
//! dual `max bᵀu s.t. Σ u_g a_g = c, u ≥ 0` is in standard form with one
//! equation per primal variable, so the tableau has `n` rows no matter how
//! many cuts have been pooled. An optimal dual basis names `n` primal rows
//! that are tight at a primal vertex; solving that square system gives the
//! basic optimal primal solution.
//!
//! Two phases with artificial variables and Bland's rule throughout.

use thiserror::Error;

use crate::num::Scalar;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Sense {
    Ge,
    Le,
    Eq,
}

#[derive(Clone, Debug)]
pub struct Row<T> {
    pub coeffs: Vec<T>,
    pub sense: Sense,
    pub rhs: T,
}

impl<T> Row<T> {
    pub fn new(coeffs: Vec<T>, sense: Sense, rhs: T) -> Self {
        Row { coeffs, sense, rhs }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Bound {
    NonNegative,
    Free,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Objective {
    Minimize,
    Maximize,
}

#[derive(Clone, Debug)]
pub struct LpProblem<T> {
    pub objective: Objective,
    pub costs: Vec<T>,
    pub rows: Vec<Row<T>>,
    pub bounds: Vec<Bound>,
}

#[derive(Clone, Debug, PartialEq)]
pub struct LpSolution<T> {
    pub objective: T,
    pub variables: Vec<T>,
    /// Rows whose dual variable is basic; tight at the returned vertex.
    pub basis_tight_rows: Vec<usize>,
    /// Variables whose nonnegativity bound is in the basis.
    pub basis_tight_bounds: Vec<usize>,
    pub pivots: usize,
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum LpError {
    #[error("LP is infeasible")]
    Infeasible,
    #[error("LP is unbounded or infeasible")]
    Unbounded,
    #[error("LP feasible region contains a line; no basic solution exists")]
    NotPointed,
    #[error("LP row {row} has {got} coefficients, expected {expected}")]
    DimensionMismatch {
        row: usize,
        expected: usize,
        got: usize,
    },
}

#[derive(Clone, Copy, Debug)]
enum Origin {
    Row(usize),
    Bound(usize),
}

struct Tableau<T> {
    // rows × cols coefficient matrix, plus rhs column
    a: Vec<Vec<T>>,
    rhs: Vec<T>,
    basis: Vec<usize>,
    pivots: usize,
}

impl<T: Scalar> Tableau<T> {
    fn reduced_cost(&self, cost: &[T], j: usize) -> T {
        let mut z = T::s_zero();
        for (i, &b) in self.basis.iter().enumerate() {
            if !cost[b].is_zero_s() && !self.a[i][j].is_zero_s() {
                z = z + cost[b].clone() * self.a[i][j].clone();
            }
        }
        cost[j].clone() - z
    }

    fn pivot(&mut self, r: usize, c: usize) {
        let piv = self.a[r][c].clone();
        for x in self.a[r].iter_mut() {
            *x = x.clone() / piv.clone();
        }
        self.rhs[r] = self.rhs[r].clone() / piv;
        let prow = self.a[r].clone();
        let prhs = self.rhs[r].clone();
        for i in 0..self.a.len() {
            if i == r || self.a[i][c].is_zero_s() {
                continue;
            }
            let f = self.a[i][c].clone();
            for (x, p) in self.a[i].iter_mut().zip(&prow) {
                if !p.is_zero_s() {
                    *x = x.clone() - f.clone() * p.clone();
                }
            }
            self.a[i][c] = T::s_zero();
            self.rhs[i] = self.rhs[i].clone() - f * prhs.clone();
        }
        self.basis[r] = c;
        self.pivots += 1;
    }

    /// Maximizes `cost · x` over columns `< allowed`. Returns false if
    /// unbounded.
    fn maximize(&mut self, cost: &[T], allowed: usize) -> bool {
        loop {
            let entering = (0..allowed)
                .filter(|j| !self.basis.contains(j))
                .find(|&j| self.reduced_cost(cost, j).is_pos());
            let Some(c) = entering else {
                return true;
            };
            let mut leave: Option<(usize, T)> = None;
            for i in 0..self.a.len() {
                if !self.a[i][c].is_pos() {
                    continue;
                }
                let ratio = self.rhs[i].clone() / self.a[i][c].clone();
                let better = match &leave {
                    None => true,
                    Some((li, lr)) => {
                        let d = ratio.clone() - lr.clone();
                        d.is_neg() || (d.is_zero_s() && self.basis[i] < self.basis[*li])
                    }
                };
                if better {
                    leave = Some((i, ratio));
                }
            }
            let Some((r, _)) = leave else {
                return false;
            };
            self.pivot(r, c);
        }
    }
}

/// Solves `lp` and returns a basic optimal solution.
pub fn lp_solve<T: Scalar>(lp: &LpProblem<T>) -> Result<LpSolution<T>, LpError> {
    let n = lp.costs.len();
    for (i, row) in lp.rows.iter().enumerate() {
        if row.coeffs.len() != n {
            return Err(LpError::DimensionMismatch {
                row: i,
                expected: n,
                got: row.coeffs.len(),
            });
        }
    }
    let c: Vec<T> = match lp.objective {
        Objective::Minimize => lp.costs.clone(),
        Objective::Maximize => lp.costs.iter().map(|x| -x.clone()).collect(),
    };

    // primal constraints as a·x ≥ b (or =), one or two dual columns each
    let mut cols: Vec<(Vec<T>, T, Origin)> = Vec::new();
    for (i, row) in lp.rows.iter().enumerate() {
        match row.sense {
            Sense::Ge => cols.push((row.coeffs.clone(), row.rhs.clone(), Origin::Row(i))),
            Sense::Le => cols.push((
                row.coeffs.iter().map(|x| -x.clone()).collect(),
                -row.rhs.clone(),
                Origin::Row(i),
            )),
            Sense::Eq => {
                cols.push((row.coeffs.clone(), row.rhs.clone(), Origin::Row(i)));
                cols.push((
                    row.coeffs.iter().map(|x| -x.clone()).collect(),
                    -row.rhs.clone(),
                    Origin::Row(i),
                ));
            }
        }
    }
    for (j, b) in lp.bounds.iter().enumerate() {
        if *b == Bound::NonNegative {
            let mut e = vec![T::s_zero(); n];
            e[j] = T::s_one();
            cols.push((e, T::s_zero(), Origin::Bound(j)));
        }
    }

    let m = cols.len();
    let total = m + n;
    let mut a = vec![vec![T::s_zero(); total]; n];
    let mut rhs = vec![T::s_zero(); n];
    for j in 0..n {
        let flip = c[j].is_neg();
        for (k, (col, _, _)) in cols.iter().enumerate() {
            a[j][k] = if flip {
                -col[j].clone()
            } else {
                col[j].clone()
            };
        }
        rhs[j] = if flip { -c[j].clone() } else { c[j].clone() };
        a[j][m + j] = T::s_one();
    }
    let mut t = Tableau {
        a,
        rhs,
        basis: (m..total).collect(),
        pivots: 0,
    };

    // phase 1: drive the artificials to zero
    let mut phase1 = vec![T::s_zero(); total];
    for x in phase1.iter_mut().skip(m) {
        *x = -T::s_one();
    }
    t.maximize(&phase1, total);
    let infeasibility = t
        .basis
        .iter()
        .enumerate()
        .filter(|(_, &b)| b >= m)
        .fold(T::s_zero(), |acc, (i, _)| acc + t.rhs[i].clone());
    if infeasibility.is_pos() {
        return Err(LpError::Unbounded);
    }
    for r in 0..n {
        if t.basis[r] < m {
            continue;
        }
        let col = (0..m).find(|&j| !t.basis.contains(&j) && !t.a[r][j].is_zero_s());
        match col {
            Some(j) => t.pivot(r, j),
            None => return Err(LpError::NotPointed),
        }
    }

    // phase 2 on the dual objective
    let mut cost = vec![T::s_zero(); total];
    for (k, (_, b, _)) in cols.iter().enumerate() {
        cost[k] = b.clone();
    }
    if !t.maximize(&cost, m) {
        return Err(LpError::Infeasible);
    }

    // primal vertex: the basic rows hold with equality
    let system: Vec<(Vec<T>, T)> = t
        .basis
        .iter()
        .map(|&k| (cols[k].0.clone(), cols[k].1.clone()))
        .collect();
    let x = solve_square(system).ok_or(LpError::NotPointed)?;
    let objective = lp
        .costs
        .iter()
        .zip(&x)
        .fold(T::s_zero(), |acc, (ci, xi)| acc + ci.clone() * xi.clone());

    let mut basis_tight_rows = Vec::new();
    let mut basis_tight_bounds = Vec::new();
    for &k in &t.basis {
        match cols[k].2 {
            Origin::Row(i) => basis_tight_rows.push(i),
            Origin::Bound(j) => basis_tight_bounds.push(j),
        }
    }
    basis_tight_rows.sort_unstable();
    basis_tight_rows.dedup();
    basis_tight_bounds.sort_unstable();

    Ok(LpSolution {
        objective,
        variables: x,
        basis_tight_rows,
        basis_tight_bounds,
        pivots: t.pivots,
    })
}

/// Gaussian elimination with largest-magnitude pivoting.
fn solve_square<T: Scalar>(mut rows: Vec<(Vec<T>, T)>) -> Option<Vec<T>> {
    let n = rows.len();
    for col in 0..n {
        let piv = (col..n)
            .filter(|&i| !rows[i].0[col].is_zero_s())
            .max_by(|&i, &j| {
                rows[i].0[col]
                    .magnitude()
                    .partial_cmp(&rows[j].0[col].magnitude())
                    .unwrap_or(std::cmp::Ordering::Equal)
            })?;
        rows.swap(col, piv);
        let (pr, pb) = rows[col].clone();
        for (i, row) in rows.iter_mut().enumerate() {
            if i == col || row.0[col].is_zero_s() {
                continue;
            }
            let f = row.0[col].clone() / pr[col].clone();
            for (x, pv) in row.0[col..n].iter_mut().zip(&pr[col..n]) {
                *x = x.clone() - f.clone() * pv.clone();
            }
            row.1 = row.1.clone() - f * pb.clone();
        }
    }
    Some(
        rows.into_iter()
            .enumerate()
            .map(|(i, (r, b))| b / r[i].clone())
            .collect(),
    )
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::num::{rat, ratio, Rational};

    fn r(v: &[i64]) -> Vec<Rational> {
        v.iter().map(|&x| rat(x)).collect()
    }

    #[test]
    fn max_alpha_on_simplex() {
        // vars (w1, w2, alpha)
        let lp = LpProblem {
            objective: Objective::Maximize,
            costs: r(&[0, 0, 1]),
            rows: vec![
                Row::new(r(&[0, 2, -1]), Sense::Ge, rat(0)),
                Row::new(r(&[2, 0, -1]), Sense::Ge, rat(0)),
                Row::new(r(&[1, 1, 0]), Sense::Eq, rat(1)),
            ],
            bounds: vec![Bound::NonNegative, Bound::NonNegative, Bound::Free],
        };
        let s = lp_solve(&lp).unwrap();
        assert_eq!(s.objective, rat(1));
        assert_eq!(s.variables, vec![ratio(1, 2), ratio(1, 2), rat(1)]);
    }

    #[test]
    fn two_row_minimum() {
        let lp = LpProblem {
            objective: Objective::Minimize,
            costs: r(&[1, 1]),
            rows: vec![
                Row::new(r(&[1, 2]), Sense::Ge, rat(1)),
                Row::new(r(&[2, 1]), Sense::Ge, rat(1)),
            ],
            bounds: vec![Bound::NonNegative; 2],
        };
        let s = lp_solve(&lp).unwrap();
        assert_eq!(s.objective, ratio(2, 3));
        assert_eq!(s.variables, vec![ratio(1, 3), ratio(1, 3)]);
        assert_eq!(s.basis_tight_rows, vec![0, 1]);
    }

    #[test]
    fn one_variable() {
        let lp = LpProblem {
            objective: Objective::Minimize,
            costs: r(&[1]),
            rows: vec![Row::new(r(&[1]), Sense::Ge, rat(1))],
            bounds: vec![Bound::Free],
        };
        assert_eq!(lp_solve(&lp).unwrap().objective, rat(1));
    }

    #[test]
    fn le_rows_and_float_scalar() {
        // max x + y s.t. x + 2y <= 4, 3x + y <= 6, x,y >= 0 -> (8/5, 6/5)
        let lp = LpProblem {
            objective: Objective::Maximize,
            costs: vec![1.0, 1.0],
            rows: vec![
                Row::new(vec![1.0, 2.0], Sense::Le, 4.0),
                Row::new(vec![3.0, 1.0], Sense::Le, 6.0),
            ],
            bounds: vec![Bound::NonNegative; 2],
        };
        let s = lp_solve(&lp).unwrap();
        assert!((s.objective - 2.8).abs() < 1e-12);
        assert!((s.variables[0] - 1.6).abs() < 1e-12);
    }

    #[test]
    fn errors() {
        let unbounded = LpProblem {
            objective: Objective::Minimize,
            costs: r(&[-1]),
            rows: vec![Row::new(r(&[1]), Sense::Ge, rat(0))],
            bounds: vec![Bound::Free],
        };
        assert_eq!(lp_solve(&unbounded), Err(LpError::Unbounded));

        let infeasible = LpProblem {
            objective: Objective::Minimize,
            costs: r(&[1]),
            rows: vec![
                Row::new(r(&[1]), Sense::Ge, rat(2)),
                Row::new(r(&[1]), Sense::Le, rat(1)),
            ],
            bounds: vec![Bound::Free],
        };
        assert_eq!(lp_solve(&infeasible), Err(LpError::Infeasible));

        let line = LpProblem {
            objective: Objective::Minimize,
            costs: r(&[0, 0]),
            rows: vec![Row::new(r(&[1, 1]), Sense::Ge, rat(0))],
            bounds: vec![Bound::Free, Bound::Free],
        };
        assert_eq!(lp_solve(&line), Err(LpError::NotPointed));

        let bad = LpProblem {
            objective: Objective::Minimize,
            costs: r(&[0, 0]),
            rows: vec![Row::new(r(&[1]), Sense::Ge, rat(0))],
            bounds: vec![Bound::Free, Bound::Free],
        };
        assert!(matches!(
            lp_solve(&bad),
            Err(LpError::DimensionMismatch { .. })
        ));
    }

    #[test]
    fn degenerate_rows_do_not_cycle() {
        // many rows through the same optimum
        let mut rows = Vec::new();
        for k in 1..8 {
            rows.push(Row::new(r(&[k, 8 - k]), Sense::Ge, rat(8)));
            rows.push(Row::new(r(&[2 * k, 16 - 2 * k]), Sense::Ge, rat(16)));
        }
        let lp = LpProblem {
            objective: Objective::Minimize,
            costs: r(&[1, 1]),
            rows,
            bounds: vec![Bound::NonNegative; 2],
        };
        let s = lp_solve(&lp).unwrap();
        assert_eq!(s.objective, rat(2));
    }
}
