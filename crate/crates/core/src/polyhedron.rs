//! Outer approximations in double description form.
//!
//! Every polyhedron handled here has the shape `conv(V) + R^p_≥`, so the
//! recession cone is fixed to the nonnegative orthant and only the vertex
//! list and the halfspace list change. Cuts are intersected one at a time
//! with the classic double-description update: keep the vertices on the
//! feasible side, and create new vertices where edges of the current
//! polyhedron (bounded ones between a kept and a dropped vertex, and
//! unbounded ones leaving a dropped vertex along some `e_i`) cross the cut.
//! Adjacency is decided algebraically from the rank of the commonly tight
//! halfspaces.

use std::collections::BTreeSet;
use std::fmt;

use num_traits::{Signed, Zero};
use thiserror::Error;

use crate::num::{self, format_rational, rat, Rational};

/// A point in objective space.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct ObjPoint(pub Vec<Rational>);

impl ObjPoint {
    pub fn new(coords: Vec<Rational>) -> Self {
        ObjPoint(coords)
    }

    pub fn from_ints(coords: &[i64]) -> Self {
        ObjPoint(coords.iter().map(|&c| rat(c)).collect())
    }

    pub fn dim(&self) -> usize {
        self.0.len()
    }

    pub fn coords(&self) -> &[Rational] {
        &self.0
    }

    pub fn unit(dim: usize, i: usize) -> Self {
        let mut c = vec![Rational::zero(); dim];
        c[i] = rat(1);
        ObjPoint(c)
    }

    pub fn to_f64(&self) -> Vec<f64> {
        self.0.iter().map(num::to_f64).collect()
    }

    /// Componentwise `self - other`.
    pub fn sub(&self, other: &ObjPoint) -> Vec<Rational> {
        self.0.iter().zip(&other.0).map(|(a, b)| a - b).collect()
    }

    /// Componentwise `self + other`.
    pub fn translate(&self, by: &[Rational]) -> ObjPoint {
        ObjPoint(self.0.iter().zip(by).map(|(a, b)| a + b).collect())
    }

    /// True if `self ≤ other` componentwise and they differ.
    pub fn dominates(&self, other: &ObjPoint) -> bool {
        self.0.iter().zip(&other.0).all(|(a, b)| a <= b) && self != other
    }
}

impl fmt::Display for ObjPoint {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "(")?;
        for (i, c) in self.0.iter().enumerate() {
            if i > 0 {
                write!(f, ", ")?;
            }
            write!(f, "{}", format_rational(c))?;
        }
        write!(f, ")")
    }
}

/// The halfspace `{y : wᵀy ≥ alpha}`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Halfspace {
    pub w: Vec<Rational>,
    pub alpha: Rational,
}

impl Halfspace {
    pub fn new(w: Vec<Rational>, alpha: Rational) -> Self {
        Halfspace { w, alpha }
    }

    pub fn from_ints(w: &[i64], alpha: i64) -> Self {
        Halfspace::new(w.iter().map(|&x| rat(x)).collect(), rat(alpha))
    }

    pub fn dim(&self) -> usize {
        self.w.len()
    }

    /// `wᵀy - alpha`.
    pub fn slack(&self, y: &ObjPoint) -> Rational {
        num::dot(&self.w, y.coords()) - &self.alpha
    }

    pub fn contains(&self, y: &ObjPoint) -> bool {
        !self.slack(y).is_negative()
    }

    /// `w ≥ 0` and `w ≠ 0`.
    pub fn has_valid_normal(&self) -> bool {
        self.w.iter().all(|x| !x.is_negative()) && self.w.iter().any(|x| !x.is_zero())
    }

    /// Positive rescaling to integer coefficients with gcd 1 over `(w, alpha)`.
    /// Two halfspaces describe the same set iff their canonical forms agree.
    pub fn canonical(&self) -> Halfspace {
        let mut all = self.w.clone();
        all.push(self.alpha.clone());
        let ints = num::primitive_integer_vector(&all);
        let mut coeffs: Vec<Rational> = ints.into_iter().map(Rational::from_integer).collect();
        let alpha = coeffs.pop().unwrap_or_else(Rational::zero);
        Halfspace { w: coeffs, alpha }
    }

    /// Rescaled so that `Σ w_i = 1`.
    pub fn sum_normalized(&self) -> Halfspace {
        let s: Rational = self.w.iter().fold(Rational::zero(), |a, b| a + b);
        if s.is_zero() {
            return self.clone();
        }
        Halfspace {
            w: self.w.iter().map(|x| x / &s).collect(),
            alpha: &self.alpha / &s,
        }
    }
}

impl fmt::Display for Halfspace {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (i, c) in self.w.iter().enumerate() {
            if i > 0 {
                write!(f, " ")?;
            }
            write!(f, "{}", format_rational(c))?;
        }
        write!(f, " >= {}", format_rational(&self.alpha))
    }
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum PolyhedronError {
    #[error("cut {0} has a negative or zero normal")]
    InvalidCut(String),
    #[error("cut dimension {got} does not match polyhedron dimension {expected}")]
    DimensionMismatch { expected: usize, got: usize },
    #[error("intersection is empty")]
    EmptyPolyhedron,
}

/// Double description of `conv(vertices) + R^p_≥`, together with an
/// irredundant list of halfspaces describing the same set. Halfspaces are
/// stored in canonical integer form.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct OuterApprox {
    dim: usize,
    vertices: Vec<ObjPoint>,
    halfspaces: Vec<Halfspace>,
}

impl OuterApprox {
    /// `ideal + R^p_≥`.
    pub fn init_from_ideal(ideal: &ObjPoint) -> Self {
        let dim = ideal.dim();
        let halfspaces = (0..dim)
            .map(|i| {
                let mut w = vec![Rational::zero(); dim];
                w[i] = rat(1);
                Halfspace::new(w, ideal.0[i].clone()).canonical()
            })
            .collect();
        OuterApprox {
            dim,
            vertices: vec![ideal.clone()],
            halfspaces,
        }
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    /// Vertices in lexicographic order.
    pub fn vertices(&self) -> &[ObjPoint] {
        &self.vertices
    }

    pub fn halfspaces(&self) -> &[Halfspace] {
        &self.halfspaces
    }

    /// The extreme rays `e_1, …, e_p` of the recession cone.
    pub fn rays(&self) -> Vec<ObjPoint> {
        (0..self.dim).map(|i| ObjPoint::unit(self.dim, i)).collect()
    }

    pub fn contains(&self, y: &ObjPoint) -> bool {
        self.halfspaces.iter().all(|h| h.contains(y))
    }

    /// Intersects with every cut and returns the new description. Cuts that
    /// are implied by the current polyhedron are discarded; halfspaces that
    /// stop being facets are removed.
    pub fn add_halfspaces(&self, cuts: &[Halfspace]) -> Result<OuterApprox, PolyhedronError> {
        for cut in cuts {
            if cut.dim() != self.dim {
                return Err(PolyhedronError::DimensionMismatch {
                    expected: self.dim,
                    got: cut.dim(),
                });
            }
            if !cut.has_valid_normal() {
                return Err(PolyhedronError::InvalidCut(cut.to_string()));
            }
        }

        let mut hs: Vec<Halfspace> = self.halfspaces.clone();
        let mut verts: Vec<ObjPoint> = self.vertices.clone();
        let mut incidence: Vec<Vec<usize>> = verts.iter().map(|v| tight_indices(&hs, v)).collect();
        let mut changed = false;

        for cut in cuts {
            let cut = cut.canonical();
            if hs.contains(&cut) {
                continue;
            }
            let slacks: Vec<Rational> = verts.iter().map(|v| cut.slack(v)).collect();
            if slacks.iter().all(|s| !s.is_negative()) {
                continue;
            }
            let cut_idx = hs.len();

            let mut next_verts = Vec::with_capacity(verts.len());
            let mut next_inc = Vec::with_capacity(verts.len());
            for (i, v) in verts.iter().enumerate() {
                if !slacks[i].is_negative() {
                    let mut inc = incidence[i].clone();
                    if slacks[i].is_zero() {
                        inc.push(cut_idx);
                    }
                    next_verts.push(v.clone());
                    next_inc.push(inc);
                }
            }

            for (b, vb) in verts.iter().enumerate() {
                let sb = &slacks[b];
                if !sb.is_negative() {
                    continue;
                }
                for (a, va) in verts.iter().enumerate() {
                    let sa = &slacks[a];
                    if !sa.is_positive() {
                        continue;
                    }
                    let common = intersect_sorted(&incidence[a], &incidence[b]);
                    if !spans_corank_one(&hs, &common, self.dim) {
                        continue;
                    }
                    let t = sa / (sa - sb);
                    let p = ObjPoint(
                        va.0.iter()
                            .zip(&vb.0)
                            .map(|(x, y)| x + &t * (y - x))
                            .collect(),
                    );
                    let mut inc = common;
                    inc.push(cut_idx);
                    next_verts.push(p);
                    next_inc.push(inc);
                }
                for i in 0..self.dim {
                    if !cut.w[i].is_positive() {
                        continue;
                    }
                    let along: Vec<usize> = incidence[b]
                        .iter()
                        .copied()
                        .filter(|&j| hs[j].w[i].is_zero())
                        .collect();
                    if !spans_corank_one(&hs, &along, self.dim) {
                        continue;
                    }
                    let mut p = vb.clone();
                    p.0[i] += -sb / &cut.w[i];
                    let mut inc = along;
                    inc.push(cut_idx);
                    next_verts.push(p);
                    next_inc.push(inc);
                }
            }

            if next_verts.is_empty() {
                return Err(PolyhedronError::EmptyPolyhedron);
            }
            hs.push(cut);
            let (v, inc) = dedup_vertices(next_verts, next_inc);
            verts = v;
            incidence = inc;
            changed = true;
        }

        if !changed {
            return Ok(self.clone());
        }

        let keep: Vec<bool> = (0..hs.len())
            .map(|j| is_facet(&hs[j], j, &verts, &incidence, self.dim))
            .collect();
        let halfspaces: Vec<Halfspace> = hs
            .into_iter()
            .zip(&keep)
            .filter_map(|(h, &k)| k.then_some(h))
            .collect();
        verts.sort();
        Ok(OuterApprox {
            dim: self.dim,
            vertices: verts,
            halfspaces,
        })
    }

    /// Checks the structural invariants: every vertex satisfies every
    /// halfspace and is tight on a spanning subset, normals are valid,
    /// vertices and halfspaces are distinct.
    pub fn check_invariants(&self) -> Result<(), String> {
        if self.vertices.is_empty() {
            return Err("no vertices".into());
        }
        let canon: BTreeSet<Halfspace> = self.halfspaces.iter().map(|h| h.canonical()).collect();
        if canon.len() != self.halfspaces.len() {
            return Err("duplicate halfspaces".into());
        }
        let uniq: BTreeSet<&ObjPoint> = self.vertices.iter().collect();
        if uniq.len() != self.vertices.len() {
            return Err("duplicate vertices".into());
        }
        for h in &self.halfspaces {
            if !h.has_valid_normal() {
                return Err(format!("invalid normal in {h}"));
            }
        }
        for v in &self.vertices {
            let tight: Vec<Vec<Rational>> = self
                .halfspaces
                .iter()
                .filter(|h| h.slack(v).is_zero())
                .map(|h| h.w.clone())
                .collect();
            if let Some(h) = self.halfspaces.iter().find(|h| !h.contains(v)) {
                return Err(format!("vertex {v} violates {h}"));
            }
            if num::rank(&tight) != self.dim {
                return Err(format!(
                    "vertex {v} is not tight on {} independent halfspaces",
                    self.dim
                ));
            }
        }
        Ok(())
    }
}

fn tight_indices(hs: &[Halfspace], v: &ObjPoint) -> Vec<usize> {
    hs.iter()
        .enumerate()
        .filter(|(_, h)| h.slack(v).is_zero())
        .map(|(j, _)| j)
        .collect()
}

fn intersect_sorted(a: &[usize], b: &[usize]) -> Vec<usize> {
    let (mut i, mut j) = (0, 0);
    let mut out = Vec::new();
    while i < a.len() && j < b.len() {
        match a[i].cmp(&b[j]) {
            std::cmp::Ordering::Less => i += 1,
            std::cmp::Ordering::Greater => j += 1,
            std::cmp::Ordering::Equal => {
                out.push(a[i]);
                i += 1;
                j += 1;
            }
        }
    }
    out
}

/// Whether the normals of `idx` have rank `dim - 1`, i.e. the face they
/// define together is an edge.
fn spans_corank_one(hs: &[Halfspace], idx: &[usize], dim: usize) -> bool {
    if idx.len() + 1 < dim {
        return false;
    }
    let rows: Vec<Vec<Rational>> = idx.iter().map(|&j| hs[j].w.clone()).collect();
    num::rank(&rows) == dim - 1
}

fn dedup_vertices(verts: Vec<ObjPoint>, inc: Vec<Vec<usize>>) -> (Vec<ObjPoint>, Vec<Vec<usize>>) {
    let mut seen = BTreeSet::new();
    let mut out_v = Vec::with_capacity(verts.len());
    let mut out_i = Vec::with_capacity(verts.len());
    for (v, i) in verts.into_iter().zip(inc) {
        if seen.insert(v.clone()) {
            out_v.push(v);
            out_i.push(i);
        }
    }
    (out_v, out_i)
}

// incidence lists are kept sorted: new halfspace indices are always appended

/// A halfspace is a facet iff its tight generators (vertices and rays)
/// span an affine set of dimension `dim - 1`.
fn is_facet(
    h: &Halfspace,
    j: usize,
    verts: &[ObjPoint],
    incidence: &[Vec<usize>],
    dim: usize,
) -> bool {
    let tight: Vec<&ObjPoint> = verts
        .iter()
        .zip(incidence)
        .filter(|(_, inc)| inc.binary_search(&j).is_ok())
        .map(|(v, _)| v)
        .collect();
    let Some(base) = tight.first() else {
        return false;
    };
    let mut rows: Vec<Vec<Rational>> = tight.iter().skip(1).map(|v| v.sub(base)).collect();
    for i in 0..dim {
        if h.w[i].is_zero() {
            rows.push(ObjPoint::unit(dim, i).0);
        }
    }
    num::rank(&rows) == dim - 1
}
