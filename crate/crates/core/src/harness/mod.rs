//! Command-line front end, benchmark tables and the brute-force reference.

pub mod bench;
pub mod brute;
pub mod cli;

use std::collections::BTreeSet;

use crate::polyhedron::{Halfspace, ObjPoint};
pub use brute::{brute_force_hull, brute_force_q, BruteError, BruteHull};

/// Differences between a solver result and a reference hull.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct Comparison {
    pub missing_points: Vec<ObjPoint>,
    pub extra_points: Vec<ObjPoint>,
    pub missing_facets: Vec<Halfspace>,
    pub extra_facets: Vec<Halfspace>,
}

impl Comparison {
    pub fn is_match(&self) -> bool {
        self.missing_points.is_empty()
            && self.extra_points.is_empty()
            && self.missing_facets.is_empty()
            && self.extra_facets.is_empty()
    }
}

/// Exact set comparison; facets are compared in integer coprime form.
pub fn compare(points: &[ObjPoint], facets: &[Halfspace], reference: &BruteHull) -> Comparison {
    let ours: BTreeSet<ObjPoint> = points.iter().cloned().collect();
    let theirs: BTreeSet<ObjPoint> = reference.extreme_points.iter().cloned().collect();
    let our_f: BTreeSet<Halfspace> = facets.iter().map(Halfspace::canonical).collect();
    let their_f: BTreeSet<Halfspace> = reference.facets.iter().map(Halfspace::canonical).collect();
    Comparison {
        missing_points: theirs.difference(&ours).cloned().collect(),
        extra_points: ours.difference(&theirs).cloned().collect(),
        missing_facets: their_f.difference(&our_f).cloned().collect(),
        extra_facets: our_f.difference(&their_f).cloned().collect(),
    }
}
