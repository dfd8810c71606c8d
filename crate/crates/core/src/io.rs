//! Instance and result files, and random instance generators.
//!
//! Instance files are whitespace-separated tokens. The first three are the
//! kind (`map`, `mkp` or `pts`), the number of objectives `p` and the size
//! `n`; the rest depends on the kind:
//!
//! ```text
//! map p n   p blocks of n×n integer cost matrices, row-major
//! mkp p n   capacity, then n item weights, then p rows of n profits
//! pts p n   n rows of p integer coordinates
//! ```
//!
//! Result files start with `key: value` header lines followed by
//! `point …` and `facet w_1 … w_p alpha` rows. Rationals are written as
//! `num/den` (plain integers without the denominator). Facets are stored as
//! coprime integers, and both points and facets are sorted.

use std::collections::BTreeMap;
use std::fmt::Write as _;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use thiserror::Error;

use crate::driver::{LowerBoundSet, RunResult};
use crate::num::{format_rational, parse_rational, Rational};
use crate::oracles::{AssignmentInstance, ExplicitSet, Instance, KnapsackInstance};
use crate::polyhedron::{Halfspace, ObjPoint};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum IoError {
    #[error("line {line}, column {column}: {message}")]
    Parse {
        line: usize,
        column: usize,
        message: String,
    },
    #[error("invalid instance: {0}")]
    Validation(String),
}

struct Token<'a> {
    text: &'a str,
    line: usize,
    column: usize,
}

fn tokenize(input: &str) -> Vec<Token<'_>> {
    let mut out = Vec::new();
    for (li, line) in input.lines().enumerate() {
        let mut col = 0;
        for piece in line.split_whitespace() {
            let offset = line[col..].find(piece).unwrap_or(0) + col;
            out.push(Token {
                text: piece,
                line: li + 1,
                column: offset + 1,
            });
            col = offset + piece.len();
        }
    }
    out
}

struct Cursor<'a> {
    tokens: Vec<Token<'a>>,
    pos: usize,
    last_line: usize,
}

impl<'a> Cursor<'a> {
    fn new(input: &'a str) -> Self {
        Cursor {
            tokens: tokenize(input),
            pos: 0,
            last_line: input.lines().count().max(1),
        }
    }

    fn err<T>(&self, tok: Option<&Token>, message: impl Into<String>) -> Result<T, IoError> {
        let (line, column) = tok.map_or((self.last_line, 1), |t| (t.line, t.column));
        Err(IoError::Parse {
            line,
            column,
            message: message.into(),
        })
    }

    fn word(&mut self, what: &str) -> Result<&'a str, IoError> {
        match self.tokens.get(self.pos) {
            Some(t) => {
                self.pos += 1;
                Ok(t.text)
            }
            None => self.err(None, format!("unexpected end of input, expected {what}")),
        }
    }

    fn int(&mut self, what: &str) -> Result<i64, IoError> {
        let idx = self.pos;
        let text = self.word(what)?;
        text.parse::<i64>().or_else(|_| {
            self.err(
                self.tokens.get(idx),
                format!("expected integer {what}, found `{text}`"),
            )
        })
    }

    fn size(&mut self, what: &str) -> Result<usize, IoError> {
        let idx = self.pos;
        let v = self.int(what)?;
        usize::try_from(v)
            .or_else(|_| self.err(self.tokens.get(idx), format!("{what} must be nonnegative")))
    }

    fn finish(&self) -> Result<(), IoError> {
        match self.tokens.get(self.pos) {
            Some(t) => self.err(Some(t), format!("unexpected trailing token `{}`", t.text)),
            None => Ok(()),
        }
    }
}

pub fn parse_instance(input: &str) -> Result<Instance, IoError> {
    let mut c = Cursor::new(input);
    let kind_idx = c.pos;
    let kind = c.word("instance kind")?;
    let p = c.size("p")?;
    let n = c.size("n")?;
    let inst = match kind {
        "map" => {
            let mut costs = Vec::with_capacity(p);
            for _ in 0..p {
                let mut m = Vec::with_capacity(n);
                for _ in 0..n {
                    m.push(
                        (0..n)
                            .map(|_| c.int("cost"))
                            .collect::<Result<Vec<_>, _>>()?,
                    );
                }
                costs.push(m);
            }
            Instance::Assignment(AssignmentInstance { costs })
        }
        "mkp" => {
            let capacity = c.int("capacity")?;
            let weights = (0..n)
                .map(|_| c.int("weight"))
                .collect::<Result<Vec<_>, _>>()?;
            let profits = (0..p)
                .map(|_| {
                    (0..n)
                        .map(|_| c.int("profit"))
                        .collect::<Result<Vec<_>, _>>()
                })
                .collect::<Result<Vec<_>, _>>()?;
            Instance::Knapsack(KnapsackInstance {
                profits,
                weights,
                capacity,
            })
        }
        "pts" => {
            let points = (0..n)
                .map(|_| {
                    (0..p)
                        .map(|_| c.int("coordinate"))
                        .collect::<Result<Vec<_>, _>>()
                })
                .collect::<Result<Vec<_>, _>>()?;
            Instance::Explicit(ExplicitSet { p, points })
        }
        other => {
            return c.err(
                c.tokens.get(kind_idx),
                format!("unknown instance kind `{other}` (expected map, mkp or pts)"),
            )
        }
    };
    c.finish()?;
    inst.validate()
        .map_err(|e| IoError::Validation(e.to_string()))?;
    Ok(inst)
}

fn join<T: ToString>(v: &[T]) -> String {
    v.iter()
        .map(|x| x.to_string())
        .collect::<Vec<_>>()
        .join(" ")
}

pub fn write_instance(inst: &Instance) -> String {
    let mut s = format!("{} {} {}\n", inst.kind_name(), inst.p(), inst.n());
    match inst {
        Instance::Assignment(a) => {
            for (k, m) in a.costs.iter().enumerate() {
                if k > 0 {
                    s.push('\n');
                }
                for row in m {
                    s.push_str(&join(row));
                    s.push('\n');
                }
            }
        }
        Instance::Knapsack(k) => {
            let _ = writeln!(s, "{}", k.capacity);
            let _ = writeln!(s, "{}", join(&k.weights));
            for row in &k.profits {
                let _ = writeln!(s, "{}", join(row));
            }
        }
        Instance::Explicit(e) => {
            for y in &e.points {
                let _ = writeln!(s, "{}", join(y));
            }
        }
    }
    s
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum GenKind {
    Map,
    Mkp,
}

impl std::str::FromStr for GenKind {
    type Err = String;
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "map" => Ok(GenKind::Map),
            "mkp" => Ok(GenKind::Mkp),
            _ => Err(format!(
                "unknown generator kind `{s}` (expected map or mkp)"
            )),
        }
    }
}

/// Random instance: assignment costs uniform in `[1, 20]`; knapsack
/// profits and weights uniform in `[1, 1000]` with capacity
/// `⌈Σ weights / 2⌉`. Deterministic in `seed`.
pub fn generate_instance(
    kind: GenKind,
    p: usize,
    n: usize,
    seed: u64,
) -> Result<Instance, IoError> {
    if p < 2 || n < 1 {
        return Err(IoError::Validation(format!(
            "generator needs p ≥ 2 and n ≥ 1, got p={p}, n={n}"
        )));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    Ok(match kind {
        GenKind::Map => Instance::Assignment(AssignmentInstance {
            costs: (0..p)
                .map(|_| {
                    (0..n)
                        .map(|_| (0..n).map(|_| rng.gen_range(1..=20)).collect())
                        .collect()
                })
                .collect(),
        }),
        GenKind::Mkp => {
            let profits: Vec<Vec<i64>> = (0..p)
                .map(|_| (0..n).map(|_| rng.gen_range(1..=1000)).collect())
                .collect();
            let weights: Vec<i64> = (0..n).map(|_| rng.gen_range(1..=1000)).collect();
            let total: i64 = weights.iter().sum();
            Instance::Knapsack(KnapsackInstance {
                profits,
                weights,
                capacity: (total + 1) / 2,
            })
        }
    })
}

fn point_row(tag: &str, y: &ObjPoint) -> String {
    let coords: Vec<String> = y.coords().iter().map(format_rational).collect();
    format!("{tag} {}", coords.join(" "))
}

fn facet_row(tag: &str, h: &Halfspace) -> String {
    let mut parts: Vec<String> = h.w.iter().map(format_rational).collect();
    parts.push(format_rational(&h.alpha));
    format!("{tag} {}", parts.join(" "))
}

fn sorted_facets(hs: &[Halfspace]) -> Vec<Halfspace> {
    let mut v: Vec<Halfspace> = hs.iter().map(Halfspace::canonical).collect();
    v.sort();
    v.dedup();
    v
}

fn sorted_points(ps: &[ObjPoint]) -> Vec<ObjPoint> {
    let mut v = ps.to_vec();
    v.sort();
    v.dedup();
    v
}

/// Canonical text form of a run result.
pub fn write_result(r: &RunResult) -> String {
    let points = sorted_points(&r.extreme_points);
    let facets = sorted_facets(&r.facets);
    let mut s = String::new();
    let _ = writeln!(s, "solved: {}", r.solved);
    let _ = writeln!(s, "oracle: {}", r.oracle.name());
    let _ = writeln!(s, "mode: {}", r.mode.name());
    let _ = writeln!(s, "dim: {}", r.dim);
    let _ = writeln!(s, "points: {}", points.len());
    let _ = writeln!(s, "facets: {}", facets.len());
    let _ = writeln!(s, "iterations: {}", r.iterations);
    let _ = writeln!(s, "sweeps: {}", r.stats.sweeps);
    let _ = writeln!(s, "oracle_calls: {}", r.stats.oracle_calls);
    let _ = writeln!(s, "ws_calls: {}", r.stats.ws_calls);
    let _ = writeln!(s, "lp_solves: {}", r.stats.lp_solves);
    let _ = writeln!(s, "lp_pivots: {}", r.stats.lp_pivots);
    let _ = writeln!(s, "cuts: {}", r.stats.cuts_added);
    let _ = writeln!(s, "numeric_skips: {}", r.stats.numeric_skips);
    let _ = writeln!(s, "seconds: {:.6}", r.stats.seconds);
    let _ = writeln!(s, "snapshots: {}", r.snapshots.len());
    for p in &points {
        let _ = writeln!(s, "{}", point_row("point", p));
    }
    for f in &facets {
        let _ = writeln!(s, "{}", facet_row("facet", f));
    }
    for snap in &r.snapshots {
        let vs = sorted_points(&snap.vertices);
        let hs = sorted_facets(&snap.halfspaces);
        let _ = writeln!(s, "snapshot {} {} {}", snap.iteration, vs.len(), hs.len());
        for v in &vs {
            let _ = writeln!(s, "{}", point_row("snapshot_vertex", v));
        }
        for h in &hs {
            let _ = writeln!(s, "{}", facet_row("snapshot_facet", h));
        }
    }
    s
}

/// A result file read back from text.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ResultFile {
    pub header: BTreeMap<String, String>,
    pub points: Vec<ObjPoint>,
    pub facets: Vec<Halfspace>,
    pub snapshots: Vec<LowerBoundSet>,
}

impl ResultFile {
    pub fn solved(&self) -> bool {
        self.header.get("solved").is_some_and(|v| v == "true")
    }
}

pub fn parse_result(input: &str) -> Result<ResultFile, IoError> {
    let mut header = BTreeMap::new();
    let mut points = Vec::new();
    let mut facets = Vec::new();
    let mut snapshots: Vec<LowerBoundSet> = Vec::new();
    for (li, line) in input.lines().enumerate() {
        let err = |column: usize, message: String| IoError::Parse {
            line: li + 1,
            column,
            message,
        };
        let line = line.trim_end();
        if line.is_empty() {
            continue;
        }
        if let Some((k, v)) = line.split_once(": ") {
            if !k.contains(' ') {
                header.insert(k.to_string(), v.to_string());
                continue;
            }
        }
        let mut words = line.split_whitespace();
        let tag = words.next().unwrap_or_default();
        let rest: Vec<&str> = words.collect();
        let nums = || -> Result<Vec<Rational>, IoError> {
            rest.iter()
                .map(|w| parse_rational(w).ok_or_else(|| err(1, format!("bad number `{w}`"))))
                .collect()
        };
        match tag {
            "point" => points.push(ObjPoint::new(nums()?)),
            "facet" | "snapshot_facet" => {
                let mut v = nums()?;
                let alpha = v.pop().ok_or_else(|| err(1, "empty facet row".into()))?;
                let h = Halfspace::new(v, alpha);
                if tag == "facet" {
                    facets.push(h);
                } else {
                    snapshots
                        .last_mut()
                        .ok_or_else(|| err(1, "snapshot row before snapshot header".into()))?
                        .halfspaces
                        .push(h);
                }
            }
            "snapshot_vertex" => snapshots
                .last_mut()
                .ok_or_else(|| err(1, "snapshot row before snapshot header".into()))?
                .vertices
                .push(ObjPoint::new(nums()?)),
            "snapshot" => {
                let it = rest
                    .first()
                    .and_then(|w| w.parse().ok())
                    .ok_or_else(|| err(10, "snapshot needs an iteration number".into()))?;
                snapshots.push(LowerBoundSet {
                    iteration: it,
                    vertices: Vec::new(),
                    halfspaces: Vec::new(),
                });
            }
            other => return Err(err(1, format!("unknown row `{other}`"))),
        }
    }
    Ok(ResultFile {
        header,
        points,
        facets,
        snapshots,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::oracles::ws_solve;
    use crate::oracles::Weight;

    #[test]
    fn parses_assignment() {
        let inst = parse_instance("map 2 2\n1 2\n2 1\n\n2 1\n1 2\n").unwrap();
        let Instance::Assignment(a) = &inst else {
            panic!()
        };
        assert_eq!(
            a.costs,
            vec![vec![vec![1, 2], vec![2, 1]], vec![vec![2, 1], vec![1, 2]]]
        );
        let r = ws_solve(&inst, &Weight::from_ints(&[1, 0]).unwrap()).unwrap();
        assert_eq!(r.point, ObjPoint::from_ints(&[2, 4]));
    }

    #[test]
    fn parses_knapsack_and_points() {
        let inst = parse_instance("mkp 2 2\n1\n1 1\n3 1\n1 3\n").unwrap();
        assert_eq!(
            inst,
            Instance::Knapsack(KnapsackInstance {
                profits: vec![vec![3, 1], vec![1, 3]],
                weights: vec![1, 1],
                capacity: 1
            })
        );
        let inst = parse_instance("pts 2 4\n2 9\n3 7\n5 4\n7 2\n").unwrap();
        assert_eq!(inst.n(), 4);
        assert_eq!(write_instance(&inst), "pts 2 4\n2 9\n3 7\n5 4\n7 2\n");
    }

    #[test]
    fn parse_errors_carry_positions() {
        match parse_instance("pts 2 2\n1 2\n3 x\n") {
            Err(IoError::Parse { line, column, .. }) => assert_eq!((line, column), (3, 3)),
            other => panic!("{other:?}"),
        }
        match parse_instance("foo 2 2") {
            Err(IoError::Parse { line, column, .. }) => assert_eq!((line, column), (1, 1)),
            other => panic!("{other:?}"),
        }
        assert!(matches!(
            parse_instance("pts 2 2\n1 2\n"),
            Err(IoError::Parse { .. })
        ));
        assert!(matches!(
            parse_instance("pts 2 1\n1 2\n3"),
            Err(IoError::Parse { .. })
        ));
        assert!(matches!(
            parse_instance("mkp 1 2\n3\n1 0\n4 4\n"),
            Err(IoError::Validation(_))
        ));
    }

    #[test]
    fn generators_follow_distributions() {
        let a = generate_instance(GenKind::Map, 3, 5, 11).unwrap();
        let Instance::Assignment(m) = &a else {
            panic!()
        };
        assert_eq!(m.costs.len(), 3);
        assert!(m
            .costs
            .iter()
            .flatten()
            .flatten()
            .all(|&c| (1..=20).contains(&c)));
        assert_eq!(a, generate_instance(GenKind::Map, 3, 5, 11).unwrap());
        assert_ne!(a, generate_instance(GenKind::Map, 3, 5, 12).unwrap());

        let k = generate_instance(GenKind::Mkp, 3, 10, 4).unwrap();
        let Instance::Knapsack(k) = &k else { panic!() };
        let total: i64 = k.weights.iter().sum();
        assert_eq!(k.capacity, (total + 1) / 2);
        assert!(k
            .weights
            .iter()
            .chain(k.profits.iter().flatten())
            .all(|&x| (1..=1000).contains(&x)));
        assert!(generate_instance(GenKind::Mkp, 1, 10, 4).is_err());
    }
}
