//! Benchmark runs aggregated into `#fac` / `#sol` tables.
//!
//! Each instance is solved once per oracle and time limit. A run that
//! finishes within a limit is reused for all larger limits, since the
//! solver is deterministic.

use std::collections::BTreeMap;
use std::fmt::Write as _;
use std::sync::atomic::{AtomicUsize, Ordering};
use std::sync::Mutex;
use std::time::Duration;

use serde::Serialize;

use crate::driver::{run, DriverError, RunConfig};
use crate::oracles::Instance;
use crate::separation::{Mode, OracleKind};

#[derive(Clone, Debug)]
pub struct BenchConfig {
    /// Seconds, ascending.
    pub time_limits: Vec<f64>,
    pub oracles: Vec<OracleKind>,
    pub mode: Mode,
    pub jobs: usize,
}

impl Default for BenchConfig {
    fn default() -> Self {
        BenchConfig {
            time_limits: vec![10.0, 100.0, 600.0],
            oracles: vec![OracleKind::Sep, OracleKind::TSep],
            mode: Mode::Exact,
            jobs: 1,
        }
    }
}

#[derive(Clone, Debug, Serialize, PartialEq)]
pub struct BenchRecord {
    pub name: String,
    pub kind: String,
    pub p: usize,
    pub n: usize,
    pub oracle: String,
    pub mode: String,
    pub time_limit: f64,
    pub solved: bool,
    pub facets: usize,
    pub points: usize,
    pub seconds: f64,
    pub ws_calls: usize,
}

/// Runs every named instance under every oracle and limit. Records come
/// back in input order, then oracle, then limit.
pub fn run_bench(
    instances: &[(String, Instance)],
    cfg: &BenchConfig,
) -> Result<Vec<BenchRecord>, DriverError> {
    let mut limits = cfg.time_limits.clone();
    limits.sort_by(f64::total_cmp);
    let next = AtomicUsize::new(0);
    type Slot = Option<Result<Vec<BenchRecord>, DriverError>>;
    let results: Mutex<Vec<Slot>> = Mutex::new(vec![None; instances.len()]);

    let worker = || loop {
        let i = next.fetch_add(1, Ordering::Relaxed);
        let Some((name, inst)) = instances.get(i) else {
            break;
        };
        let out = bench_one(name, inst, cfg, &limits);
        results.lock().expect("bench worker panicked")[i] = Some(out);
    };
    std::thread::scope(|s| {
        for _ in 0..cfg.jobs.max(1) {
            s.spawn(worker);
        }
    });

    let mut out = Vec::new();
    for r in results.into_inner().expect("bench worker panicked") {
        out.extend(r.expect("every instance is processed")?);
    }
    Ok(out)
}

fn bench_one(
    name: &str,
    inst: &Instance,
    cfg: &BenchConfig,
    limits: &[f64],
) -> Result<Vec<BenchRecord>, DriverError> {
    let mut out = Vec::new();
    for &oracle in &cfg.oracles {
        let mut finished: Option<BenchRecord> = None;
        for &limit in limits {
            if let Some(done) = &finished {
                out.push(BenchRecord {
                    time_limit: limit,
                    ..done.clone()
                });
                continue;
            }
            let rc = RunConfig {
                time_limit: Some(Duration::from_secs_f64(limit)),
                snapshot_every: None,
                ..RunConfig::new(oracle, cfg.mode)
            };
            let r = run(inst, &rc)?;
            let rec = BenchRecord {
                name: name.to_string(),
                kind: inst.kind_name().to_string(),
                p: inst.p(),
                n: inst.n(),
                oracle: oracle.name().to_string(),
                mode: cfg.mode.name().to_string(),
                time_limit: limit,
                solved: r.solved,
                facets: r.facets.len(),
                points: r.extreme_points.len(),
                seconds: r.stats.seconds,
                ws_calls: r.stats.ws_calls,
            };
            if r.solved {
                finished = Some(rec.clone());
            }
            out.push(rec);
        }
    }
    Ok(out)
}

fn limit_label(t: f64) -> String {
    if t.fract() == 0.0 {
        format!("{}s", t as u64)
    } else {
        format!("{t}s")
    }
}

/// Plain-text tables, one per instance kind: a row per `(p, n)` group with
/// the average facet count and the number of solved instances for every
/// oracle and time limit. Groups with a different `p` are separated by a
/// rule.
pub fn format_tables(records: &[BenchRecord]) -> String {
    let mut oracles: Vec<String> = Vec::new();
    let mut limits: Vec<f64> = Vec::new();
    for r in records {
        if !oracles.contains(&r.oracle) {
            oracles.push(r.oracle.clone());
        }
        if !limits.contains(&r.time_limit) {
            limits.push(r.time_limit);
        }
    }
    limits.sort_by(f64::total_cmp);

    // kind -> (p, n) -> (oracle, limit index) -> (facet sum, solved, count)
    type Cells = BTreeMap<(usize, usize), (usize, usize, usize)>;
    let mut groups: BTreeMap<&str, BTreeMap<(usize, usize), Cells>> = BTreeMap::new();
    for r in records {
        let o = oracles.iter().position(|x| *x == r.oracle).unwrap_or(0);
        let l = limits.iter().position(|x| *x == r.time_limit).unwrap_or(0);
        let cell = groups
            .entry(&r.kind)
            .or_default()
            .entry((r.p, r.n))
            .or_default()
            .entry((o, l))
            .or_default();
        cell.0 += r.facets;
        cell.1 += usize::from(r.solved);
        cell.2 += 1;
    }

    let cell_w = 7;
    let block_w = 2 * cell_w * limits.len();
    let mut s = String::new();
    for (kind, rows) in &groups {
        let label = match *kind {
            "map" => "size",
            "mkp" => "items",
            _ => "n",
        };
        let _ = writeln!(s, "{}", kind.to_uppercase());
        let mut line = format!("{label:<8}");
        for o in &oracles {
            let name = match o.as_str() {
                "sep" => "Sep",
                "tsep" => "TSep",
                other => other,
            };
            let _ = write!(line, "| {name:<w$}", w = block_w - 1);
        }
        let _ = writeln!(s, "{}", line.trim_end());
        let mut line = format!("{:<8}", "");
        for _ in &oracles {
            line.push('|');
            for (i, &t) in limits.iter().enumerate() {
                let w = if i == 0 { 2 * cell_w - 1 } else { 2 * cell_w };
                let _ = write!(line, "{:>w$}", limit_label(t));
            }
        }
        let _ = writeln!(s, "{line}");
        let mut line = format!("{:<8}", "");
        for _ in &oracles {
            line.push('|');
            for i in 0..limits.len() {
                let w = if i == 0 { cell_w - 1 } else { cell_w };
                let _ = write!(line, "{:>w$}{:>cell_w$}", "#fac", "#sol");
            }
        }
        let _ = writeln!(s, "{line}");
        let rule = "-".repeat(8 + oracles.len() * (block_w));
        let _ = writeln!(s, "{rule}");

        let mut last_p = None;
        for (&(p, n), cells) in rows {
            if last_p.is_some_and(|q| q != p) {
                let _ = writeln!(s, "{rule}");
            }
            if last_p != Some(p) {
                let _ = writeln!(s, "p = {p}");
            }
            last_p = Some(p);
            let mut line = format!("{n:<8}");
            for o in 0..oracles.len() {
                line.push('|');
                for l in 0..limits.len() {
                    let (fac, sol, count) = cells.get(&(o, l)).copied().unwrap_or_default();
                    let avg = if count == 0 {
                        0.0
                    } else {
                        fac as f64 / count as f64
                    };
                    let w = if l == 0 { cell_w - 1 } else { cell_w };
                    let _ = write!(line, "{avg:>w$.1}{sol:>cell_w$}");
                }
            }
            let _ = writeln!(s, "{line}");
        }
        s.push('\n');
    }
    s
}
