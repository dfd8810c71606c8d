//! `oa` command line: `solve`, `gen`, `verify` and `bench`.

use std::io::Write;
use std::path::{Path, PathBuf};
use std::time::Duration;

use clap::{Parser, Subcommand, ValueEnum};

use super::bench::{format_tables, run_bench, BenchConfig};
use super::{brute_force_hull, brute_force_q, compare};
use crate::driver::{run, run_with_oracle, RunConfig};
use crate::io::{generate_instance, parse_instance, write_instance, write_result, GenKind};
use crate::oracles::{Instance, KnapsackRelaxation};
use crate::separation::{Mode, OracleKind};

#[derive(Parser, Debug)]
#[command(
    name = "oa",
    version,
    about = "Outer approximation of multiobjective frontiers"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum OracleArg {
    Sep,
    Tsep,
}

impl From<OracleArg> for OracleKind {
    fn from(o: OracleArg) -> Self {
        match o {
            OracleArg::Sep => OracleKind::Sep,
            OracleArg::Tsep => OracleKind::TSep,
        }
    }
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum OracleChoice {
    Sep,
    Tsep,
    Both,
}

impl OracleChoice {
    fn kinds(self) -> Vec<OracleKind> {
        match self {
            OracleChoice::Sep => vec![OracleKind::Sep],
            OracleChoice::Tsep => vec![OracleKind::TSep],
            OracleChoice::Both => vec![OracleKind::Sep, OracleKind::TSep],
        }
    }
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum ModeArg {
    Exact,
    Float,
}

impl From<ModeArg> for Mode {
    fn from(m: ModeArg) -> Self {
        match m {
            ModeArg::Exact => Mode::Exact,
            ModeArg::Float => Mode::Float,
        }
    }
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum KindArg {
    Map,
    Mkp,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Compute extreme points and facets of an instance.
    Solve {
        instance: PathBuf,
        #[arg(long, value_enum, default_value = "sep")]
        oracle: OracleArg,
        #[arg(long, value_enum, default_value = "exact")]
        mode: ModeArg,
        /// Seconds; the current bound set is returned when it runs out.
        #[arg(long)]
        time_limit: Option<f64>,
        /// Include the approximation after every sweep.
        #[arg(long)]
        snapshots: bool,
        /// Use the fractional relaxation instead of the exact knapsack oracle.
        #[arg(long)]
        relax: bool,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Write a random instance.
    Gen {
        #[arg(value_enum)]
        kind: KindArg,
        p: usize,
        n: usize,
        seed: u64,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Solve a small instance and compare with brute-force enumeration.
    Verify {
        instance: PathBuf,
        #[arg(long, value_enum, default_value = "both")]
        oracle: OracleChoice,
    },
    /// Solve every instance in a directory and print `#fac`/`#sol` tables.
    Bench {
        dir: PathBuf,
        /// Comma-separated seconds.
        #[arg(long, value_delimiter = ',', default_values_t = [10.0, 100.0, 600.0])]
        time_limits: Vec<f64>,
        #[arg(long, value_enum, default_value = "both")]
        oracle: OracleChoice,
        #[arg(long, value_enum, default_value = "exact")]
        mode: ModeArg,
        #[arg(long, default_value_t = 1)]
        jobs: usize,
        /// Also write the individual runs as JSON.
        #[arg(long)]
        json: Option<PathBuf>,
    },
}

/// Runs the command line and returns the process exit code.
pub fn run_cli<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { 2 } else { 0 };
            let text = e.render().to_string();
            let _ = if code == 0 {
                out.write_all(text.as_bytes())
            } else {
                err.write_all(text.as_bytes())
            };
            return code;
        }
    };
    match dispatch(cli.command, out, err) {
        Ok(code) => code,
        Err(msg) => {
            let _ = writeln!(err, "error: {msg}");
            1
        }
    }
}

fn read_instance(path: &Path) -> Result<Instance, String> {
    let text = std::fs::read_to_string(path).map_err(|e| format!("{}: {e}", path.display()))?;
    parse_instance(&text).map_err(|e| format!("{}: {e}", path.display()))
}

fn emit(text: &str, dest: Option<&Path>, out: &mut dyn Write) -> Result<(), String> {
    match dest {
        Some(p) => std::fs::write(p, text).map_err(|e| format!("{}: {e}", p.display())),
        None => out.write_all(text.as_bytes()).map_err(|e| e.to_string()),
    }
}

fn dispatch(cmd: Command, out: &mut dyn Write, err: &mut dyn Write) -> Result<i32, String> {
    match cmd {
        Command::Solve {
            instance,
            oracle,
            mode,
            time_limit,
            snapshots,
            relax,
            out: dest,
        } => {
            let inst = read_instance(&instance)?;
            let time_limit = time_limit
                .map(|t| Duration::try_from_secs_f64(t).map_err(|e| format!("--time-limit: {e}")))
                .transpose()?;
            let cfg = RunConfig {
                time_limit,
                snapshot_every: snapshots.then_some(1),
                ..RunConfig::new(oracle.into(), mode.into())
            };
            let res = if relax {
                let relaxed = KnapsackRelaxation::new(&inst).map_err(|e| e.to_string())?;
                inst.validate().map_err(|e| e.to_string())?;
                run_with_oracle(&relaxed, &cfg)
            } else {
                run(&inst, &cfg)
            }
            .map_err(|e| e.to_string())?;
            emit(&write_result(&res), dest.as_deref(), out)?;
            if dest.is_some() {
                let _ = writeln!(
                    err,
                    "solved={} points={} facets={} seconds={:.3}",
                    res.solved,
                    res.extreme_points.len(),
                    res.facets.len(),
                    res.stats.seconds
                );
            }
            Ok(0)
        }
        Command::Gen {
            kind,
            p,
            n,
            seed,
            out: dest,
        } => {
            let kind = match kind {
                KindArg::Map => GenKind::Map,
                KindArg::Mkp => GenKind::Mkp,
            };
            let inst = generate_instance(kind, p, n, seed).map_err(|e| e.to_string())?;
            emit(&write_instance(&inst), dest.as_deref(), out)?;
            Ok(0)
        }
        Command::Verify { instance, oracle } => {
            let inst = read_instance(&instance)?;
            let q = brute_force_q(&inst).map_err(|e| e.to_string())?;
            let hull = brute_force_hull(&q).map_err(|e| e.to_string())?;
            let mut all_match = true;
            for kind in oracle.kinds() {
                let cfg = RunConfig {
                    snapshot_every: None,
                    ..RunConfig::new(kind, Mode::Exact)
                };
                let res = run(&inst, &cfg).map_err(|e| e.to_string())?;
                let cmp = compare(&res.extreme_points, &res.facets, &hull);
                let ok = res.solved && cmp.is_match();
                all_match &= ok;
                let _ = writeln!(
                    out,
                    "{}: {} ({} points, {} facets)",
                    kind.name(),
                    if ok { "match" } else { "mismatch" },
                    res.extreme_points.len(),
                    res.facets.len()
                );
                if !res.solved {
                    let _ = writeln!(out, "  run did not finish");
                }
                for y in &cmp.missing_points {
                    let _ = writeln!(out, "  missing point {y}");
                }
                for y in &cmp.extra_points {
                    let _ = writeln!(out, "  extra point {y}");
                }
                for h in &cmp.missing_facets {
                    let _ = writeln!(out, "  missing facet {h}");
                }
                for h in &cmp.extra_facets {
                    let _ = writeln!(out, "  extra facet {h}");
                }
            }
            let _ = writeln!(out, "{}", if all_match { "MATCH" } else { "MISMATCH" });
            Ok(if all_match { 0 } else { 1 })
        }
        Command::Bench {
            dir,
            time_limits,
            oracle,
            mode,
            jobs,
            json,
        } => {
            if time_limits.iter().any(|t| !t.is_finite() || *t < 0.0) {
                return Err("time limits must be nonnegative seconds".into());
            }
            let mut files: Vec<PathBuf> = std::fs::read_dir(&dir)
                .map_err(|e| format!("{}: {e}", dir.display()))?
                .filter_map(|e| e.ok().map(|e| e.path()))
                .filter(|p| p.is_file() && p.extension().is_none_or(|x| x != "json"))
                .collect();
            files.sort();
            let instances = files
                .iter()
                .map(|p| {
                    let name = p
                        .file_name()
                        .map_or_else(String::new, |s| s.to_string_lossy().into_owned());
                    read_instance(p).map(|i| (name, i))
                })
                .collect::<Result<Vec<_>, _>>()?;
            if instances.is_empty() {
                return Err(format!("no instances in {}", dir.display()));
            }
            let cfg = BenchConfig {
                time_limits,
                oracles: oracle.kinds(),
                mode: mode.into(),
                jobs,
            };
            let records = run_bench(&instances, &cfg).map_err(|e| e.to_string())?;
            emit(&format_tables(&records), None, out)?;
            if let Some(path) = json {
                let text = serde_json::to_string_pretty(&records).map_err(|e| e.to_string())?;
                emit(&text, Some(&path), out)?;
            }
            Ok(0)
        }
    }
}
