//! The `gridwalk` command line.
//!
//! Exit codes: 0 success, 2 usage or input error, 3 a construction missed
//! its target, 4 the solver refused an instance as too large.

use std::fmt::Write as _;
use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};
use std::time::{SystemTime, UNIX_EPOCH};

use clap::{Parser, Subcommand, ValueEnum};
use rayon::prelude::*;

use crate::bounds::{lower_target, mcneil, theorem_status, Exactness};
use crate::constructions::construct_optimal;
use crate::grid::{GridDims, Labeling};
use crate::reference::{
    compare_with_conjecture, load_cache, parse_bfile, save_cache, ResultsCache,
};
use crate::solver::{resolve_interval, solve_exact, SolverError, DEFAULT_CELL_CAP};

pub const EXIT_OK: u8 = 0;
pub const EXIT_USAGE: u8 = 2;
pub const EXIT_IDENTITY: u8 = 3;
pub const EXIT_RESOURCE: u8 = 4;

pub const CSV_HEADER: &str = "m,n,lower,upper,exact,solved,construct_len,conjecture";

#[derive(Debug, Parser)]
#[command(
    name = "gridwalk",
    version,
    about = "Longest labeling walks on grid graphs"
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Closed-form lower target and upper bound.
    Bounds { m: usize, n: usize },
    /// Emit a labeling reaching the lower target.
    Construct {
        m: usize,
        n: usize,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Walk length of a labeling file.
    Eval { input: PathBuf },
    /// Solve a grid exactly and report where it sits in the bound interval.
    Solve {
        m: usize,
        n: usize,
        #[arg(long, default_value_t = DEFAULT_CELL_CAP)]
        cap: usize,
        #[arg(long)]
        cache: Option<PathBuf>,
    },
    /// Tabulate bounds and constructions over a range of shapes.
    Sweep {
        /// Row range, `a..b` (inclusive) or a single value.
        m_range: String,
        /// Column range, `a..b` (inclusive) or a single value.
        n_range: String,
        #[arg(long, value_enum, default_value_t = Format::Table)]
        format: Format,
        /// Also solve every shape with at most this many cells.
        #[arg(long)]
        cap: Option<usize>,
        #[arg(long)]
        cache: Option<PathBuf>,
    },
    /// Compare an OEIS b-file against the conjectured square values.
    CompareOeis {
        bfile: PathBuf,
        #[arg(long)]
        cache: Option<PathBuf>,
    },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Table,
    Csv,
}

struct Failure {
    code: u8,
    message: String,
}

impl Failure {
    fn usage(message: impl Into<String>) -> Self {
        Self {
            code: EXIT_USAGE,
            message: message.into(),
        }
    }
}

type CmdResult = Result<(), Failure>;

/// Parses `args` (including the program name) and runs the command.
pub fn run<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> u8
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let rendered = e.render().to_string();
            if e.use_stderr() {
                let _ = write!(err, "{rendered}");
                return EXIT_USAGE;
            }
            let _ = write!(out, "{rendered}");
            return EXIT_OK;
        }
    };
    match execute(cli.command, out, err) {
        Ok(()) => EXIT_OK,
        Err(f) => {
            let _ = writeln!(err, "error: {}", f.message);
            f.code
        }
    }
}

fn execute(cmd: Command, out: &mut dyn Write, err: &mut dyn Write) -> CmdResult {
    match cmd {
        Command::Bounds { m, n } => cmd_bounds(dims(m, n)?, out),
        Command::Construct { m, n, out: path } => {
            cmd_construct(dims(m, n)?, path.as_deref(), out, err)
        }
        Command::Eval { input } => cmd_eval(&input, out),
        Command::Solve { m, n, cap, cache } => {
            cmd_solve(dims(m, n)?, cap, cache.as_deref(), out, err)
        }
        Command::Sweep {
            m_range,
            n_range,
            format,
            cap,
            cache,
        } => {
            let ms = parse_range(&m_range)?;
            let ns = parse_range(&n_range)?;
            cmd_sweep(ms, ns, format, cap, cache.as_deref(), out)
        }
        Command::CompareOeis { bfile, cache } => {
            cmd_compare_oeis(&bfile, cache.as_deref(), out, err)
        }
    }
}

fn dims(m: usize, n: usize) -> Result<GridDims, Failure> {
    GridDims::new(m, n).map_err(|e| Failure::usage(e.to_string()))
}

fn emit(out: &mut dyn Write, text: &str) -> CmdResult {
    out.write_all(text.as_bytes())
        .map_err(|e| Failure::usage(format!("write failed: {e}")))
}

fn cmd_bounds(dims: GridDims, out: &mut dyn Write) -> CmdResult {
    emit(out, &format!("{}\n", theorem_status(dims)))
}

fn cmd_construct(
    dims: GridDims,
    path: Option<&Path>,
    out: &mut dyn Write,
    err: &mut dyn Write,
) -> CmdResult {
    let labeling = construct_optimal(dims);
    let length = labeling.walk_length();
    let target = lower_target(dims);
    let summary = format!("length={length} target={target}\n");
    match path {
        Some(p) => {
            fs::write(p, labeling.to_text())
                .map_err(|e| Failure::usage(format!("cannot write {}: {e}", p.display())))?;
            emit(out, &summary)?;
        }
        None => {
            emit(out, &labeling.to_text())?;
            let _ = err.write_all(summary.as_bytes());
        }
    }
    if length != target {
        return Err(Failure {
            code: EXIT_IDENTITY,
            message: format!("construction for {dims} reached {length}, target {target}"),
        });
    }
    Ok(())
}

fn read_file(path: &Path) -> Result<String, Failure> {
    fs::read_to_string(path)
        .map_err(|e| Failure::usage(format!("cannot read {}: {e}", path.display())))
}

fn cmd_eval(path: &Path, out: &mut dyn Write) -> CmdResult {
    let text = read_file(path)?;
    let labeling =
        Labeling::parse(&text).map_err(|e| Failure::usage(format!("{}: {e}", path.display())))?;
    emit(out, &format!("{}\n", labeling.walk_length()))
}

fn solver_failure(e: SolverError) -> Failure {
    let code = match e {
        SolverError::OverCap { .. } | SolverError::CapTooHigh { .. } => EXIT_RESOURCE,
        SolverError::BruteForceTooLarge { .. } => EXIT_USAGE,
    };
    Failure {
        code,
        message: e.to_string(),
    }
}

fn open_cache(path: Option<&Path>) -> Result<ResultsCache, Failure> {
    match path {
        None => Ok(ResultsCache::new()),
        Some(p) => load_cache(p)
            .map(|(cache, _)| cache)
            .map_err(|e| Failure::usage(format!("{}: {e}", p.display()))),
    }
}

fn now_secs() -> u64 {
    SystemTime::now()
        .duration_since(UNIX_EPOCH)
        .map(|d| d.as_secs())
        .unwrap_or(0)
}

fn cmd_solve(
    dims: GridDims,
    cap: usize,
    cache_path: Option<&Path>,
    out: &mut dyn Write,
    err: &mut dyn Write,
) -> CmdResult {
    let mut cache = open_cache(cache_path)?;
    let res = resolve_interval(dims, cap).map_err(solver_failure)?;
    let _ = writeln!(err, "solved {dims} in {:.3?}", res.result.elapsed);
    emit(out, &format!("{res}\n"))?;
    emit(out, &res.result.witness.to_text())?;
    if let Some(p) = cache_path {
        cache
            .insert(dims, res.optimum(), res.result.method, now_secs())
            .and_then(|()| save_cache(p, &cache))
            .map_err(|e| Failure::usage(format!("{}: {e}", p.display())))?;
    }
    Ok(())
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SweepRow {
    pub m: usize,
    pub n: usize,
    pub lower: u64,
    pub upper: u64,
    pub exact: bool,
    pub solved: Option<u64>,
    pub construct_len: u64,
    pub conjecture: Option<u64>,
}

fn parse_range(s: &str) -> Result<std::ops::RangeInclusive<usize>, Failure> {
    let bad = || Failure::usage(format!("invalid range {s:?}, expected a..b"));
    let (a, b) = match s.split_once("..") {
        Some((a, b)) => (a, b.strip_prefix('=').unwrap_or(b)),
        None => (s, s),
    };
    let a: usize = a.trim().parse().map_err(|_| bad())?;
    let b: usize = b.trim().parse().map_err(|_| bad())?;
    if a == 0 || a > b {
        return Err(Failure::usage(format!("empty or invalid range {s:?}")));
    }
    Ok(a..=b)
}

fn sweep_rows(
    ms: std::ops::RangeInclusive<usize>,
    ns: std::ops::RangeInclusive<usize>,
    cap: Option<usize>,
    cache: &ResultsCache,
) -> Result<Vec<SweepRow>, Failure> {
    let shapes: Vec<(usize, usize)> = ms.flat_map(|m| ns.clone().map(move |n| (m, n))).collect();
    let mut rows = shapes
        .par_iter()
        .map(|&(m, n)| {
            let d = dims(m, n)?;
            let status = theorem_status(d);
            let solved = match cap {
                Some(c) if d.cell_count() <= c => {
                    Some(solve_exact(d, c).map_err(solver_failure)?.optimum)
                }
                _ => cache.get(d).map(|r| r.optimum),
            };
            Ok(SweepRow {
                m,
                n,
                lower: status.lower_target,
                upper: status.upper,
                exact: status.exactness == Exactness::Exact,
                solved,
                construct_len: construct_optimal(d).walk_length(),
                conjecture: if m == n { mcneil(m as u64) } else { None },
            })
        })
        .collect::<Result<Vec<_>, Failure>>()?;
    rows.sort_by_key(|r| (r.m, r.n));
    Ok(rows)
}

fn opt(v: Option<u64>) -> String {
    v.map(|x| x.to_string()).unwrap_or_default()
}

pub fn render_csv(rows: &[SweepRow]) -> String {
    let mut s = String::from(CSV_HEADER);
    s.push('\n');
    for r in rows {
        let _ = writeln!(
            s,
            "{},{},{},{},{},{},{},{}",
            r.m,
            r.n,
            r.lower,
            r.upper,
            r.exact,
            opt(r.solved),
            r.construct_len,
            opt(r.conjecture)
        );
    }
    s
}

pub fn render_table(rows: &[SweepRow]) -> String {
    let mut s = format!(
        "{:>4} {:>4} {:>10} {:>10} {:>9} {:>10} {:>10} {:>10}\n",
        "m", "n", "lower", "upper", "status", "solved", "construct", "conjecture"
    );
    for r in rows {
        let _ = writeln!(
            s,
            "{:>4} {:>4} {:>10} {:>10} {:>9} {:>10} {:>10} {:>10}",
            r.m,
            r.n,
            r.lower,
            r.upper,
            if r.exact { "exact" } else { "interval" },
            opt(r.solved),
            r.construct_len,
            opt(r.conjecture)
        );
    }
    s
}

fn cmd_sweep(
    ms: std::ops::RangeInclusive<usize>,
    ns: std::ops::RangeInclusive<usize>,
    format: Format,
    cap: Option<usize>,
    cache_path: Option<&Path>,
    out: &mut dyn Write,
) -> CmdResult {
    let cache = open_cache(cache_path)?;
    let rows = sweep_rows(ms, ns, cap, &cache)?;
    let text = match format {
        Format::Csv => render_csv(&rows),
        Format::Table => render_table(&rows),
    };
    emit(out, &text)?;
    if let Some(bad) = rows.iter().find(|r| r.construct_len != r.lower) {
        return Err(Failure {
            code: EXIT_IDENTITY,
            message: format!(
                "construction for {}x{} reached {}, target {}",
                bad.m, bad.n, bad.construct_len, bad.lower
            ),
        });
    }
    Ok(())
}

fn cmd_compare_oeis(
    path: &Path,
    cache_path: Option<&Path>,
    out: &mut dyn Write,
    err: &mut dyn Write,
) -> CmdResult {
    let text = read_file(path)?;
    let table =
        parse_bfile(&text).map_err(|e| Failure::usage(format!("{}: {e}", path.display())))?;
    let cache = open_cache(cache_path)?;
    let report = compare_with_conjecture(&table);
    emit(out, &report.to_string())?;
    for (&n, &value) in &table.entries {
        let Ok(d) = GridDims::new(n as usize, n as usize) else {
            continue;
        };
        if let Some(rec) = cache.get(d) {
            let verdict = if rec.optimum == value {
                "match"
            } else {
                "MISMATCH"
            };
            emit(
                out,
                &format!("n={n} table={value} solver={} {verdict}\n", rec.optimum),
            )?;
        }
    }
    if report.mismatches() > 0 {
        let _ = writeln!(
            err,
            "{} mismatch(es) against the conjecture",
            report.mismatches()
        );
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn call(args: &[&str]) -> (u8, String, String) {
        let mut out = Vec::new();
        let mut err = Vec::new();
        let code = run(
            std::iter::once("gridwalk").chain(args.iter().copied()),
            &mut out,
            &mut err,
        );
        (
            code,
            String::from_utf8(out).unwrap(),
            String::from_utf8(err).unwrap(),
        )
    }

    #[test]
    fn bounds_command() {
        assert_eq!(
            call(&["bounds", "4", "4"]),
            (0, "r=61 upper=62 interval\n".into(), String::new())
        );
        assert_eq!(call(&["bounds", "3", "4"]).1, "exact M=39\n");
        assert_eq!(call(&["bounds", "0", "4"]).0, EXIT_USAGE);
        assert_eq!(call(&["bounds", "x", "4"]).0, EXIT_USAGE);
    }

    #[test]
    fn construct_command() {
        let (code, out, err) = call(&["construct", "2", "3"]);
        assert_eq!(code, 0);
        assert_eq!(out, "2 4 6\n5 1 3\n");
        assert_eq!(err, "length=12 target=12\n");
        let (code, out, _) = call(&["construct", "1", "1"]);
        assert_eq!((code, out.as_str()), (0, "1\n"));
        assert_eq!(call(&["construct", "3", "3"]).2, "length=23 target=23\n");
    }

    #[test]
    fn ranges() {
        assert_eq!(parse_range("2..4").ok(), Some(2..=4));
        assert_eq!(parse_range("2..=4").ok(), Some(2..=4));
        assert_eq!(parse_range("3").ok(), Some(3..=3));
        assert!(parse_range("4..2").is_err());
        assert!(parse_range("0..2").is_err());
        assert!(parse_range("a..2").is_err());
    }

    #[test]
    fn sweep_csv() {
        let (code, out, _) = call(&["sweep", "2..4", "2..4", "--format", "csv"]);
        assert_eq!(code, 0);
        let lines: Vec<&str> = out.lines().collect();
        assert_eq!(lines[0], CSV_HEADER);
        assert_eq!(lines.len(), 10);
        assert_eq!(lines[1], "2,2,5,6,false,,5,5");
        assert_eq!(call(&["sweep", "4..2", "1..2"]).0, EXIT_USAGE);
    }

    #[test]
    fn solve_guard() {
        let (code, _, err) = call(&["solve", "5", "5"]);
        assert_eq!(code, EXIT_RESOURCE);
        assert!(err.contains("MiB"), "{err}");
        let (code, out, _) = call(&["solve", "2", "2"]);
        assert_eq!(code, 0);
        assert!(out.starts_with("M=5, equals r"), "{out}");
    }
}
