//! Command-line interface.

use std::io::Write;
use std::path::PathBuf;

use clap::{Args, Parser, Subcommand};

use crate::commands::{execute, Command};
use crate::job::{Family, Job, Params, DEFAULT_BUDGET_MS};
use crate::report::EXIT_USAGE;

#[derive(Debug, Parser)]
#[command(name = "pclab", version, about = "Clique, direction and character-sum verification for Peisert-type graphs")]
pub struct Cli {
    #[command(subcommand)]
    pub command: CliCommand,
    #[command(flatten)]
    pub args: JobArgs,
}

#[derive(Debug, Clone, Copy, Subcommand)]
pub enum CliCommand {
    /// Paley graph on F_{q^2}: omega = q and F_q is the unique clique through 0, 1.
    Vlm,
    /// Peisert graph on F_{q^2}, q = 3 mod 4: F_q is the unique clique through 0, 1.
    Mullin,
    /// GP(q^2, d) with d | q + 1: uniqueness and line structure.
    Sziklai,
    /// GP*(q^2, d): count maximum cliques through 0.
    Gpstar,
    /// F_q maximal in the Peisert graph on F_{q^4}, or the fallback structure.
    MaximalPeisert,
    /// F_q (or the conjectured F_{p^r}) maximal in GP(q^N, d); N from --ext.
    MaximalGp,
    /// Uniqueness of F_q when m <= p^(n-k).
    CorImprovement,
    /// Containment of large maximal cliques through 0 in subspace cliques.
    Stability,
    /// Character-sum bound sweeps (--kind katz|reis|charsumcor|primecor).
    Charsum,
    /// Convex-hull distance from 0 (--d, --points, or --family).
    Epsilon,
    /// Direction sets (--mode ball|cliques|extension).
    Directions,
}

impl CliCommand {
    pub fn command(self) -> Command {
        match self {
            CliCommand::Vlm => Command::Vlm,
            CliCommand::Mullin => Command::Mullin,
            CliCommand::Sziklai => Command::Sziklai,
            CliCommand::Gpstar => Command::Gpstar,
            CliCommand::MaximalPeisert => Command::MaximalPeisert,
            CliCommand::MaximalGp => Command::MaximalGp,
            CliCommand::CorImprovement => Command::CorImprovement,
            CliCommand::Stability => Command::Stability,
            CliCommand::Charsum => Command::Charsum,
            CliCommand::Epsilon => Command::Epsilon,
            CliCommand::Directions => Command::Directions,
        }
    }
}

/// Parsed `--points` value.
#[derive(Debug, Clone, PartialEq)]
pub struct PointList(pub Vec<[f64; 2]>);

/// Parsed `--reps` value.
#[derive(Debug, Clone, PartialEq)]
pub struct RepList(pub Vec<u64>);

fn parse_points(s: &str) -> Result<PointList, String> {
    s.split(';')
        .filter(|p| !p.trim().is_empty())
        .map(|p| {
            let (x, y) = p
                .split_once(',')
                .ok_or_else(|| format!("expected x,y in {p:?}"))?;
            let x: f64 = x.trim().parse().map_err(|e| format!("{x:?}: {e}"))?;
            let y: f64 = y.trim().parse().map_err(|e| format!("{y:?}: {e}"))?;
            Ok([x, y])
        })
        .collect::<Result<_, _>>()
        .map(PointList)
}

fn parse_reps(s: &str) -> Result<RepList, String> {
    s.split(',')
        .map(|r| r.trim().parse().map_err(|e| format!("{r:?}: {e}")))
        .collect::<Result<_, _>>()
        .map(RepList)
}

#[derive(Debug, Clone, Args)]
pub struct JobArgs {
    /// Characteristic (with --n gives q = p^n).
    #[arg(long, global = true)]
    pub p: Option<u64>,
    #[arg(long, global = true)]
    pub n: Option<u32>,
    /// Base field order.
    #[arg(long, global = true)]
    pub q: Option<u64>,
    #[arg(long, global = true)]
    pub d: Option<u64>,
    /// Degree of the top field over F_q.
    #[arg(long, global = true)]
    pub ext: Option<u32>,
    /// Subspace dimension for sampled Reis sums.
    #[arg(long, global = true)]
    pub dim: Option<u32>,
    #[arg(long, value_enum, global = true)]
    pub family: Option<Family>,
    /// Coset representatives as dlogs, e.g. 0,1,3.
    #[arg(long, value_parser = parse_reps, global = true)]
    pub reps: Option<RepList>,
    #[arg(long, global = true)]
    pub kind: Option<String>,
    #[arg(long, global = true)]
    pub mode: Option<String>,
    #[arg(long, global = true)]
    pub samples: Option<u64>,
    #[arg(long, global = true)]
    pub expect_count: Option<u64>,
    /// Planar points as "x,y;x,y;...".
    #[arg(long, value_parser = parse_points, allow_hyphen_values = true, global = true)]
    pub points: Option<PointList>,
    #[arg(long, default_value_t = 0, global = true)]
    pub seed: u64,
    #[arg(long, default_value_t = DEFAULT_BUDGET_MS, global = true)]
    pub budget_ms: u64,
    /// Worker threads; 0 uses every core.
    #[arg(long, default_value_t = 1, global = true)]
    pub threads: usize,
    /// Write the report here instead of stdout.
    #[arg(long, global = true)]
    pub json: Option<PathBuf>,
    /// Per-check rows for charsum sweeps.
    #[arg(long, global = true)]
    pub csv: Option<PathBuf>,
    /// Directory for cached field towers.
    #[arg(long, global = true)]
    pub cache_dir: Option<PathBuf>,
}

impl JobArgs {
    pub fn job(&self) -> Job {
        let a = self.clone();
        Job {
            params: Params {
                p: a.p,
                n: a.n,
                q: a.q,
                d: a.d,
                ext: a.ext,
                dim: a.dim,
                family: a.family,
                reps: a.reps.map(|r| r.0),
                kind: a.kind,
                mode: a.mode,
                samples: a.samples,
                expect_count: a.expect_count,
                points: a.points.map(|p| p.0),
                seed: a.seed,
                budget_ms: a.budget_ms,
                threads: a.threads,
            },
            cache_dir: a.cache_dir,
            csv_out: a.csv,
        }
    }
}

/// Parses arguments, runs the command and returns the process exit code.
pub fn main_with_args<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { EXIT_USAGE } else { 0 };
        }
    };
    let job = cli.args.job();
    let report = match execute(cli.command.command(), &job) {
        Ok(r) => r,
        Err(e) => {
            eprintln!("pclab: {e}");
            return EXIT_USAGE;
        }
    };
    match &cli.args.json {
        Some(path) => {
            if let Err(e) = std::fs::write(path, report.to_json() + "\n") {
                eprintln!("pclab: cannot write {}: {e}", path.display());
                return EXIT_USAGE;
            }
            println!("{}", report.summary());
        }
        None => {
            let mut out = std::io::stdout().lock();
            let _ = writeln!(out, "{}", report.to_json());
        }
    }
    report.verdict.exit_code()
}
