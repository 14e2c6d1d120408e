use std::path::PathBuf;
use std::process::ExitCode;
use std::time::Instant;

use clap::{Args, Parser, Subcommand, ValueEnum};

mod commands;
mod report;

use report::write_report;

#[derive(Parser, Debug)]
#[command(
    name = "tspgaplab",
    version,
    about = "Exhaustive experiments on small GAP and Euclidean TSP instances"
)]
struct Cli {
    /// Worker threads (0 = one per core). Never changes numeric output.
    #[arg(long, global = true, default_value_t = 0)]
    threads: usize,
    #[command(subcommand)]
    command: Command,
}

#[derive(Args, Debug, Clone, Default)]
pub struct ReportOut {
    /// Report file (stdout when absent).
    #[arg(long)]
    pub out: Option<PathBuf>,
    /// CSV twin of the report.
    #[arg(long)]
    pub csv: Option<PathBuf>,
}

#[derive(ValueEnum, Debug, Clone, Copy, PartialEq, Eq)]
pub enum Kind {
    Unique,
    RandomGap,
    RandomE2d,
}

#[derive(ValueEnum, Debug, Clone, Copy, PartialEq, Eq)]
pub enum MethodArg {
    Delaunay,
    Constrained,
}

#[derive(ValueEnum, Debug, Clone, Copy, PartialEq, Eq)]
pub enum Experiment {
    Containment,
    Preservation,
    Monotonicity,
    Bounds,
    Coincidence,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Generate an instance file.
    Gen {
        #[arg(long, value_enum)]
        kind: Kind,
        #[arg(long)]
        n: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// Cost range for random GAP instances.
        #[arg(long, default_value_t = 0.0)]
        lo: f64,
        #[arg(long, default_value_t = 1.0)]
        hi: f64,
        /// Instance file (stdout when absent).
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Exact optimum by exhaustive enumeration.
    Solve {
        file: PathBuf,
        /// Triangulation file whose edges (both directions) restrict the search.
        #[arg(long)]
        mask: Option<PathBuf>,
        #[arg(long)]
        force: bool,
        /// SVG of the first optimal tour (Euclidean instances only).
        #[arg(long)]
        svg: Option<PathBuf>,
        #[command(flatten)]
        report: ReportOut,
    },
    /// Triangulate a Euclidean instance and re-solve on its edges.
    Reduce {
        file: PathBuf,
        #[arg(long, value_enum, default_value = "constrained")]
        method: MethodArg,
        /// Tour to build the constrained triangulation around (default: the optimum).
        #[arg(long)]
        tour: Option<PathBuf>,
        /// Triangulation file to write.
        #[arg(long)]
        tri: Option<PathBuf>,
        #[arg(long)]
        svg: Option<PathBuf>,
        #[arg(long)]
        force: bool,
        #[command(flatten)]
        report: ReportOut,
    },
    /// Sorted cost matrix, solution frontier and pixmap.
    Scm {
        file: PathBuf,
        /// Restrict to a triangulation of this kind (Euclidean instances only).
        #[arg(long, value_enum)]
        method: Option<MethodArg>,
        #[arg(long)]
        mask: Option<PathBuf>,
        #[arg(long, default_value_t = tspgap::scm::DEFAULT_NEAR_EPS)]
        eps: f64,
        #[arg(long)]
        ppm: Option<PathBuf>,
        #[arg(long)]
        force: bool,
        #[command(flatten)]
        report: ReportOut,
    },
    /// Uniform random cycles and the optimum hit rate.
    Sample {
        file: PathBuf,
        #[arg(long, default_value_t = 100_000)]
        k: u64,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long)]
        force: bool,
        #[command(flatten)]
        report: ReportOut,
    },
    /// Block composition of a Euclidean (or any) block and a GAP block.
    Compose {
        /// Block A instance (generated from --seed when absent).
        #[arg(long)]
        a: Option<PathBuf>,
        /// Block B instance (generated from --seed when absent).
        #[arg(long)]
        b: Option<PathBuf>,
        #[arg(long, default_value_t = 4)]
        n: usize,
        #[arg(long, default_value_t = 4)]
        m: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long, default_value_t = 0.0)]
        lo: f64,
        /// Upper fill bound (default: largest block cost).
        #[arg(long)]
        hi: Option<f64>,
        /// Composed instance file (stdout when absent).
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Triangle inequality audit.
    Audit {
        file: PathBuf,
        #[arg(long, default_value_t = tspgap::reduction::DEFAULT_AUDIT_TOL)]
        tol: f64,
        #[command(flatten)]
        report: ReportOut,
    },
    /// Seed sweeps and exact tables.
    Sweep {
        #[arg(value_enum)]
        experiment: Experiment,
        #[arg(long)]
        n: Option<usize>,
        #[arg(long, default_value_t = 4)]
        m: usize,
        /// First seed of the sweep.
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// Number of consecutive seeds.
        #[arg(long)]
        count: Option<u64>,
        /// Random trials per instance (monotonicity above the exhaustive size).
        #[arg(long, default_value_t = 10_000)]
        k: u64,
        #[arg(long, default_value_t = 0.0)]
        lo: f64,
        #[arg(long)]
        hi: Option<f64>,
        #[arg(long, value_enum, default_value = "random-e2d")]
        kind: Kind,
        #[arg(long)]
        a: Option<PathBuf>,
        #[arg(long)]
        b: Option<PathBuf>,
        /// Where to write the witness composition of a preservation sweep.
        #[arg(long)]
        archive: Option<PathBuf>,
        #[arg(long)]
        force: bool,
        #[command(flatten)]
        report: ReportOut,
    },
}

/// Argument list minus the thread count, which never affects results.
fn recorded_command() -> String {
    let mut out = vec!["tspgaplab".to_string()];
    let mut args = std::env::args().skip(1);
    while let Some(a) = args.next() {
        if a == "--threads" {
            args.next();
        } else if !a.starts_with("--threads=") {
            out.push(a);
        }
    }
    out.join(" ")
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let pool = match rayon::ThreadPoolBuilder::new()
        .num_threads(cli.threads)
        .build()
    {
        Ok(p) => p,
        Err(e) => {
            eprintln!("tspgaplab: cannot start thread pool: {e}");
            return ExitCode::from(1);
        }
    };
    let threads = pool.current_num_threads();
    let start = Instant::now();
    let result = pool.install(|| commands::run(&cli.command));
    let outcome = result.and_then(|done| {
        let Some((mut rr, out)) = done else {
            return Ok(());
        };
        rr.command = recorded_command();
        rr.threads = threads;
        rr.elapsed_ms = start.elapsed().as_millis();
        write_report(&rr, out.out.as_deref(), out.csv.as_deref()).map_err(|e| {
            commands::CliError::Write {
                path: out.out.clone().unwrap_or_else(|| "stdout".into()),
                source: e,
            }
        })
    });
    match outcome {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("tspgaplab: {e}");
            ExitCode::from(e.exit_code())
        }
    }
}
