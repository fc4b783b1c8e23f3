//! Thin CLI over the library: parse arguments, dispatch, print the report,
//! exit nonzero when a requested check fails.

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};

use pivotwalk::chain::Variant;
use pivotwalk::harness::{
    cmd_audit, cmd_conjecture, cmd_enumerate, cmd_gmethod, cmd_sample, validate_dimension,
    AuditCfg, ConjectureCfg, EnumerateCfg, GmethodCfg, Observe, SampleCfg,
};

#[derive(Parser)]
#[command(
    name = "pivotwalk",
    version,
    about = "Self-avoiding walks on Z^d: enumeration, pivot samplers, exact chain analysis"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Enumerate the walk space and audit the first-step class partition
    Enumerate(EnumerateArgs),
    /// Build the exact transition matrices and verify their properties
    Audit(AuditArgs),
    /// Tabulate pivot vs pivot+ convergence from a shared start
    Conjecture(ConjectureArgs),
    /// Run seeded sampler replicas and aggregate observables
    Sample(SampleArgs),
    /// Run the grouped-matrix fixture demo and randomized property suites
    Gmethod(GmethodArgs),
}

#[derive(Clone, Copy, ValueEnum)]
enum FormatArg {
    Json,
    Csv,
}

#[derive(Args)]
struct CommonArgs {
    /// Lattice dimension
    #[arg(long = "d", default_value_t = 2)]
    d: usize,
    /// Number of steps N per walk
    #[arg(long = "walk-length", default_value_t = 4)]
    walk_length: usize,
    /// Output directory (created if missing); omit to print only
    #[arg(long = "out")]
    out: Option<PathBuf>,
    /// What to print on stdout
    #[arg(long, value_enum, default_value = "json")]
    format: FormatArg,
}

#[derive(Args)]
struct EnumerateArgs {
    #[command(flatten)]
    common: CommonArgs,
    /// Enumeration cap, in walks
    #[arg(long, default_value_t = pivotwalk::enumeration::DEFAULT_CAPACITY)]
    capacity: usize,
    /// Also write the full walk list in walk text format
    #[arg(long)]
    dump_walks: bool,
}

#[derive(Args)]
struct AuditArgs {
    #[command(flatten)]
    common: CommonArgs,
    /// Convergence horizon for the limit audit
    #[arg(long, default_value_t = 10_000)]
    horizon: u64,
    /// Convergence tolerance
    #[arg(long = "tol", default_value_t = 1e-6)]
    tol: f64,
    /// Normalization tolerance for double-precision row sums
    #[arg(long = "norm-tol", default_value_t = 1e-12)]
    norm_tol: f64,
    /// Also write the matrices in dump format
    #[arg(long)]
    dump_matrices: bool,
}

#[derive(Args)]
struct ConjectureArgs {
    #[command(flatten)]
    common: CommonArgs,
    /// Table horizon (rows 0..=horizon)
    #[arg(long, default_value_t = 200)]
    horizon: u64,
    /// Start walk for both chains, walk text format (default: straight +1)
    #[arg(long)]
    start: Option<String>,
    /// Convergence threshold both columns must reach by the horizon
    #[arg(long = "tol", default_value_t = 1e-4)]
    tol: f64,
}

#[derive(Clone, Copy, ValueEnum)]
enum VariantArg {
    Pivot,
    #[value(name = "pivot+", alias = "pivot-plus")]
    PivotPlus,
}

#[derive(Clone, Copy, ValueEnum)]
enum ObserveArg {
    Histogram,
    End2end,
}

#[derive(Args)]
struct SampleArgs {
    #[command(flatten)]
    common: CommonArgs,
    /// Which sampler to run
    #[arg(long, value_enum, default_value = "pivot+")]
    variant: VariantArg,
    /// Transitions per replica
    #[arg(long = "n-steps", default_value_t = 100)]
    n_steps: u64,
    /// Random seed; replica r uses substream r
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Independent replicas
    #[arg(long, default_value_t = 10_000)]
    replicas: u64,
    /// What to aggregate across replicas
    #[arg(long, value_enum, default_value = "histogram")]
    observe: ObserveArg,
    /// Also write replica 0's trajectory in walk text format
    #[arg(long)]
    dump_trajectory: bool,
}

#[derive(Args)]
struct GmethodArgs {
    /// Random chains per property suite
    #[arg(long, default_value_t = 100)]
    cases: u32,
    /// Random seed for the suites
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Output directory (created if missing); omit to print only
    #[arg(long = "out")]
    out: Option<PathBuf>,
    /// What to print on stdout
    #[arg(long, value_enum, default_value = "json")]
    format: FormatArg,
}

fn print_report<T: serde::Serialize>(report: &T, format: FormatArg, csv: impl FnOnce() -> String) {
    match format {
        FormatArg::Json => println!(
            "{}",
            serde_json::to_string_pretty(report).expect("reports serialize")
        ),
        FormatArg::Csv => print!("{}", csv()),
    }
}

fn run() -> pivotwalk::Result<bool> {
    let cli = Cli::parse();
    match cli.command {
        Command::Enumerate(args) => {
            validate_dimension(args.common.d)?;
            let cfg = EnumerateCfg {
                d: args.common.d,
                walk_length: args.common.walk_length,
                capacity: args.capacity,
                dump_walks: args.dump_walks,
                out: args.common.out,
            };
            let report = cmd_enumerate(&cfg)?;
            print_report(&report, args.common.format, || report.to_csv());
            Ok(report.passed())
        }
        Command::Audit(args) => {
            validate_dimension(args.common.d)?;
            let cfg = AuditCfg {
                d: args.common.d,
                walk_length: args.common.walk_length,
                horizon: args.horizon,
                tolerance: args.tol,
                norm_tolerance: args.norm_tol,
                dump_matrices: args.dump_matrices,
                out: args.common.out,
            };
            let report = cmd_audit(&cfg)?;
            print_report(&report, args.common.format, || report.to_csv());
            Ok(report.passed)
        }
        Command::Conjecture(args) => {
            validate_dimension(args.common.d)?;
            let cfg = ConjectureCfg {
                d: args.common.d,
                walk_length: args.common.walk_length,
                horizon: args.horizon,
                start: args.start,
                tolerance: args.tol,
                out: args.common.out,
            };
            let report = cmd_conjecture(&cfg)?;
            print_report(&report, args.common.format, || report.to_csv());
            Ok(report.passed)
        }
        Command::Sample(args) => {
            validate_dimension(args.common.d)?;
            let cfg = SampleCfg {
                d: args.common.d,
                walk_length: args.common.walk_length,
                variant: match args.variant {
                    VariantArg::Pivot => Variant::Pivot,
                    VariantArg::PivotPlus => Variant::PivotPlus,
                },
                n_steps: args.n_steps,
                seed: args.seed,
                replicas: args.replicas,
                observe: match args.observe {
                    ObserveArg::Histogram => Observe::Histogram,
                    ObserveArg::End2end => Observe::End2end,
                },
                dump_trajectory: args.dump_trajectory,
                out: args.common.out,
            };
            let report = cmd_sample(&cfg)?;
            print_report(&report, args.common.format, || report.to_csv());
            Ok(report.passed)
        }
        Command::Gmethod(args) => {
            let cfg = GmethodCfg {
                seed: args.seed,
                cases: args.cases,
                out: args.out,
            };
            let report = cmd_gmethod(&cfg)?;
            print_report(&report, args.format, || report.to_csv());
            Ok(report.passed)
        }
    }
}

fn main() -> ExitCode {
    match run() {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => {
            eprintln!("pivotwalk: one or more checks failed");
            ExitCode::FAILURE
        }
        Err(e) => {
            eprintln!("pivotwalk: {e}");
            ExitCode::FAILURE
        }
    }
}
