use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use sandfire_core::fire::GroupingMethod;
use sandfire_core::sandpile::{Binning, DepositionPolicy, InterventionPolicy};
use sandfire_core::stats::TTestVariant;

mod commands;

use commands::CliError;

#[derive(Parser, Debug)]
#[command(
    name = "sandfire",
    version,
    about = "Sandpile avalanches and wildfire size-class statistics"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Run a sandpile and write its avalanche events.
    Simulate(SimulateArgs),
    /// Fit class-size slopes from a fire record file, or the size
    /// distribution of a simulated run.
    Analyze(AnalyzeArgs),
    /// Recompute the published quintile fits from the embedded class table.
    Reproduce(ReproduceArgs),
    /// Student t tail probability.
    #[command(allow_negative_numbers = true)]
    TTail(TTailArgs),
}

#[derive(Args, Debug)]
struct SimulateArgs {
    #[arg(long, default_value_t = 50)]
    width: usize,
    #[arg(long, default_value_t = 50)]
    height: usize,
    #[arg(long, default_value_t = sandfire_core::sandpile::DEFAULT_THRESHOLD)]
    threshold: u64,
    /// Drawn from system entropy when omitted; always printed.
    #[arg(long)]
    seed: Option<u64>,
    /// Unmeasured deposits before recording [default: 10 per cell]
    #[arg(long)]
    warmup: Option<u64>,
    /// Measured deposits.
    #[arg(long, default_value_t = 200_000)]
    deposits: u64,
    /// uniform | max | min | fixed:<row>,<col>
    #[arg(long, default_value = "uniform")]
    policy: DepositionPolicy,
    /// none | periodic:<period>,<top fraction>,<grains per cell>
    #[arg(long, default_value = "none")]
    intervention: InterventionPolicy,
    /// Independent runs at seeds seed, seed+1, ...
    #[arg(long, default_value_t = 1, value_parser = clap::value_parser!(u64).range(1..))]
    runs: u64,
    #[command(flatten)]
    output: OutputArgs,
}

#[derive(Args, Debug)]
struct AnalyzeArgs {
    /// Yearly fire record CSV.
    #[arg(
        long,
        required_unless_present = "from_run",
        conflicts_with = "from_run"
    )]
    data: Option<PathBuf>,
    /// quintile | quartile | quantile:<g> | periods:<y0>-<y1>,... | all
    #[arg(long, default_value = "quintile")]
    groups: GroupingMethod,
    /// 1-based categories left out of the slope-vs-acreage fit, comma
    /// separated, or `none` [default: 2 with --groups quintile, else none]
    #[arg(long)]
    exclude: Option<String>,
    /// pooled | welch, for period comparisons.
    #[arg(long = "t-test", default_value = "pooled")]
    t_test: TTestVariant,
    /// Event CSV written by `simulate`.
    #[arg(long)]
    from_run: Option<PathBuf>,
    /// log:<ratio> | edges:<e0>,<e1>,...
    #[arg(long, default_value = "log:2")]
    binning: Binning,
    /// Bins with fewer events are left out of the size fit.
    #[arg(long, default_value_t = 1)]
    min_count: u64,
    #[command(flatten)]
    output: OutputArgs,
}

#[derive(Args, Debug)]
struct ReproduceArgs {
    #[command(flatten)]
    output: OutputArgs,
}

#[derive(Args, Debug)]
struct TTailArgs {
    #[arg(long)]
    t: f64,
    #[arg(long)]
    df: f64,
    /// P(|T| >= |t|) instead of P(T >= t).
    #[arg(long)]
    two_sided: bool,
}

#[derive(Args, Debug)]
struct OutputArgs {
    /// Output directory, created if missing.
    #[arg(long, default_value = ".")]
    out: PathBuf,
    /// Omit the version/digest banner line from every output file.
    #[arg(long)]
    no_banner: bool,
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = match cli.command {
        Command::Simulate(a) => commands::simulate(a),
        Command::Analyze(a) => commands::analyze(a),
        Command::Reproduce(a) => commands::reproduce(a),
        Command::TTail(a) => commands::t_tail(a),
    };
    match result {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code())
        }
    }
}

impl From<sandfire_core::Error> for CliError {
    fn from(e: sandfire_core::Error) -> Self {
        CliError::Core(e)
    }
}
