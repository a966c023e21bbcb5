use std::fmt;
use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use sandfire_core::fire::{average_counts, parse_dataset, CategoryGrouping, GroupingMethod};
use sandfire_core::pipeline::emit::{self, banner_line};
use sandfire_core::pipeline::{
    analyze_sizes, fit_table, period_comparison, reproduce_published, slopes_vs_burn,
    SimulationFitOptions,
};
use sandfire_core::sandpile::{read_events_csv, run_batch, seed_sweep, LatticeConfig};
use sandfire_core::stats::{student_t_tail, student_t_two_sided};
use sandfire_core::{sha256_hex, Error};

use crate::{AnalyzeArgs, OutputArgs, ReproduceArgs, SimulateArgs, TTailArgs};

#[derive(Debug)]
pub enum CliError {
    Core(Error),
    Io(PathBuf, std::io::Error),
}

impl CliError {
    pub fn exit_code(&self) -> u8 {
        match self {
            CliError::Io(..) => 3,
            CliError::Core(e) => match e {
                Error::Config(_)
                | Error::Parse { .. }
                | Error::Schema(_)
                | Error::MissingPrescribed(_) => 2,
                Error::Degenerate(_) | Error::Undefined(_) | Error::InsufficientData(_) => 4,
            },
        }
    }
}

impl fmt::Display for CliError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            CliError::Core(e) => e.fmt(f),
            CliError::Io(p, e) => write!(f, "{}: {e}", p.display()),
        }
    }
}

type CliResult = Result<ExitCode, CliError>;

struct Sink<'a> {
    dir: &'a Path,
    banner: Option<String>,
}

impl<'a> Sink<'a> {
    fn open(args: &'a OutputArgs, input_digest: &str) -> Result<Self, CliError> {
        fs::create_dir_all(&args.out).map_err(|e| CliError::Io(args.out.clone(), e))?;
        Ok(Sink {
            dir: &args.out,
            banner: (!args.no_banner).then(|| banner_line(input_digest)),
        })
    }

    fn banner(&self) -> Option<&str> {
        self.banner.as_deref()
    }

    fn write(&self, name: &str, contents: &[u8]) -> Result<(), CliError> {
        let path = self.dir.join(name);
        fs::write(&path, contents).map_err(|e| CliError::Io(path, e))
    }
}

fn read(path: &Path) -> Result<Vec<u8>, CliError> {
    fs::read(path).map_err(|e| CliError::Io(path.to_owned(), e))
}

fn to_json<T: serde::Serialize>(value: &T) -> Vec<u8> {
    let mut bytes = serde_json::to_vec_pretty(value).expect("plain data serializes");
    bytes.push(b'\n');
    bytes
}

pub fn simulate(args: SimulateArgs) -> CliResult {
    let seed = args.seed.unwrap_or_else(rand::random);
    println!("seed: {seed}");
    let mut base = LatticeConfig::new(args.width, args.height)
        .with_seed(seed)
        .with_threshold(args.threshold)
        .with_policy(args.policy)
        .with_intervention(args.intervention);
    base = base
        .clone()
        .with_deposits(args.warmup.unwrap_or(base.warmup_deposits), args.deposits);
    base.validate()?;

    let configs = seed_sweep(&base, args.runs as usize);
    let runs = run_batch(&configs)?;

    let sink = Sink::open(&args.output, &sha256_hex(&to_json(&base)))?;
    let version = sink.banner().map(|_| emit::TOOLKIT_VERSION);
    let mut headers = Vec::with_capacity(runs.len());
    for run in &runs {
        let name = if runs.len() == 1 {
            "run.csv".to_owned()
        } else {
            format!("run-{}.csv", run.config.seed)
        };
        let mut csv = Vec::new();
        run.write_events_csv(&mut csv, sink.banner())
            .map_err(|e| CliError::Io(sink.dir.join(&name), e))?;
        sink.write(&name, &csv)?;
        headers.push(run.header(version));
        println!(
            "{name}: {} events, mean size {}, checksum {}",
            run.events.len(),
            run.mean_size(),
            run.final_checksum
        );
    }
    if headers.len() == 1 {
        sink.write("run.json", &to_json(&headers[0]))?;
    } else {
        sink.write("run.json", &to_json(&headers))?;
    }
    Ok(ExitCode::SUCCESS)
}

pub fn analyze(args: AnalyzeArgs) -> CliResult {
    match (&args.data, &args.from_run) {
        (_, Some(run)) => analyze_run(run, &args),
        (Some(data), None) => analyze_records(data, &args),
        (None, None) => Err(Error::Config("one of --data or --from-run is required".into()).into()),
    }
}

fn analyze_run(path: &Path, args: &AnalyzeArgs) -> CliResult {
    let bytes = read(path)?;
    let events = read_events_csv(bytes.as_slice())?;
    let sizes: Vec<u64> = events.iter().map(|e| e.topplings).collect();
    let options = SimulationFitOptions {
        binning: args.binning.clone(),
        min_count: args.min_count,
    };
    let fit = analyze_sizes(&sizes, &options)?;
    let sink = Sink::open(&args.output, &sha256_hex(&bytes))?;
    sink.write(
        "histogram.csv",
        emit::histogram_csv(&fit.histogram, sink.banner()).as_bytes(),
    )?;
    sink.write("size_fit.json", &to_json(&fit.fit))?;
    println!(
        "size fit over {} bins: slope {} (se {}), r2 {}",
        fit.points.len(),
        fit.fit.slope,
        fit.fit.se_slope,
        fit.fit.r_squared
    );
    Ok(ExitCode::SUCCESS)
}

fn analyze_records(path: &Path, args: &AnalyzeArgs) -> CliResult {
    let bytes = read(path)?;
    let label = path
        .file_stem()
        .map(|s| s.to_string_lossy().into_owned())
        .unwrap_or_default();
    let dataset = parse_dataset(&label, bytes.as_slice())?;
    let grouping = CategoryGrouping::build(&dataset, &args.groups)?;
    let table = average_counts(&dataset, &grouping)?;
    let mut report = fit_table(&table)?;

    let k = report.category_count();
    let exclude = excluded_categories(args.exclude.as_deref(), &args.groups, k)?;
    match slopes_vs_burn(&report, &grouping.category_medians, &exclude) {
        Ok(b) => report.slopes_vs_burn = Some(b),
        Err(Error::InsufficientData(msg)) if k < 3 || grouping.category_medians.len() < 3 => {
            eprintln!("note: skipping slope-vs-acreage fit: {msg}");
        }
        Err(e) => return Err(e.into()),
    }

    let sink = Sink::open(&args.output, &sha256_hex(&bytes))?;
    let b = sink.banner();
    sink.write("table1.csv", emit::table1_csv(&table, b).as_bytes())?;
    sink.write("table2.csv", emit::table2_csv(&report, b).as_bytes())?;
    sink.write("table3.csv", emit::table3_csv(&report, b).as_bytes())?;
    sink.write("pairs.csv", emit::pairs_csv(&report, b).as_bytes())?;
    for c in 0..k {
        let name = format!("fig_points_{}.csv", c + 1);
        sink.write(&name, emit::fig_points_csv(&report, c, b).as_bytes())?;
    }
    if let Some(fig) = emit::fig2f_csv(&report, b) {
        sink.write("fig2f.csv", fig.as_bytes())?;
    }
    if let GroupingMethod::ExplicitPeriods { periods } = &args.groups {
        if periods.len() >= 2 {
            let cmp = period_comparison(&dataset, periods, args.t_test)?;
            sink.write("periods.csv", emit::periods_csv(&cmp, b).as_bytes())?;
        }
    }

    for (label, fit) in report.labels.iter().zip(&report.fits) {
        println!(
            "{label}: slope {} (se {}), r2 {}, p {}",
            fit.slope, fit.se_slope, fit.r_squared, fit.p_two_sided
        );
    }
    if let Some(burn) = &report.slopes_vs_burn {
        println!(
            "slope vs median prescribed acres: {} (p {})",
            burn.fit.slope, burn.fit.p_two_sided
        );
    }
    Ok(ExitCode::SUCCESS)
}

/// Zero-based categories to leave out of the slope-vs-acreage fit.
fn excluded_categories(
    flag: Option<&str>,
    groups: &GroupingMethod,
    k: usize,
) -> Result<Vec<usize>, CliError> {
    let spec = match flag {
        Some(s) => s,
        None if *groups == (GroupingMethod::QuantileByPrescribedAcres { groups: 5 }) => "2",
        None => "none",
    };
    if spec == "none" {
        return Ok(Vec::new());
    }
    spec.split(',')
        .map(|c| match c.trim().parse::<usize>() {
            Ok(n) if (1..=k).contains(&n) => Ok(n - 1),
            _ => Err(
                Error::Config(format!("--exclude `{c}`: categories are 1..={k} or none")).into(),
            ),
        })
        .collect()
}

pub fn reproduce(args: ReproduceArgs) -> CliResult {
    let r = reproduce_published()?;
    let text = r.render();
    print!("{text}");

    let table = sandfire_core::pipeline::fixture::florida_table();
    let digest = sha256_hex(emit::table1_csv(&table, None).as_bytes());
    let sink = Sink::open(&args.output, &digest)?;
    let b = sink.banner();
    sink.write("table1.csv", emit::table1_csv(&table, b).as_bytes())?;
    sink.write("table2.csv", emit::table2_csv(&r.report, b).as_bytes())?;
    sink.write("table3.csv", emit::table3_csv(&r.report, b).as_bytes())?;
    sink.write("pairs.csv", emit::pairs_csv(&r.report, b).as_bytes())?;
    let mut listing = String::new();
    if let Some(b) = b {
        listing.push_str("# ");
        listing.push_str(b);
        listing.push('\n');
    }
    listing.push_str(&text);
    sink.write("reproduce.txt", listing.as_bytes())?;

    Ok(if r.all_passed() {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    })
}

pub fn t_tail(args: TTailArgs) -> CliResult {
    if args.df.is_nan() || args.df < 1.0 || args.df.is_infinite() {
        return Err(Error::Config(format!(
            "--df must be a finite number >= 1, got {}",
            args.df
        ))
        .into());
    }
    if args.t.is_nan() {
        return Err(Error::Config("--t must be a number".into()).into());
    }
    let p = if args.two_sided {
        student_t_two_sided(args.t, args.df)
    } else {
        student_t_tail(args.t, args.df)
    };
    println!("{}", significant(p, 10));
    Ok(ExitCode::SUCCESS)
}

/// Fixed-point rendering with `digits` significant digits.
fn significant(x: f64, digits: i32) -> String {
    if x == 0.0 || !x.is_finite() {
        return format!("{x}");
    }
    let magnitude = x.abs().log10().floor() as i32;
    let decimals = (digits - 1 - magnitude).max(0) as usize;
    format!("{x:.decimals$}")
}

#[cfg(test)]
mod tests {
    use super::significant;

    #[test]
    fn ten_significant_digits() {
        assert_eq!(significant(0.5, 10), "0.5000000000");
        assert_eq!(significant(0.25, 10), "0.2500000000");
        assert_eq!(significant(0.0683634, 10), "0.06836340000");
        assert_eq!(significant(1.0, 10), "1.000000000");
        assert_eq!(significant(0.0, 10), "0");
    }
}
