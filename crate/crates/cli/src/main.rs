use std::fs::File;
use std::io::{self, BufWriter, Write};
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use rayon::prelude::*;

use sqdist::experiment::{self, TrialOutcome, TABLE_CSV_HEADER};
use sqdist::families::{Family, FamilyParams};
use sqdist::poly::GoppaFlavor;
use sqdist::report::{DistinguisherReport, Format, ReportWriter};
use sqdist::verify::{self, SUITES};
use sqdist::Error;

/// Seed used when `--seed` is not given.
const DEFAULT_SEED: u64 = 1;

#[derive(Parser)]
#[command(name = "sqdist", version, about = "Square-code distinguisher for alternant and Goppa codes")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Sample instances, measure dim of the square of the dual, compare with the prediction.
    Distinguish(DistinguishArgs),
    /// One report per degree r in a range, plus the largest distinguishable r on stderr.
    Sweep(SweepArgs),
    /// Largest distinguishable binary Goppa degree for the Classic McEliece lengths.
    #[command(name = "mceliece-table")]
    McElieceTable(TableArgs),
    /// Run a property suite.
    Verify(VerifyArgs),
}

#[derive(Clone, Copy, ValueEnum)]
enum FamilyArg {
    Grs,
    Alternant,
    Goppa,
}

impl From<FamilyArg> for Family {
    fn from(f: FamilyArg) -> Family {
        match f {
            FamilyArg::Grs => Family::Grs,
            FamilyArg::Alternant => Family::Alternant,
            FamilyArg::Goppa => Family::Goppa,
        }
    }
}

#[derive(Clone, Copy, ValueEnum)]
enum FlavorArg {
    Irreducible,
    Squarefree,
    Any,
}

impl From<FlavorArg> for GoppaFlavor {
    fn from(f: FlavorArg) -> GoppaFlavor {
        match f {
            FlavorArg::Irreducible => GoppaFlavor::Irreducible,
            FlavorArg::Squarefree => GoppaFlavor::Squarefree,
            FlavorArg::Any => GoppaFlavor::Unrestricted,
        }
    }
}

#[derive(Clone, Copy, ValueEnum)]
enum FormatArg {
    Json,
    Csv,
}

impl From<FormatArg> for Format {
    fn from(f: FormatArg) -> Format {
        match f {
            FormatArg::Json => Format::Json,
            FormatArg::Csv => Format::Csv,
        }
    }
}

#[derive(Args)]
struct Common {
    #[arg(long, value_enum)]
    family: FamilyArg,
    #[arg(long)]
    q: u32,
    /// Extension degree; for `grs` the code lives over F_{q^m} and m = 1 is allowed.
    #[arg(long)]
    m: u32,
    #[arg(long)]
    n: usize,
    #[arg(long, value_enum, default_value = "irreducible")]
    goppa_flavor: FlavorArg,
    /// Also solve the linearized system and report its kernel dimension.
    #[arg(long)]
    with_lp: bool,
    #[arg(long, default_value_t = 1)]
    trials: usize,
    #[arg(long, default_value_t = DEFAULT_SEED)]
    seed: u64,
    #[arg(long, value_enum, default_value = "json")]
    format: FormatArg,
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args)]
struct DistinguishArgs {
    #[command(flatten)]
    common: Common,
    #[arg(long)]
    r: usize,
}

#[derive(Args)]
struct SweepArgs {
    #[command(flatten)]
    common: Common,
    #[arg(long)]
    r_min: usize,
    #[arg(long)]
    r_max: usize,
    /// Build and measure codes; by default only the predictions are computed.
    #[arg(long)]
    measure: bool,
}

#[derive(Args)]
struct TableArgs {
    #[arg(long, value_enum, default_value = "csv")]
    format: FormatArg,
}

#[derive(Args)]
struct VerifyArgs {
    /// One of the suite names, or `all`.
    #[arg(long)]
    suite: String,
    #[arg(long, default_value_t = DEFAULT_SEED)]
    seed: u64,
    #[arg(long)]
    trials: Option<usize>,
}

enum Failure {
    Domain(String),
    Invariant(String),
    Other(String),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Failure {
        match e {
            Error::ParamDomain(_) | Error::BadDegree(_) | Error::UnknownSuite(_) => Failure::Domain(e.to_string()),
            _ => Failure::Other(e.to_string()),
        }
    }
}

impl From<io::Error> for Failure {
    fn from(e: io::Error) -> Failure {
        Failure::Other(e.to_string())
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let res = match cli.command {
        Command::Distinguish(a) => distinguish(a),
        Command::Sweep(a) => sweep(a),
        Command::McElieceTable(a) => table(a),
        Command::Verify(a) => verify_cmd(a),
    };
    match res {
        Ok(()) => ExitCode::SUCCESS,
        Err(Failure::Domain(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(2)
        }
        Err(Failure::Invariant(msg)) => {
            eprintln!("invariant failure: {msg}");
            ExitCode::from(1)
        }
        Err(Failure::Other(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(1)
        }
    }
}

fn check_trials(c: &Common) -> Result<(), Failure> {
    if c.trials == 0 {
        return Err(Failure::Domain("--trials must be >= 1".into()));
    }
    Ok(())
}

fn params(c: &Common, r: usize) -> FamilyParams {
    FamilyParams { family: c.family.into(), q: c.q, m: c.m, n: c.n, r, seed: c.seed, flavor: c.goppa_flavor.into() }
}

fn open_out(path: &Option<PathBuf>) -> io::Result<Box<dyn Write>> {
    Ok(match path {
        Some(p) => Box::new(BufWriter::new(File::create(p)?)),
        None => Box::new(io::stdout().lock()),
    })
}

/// Runs `jobs` in parallel batches, writing reports in job order as each batch completes.
fn run_jobs(
    jobs: &[(FamilyParams, bool)],
    with_lp: bool,
    writer: &mut ReportWriter<Box<dyn Write>>,
) -> Result<Vec<DistinguisherReport>, Failure> {
    let batch = rayon::current_num_threads().max(1) * 2;
    let mut reports = Vec::with_capacity(jobs.len());
    let mut bad = Vec::new();
    for chunk in jobs.chunks(batch) {
        let outs: Vec<Result<Option<TrialOutcome>, Error>> = chunk
            .par_iter()
            .map(|(p, measure)| {
                if *measure {
                    experiment::run_trial(p, with_lp).map(Some)
                } else {
                    Ok(None)
                }
            })
            .collect();
        for ((p, _), out) in chunk.iter().zip(outs) {
            let (report, sound) = match out? {
                Some(o) => {
                    let sound = o.sound();
                    (o.report, sound)
                }
                None => (experiment::predict(p)?, true),
            };
            if !sound {
                bad.push(format!("r={} seed={}", report.r, report.seed));
            }
            writer.write(&report).map_err(Failure::from)?;
            reports.push(report);
        }
    }
    if bad.is_empty() {
        Ok(reports)
    } else {
        Err(Failure::Invariant(format!("bound or identity violated for {}", bad.join(", "))))
    }
}

fn distinguish(a: DistinguishArgs) -> Result<(), Failure> {
    let c = &a.common;
    check_trials(c)?;
    let base = params(c, a.r);
    experiment::predict(&base)?;
    let jobs: Vec<_> = (0..c.trials as u64).map(|i| (experiment::trial_params(&base, i), true)).collect();
    let mut w = ReportWriter::new(open_out(&c.out)?, c.format.into());
    let reports = run_jobs(&jobs, c.with_lp, &mut w)?;
    let hits = reports.iter().filter(|r| r.measured_dim == Some(r.predicted_dim)).count();
    eprintln!(
        "{} q={} m={} n={} r={}: predicted {} (random {}), measured = predicted in {}/{} trials, {}",
        base.family,
        base.q,
        base.m,
        base.n,
        base.r,
        reports.first().map_or(0, |r| r.predicted_dim),
        reports.first().map_or(0, |r| r.random_expected_dim),
        hits,
        reports.len(),
        reports.first().map_or_else(String::new, |r| r.verdict.to_string()),
    );
    Ok(())
}

fn sweep(a: SweepArgs) -> Result<(), Failure> {
    let c = &a.common;
    check_trials(c)?;
    let rs: Vec<usize> = (a.r_min..=a.r_max).collect();
    for &r in &rs {
        experiment::predict(&params(c, r))?;
    }
    let trials = if a.measure { c.trials as u64 } else { 1 };
    let jobs: Vec<_> = rs
        .iter()
        .flat_map(|&r| {
            let base = params(c, r);
            (0..trials).map(move |i| (experiment::trial_params(&base, i), a.measure))
        })
        .collect();
    let mut w = ReportWriter::new(open_out(&c.out)?, c.format.into());
    let reports = run_jobs(&jobs, c.with_lp, &mut w)?;
    match experiment::sweep_summary(&reports) {
        Some((r, rate)) => eprintln!("summary: r*={r} R={rate}"),
        None => eprintln!("summary: no distinguishable r in range"),
    }
    Ok(())
}

fn table(a: TableArgs) -> Result<(), Failure> {
    let rows = experiment::mceliece_table()?;
    let mut out = io::stdout().lock();
    match a.format {
        FormatArg::Csv => {
            writeln!(out, "{TABLE_CSV_HEADER}")?;
            for row in &rows {
                writeln!(out, "{}", row.csv_line())?;
            }
        }
        FormatArg::Json => {
            for row in &rows {
                writeln!(out, "{}", row.json_line())?;
            }
        }
    }
    Ok(())
}

fn verify_cmd(a: VerifyArgs) -> Result<(), Failure> {
    let names: Vec<&str> = if a.suite == "all" { SUITES.to_vec() } else { vec![a.suite.as_str()] };
    let mut failed = Vec::new();
    let mut out = io::stdout().lock();
    for name in names {
        let rep = verify::run_suite(name, a.seed, a.trials)?;
        for t in &rep.tallies {
            writeln!(out, "{name:<17} {t}")?;
        }
        if !rep.ok() {
            failed.push(name);
        }
    }
    if failed.is_empty() {
        Ok(())
    } else {
        Err(Failure::Invariant(format!("suites failed: {}", failed.join(", "))))
    }
}
