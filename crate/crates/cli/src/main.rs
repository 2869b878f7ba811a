use std::fs::File;
use std::io::{self, BufWriter, Write};
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use gfweno::cases::all_cases;
use gfweno::study::{
    convergence_study, perturbation_study, run_case, scheme_label, write_convergence_csv,
    write_perturbation_csv, write_state_csv, RunOptions,
};
use gfweno::{Error, SchemeId};

const USAGE_ERROR: u8 = 2;
const SOLVER_ERROR: u8 = 3;

/// Well-balanced global-flux WENO schemes for 1D balance laws.
#[derive(Debug, Parser)]
#[command(name = "gfweno", version)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Run one case and write the final state.
    Solve(SolveArgs),
    /// Grid-convergence table for a list of resolutions.
    Converge(ConvergeArgs),
    /// Deviation of a perturbed run from its unperturbed steady state.
    Perturb(PerturbArgs),
    /// Registered benchmark cases.
    ListCases,
    /// Accepted scheme identifiers.
    ListSchemes,
}

#[derive(Debug, Args)]
struct Target {
    #[arg(long = "case")]
    case_id: String,
    #[arg(long = "scheme")]
    scheme_id: String,
}

#[derive(Debug, Args)]
struct SolveArgs {
    #[command(flatten)]
    target: Target,
    #[arg(long)]
    n: usize,
    /// Final time; replaces the case default.
    #[arg(long, conflicts_with = "steady")]
    t_end: Option<f64>,
    /// March until the residual stalls instead of stopping at a final time.
    #[arg(long)]
    steady: bool,
    #[arg(long)]
    cfl: Option<f64>,
    /// Output file; standard output when omitted.
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Debug, Args)]
struct ConvergeArgs {
    #[command(flatten)]
    target: Target,
    /// Comma-separated resolutions, e.g. 20,40,80.
    #[arg(long, value_delimiter = ',', required = true)]
    n_list: Vec<usize>,
    #[arg(long)]
    out: PathBuf,
}

#[derive(Debug, Args)]
struct PerturbArgs {
    #[command(flatten)]
    target: Target,
    #[arg(long)]
    n: usize,
    #[arg(long)]
    t_end: f64,
    #[arg(long)]
    amplitude: f64,
    #[arg(long)]
    out: PathBuf,
}

enum Failure {
    Usage(String),
    Solver(String),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        if e.is_usage() {
            Failure::Usage(e.to_string())
        } else {
            Failure::Solver(e.to_string())
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = match cli.command {
        Command::Solve(args) => solve(args),
        Command::Converge(args) => converge(args),
        Command::Perturb(args) => perturb(args),
        Command::ListCases => list_cases(),
        Command::ListSchemes => list_schemes(),
    };
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(Failure::Usage(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(USAGE_ERROR)
        }
        Err(Failure::Solver(msg)) => {
            eprintln!("solver error: {msg}");
            ExitCode::from(SOLVER_ERROR)
        }
    }
}

fn create(path: &Path) -> Result<BufWriter<File>, Failure> {
    File::create(path)
        .map(BufWriter::new)
        .map_err(|e| Failure::Usage(format!("cannot write {}: {e}", path.display())))
}

fn solve(args: SolveArgs) -> Result<(), Failure> {
    let opts = RunOptions {
        t_end: args.t_end,
        steady: args.steady.then_some(true),
        cfl: args.cfl,
        ..RunOptions::default()
    };
    let run = run_case(&args.target.case_id, &args.target.scheme_id, args.n, &opts)?;
    match &args.out {
        Some(path) => write_state_csv(create(path)?, &run)?,
        None => write_state_csv(io::stdout().lock(), &run)?,
    }
    let errors = match &run.errors {
        Some(e) => e.iter().map(|v| format!("{v:.6e}")).collect::<Vec<_>>().join(" "),
        None => "-".into(),
    };
    eprintln!(
        "{} {} N={} t={:.6} residual={:.3e} converged={} L1={} elapsed={:.3}s",
        run.case,
        run.scheme,
        run.n,
        run.t_final,
        run.residual,
        run.converged,
        errors,
        run.elapsed.as_secs_f64()
    );
    Ok(())
}

fn converge(args: ConvergeArgs) -> Result<(), Failure> {
    let rows = convergence_study(
        &args.target.case_id,
        &args.target.scheme_id,
        &args.n_list,
        &RunOptions::default(),
    )?;
    write_convergence_csv(create(&args.out)?, &rows)?;
    let mut stdout = io::stdout().lock();
    for row in &rows {
        let cells: Vec<String> = row
            .errors
            .iter()
            .zip(&row.orders)
            .map(|(e, o)| match o {
                Some(o) => format!("{e:.3e} ({o:.2})"),
                None => format!("{e:.3e} (-)"),
            })
            .collect();
        writeln!(stdout, "{:>6}  {}", row.n, cells.join("  ")).map_err(io_failure)?;
    }
    Ok(())
}

fn perturb(args: PerturbArgs) -> Result<(), Failure> {
    let trace = perturbation_study(
        &args.target.case_id,
        &args.target.scheme_id,
        args.n,
        args.t_end,
        Some(args.amplitude),
    )?;
    write_perturbation_csv(create(&args.out)?, &trace)?;
    let envelope: Vec<String> = trace.envelope().iter().map(|v| format!("{v:.3e}")).collect();
    println!("max deviation {}", envelope.join(" "));
    Ok(())
}

fn list_cases() -> Result<(), Failure> {
    let mut stdout = io::stdout().lock();
    for spec in all_cases() {
        writeln!(
            stdout,
            "{:<38} N={:<4} {:<12} {}",
            spec.id, spec.default_n, spec.default_scheme, spec.description
        )
        .map_err(io_failure)?;
    }
    Ok(())
}

fn list_schemes() -> Result<(), Failure> {
    let mut stdout = io::stdout().lock();
    for scheme in SchemeId::all() {
        writeln!(stdout, "{:<14} {}", scheme.to_string(), scheme_label(&scheme.kind)).map_err(io_failure)?;
    }
    Ok(())
}

fn io_failure(e: io::Error) -> Failure {
    Failure::Usage(format!("cannot write output: {e}"))
}
