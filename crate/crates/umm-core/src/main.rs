use std::io::Write;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use umm_core::cli::{run, Command, ConfigError, RunConfig, RunError};

/// Large-N unitary matrix models: exact recursions, Hurwitz counts and Monte Carlo checks.
///
/// Every command reads an optional JSON config and then `key=value` overrides,
/// e.g. `umm hurwitz g=0 d=1` or `umm master-field --config c.json p='b1 u1 b2 u1^-1'`.
/// Shorthands: p, V, t, g, d, m, N. Dotted keys reach nested fields (`ensemble.samples=500`).
#[derive(Parser, Debug)]
#[command(name = "umm", version)]
struct Cli {
    #[command(subcommand)]
    command: Sub,
}

#[derive(Subcommand, Debug)]
enum Sub {
    /// Run the command named in a config file.
    Run(RunArgs),
    /// Coefficients of the master field on a polynomial.
    MasterField(RunArgs),
    /// Higher-order, higher-genus correlators.
    TauKg(RunArgs),
    /// Genus-expanded free energy of the potential.
    FreeEnergy(RunArgs),
    /// HCIZ free energy by recursion and by Hurwitz numbers.
    Hciz(RunArgs),
    /// Monotone double Hurwitz numbers.
    Hurwitz(RunArgs),
    /// Monte Carlo cumulants of traces.
    McCumulants(RunArgs),
    /// Monte Carlo cumulants against the exact expansion.
    McValidate(RunArgs),
    /// Limiting variance of a selfadjoint trace.
    Clt(RunArgs),
    /// The full acceptance suite.
    Validate(RunArgs),
    /// Apply one calculus operator to a polynomial.
    ApplyOp(RunArgs),
}

#[derive(Args, Debug)]
struct RunArgs {
    /// JSON run config.
    #[arg(short, long)]
    config: Option<PathBuf>,
    /// Write the JSON report here instead of stdout.
    #[arg(long)]
    json: Option<PathBuf>,
    /// Write the CSV rows here.
    #[arg(long)]
    csv: Option<PathBuf>,
    /// Print the resolved config and exit.
    #[arg(long)]
    print_config: bool,
    /// `key=value` overrides applied after the config file.
    overrides: Vec<String>,
}

impl Sub {
    fn split(self) -> (Option<Command>, RunArgs) {
        match self {
            Sub::Run(a) => (None, a),
            Sub::MasterField(a) => (Some(Command::MasterField), a),
            Sub::TauKg(a) => (Some(Command::TauKg), a),
            Sub::FreeEnergy(a) => (Some(Command::FreeEnergy), a),
            Sub::Hciz(a) => (Some(Command::Hciz), a),
            Sub::Hurwitz(a) => (Some(Command::Hurwitz), a),
            Sub::McCumulants(a) => (Some(Command::McCumulants), a),
            Sub::McValidate(a) => (Some(Command::McValidate), a),
            Sub::Clt(a) => (Some(Command::Clt), a),
            Sub::Validate(a) => (Some(Command::Validate), a),
            Sub::ApplyOp(a) => (Some(Command::ApplyOp), a),
        }
    }
}

fn execute(command: Option<Command>, args: RunArgs) -> Result<bool, RunError> {
    if command.is_none() && args.config.is_none() {
        return Err(ConfigError::Field { field: "config".into(), message: "`run` needs --config".into() }.into());
    }
    let mut config = RunConfig::load(args.config.as_deref(), command, &args.overrides)?;
    if args.json.is_some() {
        config.output.json = args.json;
    }
    if args.csv.is_some() {
        config.output.csv = args.csv;
    }
    if args.print_config {
        println!("{}", config.to_json());
        return Ok(true);
    }
    let report = run(&config)?;
    report.write_files(config.output.json.as_deref(), config.output.csv.as_deref())?;
    if config.output.json.is_none() {
        let mut out = std::io::stdout().lock();
        writeln!(out, "{}", report.to_json())?;
    }
    for c in &report.checks {
        eprintln!("{} {}: {}", if c.passed { "PASS" } else { "FAIL" }, c.name, c.detail);
    }
    Ok(report.passed())
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let (command, args) = cli.command.split();
    match execute(command, args) {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(1),
        Err(e) => {
            eprintln!("umm: {e}");
            ExitCode::from(e.exit_code())
        }
    }
}
