use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};

use ferroflow_cli::{cmd_flow, cmd_majorant, cmd_psi4, cmd_verify, CliError, RunConfig};

#[derive(Parser)]
#[command(name = "ferroflow", version, about = "Fermionic RG flows and their Hamilton-Jacobi majorants")]
struct Cli {
    #[command(subcommand)]
    command: Command,
    /// `key = value` configuration file.
    #[arg(long, global = true)]
    config: Option<PathBuf>,
    /// Write the CSV here instead of standard output.
    #[arg(long, global = true)]
    out: Option<PathBuf>,
    #[arg(long, global = true)]
    seed: Option<u64>,
    /// Apply the degree >= 4 projection to the flow.
    #[arg(long, global = true)]
    truncate: bool,
    #[arg(long, global = true)]
    generators: Option<usize>,
    #[arg(long, global = true)]
    alpha: Option<f64>,
    #[arg(long, global = true)]
    steps: Option<usize>,
    #[arg(long = "t-max", global = true)]
    t_max: Option<f64>,
    #[arg(long, hide = true, global = true)]
    corrupt_pfaffian: bool,
}

#[derive(Subcommand)]
enum Command {
    /// Run the invariant battery and print a pass/fail table.
    Verify,
    /// Flow a seeded quartic instance; CSV t,m,F_m.
    Flow,
    /// Compare flowed norms with the quartic majorant; CSV t,m,F_m,phi_m,margin.
    Majorant,
    /// Psi^4 instance summary and desk-scale pipeline.
    Psi4,
}

fn config(cli: &Cli) -> Result<RunConfig, CliError> {
    let mut cfg = match &cli.config {
        Some(path) => RunConfig::from_file(path)?,
        None => RunConfig::default(),
    };
    if let Some(v) = cli.seed {
        cfg.seed = v;
    }
    if let Some(v) = cli.generators {
        cfg.generators = v;
    }
    if let Some(v) = cli.alpha {
        cfg.alpha = Some(v);
    }
    if let Some(v) = cli.steps {
        cfg.steps = v;
    }
    if let Some(v) = cli.t_max {
        cfg.t_max = v;
    }
    if cli.truncate {
        cfg.truncate = true;
    }
    if cli.out.is_some() {
        cfg.output = cli.out.clone();
    }
    cfg.validate()?;
    Ok(cfg)
}

fn emit(cfg: &RunConfig, text: &str) -> Result<(), CliError> {
    match &cfg.output {
        Some(path) => std::fs::write(path, text)?,
        None => print!("{text}"),
    }
    Ok(())
}

fn run(cli: &Cli) -> Result<u8, CliError> {
    let cfg = config(cli)?;
    match cli.command {
        Command::Verify => {
            let report = cmd_verify(&cfg, cli.corrupt_pfaffian)?;
            print!("{}", report.render());
            Ok(if report.passed() { 0 } else { 1 })
        }
        Command::Flow => {
            emit(&cfg, &cmd_flow(&cfg)?)?;
            Ok(0)
        }
        Command::Majorant => {
            let run = cmd_majorant(&cfg)?;
            eprint!("{}", run.report);
            eprintln!("min margin = {:.11e}", run.min_margin);
            emit(&cfg, &run.csv)?;
            Ok(0)
        }
        Command::Psi4 => {
            emit(&cfg, &cmd_psi4(&cfg)?)?;
            Ok(0)
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(&cli) {
        Ok(code) => ExitCode::from(code),
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
