use std::io::Write;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use hypplane::moduli::TCase;
use hypplane::runner::{self, Command, Example7Mode, ModuliCommand, RunConfig, RunError};

/// Verification runs for hyperbolic planes over cyclic division algebras.
#[derive(Parser, Debug)]
#[command(name = "hypplane", version)]
struct Cli {
    #[command(flatten)]
    global: Global,
    #[command(subcommand)]
    command: Cmd,
}

#[derive(Args, Debug)]
struct Global {
    /// JSON config with seed, tolerance and sample counts
    #[arg(long, global = true)]
    config: Option<PathBuf>,
    #[arg(long, global = true)]
    seed: Option<u64>,
    /// Numeric tolerance for residual checks
    #[arg(long, global = true, allow_negative_numbers = true)]
    tolerance: Option<f64>,
    /// Write the report here instead of stdout
    #[arg(long, global = true)]
    out: Option<PathBuf>,
}

#[derive(Subcommand, Debug)]
enum Cmd {
    /// Cyclic-algebra relations, matrix model and involutions
    Algebra,
    /// Unitary group membership, determinants and isotropic completion
    Unitary,
    /// Class numbers and cusp classification
    Cusps {
        /// Report class number, reduced forms and orbit verdicts for one discriminant
        #[arg(long, allow_hyphen_values = true)]
        disc: Option<i64>,
    },
    /// Signatures and tube-domain actions
    Domains,
    /// The degree-3 division algebra example
    Example7 {
        #[command(subcommand)]
        mode: Option<ExampleCmd>,
    },
    /// Riemann forms, polarization type and lattice splittings
    Moduli {
        #[command(subcommand)]
        sub: Option<ModuliCmd>,
    },
    /// Every suite
    All,
    /// Run a suite by name
    Run {
        #[arg(long)]
        suite: String,
    },
}

#[derive(Subcommand, Debug)]
enum ExampleCmd {
    /// Emit the full certificate
    Verify,
    /// Search for ω in the cubic subfield with N(ω) = 2
    Probe {
        #[arg(long, default_value_t = 3)]
        bound: i64,
    },
}

#[derive(Subcommand, Debug)]
enum ModuliCmd {
    /// Scaled Gram matrix of E on the natural lattice
    Gram {
        #[arg(long)]
        case: TCase,
        #[arg(long, allow_hyphen_values = true)]
        disc: Option<i64>,
        #[command(flatten)]
        quat: Quaternion,
    },
    /// Splitting of the lattice into stable summands
    Split {
        #[arg(long)]
        case: TCase,
        #[command(flatten)]
        quat: Quaternion,
    },
}

#[derive(Args, Debug)]
struct Quaternion {
    /// Quaternion parameter a for cases d2a/d2b
    #[arg(long, default_value_t = 2, allow_hyphen_values = true)]
    a: i64,
    /// Quaternion parameter b for cases d2a/d2b
    #[arg(long, default_value_t = 3, allow_hyphen_values = true)]
    b: i64,
}

fn command(cmd: Cmd) -> Result<Command, RunError> {
    Ok(match cmd {
        Cmd::Algebra => Command::Algebra,
        Cmd::Unitary => Command::Unitary,
        Cmd::Cusps { disc } => Command::Cusps { disc },
        Cmd::Domains => Command::Domains,
        Cmd::Example7 { mode } => Command::Example7(match mode {
            None | Some(ExampleCmd::Verify) => Example7Mode::Verify,
            Some(ExampleCmd::Probe { bound }) => Example7Mode::Probe { bound },
        }),
        Cmd::Moduli { sub } => Command::Moduli(match sub {
            None => ModuliCommand::Suite,
            Some(ModuliCmd::Gram { case, disc, quat }) => ModuliCommand::Gram { case, disc, quaternion: (quat.a, quat.b) },
            Some(ModuliCmd::Split { case, quat }) => ModuliCommand::Split { case, quaternion: (quat.a, quat.b) },
        }),
        Cmd::All => Command::All,
        Cmd::Run { suite } => Command::from_suite(&suite)?,
    })
}

fn execute(cli: Cli) -> Result<i32, RunError> {
    let mut cfg = match &cli.global.config {
        Some(path) => RunConfig::from_file(path)?.0,
        None => RunConfig::default(),
    };
    if let Some(s) = cli.global.seed {
        cfg.seed = s;
    }
    if let Some(t) = cli.global.tolerance {
        cfg.tolerance = t;
    }
    let cmd = command(cli.command)?;
    let report = runner::run(&cmd, &cfg)?;
    let text = report.to_json();
    match &cli.global.out {
        Some(path) => std::fs::write(path, text + "\n").map_err(|e| RunError::Config(format!("{}: {e}", path.display())))?,
        None => {
            let mut stdout = std::io::stdout().lock();
            writeln!(stdout, "{text}").map_err(|e| RunError::Internal(format!("stdout: {e}")))?;
        }
    }
    Ok(report.exit_code())
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match execute(cli) {
        Ok(code) => ExitCode::from(code as u8),
        Err(e) => {
            eprintln!("hypplane: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
