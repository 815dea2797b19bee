use std::fs::File;
use std::io::{self, BufWriter, Write};
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};

use qdsym::check::{CheckOptions, DEFAULT_MU_GRID};
use qdsym::cli::{self, EXIT_CONFIG};
use qdsym::config::RunConfig;
use qdsym::{Error, Result};

#[derive(Parser)]
#[command(
    name = "qdsym",
    version,
    about = "Noiseless codes from S_μU(2) dynamical symmetry"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
    #[command(flatten)]
    common: Common,
}

#[derive(Subcommand)]
enum Command {
    /// Invariant register states and method agreement.
    Invariants,
    /// Evolve invariant and control states against the bath.
    Evolve,
    /// Kraus certificate of the configured code.
    Kraus,
    /// Run the full property suite.
    Check,
}

#[derive(Args)]
struct Common {
    /// Configuration file (key=value lines).
    #[arg(long, global = true)]
    config: Option<PathBuf>,
    /// Deformation parameter(s), comma separated.
    #[arg(long, global = true, allow_hyphen_values = true)]
    mu: Option<String>,
    #[arg(long, global = true)]
    qubits: Option<usize>,
    /// recurrence or enveloping.
    #[arg(long, global = true)]
    strategy: Option<String>,
    /// Evaluation time for `kraus`.
    #[arg(long, global = true)]
    time: Option<f64>,
    /// Output CSV path (standard output when absent).
    #[arg(long, global = true)]
    out: Option<PathBuf>,
    #[arg(long, global = true)]
    seed: Option<u64>,
}

fn load(common: &Common) -> Result<RunConfig> {
    let mut cfg = match &common.config {
        Some(path) => {
            let text = std::fs::read_to_string(path)
                .map_err(|e| Error::Config(format!("{}: {e}", path.display())))?;
            RunConfig::parse(&text)?
        }
        None => RunConfig::default(),
    };
    if let Some(mu) = &common.mu {
        cfg.set("mu", mu)?;
    }
    if let Some(q) = common.qubits {
        cfg.qubits = q;
    }
    if let Some(s) = &common.strategy {
        cfg.set("strategy", s)?;
    }
    if let Some(t) = common.time {
        cfg.time = t;
    }
    if let Some(out) = &common.out {
        cfg.output = Some(out.clone());
    }
    if let Some(seed) = common.seed {
        cfg.seed = seed;
    }
    cfg.validate()?;
    Ok(cfg)
}

fn run(args: &Cli) -> Result<i32> {
    if let Command::Check = args.command {
        let mu_grid = if args.common.mu.is_some() || args.common.config.is_some() {
            let mut cfg = RunConfig::default();
            if let Some(path) = &args.common.config {
                let text = std::fs::read_to_string(path)
                    .map_err(|e| Error::Config(format!("{}: {e}", path.display())))?;
                cfg = RunConfig::parse(&text)?;
            }
            if let Some(mu) = &args.common.mu {
                cfg.set("mu", mu)?;
            }
            cfg.mu
        } else {
            DEFAULT_MU_GRID.to_vec()
        };
        let opts = CheckOptions {
            mu_grid,
            seed: args.common.seed.unwrap_or(1),
            fault: None,
        };
        return cli::cmd_check(&opts, &mut io::stdout().lock());
    }

    let cfg = load(&args.common)?;
    let stdout = io::stdout();
    let stderr = io::stderr();
    let (mut csv, mut status): (Box<dyn Write>, Box<dyn Write>) = match &cfg.output {
        Some(path) => (
            Box::new(BufWriter::new(File::create(path)?)),
            Box::new(stdout.lock()),
        ),
        None => (Box::new(stdout.lock()), Box::new(stderr.lock())),
    };
    let code = match args.command {
        Command::Invariants => cli::cmd_invariants(&cfg, &mut csv, &mut status)?,
        Command::Evolve => cli::cmd_evolve(&cfg, &mut csv, &mut status)?,
        Command::Kraus => cli::cmd_kraus(&cfg, &mut csv, &mut status)?,
        Command::Check => unreachable!("handled above"),
    };
    csv.flush()?;
    Ok(code)
}

fn main() -> ExitCode {
    let args = match Cli::try_parse() {
        Ok(a) => a,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(if e.use_stderr() { EXIT_CONFIG as u8 } else { 0 });
        }
    };
    match run(&args) {
        Ok(code) => ExitCode::from(code as u8),
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(cli::exit_code(&e) as u8)
        }
    }
}
