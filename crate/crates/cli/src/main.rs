use std::path::PathBuf;
use std::process::ExitCode;

use cbcfd_core::study::{render_markdown, run_study, write_outputs, RunConfig};
use cbcfd_core::Error;
use clap::{Args, Parser, Subcommand};

const EXIT_IO: u8 = 1;
const EXIT_CONFIG: u8 = 2;
const EXIT_SOLVER: u8 = 3;

/// Grid-refinement studies for compact and classical block-centered schemes.
#[derive(Parser, Debug)]
#[command(name = "cbcfd", version, about)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Run a convergence study and write convergence.csv, convergence.md and loglog.dat.
    Run(RunArgs),
}

/// Every flag overrides the same key from `--config`; unset keys keep their defaults.
#[derive(Args, Debug)]
struct RunArgs {
    /// Flat `key = value` file applied before the flags below.
    #[arg(long)]
    config: Option<PathBuf>,
    /// `example1`, `example2` or a path to a custom problem file [default: example1].
    #[arg(long)]
    problem: Option<String>,
    /// `cbcfd`, `bcfd` or `both` [default: cbcfd].
    #[arg(long)]
    scheme: Option<String>,
    /// Strictly increasing, comma-separated cell counts per axis [default: 20,40,80].
    #[arg(long)]
    grids: Option<String>,
    /// Time step rule `h^q` or `c*h^q` [default: h^2].
    #[arg(long = "dt-rule")]
    dt_rule: Option<String>,
    /// Final time [default: 1].
    #[arg(long = "T", allow_hyphen_values = true)]
    final_time: Option<String>,
    /// `derived` or `printed` [default: derived].
    #[arg(long)]
    forcing: Option<String>,
    /// Output directory [default: out].
    #[arg(long)]
    out: Option<String>,
}

impl RunArgs {
    fn resolve(&self) -> Result<RunConfig, Error> {
        let mut cfg = match &self.config {
            Some(path) => {
                let text = std::fs::read_to_string(path).map_err(|e| Error::Config {
                    field: "config".into(),
                    message: format!("{}: {e}", path.display()),
                })?;
                RunConfig::from_config_text(&text)?
            }
            None => RunConfig::default(),
        };
        let overrides = [
            ("problem", &self.problem),
            ("scheme", &self.scheme),
            ("grids", &self.grids),
            ("dt-rule", &self.dt_rule),
            ("T", &self.final_time),
            ("forcing", &self.forcing),
            ("out", &self.out),
        ];
        for (key, value) in overrides {
            if let Some(v) = value {
                cfg.set(key, v)?;
            }
        }
        cfg.validate()?;
        Ok(cfg)
    }
}

fn exit_for(e: &Error) -> u8 {
    match e {
        Error::Config { .. } => EXIT_CONFIG,
        Error::Io(_) => EXIT_IO,
        _ => EXIT_SOLVER,
    }
}

fn run(args: &RunArgs) -> Result<u8, Error> {
    let cfg = args.resolve()?;
    log::info!("study {:?} on grids {:?}", cfg.problem, cfg.grids);
    let reports = run_study(&cfg)?;
    for path in write_outputs(&reports, &cfg.out)? {
        log::info!("wrote {}", path.display());
    }
    print!("{}", render_markdown(&reports));
    let mut failed = false;
    for rep in &reports {
        for (n, msg) in rep.failures() {
            eprintln!("error: {} n={n}: {msg}", rep.scheme.label());
            failed = true;
        }
    }
    Ok(if failed { EXIT_SOLVER } else { 0 })
}

fn main() -> ExitCode {
    env_logger::Builder::from_env(env_logger::Env::default().default_filter_or("warn")).init();
    let cli = Cli::parse();
    let code = match &cli.command {
        Command::Run(args) => run(args).unwrap_or_else(|e| {
            eprintln!("error: {e}");
            exit_for(&e)
        }),
    };
    ExitCode::from(code)
}
