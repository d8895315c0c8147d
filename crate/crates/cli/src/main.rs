//! `chebwidom` command line.

mod commands;
mod config;
mod output;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};

use config::{CliError, Format, RunConfig, DEFAULT_QUAD_ORDER, DEFAULT_TOL};

const EXIT_CODES: &str = "Exit status: 0 success, 1 solver error, 2 bound violation, 3 configuration or input error.
Set CHEBWIDOM_LOG (error, warn, info, debug, trace) for diagnostics on stderr.";

const SERIES_COLUMNS: &str = "CSV columns (one row per set and n, ordered by n):
  set_id             input, or setK for the K-th set of a random corpus
  n                  degree
  log_norm           ln ||T_n||
  widom_factor       ||T_n|| / C(e)^n
  envelope_capacity  (||T_n|| / 2)^(1/n)
  q_n                C(e_n) = C(e) (1 + q_n / n)
  gap_masses         rho_n of each gap, ';'-separated
  *_slack            bound minus quantity for the Schiefermayr, Totik-Widom,
                     lower and upper chain and refined bounds; negative means violated
  passed             all slacks >= -1e-8";

#[derive(Parser)]
#[command(name = "chebwidom", version, about = "Chebyshev polynomials of finite interval unions and their Widom factors", after_help = EXIT_CODES)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, ValueEnum)]
enum FormatArg {
    Json,
    Csv,
}

#[derive(Args, Clone)]
struct Common {
    /// Interval set as inline JSON ({"bands": [[a1, b1], ...]}) or a file path
    #[arg(long)]
    set: Option<String>,
    /// Exchange tolerance on the relative equioscillation defect
    #[arg(long, default_value_t = DEFAULT_TOL)]
    tol: f64,
    /// Equilibrium quadrature order, a power of two >= 256
    #[arg(long = "quad-order", default_value_t = DEFAULT_QUAD_ORDER)]
    quad_order: usize,
    /// Output format
    #[arg(long, value_enum)]
    format: Option<FormatArg>,
    /// Output file, written atomically; stdout when absent
    #[arg(long)]
    out: Option<PathBuf>,
    /// Worker threads
    #[arg(long, default_value_t = 1)]
    jobs: usize,
    /// Seed for random corpora and random Jacobi parameters
    #[arg(long, default_value_t = 0)]
    seed: u64,
}

#[derive(Subcommand)]
enum Command {
    /// Chebyshev polynomial T_n of a set
    #[command(after_help = format!("CSV columns: {}\n\n{EXIT_CODES}", commands::CHEB_CSV))]
    Cheb {
        #[command(flatten)]
        common: Common,
        #[arg(long)]
        n: usize,
    },
    /// Equilibrium measure, capacity, critical points and Parreau-Widom sum
    #[command(after_help = format!("CSV columns: {}\n\n{EXIT_CODES}", commands::POTENTIAL_CSV))]
    Potential {
        #[command(flatten)]
        common: Common,
    },
    /// Bands of the envelope set e_n with their equilibrium masses
    #[command(after_help = format!("CSV columns (one row per band of e_n): {}\n\n{EXIT_CODES}", commands::BANDS_CSV))]
    Bands {
        #[command(flatten)]
        common: Common,
        #[arg(long)]
        n: usize,
    },
    /// Periodic Jacobi spectrum and the discriminant identity certificate
    #[command(after_help = format!("CSV columns: {}\n\n{EXIT_CODES}", commands::JACOBI_CSV))]
    Jacobi {
        #[command(flatten)]
        common: Common,
        /// Parameters as inline JSON ({"p": .., "a": [..], "b": [..]}) or a file path
        #[arg(long)]
        params: Option<String>,
        /// Period of random parameters drawn with --seed when --params is absent
        #[arg(long, default_value_t = 2)]
        period: usize,
    },
    /// Widom factors and bounds for n = 1..n-max on one set
    #[command(after_help = format!("{SERIES_COLUMNS}\n\n{EXIT_CODES}"))]
    Verify {
        #[command(flatten)]
        common: Common,
        #[arg(long = "n-max")]
        n_max: usize,
    },
    /// Widom sweep over a random corpus (or --set) for n = 1..n-max
    #[command(after_help = format!("{SERIES_COLUMNS}\n\n{EXIT_CODES}"))]
    Sweep {
        #[command(flatten)]
        common: Common,
        #[arg(long = "n-max", default_value_t = 40)]
        n_max: usize,
        /// Number of random sets when --set is absent
        #[arg(long, default_value_t = 20)]
        count: usize,
    },
}

fn build_config(c: &Common, n: Option<usize>, n_max: Option<usize>, default_format: Format) -> Result<RunConfig, CliError> {
    if c.jobs == 0 {
        return Err(CliError::config("InvalidJobs", "--jobs must be at least 1"));
    }
    Ok(RunConfig {
        set: c.set.as_deref().map(config::load_set).transpose()?,
        n: config::check_degree("--n", n)?,
        n_max: config::check_degree("--n-max", n_max)?,
        tol: config::check_tol(c.tol)?,
        quad_order: config::check_quad_order(c.quad_order)?,
        format: match c.format {
            Some(FormatArg::Json) => Format::Json,
            Some(FormatArg::Csv) => Format::Csv,
            None => default_format,
        },
        out: c.out.clone(),
        jobs: c.jobs,
        seed: c.seed,
    })
}

fn run(cli: Cli) -> Result<(), CliError> {
    let (cfg, artifact) = match &cli.command {
        Command::Cheb { common, n } => {
            let cfg = build_config(common, Some(*n), None, Format::Json)?;
            let a = commands::cheb(&cfg)?;
            (cfg, a)
        }
        Command::Potential { common } => {
            let cfg = build_config(common, None, None, Format::Json)?;
            let a = commands::potential(&cfg)?;
            (cfg, a)
        }
        Command::Bands { common, n } => {
            let cfg = build_config(common, Some(*n), None, Format::Json)?;
            let a = commands::bands(&cfg)?;
            (cfg, a)
        }
        Command::Jacobi { common, params, period } => {
            let cfg = build_config(common, None, None, Format::Json)?;
            if *period == 0 {
                return Err(CliError::config("InvalidPeriod", "--period must be at least 1"));
            }
            let params = params.as_deref().map(config::load_params).transpose()?;
            let a = commands::jacobi(&cfg, params, *period)?;
            (cfg, a)
        }
        Command::Verify { common, n_max } => {
            let cfg = build_config(common, None, Some(*n_max), Format::Csv)?;
            let a = commands::verify(&cfg)?;
            (cfg, a)
        }
        Command::Sweep { common, n_max, count } => {
            let cfg = build_config(common, None, Some(*n_max), Format::Csv)?;
            let a = commands::sweep(&cfg, *count)?;
            (cfg, a)
        }
    };
    output::emit(&artifact.text, cfg.out_path())?;
    match artifact.violation {
        Some(msg) => Err(CliError::Violation(msg)),
        None => Ok(()),
    }
}

fn main() -> ExitCode {
    env_logger::Builder::from_env(env_logger::Env::new().filter("CHEBWIDOM_LOG")).init();
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { 3 } else { 0 };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
