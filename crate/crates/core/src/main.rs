//! `aqg`: load an instance file and run identity suites against it.

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};

use aqg::cli::{
    exit_code, instance_json, load_instance, parse_z_grid, render_json, render_text, run_suite,
    CliError, RunConfig, Suite,
};
use aqg::finqg::BundledInstance;
use aqg::scalars::parse_rational;

#[derive(Parser)]
#[command(
    name = "aqg",
    version,
    about = "Identity checks for algebraic quantum groups"
)]
struct Args {
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Clone, Copy, ValueEnum)]
enum Format {
    Text,
    Json,
}

#[derive(clap::Args)]
struct VerifyArgs {
    file: PathBuf,
    /// hopf, haar, modular, oneparam, identities, duality or all.
    #[arg(long, default_value = "all")]
    suite: String,
    /// Maximal PBW degree for SU_q(2) suites.
    #[arg(long, default_value_t = 6)]
    degree: usize,
    /// Overrides q of an SU_q(2) file, as "num/den".
    #[arg(long)]
    q: Option<String>,
    /// "default" or a comma list of complex numbers, e.g. "0,1,-i,0.5+0.25i".
    #[arg(long, default_value = "default", allow_hyphen_values = true)]
    z_grid: String,
    /// Absolute tolerance for non-exact entries.
    #[arg(long)]
    tolerance: Option<f64>,
    #[arg(long, value_enum, default_value_t = Format::Text)]
    format: Format,
    /// Worker threads; 0 uses every core.
    #[arg(long, default_value_t = 0)]
    jobs: usize,
}

#[derive(Subcommand)]
enum Cmd {
    /// Run a suite against an instance file.
    Verify(VerifyArgs),
    /// Print a bundled finite instance in the instance file format.
    Export {
        /// c_z2, f_z2, c_s3, f_s3 or kac_paljutkin.
        name: String,
    },
}

fn verify(a: VerifyArgs) -> Result<i32, CliError> {
    let suite: Suite = a.suite.parse()?;
    let q =
        a.q.map(|s| {
            parse_rational(&s).map_err(|_| CliError::Config(format!("--q {s:?} is not a rational")))
        })
        .transpose()?;
    let cfg = RunConfig::new(a.degree, parse_z_grid(&a.z_grid)?, a.tolerance)?;
    let jobs = a.jobs;
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(jobs)
        .build()
        .map_err(|e| CliError::Config(format!("--jobs {jobs}: {e}")))?;
    let inst = load_instance(&a.file, q.as_ref())?;
    let report = pool.install(|| run_suite(&inst, suite, &cfg))?;
    let out = match a.format {
        Format::Text => render_text(&inst, &cfg, &report),
        Format::Json => render_json(&inst, &cfg, &report),
    };
    print!("{out}");
    Ok(exit_code(&report))
}

fn main() -> ExitCode {
    let code = match Args::parse().cmd {
        Cmd::Verify(a) => verify(a).unwrap_or_else(|e| {
            eprintln!("error: {e}");
            e.exit_code()
        }),
        Cmd::Export { name } => match BundledInstance::ALL.iter().find(|b| b.name() == name) {
            Some(b) => {
                print!("{}", instance_json(&b.spec()));
                0
            }
            None => {
                eprintln!("error: unknown bundled instance {name:?}");
                2
            }
        },
    };
    ExitCode::from(code as u8)
}
