use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, ValueEnum};
use orthocurv::{parse_pipeline, run, Command, Format, RunConfig, EXIT_FORMAT};

#[derive(Clone, Copy, ValueEnum)]
enum CommandArg {
    /// Render every selected pipeline's components.
    Compute,
    /// Compare selected pipelines pairwise on seeded samples.
    Verify,
    /// FLAT or NOT FLAT, with a witness component.
    Flatness,
}

#[derive(Clone, Copy, ValueEnum)]
enum FormatArg {
    Text,
    Json,
}

/// Riemann tensor components of diagonal metrics.
///
/// Exit codes: 0 ok or flat, 1 mismatch or not flat, 2 file or format error, 3 domain error.
#[derive(Parser)]
#[command(name = "orthocurv", version)]
struct Args {
    command: CommandArg,
    metric: PathBuf,
    /// Comma-separated subset of closed_form, cartan, oracle, ll, mathpages.
    #[arg(long, alias = "pipeline", value_delimiter = ',')]
    pipelines: Vec<String>,
    #[arg(long, default_value_t = 1e-9)]
    tol: f64,
    #[arg(long, default_value_t = 64)]
    samples: usize,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    #[arg(long, value_enum, default_value = "text")]
    format: FormatArg,
    /// Coordinate names A,B (sectional) or A,B,C,D.
    #[arg(long, value_delimiter = ',', num_args = 1..)]
    component: Option<Vec<String>>,
}

fn config(args: Args) -> Result<RunConfig, orthocurv::CliError> {
    let command = match args.command {
        CommandArg::Compute => Command::Compute,
        CommandArg::Verify => Command::Verify,
        CommandArg::Flatness => Command::Flatness,
    };
    let mut cfg = RunConfig::new(command, args.metric);
    cfg.tol = args.tol;
    cfg.samples = args.samples;
    cfg.seed = args.seed;
    cfg.format = match args.format {
        FormatArg::Text => Format::Text,
        FormatArg::Json => Format::Json,
    };
    cfg.pipelines = args.pipelines.iter().map(|p| parse_pipeline(p)).collect::<Result<_, _>>()?;
    cfg.component = args.component;
    Ok(cfg)
}

fn main() -> ExitCode {
    let result = config(Args::parse()).and_then(|cfg| run(&cfg).map(|o| (cfg.format, o)));
    match result {
        Ok((format, outcome)) => {
            print!("{}", outcome.render(format));
            ExitCode::from(outcome.exit_code as u8)
        }
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code().max(EXIT_FORMAT) as u8)
        }
    }
}
