use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};

use eqmodel::cli::{self, Backend, CheckOptions, CliError, Outcome};
use eqmodel::xmodel::Variant;

#[derive(Parser)]
#[command(name = "eqmodel", version, about = "Exact twisted models of torus bundles and their local systems")]
struct Args {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Semisimple characters and constant twist of a representation
    Ssify {
        file: PathBuf,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Cohomology of the torus with coefficients in a representation
    T2Cohomology {
        file: PathBuf,
        #[arg(long, value_enum, default_value = "both")]
        backend: Backend,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Reproduce the worked examples and the model comparisons
    CheckPaper {
        /// a1,b1,a2,b2
        #[arg(long)]
        params: Option<String>,
        /// e.g. "(1,1,0,0);(0,0,1,1)"
        #[arg(long)]
        relations: Option<String>,
        #[arg(long)]
        bound: Option<u32>,
        #[arg(long)]
        variant: Option<Variant>,
        #[arg(long)]
        out: Option<PathBuf>,
    },
}

fn read(path: &PathBuf) -> Result<String, CliError> {
    std::fs::read_to_string(path).map_err(|e| CliError::domain(format!("{}: {e}", path.display())))
}

fn run(command: Command) -> Result<(Outcome, Option<PathBuf>), CliError> {
    match command {
        Command::Ssify { file, out } => Ok((cli::cmd_ssify(&read(&file)?)?, out)),
        Command::T2Cohomology { file, backend, out } => Ok((cli::cmd_t2_cohomology(&read(&file)?, backend)?, out)),
        Command::CheckPaper { params, relations, bound, variant, out } => {
            let mut opts = CheckOptions::default();
            if let Some(p) = params {
                opts.params = cli::parse_params(&p)?;
            }
            if let Some(r) = relations {
                opts.relations = cli::parse_relations(&r)?;
            }
            if let Some(b) = bound {
                opts.bound = b;
            }
            if let Some(v) = variant {
                opts.variants = vec![v];
            }
            Ok((cli::cmd_check_paper(&opts)?, out))
        }
    }
}

fn main() -> ExitCode {
    let args = Args::parse();
    match run(args.command) {
        Ok((outcome, out)) => {
            for line in &outcome.lines {
                eprintln!("{line}");
            }
            let text = cli::render_json(&outcome.json);
            match out {
                Some(path) => {
                    if let Err(e) = std::fs::write(&path, text) {
                        eprintln!("error: {}: {e}", path.display());
                        return ExitCode::from(cli::EXIT_DOMAIN as u8);
                    }
                }
                None => print!("{text}"),
            }
            ExitCode::from(outcome.code as u8)
        }
        Err(e) => {
            eprintln!("error: {}", e.message);
            ExitCode::from(e.code as u8)
        }
    }
}
