use std::io::{self, Write};
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};
use serde::Serialize;

use subset_metric::cli::{self, MetricKind, EXIT_USAGE};
use subset_metric::{Error, MSpec, Workspace};

#[derive(Parser)]
#[command(name = "subset-metric", version, about = "Distances between finite subsets of a bounded metric space")]
struct Args {
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, ValueEnum)]
enum Format {
    Json,
    Csv,
}

#[derive(Subcommand)]
enum Command {
    /// Distance between two named sets.
    Dist {
        file: PathBuf,
        set_a: String,
        set_b: String,
        /// subset, hausdorff, md, surjective, fair or link.
        #[arg(long, default_value = "subset")]
        metric: MetricKind,
        /// constant:<v>, diameter or eccentricity; overrides the file.
        #[arg(long)]
        m: Option<MSpec>,
        /// Also run the enumeration oracle and report agreement.
        #[arg(long)]
        oracle: bool,
    },
    /// All-pairs distance matrix over the named sets.
    Matrix {
        file: PathBuf,
        #[arg(long, default_value = "subset")]
        metric: MetricKind,
        #[arg(long)]
        m: Option<MSpec>,
        #[arg(long, value_enum, default_value = "json")]
        format: Format,
    },
    /// Check the boundary-weight condition on M and the metric axioms on sampled triples.
    Validate {
        file: PathBuf,
        #[arg(long)]
        m: Option<MSpec>,
        #[arg(long, default_value_t = 100)]
        samples: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
    },
    /// Tabulate the non-convergent Cauchy sequence {0, 1/n} on [0, 1].
    DemoIncompleteness {
        #[arg(long, default_value_t = 10)]
        n_max: usize,
    },
}

fn load(file: &Path, m: Option<&MSpec>) -> Result<Workspace, Error> {
    let mut ws = Workspace::load(file)?;
    if let Some(spec) = m {
        ws.override_m(spec)?;
    }
    for w in &ws.warnings {
        eprintln!("warning: {w}");
    }
    Ok(ws)
}

// A closed pipe (e.g. `| head`) is not an error worth reporting.
fn emit(text: &str) {
    let _ = io::stdout().lock().write_all(text.as_bytes());
}

fn print_json<T: Serialize>(value: &T) {
    emit(&format!("{}\n", serde_json::to_string_pretty(value).expect("reports serialize")));
}

fn run(args: Args) -> Result<i32, Error> {
    match args.command {
        Command::Dist { file, set_a, set_b, metric, m, oracle } => {
            let ws = load(&file, m.as_ref())?;
            let report = cli::cmd_dist(&ws, &set_a, &set_b, metric, oracle)?;
            print_json(&report);
            Ok(report.exit_code())
        }
        Command::Matrix { file, metric, m, format } => {
            let ws = load(&file, m.as_ref())?;
            let report = cli::cmd_matrix(&ws, metric)?;
            match format {
                Format::Json => print_json(&report),
                Format::Csv => emit(&report.to_csv()),
            }
            Ok(cli::EXIT_OK)
        }
        Command::Validate { file, m, samples, seed } => {
            let ws = load(&file, m.as_ref())?;
            let report = cli::cmd_validate(&ws, samples, seed)?;
            print_json(&report);
            Ok(report.exit_code())
        }
        Command::DemoIncompleteness { n_max } => {
            print_json(&cli::cmd_demo_incompleteness(n_max)?);
            Ok(cli::EXIT_OK)
        }
    }
}

fn main() -> ExitCode {
    let args = match Args::try_parse() {
        Ok(args) => args,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(if e.use_stderr() { EXIT_USAGE as u8 } else { 0 });
        }
    };
    match run(args) {
        Ok(code) => ExitCode::from(code as u8),
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(cli::exit_code(&e) as u8)
        }
    }
}
