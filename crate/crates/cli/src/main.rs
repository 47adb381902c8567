use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};
use liouville_cli::{analyze, builtins, export, CliError, THREADS_ENV};

#[derive(Parser)]
#[command(name = "liouville", version, about = "Liouville-type analysis of Fourier multipliers and Levy generators")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Run every analysis of a scenario and write report.json.
    Analyze {
        scenario: PathBuf,
        #[arg(long, default_value = ".")]
        out: PathBuf,
        /// Overrides the scenario's seed.
        #[arg(long)]
        seed: Option<u64>,
    },
    /// List built-in symbols, growth families and witness kinds.
    Builtins {
        #[arg(long)]
        json: bool,
    },
    /// Write plot CSVs for the selected analyses of a report.
    Export {
        report: PathBuf,
        /// `all`, an analysis kind such as `zero_set`, or an analysis index.
        selector: String,
        #[arg(long, default_value = ".")]
        out: PathBuf,
    },
}

fn init_threads() -> Result<(), CliError> {
    let Ok(raw) = std::env::var(THREADS_ENV) else {
        return Ok(());
    };
    let n: usize = raw
        .parse()
        .map_err(|_| CliError::Invalid { path: THREADS_ENV.into(), message: format!("`{raw}` is not a thread count") })?;
    rayon::ThreadPoolBuilder::new()
        .num_threads(n)
        .build_global()
        .map_err(|e| CliError::Execution(e.to_string()))
}

fn run(cli: Cli) -> Result<i32, CliError> {
    init_threads()?;
    match cli.command {
        Command::Analyze { scenario, out, seed } => {
            let (report, path) = analyze(&scenario, &out, seed)?;
            for a in &report.analyses {
                println!("[{}] {}: {}", a.index, a.analysis, a.summary);
            }
            println!("report written to {}", path.display());
            Ok(if report.all_completed() { 0 } else { 3 })
        }
        Command::Builtins { json } => {
            let c = builtins::catalog();
            if json {
                println!("{}", serde_json::to_string_pretty(&c).expect("catalog serializes"));
            } else {
                print!("{}", builtins::render_text(&c));
            }
            Ok(0)
        }
        Command::Export { report, selector, out } => {
            let text = std::fs::read_to_string(&report).map_err(|e| CliError::Io(format!("{}: {e}", report.display())))?;
            let value: serde_json::Value = serde_json::from_str(&text).map_err(|e| CliError::Schema {
                path: report.display().to_string(),
                message: e.to_string(),
            })?;
            for p in export::export(&value, &selector, &out)? {
                println!("{}", p.display());
            }
            Ok(0)
        }
    }
}

fn main() -> ExitCode {
    match run(Cli::parse()) {
        Ok(code) => ExitCode::from(code as u8),
        Err(e) => {
            eprintln!("liouville: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
