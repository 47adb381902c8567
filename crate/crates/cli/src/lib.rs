//! Scenario files, the analysis runner, reports and plot-data export for
//! `liouville-core`.

pub mod builtins;
pub mod error;
pub mod export;
pub mod report;
pub mod run;
pub mod scenario;

use std::path::{Path, PathBuf};

pub use error::CliError;
pub use report::{Report, Timing};
pub use run::run_scenario;
pub use scenario::{Analysis, MonteCarlo, Scenario, SimCheck};

/// Environment variable for the worker count; defaults to logical cores.
pub const THREADS_ENV: &str = "LIOUVILLE_THREADS";

pub const REPORT_FILE: &str = "report.json";
pub const TIMING_FILE: &str = "report.timing.json";

/// Loads, runs and writes `report.json` plus `report.timing.json` into
/// `out_dir`.
pub fn analyze(path: &Path, out_dir: &Path, seed: Option<u64>) -> Result<(Report, PathBuf), CliError> {
    let scenario = Scenario::load(path)?;
    let (report, timing) = run_scenario(&scenario, seed);
    std::fs::create_dir_all(out_dir).map_err(|e| CliError::Io(format!("{}: {e}", out_dir.display())))?;
    let report_path = out_dir.join(REPORT_FILE);
    let write = |p: PathBuf, s: String| std::fs::write(&p, s).map_err(|e| CliError::Io(format!("{}: {e}", p.display())));
    write(report_path.clone(), report.to_json())?;
    write(
        out_dir.join(TIMING_FILE),
        serde_json::to_string_pretty(&timing).expect("timing serializes") + "\n",
    )?;
    Ok((report, report_path))
}
