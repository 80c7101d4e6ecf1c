//! Run directories and the files written into them.

use std::fmt::Write as _;
use std::fs;
use std::path::{Path, PathBuf};

use serde_json::Value;
use vans_core::vans::TrajectoryRecord;

use crate::error::CliError;

/// Creates `dir`, refusing to reuse an existing path so earlier runs are
/// never overwritten.
pub fn create_run_dir(dir: &Path) -> Result<(), CliError> {
    if dir.exists() {
        return Err(CliError::Config(format!(
            "output directory {} already exists",
            dir.display()
        )));
    }
    if let Some(parent) = dir.parent().filter(|p| !p.as_os_str().is_empty()) {
        fs::create_dir_all(parent).map_err(|e| io_error(parent, e))?;
    }
    fs::create_dir(dir).map_err(|e| io_error(dir, e))
}

/// Default location when neither `--out` nor the config names one.
pub fn default_run_dir(command: &str) -> PathBuf {
    let secs = std::time::SystemTime::now()
        .duration_since(std::time::UNIX_EPOCH)
        .map(|d| d.as_secs())
        .unwrap_or(0);
    let base = PathBuf::from("runs");
    let mut dir = base.join(format!("{command}-{secs}"));
    let mut k = 1;
    while dir.exists() {
        dir = base.join(format!("{command}-{secs}-{k}"));
        k += 1;
    }
    dir
}

pub fn write_file(path: &Path, contents: &str) -> Result<(), CliError> {
    fs::write(path, contents).map_err(|e| io_error(path, e))
}

pub fn write_json(path: &Path, value: &Value) -> Result<(), CliError> {
    let mut text = serde_json::to_string_pretty(value).expect("JSON values serialize");
    text.push('\n');
    write_file(path, &text)
}

fn io_error(path: &Path, e: std::io::Error) -> CliError {
    CliError::Config(format!("{}: {e}", path.display()))
}

/// Whitespace-separated columns with a commented header, for gnuplot.
pub fn trajectory_dat(initial_cost: f64, records: &[TrajectoryRecord]) -> String {
    let mut out = String::from("# outer_iter cost n_cnots n_params accepted incumbent\n");
    let mut incumbent = initial_cost;
    for r in records {
        if r.accepted {
            incumbent = r.cost;
        }
        writeln!(
            out,
            "{} {:.16e} {} {} {} {:.16e}",
            r.outer_iter,
            r.cost,
            r.n_cnots,
            r.n_params,
            u8::from(r.accepted),
            incumbent
        )
        .expect("writing to a String cannot fail");
    }
    out
}

/// Rows of numbers as a gnuplot data file.
pub fn table_dat(header: &[&str], rows: &[Vec<f64>]) -> String {
    let mut out = format!("# {}\n", header.join(" "));
    for row in rows {
        let cols: Vec<String> = row.iter().map(|x| format!("{x:.16e}")).collect();
        out.push_str(&cols.join(" "));
        out.push('\n');
    }
    out
}

/// Rows of numbers as CSV.
pub fn table_csv(header: &[&str], rows: &[Vec<f64>]) -> String {
    let mut out = header.join(",");
    out.push('\n');
    for row in rows {
        let cols: Vec<String> = row
            .iter()
            .map(|x| {
                if x.fract() == 0.0 && x.abs() < 1e15 {
                    format!("{x:.0}")
                } else {
                    format!("{x:.16e}")
                }
            })
            .collect();
        out.push_str(&cols.join(","));
        out.push('\n');
    }
    out
}

/// JSON number, or null for non-finite values.
pub fn num(x: f64) -> Value {
    serde_json::Number::from_f64(x).map_or(Value::Null, Value::Number)
}
