//! Command implementations behind the `t2fde` binary.

pub mod error;
pub mod output;
pub mod plot;
pub mod spec_file;

use std::io::Write;
use std::path::{Path, PathBuf};

use t2fde::ivp::{self, Backend, FormSelection, FuzzyTrajectory};
use t2fde::suites::{run_suite, Suite, SuiteReport};

pub use error::{CliError, Result};

#[derive(Clone, Debug, Default)]
pub struct SolveOptions {
    /// Artifact base path; `.csv` and `.json` are appended.
    pub out: Option<PathBuf>,
    pub form: Option<FormSelection>,
    pub backend: Option<Backend>,
}

/// `<out>.csv` and `<out>.json` for a base path, defaulting to the spec
/// file's stem in the working directory.
pub fn artifact_paths(spec_path: &Path, out: Option<&Path>) -> (PathBuf, PathBuf) {
    let base = match out {
        Some(p) if matches!(p.extension().and_then(|e| e.to_str()), Some("csv" | "json")) => {
            p.with_extension("")
        }
        Some(p) => p.to_path_buf(),
        None => PathBuf::from(spec_path.file_stem().unwrap_or_default()),
    };
    let with = |ext: &str| {
        let mut s = base.clone().into_os_string();
        s.push(".");
        s.push(ext);
        PathBuf::from(s)
    };
    (with("csv"), with("json"))
}

/// Solves a problem file and writes both artifacts. Returns the
/// trajectories, or `NoAdmissibleForm` once the artifacts are written.
pub fn cmd_solve(
    spec_path: &Path,
    opts: &SolveOptions,
    log: &mut impl Write,
) -> Result<Vec<FuzzyTrajectory>> {
    let mut spec = spec_file::load(spec_path)?;
    if let Some(f) = opts.form {
        spec.form = f;
    }
    if let Some(b) = opts.backend {
        spec.backend = b;
    }
    let trajectories = ivp::solve(&spec)?;

    let (csv_path, json_path) = artifact_paths(spec_path, opts.out.as_deref());
    let rows = output::rows(&trajectories);
    let file = std::fs::File::create(&csv_path).map_err(CliError::io(&csv_path))?;
    output::write_csv(std::io::BufWriter::new(file), &rows).map_err(|source| CliError::Csv {
        path: csv_path.clone(),
        source,
    })?;
    let json = serde_json::to_string_pretty(&output::to_json(&trajectories))
        .expect("plain data serialises");
    std::fs::write(&json_path, json + "\n").map_err(CliError::io(&json_path))?;

    let _ = writeln!(log, "equation: D2Y {} DY {} Y = 0", spec.a, spec.b);
    for t in &trajectories {
        let _ = writeln!(log, "form {} [{}]: {}", t.form, t.backend, t.verdict);
    }
    let _ = writeln!(
        log,
        "wrote {} and {}",
        csv_path.display(),
        json_path.display()
    );

    if trajectories.iter().any(|t| t.verdict.is_admissible()) {
        Ok(trajectories)
    } else {
        Err(CliError::NoAdmissibleForm)
    }
}

pub fn cmd_check(
    suite: Suite,
    seed: u64,
    count: usize,
    log: &mut impl Write,
) -> Result<SuiteReport> {
    let report = run_suite(suite, seed, count);
    let _ = write!(log, "{report}");
    let failed = report.properties.iter().filter(|p| !p.passed()).count();
    if failed == 0 {
        Ok(report)
    } else {
        Err(CliError::CheckFailed(failed))
    }
}

pub fn cmd_plot(csv: &Path, alpha: f64, beta: f64, form: Option<&str>, out: &Path) -> Result<()> {
    let rows = output::read_csv(csv)?;
    let svg = plot::render(&rows, form, alpha, beta)?;
    std::fs::write(out, svg).map_err(CliError::io(out))
}
