//! Problem files.
//!
//! ```toml
//! [equation]
//! a = { mode = "plus", k = 3.0 }
//! b = { mode = "hminus", k = 1.0 }
//!
//! [init]
//! y0 = [3.5, 4.0, 4.5, 5.0, 5.5, 6.0, 6.5]
//! dy0 = [-0.5, 0.0, 0.5, 1.0, 1.5, 2.0, 2.5]
//!
//! [grid]
//! alpha_count = 31
//! beta_count = 21
//!
//! [solve]
//! x_end = 1.0
//! dx = 0.001
//! output_dx = 0.05
//! form = "auto"
//! backend = "rk4"
//! ```
//!
//! `grid` and `solve` are optional; missing keys take the library defaults.

use std::ops::Range;
use std::path::{Path, PathBuf};

use serde::Deserialize;
use t2fde::ivp::{Backend, FormSelection, ProblemSpec, TermMode};
use t2fde::{AlphaGrid, BetaGrid, TriangularQT2};
use toml::Spanned;

use crate::error::{CliError, Result};

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct SpecFile {
    equation: Equation,
    init: Init,
    #[serde(default)]
    grid: Grid,
    #[serde(default)]
    solve: Solve,
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct Equation {
    a: Spanned<Term>,
    b: Spanned<Term>,
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct Term {
    mode: Mode,
    k: f64,
}

#[derive(Debug, Deserialize)]
#[serde(rename_all = "lowercase")]
enum Mode {
    Plus,
    Hminus,
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct Init {
    y0: Spanned<[f64; 7]>,
    dy0: Spanned<[f64; 7]>,
}

#[derive(Debug, Default, Deserialize)]
#[serde(deny_unknown_fields)]
struct Grid {
    alpha_count: Option<Spanned<usize>>,
    beta_count: Option<Spanned<usize>>,
}

#[derive(Debug, Default, Deserialize)]
#[serde(deny_unknown_fields)]
struct Solve {
    x_end: Option<f64>,
    dx: Option<f64>,
    output_dx: Option<f64>,
    form: Option<Spanned<String>>,
    backend: Option<Spanned<String>>,
    threads: Option<usize>,
}

pub fn parse_form(s: &str) -> std::result::Result<FormSelection, String> {
    if s == "auto" {
        return Ok(FormSelection::Auto);
    }
    s.parse()
        .map(FormSelection::Fixed)
        .map_err(|_| format!("form must be auto, 11, 12, 21 or 22, got {s:?}"))
}

pub fn parse_backend(s: &str) -> std::result::Result<Backend, String> {
    match s {
        "rk4" => Ok(Backend::Rk4),
        "closed" | "closed_form" => Ok(Backend::ClosedForm),
        _ => Err(format!("backend must be rk4 or closed, got {s:?}")),
    }
}

struct Source<'a> {
    path: &'a Path,
    text: &'a str,
}

impl Source<'_> {
    fn error(&self, span: Option<Range<usize>>, message: impl Into<String>) -> CliError {
        let offset = span.map_or(0, |s| s.start).min(self.text.len());
        let before = &self.text[..offset];
        let line = before.matches('\n').count() + 1;
        let column = before.len() - before.rfind('\n').map_or(0, |i| i + 1) + 1;
        CliError::Spec {
            path: PathBuf::from(self.path),
            line,
            column,
            message: message.into(),
        }
    }
}

pub fn load(path: &Path) -> Result<ProblemSpec> {
    let text = std::fs::read_to_string(path).map_err(CliError::io(path))?;
    parse(path, &text)
}

/// Parses problem text; `path` is only used in diagnostics.
pub fn parse(path: &Path, text: &str) -> Result<ProblemSpec> {
    let src = Source { path, text };
    let file: SpecFile = toml::from_str(text).map_err(|e| src.error(e.span(), e.message()))?;

    let term = |t: &Spanned<Term>, name: &str| {
        let inner = t.get_ref();
        let mode = match inner.mode {
            Mode::Plus => TermMode::PlusScaled(inner.k),
            Mode::Hminus => TermMode::HukuharaMinusScaled(inner.k),
        };
        mode.validate(name)
            .map(|_| mode)
            .map_err(|e| src.error(Some(t.span()), e.to_string()))
    };
    let shape = |v: &Spanned<[f64; 7]>| {
        TriangularQT2::new(*v.get_ref()).map_err(|e| src.error(Some(v.span()), e.to_string()))
    };

    let mut spec = ProblemSpec::new(
        term(&file.equation.a, "a")?,
        term(&file.equation.b, "b")?,
        shape(&file.init.y0)?,
        shape(&file.init.dy0)?,
    );

    if let Some(n) = &file.grid.alpha_count {
        spec.alpha =
            AlphaGrid::new(*n.get_ref()).map_err(|e| src.error(Some(n.span()), e.to_string()))?;
    }
    if let Some(n) = &file.grid.beta_count {
        spec.beta = BetaGrid::uniform(*n.get_ref())
            .map_err(|e| src.error(Some(n.span()), e.to_string()))?;
    }

    let s = &file.solve;
    spec.x_end = s.x_end.unwrap_or(spec.x_end);
    spec.dx = s.dx.unwrap_or(spec.dx);
    spec.output_dx = s.output_dx.unwrap_or(spec.output_dx);
    spec.threads = s.threads;
    if let Some(f) = &s.form {
        spec.form = parse_form(f.get_ref()).map_err(|e| src.error(Some(f.span()), e))?;
    }
    if let Some(b) = &s.backend {
        spec.backend = parse_backend(b.get_ref()).map_err(|e| src.error(Some(b.span()), e))?;
    }
    let solve_span = text.find("[solve]").map(|i| i..i + 1);
    spec.validate()
        .map_err(|e| src.error(solve_span, e.to_string()))?;
    Ok(spec)
}
