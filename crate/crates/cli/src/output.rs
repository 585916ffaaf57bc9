//! CSV and JSON trajectory artifacts.
//!
//! Every number is rounded to 12 significant digits once, so the CSV text
//! and the JSON document carry exactly the same values.

use std::collections::BTreeMap;
use std::io::Write;
use std::path::Path;

use serde::{Deserialize, Serialize};
use t2fde::ivp::FuzzyTrajectory;
use t2fde::Plane;

use crate::error::{CliError, Result};

pub const CSV_HEADER: [&str; 9] = [
    "x",
    "beta",
    "alpha",
    "lower_left",
    "lower_right",
    "upper_left",
    "upper_right",
    "form",
    "valid",
];

/// Nearest double to `v` rounded to 12 significant digits.
pub fn round12(v: f64) -> f64 {
    let r: f64 = format!("{v:.11e}").parse().expect("formatted float parses");
    if r == 0.0 {
        0.0
    } else {
        r
    }
}

/// Plain decimal text of `round12(v)`, without exponent or trailing zeros.
pub fn fmt12(v: f64) -> String {
    format!("{}", round12(v))
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct TrajectoryRow {
    pub x: f64,
    pub beta: f64,
    pub alpha: f64,
    pub lower_left: f64,
    pub lower_right: f64,
    pub upper_left: f64,
    pub upper_right: f64,
    pub form: String,
    pub valid: bool,
}

/// Rows in form, x, β, α order, already rounded.
pub fn rows(trajectories: &[FuzzyTrajectory]) -> Vec<TrajectoryRow> {
    let mut out = Vec::new();
    for t in trajectories {
        let (ag, bg) = (t.alpha_grid(), t.beta_grid());
        let valid = t.verdict.is_admissible();
        for (i, &x) in t.xs.iter().enumerate() {
            let v = t.value(i);
            for j in 0..bg.count() {
                for k in 0..ag.count() {
                    let (ll, lr) = v.endpoints(Plane::Lower, j, k);
                    let (ul, ur) = v.endpoints(Plane::Upper, j, k);
                    out.push(TrajectoryRow {
                        x: round12(x),
                        beta: round12(bg.level(j)),
                        alpha: round12(ag.level(k)),
                        lower_left: round12(ll),
                        lower_right: round12(lr),
                        upper_left: round12(ul),
                        upper_right: round12(ur),
                        form: t.form.label(),
                        valid,
                    });
                }
            }
        }
    }
    out
}

pub fn write_csv<W: Write>(w: W, rows: &[TrajectoryRow]) -> csv::Result<()> {
    let mut wr = csv::WriterBuilder::new()
        .terminator(csv::Terminator::Any(b'\n'))
        .has_headers(false)
        .from_writer(w);
    wr.write_record(CSV_HEADER)?;
    for r in rows {
        wr.write_record([
            fmt12(r.x),
            fmt12(r.beta),
            fmt12(r.alpha),
            fmt12(r.lower_left),
            fmt12(r.lower_right),
            fmt12(r.upper_left),
            fmt12(r.upper_right),
            r.form.clone(),
            r.valid.to_string(),
        ])?;
    }
    wr.flush()?;
    Ok(())
}

pub fn read_csv(path: &Path) -> Result<Vec<TrajectoryRow>> {
    let csv_err = |source| CliError::Csv {
        path: path.into(),
        source,
    };
    let mut rd = csv::Reader::from_path(path).map_err(csv_err)?;
    let header = rd.headers().map_err(csv_err)?.clone();
    if header.iter().ne(CSV_HEADER) {
        return Err(CliError::Plot(format!(
            "{}: unexpected header {:?}",
            path.display(),
            header.iter().collect::<Vec<_>>()
        )));
    }
    rd.deserialize()
        .collect::<csv::Result<_>>()
        .map_err(csv_err)
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct CutJson {
    pub beta: f64,
    pub alpha: f64,
    pub left: f64,
    pub right: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SampleJson {
    pub x: f64,
    pub lower: Vec<CutJson>,
    pub upper: Vec<CutJson>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct FormJson {
    pub backend: String,
    pub valid: bool,
    pub verdict: String,
    pub samples: Vec<SampleJson>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SolutionJson {
    /// Keyed by form label, e.g. `"12"`.
    pub forms: BTreeMap<String, FormJson>,
}

pub fn to_json(trajectories: &[FuzzyTrajectory]) -> SolutionJson {
    let mut forms = BTreeMap::new();
    for t in trajectories {
        let (ag, bg) = (t.alpha_grid(), t.beta_grid());
        let samples =
            t.xs.iter()
                .enumerate()
                .map(|(i, &x)| {
                    let v = t.value(i);
                    let plane = |p: Plane| {
                        (0..bg.count())
                            .flat_map(|j| (0..ag.count()).map(move |k| (j, k)))
                            .map(|(j, k)| {
                                let (l, r) = v.endpoints(p, j, k);
                                CutJson {
                                    beta: round12(bg.level(j)),
                                    alpha: round12(ag.level(k)),
                                    left: round12(l),
                                    right: round12(r),
                                }
                            })
                            .collect()
                    };
                    SampleJson {
                        x: round12(x),
                        lower: plane(Plane::Lower),
                        upper: plane(Plane::Upper),
                    }
                })
                .collect();
        forms.insert(
            t.form.label(),
            FormJson {
                backend: t.backend.as_str().into(),
                valid: t.verdict.is_admissible(),
                verdict: t.verdict.to_string(),
                samples,
            },
        );
    }
    SolutionJson { forms }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn twelve_digits() {
        assert_eq!(fmt12(1.0 / 3.0), "0.333333333333");
        assert_eq!(fmt12(16.0 / 3.0), "5.33333333333");
        assert_eq!(fmt12(0.05), "0.05");
        assert_eq!(fmt12(-0.0), "0");
        assert_eq!(fmt12(1234567.891234567), "1234567.89123");
        assert_eq!(fmt12(2.5e-13), "0.00000000000025");
    }

    #[test]
    fn decimal_text_parses_back_to_the_rounded_value() {
        for v in [std::f64::consts::PI, -1e-7 / 3.0, 123.456789012345, 6.5] {
            assert_eq!(fmt12(v).parse::<f64>().unwrap(), round12(v));
        }
    }
}
