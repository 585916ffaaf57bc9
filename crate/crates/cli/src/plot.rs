//! SVG envelope plots of a solved trajectory at one (α, β) level.

use std::fmt::Write;

use crate::error::{CliError, Result};
use crate::output::TrajectoryRow;

const WIDTH: f64 = 720.0;
const HEIGHT: f64 = 460.0;
const MARGIN_LEFT: f64 = 70.0;
const MARGIN_RIGHT: f64 = 170.0;
const MARGIN_Y: f64 = 50.0;
/// Grid levels in the CSV carry 12 significant digits.
const LEVEL_TOL: f64 = 1e-9;

/// Parses `0.5`, `1/3` and similar level arguments.
pub fn parse_level(s: &str) -> std::result::Result<f64, String> {
    let v = match s.split_once('/') {
        Some((n, d)) => {
            let n: f64 = n
                .trim()
                .parse()
                .map_err(|_| format!("bad numerator in {s:?}"))?;
            let d: f64 = d
                .trim()
                .parse()
                .map_err(|_| format!("bad denominator in {s:?}"))?;
            n / d
        }
        None => s
            .trim()
            .parse()
            .map_err(|_| format!("not a number: {s:?}"))?,
    };
    if (0.0..=1.0).contains(&v) {
        Ok(v)
    } else {
        Err(format!("level must lie in [0, 1], got {s}"))
    }
}

struct Series {
    label: &'static str,
    color: &'static str,
    dash: Option<&'static str>,
    points: Vec<(f64, f64)>,
}

/// Form plotted when none is requested: the first valid one, else the first.
pub fn default_form(rows: &[TrajectoryRow]) -> Option<String> {
    rows.iter()
        .find(|r| r.valid)
        .or_else(|| rows.first())
        .map(|r| r.form.clone())
}

pub fn render(rows: &[TrajectoryRow], form: Option<&str>, alpha: f64, beta: f64) -> Result<String> {
    let form = match form {
        Some(f) => f.to_string(),
        None => default_form(rows).ok_or_else(|| CliError::Plot("CSV has no rows".into()))?,
    };
    let at = |a: f64, b: f64| -> Vec<&TrajectoryRow> {
        rows.iter()
            .filter(|r| {
                r.form == form
                    && (r.alpha - a).abs() <= LEVEL_TOL
                    && (r.beta - b).abs() <= LEVEL_TOL
            })
            .collect()
    };
    let level = at(alpha, beta);
    if level.is_empty() {
        return Err(CliError::Plot(format!(
            "(alpha, beta) = ({alpha}, {beta}) is not on the grid of form {form}"
        )));
    }
    let crisp = at(1.0, 1.0);

    let pick = |f: fn(&TrajectoryRow) -> f64| level.iter().map(|r| (r.x, f(r))).collect();
    let mut series = vec![
        Series {
            label: "lower left",
            color: "#1f77b4",
            dash: None,
            points: pick(|r| r.lower_left),
        },
        Series {
            label: "lower right",
            color: "#2ca02c",
            dash: None,
            points: pick(|r| r.lower_right),
        },
        Series {
            label: "upper left",
            color: "#9467bd",
            dash: Some("6 4"),
            points: pick(|r| r.upper_left),
        },
        Series {
            label: "upper right",
            color: "#ff7f0e",
            dash: Some("6 4"),
            points: pick(|r| r.upper_right),
        },
    ];
    series.push(Series {
        label: "crisp",
        color: "#d62728",
        dash: Some("2 3"),
        points: crisp.iter().map(|r| (r.x, r.lower_left)).collect(),
    });

    let all = series.iter().flat_map(|s| s.points.iter());
    let (mut x0, mut x1, mut y0, mut y1) = (
        f64::INFINITY,
        f64::NEG_INFINITY,
        f64::INFINITY,
        f64::NEG_INFINITY,
    );
    for &(x, y) in all {
        x0 = x0.min(x);
        x1 = x1.max(x);
        y0 = y0.min(y);
        y1 = y1.max(y);
    }
    if x1 <= x0 {
        x1 = x0 + 1.0;
    }
    if y1 - y0 < 1e-9 {
        y0 -= 0.5;
        y1 += 0.5;
    }
    let pad = 0.05 * (y1 - y0);
    let (y0, y1) = (y0 - pad, y1 + pad);

    let plot_w = WIDTH - MARGIN_LEFT - MARGIN_RIGHT;
    let plot_h = HEIGHT - 2.0 * MARGIN_Y;
    let sx = |x: f64| MARGIN_LEFT + (x - x0) / (x1 - x0) * plot_w;
    let sy = |y: f64| MARGIN_Y + (y1 - y) / (y1 - y0) * plot_h;

    let mut svg = String::new();
    // Writing to a String cannot fail.
    let _ = writeln!(
        svg,
        r#"<svg xmlns="http://www.w3.org/2000/svg" width="{WIDTH}" height="{HEIGHT}" viewBox="0 0 {WIDTH} {HEIGHT}" font-family="sans-serif" font-size="12">"#
    );
    let _ = writeln!(svg, r#"<rect width="100%" height="100%" fill="white"/>"#);
    let _ = writeln!(
        svg,
        r#"<text x="{:.2}" y="24" text-anchor="middle" font-size="14">form ({}), alpha = {}, beta = {}</text>"#,
        MARGIN_LEFT + plot_w / 2.0,
        form.chars().map(String::from).collect::<Vec<_>>().join(","),
        crate::output::fmt12(alpha),
        crate::output::fmt12(beta)
    );
    let _ = writeln!(
        svg,
        r#"<rect x="{MARGIN_LEFT}" y="{MARGIN_Y}" width="{plot_w}" height="{plot_h}" fill="none" stroke="black"/>"#
    );
    for i in 0..=5 {
        let t = i as f64 / 5.0;
        let (xv, yv) = (x0 + t * (x1 - x0), y0 + t * (y1 - y0));
        let (px, py) = (sx(xv), sy(yv));
        let bottom = MARGIN_Y + plot_h;
        let _ = writeln!(
            svg,
            r#"<line x1="{px:.2}" y1="{bottom:.2}" x2="{px:.2}" y2="{:.2}" stroke="black"/><text x="{px:.2}" y="{:.2}" text-anchor="middle">{}</text>"#,
            bottom + 5.0,
            bottom + 20.0,
            tick(xv)
        );
        let _ = writeln!(
            svg,
            r#"<line x1="{:.2}" y1="{py:.2}" x2="{MARGIN_LEFT}" y2="{py:.2}" stroke="black"/><text x="{:.2}" y="{:.2}" text-anchor="end">{}</text>"#,
            MARGIN_LEFT - 5.0,
            MARGIN_LEFT - 8.0,
            py + 4.0,
            tick(yv)
        );
    }
    let _ = writeln!(
        svg,
        r#"<text x="{:.2}" y="{:.2}" text-anchor="middle">x</text>"#,
        MARGIN_LEFT + plot_w / 2.0,
        HEIGHT - 10.0
    );
    let _ = writeln!(
        svg,
        r#"<text x="16" y="{:.2}" text-anchor="middle" transform="rotate(-90 16 {:.2})">value</text>"#,
        MARGIN_Y + plot_h / 2.0,
        MARGIN_Y + plot_h / 2.0
    );

    for (i, s) in series.iter().enumerate() {
        let pts: Vec<String> = s
            .points
            .iter()
            .map(|&(x, y)| format!("{:.2},{:.2}", sx(x), sy(y)))
            .collect();
        let dash = s
            .dash
            .map(|d| format!(r#" stroke-dasharray="{d}""#))
            .unwrap_or_default();
        let _ = writeln!(
            svg,
            r#"<polyline fill="none" stroke="{}" stroke-width="1.5"{dash} points="{}"/>"#,
            s.color,
            pts.join(" ")
        );
        let ly = MARGIN_Y + 10.0 + 20.0 * i as f64;
        let lx = WIDTH - MARGIN_RIGHT + 15.0;
        let _ = writeln!(
            svg,
            r#"<line x1="{lx:.2}" y1="{ly:.2}" x2="{:.2}" y2="{ly:.2}" stroke="{}" stroke-width="1.5"{dash}/><text x="{:.2}" y="{:.2}">{}</text>"#,
            lx + 30.0,
            s.color,
            lx + 36.0,
            ly + 4.0,
            s.label
        );
    }
    svg.push_str("</svg>\n");
    Ok(svg)
}

fn tick(v: f64) -> String {
    let s = format!("{v:.3}");
    let s = s.trim_end_matches('0').trim_end_matches('.');
    if s == "-0" {
        "0".into()
    } else {
        s.into()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn row(x: f64, beta: f64, alpha: f64, v: [f64; 4]) -> TrajectoryRow {
        TrajectoryRow {
            x,
            beta,
            alpha,
            lower_left: v[0],
            lower_right: v[1],
            upper_left: v[2],
            upper_right: v[3],
            form: "11".into(),
            valid: true,
        }
    }

    fn sample() -> Vec<TrajectoryRow> {
        let mut rows = Vec::new();
        for x in [0.0, 0.5, 1.0] {
            rows.push(row(
                x,
                0.5,
                0.333333333333,
                [1.0 + x, 2.0 + x, 0.5 + x, 2.5 + x],
            ));
            rows.push(row(x, 1.0, 1.0, [1.5 + x; 4]));
        }
        rows
    }

    #[test]
    fn levels_parse() {
        assert_eq!(parse_level("1/3").unwrap(), 1.0 / 3.0);
        assert_eq!(parse_level("0.5").unwrap(), 0.5);
        assert!(parse_level("2").is_err());
        assert!(parse_level("a/3").is_err());
    }

    #[test]
    fn five_curves() {
        let svg = render(&sample(), None, 1.0 / 3.0, 0.5).unwrap();
        assert_eq!(svg.matches("<polyline").count(), 5);
        assert!(svg.contains(">x</text>") && svg.contains(">value</text>"));
        assert_eq!(svg, render(&sample(), None, 1.0 / 3.0, 0.5).unwrap());
    }

    #[test]
    fn missing_level_is_an_error() {
        assert!(render(&sample(), None, 0.25, 0.5).is_err());
        assert!(render(&sample(), Some("22"), 1.0 / 3.0, 0.5).is_err());
    }
}
