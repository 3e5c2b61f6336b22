//! Standalone SVG line plots, byte-deterministic for identical inputs.

use std::fs::File;
use std::io::{BufWriter, Write};
use std::path::Path;

use crate::{Error, Result};

/// One labeled curve.
#[derive(Debug, Clone)]
pub struct Series {
    pub label: String,
    pub points: Vec<(f64, f64)>,
}

impl Series {
    pub fn new(label: impl Into<String>, points: Vec<(f64, f64)>) -> Self {
        Self { label: label.into(), points }
    }
}

const WIDTH: f64 = 800.0;
const HEIGHT: f64 = 500.0;
const MARGIN_L: f64 = 70.0;
const MARGIN_R: f64 = 20.0;
const MARGIN_T: f64 = 20.0;
const MARGIN_B: f64 = 50.0;
const PALETTE: [&str; 6] = ["#1f77b4", "#d62728", "#e0b400", "#7b2d8b", "#2ca02c", "#000000"];

/// Write a line plot of the series to `path`.
///
/// Identical inputs produce identical bytes; colors are assigned from a
/// fixed palette in series order and a legend appears when there is more
/// than one series.
pub fn emit_svg(
    series: &[Series],
    x_label: &str,
    y_label: &str,
    path: &Path,
) -> Result<()> {
    if series.is_empty() || series.iter().any(|s| s.points.is_empty()) {
        return Err(Error::Validation("svg plot needs at least one non-empty series".into()));
    }
    for s in series {
        if s.points.iter().any(|(x, y)| !x.is_finite() || !y.is_finite()) {
            return Err(Error::Validation(format!("series '{}' has non-finite points", s.label)));
        }
    }

    let mut x_min = f64::INFINITY;
    let mut x_max = f64::NEG_INFINITY;
    let mut y_min = f64::INFINITY;
    let mut y_max = f64::NEG_INFINITY;
    for s in series {
        for &(x, y) in &s.points {
            x_min = x_min.min(x);
            x_max = x_max.max(x);
            y_min = y_min.min(y);
            y_max = y_max.max(y);
        }
    }
    if x_min == x_max {
        x_min -= 0.5;
        x_max += 0.5;
    }
    if y_min == y_max {
        y_min -= 0.5;
        y_max += 0.5;
    }

    let plot_w = WIDTH - MARGIN_L - MARGIN_R;
    let plot_h = HEIGHT - MARGIN_T - MARGIN_B;
    let sx = |x: f64| MARGIN_L + (x - x_min) / (x_max - x_min) * plot_w;
    let sy = |y: f64| MARGIN_T + (y_max - y) / (y_max - y_min) * plot_h;

    let mut out = BufWriter::new(File::create(path)?);
    writeln!(out, r#"<?xml version="1.0" encoding="UTF-8"?>"#)?;
    writeln!(
        out,
        r#"<svg xmlns="http://www.w3.org/2000/svg" width="{WIDTH}" height="{HEIGHT}" viewBox="0 0 {WIDTH} {HEIGHT}">"#
    )?;
    writeln!(out, r##"<rect width="{WIDTH}" height="{HEIGHT}" fill="#ffffff"/>"##)?;

    // Axes box and tick labels.
    writeln!(
        out,
        r##"<rect x="{MARGIN_L}" y="{MARGIN_T}" width="{plot_w}" height="{plot_h}" fill="none" stroke="#333333" stroke-width="1"/>"##
    )?;
    for k in 0..=4 {
        let fx = k as f64 / 4.0;
        let x = x_min + fx * (x_max - x_min);
        let px = sx(x);
        writeln!(
            out,
            r##"<line x1="{px:.2}" y1="{}" x2="{px:.2}" y2="{}" stroke="#333333" stroke-width="1"/>"##,
            MARGIN_T + plot_h,
            MARGIN_T + plot_h + 5.0
        )?;
        writeln!(
            out,
            r##"<text x="{px:.2}" y="{}" font-family="sans-serif" font-size="12" text-anchor="middle">{}</text>"##,
            MARGIN_T + plot_h + 20.0,
            trim_number(x)
        )?;
        let y = y_min + fx * (y_max - y_min);
        let py = sy(y);
        writeln!(
            out,
            r##"<line x1="{}" y1="{py:.2}" x2="{}" y2="{py:.2}" stroke="#333333" stroke-width="1"/>"##,
            MARGIN_L - 5.0,
            MARGIN_L
        )?;
        writeln!(
            out,
            r##"<text x="{}" y="{py:.2}" font-family="sans-serif" font-size="12" text-anchor="end" dominant-baseline="middle">{}</text>"##,
            MARGIN_L - 9.0,
            trim_number(y)
        )?;
    }
    writeln!(
        out,
        r##"<text x="{:.2}" y="{:.2}" font-family="sans-serif" font-size="14" text-anchor="middle">{}</text>"##,
        MARGIN_L + plot_w / 2.0,
        HEIGHT - 10.0,
        escape(x_label)
    )?;
    writeln!(
        out,
        r##"<text x="16" y="{:.2}" font-family="sans-serif" font-size="14" text-anchor="middle" transform="rotate(-90 16 {:.2})">{}</text>"##,
        MARGIN_T + plot_h / 2.0,
        MARGIN_T + plot_h / 2.0,
        escape(y_label)
    )?;

    for (k, s) in series.iter().enumerate() {
        let color = PALETTE[k % PALETTE.len()];
        let mut coords = String::new();
        for &(x, y) in &s.points {
            coords.push_str(&format!("{:.2},{:.2} ", sx(x), sy(y)));
        }
        writeln!(
            out,
            r#"<polyline points="{}" fill="none" stroke="{color}" stroke-width="1.5"/>"#,
            coords.trim_end()
        )?;
    }

    if series.len() > 1 {
        for (k, s) in series.iter().enumerate() {
            let color = PALETTE[k % PALETTE.len()];
            let y = MARGIN_T + 16.0 + 18.0 * k as f64;
            writeln!(
                out,
                r#"<line x1="{}" y1="{y:.2}" x2="{}" y2="{y:.2}" stroke="{color}" stroke-width="2"/>"#,
                MARGIN_L + 10.0,
                MARGIN_L + 40.0
            )?;
            writeln!(
                out,
                r#"<text x="{}" y="{y:.2}" font-family="sans-serif" font-size="12" dominant-baseline="middle">{}</text>"#,
                MARGIN_L + 46.0,
                escape(&s.label)
            )?;
        }
    }

    writeln!(out, "</svg>")?;
    out.flush()?;
    Ok(())
}

fn escape(s: &str) -> String {
    s.replace('&', "&amp;").replace('<', "&lt;").replace('>', "&gt;")
}

/// Short deterministic tick label.
fn trim_number(x: f64) -> String {
    let s = format!("{x:.4}");
    let s = s.trim_end_matches('0').trim_end_matches('.');
    if s.is_empty() || s == "-" {
        "0".to_string()
    } else {
        s.to_string()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn constant_series_draws_a_horizontal_line() {
        let dir = std::env::temp_dir().join("esi_svg_test_const");
        std::fs::create_dir_all(&dir).unwrap();
        let path = dir.join("const.svg");
        let pts: Vec<(f64, f64)> = (0..20).map(|i| (i as f64, 2.5)).collect();
        emit_svg(&[Series::new("level", pts)], "t", "v", &path).unwrap();
        let text = std::fs::read_to_string(&path).unwrap();
        assert!(text.starts_with("<?xml"));
        assert!(text.contains("<polyline"));
        // All y coordinates of the polyline identical.
        let poly = text.split("<polyline points=\"").nth(1).unwrap();
        let coords = poly.split('"').next().unwrap();
        let ys: Vec<&str> = coords
            .split_whitespace()
            .map(|p| p.split(',').nth(1).unwrap())
            .collect();
        assert!(ys.windows(2).all(|w| w[0] == w[1]));
    }

    #[test]
    fn two_series_get_distinct_colors_and_a_legend() {
        let dir = std::env::temp_dir().join("esi_svg_test_two");
        std::fs::create_dir_all(&dir).unwrap();
        let path = dir.join("two.svg");
        let a: Vec<(f64, f64)> = (0..10).map(|i| (i as f64, i as f64)).collect();
        let b: Vec<(f64, f64)> = (0..10).map(|i| (i as f64, -(i as f64))).collect();
        emit_svg(&[Series::new("up", a), Series::new("down", b)], "x", "y", &path).unwrap();
        let text = std::fs::read_to_string(&path).unwrap();
        assert!(text.contains(PALETTE[0]) && text.contains(PALETTE[1]));
        assert!(text.contains(">up</text>") && text.contains(">down</text>"));
    }

    #[test]
    fn empty_series_is_rejected() {
        let path = std::env::temp_dir().join("never.svg");
        assert!(emit_svg(&[], "x", "y", &path).is_err());
        assert!(emit_svg(&[Series::new("e", vec![])], "x", "y", &path).is_err());
    }

    #[test]
    fn identical_inputs_give_identical_bytes() {
        let dir = std::env::temp_dir().join("esi_svg_test_det");
        std::fs::create_dir_all(&dir).unwrap();
        let pts: Vec<(f64, f64)> = (0..50).map(|i| (i as f64 * 0.1, (i as f64 * 0.3).sin())).collect();
        let p1 = dir.join("a.svg");
        let p2 = dir.join("b.svg");
        emit_svg(&[Series::new("s", pts.clone())], "x", "y", &p1).unwrap();
        emit_svg(&[Series::new("s", pts)], "x", "y", &p2).unwrap();
        assert_eq!(std::fs::read(&p1).unwrap(), std::fs::read(&p2).unwrap());
    }
}
