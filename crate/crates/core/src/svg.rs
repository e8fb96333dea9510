//! Deterministic SVG 1.1 rendering of biplots and comparison maps.
//!
//! Rows are drawn as dots, columns as arrows from the origin (the centroid
//! of the preprocessed data). Both axes share one scale so angles and
//! distances read correctly. Coordinates are printed with two decimals, so
//! identical inputs produce byte-identical documents.

use std::fmt::Write as _;

use crate::biplot::{column_lengths, BiplotModel, QualityReport};
use crate::error::{Error, Result};
use crate::linalg::Matrix;

/// Fraction of the row-marker extent spanned by the longest arrow when no
/// explicit vector scale is given.
pub const DEFAULT_ARROW_SPAN: f64 = 0.4;

const MARGIN: f64 = 60.0;

/// Rendering options.
#[derive(Debug, Clone, PartialEq)]
pub struct PlotSpec {
    pub width: u32,
    pub height: u32,
    /// Display multiplier for column markers; `None` picks one so the
    /// longest arrow spans 40% of the plot half-width.
    pub vector_scale: Option<f64>,
    pub show_labels: bool,
}

impl Default for PlotSpec {
    fn default() -> Self {
        PlotSpec {
            width: 720,
            height: 720,
            vector_scale: None,
            show_labels: true,
        }
    }
}

/// Layers of a 2-D map, in data coordinates.
#[derive(Debug, Clone, Default)]
pub struct Scatter<'a> {
    pub title: String,
    /// n×2 dots.
    pub points: Option<(&'a Matrix, &'a [String])>,
    /// p×2 arrows drawn from the origin (already scaled).
    pub arrows: Option<(&'a Matrix, &'a [String])>,
    /// Secondary point set drawn as squares (e.g. CA column points).
    pub squares: Option<(&'a Matrix, &'a [String])>,
    pub axis_labels: [String; 2],
    pub legend: Vec<String>,
}

/// Renders a fitted two-dimensional biplot.
pub fn render_svg(model: &BiplotModel, quality: &QualityReport, spec: &PlotSpec) -> Result<String> {
    if model.dims() != 2 {
        return Err(Error::input(format!(
            "biplots are drawn in 2 dimensions, model has {}",
            model.dims()
        )));
    }
    let rows = model.row_markers();
    let row_extent = rows.max_abs();
    let longest = column_lengths(model).into_iter().fold(0.0, f64::max);
    let vector_scale = match spec.vector_scale {
        Some(s) if s > 0.0 && s.is_finite() => s,
        Some(s) => {
            return Err(Error::input(format!(
                "vector scale must be positive, got {s}"
            )))
        }
        None if longest > 0.0 && row_extent > 0.0 => DEFAULT_ARROW_SPAN * row_extent / longest,
        None => 1.0,
    };
    let arrows = model.col_markers().scale(vector_scale);
    let shares = model.axis_shares();
    let labels = model.labels();
    let scatter = Scatter {
        title: format!(
            "{} biplot (gamma = {})",
            model.kind().to_string().to_uppercase(),
            model.gamma()
        ),
        points: Some((rows, &labels.rows)),
        arrows: Some((&arrows, &labels.cols)),
        squares: None,
        axis_labels: [
            format!("Axis 1 ({:.1}%)", 100.0 * shares[0]),
            format!("Axis 2 ({:.1}%)", 100.0 * shares[1]),
        ],
        legend: vec![
            format!("goodness of fit {:.1}%", 100.0 * quality.qr_overall),
            format!("vector scale x{vector_scale:.4}"),
        ],
    };
    render_scatter(&scatter, spec)
}

/// Renders arbitrary map layers.
pub fn render_scatter(s: &Scatter<'_>, spec: &PlotSpec) -> Result<String> {
    for (m, labels) in [s.points, s.arrows, s.squares].into_iter().flatten() {
        if m.cols() < 2 || m.rows() != labels.len() {
            return Err(Error::input(format!(
                "map layer is {}x{} with {} labels; need two columns and one label per row",
                m.rows(),
                m.cols(),
                labels.len()
            )));
        }
    }
    let (w, h) = (f64::from(spec.width), f64::from(spec.height));
    let half = ((w.min(h) - 2.0 * MARGIN) / 2.0).max(10.0);
    let (cx, cy) = (w / 2.0, h / 2.0);
    let extent = [s.points, s.arrows, s.squares]
        .into_iter()
        .flatten()
        .map(|(m, _)| m.leading_columns(2).max_abs())
        .fold(0.0, f64::max);
    let extent = if extent > 0.0 { extent * 1.05 } else { 1.0 };
    let px = |x: f64| cx + x / extent * half;
    let py = |y: f64| cy - y / extent * half;

    let mut out = String::new();
    let _ = writeln!(out, r#"<?xml version="1.0" encoding="UTF-8"?>"#);
    let _ = writeln!(
        out,
        r#"<svg xmlns="http://www.w3.org/2000/svg" version="1.1" width="{}" height="{}" viewBox="0 0 {} {}" font-family="sans-serif" font-size="11">"#,
        spec.width, spec.height, spec.width, spec.height
    );
    out.push_str(
        "<defs><marker id=\"arrowhead\" viewBox=\"0 0 10 10\" refX=\"10\" refY=\"5\" \
         markerWidth=\"7\" markerHeight=\"7\" orient=\"auto\"><path d=\"M0,0 L10,5 L0,10 z\" \
         fill=\"#b2182b\"/></marker></defs>\n",
    );
    let _ = writeln!(
        out,
        r##"<rect width="100%" height="100%" fill="#ffffff"/>"##
    );
    let _ = writeln!(
        out,
        r#"<text class="title" x="{cx:.2}" y="24" text-anchor="middle" font-size="14">{}</text>"#,
        escape(&s.title)
    );

    // Axes through the origin.
    let _ = writeln!(
        out,
        r##"<line class="axis" x1="{:.2}" y1="{cy:.2}" x2="{:.2}" y2="{cy:.2}" stroke="#888888" stroke-dasharray="4 3"/>"##,
        cx - half,
        cx + half
    );
    let _ = writeln!(
        out,
        r##"<line class="axis" x1="{cx:.2}" y1="{:.2}" x2="{cx:.2}" y2="{:.2}" stroke="#888888" stroke-dasharray="4 3"/>"##,
        cy - half,
        cy + half
    );
    let _ = writeln!(
        out,
        r#"<text class="axis-label" x="{:.2}" y="{:.2}" text-anchor="end">{}</text>"#,
        cx + half,
        cy + 16.0,
        escape(&s.axis_labels[0])
    );
    let _ = writeln!(
        out,
        r#"<text class="axis-label" x="{:.2}" y="{:.2}" transform="rotate(-90 {:.2} {:.2})">{}</text>"#,
        cx - 8.0,
        cy - half,
        cx - 8.0,
        cy - half,
        escape(&s.axis_labels[1])
    );

    if let Some((m, labels)) = s.arrows {
        for (j, label) in labels.iter().enumerate() {
            let (x, y) = (px(m[(j, 0)]), py(m[(j, 1)]));
            let _ = writeln!(
                out,
                r##"<line class="col-marker" x1="{cx:.2}" y1="{cy:.2}" x2="{x:.2}" y2="{y:.2}" stroke="#b2182b" stroke-width="1.5" marker-end="url(#arrowhead)"/>"##
            );
            if spec.show_labels {
                let _ = writeln!(
                    out,
                    r##"<text class="col-label" x="{:.2}" y="{:.2}" fill="#b2182b">{}</text>"##,
                    x + 4.0,
                    y - 4.0,
                    escape(label)
                );
            }
        }
    }
    if let Some((m, labels)) = s.squares {
        for (j, label) in labels.iter().enumerate() {
            let (x, y) = (px(m[(j, 0)]), py(m[(j, 1)]));
            let _ = writeln!(
                out,
                r##"<rect class="col-point" x="{:.2}" y="{:.2}" width="7" height="7" fill="#b2182b"/>"##,
                x - 3.5,
                y - 3.5
            );
            if spec.show_labels {
                let _ = writeln!(
                    out,
                    r##"<text class="col-label" x="{:.2}" y="{:.2}" fill="#b2182b">{}</text>"##,
                    x + 5.0,
                    y - 5.0,
                    escape(label)
                );
            }
        }
    }
    if let Some((m, labels)) = s.points {
        for (i, label) in labels.iter().enumerate() {
            let (x, y) = (px(m[(i, 0)]), py(m[(i, 1)]));
            let _ = writeln!(
                out,
                r##"<circle class="row-marker" cx="{x:.2}" cy="{y:.2}" r="3.5" fill="#2166ac"/>"##
            );
            if spec.show_labels {
                let _ = writeln!(
                    out,
                    r##"<text class="row-label" x="{:.2}" y="{:.2}" fill="#2166ac">{}</text>"##,
                    x + 5.0,
                    y - 5.0,
                    escape(label)
                );
            }
        }
    }
    for (k, line) in s.legend.iter().enumerate() {
        let _ = writeln!(
            out,
            r#"<text class="legend" x="12" y="{:.2}">{}</text>"#,
            h - 12.0 - 14.0 * (s.legend.len() - 1 - k) as f64,
            escape(line)
        );
    }
    out.push_str("</svg>\n");
    Ok(out)
}

fn escape(s: &str) -> String {
    let mut out = String::with_capacity(s.len());
    for c in s.chars() {
        match c {
            '&' => out.push_str("&amp;"),
            '<' => out.push_str("&lt;"),
            '>' => out.push_str("&gt;"),
            '"' => out.push_str("&quot;"),
            '\'' => out.push_str("&apos;"),
            c => out.push(c),
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::biplot::{fit_biplot, quality};
    use crate::data::{load_case, Labels, PreprocessRecord, Scale};
    use crate::report::analyze;

    fn tiny() -> (BiplotModel, QualityReport) {
        let x = Matrix::from_rows(&[[2.0, 0.5], [-1.0, 1.5]]).unwrap();
        let labels = Labels {
            rows: vec!["a".into(), "b".into()],
            cols: vec!["u".into(), "v".into()],
        };
        let rec = PreprocessRecord {
            mode: Scale::None,
            means: vec![0.0, 0.0],
            sds: vec![],
        };
        let m = fit_biplot(&x, 1.0, 2, labels, rec).unwrap();
        let q = quality(&m, &x).unwrap();
        (m, q)
    }

    #[test]
    fn counts_dots_and_arrows() {
        let (m, q) = tiny();
        let doc = render_svg(&m, &q, &PlotSpec::default()).unwrap();
        assert_eq!(doc.matches("<circle").count(), 2);
        assert_eq!(doc.matches(r#"class="col-marker""#).count(), 2);
        assert!(doc.contains("vector scale x"));
    }

    #[test]
    fn deterministic_output() {
        let (m, q) = tiny();
        let spec = PlotSpec::default();
        assert_eq!(
            render_svg(&m, &q, &spec).unwrap(),
            render_svg(&m, &q, &spec).unwrap()
        );
    }

    #[test]
    fn explicit_vector_scale_is_recorded() {
        let (m, q) = tiny();
        let spec = PlotSpec {
            vector_scale: Some(2.5),
            ..PlotSpec::default()
        };
        assert!(render_svg(&m, &q, &spec)
            .unwrap()
            .contains("vector scale x2.5000"));
        let bad = PlotSpec {
            vector_scale: Some(0.0),
            ..PlotSpec::default()
        };
        assert!(render_svg(&m, &q, &bad).is_err());
    }

    #[test]
    fn rejects_non_planar_model() {
        let a = analyze(&load_case(2).unwrap(), 1.0, 3, Scale::Zscore).unwrap();
        assert!(render_svg(&a.model, &a.quality, &PlotSpec::default()).is_err());
    }

    #[test]
    fn case_one_labels_present_and_escaped() {
        let t = load_case(1).unwrap();
        let a = analyze(&t, 1.0, 2, Scale::Zscore).unwrap();
        let doc = render_svg(&a.model, &a.quality, &PlotSpec::default()).unwrap();
        for l in t.row_labels().iter().chain(t.col_labels()) {
            assert!(
                doc.contains(&format!(">{}</text>", escape(l))),
                "missing {l}"
            );
        }
        let a3 = analyze(&load_case(3).unwrap(), 1.0, 2, Scale::Zscore).unwrap();
        let doc3 = render_svg(&a3.model, &a3.quality, &PlotSpec::default()).unwrap();
        assert!(doc3.contains("Economics &amp; Business"));
        assert!(!doc3.contains("Economics & Business"));
    }
}
