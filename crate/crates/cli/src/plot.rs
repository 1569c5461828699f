//! Static SVG line charts drawn from the CSV outputs alone.

use std::fmt::Write;

use crate::error::{CliError, Result};
use crate::table::{parse_csv, Parsed};

const COLORS: [&str; 6] = ["#1f77b4", "#d62728", "#2ca02c", "#9467bd", "#ff7f0e", "#8c564b"];
const PANEL_W: f64 = 420.0;
const PANEL_H: f64 = 300.0;
const MARGIN: f64 = 55.0;

struct Series {
    label: String,
    points: Vec<(f64, f64)>,
    /// (x, low, high) envelope shaded behind the line.
    band: Vec<(f64, f64, f64)>,
}

struct Panel<'a> {
    title: &'a str,
    x_label: &'a str,
    log2_x: bool,
    series: Vec<Series>,
}

fn column(t: &Parsed, name: &str) -> Result<usize> {
    t.column(name).ok_or_else(|| CliError::Config { field: name.into(), message: "column missing from CSV".into() })
}

fn value(row: &[Option<f64>], i: usize) -> Option<f64> {
    row.get(i).copied().flatten()
}

fn extent(values: impl Iterator<Item = f64>) -> (f64, f64) {
    let (lo, hi) = values.fold((f64::INFINITY, f64::NEG_INFINITY), |(lo, hi), v| (lo.min(v), hi.max(v)));
    if !lo.is_finite() {
        (0.0, 1.0)
    } else if hi - lo < 1e-12 {
        (lo - 0.5, hi + 0.5)
    } else {
        (lo, hi)
    }
}

fn tick(v: f64) -> String {
    let s = format!("{v:.3}");
    let s = s.trim_end_matches('0').trim_end_matches('.');
    if s == "-0" { "0".into() } else { s.into() }
}

fn draw_panel(svg: &mut String, left: f64, p: &Panel) {
    let tx = |x: f64| if p.log2_x { x.max(1e-300).log2() } else { x };
    let xs = p.series.iter().flat_map(|s| s.points.iter().map(|&(x, _)| tx(x)));
    let ys = p.series.iter().flat_map(|s| {
        s.points.iter().map(|&(_, y)| y).chain(s.band.iter().flat_map(|&(_, lo, hi)| [lo, hi]))
    });
    let (x0, x1) = extent(xs);
    let (_, y1) = extent(ys.chain([0.0]));
    let y0 = 0.0f64.min(p.series.iter().flat_map(|s| s.points.iter().map(|&(_, y)| y)).fold(0.0, f64::min));
    let (pl, pt) = (left + MARGIN, 30.0);
    let (pw, ph) = (PANEL_W - MARGIN - 15.0, PANEL_H - 30.0 - 45.0);
    let sx = |x: f64| pl + (tx(x) - x0) / (x1 - x0) * pw;
    let sy = |y: f64| pt + ph - (y - y0) / (y1 - y0) * ph;

    let _ = writeln!(svg, r#"<text x="{:.1}" y="18" font-size="13" text-anchor="middle">{}</text>"#, pl + pw / 2.0, p.title);
    let _ = writeln!(svg, r##"<rect x="{pl:.1}" y="{pt:.1}" width="{pw:.1}" height="{ph:.1}" fill="none" stroke="#444"/>"##);
    for k in 0..=4 {
        let y = y0 + (y1 - y0) * k as f64 / 4.0;
        let _ = writeln!(
            svg,
            r#"<text x="{:.1}" y="{:.1}" font-size="10" text-anchor="end">{}</text>"#,
            pl - 4.0,
            sy(y) + 3.0,
            tick(y)
        );
    }
    let mut x_ticks: Vec<f64> = p.series.iter().flat_map(|s| s.points.iter().map(|&(x, _)| x)).collect();
    x_ticks.sort_by(|a, b| a.partial_cmp(b).unwrap());
    x_ticks.dedup();
    let stride = x_ticks.len().div_ceil(9).max(1);
    for x in x_ticks.iter().step_by(stride) {
        let _ = writeln!(
            svg,
            r#"<text x="{:.1}" y="{:.1}" font-size="10" text-anchor="middle">{}</text>"#,
            sx(*x),
            pt + ph + 14.0,
            tick(*x)
        );
    }
    let _ = writeln!(
        svg,
        r#"<text x="{:.1}" y="{:.1}" font-size="11" text-anchor="middle">{}</text>"#,
        pl + pw / 2.0,
        pt + ph + 32.0,
        p.x_label
    );

    for (i, s) in p.series.iter().enumerate() {
        let color = COLORS[i % COLORS.len()];
        if !s.band.is_empty() {
            let upper = s.band.iter().map(|&(x, _, hi)| format!("{:.2},{:.2}", sx(x), sy(hi)));
            let lower = s.band.iter().rev().map(|&(x, lo, _)| format!("{:.2},{:.2}", sx(x), sy(lo)));
            let pts: Vec<String> = upper.chain(lower).collect();
            let _ = writeln!(svg, r#"<polygon points="{}" fill="{color}" fill-opacity="0.18" stroke="none"/>"#, pts.join(" "));
        }
        let pts: Vec<String> = s.points.iter().map(|&(x, y)| format!("{:.2},{:.2}", sx(x), sy(y))).collect();
        let _ = writeln!(svg, r#"<polyline points="{}" fill="none" stroke="{color}" stroke-width="1.8"/>"#, pts.join(" "));
        let ly = pt + 12.0 + 14.0 * i as f64;
        let _ = writeln!(
            svg,
            r#"<line x1="{:.1}" y1="{ly:.1}" x2="{:.1}" y2="{ly:.1}" stroke="{color}" stroke-width="2"/><text x="{:.1}" y="{:.1}" font-size="10">{}</text>"#,
            pl + pw - 110.0,
            pl + pw - 92.0,
            pl + pw - 88.0,
            ly + 3.0,
            s.label
        );
    }
}

fn render(panels: &[Panel]) -> String {
    let width = PANEL_W * panels.len() as f64;
    let mut svg = format!(
        "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"{width}\" height=\"{PANEL_H}\" viewBox=\"0 0 {width} {PANEL_H}\" font-family=\"sans-serif\">\n<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n"
    );
    for (i, p) in panels.iter().enumerate() {
        draw_panel(&mut svg, PANEL_W * i as f64, p);
    }
    svg.push_str("</svg>\n");
    svg
}

/// Median excess risk with IQR band per N^S series, and the bound per series.
pub fn risk_curve_svg(csv_text: &str) -> Result<String> {
    let t = parse_csv(csv_text)?;
    let [ns, nt, med, q25, q75, bound] =
        ["n_source", "n_target", "median", "q25", "q75", "bound_value"].map(|c| column(&t, c));
    let (ns, nt, med, q25, q75, bound) = (ns?, nt?, med?, q25?, q75?, bound?);
    let mut groups: Vec<f64> = t.rows.iter().filter_map(|r| value(r, ns)).collect();
    groups.sort_by(|a, b| a.partial_cmp(b).unwrap());
    groups.dedup();
    let series_of = |g: f64, y: usize, with_band: bool| {
        let mut rows: Vec<&Vec<Option<f64>>> = t.rows.iter().filter(|r| value(r, ns) == Some(g)).collect();
        rows.sort_by(|a, b| value(a, nt).partial_cmp(&value(b, nt)).unwrap());
        let points = rows.iter().filter_map(|r| Some((value(r, nt)?, value(r, y)?))).collect();
        let band = if with_band {
            rows.iter().filter_map(|r| Some((value(r, nt)?, value(r, q25)?, value(r, q75)?))).collect()
        } else {
            Vec::new()
        };
        Series { label: format!("N^S = {g}"), points, band }
    };
    Ok(render(&[
        Panel {
            title: "Excess risk (median, IQR)",
            x_label: "N^T",
            log2_x: true,
            series: groups.iter().map(|&g| series_of(g, med, true)).collect(),
        },
        Panel { title: "Bound", x_label: "N^T", log2_x: true, series: groups.iter().map(|&g| series_of(g, bound, false)).collect() },
    ]))
}

/// Median transfer excess risk with IQR band, bound and D^ST against the shift.
pub fn shift_sweep_svg(csv_text: &str) -> Result<String> {
    let t = parse_csv(csv_text)?;
    let col = |c| column(&t, c);
    let (shift, med, q25, q75, bound, trace, tv) =
        (col("shift")?, col("median")?, col("q25")?, col("q75")?, col("bound_value")?, col("dst_trace")?, col("dst_tv")?);
    let line = |label: &str, y: usize| Series {
        label: label.into(),
        points: t.rows.iter().filter_map(|r| Some((value(r, shift)?, value(r, y)?))).collect(),
        band: Vec::new(),
    };
    let mut risk = line("median", med);
    risk.band = t.rows.iter().filter_map(|r| Some((value(r, shift)?, value(r, q25)?, value(r, q75)?))).collect();
    Ok(render(&[
        Panel { title: "Transfer excess risk (median, IQR)", x_label: "mean shift", log2_x: false, series: vec![risk] },
        Panel {
            title: "Bound and dissimilarity",
            x_label: "mean shift",
            log2_x: false,
            series: vec![line("bound", bound), line("D^ST trace", trace), line("D^ST TV", tv)],
        },
    ]))
}
