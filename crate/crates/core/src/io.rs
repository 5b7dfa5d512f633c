//! CSV export of sampled fields and traces, and a minimal SVG line plot.
//!
//! Every CSV carries a header row. Field files name the quantity and carry
//! the time in their own column.

use std::fmt::Write as _;
use std::io::Write;

use crate::dynamics::DiagnosticRow;
use crate::error::Result;
use crate::grid::{Grid1D, Grid2D};
use crate::phase_space::PhaseDensity;

fn writer<W: Write>(w: W) -> csv::Writer<W> {
    csv::WriterBuilder::new().from_writer(w)
}

/// Columns `t, <axis>, <quantity>`.
pub fn write_field_1d<W: Write>(
    w: W,
    axis: &str,
    quantity: &str,
    t: f64,
    grid: &Grid1D,
    values: &[f64],
) -> Result<()> {
    grid.check_len(values.len())?;
    let mut out = writer(w);
    out.write_record(["t", axis, quantity])?;
    for (i, v) in values.iter().enumerate() {
        out.serialize((t, grid.point(i), v))?;
    }
    out.flush()?;
    Ok(())
}

/// Columns `t, x, q, <quantity>`.
pub fn write_field_2d<W: Write>(
    w: W,
    quantity: &str,
    t: f64,
    grid: &Grid2D,
    values: &[f64],
) -> Result<()> {
    grid.check_len(values.len())?;
    let mut out = writer(w);
    out.write_record(["t", "x", "q", quantity])?;
    let nq = grid.q.len();
    for (k, v) in values.iter().enumerate() {
        out.serialize((t, grid.x.point(k / nq), grid.q.point(k % nq), v))?;
    }
    out.flush()?;
    Ok(())
}

pub fn write_diagnostics<W: Write>(w: W, rows: &[DiagnosticRow]) -> Result<()> {
    let mut out = writer(w);
    out.write_record(["t", "mass", "H_C", "H_Q", "H_CQ", "total", "L1"])?;
    for r in rows {
        out.serialize((r.t, r.mass, r.h_c, r.h_q, r.h_cq, r.total, r.l1))?;
    }
    out.flush()?;
    Ok(())
}

/// Columns `x, p, rho`.
pub fn write_phase_density<W: Write>(w: W, rho: &PhaseDensity) -> Result<()> {
    let mut out = writer(w);
    out.write_record(["x", "p", "rho"])?;
    let np = rho.grid.p.len();
    for (k, v) in rho.rho.iter().enumerate() {
        out.serialize((rho.grid.x.point(k / np), rho.grid.p.point(k % np), v))?;
    }
    out.flush()?;
    Ok(())
}

/// One sample per row under a single header.
pub fn write_samples<W: Write>(w: W, name: &str, samples: &[f64]) -> Result<()> {
    let mut out = writer(w);
    out.write_record([name])?;
    for s in samples {
        out.serialize([s])?;
    }
    out.flush()?;
    Ok(())
}

/// Histogram of `samples` over `bins` equal cells of `[lo, hi]`, with the
/// empirical density and the value of `density` at each cell centre.
pub fn write_histogram<W: Write>(
    w: W,
    samples: &[f64],
    (lo, hi): (f64, f64),
    bins: usize,
    density: impl Fn(f64) -> f64,
) -> Result<()> {
    let width = (hi - lo) / bins as f64;
    let mut counts = vec![0usize; bins];
    for s in samples {
        if *s >= lo && *s < hi {
            counts[(((s - lo) / width) as usize).min(bins - 1)] += 1;
        }
    }
    let n = samples.len().max(1) as f64;
    let mut out = writer(w);
    out.write_record(["left", "right", "count", "empirical", "expected"])?;
    for (i, c) in counts.iter().enumerate() {
        let left = lo + i as f64 * width;
        let centre = left + 0.5 * width;
        out.serialize((left, left + width, c, *c as f64 / (n * width), density(centre)))?;
    }
    out.flush()?;
    Ok(())
}

/// One named curve of a line plot.
#[derive(Debug, Clone)]
pub struct Series<'a> {
    pub label: &'a str,
    pub x: &'a [f64],
    pub y: &'a [f64],
}

const COLOURS: [&str; 6] = ["#1f77b4", "#d62728", "#2ca02c", "#9467bd", "#ff7f0e", "#17becf"];

/// Static SVG line plot of one or more curves sharing axes.
pub fn svg_line_plot(title: &str, x_label: &str, series: &[Series<'_>]) -> String {
    let (w, h, pad) = (640.0, 400.0, 50.0);
    let finite = |v: &&f64| v.is_finite();
    let xs = series.iter().flat_map(|s| s.x.iter()).filter(finite);
    let ys = series.iter().flat_map(|s| s.y.iter()).filter(finite);
    let (x0, x1) = xs.fold((f64::INFINITY, f64::NEG_INFINITY), |(a, b), v| (a.min(*v), b.max(*v)));
    let (y0, y1) = ys.fold((0.0f64, f64::NEG_INFINITY), |(a, b), v| (a.min(*v), b.max(*v)));
    let span = |a: f64, b: f64| if b > a { b - a } else { 1.0 };
    let (sx, sy) = ((w - 2.0 * pad) / span(x0, x1), (h - 2.0 * pad) / span(y0, y1));

    let mut s = String::new();
    let _ = writeln!(
        s,
        r#"<svg xmlns="http://www.w3.org/2000/svg" width="{w}" height="{h}" viewBox="0 0 {w} {h}">"#
    );
    let _ = writeln!(s, r#"<rect width="100%" height="100%" fill="white"/>"#);
    let _ = writeln!(
        s,
        r#"<text x="{}" y="25" text-anchor="middle" font-family="sans-serif" font-size="16">{}</text>"#,
        w / 2.0,
        escape(title)
    );
    let _ = writeln!(
        s,
        r#"<polyline points="{pad},{pad} {pad},{b} {r},{b}" fill="none" stroke="black"/>"#,
        b = h - pad,
        r = w - pad
    );
    let _ = writeln!(
        s,
        r#"<text x="{}" y="{}" text-anchor="middle" font-family="sans-serif" font-size="12">{}</text>"#,
        w / 2.0,
        h - 12.0,
        escape(x_label)
    );
    let _ = writeln!(
        s,
        r#"<text x="{pad}" y="{}" text-anchor="middle" font-family="sans-serif" font-size="11">{x0:.3}</text>"#,
        h - pad + 16.0
    );
    let _ = writeln!(
        s,
        r#"<text x="{}" y="{}" text-anchor="middle" font-family="sans-serif" font-size="11">{x1:.3}</text>"#,
        w - pad,
        h - pad + 16.0
    );
    for (k, ser) in series.iter().enumerate() {
        let colour = COLOURS[k % COLOURS.len()];
        let pts: Vec<String> = ser
            .x
            .iter()
            .zip(ser.y)
            .filter(|(a, b)| a.is_finite() && b.is_finite())
            .map(|(a, b)| format!("{:.2},{:.2}", pad + (a - x0) * sx, h - pad - (b - y0) * sy))
            .collect();
        let _ = writeln!(
            s,
            r#"<polyline points="{}" fill="none" stroke="{colour}" stroke-width="1.5"/>"#,
            pts.join(" ")
        );
        let _ = writeln!(
            s,
            r#"<text x="{}" y="{}" font-family="sans-serif" font-size="12" fill="{colour}">{}</text>"#,
            w - pad - 150.0,
            pad + 16.0 * k as f64,
            escape(ser.label)
        );
    }
    s.push_str("</svg>\n");
    s
}

fn escape(s: &str) -> String {
    s.replace('&', "&amp;").replace('<', "&lt;").replace('>', "&gt;")
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn field_1d_layout() {
        let g = Grid1D::new(0.0, 1.0, 3).unwrap();
        let mut buf = Vec::new();
        write_field_1d(&mut buf, "q", "P_Q", 2.0, &g, &[1.0, 2.0, 3.0]).unwrap();
        let text = String::from_utf8(buf).unwrap();
        assert_eq!(text, "t,q,P_Q\n2.0,0.0,1.0\n2.0,0.5,2.0\n2.0,1.0,3.0\n");
    }

    #[test]
    fn field_2d_is_x_outer() {
        let g = Grid2D::new(
            Grid1D::new(0.0, 1.0, 2).unwrap(),
            Grid1D::new(0.0, 2.0, 3).unwrap(),
        );
        let mut buf = Vec::new();
        write_field_2d(&mut buf, "P", 0.5, &g, &[0.0, 1.0, 2.0, 3.0, 4.0, 5.0]).unwrap();
        let text = String::from_utf8(buf).unwrap();
        let lines: Vec<_> = text.lines().collect();
        assert_eq!(lines[0], "t,x,q,P");
        assert_eq!(lines[4], "0.5,1.0,0.0,3.0");
        assert!(write_field_2d(Vec::new(), "P", 0.0, &g, &[0.0]).is_err());
    }

    #[test]
    fn diagnostics_leave_missing_l1_empty() {
        let row = DiagnosticRow {
            t: 0.0,
            mass: 1.0,
            h_c: 0.0,
            h_q: 1.0,
            h_cq: 0.0,
            total: 1.0,
            l1: None,
        };
        let mut buf = Vec::new();
        write_diagnostics(&mut buf, &[row]).unwrap();
        assert!(String::from_utf8(buf).unwrap().ends_with("1.0,0.0,1.0,\n"));
    }

    #[test]
    fn histogram_normalises_counts() {
        let mut buf = Vec::new();
        write_histogram(&mut buf, &[0.1, 0.2, 0.7, 0.9], (0.0, 1.0), 2, |_| 1.0).unwrap();
        let text = String::from_utf8(buf).unwrap();
        assert!(text.contains("0.0,0.5,2,1.0,1.0"));
    }

    #[test]
    fn svg_is_well_formed() {
        let x = [0.0, 1.0, 2.0];
        let y = [0.0, 1.0, 0.5];
        let svg = svg_line_plot("a < b", "x", &[Series { label: "P", x: &x, y: &y }]);
        assert!(svg.starts_with("<svg") && svg.trim_end().ends_with("</svg>"));
        assert!(svg.contains("a &lt; b"));
        assert_eq!(svg.matches("<polyline").count(), 2);
    }
}
