//! Minimal SVG line charts for force envelopes and run telemetry.

use std::fmt::Write as _;

use super::{SimReport, TelemetryRow};
use crate::error::Result;
use crate::force_model::{envelope_sweep, EnvelopeRow, MassGeometry};

pub const DEFAULT_ENVELOPE_BETAS: [f64; 5] = [10.0, 30.0, 60.0, 80.0, 90.0];

const COLORS: [&str; 6] = ["#1f77b4", "#d62728", "#2ca02c", "#9467bd", "#ff7f0e", "#8c564b"];
const PANEL_W: f64 = 320.0;
const PANEL_H: f64 = 240.0;
const MARGIN: f64 = 48.0;
/// Envelope panels clip the diverging branch at this multiple of `G_t`.
const ENVELOPE_CLIP: f64 = 4.0;

struct Series<'a> {
    label: String,
    color: &'a str,
    dashed: bool,
    points: Vec<(f64, f64)>,
}

struct Panel<'a> {
    title: &'a str,
    x_label: &'a str,
    x_range: (f64, f64),
    y_range: (f64, f64),
    series: Vec<Series<'a>>,
}

fn nice_ticks(lo: f64, hi: f64) -> Vec<f64> {
    let span = hi - lo;
    if !(span > 0.0) {
        return vec![lo];
    }
    let raw = span / 5.0;
    let mag = 10f64.powf(raw.log10().floor());
    let step = [1.0, 2.0, 5.0, 10.0]
        .iter()
        .map(|m| m * mag)
        .find(|s| span / s <= 6.0)
        .unwrap_or(10.0 * mag);
    let first = (lo / step).ceil() as i64;
    let last = (hi / step).floor() as i64;
    (first..=last).map(|i| i as f64 * step).collect()
}

fn fmt_tick(v: f64) -> String {
    if v.abs() >= 100.0 || v == v.round() {
        format!("{v:.0}")
    } else {
        let s = format!("{v:.2}");
        s.trim_end_matches('0').trim_end_matches('.').to_string()
    }
}

fn draw_panel(svg: &mut String, id: usize, x0: f64, y0: f64, p: &Panel) {
    let (w, h) = (PANEL_W - MARGIN - 12.0, PANEL_H - MARGIN - 24.0);
    let left = x0 + MARGIN;
    let top = y0 + 24.0;
    let sx = |x: f64| left + (x - p.x_range.0) / (p.x_range.1 - p.x_range.0) * w;
    let sy = |y: f64| top + h - (y - p.y_range.0) / (p.y_range.1 - p.y_range.0) * h;

    let _ = writeln!(svg, r#"<clipPath id="clip{id}"><rect x="{left:.2}" y="{top:.2}" width="{w:.2}" height="{h:.2}"/></clipPath>"#);
    let _ = writeln!(
        svg,
        r##"<rect x="{left:.2}" y="{top:.2}" width="{w:.2}" height="{h:.2}" fill="none" stroke="#444"/>"##
    );
    let _ = writeln!(
        svg,
        r#"<text x="{:.2}" y="{:.2}" text-anchor="middle" font-size="13">{}</text>"#,
        left + w / 2.0,
        y0 + 16.0,
        p.title
    );
    let _ = writeln!(
        svg,
        r#"<text x="{:.2}" y="{:.2}" text-anchor="middle" font-size="11">{}</text>"#,
        left + w / 2.0,
        top + h + 32.0,
        p.x_label
    );
    for t in nice_ticks(p.x_range.0, p.x_range.1) {
        let x = sx(t);
        let _ = writeln!(
            svg,
            r##"<line x1="{x:.2}" y1="{:.2}" x2="{x:.2}" y2="{:.2}" stroke="#ddd"/><text x="{x:.2}" y="{:.2}" text-anchor="middle" font-size="10">{}</text>"##,
            top,
            top + h,
            top + h + 14.0,
            fmt_tick(t)
        );
    }
    for t in nice_ticks(p.y_range.0, p.y_range.1) {
        let y = sy(t);
        let _ = writeln!(
            svg,
            r##"<line x1="{left:.2}" y1="{y:.2}" x2="{:.2}" y2="{y:.2}" stroke="#ddd"/><text x="{:.2}" y="{:.2}" text-anchor="end" font-size="10">{}</text>"##,
            left + w,
            left - 4.0,
            y + 3.0,
            fmt_tick(t)
        );
    }
    let _ = writeln!(svg, r#"<g clip-path="url(#clip{id})">"#);
    for s in &p.series {
        let pts: Vec<String> = s
            .points
            .iter()
            .filter(|(x, y)| x.is_finite() && y.is_finite())
            .map(|&(x, y)| {
                // keep clipped points near the frame so the polyline stays well formed
                let y = y.clamp(p.y_range.0 - 0.1 * (p.y_range.1 - p.y_range.0), p.y_range.1 * 1.1);
                format!("{:.2},{:.2}", sx(x), sy(y))
            })
            .collect();
        let dash = if s.dashed { r#" stroke-dasharray="6 4""# } else { "" };
        let _ = writeln!(
            svg,
            r#"<polyline fill="none" stroke="{}" stroke-width="1.5"{dash} points="{}"/>"#,
            s.color,
            pts.join(" ")
        );
    }
    svg.push_str("</g>\n");
    for (i, s) in p.series.iter().enumerate() {
        let y = top + 12.0 + 14.0 * i as f64;
        let _ = writeln!(
            svg,
            r#"<line x1="{:.2}" y1="{y:.2}" x2="{:.2}" y2="{y:.2}" stroke="{}" stroke-width="2"/><text x="{:.2}" y="{:.2}" font-size="10">{}</text>"#,
            left + 6.0,
            left + 22.0,
            s.color,
            left + 26.0,
            y + 3.0,
            s.label
        );
    }
}

fn render(panels: &[Panel]) -> String {
    let width = PANEL_W * panels.len() as f64;
    let mut svg = format!(
        r#"<svg xmlns="http://www.w3.org/2000/svg" width="{width:.0}" height="{PANEL_H:.0}" viewBox="0 0 {width:.0} {PANEL_H:.0}" font-family="sans-serif">
<rect width="100%" height="100%" fill="white"/>
"#
    );
    for (i, p) in panels.iter().enumerate() {
        draw_panel(&mut svg, i, PANEL_W * i as f64, 0.0, p);
    }
    svg.push_str("</svg>\n");
    svg
}

/// Envelope sweep for one surface as CSV (`phi0` in degrees).
pub fn envelope_csv(beta0_deg: f64, mg: &MassGeometry, n_points: usize) -> Result<String> {
    let rows = envelope_sweep(beta0_deg.to_radians(), mg, n_points)?;
    let mut w = csv::Writer::from_writer(Vec::new());
    w.write_record(["phi0_deg", "f_E_N", "f_E_Z_N", "T_sum_N"])?;
    for r in rows {
        w.write_record([r.phi0.to_degrees(), r.f_e, r.f_e_z, r.t_sum].map(|v| v.to_string()))?;
    }
    let bytes = w.into_inner().map_err(|e| e.into_error())?;
    Ok(String::from_utf8(bytes).expect("csv output is utf-8"))
}

/// Three panels (`f_E`, `f_E^Z`, `T_sum` against `phi0`), one series per surface.
pub fn envelope_svg(betas_deg: &[f64], mg: &MassGeometry, n_points: usize) -> Result<String> {
    let sweeps: Vec<(f64, Vec<EnvelopeRow>)> = betas_deg
        .iter()
        .map(|&b| Ok((b, envelope_sweep(b.to_radians(), mg, n_points)?)))
        .collect::<Result<_>>()?;
    let x_max = betas_deg.iter().copied().fold(0.0, f64::max);
    let y_max = ENVELOPE_CLIP * mg.g_t();
    let build = |title, pick: fn(&EnvelopeRow) -> f64| Panel {
        title,
        x_label: "phi0 (deg)",
        x_range: (0.0, x_max),
        y_range: (0.0, y_max),
        series: sweeps
            .iter()
            .enumerate()
            .map(|(i, (b, rows))| Series {
                label: format!("beta0 = {b} deg"),
                color: COLORS[i % COLORS.len()],
                dashed: false,
                points: rows.iter().map(|r| (r.phi0.to_degrees(), pick(r))).collect(),
            })
            .collect(),
    };
    Ok(render(&[
        build("f_E (N)", |r| r.f_e),
        build("f_E^Z (N)", |r| r.f_e_z),
        build("T_sum (N)", |r| r.t_sum),
    ]))
}

fn range_of(values: impl Iterator<Item = f64>) -> (f64, f64) {
    let (lo, hi) = values.fold((f64::INFINITY, f64::NEG_INFINITY), |(lo, hi), v| (lo.min(v), hi.max(v)));
    if !(lo.is_finite() && hi.is_finite()) {
        return (0.0, 1.0);
    }
    let pad = ((hi - lo) * 0.05).max(1e-3);
    (lo - pad, hi + pad)
}

/// Push force and total thrust over time, with the closed-form targets dashed.
pub fn timeseries_svg(report: &SimReport) -> String {
    let rows: &[TelemetryRow] = &report.telemetry;
    let t_end = rows.last().map_or(1.0, |r| r.t);
    // plot at most a couple thousand points per series
    let stride = (rows.len() / 2000).max(1);
    let sample = |pick: fn(&TelemetryRow) -> f64| -> Vec<(f64, f64)> {
        rows.iter().step_by(stride).map(|r| (r.t, pick(r))).collect()
    };
    let flat = |v: f64| vec![(0.0, v), (t_end, v)];
    let f_range = range_of(
        rows.iter()
            .flat_map(|r| [r.f_e_est, r.f_e_true])
            .chain([0.0, report.f_e_d]),
    );
    let t_range = range_of(rows.iter().map(|r| r.t_sum_ach).chain([report.t_sum_d]));
    let force = Panel {
        title: "push force (N)",
        x_label: "t (s)",
        x_range: (0.0, t_end),
        y_range: f_range,
        series: vec![
            Series { label: "estimated".into(), color: COLORS[0], dashed: false, points: sample(|r| r.f_e_est) },
            Series { label: "contact".into(), color: COLORS[2], dashed: false, points: sample(|r| r.f_e_true) },
            Series { label: "desired".into(), color: COLORS[1], dashed: true, points: flat(report.f_e_d) },
        ],
    };
    let thrust = Panel {
        title: "total thrust (N)",
        x_label: "t (s)",
        x_range: (0.0, t_end),
        y_range: t_range,
        series: vec![
            Series { label: "achieved".into(), color: COLORS[0], dashed: false, points: sample(|r| r.t_sum_ach) },
            Series { label: "closed form".into(), color: COLORS[1], dashed: true, points: flat(report.t_sum_d) },
        ],
    };
    render(&[force, thrust])
}
