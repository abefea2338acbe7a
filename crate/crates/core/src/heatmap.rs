//! Standalone SVG heatmaps of 2D sweep results.
//!
//! Output is a pure function of the grid: no timestamps, fixed number
//! formatting, so identical grids produce identical bytes.

use std::fmt::Write as _;

use crate::error::{Error, Result};
use crate::sweep::{Axis, GridResult, Quantity};

const PLOT: f64 = 500.0;
const LEFT: f64 = 90.0;
const TOP: f64 = 50.0;
const LEGEND_X: f64 = LEFT + PLOT + 30.0;
const WIDTH: f64 = LEGEND_X + 110.0;
const HEIGHT: f64 = TOP + PLOT + 70.0;
/// Fill used for unstable and failed cells.
pub const HATCH_COLOR: &str = "#9e9e9e";

// viridis, sampled every 10%
const VIRIDIS: [(u8, u8, u8); 11] = [
    (68, 1, 84),
    (72, 36, 117),
    (65, 68, 135),
    (53, 95, 141),
    (42, 120, 142),
    (33, 145, 140),
    (34, 168, 132),
    (68, 191, 112),
    (122, 209, 81),
    (189, 223, 38),
    (253, 231, 37),
];

/// Hex color for t ∈ [0, 1].
pub fn color(t: f64) -> String {
    let t = t.clamp(0.0, 1.0) * (VIRIDIS.len() - 1) as f64;
    let i = (t.floor() as usize).min(VIRIDIS.len() - 2);
    let f = t - i as f64;
    let lerp = |a: u8, b: u8| (a as f64 + (b as f64 - a as f64) * f).round() as u8;
    let (a, b) = (VIRIDIS[i], VIRIDIS[i + 1]);
    format!("#{:02x}{:02x}{:02x}", lerp(a.0, b.0), lerp(a.1, b.1), lerp(a.2, b.2))
}

/// Unit label and divisor for displaying an axis.
pub fn display_unit(axis: &Axis) -> (&'static str, f64) {
    match axis.param.quantity() {
        Quantity::Temperature => ("K", 1.0),
        Quantity::Power => ("mW", 1e-3),
        Quantity::Frequency => {
            let m = axis.min.abs().max(axis.max.abs());
            if m >= 1e12 {
                ("THz", 1e12)
            } else if m >= 1e9 {
                ("GHz", 1e9)
            } else if m >= 1e6 {
                ("MHz", 1e6)
            } else if m >= 1e3 {
                ("kHz", 1e3)
            } else {
                ("Hz", 1.0)
            }
        }
    }
}

fn escape(s: &str) -> String {
    s.replace('&', "&amp;").replace('<', "&lt;").replace('>', "&gt;")
}

fn tick(v: f64) -> String {
    let s = format!("{v:.3}");
    let s = s.trim_end_matches('0').trim_end_matches('.');
    if s == "-0" { "0".into() } else { s.into() }
}

/// Renders `column` of a 2D grid: first axis horizontal, second vertical.
pub fn render_heatmap(grid: &GridResult, column: &str) -> Result<String> {
    if !grid.is_2d() {
        return Err(Error::Config(
            "heatmaps need a 2D sweep; for a 1D sweep plot the CSV columns as lines".into(),
        ));
    }
    let values = grid
        .column(column)
        .ok_or_else(|| Error::Config(format!("no column `{column}` in the sweep result")))?;
    let (nx, ny) = (grid.axes[0].points, grid.axes[1].points);
    if values.len() != nx * ny {
        return Err(Error::Config(format!(
            "grid has {} rows, expected {nx}×{ny}",
            values.len()
        )));
    }

    let finite = values.iter().copied().filter(|v| v.is_finite());
    let (lo, hi) = finite.fold((f64::INFINITY, f64::NEG_INFINITY), |(a, b), v| (a.min(v), b.max(v)));
    let degenerate = !(hi > lo);
    let scale = |v: f64| if degenerate { 0.5 } else { (v - lo) / (hi - lo) };

    let (cw, ch) = (PLOT / nx as f64, PLOT / ny as f64);
    let mut svg = String::new();
    let _ = writeln!(
        svg,
        r#"<svg xmlns="http://www.w3.org/2000/svg" width="{WIDTH}" height="{HEIGHT}" viewBox="0 0 {WIDTH} {HEIGHT}" font-family="sans-serif" font-size="12">"#
    );
    let _ = writeln!(
        svg,
        r##"<defs><pattern id="hatch" width="6" height="6" patternUnits="userSpaceOnUse"><rect width="6" height="6" fill="#ffffff"/><path d="M0,6 L6,0" stroke="{HATCH_COLOR}" stroke-width="1.5"/></pattern></defs>"##
    );
    let _ = writeln!(svg, r##"<rect width="{WIDTH}" height="{HEIGHT}" fill="#ffffff"/>"##);
    let title = match &grid.name {
        Some(n) => format!("{n}: {column}"),
        None => column.to_string(),
    };
    let _ = writeln!(
        svg,
        r#"<text x="{}" y="{}" text-anchor="middle" font-size="14">{}</text>"#,
        LEFT + PLOT / 2.0,
        TOP - 20.0,
        escape(&title)
    );

    let _ = writeln!(svg, r#"<g id="cells" shape-rendering="crispEdges">"#);
    for i in 0..nx {
        for j in 0..ny {
            let v = values[i * ny + j];
            let fill = if v.is_finite() { color(scale(v)) } else { "url(#hatch)".to_string() };
            let x = LEFT + i as f64 * cw;
            let y = TOP + (ny - 1 - j) as f64 * ch;
            let _ = writeln!(
                svg,
                r#"<rect x="{x:.4}" y="{y:.4}" width="{cw:.4}" height="{ch:.4}" fill="{fill}"/>"#
            );
        }
    }
    svg.push_str("</g>\n");
    let _ = writeln!(
        svg,
        r##"<rect x="{LEFT}" y="{TOP}" width="{PLOT}" height="{PLOT}" fill="none" stroke="#000000"/>"##
    );

    // axes
    let (ux, dx) = display_unit(&grid.axes[0]);
    let (uy, dy) = display_unit(&grid.axes[1]);
    for k in 0..5 {
        let f = k as f64 / 4.0;
        let ax = &grid.axes[0];
        let vx = (ax.min + (ax.max - ax.min) * f) / dx;
        let px = LEFT + (f * (nx - 1) as f64 + 0.5) * cw;
        let _ = writeln!(
            svg,
            r#"<text x="{px:.4}" y="{}" text-anchor="middle">{}</text>"#,
            TOP + PLOT + 18.0,
            tick(vx)
        );
        let ay = &grid.axes[1];
        let vy = (ay.min + (ay.max - ay.min) * f) / dy;
        let py = TOP + PLOT - (f * (ny - 1) as f64 + 0.5) * ch;
        let _ = writeln!(
            svg,
            r#"<text x="{}" y="{py:.4}" text-anchor="end" dominant-baseline="middle">{}</text>"#,
            LEFT - 6.0,
            tick(vy)
        );
    }
    let _ = writeln!(
        svg,
        r#"<text x="{}" y="{}" text-anchor="middle">{} [{ux}]</text>"#,
        LEFT + PLOT / 2.0,
        TOP + PLOT + 42.0,
        escape(grid.axes[0].param.name())
    );
    let _ = writeln!(
        svg,
        r#"<text x="{x}" y="{y}" text-anchor="middle" transform="rotate(-90 {x} {y})">{} [{uy}]</text>"#,
        escape(grid.axes[1].param.name()),
        x = LEFT - 60.0,
        y = TOP + PLOT / 2.0,
    );

    // legend
    let steps = 50;
    let bar_h = PLOT * 0.6;
    let _ = writeln!(svg, r#"<g id="legend" shape-rendering="crispEdges">"#);
    for s in 0..steps {
        let t = if degenerate { 0.5 } else { s as f64 / (steps - 1) as f64 };
        let y = TOP + bar_h - (s + 1) as f64 * bar_h / steps as f64;
        let _ = writeln!(
            svg,
            r#"<rect x="{LEGEND_X}" y="{y:.4}" width="20" height="{:.4}" fill="{}"/>"#,
            bar_h / steps as f64,
            color(t)
        );
    }
    svg.push_str("</g>\n");
    if degenerate {
        let label = if lo.is_finite() { format!("uniform {}", crate::sweep::format_number(lo)) } else { "no data".into() };
        let _ = writeln!(
            svg,
            r#"<text x="{}" y="{}">{label}</text>"#,
            LEGEND_X + 26.0,
            TOP + bar_h / 2.0
        );
    } else {
        let _ = writeln!(svg, r#"<text x="{}" y="{}">{}</text>"#, LEGEND_X + 26.0, TOP + 10.0, tick(hi));
        let _ = writeln!(svg, r#"<text x="{}" y="{}">{}</text>"#, LEGEND_X + 26.0, TOP + bar_h, tick(lo));
    }
    let _ = writeln!(
        svg,
        r#"<rect x="{LEGEND_X}" y="{}" width="20" height="14" fill="url(#hatch)" stroke="{HATCH_COLOR}"/>"#,
        TOP + bar_h + 20.0
    );
    let _ = writeln!(
        svg,
        r#"<text x="{}" y="{}">unstable</text>"#,
        LEGEND_X + 26.0,
        TOP + bar_h + 31.0
    );
    svg.push_str("</svg>\n");
    Ok(svg)
}
