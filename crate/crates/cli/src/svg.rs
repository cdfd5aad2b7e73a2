//! SVG 1.1 line plot of the analytic rate and the six scheme estimates.

use std::fmt::Write as _;

use numdiff_core::metrics::CaseEstimates;
use numdiff_core::series::is_missing;

const WIDTH: f64 = 800.0;
const HEIGHT: f64 = 500.0;
const LEFT: f64 = 80.0;
const RIGHT: f64 = 170.0;
const TOP: f64 = 40.0;
const BOTTOM: f64 = 60.0;
const AXIS: &str = "#444444";
const COLORS: [&str; 7] = ["#000000", "#1f77b4", "#ff7f0e", "#2ca02c", "#d62728", "#9467bd", "#8c564b"];

fn escape(text: &str) -> String {
    text.replace('&', "&amp;").replace('<', "&lt;").replace('>', "&gt;")
}

/// Roughly five round tick positions covering `[lo, hi]`.
fn ticks(lo: f64, hi: f64) -> Vec<f64> {
    let span = hi - lo;
    let raw = span / 5.0;
    let magnitude = 10f64.powf(raw.log10().floor());
    let step = [1.0, 2.0, 5.0, 10.0]
        .into_iter()
        .map(|m| m * magnitude)
        .find(|s| span / s <= 6.0)
        .unwrap_or(10.0 * magnitude);
    let first = (lo / step).ceil() as i64;
    let last = (hi / step).floor() as i64;
    (first..=last).map(|i| i as f64 * step).collect()
}

fn label(v: f64) -> String {
    let s = format!("{:.6}", v);
    let s = s.trim_end_matches('0').trim_end_matches('.');
    if s == "-0" {
        "0".to_string()
    } else {
        s.to_string()
    }
}

pub fn case_plot(est: &CaseEstimates) -> String {
    let mut series: Vec<(&str, &[f64])> = vec![("analytic", est.rates.values())];
    for d in &est.estimates {
        series.push((d.scheme.label(), d.series.values()));
    }
    let times = est.rates.times();
    let (t_lo, t_hi) = (times[0], times[times.len() - 1]);
    let finite = series.iter().flat_map(|(_, v)| v.iter().copied()).filter(|v| !is_missing(*v));
    let (mut y_lo, mut y_hi) = finite.fold((f64::INFINITY, f64::NEG_INFINITY), |(lo, hi), v| (lo.min(v), hi.max(v)));
    if !y_lo.is_finite() {
        (y_lo, y_hi) = (-1.0, 1.0);
    }
    if y_hi - y_lo <= f64::EPSILON * y_hi.abs().max(1.0) {
        let pad = y_hi.abs().max(1.0) * 0.05;
        y_lo -= pad;
        y_hi += pad;
    }
    let plot_w = WIDTH - LEFT - RIGHT;
    let plot_h = HEIGHT - TOP - BOTTOM;
    let x = |t: f64| LEFT + (t - t_lo) / (t_hi - t_lo) * plot_w;
    let y = |v: f64| TOP + (y_hi - v) / (y_hi - y_lo) * plot_h;
    let (time_unit, value_unit) = est.case.units();

    let mut out = String::new();
    let _ = writeln!(out, r#"<?xml version="1.0" encoding="UTF-8" standalone="no"?>"#);
    let _ = writeln!(
        out,
        r#"<svg xmlns="http://www.w3.org/2000/svg" version="1.1" width="{WIDTH}" height="{HEIGHT}" viewBox="0 0 {WIDTH} {HEIGHT}" font-family="sans-serif" font-size="12">"#
    );
    let _ = writeln!(
        out,
        r#"<title>{}</title>"#,
        escape(&format!("{}: {} rate estimates", est.case, est.case.title()))
    );
    let _ = writeln!(out, r#"<rect x="0" y="0" width="{WIDTH}" height="{HEIGHT}" fill="white"/>"#);
    let _ = writeln!(
        out,
        r#"<rect x="{LEFT}" y="{TOP}" width="{plot_w}" height="{plot_h}" fill="none" stroke="{AXIS}"/>"#
    );

    let _ = writeln!(out, r#"<g id="x-axis" stroke="{AXIS}">"#);
    for t in ticks(t_lo, t_hi) {
        let px = x(t);
        let _ = writeln!(
            out,
            r#"<line x1="{px:.2}" y1="{:.2}" x2="{px:.2}" y2="{:.2}"/><text x="{px:.2}" y="{:.2}" text-anchor="middle" stroke="none">{}</text>"#,
            TOP + plot_h,
            TOP + plot_h + 5.0,
            TOP + plot_h + 20.0,
            label(t)
        );
    }
    let _ = writeln!(out, "</g>");
    let _ = writeln!(out, r#"<g id="y-axis" stroke="{AXIS}">"#);
    for v in ticks(y_lo, y_hi) {
        let py = y(v);
        let _ = writeln!(
            out,
            r#"<line x1="{:.2}" y1="{py:.2}" x2="{LEFT}" y2="{py:.2}"/><text x="{:.2}" y="{:.2}" text-anchor="end" stroke="none">{}</text>"#,
            LEFT - 5.0,
            LEFT - 8.0,
            py + 4.0,
            label(v)
        );
    }
    let _ = writeln!(out, "</g>");
    let _ = writeln!(
        out,
        r#"<text x="{:.2}" y="{:.2}" text-anchor="middle">t ({})</text>"#,
        LEFT + plot_w / 2.0,
        HEIGHT - 15.0,
        escape(time_unit)
    );
    let _ = writeln!(
        out,
        r#"<text x="20" y="{:.2}" text-anchor="middle" transform="rotate(-90 20 {:.2})">rate ({}/{})</text>"#,
        TOP + plot_h / 2.0,
        TOP + plot_h / 2.0,
        escape(value_unit),
        escape(time_unit)
    );

    for (i, (name, values)) in series.iter().enumerate() {
        let color = COLORS[i % COLORS.len()];
        let width = if i == 0 { 2.5 } else { 1.5 };
        let _ = writeln!(
            out,
            r#"<g id="{name}" fill="none" stroke="{color}" stroke-width="{width}"><title>{name}</title>"#
        );
        // Missing samples split the curve.
        let mut segment = Vec::new();
        let flush = |segment: &mut Vec<String>, out: &mut String| {
            if !segment.is_empty() {
                let _ = writeln!(out, r#"<polyline points="{}"/>"#, segment.join(" "));
                segment.clear();
            }
        };
        for (&t, &v) in times.iter().zip(values.iter()) {
            if is_missing(v) {
                flush(&mut segment, &mut out);
            } else {
                segment.push(format!("{:.2},{:.2}", x(t), y(v)));
            }
        }
        flush(&mut segment, &mut out);
        let _ = writeln!(out, "</g>");
    }

    let _ = writeln!(out, r#"<g id="legend">"#);
    for (i, (name, _)) in series.iter().enumerate() {
        let ly = TOP + 10.0 + 20.0 * i as f64;
        let lx = WIDTH - RIGHT + 15.0;
        let _ = writeln!(
            out,
            r#"<line x1="{lx:.2}" y1="{ly:.2}" x2="{:.2}" y2="{ly:.2}" stroke="{}" stroke-width="2"/><text x="{:.2}" y="{:.2}">{name}</text>"#,
            lx + 25.0,
            COLORS[i % COLORS.len()],
            lx + 32.0,
            ly + 4.0
        );
    }
    let _ = writeln!(out, "</g>");
    out.push_str("</svg>\n");
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use numdiff_core::Case;

    #[test]
    fn tick_positions() {
        assert_eq!(ticks(0.0, 24.0), vec![0.0, 5.0, 10.0, 15.0, 20.0]);
        assert_eq!(ticks(0.0, 120.0), vec![0.0, 20.0, 40.0, 60.0, 80.0, 100.0, 120.0]);
        assert_eq!(label(0.30000000000000004), "0.3");
        assert_eq!(label(-0.0), "0");
    }

    #[test]
    fn seven_labeled_curves() {
        let est = CaseEstimates::compute(&Case::Temperature.default_model(), Case::Temperature.default_grid()).unwrap();
        let svg = case_plot(&est);
        assert_eq!(svg.matches("<polyline").count(), 7);
        for name in ["analytic", "forward1", "backward1", "centered1", "forward2", "backward2", "centered2"] {
            assert!(svg.contains(&format!("<title>{name}</title>")), "{name}");
        }
        assert!(!svg.contains("NaN"));
    }
}
