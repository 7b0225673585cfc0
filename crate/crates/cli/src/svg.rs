//! Minimal SVG line plots with optional log y axis, drawn from CSV text.

use crate::output::PlotSpec;
use std::collections::BTreeMap;
use std::fmt::Write as _;

const W: f64 = 720.0;
const H: f64 = 440.0;
const LEFT: f64 = 80.0;
const RIGHT: f64 = 170.0;
const TOP: f64 = 40.0;
const BOTTOM: f64 = 50.0;
const COLORS: [&str; 8] = ["#1f77b4", "#d62728", "#2ca02c", "#ff7f0e", "#9467bd", "#8c564b", "#e377c2", "#17becf"];

/// Splits one CSV line, honoring double-quoted fields.
fn split_csv(line: &str) -> Vec<String> {
    let mut out = Vec::new();
    let mut cur = String::new();
    let mut quoted = false;
    let mut chars = line.chars().peekable();
    while let Some(c) = chars.next() {
        match c {
            '"' if quoted && chars.peek() == Some(&'"') => {
                cur.push('"');
                chars.next();
            }
            '"' => quoted = !quoted,
            ',' if !quoted => out.push(std::mem::take(&mut cur)),
            c => cur.push(c),
        }
    }
    out.push(cur);
    out
}

fn escape(s: &str) -> String {
    s.replace('&', "&amp;").replace('<', "&lt;").replace('>', "&gt;")
}

fn nice_ticks(lo: f64, hi: f64) -> Vec<f64> {
    let span = (hi - lo).max(1e-300);
    let raw = span / 5.0;
    let mag = 10f64.powf(raw.log10().floor());
    let step = [1.0, 2.0, 5.0, 10.0].iter().map(|m| m * mag).find(|s| span / s <= 6.0).unwrap_or(10.0 * mag);
    let first = (lo / step).ceil() as i64;
    let last = (hi / step).floor() as i64;
    (first..=last).map(|i| i as f64 * step).collect()
}

fn tick_label(v: f64) -> String {
    if v == 0.0 || (1e-3..1e4).contains(&v.abs()) {
        let s = format!("{v:.3}");
        s.trim_end_matches('0').trim_end_matches('.').to_string()
    } else {
        format!("{v:.0e}")
    }
}

/// Renders `spec` from the CSV text of its table.
pub fn plot_csv(csv: &str, spec: &PlotSpec) -> Result<String, String> {
    let mut lines = csv.lines();
    let header = split_csv(lines.next().ok_or("empty CSV")?);
    let col = |name: &str| header.iter().position(|h| h == name).ok_or_else(|| format!("no column `{name}`"));
    let (xi, yi) = (col(&spec.x)?, col(&spec.y)?);
    let si: Vec<usize> = spec.series.iter().map(|s| col(s)).collect::<Result<_, _>>()?;

    let mut series: BTreeMap<String, Vec<(f64, f64)>> = BTreeMap::new();
    let mut order = Vec::new();
    for line in lines.filter(|l| !l.is_empty()) {
        let f = split_csv(line);
        let (Ok(x), Ok(y)) = (f[xi].parse::<f64>(), f[yi].parse::<f64>()) else { continue };
        let y = if spec.log_y { y.abs() } else { y };
        if !x.is_finite() || !y.is_finite() || (spec.log_y && y <= 0.0) {
            continue;
        }
        let key = si.iter().map(|&i| format!("{}={}", header[i], f[i])).collect::<Vec<_>>().join(" ");
        if !series.contains_key(&key) {
            order.push(key.clone());
        }
        series.entry(key).or_default().push((x, y));
    }
    if series.is_empty() {
        return Err("no finite points to plot".into());
    }
    let ty = |y: f64| if spec.log_y { y.log10() } else { y };
    let pts = series.values().flatten();
    let (mut x0, mut x1, mut y0, mut y1) = (f64::MAX, f64::MIN, f64::MAX, f64::MIN);
    for &(x, y) in pts {
        x0 = x0.min(x);
        x1 = x1.max(x);
        y0 = y0.min(ty(y));
        y1 = y1.max(ty(y));
    }
    if spec.log_y {
        y0 = y0.floor();
        y1 = y1.ceil();
    }
    if x1 <= x0 {
        x1 = x0 + 1.0;
    }
    if y1 <= y0 {
        y1 = y0 + 1.0;
    }
    let (pw, ph) = (W - LEFT - RIGHT, H - TOP - BOTTOM);
    let sx = |x: f64| LEFT + (x - x0) / (x1 - x0) * pw;
    let sy = |y: f64| TOP + ph - (ty(y) - y0) / (y1 - y0) * ph;

    let mut s = String::new();
    writeln!(s, r#"<svg xmlns="http://www.w3.org/2000/svg" width="{W}" height="{H}" font-family="sans-serif" font-size="12">"#).unwrap();
    writeln!(s, r#"<rect width="{W}" height="{H}" fill="white"/>"#).unwrap();
    writeln!(s, r#"<text x="{}" y="22" text-anchor="middle" font-size="14">{}</text>"#, LEFT + pw / 2.0, escape(&spec.title)).unwrap();
    writeln!(s, r#"<rect x="{LEFT}" y="{TOP}" width="{pw}" height="{ph}" fill="none" stroke="black"/>"#).unwrap();
    for t in nice_ticks(x0, x1) {
        let x = sx(t);
        writeln!(s, r#"<line x1="{x:.2}" y1="{:.2}" x2="{x:.2}" y2="{:.2}" stroke="black"/>"#, TOP + ph, TOP + ph + 5.0).unwrap();
        writeln!(s, r#"<text x="{x:.2}" y="{:.2}" text-anchor="middle">{}</text>"#, TOP + ph + 18.0, tick_label(t)).unwrap();
    }
    let yticks: Vec<f64> = if spec.log_y {
        let step = ((y1 - y0) / 8.0).ceil().max(1.0);
        (0..).map(|i| y0 + i as f64 * step).take_while(|e| *e <= y1).collect()
    } else {
        nice_ticks(y0, y1)
    };
    for t in yticks {
        let y = TOP + ph - (t - y0) / (y1 - y0) * ph;
        let label = if spec.log_y { format!("1e{}", t as i64) } else { tick_label(t) };
        writeln!(s, r#"<line x1="{:.2}" y1="{y:.2}" x2="{LEFT}" y2="{y:.2}" stroke="black"/>"#, LEFT - 5.0).unwrap();
        writeln!(s, r#"<text x="{:.2}" y="{:.2}" text-anchor="end">{label}</text>"#, LEFT - 8.0, y + 4.0).unwrap();
    }
    writeln!(s, r#"<text x="{}" y="{}" text-anchor="middle">{}</text>"#, LEFT + pw / 2.0, H - 12.0, escape(&spec.x)).unwrap();
    writeln!(
        s,
        r#"<text x="18" y="{}" text-anchor="middle" transform="rotate(-90 18 {})">{}</text>"#,
        TOP + ph / 2.0,
        TOP + ph / 2.0,
        escape(&if spec.log_y { format!("|{}|", spec.y) } else { spec.y.to_string() })
    )
    .unwrap();
    for (i, key) in order.iter().enumerate() {
        let color = COLORS[i % COLORS.len()];
        let path: Vec<String> = series[key].iter().map(|&(x, y)| format!("{:.2},{:.2}", sx(x), sy(y))).collect();
        writeln!(s, r#"<polyline fill="none" stroke="{color}" stroke-width="1.5" points="{}"/>"#, path.join(" ")).unwrap();
        let ly = TOP + 10.0 + 18.0 * i as f64;
        writeln!(s, r#"<line x1="{:.2}" y1="{ly:.2}" x2="{:.2}" y2="{ly:.2}" stroke="{color}" stroke-width="2"/>"#, W - RIGHT + 10.0, W - RIGHT + 30.0).unwrap();
        writeln!(s, r#"<text x="{:.2}" y="{:.2}">{}</text>"#, W - RIGHT + 35.0, ly + 4.0, escape(key)).unwrap();
    }
    s.push_str("</svg>\n");
    Ok(s)
}
