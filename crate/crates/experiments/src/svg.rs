//! Standalone SVG line plots.

use std::fmt::Write;
use std::path::{Path, PathBuf};

use crate::error::Result;

const WIDTH: f64 = 640.0;
const HEIGHT: f64 = 420.0;
const MARGIN_LEFT: f64 = 80.0;
const MARGIN_RIGHT: f64 = 150.0;
const MARGIN_TOP: f64 = 40.0;
const MARGIN_BOTTOM: f64 = 55.0;
const COLORS: [&str; 6] = ["#1f77b4", "#d62728", "#2ca02c", "#9467bd", "#ff7f0e", "#17becf"];

#[derive(Clone, Debug, PartialEq)]
pub struct Series {
    pub name: String,
    pub points: Vec<(f64, f64)>,
}

#[derive(Clone, Debug, PartialEq)]
pub struct Plot {
    pub title: String,
    pub x_label: String,
    pub y_label: String,
    pub log_x: bool,
    pub log_y: bool,
    pub series: Vec<Series>,
}

struct Axis {
    log: bool,
    lo: f64,
    hi: f64,
    ticks: Vec<f64>,
}

impl Axis {
    fn new(values: impl Iterator<Item = f64>, log: bool) -> Self {
        let mapped: Vec<f64> = values.filter_map(|v| map(v, log)).collect();
        let (mut lo, mut hi) = mapped
            .iter()
            .fold((f64::INFINITY, f64::NEG_INFINITY), |(a, b), &v| (a.min(v), b.max(v)));
        if !lo.is_finite() {
            (lo, hi) = (0.0, 1.0);
        }
        if hi - lo < 1e-12 {
            lo -= 0.5;
            hi += 0.5;
        }
        let pad = 0.05 * (hi - lo);
        lo -= pad;
        hi += pad;
        let step = nice_step((hi - lo) / 5.0, log);
        let first = (lo / step).ceil() as i64;
        let last = (hi / step).floor() as i64;
        let ticks = (first..=last).map(|i| i as f64 * step).collect();
        Self { log, lo, hi, ticks }
    }

    fn fraction(&self, v: f64) -> Option<f64> {
        map(v, self.log).map(|m| (m - self.lo) / (self.hi - self.lo))
    }

    fn label(&self, tick: f64) -> String {
        if self.log {
            format!("{:.0e}", 10f64.powf(tick))
        } else if tick != 0.0 && (tick.abs() < 1e-2 || tick.abs() >= 1e4) {
            format!("{tick:.1e}")
        } else {
            format!("{}", (tick * 1e6).round() / 1e6)
        }
    }
}

fn map(v: f64, log: bool) -> Option<f64> {
    match (log, v) {
        (true, v) if v > 0.0 && v.is_finite() => Some(v.log10()),
        (false, v) if v.is_finite() => Some(v),
        _ => None,
    }
}

/// 1, 2 or 5 times a power of ten; whole decades on log axes.
fn nice_step(raw: f64, log: bool) -> f64 {
    if log {
        return raw.ceil().max(1.0);
    }
    let mag = 10f64.powf(raw.log10().floor());
    let r = raw / mag;
    let m = if r <= 1.0 {
        1.0
    } else if r <= 2.0 {
        2.0
    } else if r <= 5.0 {
        5.0
    } else {
        10.0
    };
    m * mag
}

fn escape(s: &str) -> String {
    s.replace('&', "&amp;").replace('<', "&lt;").replace('>', "&gt;")
}

impl Plot {
    pub fn render(&self) -> String {
        let pw = WIDTH - MARGIN_LEFT - MARGIN_RIGHT;
        let ph = HEIGHT - MARGIN_TOP - MARGIN_BOTTOM;
        let all = || self.series.iter().flat_map(|s| s.points.iter().copied());
        let xa = Axis::new(all().map(|p| p.0), self.log_x);
        let ya = Axis::new(all().map(|p| p.1), self.log_y);
        let px = |f: f64| MARGIN_LEFT + f * pw;
        let py = |f: f64| MARGIN_TOP + (1.0 - f) * ph;

        let mut out = String::new();
        let _ = writeln!(
            out,
            r#"<svg xmlns="http://www.w3.org/2000/svg" width="{WIDTH}" height="{HEIGHT}" viewBox="0 0 {WIDTH} {HEIGHT}" font-family="sans-serif" font-size="12">"#
        );
        let _ = writeln!(out, r#"<rect width="100%" height="100%" fill="white"/>"#);
        let _ = writeln!(
            out,
            r#"<text x="{}" y="22" text-anchor="middle" font-size="14">{}</text>"#,
            MARGIN_LEFT + pw / 2.0,
            escape(&self.title)
        );
        for &t in &xa.ticks {
            let x = px((t - xa.lo) / (xa.hi - xa.lo));
            let _ = writeln!(
                out,
                r##"<line x1="{x:.2}" y1="{:.2}" x2="{x:.2}" y2="{:.2}" stroke="#ddd"/><text x="{x:.2}" y="{:.2}" text-anchor="middle">{}</text>"##,
                MARGIN_TOP,
                MARGIN_TOP + ph,
                MARGIN_TOP + ph + 16.0,
                xa.label(t)
            );
        }
        for &t in &ya.ticks {
            let y = py((t - ya.lo) / (ya.hi - ya.lo));
            let _ = writeln!(
                out,
                r##"<line x1="{:.2}" y1="{y:.2}" x2="{:.2}" y2="{y:.2}" stroke="#ddd"/><text x="{:.2}" y="{:.2}" text-anchor="end">{}</text>"##,
                MARGIN_LEFT,
                MARGIN_LEFT + pw,
                MARGIN_LEFT - 6.0,
                y + 4.0,
                ya.label(t)
            );
        }
        let _ = writeln!(
            out,
            r#"<rect x="{MARGIN_LEFT}" y="{MARGIN_TOP}" width="{pw}" height="{ph}" fill="none" stroke="black"/>"#
        );
        let _ = writeln!(
            out,
            r#"<text x="{:.2}" y="{:.2}" text-anchor="middle">{}</text>"#,
            MARGIN_LEFT + pw / 2.0,
            HEIGHT - 12.0,
            escape(&self.x_label)
        );
        let _ = writeln!(
            out,
            r#"<text transform="translate(18 {:.2}) rotate(-90)" text-anchor="middle">{}</text>"#,
            MARGIN_TOP + ph / 2.0,
            escape(&self.y_label)
        );

        for (i, s) in self.series.iter().enumerate() {
            let color = COLORS[i % COLORS.len()];
            let pts: Vec<String> = s
                .points
                .iter()
                .filter_map(|&(x, y)| Some(format!("{:.2},{:.2}", px(xa.fraction(x)?), py(ya.fraction(y)?))))
                .collect();
            let _ = writeln!(
                out,
                r#"<polyline fill="none" stroke="{color}" stroke-width="1.5" points="{}"/>"#,
                pts.join(" ")
            );
            for p in &pts {
                let (x, y) = p.split_once(',').expect("formatted pair");
                let _ = writeln!(out, r#"<circle cx="{x}" cy="{y}" r="2.5" fill="{color}"/>"#);
            }
            let ly = MARGIN_TOP + 12.0 + 18.0 * i as f64;
            let lx = MARGIN_LEFT + pw + 12.0;
            let _ = writeln!(
                out,
                r#"<line x1="{lx:.2}" y1="{ly:.2}" x2="{:.2}" y2="{ly:.2}" stroke="{color}" stroke-width="2"/><text x="{:.2}" y="{:.2}">{}</text>"#,
                lx + 20.0,
                lx + 26.0,
                ly + 4.0,
                escape(&s.name)
            );
        }
        out.push_str("</svg>\n");
        out
    }

    pub fn write(&self, dir: &Path, id: &str) -> Result<PathBuf> {
        let path = dir.join(format!("{id}.svg"));
        std::fs::write(&path, self.render())?;
        Ok(path)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn plot(log: bool) -> Plot {
        Plot {
            title: "a < b".into(),
            x_label: "t".into(),
            y_label: "d".into(),
            log_x: log,
            log_y: log,
            series: vec![
                Series { name: "one".into(), points: vec![(1e-3, 1e-6), (1e-2, 1e-4)] },
                Series { name: "two".into(), points: vec![(1e-3, 1e-5), (1e-2, 1e-3)] },
            ],
        }
    }

    #[test]
    fn renders_every_series_without_external_references() {
        let svg = plot(true).render();
        assert!(svg.starts_with("<svg xmlns=\"http://www.w3.org/2000/svg\""));
        assert_eq!(svg.matches("<polyline").count(), 2);
        assert!(svg.contains("a &lt; b"));
        assert!(!svg.contains("href"));
        assert!(svg.contains("1e-4"));
    }

    #[test]
    fn linear_axes_get_round_ticks() {
        assert_eq!(nice_step(0.3, false), 0.5);
        assert_eq!(nice_step(1.7, true), 2.0);
        let svg = plot(false).render();
        assert_eq!(svg.matches("<circle").count(), 4);
    }
}
