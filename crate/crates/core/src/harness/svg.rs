//! Standalone SVG line charts of AFES against R or N.

use std::collections::BTreeMap;
use std::fmt::Write as _;
use std::path::Path;
use std::str::FromStr;

use super::grid::CellKey;
use super::stats::CellStats;
use crate::error::{Error, Result};

const WIDTH: f64 = 720.0;
const HEIGHT: f64 = 440.0;
const LEFT: f64 = 90.0;
const RIGHT: f64 = 210.0;
const TOP: f64 = 50.0;
const BOTTOM: f64 = 60.0;
const PALETTE: [&str; 8] = [
    "#1f77b4", "#d62728", "#2ca02c", "#ff7f0e", "#9467bd", "#8c564b", "#e377c2", "#17becf",
];

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum XAxis {
    R,
    N,
}

impl FromStr for XAxis {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.trim().to_ascii_lowercase().as_str() {
            "r" => Ok(XAxis::R),
            "n" => Ok(XAxis::N),
            other => Err(Error::Parse(format!(
                "x axis must be r or n, got `{other}`"
            ))),
        }
    }
}

impl XAxis {
    fn value(self, key: &CellKey) -> f64 {
        match self {
            XAxis::R => key.r as f64,
            XAxis::N => key.pop_size as f64,
        }
    }

    fn label(self) -> &'static str {
        match self {
            XAxis::R => "R",
            XAxis::N => "N",
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Series {
    pub label: String,
    /// `(x, afes)` sorted by x.
    pub points: Vec<(f64, f64)>,
}

/// Groups cells into one series per combination of everything except the
/// x-axis parameter. Labels name the algorithm plus any field that differs
/// between series.
pub fn build_series(stats: &[(CellKey, CellStats)], axis: XAxis) -> Vec<Series> {
    let strip = |k: &CellKey| {
        let mut k = *k;
        match axis {
            XAxis::R => k.r = 0,
            XAxis::N => k.pop_size = 0,
        }
        k
    };
    let mut groups: BTreeMap<CellKey, Vec<(f64, f64)>> = BTreeMap::new();
    for (key, s) in stats {
        groups
            .entry(strip(key))
            .or_default()
            .push((axis.value(key), s.afes));
    }
    let keys: Vec<CellKey> = groups.keys().copied().collect();
    let varies = |f: fn(&CellKey) -> String| {
        keys.iter()
            .map(f)
            .collect::<std::collections::BTreeSet<_>>()
            .len()
            > 1
    };
    let show_function = varies(|k| k.function.to_string());
    let show_dim = varies(|k| k.dimension.to_string());
    let show_n = axis != XAxis::N && varies(|k| k.pop_size.to_string());
    let show_pc = varies(|k| k.pc.to_string());
    let show_r = axis != XAxis::R && varies(|k| k.r.to_string());

    groups
        .into_iter()
        .map(|(k, mut points)| {
            points.sort_by(|a, b| a.0.total_cmp(&b.0));
            let mut parts = Vec::new();
            if show_function {
                parts.push(k.function.to_string());
            }
            parts.push(k.algorithm.to_string().to_uppercase());
            if show_dim {
                parts.push(format!("n={}", k.dimension));
            }
            if show_n {
                parts.push(format!("N={}", k.pop_size));
            }
            if show_pc {
                parts.push(format!("pc={}", k.pc));
            }
            if show_r {
                parts.push(format!("R={}", k.r));
            }
            Series {
                label: parts.join(" "),
                points,
            }
        })
        .collect()
}

fn escape(s: &str) -> String {
    s.replace('&', "&amp;")
        .replace('<', "&lt;")
        .replace('>', "&gt;")
        .replace('"', "&quot;")
}

fn tick_label(v: f64) -> String {
    if v.abs() >= 1e6 {
        format!("{:.2e}", v)
    } else if v.fract() == 0.0 {
        format!("{v:.0}")
    } else {
        format!("{v:.1}")
    }
}

/// Renders the chart. Series with a single point become a lone marker.
pub fn render_svg(series: &[Series], axis: XAxis, title: &str) -> String {
    let plot_w = WIDTH - LEFT - RIGHT;
    let plot_h = HEIGHT - TOP - BOTTOM;
    let all: Vec<(f64, f64)> = series
        .iter()
        .flat_map(|s| s.points.iter().copied())
        .collect();
    let (mut x_min, mut x_max) = all
        .iter()
        .fold((f64::INFINITY, f64::NEG_INFINITY), |(lo, hi), p| {
            (lo.min(p.0), hi.max(p.0))
        });
    if !x_min.is_finite() {
        (x_min, x_max) = (0.0, 1.0);
    }
    if x_max <= x_min {
        x_min -= 1.0;
        x_max += 1.0;
    }
    let y_top = all.iter().map(|p| p.1).fold(0.0, f64::max);
    let y_max = if y_top > 0.0 { y_top * 1.05 } else { 1.0 };
    let sx = |x: f64| LEFT + (x - x_min) / (x_max - x_min) * plot_w;
    let sy = |y: f64| TOP + plot_h - y / y_max * plot_h;

    let mut svg = String::new();
    let _ = writeln!(
        svg,
        r#"<?xml version="1.0" encoding="UTF-8" standalone="no"?>"#
    );
    let _ = writeln!(
        svg,
        r#"<svg xmlns="http://www.w3.org/2000/svg" version="1.1" width="{WIDTH}" height="{HEIGHT}" viewBox="0 0 {WIDTH} {HEIGHT}" font-family="sans-serif" font-size="12">"#
    );
    let _ = writeln!(
        svg,
        r#"<rect x="0" y="0" width="{WIDTH}" height="{HEIGHT}" fill="white"/>"#
    );
    let _ = writeln!(
        svg,
        r#"<text x="{:.2}" y="24" text-anchor="middle" font-size="15">{}</text>"#,
        LEFT + plot_w / 2.0,
        escape(title)
    );

    // axes
    let (x0, y0) = (LEFT, TOP + plot_h);
    let _ = writeln!(
        svg,
        r#"<line x1="{x0:.2}" y1="{y0:.2}" x2="{:.2}" y2="{y0:.2}" stroke="black"/>"#,
        LEFT + plot_w
    );
    let _ = writeln!(
        svg,
        r#"<line x1="{x0:.2}" y1="{y0:.2}" x2="{x0:.2}" y2="{TOP:.2}" stroke="black"/>"#
    );

    let mut xs: Vec<f64> = all.iter().map(|p| p.0).collect();
    xs.sort_by(f64::total_cmp);
    xs.dedup();
    for x in xs {
        let px = sx(x);
        let _ = writeln!(
            svg,
            r#"<line x1="{px:.2}" y1="{y0:.2}" x2="{px:.2}" y2="{:.2}" stroke="black"/>"#,
            y0 + 5.0
        );
        let _ = writeln!(
            svg,
            r#"<text x="{px:.2}" y="{:.2}" text-anchor="middle">{}</text>"#,
            y0 + 20.0,
            tick_label(x)
        );
    }
    for i in 0..=5 {
        let v = y_max * i as f64 / 5.0;
        let py = sy(v);
        let _ = writeln!(
            svg,
            r##"<line x1="{:.2}" y1="{py:.2}" x2="{:.2}" y2="{py:.2}" stroke="#dddddd"/>"##,
            LEFT,
            LEFT + plot_w
        );
        let _ = writeln!(
            svg,
            r#"<text x="{:.2}" y="{:.2}" text-anchor="end">{}</text>"#,
            LEFT - 8.0,
            py + 4.0,
            tick_label(v.round())
        );
    }
    let _ = writeln!(
        svg,
        r#"<text x="{:.2}" y="{:.2}" text-anchor="middle">{}</text>"#,
        LEFT + plot_w / 2.0,
        HEIGHT - 15.0,
        axis.label()
    );
    let _ = writeln!(
        svg,
        r#"<text x="20" y="{:.2}" text-anchor="middle" transform="rotate(-90 20 {:.2})">AFES</text>"#,
        TOP + plot_h / 2.0,
        TOP + plot_h / 2.0
    );

    for (i, s) in series.iter().enumerate() {
        let colour = PALETTE[i % PALETTE.len()];
        if s.points.len() >= 2 {
            let pts: Vec<String> = s
                .points
                .iter()
                .map(|&(x, y)| format!("{:.2},{:.2}", sx(x), sy(y)))
                .collect();
            let _ = writeln!(
                svg,
                r#"<polyline fill="none" stroke="{colour}" stroke-width="2" points="{}"/>"#,
                pts.join(" ")
            );
        }
        for &(x, y) in &s.points {
            let _ = writeln!(
                svg,
                r#"<circle cx="{:.2}" cy="{:.2}" r="3" fill="{colour}"/>"#,
                sx(x),
                sy(y)
            );
        }
        let ly = TOP + 10.0 + 20.0 * i as f64;
        let lx = LEFT + plot_w + 15.0;
        let _ = writeln!(
            svg,
            r#"<line x1="{lx:.2}" y1="{ly:.2}" x2="{:.2}" y2="{ly:.2}" stroke="{colour}" stroke-width="2"/>"#,
            lx + 25.0
        );
        let _ = writeln!(
            svg,
            r#"<text x="{:.2}" y="{:.2}">{}</text>"#,
            lx + 32.0,
            ly + 4.0,
            escape(&s.label)
        );
    }
    svg.push_str("</svg>\n");
    svg
}

/// Plots AFES against `axis` and writes the SVG to `path`.
pub fn emit_svg_plot(stats: &[(CellKey, CellStats)], axis: XAxis, path: &Path) -> Result<()> {
    let series = build_series(stats, axis);
    let functions: std::collections::BTreeSet<String> =
        stats.iter().map(|(k, _)| k.function.to_string()).collect();
    let title = format!(
        "AFES vs {} ({})",
        axis.label(),
        functions.into_iter().collect::<Vec<_>>().join(", ")
    );
    std::fs::write(path, render_svg(&series, axis, &title)).map_err(|source| Error::Io {
        path: path.to_path_buf(),
        source,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::functions::FunctionId;
    use crate::population::Algorithm;

    fn stats_for(algorithm: Algorithm, afes: impl Fn(usize) -> f64) -> Vec<(CellKey, CellStats)> {
        (1..=10)
            .map(|r| {
                (
                    CellKey {
                        function: FunctionId::Rastrigin,
                        algorithm,
                        dimension: 20,
                        pop_size: 100,
                        pc: 0.3,
                        r,
                    },
                    CellStats {
                        best_run_fes: 0,
                        afes: afes(r),
                        worst_run_fes: 0,
                        best_fitness: 0.0,
                        avg_fitness: 0.0,
                        worst_fitness: 0.0,
                        success_pct: 100.0,
                    },
                )
            })
            .collect()
    }

    fn polyline_ys(svg: &str) -> Vec<Vec<f64>> {
        svg.lines()
            .filter(|l| l.starts_with("<polyline"))
            .map(|l| {
                let pts = l
                    .split("points=\"")
                    .nth(1)
                    .unwrap()
                    .split('"')
                    .next()
                    .unwrap();
                pts.split(' ')
                    .map(|p| p.split(',').nth(1).unwrap().parse::<f64>().unwrap())
                    .collect()
            })
            .collect()
    }

    #[test]
    fn one_polyline_per_algorithm() {
        let mut stats = stats_for(Algorithm::Gas3, |r| 1000.0 * r as f64);
        stats.extend(stats_for(Algorithm::Gas3km, |r| 800.0 * r as f64));
        let series = build_series(&stats, XAxis::R);
        assert_eq!(series.len(), 2);
        assert_eq!(series[0].label, "GAS3");
        assert_eq!(series[1].label, "GAS3KM");
        let svg = render_svg(&series, XAxis::R, "t");
        assert_eq!(svg.matches("<polyline").count(), 2);
        assert!(svg.contains(">AFES<") && svg.contains(">R<"));
    }

    #[test]
    fn increasing_series_rises_on_screen() {
        let stats = stats_for(Algorithm::Gas3km, |r| (r * r) as f64);
        let svg = render_svg(&build_series(&stats, XAxis::R), XAxis::R, "t");
        let ys = &polyline_ys(&svg)[0];
        assert_eq!(ys.len(), 10);
        assert!(ys.windows(2).all(|w| w[1] < w[0]), "{ys:?}");
    }

    #[test]
    fn single_point_is_a_marker() {
        let stats = stats_for(Algorithm::Gas3, |_| 5.0)[..1].to_vec();
        let svg = render_svg(&build_series(&stats, XAxis::R), XAxis::R, "t");
        assert_eq!(svg.matches("<polyline").count(), 0);
        assert_eq!(svg.matches("<circle").count(), 1);
    }

    #[test]
    fn rendering_is_deterministic() {
        let dir = tempfile::tempdir().unwrap();
        let stats = stats_for(Algorithm::Gas3km, |r| 10.0 / r as f64);
        let (a, b) = (dir.path().join("a.svg"), dir.path().join("b.svg"));
        emit_svg_plot(&stats, XAxis::R, &a).unwrap();
        emit_svg_plot(&stats, XAxis::R, &b).unwrap();
        assert_eq!(std::fs::read(a).unwrap(), std::fs::read(b).unwrap());
    }

    #[test]
    fn labels_are_escaped() {
        let svg = render_svg(
            &[Series {
                label: "a<b&c".into(),
                points: vec![(1.0, 1.0), (2.0, 2.0)],
            }],
            XAxis::N,
            "x",
        );
        assert!(svg.contains("a&lt;b&amp;c"));
    }
}
