//! Minimal SVG 1.1 line-plot emitter: no external renderer, pure text.

use std::collections::BTreeMap;

const WIDTH: f64 = 640.0;
const HEIGHT: f64 = 440.0;
const MARGIN_LEFT: f64 = 70.0;
const MARGIN_RIGHT: f64 = 150.0;
const MARGIN_TOP: f64 = 30.0;
const MARGIN_BOTTOM: f64 = 55.0;

const PALETTE: [&str; 6] = [
    "#1f77b4", "#d62728", "#2ca02c", "#9467bd", "#ff7f0e", "#8c564b",
];

pub struct PlotSpec {
    pub log_x: bool,
    pub log_y: bool,
    pub x_label: String,
    pub y_label: String,
    pub title: String,
}

/// One named series of (x, y) points; `dashed` marks reference curves.
pub struct Series {
    pub name: String,
    pub points: Vec<(f64, f64)>,
    pub dashed: bool,
}

fn transform(value: f64, log: bool) -> f64 {
    if log {
        value.ln()
    } else {
        value
    }
}

fn ticks(lo: f64, hi: f64) -> Vec<f64> {
    let count = 5;
    (0..=count)
        .map(|i| lo + (hi - lo) * i as f64 / count as f64)
        .collect()
}

fn format_tick(value: f64, log: bool) -> String {
    let shown = if log { value.exp() } else { value };
    if shown == 0.0 {
        "0".into()
    } else if shown.abs() >= 0.01 && shown.abs() < 10000.0 {
        format!("{shown:.3}")
    } else {
        format!("{shown:.2e}")
    }
}

/// Render the series as an SVG document. Returns None when no series has
/// at least one plottable point.
pub fn render(spec: &PlotSpec, series: &[Series]) -> Option<String> {
    let usable: Vec<(&Series, Vec<(f64, f64)>)> = series
        .iter()
        .map(|s| {
            let pts: Vec<(f64, f64)> = s
                .points
                .iter()
                .filter(|(x, y)| {
                    x.is_finite()
                        && y.is_finite()
                        && (!spec.log_x || *x > 0.0)
                        && (!spec.log_y || *y > 0.0)
                })
                .map(|(x, y)| (transform(*x, spec.log_x), transform(*y, spec.log_y)))
                .collect();
            (s, pts)
        })
        .filter(|(_, pts)| !pts.is_empty())
        .collect();
    if usable.is_empty() {
        return None;
    }

    let mut x_min = f64::INFINITY;
    let mut x_max = f64::NEG_INFINITY;
    let mut y_min = f64::INFINITY;
    let mut y_max = f64::NEG_INFINITY;
    for (_, pts) in &usable {
        for (x, y) in pts {
            x_min = x_min.min(*x);
            x_max = x_max.max(*x);
            y_min = y_min.min(*y);
            y_max = y_max.max(*y);
        }
    }
    if x_max == x_min {
        x_max = x_min + 1.0;
    }
    if y_max == y_min {
        y_max = y_min + 1.0;
    }
    let pad_y = 0.05 * (y_max - y_min);
    y_min -= pad_y;
    y_max += pad_y;

    let plot_w = WIDTH - MARGIN_LEFT - MARGIN_RIGHT;
    let plot_h = HEIGHT - MARGIN_TOP - MARGIN_BOTTOM;
    let to_px = |x: f64, y: f64| -> (f64, f64) {
        (
            MARGIN_LEFT + (x - x_min) / (x_max - x_min) * plot_w,
            MARGIN_TOP + (1.0 - (y - y_min) / (y_max - y_min)) * plot_h,
        )
    };

    let mut out = String::new();
    out.push_str(&format!(
        "<svg xmlns=\"http://www.w3.org/2000/svg\" version=\"1.1\" \
         width=\"{WIDTH}\" height=\"{HEIGHT}\" viewBox=\"0 0 {WIDTH} {HEIGHT}\">\n"
    ));
    out.push_str(&format!(
        "  <rect width=\"{WIDTH}\" height=\"{HEIGHT}\" fill=\"white\"/>\n"
    ));
    out.push_str(&format!(
        "  <text x=\"{}\" y=\"18\" font-family=\"sans-serif\" font-size=\"14\" \
         text-anchor=\"middle\">{}</text>\n",
        MARGIN_LEFT + plot_w / 2.0,
        escape(&spec.title)
    ));

    // Axes.
    let (x0, y0) = (MARGIN_LEFT, MARGIN_TOP + plot_h);
    out.push_str(&format!(
        "  <line x1=\"{x0}\" y1=\"{y0}\" x2=\"{}\" y2=\"{y0}\" stroke=\"black\"/>\n",
        MARGIN_LEFT + plot_w
    ));
    out.push_str(&format!(
        "  <line x1=\"{x0}\" y1=\"{y0}\" x2=\"{x0}\" y2=\"{MARGIN_TOP}\" stroke=\"black\"/>\n"
    ));
    for tick in ticks(x_min, x_max) {
        let (px, _) = to_px(tick, y_min);
        out.push_str(&format!(
            "  <line x1=\"{px}\" y1=\"{y0}\" x2=\"{px}\" y2=\"{}\" stroke=\"black\"/>\n",
            y0 + 4.0
        ));
        out.push_str(&format!(
            "  <text x=\"{px}\" y=\"{}\" font-family=\"sans-serif\" font-size=\"10\" \
             text-anchor=\"middle\">{}</text>\n",
            y0 + 16.0,
            format_tick(tick, spec.log_x)
        ));
    }
    for tick in ticks(y_min, y_max) {
        let (_, py) = to_px(x_min, tick);
        out.push_str(&format!(
            "  <line x1=\"{}\" y1=\"{py}\" x2=\"{x0}\" y2=\"{py}\" stroke=\"black\"/>\n",
            x0 - 4.0
        ));
        out.push_str(&format!(
            "  <text x=\"{}\" y=\"{}\" font-family=\"sans-serif\" font-size=\"10\" \
             text-anchor=\"end\">{}</text>\n",
            x0 - 7.0,
            py + 3.0,
            format_tick(tick, spec.log_y)
        ));
    }
    out.push_str(&format!(
        "  <text x=\"{}\" y=\"{}\" font-family=\"sans-serif\" font-size=\"12\" \
         text-anchor=\"middle\">{}</text>\n",
        MARGIN_LEFT + plot_w / 2.0,
        HEIGHT - 12.0,
        escape(&spec.x_label)
    ));
    out.push_str(&format!(
        "  <text x=\"16\" y=\"{}\" font-family=\"sans-serif\" font-size=\"12\" \
         text-anchor=\"middle\" transform=\"rotate(-90 16 {})\">{}</text>\n",
        MARGIN_TOP + plot_h / 2.0,
        MARGIN_TOP + plot_h / 2.0,
        escape(&spec.y_label)
    ));

    // Series paths and legend.
    for (index, (series, pts)) in usable.iter().enumerate() {
        let color = PALETTE[index % PALETTE.len()];
        let dash = if series.dashed {
            " stroke-dasharray=\"6 4\""
        } else {
            ""
        };
        let mut path = String::new();
        for (i, (x, y)) in pts.iter().enumerate() {
            let (px, py) = to_px(*x, *y);
            path.push_str(&format!(
                "{}{px:.2} {py:.2}",
                if i == 0 { "M" } else { " L" }
            ));
        }
        out.push_str(&format!(
            "  <path d=\"{path}\" fill=\"none\" stroke=\"{color}\" stroke-width=\"1.6\"{dash}/>\n"
        ));
        for (x, y) in pts {
            let (px, py) = to_px(*x, *y);
            out.push_str(&format!(
                "  <circle cx=\"{px:.2}\" cy=\"{py:.2}\" r=\"2.2\" fill=\"{color}\"/>\n"
            ));
        }
        let ly = MARGIN_TOP + 16.0 * index as f64 + 10.0;
        let lx = MARGIN_LEFT + plot_w + 10.0;
        out.push_str(&format!(
            "  <line x1=\"{lx}\" y1=\"{ly}\" x2=\"{}\" y2=\"{ly}\" stroke=\"{color}\" \
             stroke-width=\"1.6\"{dash}/>\n",
            lx + 18.0
        ));
        out.push_str(&format!(
            "  <text x=\"{}\" y=\"{}\" font-family=\"sans-serif\" font-size=\"10\">{}</text>\n",
            lx + 22.0,
            ly + 3.0,
            escape(&series.name)
        ));
    }
    out.push_str("</svg>\n");
    Some(out)
}

fn escape(text: &str) -> String {
    text.replace('&', "&amp;")
        .replace('<', "&lt;")
        .replace('>', "&gt;")
}

/// Aggregate CSV rows into per-metric mean series over the chosen x column.
pub fn series_from_rows(
    rows: &[(u32, u64, String, f64)],
    x_is_n: bool,
    metrics: Option<&[String]>,
) -> Vec<Series> {
    let mut groups: BTreeMap<String, BTreeMap<u64, Vec<f64>>> = BTreeMap::new();
    for (n, gates, metric, value) in rows {
        if let Some(wanted) = metrics {
            if !wanted.iter().any(|m| m == metric) {
                continue;
            }
        }
        let x = if x_is_n { u64::from(*n) } else { *gates };
        groups
            .entry(metric.clone())
            .or_default()
            .entry(x)
            .or_default()
            .push(*value);
    }
    groups
        .into_iter()
        .map(|(name, by_x)| Series {
            name,
            points: by_x
                .into_iter()
                .map(|(x, values)| (x as f64, values.iter().sum::<f64>() / values.len() as f64))
                .collect(),
            dashed: false,
        })
        .collect()
}
