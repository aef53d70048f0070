//! Self-contained SVG emission for convergence plots: log10 relative
//! distance against iteration, one polyline per series, fixed 900x600
//! viewport, no external assets. Relative distances are clamped below at
//! 1e-16, the machine-precision floor of the traces.

/// One plotted series: relative distances indexed by iteration.
pub struct PlotSeries {
    pub label: String,
    pub values: Vec<f64>,
}

const WIDTH: f64 = 900.0;
const HEIGHT: f64 = 600.0;
const MARGIN_LEFT: f64 = 70.0;
const MARGIN_RIGHT: f64 = 20.0;
const MARGIN_TOP: f64 = 40.0;
const MARGIN_BOTTOM: f64 = 50.0;
const FLOOR: f64 = 1e-16;

const PALETTE: [&str; 8] = [
    "#1f77b4", "#ff7f0e", "#2ca02c", "#d62728", "#9467bd", "#8c564b", "#e377c2", "#7f7f7f",
];

fn log10_clamped(v: f64) -> f64 {
    v.max(FLOOR).log10()
}

/// Renders the plot. `title` lands in the header text; series colors cycle
/// through a fixed palette in order.
pub fn render_convergence_svg(title: &str, series: &[PlotSeries]) -> String {
    let max_iter = series
        .iter()
        .map(|s| s.values.len().saturating_sub(1))
        .max()
        .unwrap_or(1)
        .max(1);
    let y_min_log = series
        .iter()
        .flat_map(|s| s.values.iter())
        .map(|&v| log10_clamped(v))
        .fold(f64::INFINITY, f64::min)
        .floor()
        .clamp(log10_clamped(FLOOR), 0.0);
    let y_max_log = 0.0_f64.max(
        series
            .iter()
            .flat_map(|s| s.values.iter())
            .map(|&v| log10_clamped(v))
            .fold(f64::NEG_INFINITY, f64::max)
            .ceil(),
    );

    let plot_w = WIDTH - MARGIN_LEFT - MARGIN_RIGHT;
    let plot_h = HEIGHT - MARGIN_TOP - MARGIN_BOTTOM;
    let x_of = |iter: f64| MARGIN_LEFT + plot_w * iter / max_iter as f64;
    let y_of =
        |log_v: f64| MARGIN_TOP + plot_h * (y_max_log - log_v) / (y_max_log - y_min_log).max(1.0);

    let mut svg = String::new();
    svg.push_str(&format!(
        "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"{WIDTH}\" height=\"{HEIGHT}\" viewBox=\"0 0 {WIDTH} {HEIGHT}\">\n"
    ));
    svg.push_str("<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n");
    svg.push_str(&format!(
        "<text x=\"{}\" y=\"22\" font-family=\"sans-serif\" font-size=\"16\" text-anchor=\"middle\">{}</text>\n",
        WIDTH / 2.0,
        title
    ));

    // axes
    svg.push_str(&format!(
        "<line x1=\"{MARGIN_LEFT}\" y1=\"{}\" x2=\"{}\" y2=\"{}\" stroke=\"black\"/>\n",
        HEIGHT - MARGIN_BOTTOM,
        WIDTH - MARGIN_RIGHT,
        HEIGHT - MARGIN_BOTTOM
    ));
    svg.push_str(&format!(
        "<line x1=\"{MARGIN_LEFT}\" y1=\"{MARGIN_TOP}\" x2=\"{MARGIN_LEFT}\" y2=\"{}\" stroke=\"black\"/>\n",
        HEIGHT - MARGIN_BOTTOM
    ));

    // y ticks at integer powers of ten (thinned to at most ~9 labels)
    let span = (y_max_log - y_min_log).max(1.0) as i64;
    let stride = ((span as f64 / 8.0).ceil() as i64).max(1);
    let mut level = y_min_log as i64;
    while level <= y_max_log as i64 {
        let y = y_of(level as f64);
        svg.push_str(&format!(
            "<line x1=\"{}\" y1=\"{y:.1}\" x2=\"{}\" y2=\"{y:.1}\" stroke=\"#dddddd\"/>\n",
            MARGIN_LEFT,
            WIDTH - MARGIN_RIGHT
        ));
        svg.push_str(&format!(
            "<text x=\"{}\" y=\"{:.1}\" font-family=\"sans-serif\" font-size=\"11\" text-anchor=\"end\">1e{}</text>\n",
            MARGIN_LEFT - 6.0,
            y + 4.0,
            level
        ));
        level += stride;
    }

    // x ticks
    let x_ticks = 8usize;
    for k in 0..=x_ticks {
        let iter = max_iter as f64 * k as f64 / x_ticks as f64;
        let x = x_of(iter);
        svg.push_str(&format!(
            "<line x1=\"{x:.1}\" y1=\"{}\" x2=\"{x:.1}\" y2=\"{}\" stroke=\"black\"/>\n",
            HEIGHT - MARGIN_BOTTOM,
            HEIGHT - MARGIN_BOTTOM + 5.0
        ));
        svg.push_str(&format!(
            "<text x=\"{x:.1}\" y=\"{}\" font-family=\"sans-serif\" font-size=\"11\" text-anchor=\"middle\">{}</text>\n",
            HEIGHT - MARGIN_BOTTOM + 18.0,
            iter.round() as usize
        ));
    }

    // axis labels
    svg.push_str(&format!(
        "<text x=\"{}\" y=\"{}\" font-family=\"sans-serif\" font-size=\"13\" text-anchor=\"middle\">iteration</text>\n",
        MARGIN_LEFT + plot_w / 2.0,
        HEIGHT - 10.0
    ));
    svg.push_str(&format!(
        "<text x=\"16\" y=\"{}\" font-family=\"sans-serif\" font-size=\"13\" text-anchor=\"middle\" transform=\"rotate(-90 16 {})\">relative distance</text>\n",
        MARGIN_TOP + plot_h / 2.0,
        MARGIN_TOP + plot_h / 2.0
    ));

    // polylines
    for (idx, s) in series.iter().enumerate() {
        let color = PALETTE[idx % PALETTE.len()];
        let mut points = String::new();
        for (t, &v) in s.values.iter().enumerate() {
            points.push_str(&format!("{:.2},{:.2} ", x_of(t as f64), y_of(log10_clamped(v))));
        }
        svg.push_str(&format!(
            "<polyline fill=\"none\" stroke=\"{color}\" stroke-width=\"1.5\" points=\"{}\"/>\n",
            points.trim_end()
        ));
    }

    // legend
    let legend_x = MARGIN_LEFT + 12.0;
    for (idx, s) in series.iter().enumerate() {
        let color = PALETTE[idx % PALETTE.len()];
        let y = MARGIN_TOP + 14.0 + 18.0 * idx as f64;
        svg.push_str(&format!(
            "<line x1=\"{legend_x}\" y1=\"{y:.1}\" x2=\"{}\" y2=\"{y:.1}\" stroke=\"{color}\" stroke-width=\"2\"/>\n",
            legend_x + 26.0
        ));
        svg.push_str(&format!(
            "<text x=\"{}\" y=\"{:.1}\" font-family=\"sans-serif\" font-size=\"12\">{}</text>\n",
            legend_x + 32.0,
            y + 4.0,
            s.label
        ));
    }

    svg.push_str("</svg>\n");
    svg
}
