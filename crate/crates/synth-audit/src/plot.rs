//! Self-rendered SVG plots: no plotting dependency, reviewable diffs.
//!
//! Two chart types cover the reporting needs: box plots of per-record AUC by
//! group, and line plots of mean AUC with standard-deviation bars across a
//! swept parameter.

const WIDTH: f64 = 640.0;
const HEIGHT: f64 = 420.0;
const MARGIN_LEFT: f64 = 60.0;
const MARGIN_RIGHT: f64 = 20.0;
const MARGIN_TOP: f64 = 30.0;
const MARGIN_BOTTOM: f64 = 70.0;

const PALETTE: [&str; 6] = [
    "#4878d0", "#ee854a", "#6acc64", "#d65f5f", "#956cb4", "#8c613c",
];

fn f(v: f64) -> String {
    format!("{:.2}", v)
}

struct Canvas {
    out: String,
}

impl Canvas {
    fn new(title: &str) -> Self {
        let mut out = String::new();
        out.push_str(&format!(
            "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"{WIDTH}\" height=\"{HEIGHT}\" \
             viewBox=\"0 0 {WIDTH} {HEIGHT}\" font-family=\"sans-serif\" font-size=\"12\">\n"
        ));
        out.push_str(&format!(
            "<rect width=\"{WIDTH}\" height=\"{HEIGHT}\" fill=\"white\"/>\n"
        ));
        out.push_str(&format!(
            "<text x=\"{}\" y=\"18\" text-anchor=\"middle\" font-size=\"14\">{}</text>\n",
            WIDTH / 2.0,
            escape(title)
        ));
        Self { out }
    }

    fn line(&mut self, x1: f64, y1: f64, x2: f64, y2: f64, stroke: &str, width: f64) {
        self.out.push_str(&format!(
            "<line x1=\"{}\" y1=\"{}\" x2=\"{}\" y2=\"{}\" stroke=\"{stroke}\" stroke-width=\"{width}\"/>\n",
            f(x1), f(y1), f(x2), f(y2)
        ));
    }

    fn rect(&mut self, x: f64, y: f64, w: f64, h: f64, fill: &str) {
        self.out.push_str(&format!(
            "<rect x=\"{}\" y=\"{}\" width=\"{}\" height=\"{}\" fill=\"{fill}\" stroke=\"#333\"/>\n",
            f(x), f(y), f(w), f(h)
        ));
    }

    fn circle(&mut self, x: f64, y: f64, r: f64, fill: &str) {
        self.out.push_str(&format!(
            "<circle cx=\"{}\" cy=\"{}\" r=\"{}\" fill=\"{fill}\"/>\n",
            f(x),
            f(y),
            f(r)
        ));
    }

    fn text(&mut self, x: f64, y: f64, anchor: &str, content: &str) {
        self.out.push_str(&format!(
            "<text x=\"{}\" y=\"{}\" text-anchor=\"{anchor}\">{}</text>\n",
            f(x),
            f(y),
            escape(content)
        ));
    }

    fn finish(mut self) -> String {
        self.out.push_str("</svg>\n");
        self.out
    }
}

fn escape(s: &str) -> String {
    s.replace('&', "&amp;").replace('<', "&lt;").replace('>', "&gt;")
}

/// Map a value in [lo, hi] to a y pixel (inverted axis).
fn y_px(v: f64, lo: f64, hi: f64) -> f64 {
    let span = (hi - lo).max(1e-9);
    HEIGHT - MARGIN_BOTTOM - (v - lo) / span * (HEIGHT - MARGIN_TOP - MARGIN_BOTTOM)
}

fn y_axis(canvas: &mut Canvas, lo: f64, hi: f64, label: &str) {
    canvas.line(
        MARGIN_LEFT,
        MARGIN_TOP,
        MARGIN_LEFT,
        HEIGHT - MARGIN_BOTTOM,
        "#333",
        1.0,
    );
    let ticks = 5;
    for t in 0..=ticks {
        let v = lo + (hi - lo) * t as f64 / ticks as f64;
        let y = y_px(v, lo, hi);
        canvas.line(MARGIN_LEFT - 4.0, y, MARGIN_LEFT, y, "#333", 1.0);
        canvas.text(MARGIN_LEFT - 8.0, y + 4.0, "end", &format!("{v:.2}"));
        canvas.line(MARGIN_LEFT, y, WIDTH - MARGIN_RIGHT, y, "#eee", 0.5);
    }
    canvas.text(14.0, MARGIN_TOP - 8.0, "start", label);
}

fn quartiles(sorted: &[f64]) -> (f64, f64, f64) {
    let q = |p: f64| -> f64 {
        let pos = p * (sorted.len() - 1) as f64;
        let lo = pos.floor() as usize;
        let hi = pos.ceil() as usize;
        let fract = pos - lo as f64;
        sorted[lo] * (1.0 - fract) + sorted[hi] * fract
    };
    (q(0.25), q(0.5), q(0.75))
}

/// Box plot of value distributions per labeled group.
pub fn box_plot(title: &str, y_label: &str, groups: &[(String, Vec<f64>)]) -> String {
    let mut canvas = Canvas::new(title);
    let lo = 0.0;
    let hi = 1.0;
    y_axis(&mut canvas, lo, hi, y_label);

    let plot_width = WIDTH - MARGIN_LEFT - MARGIN_RIGHT;
    let slot = plot_width / groups.len().max(1) as f64;
    for (i, (label, values)) in groups.iter().enumerate() {
        if values.is_empty() {
            continue;
        }
        let color = PALETTE[i % PALETTE.len()];
        let center = MARGIN_LEFT + slot * (i as f64 + 0.5);
        let mut sorted = values.clone();
        sorted.sort_by(f64::total_cmp);
        let (q1, median, q3) = quartiles(&sorted);
        let min = sorted[0];
        let max = sorted[sorted.len() - 1];
        let half = (slot * 0.3).min(40.0);

        canvas.line(center, y_px(min, lo, hi), center, y_px(q1, lo, hi), "#333", 1.0);
        canvas.line(center, y_px(q3, lo, hi), center, y_px(max, lo, hi), "#333", 1.0);
        canvas.line(center - half / 2.0, y_px(min, lo, hi), center + half / 2.0, y_px(min, lo, hi), "#333", 1.0);
        canvas.line(center - half / 2.0, y_px(max, lo, hi), center + half / 2.0, y_px(max, lo, hi), "#333", 1.0);
        canvas.rect(
            center - half,
            y_px(q3, lo, hi),
            2.0 * half,
            (y_px(q1, lo, hi) - y_px(q3, lo, hi)).max(1.0),
            color,
        );
        canvas.line(center - half, y_px(median, lo, hi), center + half, y_px(median, lo, hi), "#111", 2.0);
        for &v in &sorted {
            canvas.circle(center + half + 6.0, y_px(v, lo, hi), 2.0, "#555");
        }
        canvas.text(center, HEIGHT - MARGIN_BOTTOM + 18.0, "middle", label);
    }
    canvas.line(
        MARGIN_LEFT,
        HEIGHT - MARGIN_BOTTOM,
        WIDTH - MARGIN_RIGHT,
        HEIGHT - MARGIN_BOTTOM,
        "#333",
        1.0,
    );
    canvas.finish()
}

/// One line of a sweep plot: (x, mean, std) triples.
pub type Series = (String, Vec<(f64, f64, f64)>);

/// Line plot with error bars; x positions are spaced by rank so epsilon-style
/// log ranges stay readable.
pub fn line_plot(title: &str, x_label: &str, y_label: &str, series: &[Series]) -> String {
    let mut canvas = Canvas::new(title);
    let lo = 0.0;
    let hi = 1.0;
    y_axis(&mut canvas, lo, hi, y_label);

    let mut xs: Vec<f64> = series
        .iter()
        .flat_map(|(_, pts)| pts.iter().map(|p| p.0))
        .collect();
    xs.sort_by(f64::total_cmp);
    xs.dedup();
    let plot_width = WIDTH - MARGIN_LEFT - MARGIN_RIGHT;
    let x_px = |v: f64| -> f64 {
        let rank = xs.iter().position(|&x| x == v).unwrap_or(0);
        MARGIN_LEFT + plot_width * (rank as f64 + 0.5) / xs.len().max(1) as f64
    };

    for (i, &x) in xs.iter().enumerate() {
        let label = if x.is_infinite() {
            "inf".to_string()
        } else {
            format!("{x}")
        };
        let px = MARGIN_LEFT + plot_width * (i as f64 + 0.5) / xs.len() as f64;
        canvas.text(px, HEIGHT - MARGIN_BOTTOM + 18.0, "middle", &label);
    }
    canvas.text(
        WIDTH / 2.0,
        HEIGHT - MARGIN_BOTTOM + 36.0,
        "middle",
        x_label,
    );

    for (i, (label, points)) in series.iter().enumerate() {
        let color = PALETTE[i % PALETTE.len()];
        let mut sorted = points.clone();
        sorted.sort_by(|a, b| a.0.total_cmp(&b.0));
        for pair in sorted.windows(2) {
            canvas.line(
                x_px(pair[0].0),
                y_px(pair[0].1, lo, hi),
                x_px(pair[1].0),
                y_px(pair[1].1, lo, hi),
                color,
                1.5,
            );
        }
        for &(x, mean, std) in &sorted {
            let px = x_px(x);
            canvas.line(px, y_px(mean - std, lo, hi), px, y_px(mean + std, lo, hi), color, 1.0);
            canvas.circle(px, y_px(mean, lo, hi), 3.0, color);
        }
        canvas.text(
            WIDTH - MARGIN_RIGHT - 6.0,
            MARGIN_TOP + 16.0 * i as f64 + 12.0,
            "end",
            label,
        );
        canvas.circle(
            WIDTH - MARGIN_RIGHT - 120.0,
            MARGIN_TOP + 16.0 * i as f64 + 8.0,
            3.0,
            color,
        );
    }
    canvas.line(
        MARGIN_LEFT,
        HEIGHT - MARGIN_BOTTOM,
        WIDTH - MARGIN_RIGHT,
        HEIGHT - MARGIN_BOTTOM,
        "#333",
        1.0,
    );
    canvas.finish()
}
