//! Self-contained SVG emission: line charts for 1-D sweeps and diverging
//! heatmaps for 2-D surfaces. No plotting dependency; output is plain
//! deterministic markup.
//!
//! The diverging palette is fixed (blue #2166AC → white → red #B2182B) so
//! surfaces stay comparable across runs; zero-centered scaling puts white
//! exactly at zero for signed quantities such as the work output.

pub struct Series {
    pub label: String,
    pub points: Vec<(f64, f64)>,
}

const WIDTH: f64 = 840.0;
const HEIGHT: f64 = 560.0;
const MARGIN_L: f64 = 80.0;
const MARGIN_R: f64 = 170.0;
const MARGIN_T: f64 = 42.0;
const MARGIN_B: f64 = 64.0;

const LINE_COLORS: [&str; 6] = [
    "#2166AC", "#B2182B", "#1B7837", "#E08214", "#762A83", "#4D4D4D",
];

const BLUE: (f64, f64, f64) = (33.0, 102.0, 172.0);
const WHITE: (f64, f64, f64) = (255.0, 255.0, 255.0);
const RED: (f64, f64, f64) = (178.0, 24.0, 43.0);

fn lerp(a: (f64, f64, f64), b: (f64, f64, f64), t: f64) -> String {
    let t = t.clamp(0.0, 1.0);
    format!(
        "rgb({},{},{})",
        (a.0 + (b.0 - a.0) * t).round() as u8,
        (a.1 + (b.1 - a.1) * t).round() as u8,
        (a.2 + (b.2 - a.2) * t).round() as u8
    )
}

/// Diverging color for t ∈ [-1, 1]: blue below zero, white at zero, red above.
fn diverging(t: f64) -> String {
    if t < 0.0 {
        lerp(WHITE, BLUE, -t)
    } else {
        lerp(WHITE, RED, t)
    }
}

/// "Nice" tick positions covering [min, max].
fn ticks(min: f64, max: f64, target: usize) -> Vec<f64> {
    if !(max > min) {
        return vec![min];
    }
    let raw = (max - min) / target as f64;
    let mag = 10f64.powf(raw.log10().floor());
    let norm = raw / mag;
    let step = mag
        * if norm < 1.5 {
            1.0
        } else if norm < 3.5 {
            2.0
        } else if norm < 7.5 {
            5.0
        } else {
            10.0
        };
    let mut t = (min / step).ceil() * step;
    let mut out = Vec::new();
    while t <= max + 1e-9 * step {
        // snap tiny residuals to zero so labels stay clean
        out.push(if t.abs() < 1e-12 * step { 0.0 } else { t });
        t += step;
    }
    out
}

fn fmt_tick(v: f64) -> String {
    if v == 0.0 {
        return "0".into();
    }
    let a = v.abs();
    if (1e-3..1e4).contains(&a) {
        let s = format!("{v:.4}");
        let s = s.trim_end_matches('0').trim_end_matches('.').to_string();
        s
    } else {
        format!("{v:.2e}")
    }
}

fn xml_escape(s: &str) -> String {
    s.replace('&', "&amp;").replace('<', "&lt;").replace('>', "&gt;")
}

struct Frame {
    x0: f64,
    x1: f64,
    y0: f64,
    y1: f64,
}

impl Frame {
    fn px(&self, x: f64) -> f64 {
        MARGIN_L + (x - self.x0) / (self.x1 - self.x0) * (WIDTH - MARGIN_L - MARGIN_R)
    }
    fn py(&self, y: f64) -> f64 {
        HEIGHT - MARGIN_B - (y - self.y0) / (self.y1 - self.y0) * (HEIGHT - MARGIN_T - MARGIN_B)
    }
}

fn chart_header(title: &str) -> String {
    format!(
        "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"{WIDTH}\" height=\"{HEIGHT}\" \
         viewBox=\"0 0 {WIDTH} {HEIGHT}\">\n\
         <rect width=\"{WIDTH}\" height=\"{HEIGHT}\" fill=\"white\"/>\n\
         <text x=\"{:.1}\" y=\"24\" font-family=\"sans-serif\" font-size=\"16\" \
         text-anchor=\"middle\">{}</text>\n",
        WIDTH / 2.0,
        xml_escape(title)
    )
}

fn axes_markup(f: &Frame, x_label: &str, y_label: &str) -> String {
    let mut s = String::new();
    let (px0, px1) = (MARGIN_L, WIDTH - MARGIN_R);
    let (py0, py1) = (HEIGHT - MARGIN_B, MARGIN_T);
    s.push_str(&format!(
        "<rect x=\"{px0:.1}\" y=\"{py1:.1}\" width=\"{:.1}\" height=\"{:.1}\" \
         fill=\"none\" stroke=\"black\"/>\n",
        px1 - px0,
        py0 - py1
    ));
    for t in ticks(f.x0, f.x1, 6) {
        let x = f.px(t);
        s.push_str(&format!(
            "<line x1=\"{x:.1}\" y1=\"{py0:.1}\" x2=\"{x:.1}\" y2=\"{:.1}\" stroke=\"black\"/>\n",
            py0 + 6.0
        ));
        s.push_str(&format!(
            "<text x=\"{x:.1}\" y=\"{:.1}\" font-family=\"sans-serif\" font-size=\"11\" \
             text-anchor=\"middle\">{}</text>\n",
            py0 + 20.0,
            fmt_tick(t)
        ));
    }
    for t in ticks(f.y0, f.y1, 6) {
        let y = f.py(t);
        s.push_str(&format!(
            "<line x1=\"{:.1}\" y1=\"{y:.1}\" x2=\"{px0:.1}\" y2=\"{y:.1}\" stroke=\"black\"/>\n",
            px0 - 6.0
        ));
        s.push_str(&format!(
            "<text x=\"{:.1}\" y=\"{:.1}\" font-family=\"sans-serif\" font-size=\"11\" \
             text-anchor=\"end\">{}</text>\n",
            px0 - 10.0,
            y + 4.0,
            fmt_tick(t)
        ));
    }
    s.push_str(&format!(
        "<text x=\"{:.1}\" y=\"{:.1}\" font-family=\"sans-serif\" font-size=\"13\" \
         text-anchor=\"middle\">{}</text>\n",
        (px0 + px1) / 2.0,
        HEIGHT - 18.0,
        xml_escape(x_label)
    ));
    s.push_str(&format!(
        "<text x=\"22\" y=\"{:.1}\" font-family=\"sans-serif\" font-size=\"13\" \
         text-anchor=\"middle\" transform=\"rotate(-90 22 {:.1})\">{}</text>\n",
        (py0 + py1) / 2.0,
        (py0 + py1) / 2.0,
        xml_escape(y_label)
    ));
    s
}

pub fn line_chart(title: &str, x_label: &str, y_label: &str, series: &[Series]) -> String {
    let mut pts: Vec<(f64, f64)> = Vec::new();
    for s in series {
        pts.extend(s.points.iter().filter(|p| p.0.is_finite() && p.1.is_finite()));
    }
    let (mut x0, mut x1) = (f64::INFINITY, f64::NEG_INFINITY);
    let (mut y0, mut y1) = (f64::INFINITY, f64::NEG_INFINITY);
    for (x, y) in &pts {
        x0 = x0.min(*x);
        x1 = x1.max(*x);
        y0 = y0.min(*y);
        y1 = y1.max(*y);
    }
    if !x0.is_finite() {
        x0 = 0.0;
        x1 = 1.0;
        y0 = 0.0;
        y1 = 1.0;
    }
    if y0 == y1 {
        y0 -= 0.5;
        y1 += 0.5;
    }
    let pad = 0.04 * (y1 - y0);
    let f = Frame {
        x0,
        x1,
        y0: y0 - pad,
        y1: y1 + pad,
    };
    let mut out = chart_header(title);
    out.push_str(&axes_markup(&f, x_label, y_label));
    for (i, s) in series.iter().enumerate() {
        let color = LINE_COLORS[i % LINE_COLORS.len()];
        let path: Vec<String> = s
            .points
            .iter()
            .filter(|p| p.0.is_finite() && p.1.is_finite())
            .map(|(x, y)| format!("{:.2},{:.2}", f.px(*x), f.py(*y)))
            .collect();
        out.push_str(&format!(
            "<polyline points=\"{}\" fill=\"none\" stroke=\"{color}\" stroke-width=\"1.6\"/>\n",
            path.join(" ")
        ));
        let ly = MARGIN_T + 16.0 + 18.0 * i as f64;
        out.push_str(&format!(
            "<line x1=\"{:.1}\" y1=\"{ly:.1}\" x2=\"{:.1}\" y2=\"{ly:.1}\" \
             stroke=\"{color}\" stroke-width=\"2\"/>\n",
            WIDTH - MARGIN_R + 12.0,
            WIDTH - MARGIN_R + 36.0
        ));
        out.push_str(&format!(
            "<text x=\"{:.1}\" y=\"{:.1}\" font-family=\"sans-serif\" font-size=\"11\">{}</text>\n",
            WIDTH - MARGIN_R + 42.0,
            ly + 4.0,
            xml_escape(if s.label.is_empty() { &y_label } else { &s.label })
        ));
    }
    out.push_str("</svg>\n");
    out
}

/// Heatmap of `values[iy * xs.len() + ix]`; zero-centered surfaces put
/// white at zero with red positive and blue negative.
pub fn heatmap(
    title: &str,
    x_label: &str,
    y_label: &str,
    xs: &[f64],
    ys: &[f64],
    values: &[f64],
    zero_centered: bool,
) -> String {
    let (nx, ny) = (xs.len(), ys.len());
    let finite: Vec<f64> = values.iter().copied().filter(|v| v.is_finite()).collect();
    let vmin = finite.iter().copied().fold(f64::INFINITY, f64::min);
    let vmax = finite.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    let scale = if zero_centered {
        vmin.abs().max(vmax.abs()).max(1e-300)
    } else {
        (vmax - vmin).max(1e-300)
    };
    let color = |v: f64| -> String {
        if !v.is_finite() {
            return "rgb(200,200,200)".into();
        }
        if zero_centered {
            diverging(v / scale)
        } else {
            lerp(WHITE, RED, (v - vmin) / scale)
        }
    };
    let f = Frame {
        x0: xs[0],
        x1: xs[nx - 1],
        y0: ys[0],
        y1: ys[ny - 1],
    };
    let mut out = chart_header(title);
    let cell_w = (WIDTH - MARGIN_L - MARGIN_R) / nx as f64;
    let cell_h = (HEIGHT - MARGIN_T - MARGIN_B) / ny as f64;
    for iy in 0..ny {
        for ix in 0..nx {
            let v = values[iy * nx + ix];
            let px = MARGIN_L + ix as f64 * cell_w;
            let py = HEIGHT - MARGIN_B - (iy as f64 + 1.0) * cell_h;
            out.push_str(&format!(
                "<rect x=\"{px:.2}\" y=\"{py:.2}\" width=\"{:.2}\" height=\"{:.2}\" fill=\"{}\"/>\n",
                cell_w + 0.5,
                cell_h + 0.5,
                color(v)
            ));
        }
    }
    out.push_str(&axes_markup(&f, x_label, y_label));
    // color bar
    let bar_x = WIDTH - MARGIN_R + 30.0;
    let bar_h = HEIGHT - MARGIN_T - MARGIN_B;
    let n_band = 64;
    for i in 0..n_band {
        let t = (i as f64 + 0.5) / n_band as f64;
        let v = if zero_centered {
            -scale + 2.0 * scale * t
        } else {
            vmin + scale * t
        };
        let y = HEIGHT - MARGIN_B - (i as f64 + 1.0) * bar_h / n_band as f64;
        out.push_str(&format!(
            "<rect x=\"{bar_x:.1}\" y=\"{y:.2}\" width=\"18\" height=\"{:.2}\" fill=\"{}\"/>\n",
            bar_h / n_band as f64 + 0.5,
            color(v)
        ));
    }
    let (lo, hi) = if zero_centered { (-scale, scale) } else { (vmin, vmax) };
    for (v, frac) in [(lo, 0.0), ((lo + hi) / 2.0, 0.5), (hi, 1.0)] {
        out.push_str(&format!(
            "<text x=\"{:.1}\" y=\"{:.1}\" font-family=\"sans-serif\" font-size=\"10\">{}</text>\n",
            bar_x + 24.0,
            HEIGHT - MARGIN_B - frac * bar_h + 4.0,
            fmt_tick(v)
        ));
    }
    out.push_str("</svg>\n");
    out
}
