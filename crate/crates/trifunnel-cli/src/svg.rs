//! Static SVG 1.1 emission: zero markers with optional curve overlays, drawn
//! in the rescaled frame.

use num_complex::Complex64;
use trifunnel::zerogeom::CurveSample;

const WIDTH: f64 = 900.0;
const HEIGHT: f64 = 1200.0;
const MARGIN: f64 = 60.0;

struct Frame {
    x_min: f64,
    x_max: f64,
    y_min: f64,
    y_max: f64,
}

impl Frame {
    fn x(&self, v: f64) -> f64 {
        MARGIN + (v - self.x_min) / (self.x_max - self.x_min) * (WIDTH - 2.0 * MARGIN)
    }
    fn y(&self, v: f64) -> f64 {
        // SVG y grows downward.
        HEIGHT - MARGIN - (v - self.y_min) / (self.y_max - self.y_min) * (HEIGHT - 2.0 * MARGIN)
    }
}

fn fmt(v: f64) -> String {
    format!("{v:.3}")
}

/// Renders rescaled zeros and optional curve overlays.
pub fn render(zeros: &[Complex64], curves: Option<&[CurveSample]>) -> String {
    let mut x_min = 0.0f64;
    let mut x_max = 2.0f64.ln();
    let mut y_min = f64::INFINITY;
    let mut y_max = f64::NEG_INFINITY;
    for z in zeros {
        x_min = x_min.min(z.re);
        x_max = x_max.max(z.re);
        y_min = y_min.min(z.im);
        y_max = y_max.max(z.im);
    }
    if let Some(cs) = curves {
        for c in cs {
            y_min = y_min.min(c.t);
            y_max = y_max.max(c.t);
        }
    }
    if !y_min.is_finite() || !y_max.is_finite() {
        y_min = -1.0;
        y_max = 1.0;
    }
    if y_max - y_min < 1e-9 {
        y_min -= 0.5;
        y_max += 0.5;
    }
    let pad_x = 0.05 * (x_max - x_min).max(1e-3);
    let pad_y = 0.02 * (y_max - y_min);
    let f = Frame {
        x_min: x_min - pad_x,
        x_max: x_max + pad_x,
        y_min: y_min - pad_y,
        y_max: y_max + pad_y,
    };

    let mut out = String::new();
    out.push_str(&format!(
        "<svg xmlns=\"http://www.w3.org/2000/svg\" version=\"1.1\" \
         width=\"{WIDTH}\" height=\"{HEIGHT}\" viewBox=\"0 0 {WIDTH} {HEIGHT}\">\n"
    ));
    out.push_str("<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n");

    // Axes.
    out.push_str(&format!(
        "<line x1=\"{}\" y1=\"{}\" x2=\"{}\" y2=\"{}\" stroke=\"black\" stroke-width=\"1\"/>\n",
        fmt(f.x(f.x_min)),
        fmt(f.y(f.y_min)),
        fmt(f.x(f.x_max)),
        fmt(f.y(f.y_min))
    ));
    out.push_str(&format!(
        "<line x1=\"{}\" y1=\"{}\" x2=\"{}\" y2=\"{}\" stroke=\"black\" stroke-width=\"1\"/>\n",
        fmt(f.x(f.x_min)),
        fmt(f.y(f.y_min)),
        fmt(f.x(f.x_min)),
        fmt(f.y(f.y_max))
    ));
    for (label, v) in [
        ("0", 0.0),
        ("ln2/2", 0.5 * 2.0f64.ln()),
        ("ln2", 2.0f64.ln()),
    ] {
        out.push_str(&format!(
            "<line x1=\"{0}\" y1=\"{1}\" x2=\"{0}\" y2=\"{2}\" stroke=\"#cccccc\" \
             stroke-width=\"0.5\"/>\n<text x=\"{0}\" y=\"{3}\" font-size=\"12\" \
             text-anchor=\"middle\">{label}</text>\n",
            fmt(f.x(v)),
            fmt(f.y(f.y_min)),
            fmt(f.y(f.y_max)),
            fmt(f.y(f.y_min) + 18.0),
        ));
    }

    if let Some(cs) = curves {
        let colors = ["#1f77b4", "#d62728", "#2ca02c", "#9467bd"];
        for j in 0..4 {
            let mut path = String::new();
            let mut pen_down = false;
            for c in cs {
                match c.sigma[j] {
                    Some(v) if v >= f.x_min && v <= f.x_max => {
                        let cmd = if pen_down { 'L' } else { 'M' };
                        path.push_str(&format!("{cmd}{} {} ", fmt(f.x(v)), fmt(f.y(c.t))));
                        pen_down = true;
                    }
                    _ => pen_down = false,
                }
            }
            if !path.is_empty() {
                out.push_str(&format!(
                    "<path d=\"{}\" fill=\"none\" stroke=\"{}\" stroke-width=\"0.8\"/>\n",
                    path.trim_end(),
                    colors[j]
                ));
            }
        }
    }

    for z in zeros {
        out.push_str(&format!(
            "<circle cx=\"{}\" cy=\"{}\" r=\"1.6\" fill=\"black\"/>\n",
            fmt(f.x(z.re)),
            fmt(f.y(z.im))
        ));
    }
    out.push_str("</svg>\n");
    out
}
