//! Minimal self-contained SVG plotting: one 800x800 canvas, linear axes,
//! paths and annotations with inline styles.

use std::fmt::Write;

pub const SIZE: f64 = 800.0;
const MARGIN: f64 = 70.0;

/// Maps data coordinates onto the canvas.
#[derive(Debug, Clone, Copy)]
pub struct Frame {
    x_lo: f64,
    y_lo: f64,
    sx: f64,
    sy: f64,
    x_hi: f64,
    y_hi: f64,
}

impl Frame {
    /// `equal_aspect` uses one scale on both axes and centres the data.
    pub fn new(x: (f64, f64), y: (f64, f64), equal_aspect: bool) -> Self {
        let span = SIZE - 2.0 * MARGIN;
        let (mut x_lo, mut x_hi) = x;
        let (mut y_lo, mut y_hi) = y;
        let mut sx = span / (x_hi - x_lo);
        let mut sy = span / (y_hi - y_lo);
        if equal_aspect {
            let s = sx.min(sy);
            let pad_x = (span / s - (x_hi - x_lo)) / 2.0;
            let pad_y = (span / s - (y_hi - y_lo)) / 2.0;
            x_lo -= pad_x;
            x_hi += pad_x;
            y_lo -= pad_y;
            y_hi += pad_y;
            sx = s;
            sy = s;
        }
        Self {
            x_lo,
            y_lo,
            sx,
            sy,
            x_hi,
            y_hi,
        }
    }

    pub fn px(&self, x: f64) -> f64 {
        MARGIN + (x - self.x_lo) * self.sx
    }

    pub fn py(&self, y: f64) -> f64 {
        SIZE - MARGIN - (y - self.y_lo) * self.sy
    }

    pub fn x_range(&self) -> (f64, f64) {
        (self.x_lo, self.x_hi)
    }

    pub fn y_range(&self) -> (f64, f64) {
        (self.y_lo, self.y_hi)
    }
}

/// Two-decimal pixel coordinate without a negative zero.
fn c(v: f64) -> String {
    let s = format!("{v:.2}");
    if s == "-0.00" {
        "0.00".into()
    } else {
        s
    }
}

fn escape(text: &str) -> String {
    text.replace('&', "&amp;")
        .replace('<', "&lt;")
        .replace('>', "&gt;")
}

/// Tick spacing of 1, 2 or 5 times a power of ten giving about eight ticks.
fn tick_step(span: f64) -> f64 {
    let raw = span / 8.0;
    let mag = 10f64.powf(raw.log10().floor());
    [1.0, 2.0, 5.0, 10.0]
        .into_iter()
        .map(|m| m * mag)
        .find(|&s| s >= raw)
        .unwrap_or(10.0 * mag)
}

fn ticks(lo: f64, hi: f64) -> Vec<f64> {
    let step = tick_step(hi - lo);
    let first = (lo / step).ceil() as i64;
    let last = (hi / step).floor() as i64;
    (first..=last).map(|k| k as f64 * step).collect()
}

fn tick_label(v: f64) -> String {
    let s = format!("{v:.3}");
    let s = s.trim_end_matches('0').trim_end_matches('.');
    if s == "-0" {
        "0".into()
    } else {
        s.into()
    }
}

pub struct Plot {
    frame: Frame,
    body: String,
}

impl Plot {
    pub fn new(frame: Frame, title: &str, x_label: &str, y_label: &str) -> Self {
        let mut plot = Self {
            frame,
            body: String::new(),
        };
        plot.axes(title, x_label, y_label);
        plot
    }

    pub fn frame(&self) -> &Frame {
        &self.frame
    }

    fn axes(&mut self, title: &str, x_label: &str, y_label: &str) {
        let f = self.frame;
        let (x_lo, x_hi) = f.x_range();
        let (y_lo, y_hi) = f.y_range();
        let (left, right) = (f.px(x_lo), f.px(x_hi));
        let (bottom, top) = (f.py(y_lo), f.py(y_hi));
        let b = &mut self.body;
        let _ = writeln!(
            b,
            r##"<rect x="{}" y="{}" width="{}" height="{}" fill="none" stroke="#444" stroke-width="1"/>"##,
            c(left),
            c(top),
            c(right - left),
            c(bottom - top)
        );
        for x in ticks(x_lo, x_hi) {
            let _ = writeln!(
                b,
                r##"<line x1="{0}" y1="{1}" x2="{0}" y2="{2}" stroke="#ddd" stroke-width="0.5"/><text x="{0}" y="{3}" font-size="11" text-anchor="middle">{4}</text>"##,
                c(f.px(x)),
                c(top),
                c(bottom),
                c(bottom + 16.0),
                tick_label(x)
            );
        }
        for y in ticks(y_lo, y_hi) {
            let _ = writeln!(
                b,
                r##"<line x1="{0}" y1="{2}" x2="{1}" y2="{2}" stroke="#ddd" stroke-width="0.5"/><text x="{3}" y="{4}" font-size="11" text-anchor="end">{5}</text>"##,
                c(left),
                c(right),
                c(f.py(y)),
                c(left - 6.0),
                c(f.py(y) + 4.0),
                tick_label(y)
            );
        }
        // zero axes when in view
        if (x_lo..=x_hi).contains(&0.0) {
            self.line_px((f.px(0.0), top), (f.px(0.0), bottom), "#888", 1.0, None);
        }
        if (y_lo..=y_hi).contains(&0.0) {
            self.line_px((left, f.py(0.0)), (right, f.py(0.0)), "#888", 1.0, None);
        }
        let b = &mut self.body;
        let _ = writeln!(
            b,
            r#"<text x="{}" y="30" font-size="16" text-anchor="middle">{}</text>"#,
            c(SIZE / 2.0),
            escape(title)
        );
        let _ = writeln!(
            b,
            r#"<text x="{}" y="{}" font-size="13" text-anchor="middle">{}</text>"#,
            c(SIZE / 2.0),
            c(SIZE - 25.0),
            escape(x_label)
        );
        let _ = writeln!(
            b,
            r#"<text x="20" y="{0}" font-size="13" text-anchor="middle" transform="rotate(-90 20 {0})">{1}</text>"#,
            c(SIZE / 2.0),
            escape(y_label)
        );
    }

    fn line_px(
        &mut self,
        a: (f64, f64),
        b: (f64, f64),
        color: &str,
        width: f64,
        dash: Option<&str>,
    ) {
        let dash = dash.map_or(String::new(), |d| format!(r#" stroke-dasharray="{d}""#));
        let _ = writeln!(
            self.body,
            r#"<line x1="{}" y1="{}" x2="{}" y2="{}" stroke="{color}" stroke-width="{width}"{dash}/>"#,
            c(a.0),
            c(a.1),
            c(b.0),
            c(b.1)
        );
    }

    /// Straight segment in data coordinates.
    pub fn line(&mut self, a: (f64, f64), b: (f64, f64), color: &str, dash: Option<&str>) {
        let f = self.frame;
        self.line_px(
            (f.px(a.0), f.py(a.1)),
            (f.px(b.0), f.py(b.1)),
            color,
            1.5,
            dash,
        );
    }

    /// Polyline through data points; the numeric content is the `d` attribute.
    pub fn path(&mut self, points: &[(f64, f64)], color: &str, class: &str, dash: Option<&str>) {
        if points.is_empty() {
            return;
        }
        let f = self.frame;
        let mut d = String::new();
        for (i, &(x, y)) in points.iter().enumerate() {
            let cmd = if i == 0 { 'M' } else { 'L' };
            let _ = write!(
                d,
                "{}{cmd}{},{}",
                if i == 0 { "" } else { " " },
                c(f.px(x)),
                c(f.py(y))
            );
        }
        let dash = dash.map_or(String::new(), |d| format!(r#" stroke-dasharray="{d}""#));
        let _ = writeln!(
            self.body,
            r#"<path class="{class}" d="{d}" fill="none" stroke="{color}" stroke-width="1.5"{dash}/>"#
        );
    }

    pub fn text(&mut self, at: (f64, f64), text: &str, color: &str) {
        let f = self.frame;
        let _ = writeln!(
            self.body,
            r#"<text x="{}" y="{}" font-size="11" fill="{color}">{}</text>"#,
            c(f.px(at.0) + 4.0),
            c(f.py(at.1) - 4.0),
            escape(text)
        );
    }

    pub fn finish(self) -> String {
        format!(
            "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"800\" height=\"800\" viewBox=\"0 0 800 800\" font-family=\"sans-serif\">\n<rect width=\"800\" height=\"800\" fill=\"white\"/>\n{}</svg>\n",
            self.body
        )
    }
}
