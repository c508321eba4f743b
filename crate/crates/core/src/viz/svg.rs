use std::fmt::Write as _;

use rand::seq::index;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

pub const DEFAULT_WIDTH: u32 = 640;
pub const DEFAULT_HEIGHT: u32 = 480;

const MARGIN_LEFT: f64 = 64.0;
const MARGIN_RIGHT: f64 = 24.0;
const MARGIN_TOP: f64 = 40.0;
const MARGIN_BOTTOM: f64 = 56.0;

pub(crate) const PALETTE: [&str; 8] = [
    "#1b9e77", "#d95f02", "#7570b3", "#e7298a", "#66a61e", "#e6ab02", "#a6761d", "#666666",
];

/// A complete SVG 1.1 document with no external references.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SvgDocument {
    /// `<plotkind>_<variable>[_<by>].svg`
    pub file_name: String,
    pub title: String,
    pub xml_text: String,
    pub width: u32,
    pub height: u32,
}

impl SvgDocument {
    /// The `<svg>` element alone, for embedding in HTML.
    pub fn inline(&self) -> &str {
        match self.xml_text.find("<svg") {
            Some(i) => &self.xml_text[i..],
            None => &self.xml_text,
        }
    }
}

/// Escape text for XML content and attribute values.
pub fn escape(s: &str) -> String {
    let mut out = String::with_capacity(s.len());
    for c in s.chars() {
        match c {
            '&' => out.push_str("&amp;"),
            '<' => out.push_str("&lt;"),
            '>' => out.push_str("&gt;"),
            '"' => out.push_str("&quot;"),
            '\'' => out.push_str("&#39;"),
            c => out.push(c),
        }
    }
    out
}

pub(crate) fn file_name(kind: &str, parts: &[&str]) -> String {
    let mut name = kind.to_string();
    for p in parts {
        name.push('_');
        name.extend(p.chars().map(|c| {
            if c.is_ascii_alphanumeric() || c == '-' || c == '.' {
                c
            } else {
                '_'
            }
        }));
    }
    name.push_str(".svg");
    name
}

/// Seeded choice of `k` items, kept in their original order.
pub(crate) fn choose<T>(items: Vec<T>, k: Option<usize>, seed: u64) -> Vec<T> {
    let Some(k) = k else { return items };
    if k >= items.len() {
        return items;
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut picked = index::sample(&mut rng, items.len(), k).into_vec();
    picked.sort_unstable();
    let mut slots: Vec<Option<T>> = items.into_iter().map(Some).collect();
    picked.into_iter().map(|i| slots[i].take().expect("distinct indices")).collect()
}

/// Map from a data interval onto a pixel interval.
#[derive(Debug, Clone, Copy)]
pub(crate) struct Scale {
    d0: f64,
    d1: f64,
    r0: f64,
    r1: f64,
}

impl Scale {
    /// Domain `[lo, hi]` widened by 4% on each side; a point domain becomes
    /// `[lo - 0.5, lo + 0.5]`.
    pub(crate) fn padded(lo: f64, hi: f64, r0: f64, r1: f64) -> Self {
        let (d0, d1) = if hi > lo {
            let pad = 0.04 * (hi - lo);
            (lo - pad, hi + pad)
        } else {
            (lo - 0.5, lo + 0.5)
        };
        Scale { d0, d1, r0, r1 }
    }

    pub(crate) fn exact(d0: f64, d1: f64, r0: f64, r1: f64) -> Self {
        Scale { d0, d1, r0, r1 }
    }

    pub(crate) fn map(&self, x: f64) -> f64 {
        self.r0 + (x - self.d0) / (self.d1 - self.d0) * (self.r1 - self.r0)
    }

    /// Round-number ticks inside the domain.
    pub(crate) fn ticks(&self) -> Vec<(f64, String)> {
        let (lo, hi) = (self.d0, self.d1);
        let raw = (hi - lo) / 5.0;
        if !(raw > 0.0) || !raw.is_finite() {
            return Vec::new();
        }
        let mag = 10f64.powf(raw.log10().floor());
        let norm = raw / mag;
        let step = mag
            * if norm < 1.5 {
                1.0
            } else if norm < 3.0 {
                2.0
            } else if norm < 7.0 {
                5.0
            } else {
                10.0
            };
        let decimals = (-step.log10().floor()).max(0.0) as usize;
        let (first, last) = ((lo / step).ceil() as i64, (hi / step).floor() as i64);
        (first..=last)
            .map(|k| {
                let v = k as f64 * step;
                let label = format!("{:.*}", decimals, v);
                let label = if label.starts_with('-') && label[1..].chars().all(|c| c == '0' || c == '.') {
                    label[1..].to_string()
                } else {
                    label
                };
                (v, label)
            })
            .collect()
    }
}

/// Accumulates SVG markup for one plot.
pub(crate) struct Canvas {
    pub width: f64,
    pub height: f64,
    body: String,
}

/// Inner plotting rectangle `(left, top, right, bottom)`.
pub(crate) type Area = (f64, f64, f64, f64);

impl Canvas {
    pub(crate) fn new() -> Self {
        Canvas {
            width: DEFAULT_WIDTH as f64,
            height: DEFAULT_HEIGHT as f64,
            body: String::new(),
        }
    }

    pub(crate) fn area(&self) -> Area {
        (
            MARGIN_LEFT,
            MARGIN_TOP,
            self.width - MARGIN_RIGHT,
            self.height - MARGIN_BOTTOM,
        )
    }

    pub(crate) fn raw(&mut self, s: &str) {
        self.body.push_str(s);
        self.body.push('\n');
    }

    pub(crate) fn line(&mut self, x1: f64, y1: f64, x2: f64, y2: f64, attrs: &str) {
        let _ = writeln!(
            self.body,
            r#"<line x1="{x1:.2}" y1="{y1:.2}" x2="{x2:.2}" y2="{y2:.2}" {attrs}/>"#
        );
    }

    pub(crate) fn circle(&mut self, cx: f64, cy: f64, r: f64, attrs: &str) {
        let _ = writeln!(self.body, r#"<circle cx="{cx:.2}" cy="{cy:.2}" r="{r}" {attrs}/>"#);
    }

    pub(crate) fn rect(&mut self, x: f64, y: f64, w: f64, h: f64, attrs: &str) {
        let _ = writeln!(
            self.body,
            r#"<rect x="{x:.2}" y="{y:.2}" width="{w:.2}" height="{h:.2}" {attrs}/>"#
        );
    }

    pub(crate) fn text(&mut self, x: f64, y: f64, anchor: &str, content: &str, attrs: &str) {
        let _ = writeln!(
            self.body,
            r#"<text x="{x:.2}" y="{y:.2}" text-anchor="{anchor}" {attrs}>{}</text>"#,
            escape(content)
        );
    }

    pub(crate) fn polyline(&mut self, points: impl IntoIterator<Item = (f64, f64)>, attrs: &str) {
        let pts = points
            .into_iter()
            .map(|(x, y)| format!("{x:.2},{y:.2}"))
            .collect::<Vec<_>>()
            .join(" ");
        let _ = writeln!(self.body, r#"<polyline points="{pts}" fill="none" {attrs}/>"#);
    }

    pub(crate) fn path(&mut self, d: &str, attrs: &str) {
        let _ = writeln!(self.body, r#"<path d="{d}" {attrs}/>"#);
    }

    /// Frame plus ticks for numeric x and y scales; `None` skips an axis.
    pub(crate) fn axes(&mut self, x: Option<&Scale>, y: Option<&Scale>, x_label: &str, y_label: &str) {
        let (l, t, r, b) = self.area();
        self.line(l, b, r, b, r##"class="frame" stroke="#333""##);
        self.line(l, t, l, b, r##"class="frame" stroke="#333""##);
        if let Some(x) = x {
            for (v, label) in x.ticks() {
                let px = x.map(v);
                self.line(px, b, px, b + 5.0, r##"class="tick" stroke="#333""##);
                self.text(px, b + 18.0, "middle", &label, r#"font-size="11""#);
            }
        }
        if let Some(y) = y {
            for (v, label) in y.ticks() {
                let py = y.map(v);
                self.line(l - 5.0, py, l, py, r##"class="tick" stroke="#333""##);
                self.text(l - 8.0, py + 4.0, "end", &label, r#"font-size="11""#);
            }
        }
        self.text((l + r) / 2.0, self.height - 14.0, "middle", x_label, r#"font-size="13""#);
        let (cx, cy) = (16.0, (t + b) / 2.0);
        let _ = writeln!(
            self.body,
            r#"<text x="{cx}" y="{cy:.2}" text-anchor="middle" font-size="13" transform="rotate(-90 {cx} {cy:.2})">{}</text>"#,
            escape(y_label)
        );
    }

    pub(crate) fn finish(self, title: &str, file_name: String) -> SvgDocument {
        let (w, h) = (self.width as u32, self.height as u32);
        let mut xml = String::with_capacity(self.body.len() + 512);
        xml.push_str("<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n");
        let _ = writeln!(
            xml,
            r#"<svg xmlns="http://www.w3.org/2000/svg" version="1.1" width="{w}" height="{h}" viewBox="0 0 {w} {h}" font-family="sans-serif">"#
        );
        let _ = writeln!(xml, "<title>{}</title>", escape(title));
        let _ = writeln!(
            xml,
            r#"<text x="{:.2}" y="24" text-anchor="middle" font-size="15" font-weight="bold">{}</text>"#,
            self.width / 2.0,
            escape(title)
        );
        xml.push_str(&self.body);
        xml.push_str("</svg>\n");
        SvgDocument {
            file_name,
            title: title.to_string(),
            xml_text: xml,
            width: w,
            height: h,
        }
    }
}
