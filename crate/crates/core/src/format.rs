//! Reporting-boundary helpers: rounding and number rendering.

/// Round at `digits` decimals, treating the double as the exact binary value
/// it holds; exact ties go to even. `6.635` is stored slightly below the tie
/// and rounds to `6.63`. Non-finite values pass through.
pub fn round_half_even(x: f64, digits: u32) -> f64 {
    if !x.is_finite() {
        return x;
    }
    let r: f64 = format!("{:.*}", digits as usize, x)
        .parse()
        .expect("formatted float parses");
    // collapse -0
    if r == 0.0 {
        0.0
    } else {
        r
    }
}

/// Shortest round-trip decimal text; infinities as `Inf`/`-Inf`.
pub fn number_text(x: f64) -> String {
    if x.is_nan() {
        "NA".to_string()
    } else if x == f64::INFINITY {
        "Inf".to_string()
    } else if x == f64::NEG_INFINITY {
        "-Inf".to_string()
    } else if x == 0.0 {
        "0".to_string()
    } else {
        format!("{x}")
    }
}

/// Rounded value in shortest form, `NA` when absent.
pub fn rounded_text(x: Option<f64>, digits: u32) -> String {
    match x {
        Some(v) => number_text(round_half_even(v, digits)),
        None => "NA".to_string(),
    }
}

/// Rounded value with exactly `digits` decimals, `NA` when absent.
pub fn fixed_text(x: Option<f64>, digits: u32) -> String {
    match x {
        Some(v) if v.is_finite() => {
            let r = round_half_even(v, digits);
            format!("{:.*}", digits as usize, r)
        }
        Some(v) => number_text(v),
        None => "NA".to_string(),
    }
}

/// Quote a CSV field when it contains the delimiter, a quote or a line break.
pub(crate) fn csv_field(s: &str, delimiter: u8) -> String {
    let d = delimiter as char;
    if s.contains(d) || s.contains('"') || s.contains('\n') || s.contains('\r') {
        format!("\"{}\"", s.replace('"', "\"\""))
    } else {
        s.to_string()
    }
}

/// Rendered table: header plus text cells, shared by the CSV and HTML writers.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct Grid {
    pub header: Vec<String>,
    pub rows: Vec<Vec<String>>,
}

impl Grid {
    pub fn to_csv(&self) -> String {
        let mut out = csv_line(&self.header);
        for r in &self.rows {
            out.push_str(&csv_line(r));
        }
        out
    }
}

pub(crate) fn csv_line<I, S>(fields: I) -> String
where
    I: IntoIterator<Item = S>,
    S: AsRef<str>,
{
    let mut out = fields
        .into_iter()
        .map(|f| csv_field(f.as_ref(), b','))
        .collect::<Vec<_>>()
        .join(",");
    out.push('\n');
    out
}
