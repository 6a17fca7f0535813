//! Fixed float formatting shared by the JSON and CSV writers.

/// Significant digits used in JSON output.
pub const JSON_DIGITS: usize = 17;
/// Significant digits used in CSV and human-facing tables.
pub const TABLE_DIGITS: usize = 12;

/// Formats `x` with `digits` significant digits.
///
/// Positional notation is used for decimal exponents in `-5..=16`,
/// scientific otherwise; either way the output is a valid JSON number. With
/// `trim`, trailing fractional zeros are removed.
pub fn sig(x: f64, digits: usize, trim: bool) -> String {
    assert!(digits >= 1);
    if !x.is_finite() {
        return if x.is_nan() { "NaN".into() } else if x > 0.0 { "Infinity".into() } else { "-Infinity".into() };
    }
    if x == 0.0 {
        return "0.0".into();
    }
    let sci = format!("{:.*e}", digits - 1, x);
    let (mantissa, exp) = sci.split_once('e').expect("`e` formatting always has an exponent");
    let exp: i32 = exp.parse().expect("exponent is an integer");
    let out = if (-5..=16).contains(&exp) {
        let decimals = (digits as i32 - 1 - exp).max(0) as usize;
        let mut s = format!("{:.*}", decimals, x);
        if !s.contains('.') {
            s.push_str(".0");
        }
        s
    } else {
        format!("{mantissa}e{exp}")
    };
    if trim { trim_zeros(out) } else { out }
}

fn trim_zeros(s: String) -> String {
    let (body, exp) = match s.split_once('e') {
        Some((b, e)) => (b.to_string(), Some(e.to_string())),
        None => (s, None),
    };
    let mut body = body;
    if body.contains('.') {
        while body.ends_with('0') {
            body.pop();
        }
        if body.ends_with('.') {
            body.push('0');
        }
    }
    match exp {
        Some(e) => format!("{body}e{e}"),
        None => body,
    }
}

pub fn json(x: f64) -> String {
    sig(x, JSON_DIGITS, false)
}

pub fn table(x: f64) -> String {
    sig(x, TABLE_DIGITS, true)
}
