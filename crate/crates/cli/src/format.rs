//! Locale-free number rendering and angle parsing.

use std::f64::consts::PI;

/// Token written for values that are undefined at a point.
pub const NA: &str = "NA";

const SIGNIFICANT: i32 = 12;

/// Render with 12 significant digits, `%g` style: plain decimal for moderate
/// exponents, scientific otherwise, trailing zeros removed. Non-finite values
/// become [`NA`].
pub fn number(v: f64) -> String {
    if !v.is_finite() {
        return NA.to_string();
    }
    if v == 0.0 {
        return "0".to_string();
    }
    let sci = format!("{:.*e}", (SIGNIFICANT - 1) as usize, v);
    let (mantissa, exp) = sci.split_once('e').expect("scientific format has an exponent");
    let exp: i32 = exp.parse().expect("integer exponent");
    if (-5..SIGNIFICANT).contains(&exp) {
        let decimals = (SIGNIFICANT - 1 - exp).max(0) as usize;
        trim_zeros(&format!("{v:.decimals$}")).to_string()
    } else {
        format!("{}e{}", trim_zeros(mantissa), exp)
    }
}

pub fn optional(v: Option<f64>) -> String {
    v.map_or_else(|| NA.to_string(), number)
}

fn trim_zeros(s: &str) -> &str {
    if s.contains('.') {
        s.trim_end_matches('0').trim_end_matches('.')
    } else {
        s
    }
}

/// Parse an angle in radians. Besides plain numbers, accepts multiples and
/// fractions of pi: `pi`, `-pi`, `2pi`, `pi/2`, `3pi/4`, `0.5*pi`.
pub fn parse_angle(s: &str) -> Result<f64, String> {
    let t = s.trim();
    if let Ok(v) = t.parse::<f64>() {
        return if v.is_finite() {
            Ok(v)
        } else {
            Err(format!("angle must be finite: {s}"))
        };
    }
    let lower = t.to_ascii_lowercase();
    let Some(idx) = lower.find("pi") else {
        return Err(format!("invalid angle: {s}"));
    };
    let (head, tail) = (&lower[..idx], &lower[idx + 2..]);
    let head = head.trim_end_matches('*');
    let factor = match head {
        "" => 1.0,
        "-" => -1.0,
        h => h.parse::<f64>().map_err(|_| format!("invalid angle: {s}"))?,
    };
    let divisor = match tail {
        "" => 1.0,
        t => t
            .strip_prefix('/')
            .and_then(|d| d.parse::<f64>().ok())
            .filter(|d| *d != 0.0)
            .ok_or_else(|| format!("invalid angle: {s}"))?,
    };
    Ok(factor * PI / divisor)
}
