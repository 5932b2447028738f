//! Fixed-precision formatting for reports.

/// Rounds to 12 significant digits.
pub fn sig12(x: f64) -> f64 {
    round_sig(x, 12)
}

pub fn round_sig(x: f64, digits: usize) -> f64 {
    if !x.is_finite() || x == 0.0 {
        return x;
    }
    format!("{:.*e}", digits.saturating_sub(1), x).parse().unwrap_or(x)
}

/// Shortest text for `x` after rounding to 12 significant digits.
pub fn fmt12(x: f64) -> String {
    let r = sig12(x);
    if r == 0.0 {
        "0".to_string()
    } else if r.abs() < 1e-4 || r.abs() >= 1e15 {
        format!("{r:e}")
    } else {
        format!("{r}")
    }
}
