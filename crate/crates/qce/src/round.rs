//! Presentation rounding. Internal values are never rounded; these helpers
//! are applied only when formatting output.

/// Round to `dp` decimal places, half away from zero.
pub fn round_dp(value: f64, dp: u8) -> f64 {
    let scale = 10f64.powi(i32::from(dp));
    (value * scale).round() / scale
}

/// Format with exactly `dp` decimals after half-away-from-zero rounding.
pub fn fmt_dp(value: f64, dp: u8) -> String {
    format!("{:.*}", usize::from(dp), round_dp(value, dp))
}
