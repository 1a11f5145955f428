//! Count ratios and half-up percentage rendering.

use serde::Serialize;

/// `num / den` over mention counts. Rendering works on the exact integers,
/// so half-up rounding is never disturbed by binary floating point.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
pub struct Ratio {
    pub num: u64,
    pub den: u64,
}

impl Ratio {
    pub fn new(num: u64, den: u64) -> Self {
        Ratio { num, den }
    }

    /// `None` when the denominator is zero.
    pub fn fraction(self) -> Option<f64> {
        (self.den > 0).then(|| self.num as f64 / self.den as f64)
    }

    pub fn percent(self) -> Option<f64> {
        (self.den > 0).then(|| 100.0 * self.num as f64 / self.den as f64)
    }

    /// Percentage with `decimals` places, rounded half up. `None` when the
    /// denominator is zero.
    pub fn display_percent(self, decimals: u32) -> Option<String> {
        if self.den == 0 {
            return None;
        }
        let scale = 10u128.pow(decimals);
        let scaled = 100 * scale * self.num as u128;
        let den = self.den as u128;
        let rounded = (2 * scaled + den) / (2 * den);
        Some(fixed_point(rounded, decimals))
    }
}

fn fixed_point(units: u128, decimals: u32) -> String {
    if decimals == 0 {
        return units.to_string();
    }
    let scale = 10u128.pow(decimals);
    format!("{}.{:0width$}", units / scale, units % scale, width = decimals as usize)
}

/// Rounds a non-negative value half up to `decimals` places.
///
/// Values within a relative 1e-9 of a rounding boundary are treated as on
/// it, so a mean like 91.925 that binary arithmetic stores as
/// 91.92499999... still renders as 91.93.
pub fn format_half_up(x: f64, decimals: u32) -> String {
    debug_assert!(x.is_finite());
    let scaled = x * 10f64.powi(decimals as i32);
    let nudge = 1e-9 * scaled.abs().max(1.0);
    let units = (scaled + 0.5 + nudge).floor();
    if units <= 0.0 {
        return fixed_point(0, decimals);
    }
    fixed_point(units as u128, decimals)
}

/// Integer with thousands separators, as in `5,648`.
pub fn with_thousands(n: usize) -> String {
    let digits = n.to_string();
    let mut out = String::with_capacity(digits.len() + digits.len() / 3);
    for (i, c) in digits.chars().enumerate() {
        if i > 0 && (digits.len() - i).is_multiple_of(3) {
            out.push(',');
        }
        out.push(c);
    }
    out
}
