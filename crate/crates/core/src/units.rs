//! Conversions between the linear frequencies quoted for devices and the
//! angular units used internally.
//!
//! Internally every frequency or rate is an angular frequency in rad/μs, so
//! "5 × 2π MHz" is `mhz(5.0)` and time comes out in μs.

use core::f64::consts::PI;

pub const TWO_PI: f64 = 2.0 * PI;

/// Linear MHz to rad/μs.
#[inline]
pub fn mhz(f: f64) -> f64 {
    TWO_PI * f
}

/// Linear GHz to rad/μs.
#[inline]
pub fn ghz(f: f64) -> f64 {
    TWO_PI * 1.0e3 * f
}

/// Linear kHz to rad/μs.
#[inline]
pub fn khz(f: f64) -> f64 {
    TWO_PI * 1.0e-3 * f
}

/// rad/μs back to linear MHz.
#[inline]
pub fn to_mhz(w: f64) -> f64 {
    w / TWO_PI
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn round_trips() {
        assert!((to_mhz(mhz(5.0)) - 5.0).abs() < 1e-14);
        assert!((ghz(6.0) - mhz(6000.0)).abs() < 1e-9);
        assert!((khz(20.0) - mhz(0.02)).abs() < 1e-15);
    }
}
