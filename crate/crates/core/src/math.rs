// Float functions that `core` does not provide.

use core::f64::consts::PI;

pub(crate) const TAU: f64 = 2.0 * PI;

#[inline]
pub(crate) fn sqrt(x: f64) -> f64 {
    libm::sqrt(x)
}

#[inline]
pub(crate) fn sin(x: f64) -> f64 {
    libm::sin(x)
}

#[inline]
pub(crate) fn cos(x: f64) -> f64 {
    libm::cos(x)
}

#[inline]
pub(crate) fn atan2(y: f64, x: f64) -> f64 {
    libm::atan2(y, x)
}

/// Reduces an angle into `[0, 2π)`.
pub(crate) fn wrap_two_pi(x: f64) -> f64 {
    let r = x - TAU * libm::floor(x / TAU);
    if r >= TAU || r < 0.0 {
        0.0
    } else {
        r
    }
}

/// Reduces an angle into `(−π, π]`.
pub(crate) fn wrap_pi(x: f64) -> f64 {
    let r = wrap_two_pi(x);
    if r > PI {
        r - TAU
    } else {
        r
    }
}
