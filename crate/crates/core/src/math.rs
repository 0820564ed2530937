//! Thin wrappers around `libm` plus a few shared geometric quantities.
//!
//! All float math in this crate goes through `libm` so results are identical
//! on every target, independent of the platform's libm.

pub(crate) use libm::{fabs, log, pow, sqrt, tgamma};

pub(crate) const LN_2: f64 = core::f64::consts::LN_2;
pub(crate) const PI: f64 = core::f64::consts::PI;

/// `2^x`.
#[inline]
pub(crate) fn exp2(x: f64) -> f64 {
    libm::exp2(x)
}

/// `log2(x)`.
#[inline]
pub(crate) fn log2(x: f64) -> f64 {
    libm::log2(x)
}

/// Surface measure of the unit sphere `S_{n-1}` in `R^n`:
/// `2 pi^{n/2} / Gamma(n/2)`.
///
/// For `n = 1` this is `2`, matching the convention that the radial
/// decomposition of a 1-D integral counts both half-lines.
pub fn unit_sphere_area(n: usize) -> f64 {
    let half = n as f64 / 2.0;
    2.0 * pow(PI, half) / tgamma(half)
}

/// Volume of the unit ball in `R^n`.
pub fn unit_ball_volume(n: usize) -> f64 {
    unit_sphere_area(n) / n as f64
}

/// `|x|^e` with the convention `0^0 = 1` and `0^e = 0` for `e > 0`.
/// Returns `+inf` for `0^e`, `e < 0`.
#[inline]
pub(crate) fn abs_pow(x: f64, e: f64) -> f64 {
    let a = fabs(x);
    if a == 0.0 {
        if e == 0.0 {
            1.0
        } else if e > 0.0 {
            0.0
        } else {
            f64::INFINITY
        }
    } else {
        pow(a, e)
    }
}

/// Euclidean norm of a point.
pub(crate) fn euclid_norm(x: &[f64]) -> f64 {
    sqrt(x.iter().map(|v| v * v).sum())
}
