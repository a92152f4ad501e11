//! Thin wrappers over `libm` so the crate stays `no_std`, plus a few special
//! functions used throughout.

use core::f64::consts::PI;

#[inline]
pub fn sin(x: f64) -> f64 {
    libm::sin(x)
}

#[inline]
pub fn cos(x: f64) -> f64 {
    libm::cos(x)
}

#[inline]
pub fn sin_cos(x: f64) -> (f64, f64) {
    libm::sincos(x)
}

#[inline]
pub fn exp(x: f64) -> f64 {
    libm::exp(x)
}

#[inline]
pub fn ln(x: f64) -> f64 {
    libm::log(x)
}

#[inline]
pub fn sqrt(x: f64) -> f64 {
    libm::sqrt(x)
}

#[inline]
pub fn floor(x: f64) -> f64 {
    libm::floor(x)
}

#[inline]
pub fn ceil(x: f64) -> f64 {
    libm::ceil(x)
}

/// `x^p`, with the common integer and unit cases short-circuited.
#[inline]
pub fn powf(x: f64, p: f64) -> f64 {
    if p == 0.0 {
        1.0
    } else if p == 1.0 {
        x
    } else if p == 2.0 {
        x * x
    } else if p == -1.0 {
        1.0 / x
    } else {
        libm::pow(x, p)
    }
}

/// `sin(x)/x`, continuous at zero.
#[inline]
pub fn sinc(x: f64) -> f64 {
    if x.abs() < 1e-4 {
        let x2 = x * x;
        1.0 - x2 / 6.0 * (1.0 - x2 / 20.0)
    } else {
        sin(x) / x
    }
}

/// Surface area `ω_n = 2π^{n/2} / Γ(n/2)` of the unit sphere in `ℝⁿ`.
pub fn omega(n: u32) -> f64 {
    // ω_1 = 2, ω_2 = 2π, ω_{n+2} = 2π ω_n / n
    let (mut w, mut k) = if n % 2 == 1 { (2.0, 1) } else { (2.0 * PI, 2) };
    while k < n {
        w *= 2.0 * PI / k as f64;
        k += 2;
    }
    w
}
