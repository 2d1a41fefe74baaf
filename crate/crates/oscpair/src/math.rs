//! Scalar math routed through `libm` so the crate builds without `std`
//! and produces identical bits on every platform.

pub use num_complex::Complex64;

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
pub fn tanh(x: f64) -> f64 {
    libm::tanh(x)
}

#[inline]
pub fn abs(x: f64) -> f64 {
    libm::fabs(x)
}

#[inline]
pub fn floor(x: f64) -> f64 {
    libm::floor(x)
}

#[inline]
pub fn round(x: f64) -> f64 {
    libm::round(x)
}

#[inline]
pub fn powi(x: f64, n: i32) -> f64 {
    let mut r = 1.0;
    let mut b = if n < 0 { 1.0 / x } else { x };
    let mut e = n.unsigned_abs();
    while e > 0 {
        if e & 1 == 1 {
            r *= b;
        }
        b *= b;
        e >>= 1;
    }
    r
}

/// `e^{ix}` as a complex number.
#[inline]
pub fn cis(x: f64) -> Complex64 {
    let (s, c) = sin_cos(x);
    Complex64::new(c, s)
}

/// `sin(x)/x`, continuous through `x = 0`.
///
/// Series branch below |x| = 1e-2 keeps full double precision through the
/// removable singularity (the direct quotient already loses nothing down
/// to ~1e-8, the series just avoids the 0/0 endpoint entirely).
#[inline]
pub fn sinc(x: f64) -> f64 {
    if abs(x) < 1e-2 {
        let x2 = x * x;
        1.0 - x2 / 6.0 * (1.0 - x2 / 20.0 * (1.0 - x2 / 42.0))
    } else {
        sin(x) / x
    }
}

/// `ω·coth(ω/(2θ))`, the thermal occupation weight of the bath integrals.
///
/// Continuous limit `2θ + ω²/(6θ) + …` as `ω → 0` for `θ > 0`; collapses
/// to `ω` (vacuum) at `θ = 0`.
#[inline]
pub fn omega_coth(omega: f64, theta: f64) -> f64 {
    if theta <= 0.0 {
        return abs(omega);
    }
    let x = omega / (2.0 * theta);
    if abs(x) < 1e-4 {
        // ω coth(ω/2θ) = 2θ (1 + x²/3 - x⁴/45 + …)
        let x2 = x * x;
        2.0 * theta * (1.0 + x2 / 3.0 - x2 * x2 / 45.0)
    } else {
        omega / tanh(x)
    }
}

/// Relative distance |a-b| / max(|a|, |b|, floor).
#[inline]
pub fn rel_diff(a: f64, b: f64, floor: f64) -> f64 {
    let scale = abs(a).max(abs(b)).max(floor);
    abs(a - b) / scale
}

pub const PI: f64 = core::f64::consts::PI;

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn sinc_matches_quotient_away_from_zero() {
        for &x in &[1e-3, 5e-3, 2e-2, 0.5, 3.0] {
            let direct = libm::sin(x) / x;
            assert!(rel_diff(sinc(x), direct, 1e-300) < 1e-14);
        }
        assert_eq!(sinc(0.0), 1.0);
    }

    #[test]
    fn omega_coth_limits() {
        // ω → 0 at θ > 0 tends to 2θ
        assert!(rel_diff(omega_coth(1e-12, 2.5), 5.0, 1e-300) < 1e-10);
        // series and direct branches agree at the switch
        let lo = omega_coth(2.0 * 3.0 * 0.9999e-4, 3.0);
        let hi = omega_coth(2.0 * 3.0 * 1.0001e-4, 3.0);
        assert!(rel_diff(lo, hi, 1e-300) < 1e-7);
        // θ = 0 is the vacuum weight |ω|
        assert_eq!(omega_coth(1.7, 0.0), 1.7);
        // large argument: coth → 1
        assert!(rel_diff(omega_coth(100.0, 0.5), 100.0, 1e-300) < 1e-12);
    }

    #[test]
    fn powi_matches_naive() {
        assert_eq!(powi(2.0, 10), 1024.0);
        assert!(rel_diff(powi(1.7, -3), 1.0 / (1.7 * 1.7 * 1.7), 1e-300) < 1e-15);
    }
}
