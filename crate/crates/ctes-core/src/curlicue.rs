//! Generalized curlicue sums and the intensity of their hyperbolic rescaling.
//!
//! The kernel evaluates the truncated sum of `M` unit phasors with polynomial
//! phase `(m-1)^j * zeta`, its modulo-squared intensity, and the intensity of
//! the hyperbolic argument `1/xi`. Intensity is periodic in `zeta` with
//! period 1 and reaches the constructive-interference ceiling 1 exactly when
//! all phases vanish modulo 1. At integer trial points `xi = ell / N` the
//! fractional part of `N / ell` is computed in integer arithmetic, so a trial
//! factor reports unit intensity if and only if it divides the target.

use num_complex::Complex64;

use crate::error::{Error, Result};

const TAU: f64 = std::f64::consts::TAU;

/// Largest f64 strictly below 1.0. Non-divisor trial intensities are capped
/// here so that exact unit intensity remains the divisor signature even when
/// rounding would otherwise land on 1.0.
const ONE_BELOW: f64 = 1.0 - f64::EPSILON / 2.0;

/// Truncation and order of the exponential sum.
///
/// `terms` is the number `M >= 2` of interfering phasors, `order` the phase
/// power `j >= 1`. Floating-point evaluation keeps full phase accuracy while
/// `(M-1)^j < 2^53`; the integer-argument path has no such limit.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct CurlicueParams {
    terms: u32,
    order: u32,
}

impl CurlicueParams {
    pub fn new(terms: u32, order: u32) -> Result<Self> {
        if terms < 2 || order < 1 {
            return Err(Error::InvalidCurlicueParams { terms, order });
        }
        Ok(Self { terms, order })
    }

    /// Number of interfering terms `M`.
    pub fn terms(&self) -> u32 {
        self.terms
    }

    /// Phase order `j`.
    pub fn order(&self) -> u32 {
        self.order
    }
}

/// Dimensionless phase argument, interpreted modulo 1.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PhaseArgument(f64);

impl PhaseArgument {
    pub fn new(value: f64) -> Result<Self> {
        if !value.is_finite() {
            return Err(Error::NonFinitePhase(value));
        }
        Ok(Self(value))
    }

    pub fn value(&self) -> f64 {
        self.0
    }
}

/// Fractional part of `k * r` with the product formed exactly.
///
/// `k` is a nonnegative integer below 2^53 and `r` a reduced argument in
/// (-1, 1). A fused multiply-add recovers the low half of the product, so the
/// reduced phase is accurate to one rounding of the final sum instead of one
/// ulp of the full product.
fn product_fract(k: f64, r: f64) -> f64 {
    let hi = k * r;
    let lo = k.mul_add(r, -hi);
    let folded = hi.fract() + lo;
    folded.fract()
}

/// Complex curlicue amplitude `(1/M) * sum_m exp[2*pi*i*(m-1)^j * zeta]`.
///
/// The argument is reduced modulo 1 before any phase is formed, which keeps
/// the periodicity `s(zeta + 1) = s(zeta)` at rounding level.
pub fn curlicue_amplitude(zeta: PhaseArgument, params: &CurlicueParams) -> Complex64 {
    let reduced = zeta.value().fract();
    let order = params.order() as i32;
    let mut re = 0.0;
    let mut im = 0.0;
    for m in 0..params.terms() {
        let coeff = (m as f64).powi(order);
        let (sin, cos) = (TAU * product_fract(coeff, reduced)).sin_cos();
        re += cos;
        im += sin;
    }
    let scale = f64::from(params.terms());
    Complex64::new(re / scale, im / scale)
}

/// Modulo-squared curlicue amplitude, in [0, 1].
pub fn curlicue_intensity(zeta: PhaseArgument, params: &CurlicueParams) -> f64 {
    curlicue_amplitude(zeta, params).norm_sqr()
}

/// The hyperbolic map `f(xi) = 1/xi` feeding the curlicue argument.
pub fn hyperbolic(xi: f64) -> Result<f64> {
    if !xi.is_finite() || xi <= 0.0 {
        return Err(Error::NonPositiveXi(xi));
    }
    let f = xi.recip();
    if !f.is_finite() {
        return Err(Error::NonPositiveXi(xi));
    }
    Ok(f)
}

/// Intensity of the continuous truncated exponential sum at `xi`.
///
/// Equals `curlicue_intensity(1/xi mod 1)`; the reduction modulo 1 happens
/// before the phase is multiplied by 2*pi, which preserves accuracy when
/// `1/xi` is large.
pub fn ctes_intensity(xi: f64, params: &CurlicueParams) -> Result<f64> {
    let f = hyperbolic(xi)?;
    Ok(curlicue_intensity(PhaseArgument::new(f)?, params))
}

/// Intensity at the integer trial point `xi_N = ell` for target `N`.
///
/// The fractional part of `N / ell` is `(N mod ell) / ell`, computed in
/// integer arithmetic with 128-bit intermediates, so the result is exactly
/// 1.0 if and only if `ell` divides `N`.
pub fn exact_intensity_at_trial(n: u64, ell: u64, params: &CurlicueParams) -> Result<f64> {
    if ell == 0 {
        return Err(Error::ZeroTrialFactor);
    }
    if n == 0 {
        return Err(Error::ZeroTarget);
    }
    let residue = n % ell;
    if residue == 0 {
        return Ok(1.0);
    }
    let mut re = 0.0;
    let mut im = 0.0;
    for m in 0..u64::from(params.terms()) {
        let coeff = pow_mod(m % ell, params.order(), ell);
        let numerator = mul_mod(coeff, residue, ell);
        let (sin, cos) = (TAU * (numerator as f64 / ell as f64)).sin_cos();
        re += cos;
        im += sin;
    }
    let scale = f64::from(params.terms());
    let intensity = (re * re + im * im) / (scale * scale);
    // Non-divisors are strictly below 1 in exact arithmetic (all M phases
    // coincide only when the residue vanishes); keep that under rounding.
    Ok(intensity.min(ONE_BELOW))
}

/// `base^exp mod modulus` by binary exponentiation with 128-bit products.
fn pow_mod(base: u64, exp: u32, modulus: u64) -> u64 {
    if modulus == 1 {
        return 0;
    }
    let mut result = 1u64;
    let mut base = base % modulus;
    let mut exp = exp;
    while exp > 0 {
        if exp & 1 == 1 {
            result = mul_mod(result, base, modulus);
        }
        base = mul_mod(base, base, modulus);
        exp >>= 1;
    }
    result
}

fn mul_mod(a: u64, b: u64, modulus: u64) -> u64 {
    ((a as u128 * b as u128) % modulus as u128) as u64
}
