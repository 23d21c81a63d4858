//! Gamma function for positive real arguments.

use libm::{exp, log};

use crate::error::domain_err;
use crate::{Error, Result};

/// Largest argument accepted by [`gamma_fn`].
pub const GAMMA_MAX_ARG: f64 = 170.0;

// Lanczos coefficients for g = 671/128 (14 terms). On [1, 2] the
// approximation is accurate to a few ulps.
const LANCZOS_G: f64 = 5.242_187_5;
const LANCZOS_C0: f64 = 0.999_999_999_999_997_1;
const LANCZOS: [f64; 14] = [
    57.156_235_665_862_92,
    -59.597_960_355_475_49,
    14.136_097_974_741_747,
    -0.491_913_816_097_620_2,
    0.339_946_499_848_118_9e-4,
    0.465_236_289_270_485_8e-4,
    -0.983_744_753_048_795_6e-4,
    0.158_088_703_224_912_5e-3,
    -0.210_264_441_724_104_9e-3,
    0.217_439_618_115_212_6e-3,
    -0.164_318_106_536_763_9e-3,
    0.844_182_239_838_527_4e-4,
    -0.261_908_384_015_814_1e-4,
    0.368_991_826_595_316_2e-5,
];
const SQRT_2PI: f64 = 2.506_628_274_631_000_5;

fn lanczos_series(x: f64) -> f64 {
    let mut y = x;
    let mut ser = LANCZOS_C0;
    for c in LANCZOS {
        y += 1.0;
        ser += c / y;
    }
    ser
}

/// `ln Γ(x)` for `x > 0`.
pub fn ln_gamma(x: f64) -> Result<f64> {
    if !(x > 0.0) || !x.is_finite() {
        return Err(domain_err!("ln_gamma requires finite x > 0, got {x}"));
    }
    if x < 1.0 {
        // Γ(x) = Γ(x + 1) / x keeps the Lanczos sum in its best range.
        return Ok(ln_gamma_lanczos(x + 1.0) - log(x));
    }
    Ok(ln_gamma_lanczos(x))
}

fn ln_gamma_lanczos(x: f64) -> f64 {
    let tmp = x + LANCZOS_G;
    let tmp = (x + 0.5) * log(tmp) - tmp;
    tmp + log(SQRT_2PI * lanczos_series(x) / x)
}

fn gamma_on_unit(x: f64) -> f64 {
    // x in [1, 2]
    let tmp = x + LANCZOS_G;
    let base = exp((x + 0.5) * log(tmp) - tmp);
    base * SQRT_2PI * lanczos_series(x) / x
}

/// `Γ(x)` for `0 < x ≤ 170`.
///
/// The argument is shifted into `[1, 2]` where the Lanczos sum is used, and
/// the result is carried back by `Γ(x + 1) = x Γ(x)`.
pub fn gamma_fn(x: f64) -> Result<f64> {
    if !(x > 0.0) || x.is_nan() {
        return Err(domain_err!("gamma_fn requires x > 0, got {x}"));
    }
    if x > GAMMA_MAX_ARG {
        return Err(Error::Overflow(alloc::format!("gamma_fn({x})")));
    }
    if x < 1.0 {
        return Ok(gamma_on_unit(x + 1.0) / x);
    }
    if x == libm::floor(x) {
        // (x-1)! by direct product; exact through 22!.
        let mut prod = 1.0;
        let mut k = 2.0;
        while k < x {
            prod *= k;
            k += 1.0;
        }
        return Ok(prod);
    }
    let mut y = x;
    let mut prod = 1.0;
    while y > 2.0 {
        y -= 1.0;
        prod *= y;
    }
    let value = prod * gamma_on_unit(y);
    if !value.is_finite() {
        return Err(Error::Overflow(alloc::format!("gamma_fn({x})")));
    }
    Ok(value)
}

/// `Γ(x)` for arguments the caller has already validated.
pub(crate) fn gamma(x: f64) -> f64 {
    gamma_fn(x).expect("gamma argument validated by caller")
}
