//! Sine integral `Si(x) = ∫_0^x sin(s)/s ds`.

use libm::{cos, sin};
use num_complex::Complex64;

use crate::error::domain_err;
use crate::Result;

const SERIES_LIMIT: f64 = 4.0;

/// `Si(x)` for `x ≥ 0`, absolute accuracy near machine precision.
///
/// Power series below `x = 4`; above, the continued fraction for the
/// exponential integral `E_1(ix)` evaluated with the modified Lentz method.
pub fn sine_integral(x: f64) -> Result<f64> {
    if !(x >= 0.0) {
        return Err(domain_err!("sine_integral requires x >= 0, got {x}"));
    }
    if x == 0.0 {
        return Ok(0.0);
    }
    if x.is_infinite() {
        return Ok(core::f64::consts::FRAC_PI_2);
    }
    if x <= SERIES_LIMIT {
        Ok(series(x))
    } else {
        Ok(continued_fraction(x))
    }
}

fn series(x: f64) -> f64 {
    let x2 = x * x;
    let mut power = x; // x^(2k+1) / (2k+1)!
    let mut sum = x;
    let mut k = 0u32;
    loop {
        k += 1;
        let m = (2 * k) as f64;
        power *= -x2 / (m * (m + 1.0));
        let term = power / (m + 1.0);
        sum += term;
        if term.abs() < 1e-17 * sum.abs() {
            return sum;
        }
    }
}

fn continued_fraction(x: f64) -> f64 {
    const TINY: f64 = 1e-300;
    let mut b = Complex64::new(1.0, x);
    let mut c = Complex64::new(1.0 / TINY, 0.0);
    let mut d = Complex64::new(1.0, 0.0) / b;
    let mut h = d;
    for i in 2..200u32 {
        let a = -(((i - 1) * (i - 1)) as f64);
        b += 2.0;
        d = Complex64::new(1.0, 0.0) / (d * a + b);
        c = b + Complex64::new(a, 0.0) / c;
        let del = c * d;
        h *= del;
        if (del.re - 1.0).abs() + del.im.abs() < 1e-16 {
            break;
        }
    }
    // E_1(ix) = -Ci(x) + i(Si(x) - π/2)
    let e1 = Complex64::new(cos(x), -sin(x)) * h;
    core::f64::consts::FRAC_PI_2 + e1.im
}
