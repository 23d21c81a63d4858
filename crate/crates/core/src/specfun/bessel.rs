//! Bessel functions of the first kind `J_ν(x)` for real `ν ≥ 0`, `x ≥ 0`.
//!
//! Small arguments (`x ≤ 15`) use the ascending series. Larger arguments use
//! Miller's downward recurrence over a whole ladder of orders
//! `ν₀, ν₀ + 1, …` with `ν₀ ∈ [0, 1)`, normalized by the Neumann-type sum
//!
//! ```text
//! (x/2)^ν₀ = Σ_k (ν₀ + 2k) Γ(ν₀ + k) / k! · J_{ν₀+2k}(x).
//! ```

use alloc::vec::Vec;
use core::f64::consts::PI;

use libm::{cbrt, ceil, exp, floor, log, pow};

use super::gamma::{gamma, ln_gamma};
use crate::error::domain_err;
use crate::{Error, Result};

/// Largest argument accepted by [`bessel_j`].
pub const MAX_ARGUMENT: f64 = 500.0;

/// Below this argument the ascending series is used.
pub const SERIES_LIMIT: f64 = 15.0;

const RESCALE_AT: f64 = 1e200;
const RESCALE_BY: f64 = 1e-200;

/// Orders above `x + 10 x^{1/3} + 20` contribute below `1e-30` to any
/// ladder sum: this is the truncation used for all Bessel ladders.
pub fn tail_safe_index(x: f64) -> usize {
    ceil(x + 10.0 * cbrt(x) + 20.0) as usize
}

/// `J_ν(x)` at consecutive orders `base_order + m`, `m = 0..=max_index`.
#[derive(Debug, Clone, PartialEq)]
pub struct BesselLadder {
    pub base_order: f64,
    pub max_index: usize,
    pub argument: f64,
    pub values: Vec<f64>,
}

impl BesselLadder {
    pub fn order(&self, m: usize) -> f64 {
        self.base_order + m as f64
    }

    /// `max |J_{ν-1} + J_{ν+1} - (2ν/x) J_ν| / max(1, |J_ν|)` over interior entries.
    pub fn recurrence_residual(&self) -> f64 {
        let x = self.argument;
        if x == 0.0 || self.values.len() < 3 {
            return 0.0;
        }
        let mut worst = 0.0f64;
        for m in 1..self.values.len() - 1 {
            let nu = self.order(m);
            let r = self.values[m - 1] + self.values[m + 1] - 2.0 * nu / x * self.values[m];
            worst = worst.max(r.abs() / self.values[m].abs().max(1.0));
        }
        worst
    }

    /// Right side of the Neumann sum identity, which should equal
    /// `(x/2)^{base_order}`.
    pub fn neumann_sum(&self) -> f64 {
        neumann_weighted_sum(self.base_order, &self.values) * gamma(self.base_order + 1.0)
    }
}

fn check_args(nu: f64, x: f64) -> Result<()> {
    if !(nu >= 0.0) || !nu.is_finite() {
        return Err(domain_err!("Bessel order must be finite and >= 0, got {nu}"));
    }
    if !(x >= 0.0) {
        return Err(domain_err!("Bessel argument must be >= 0, got {x}"));
    }
    if x > MAX_ARGUMENT {
        return Err(domain_err!("Bessel argument {x} exceeds {MAX_ARGUMENT}"));
    }
    Ok(())
}

/// `J_ν(x)` for `ν ≥ 0`, `0 ≤ x ≤ 500`.
pub fn bessel_j(nu: f64, x: f64) -> Result<f64> {
    check_args(nu, x)?;
    if x == 0.0 {
        return Ok(if nu == 0.0 { 1.0 } else { 0.0 });
    }
    if x <= SERIES_LIMIT {
        return Ok(series(nu, x, series_leading_term(nu, x)));
    }
    let m = floor(nu);
    let base = nu - m;
    let mut buf = Vec::new();
    miller_ladder(base, x, m as usize, &mut buf);
    Ok(buf[m as usize])
}

/// Leading series term `(x/2)^ν / Γ(ν+1)`.
fn series_leading_term(nu: f64, x: f64) -> f64 {
    if nu == 0.0 {
        return 1.0;
    }
    exp(nu * log(0.5 * x) - ln_gamma(nu + 1.0).expect("nu + 1 > 0"))
}

/// Ascending series `Σ_k (-1)^k (x/2)^{ν+2k} / (k! Γ(ν+k+1))`, given its
/// first term.
fn series(nu: f64, x: f64, leading: f64) -> f64 {
    if leading == 0.0 {
        return 0.0;
    }
    let q = -0.25 * x * x;
    let mut term = leading;
    let mut sum = leading;
    let mut k = 0.0;
    loop {
        k += 1.0;
        term *= q / (k * (nu + k));
        sum += term;
        if term.abs() <= 1e-17 * sum.abs() && k > 0.5 * x {
            return sum;
        }
        if k > 500.0 {
            return sum;
        }
    }
}

/// `Σ_k c_k J_{ν₀+2k}` with `c_k = (ν₀+2k) Γ(ν₀+k) / (k! Γ(ν₀+1))`.
fn neumann_weighted_sum(base: f64, values: &[f64]) -> f64 {
    let mut sum = values[0];
    let mut w = 1.0; // Γ(ν₀+k) / (k! Γ(ν₀+1)) at k = 1
    let mut k = 1usize;
    while 2 * k < values.len() {
        let kf = k as f64;
        if k > 1 {
            w *= (base + kf - 1.0) / kf;
        }
        sum += (base + 2.0 * kf) * w * values[2 * k];
        k += 1;
    }
    sum
}

/// Fills `out[0..=top]` with `J_{base+m}(x)` by downward recurrence.
/// Requires `x > 0`, `0 ≤ base < 1`.
pub(crate) fn miller_ladder(base: f64, x: f64, top: usize, out: &mut Vec<f64>) {
    let start = (top + 20).max(tail_safe_index(x));
    out.clear();
    out.resize(start + 2, 0.0);
    out[start] = 1e-30;
    let two_over_x = 2.0 / x;
    for m in (1..=start).rev() {
        let nu = base + m as f64;
        let next = two_over_x * nu * out[m] - out[m + 1];
        out[m - 1] = next;
        if next.abs() > RESCALE_AT {
            for v in &mut out[m - 1..=start] {
                *v *= RESCALE_BY;
            }
        }
    }
    let lhs = pow(0.5 * x, base) / gamma(base + 1.0);
    let scale = lhs / neumann_weighted_sum(base, &out[..=start]);
    out.truncate(top + 1);
    for v in out.iter_mut() {
        *v *= scale;
    }
}

/// Fills `out[0..=top]` with `J_{base+m}(x)` using the evaluation strategy
/// of [`bessel_j`], without argument checks.
pub(crate) fn ladder_into(base: f64, x: f64, top: usize, out: &mut Vec<f64>) {
    if x == 0.0 {
        out.clear();
        out.resize(top + 1, 0.0);
        if base == 0.0 {
            out[0] = 1.0;
        }
        return;
    }
    if x <= SERIES_LIMIT {
        out.clear();
        let mut leading = series_leading_term(base, x);
        for m in 0..=top {
            let nu = base + m as f64;
            if m > 0 {
                leading *= 0.5 * x / nu;
            }
            out.push(series(nu, x, leading));
        }
    } else {
        miller_ladder(base, x, top, out);
    }
}

/// Evaluates the ladder `J_{base_order+m}(x)`, `m = 0..=max_index`.
///
/// `max_index` must reach the tail-safe order `x + 10 x^{1/3} + 20`, so that
/// sums over the ladder are complete.
pub fn bessel_ladder(base_order: f64, x: f64, max_index: usize) -> Result<BesselLadder> {
    if !(0.0..1.0).contains(&base_order) {
        return Err(domain_err!("ladder base order must lie in [0, 1), got {base_order}"));
    }
    check_args(base_order, x)?;
    let required = tail_safe_index(x);
    if max_index < required {
        return Err(Error::Truncation {
            requested: max_index,
            required,
        });
    }
    let mut values = Vec::with_capacity(max_index + 1);
    ladder_into(base_order, x, max_index, &mut values);
    Ok(BesselLadder {
        base_order,
        max_index,
        argument: x,
        values,
    })
}

/// First positive zero `j_ν` of `J_ν`, for `0 ≤ ν ≤ 50`.
///
/// Starts from McMahon's expansion (`ν < 2`) or the large-order expansion
/// (`ν ≥ 2`), refines by Newton with `J'_ν = (ν/x) J_ν - J_{ν+1}`, and
/// confirms that `J_ν` keeps its sign on `(0, j_ν)`; a bracketing search takes
/// over if that check fails.
pub fn bessel_first_zero(nu: f64) -> Result<f64> {
    if !(0.0..=50.0).contains(&nu) {
        return Err(domain_err!("bessel_first_zero supports 0 <= nu <= 50, got {nu}"));
    }
    let guess = if nu < 2.0 {
        let b = (1.0 + 0.5 * nu - 0.25) * PI;
        let mu = 4.0 * nu * nu;
        b - (mu - 1.0) / (8.0 * b) - 4.0 * (mu - 1.0) * (7.0 * mu - 31.0) / (3.0 * pow(8.0 * b, 3.0))
    } else {
        let c = cbrt(nu);
        nu + 1.855_757_1 * c + 1.033_150 / c - 0.003_97 / nu - 0.090_8 / (c * c * nu)
            + 0.043 / (c * nu * nu)
    };
    if let Some(root) = newton(nu, guess, None)? {
        if is_first_zero(nu, root)? {
            return Ok(root);
        }
    }
    // Bracket the first sign change above ν, where J_ν is still positive.
    let mut lo = nu.max(1e-3);
    let mut f_lo = bessel_j(nu, lo)?;
    loop {
        let hi = lo + 0.5;
        let f_hi = bessel_j(nu, hi)?;
        if f_lo > 0.0 && f_hi <= 0.0 {
            return match newton(nu, 0.5 * (lo + hi), Some((lo, hi)))? {
                Some(root) => Ok(root),
                None => Err(Error::NoConvergence {
                    what: alloc::format!("first zero of J_{nu}"),
                    iterations: 200,
                }),
            };
        }
        lo = hi;
        f_lo = f_hi;
        if lo > nu + 100.0 {
            return Err(Error::NoConvergence {
                what: alloc::format!("bracketing the first zero of J_{nu}"),
                iterations: 200,
            });
        }
    }
}

fn newton(nu: f64, mut x: f64, bracket: Option<(f64, f64)>) -> Result<Option<f64>> {
    let (mut lo, mut hi) = bracket.unwrap_or((0.0, f64::INFINITY));
    for _ in 0..200 {
        let j = bessel_j(nu, x)?;
        if j == 0.0 {
            return Ok(Some(x));
        }
        if bracket.is_some() {
            if j > 0.0 {
                lo = x;
            } else {
                hi = x;
            }
        }
        let dj = nu / x * j - bessel_j(nu + 1.0, x)?;
        let mut next = x - j / dj;
        if !(next > lo && next < hi) || !next.is_finite() {
            if bracket.is_none() {
                return Ok(None);
            }
            next = 0.5 * (lo + hi);
        }
        let done = (next - x).abs() <= 1e-14 * x;
        x = next;
        if done {
            return Ok(Some(x));
        }
    }
    if bracket.is_none() {
        return Ok(None);
    }
    Err(Error::NoConvergence {
        what: alloc::format!("Newton iteration for the first zero of J_{nu}"),
        iterations: 200,
    })
}

/// `J_ν > 0` on `(0, root)`: sampled with unit spacing, which is finer than
/// the distance between consecutive zeros.
fn is_first_zero(nu: f64, root: f64) -> Result<bool> {
    if !(root > nu) {
        return Ok(false);
    }
    let mut x = nu.max(0.5);
    while x < root - 0.25 {
        if bessel_j(nu, x)? <= 0.0 {
            return Ok(false);
        }
        x += 1.0;
    }
    Ok(true)
}

#[cfg(test)]
mod tests {
    use super::*;
    use libm::{sin, sqrt};

    // Plain power series with a fixed number of terms; an oracle independent
    // of the Miller path, reliable for x up to about 10.
    fn power_series_oracle(nu: f64, x: f64) -> f64 {
        let mut sum = 0.0;
        let mut term = pow(0.5 * x, nu) / gamma(nu + 1.0);
        for k in 0..80 {
            sum += term;
            let k = k as f64;
            term *= -0.25 * x * x / ((k + 1.0) * (nu + k + 1.0));
        }
        sum
    }

    #[test]
    fn spot_values() {
        assert_eq!(bessel_j(0.0, 0.0).unwrap(), 1.0);
        assert_eq!(bessel_j(1.5, 0.0).unwrap(), 0.0);
        let x = PI / 2.0;
        assert!((bessel_j(0.5, x).unwrap() - 2.0 / PI).abs() < 1e-14);
        let j1 = bessel_j(1.0, 2.404_825_557_695_773).unwrap();
        assert!((j1 - power_series_oracle(1.0, 2.404_825_557_695_773)).abs() < 1e-14);
        assert!((j1 - 0.519_147_497_289_466).abs() < 1e-12);
        assert!((bessel_j(0.0, 1.0).unwrap() - 0.765_197_686_557_966_6).abs() < 1e-14);
    }

    #[test]
    fn half_integer_closed_form_large_argument() {
        // Both sides of the series/Miller switch, and far beyond it.
        for &x in &[5.0, 14.9, 15.1, 37.0, 120.0, 199.0, 480.0] {
            let closed = sqrt(2.0 / (PI * x)) * sin(x);
            let j = bessel_j(0.5, x).unwrap();
            assert!((j - closed).abs() < 1e-11, "x = {x}: {j} vs {closed} diff {}", j - closed);
            // J_{3/2}(x) = sqrt(2/(πx)) (sin x / x - cos x)
            let closed32 = sqrt(2.0 / (PI * x)) * (sin(x) / x - libm::cos(x));
            let j32 = bessel_j(1.5, x).unwrap();
            assert!((j32 - closed32).abs() < 1e-11, "x = {x}: diff {}", j32 - closed32);
        }
    }

    #[test]
    fn series_and_miller_agree_at_switch() {
        for &nu in &[0.0, 0.3, 1.0, 7.25, 30.0] {
            for &x in &[12.0, 15.0] {
                let s = series(nu, x, series_leading_term(nu, x));
                let mut buf = Vec::new();
                let m = floor(nu);
                miller_ladder(nu - m, x, m as usize, &mut buf);
                assert!((s - buf[m as usize]).abs() < 1e-11, "nu {nu} x {x}");
            }
        }
    }

    #[test]
    fn ladder_truncation_and_zero_argument() {
        assert_eq!(
            bessel_ladder(0.0, 100.0, 50),
            Err(Error::Truncation { requested: 50, required: tail_safe_index(100.0) })
        );
        let l = bessel_ladder(0.25, 0.0, 40).unwrap();
        assert!(l.values.iter().all(|&v| v == 0.0));
        let l0 = bessel_ladder(0.0, 0.0, 40).unwrap();
        assert_eq!(l0.values[0], 1.0);
        let l1 = bessel_ladder(0.0, 1.0, 40).unwrap();
        assert!((l1.values[0] - 0.765_197_686_557_966_6).abs() < 1e-14);
        assert!(bessel_ladder(1.0, 1.0, 40).is_err());
    }

    #[test]
    fn ladder_matches_pointwise_evaluation() {
        for &(base, x) in &[(0.0, 3.0), (0.4, 16.0), (0.75, 90.0)] {
            let top = tail_safe_index(x);
            let l = bessel_ladder(base, x, top).unwrap();
            for m in (0..=top).step_by(7) {
                let j = bessel_j(base + m as f64, x).unwrap();
                assert!((l.values[m] - j).abs() < 1e-10);
            }
            let rhs = pow(0.5 * x, base);
            assert!((l.neumann_sum() - rhs).abs() < 1e-9 * rhs.max(1.0));
        }
    }

    #[test]
    fn first_zeros() {
        assert!((bessel_first_zero(0.5).unwrap() - PI).abs() < 1e-13);
        assert!((bessel_first_zero(0.0).unwrap() - 2.404_825_557_695_773).abs() < 1e-12);
        assert!((bessel_first_zero(1.0).unwrap() - 3.831_705_970_207_512).abs() < 1e-12);
        assert!((bessel_first_zero(50.0).unwrap() - 57.116_899_160_119_18).abs() < 1e-9);
        assert!(bessel_first_zero(60.0).is_err());
        for &nu in &[0.0, 0.2, 1.7, 3.3, 12.0, 49.0] {
            let z = bessel_first_zero(nu).unwrap();
            assert!(bessel_j(nu, z).unwrap().abs() <= 1e-11);
        }
    }

    #[test]
    fn domain_errors() {
        assert!(bessel_j(-0.5, 1.0).is_err());
        assert!(bessel_j(1.0, -1.0).is_err());
        assert!(bessel_j(1.0, 501.0).is_err());
    }
}
