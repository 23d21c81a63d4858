//! Landau levels of the planar Laplacian with a homogeneous field `B`:
//! eigenvalues `B(2k-1)`, `k ≥ 1`, each with density `B/2π` per unit area.

use alloc::vec::Vec;
use core::f64::consts::PI;

use libm::{exp, log, pow};

use crate::constants::{rho_hom, semiclassical_constant};
use crate::error::domain_err;
use crate::search::{golden_max, scan_max};
use crate::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LandauSpectrum {
    pub field_strength: f64,
}

impl LandauSpectrum {
    pub fn new(field_strength: f64) -> Result<Self> {
        check_field(field_strength)?;
        Ok(LandauSpectrum { field_strength })
    }

    /// `B(2k - 1)` for `k ≥ 1`.
    pub fn level(&self, k: u64) -> f64 {
        self.field_strength * (2 * k - 1) as f64
    }

    pub fn degeneracy_density(&self) -> f64 {
        self.field_strength / (2.0 * PI)
    }

    /// Number of levels strictly below `mu`.
    pub fn levels_below(&self, mu: f64) -> u64 {
        if !(mu > self.field_strength) {
            return 0;
        }
        // B(2k-1) < μ  ⇔  k < (μ/B + 1)/2
        let bound = 0.5 * (mu / self.field_strength + 1.0);
        let mut k = libm::ceil(bound) as u64 - 1;
        while k > 0 && self.level(k) >= mu {
            k -= 1;
        }
        while self.level(k + 1) < mu {
            k += 1;
        }
        k
    }
}

fn check_field(b: f64) -> Result<()> {
    if !(b > 0.0) || !b.is_finite() {
        return Err(domain_err!("field strength must be finite and > 0, got {b}"));
    }
    Ok(())
}

/// `(B/2π) Σ_{k≥1} (B(2k-1) - λ)_-^γ`; at `γ = 0` levels count only when
/// strictly below `λ`.
pub fn landau_riesz_sum(b: f64, lambda: f64, gamma: f64) -> Result<f64> {
    let spec = LandauSpectrum::new(b)?;
    if !(gamma >= 0.0) {
        return Err(domain_err!("gamma must be >= 0, got {gamma}"));
    }
    let n = spec.levels_below(lambda);
    let mut sum = 0.0;
    for k in 1..=n {
        let gap = lambda - spec.level(k);
        sum += if gamma == 0.0 { 1.0 } else { pow(gap, gamma) };
    }
    Ok(spec.degeneracy_density() * sum)
}

/// `(B/2π) · #{k : B(2k-1) < μ}`.
pub fn landau_ids(b: f64, mu: f64) -> Result<f64> {
    let spec = LandauSpectrum::new(b)?;
    Ok(spec.degeneracy_density() * spec.levels_below(mu) as f64)
}

/// Where the supremum of the Landau ratio is reached.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Argmax {
    /// Attained at this `λ`.
    Attained(f64),
    /// Approached as `λ` decreases to this value (`γ = 0`, `λ → B⁺`).
    LimitFromAbove(f64),
    /// Approached as `λ → ∞` (`γ ≥ 1`).
    Asymptotic,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LandauSup {
    pub sup: f64,
    pub argmax: Argmax,
}

/// `landau_riesz_sum(B, λ, γ) / (L^cl_{γ,2} λ^{γ+1})`.
pub fn landau_ratio(b: f64, lambda: f64, gamma: f64) -> Result<f64> {
    if !(lambda > 0.0) {
        return Err(domain_err!("lambda must be > 0, got {lambda}"));
    }
    Ok(landau_riesz_sum(b, lambda, gamma)? / (semiclassical_constant(gamma, 2)? * pow(lambda, gamma + 1.0)))
}

/// Log-spaced `λ` grid on `[B/2, 50B]`.
pub fn ratio_scan_grid(b: f64, points: usize) -> Vec<f64> {
    let (lo, hi) = (log(0.5 * b), log(50.0 * b));
    (0..points)
        .map(|i| exp(lo + (hi - lo) * i as f64 / (points - 1) as f64))
        .collect()
}

const SCAN_POINTS: usize = 2000;

/// Supremum over `λ` of [`landau_ratio`], by a 2000-point log scan on
/// `[B/2, 50B]` and golden-section refinement. The result is checked against
/// the closed form [`rho_hom`] within `tol`.
pub fn landau_ratio_sup(b: f64, gamma: f64, tol: f64) -> Result<LandauSup> {
    check_field(b)?;
    if !(tol > 0.0) {
        return Err(domain_err!("tol must be > 0, got {tol}"));
    }
    let expected = rho_hom(gamma)?;
    let result = if gamma == 0.0 {
        let lambda = b * (1.0 + 1e-9);
        LandauSup { sup: landau_ratio(b, lambda, 0.0)?, argmax: Argmax::LimitFromAbove(b) }
    } else {
        let grid = ratio_scan_grid(b, SCAN_POINTS);
        let mut failure = None;
        let mut ratio = |l: f64| match landau_ratio(b, l, gamma) {
            Ok(v) => v,
            Err(e) => {
                failure.get_or_insert(e);
                f64::NAN
            }
        };
        let (i, best) = scan_max(&grid, &mut ratio).ok_or(Error::EmptyDomain)?;
        if gamma >= 1.0 {
            // The ratio increases towards 1 as λ → ∞; the scan only confirms
            // that it stays below.
            if best > expected + tol {
                return Err(Error::Tolerance { found: best, expected, tol });
            }
            LandauSup { sup: expected, argmax: Argmax::Asymptotic }
        } else {
            let lo = grid[i.saturating_sub(1)];
            let hi = grid[(i + 1).min(grid.len() - 1)];
            let (x, v) = golden_max(&mut ratio, lo, hi, 1e-10 * b);
            let (x, v) = if v >= best { (x, v) } else { (grid[i], best) };
            LandauSup { sup: v, argmax: Argmax::Attained(x) }
        }
    };
    if (result.sup - expected).abs() > tol {
        return Err(Error::Tolerance { found: result.sup, expected, tol });
    }
    Ok(result)
}
