//! Riesz means of spectra and verdicts for the eigenvalue inequalities.
//!
//! Lattice verdicts carry a slack: an upper bound holds when
//! `lhs ≤ (1 + slack) rhs`, a lower bound when `lhs ≥ (1 - slack) rhs`.
//! The default slack `0.02 + 4 B h²` absorbs the `O(h²)` bias of discrete
//! eigenvalues and the lattice distortion of Landau levels.

use alloc::vec::Vec;

use libm::pow;

use crate::constants::{ell_const, excess_factor_discrete, lifting_factor, rho_hom, rho_nonsharp, semiclassical_constant};
use crate::eig::Spectrum;
use crate::error::precondition_err;
use crate::landau::landau_riesz_sum;
use crate::lattice::LatticeDomain;
use crate::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Verdict {
    Holds,
    Violated,
    Inconclusive,
}

impl Verdict {
    pub fn name(&self) -> &'static str {
        match self {
            Verdict::Holds => "holds",
            Verdict::Violated => "violated",
            Verdict::Inconclusive => "inconclusive",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Direction {
    /// `lhs ≤ rhs` is asserted.
    Upper,
    /// `lhs ≥ rhs` is asserted.
    Lower,
}

#[derive(Debug, Clone, PartialEq)]
pub struct BoundReport {
    pub inequality_id: &'static str,
    pub lambda: f64,
    pub lhs: f64,
    pub rhs: f64,
    /// `lhs / rhs`; `0` when both vanish, `+∞` when only `rhs` does.
    pub ratio: f64,
    pub verdict: Verdict,
    pub slack_used: f64,
}

impl BoundReport {
    pub fn new(id: &'static str, lambda: f64, lhs: f64, rhs: f64, slack: f64, dir: Direction) -> Self {
        let ratio = if rhs > 0.0 {
            lhs / rhs
        } else if lhs == 0.0 {
            0.0
        } else {
            f64::INFINITY
        };
        let verdict = if ratio.is_nan() || lhs.is_nan() || rhs.is_nan() {
            Verdict::Inconclusive
        } else {
            let ok = match dir {
                Direction::Upper => ratio <= 1.0 + slack,
                // With rhs = 0 a lower bound holds for any lhs ≥ 0.
                Direction::Lower => rhs <= 0.0 || ratio >= 1.0 - slack,
            };
            if ok {
                Verdict::Holds
            } else {
                Verdict::Violated
            }
        };
        BoundReport { inequality_id: id, lambda, lhs, rhs, ratio, verdict, slack_used: slack }
    }
}

/// Number of reports per verdict: `(holds, violated, inconclusive)`.
pub fn tally(reports: &[BoundReport]) -> (usize, usize, usize) {
    reports.iter().fold((0, 0, 0), |(h, v, i), r| match r.verdict {
        Verdict::Holds => (h + 1, v, i),
        Verdict::Violated => (h, v + 1, i),
        Verdict::Inconclusive => (h, v, i + 1),
    })
}

/// `Σ_j (λ_j - λ)_-^γ = Σ_{λ_j < λ} (λ - λ_j)^γ`.
pub fn riesz_mean(spec: &Spectrum, lambda: f64, gamma: f64) -> f64 {
    riesz_mean_values(&spec.values, lambda, gamma)
}

/// [`riesz_mean`] on a sorted eigenvalue slice.
pub fn riesz_mean_values(values: &[f64], lambda: f64, gamma: f64) -> f64 {
    let below = values.partition_point(|&v| v < lambda);
    if gamma == 0.0 {
        return below as f64;
    }
    values[..below].iter().map(|&v| pow(lambda - v, gamma)).sum()
}

/// `0.02 + 4 B h²`.
pub fn default_slack(b: f64, spacing: f64) -> f64 {
    0.02 + 4.0 * b * spacing * spacing
}

/// Fails if any grid point exceeds `0.2/h²` (up to rounding).
pub fn check_window(domain: &LatticeDomain, grid: &[f64]) -> Result<()> {
    let limit = domain.validity_limit();
    match grid.iter().find(|&&l| !(l <= limit * (1.0 + 1e-12))) {
        Some(&lambda) => Err(Error::GridWindow { lambda, limit }),
        None => Ok(()),
    }
}

/// `ρ` of the magnetic Berezin-Li-Yau inequality in the plane: the sharp
/// `ρ^hom` for a homogeneous field, `1` without field for `γ ≥ 1`, and the
/// non-sharp `ρ_{γ,2}` otherwise.
pub fn bly_rho(b: f64, gamma: f64) -> Result<f64> {
    if b > 0.0 {
        rho_hom(gamma)
    } else if gamma >= 1.0 {
        Ok(1.0)
    } else {
        rho_nonsharp(gamma, 2)
    }
}

fn semiclassical_reports(
    id: &'static str,
    spec: &Spectrum,
    domain: &LatticeDomain,
    gamma: f64,
    rho: f64,
    grid: &[f64],
    slack: f64,
) -> Result<Vec<BoundReport>> {
    check_window(domain, grid)?;
    let lcl = semiclassical_constant(gamma, 2)?;
    Ok(grid
        .iter()
        .map(|&l| {
            let rhs = rho * lcl * pow(l, gamma + 1.0) * domain.area;
            BoundReport::new(id, l, riesz_mean(spec, l, gamma), rhs, slack, Direction::Upper)
        })
        .collect())
}

/// `tr(H - λ)_-^γ ≤ ρ L^cl_{γ,2} λ^{γ+1} |Ω|` with `ρ` from [`bly_rho`].
pub fn verify_bly(
    spec: &Spectrum,
    domain: &LatticeDomain,
    b: f64,
    gamma: f64,
    grid: &[f64],
    slack: f64,
) -> Result<Vec<BoundReport>> {
    let rho = bly_rho(b, gamma)?;
    semiclassical_reports("bly", spec, domain, gamma, rho, grid, slack)
}

/// The non-magnetic Pólya bound `N(λ) ≤ L^cl_{0,2} λ |Ω|` (`ρ = 1`, `γ = 0`)
/// applied to any spectrum; with a magnetic field it is expected to fail.
pub fn verify_polya(spec: &Spectrum, domain: &LatticeDomain, grid: &[f64], slack: f64) -> Result<Vec<BoundReport>> {
    semiclassical_reports("polya", spec, domain, 0.0, 1.0, grid, slack)
}

/// `tr(H - λ)_-^γ ≤ |Ω| (B/2π) Σ_k (B(2k-1) - λ)_-^γ`. For `γ < 1` the
/// domain must tile the plane.
pub fn verify_blyhommod(
    spec: &Spectrum,
    domain: &LatticeDomain,
    b: f64,
    gamma: f64,
    grid: &[f64],
    slack: f64,
) -> Result<Vec<BoundReport>> {
    if gamma < 1.0 && !domain.shape.is_tiling() {
        return Err(precondition_err!(
            "the Landau-sum bound with gamma < 1 is only asserted for tiling domains, not {}",
            domain.shape.name()
        ));
    }
    check_window(domain, grid)?;
    grid.iter()
        .map(|&l| {
            let rhs = domain.area * landau_riesz_sum(b, l, gamma)?;
            Ok(BoundReport::new("blyhommod", l, riesz_mean(spec, l, gamma), rhs, slack, Direction::Upper))
        })
        .collect()
}

/// Reverse bound for Neumann spectra:
/// `tr(H^N - λ)_-^γ ≥ |Ω| (B/2π) Σ_k (B(2k-1) - λ)_-^γ`.
pub fn verify_homneu(
    neumann_spec: &Spectrum,
    domain: &LatticeDomain,
    b: f64,
    gamma: f64,
    grid: &[f64],
    slack: f64,
) -> Result<Vec<BoundReport>> {
    check_window(domain, grid)?;
    grid.iter()
        .map(|&l| {
            let rhs = domain.area * landau_riesz_sum(b, l, gamma)?;
            Ok(BoundReport::new("homneu", l, riesz_mean(neumann_spec, l, gamma), rhs, slack, Direction::Lower))
        })
        .collect()
}

/// `tr(H - λ)_-^γ ≥ ℓ_{γ,2} λ_1^{-1} (λ - λ_1)_+^{γ+1}` for `γ ≥ 1`, no slack.
pub fn verify_magdomain(spec: &Spectrum, gamma: f64, grid: &[f64]) -> Result<Vec<BoundReport>> {
    let ell = ell_const(gamma, 2)?;
    let l1 = spec.min().ok_or(Error::EmptyDomain)?;
    if !(l1 > 0.0) {
        return Err(precondition_err!("lowest eigenvalue must be positive, got {l1}"));
    }
    Ok(grid
        .iter()
        .map(|&l| {
            let gap = (l - l1).max(0.0);
            let rhs = ell / l1 * pow(gap, gamma + 1.0);
            BoundReport::new("magdomain", l, riesz_mean(spec, l, gamma), rhs, 0.0, Direction::Lower)
        })
        .collect())
}

/// `max_λ tr(H - λ)_-^γ / λ^α` over the grid; at `γ = 0` also just above each
/// eigenvalue inside the grid range, where the counting function jumps.
pub fn fit_power_constant(values: &[f64], gamma: f64, alpha: f64, grid: &[f64]) -> f64 {
    let mut c = 0.0f64;
    for &l in grid {
        if l > 0.0 {
            c = c.max(riesz_mean_values(values, l, gamma) / pow(l, alpha));
        }
    }
    if gamma == 0.0 {
        let lo = grid.iter().copied().fold(f64::INFINITY, f64::min);
        let hi = grid.iter().copied().fold(0.0, f64::max);
        for &v in values.iter().filter(|&&v| v >= lo && v <= hi && v > 0.0) {
            let l = v * (1.0 + 1e-12);
            c = c.max(riesz_mean_values(values, l, 0.0) / pow(l, alpha));
        }
    }
    c
}

/// With `C` fitted to the non-magnetic spectrum, checks
/// `tr(M - λ)_-^γ ≤ C (γ/e)^γ (e/α)^α Γ(α+1)/Γ(γ+1) λ^α` on the grid.
pub fn verify_diamagdisc(
    spec_h: &Spectrum,
    spec_m: &Spectrum,
    gamma: f64,
    alpha: f64,
    grid: &[f64],
) -> Result<Vec<BoundReport>> {
    let excess = excess_factor_discrete(gamma, alpha)?;
    let c = fit_power_constant(&spec_h.values, gamma, alpha, grid);
    Ok(grid
        .iter()
        .map(|&l| {
            let rhs = c * excess * pow(l, alpha);
            BoundReport::new("diamagdisc", l, riesz_mean(spec_m, l, gamma), rhs, 0.0, Direction::Upper)
        })
        .collect())
}

/// Lifting from a larger Riesz exponent: with `C` fitted to
/// `tr(H - λ)_-^σ ≤ C λ^{σ+κ}`, checks
/// `tr(H - λ)_-^γ ≤ b(γ,σ)/b(γ+κ,σ+κ) C λ^{γ+κ}` on the grid.
///
/// The bound at `λ` uses the `σ` bound at `μ = λ(σ+κ)/(γ+κ)`, so the fit
/// also covers the grid stretched by that factor.
pub fn verify_lifting(spec: &Spectrum, gamma: f64, sigma: f64, kappa: f64, grid: &[f64]) -> Result<Vec<BoundReport>> {
    let factor = lifting_factor(gamma, sigma, kappa)?;
    let stretch = (sigma + kappa) / (gamma + kappa);
    let mut fit_grid = grid.to_vec();
    if stretch.is_finite() {
        fit_grid.extend(grid.iter().map(|l| l * stretch));
    }
    let c = fit_power_constant(&spec.values, sigma, sigma + kappa, &fit_grid);
    Ok(grid
        .iter()
        .map(|&l| {
            let rhs = factor * c * pow(l, gamma + kappa);
            BoundReport::new("lifting", l, riesz_mean(spec, l, gamma), rhs, 0.0, Direction::Upper)
        })
        .collect())
}

/// One row of a Weyl scan.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct WeylRow {
    pub lambda: f64,
    /// `N(λ) / (L^cl_{0,2} λ |Ω|)`.
    pub ratio: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct WeylScan {
    pub rows: Vec<WeylRow>,
    /// Some `λ` exceeds the validity window `0.2/h²`.
    pub beyond_window: bool,
}

/// `N(λ) / (L^cl_{0,2} λ |Ω|)` along `window`.
pub fn weyl_scan(spec: &Spectrum, domain: &LatticeDomain, window: &[f64]) -> WeylScan {
    let lcl = 1.0 / (4.0 * core::f64::consts::PI);
    let rows = window
        .iter()
        .map(|&l| WeylRow {
            lambda: l,
            ratio: if l > 0.0 { riesz_mean(spec, l, 0.0) / (lcl * l * domain.area) } else { 0.0 },
        })
        .collect();
    WeylScan { rows, beyond_window: check_window(domain, window).is_err() }
}

/// `count` points evenly spaced on `[lo, hi]`.
pub fn linear_grid(lo: f64, hi: f64, count: usize) -> Vec<f64> {
    match count {
        0 => return Vec::new(),
        1 => return alloc::vec![lo],
        _ => {}
    }
    let mut g: Vec<f64> = (0..count).map(|i| lo + (hi - lo) * i as f64 / (count - 1) as f64).collect();
    g[count - 1] = hi;
    g
}
