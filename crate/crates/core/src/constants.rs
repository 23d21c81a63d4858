//! Closed-form constants of the semiclassical eigenvalue inequalities.
//!
//! Conventions: `0^0 = 1` throughout, and `b(0, σ) = 1` exactly.

use alloc::vec;
use alloc::vec::Vec;
use core::f64::consts::{E, PI};

use libm::pow;

use crate::error::{domain_err, precondition_err};
use crate::specfun::{bessel_first_zero, bessel_j, gamma_fn, ln_gamma};
use crate::Result;

/// Li-Yau constant entering the stability constant as a literature input.
pub const LI_YAU_CONSTANT: f64 = 4.4827;

/// Exponents parameterizing the constants.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RieszOrder {
    /// Riesz exponent `γ ≥ 0`.
    pub gamma: f64,
    /// Space dimension `d ≥ 2`.
    pub dim: u32,
    /// Power `α ≥ 0` of an assumed non-magnetic bound `C λ^α`.
    pub alpha: f64,
    /// Source exponent `σ > γ` of the lifting factor.
    pub sigma: f64,
    /// Shift `κ ≥ 0` of the lifting factor.
    pub kappa: f64,
}

impl RieszOrder {
    /// `(γ, d)` with `α = γ + d/2`, `σ = 3/2`, `κ = d/2`.
    pub fn new(gamma: f64, dim: u32) -> Result<Self> {
        let r = RieszOrder {
            gamma,
            dim,
            alpha: gamma + 0.5 * dim as f64,
            sigma: 1.5,
            kappa: 0.5 * dim as f64,
        };
        r.validate()?;
        Ok(r)
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.gamma >= 0.0) || !self.gamma.is_finite() {
            return Err(domain_err!("gamma must be finite and >= 0, got {}", self.gamma));
        }
        if self.dim < 2 {
            return Err(domain_err!("dimension must be >= 2, got {}", self.dim));
        }
        if !(self.alpha >= 0.0) || !(self.kappa >= 0.0) {
            return Err(domain_err!("alpha and kappa must be >= 0"));
        }
        Ok(())
    }
}

/// A named constant with the parameters it was evaluated at.
#[derive(Debug, Clone, PartialEq)]
pub struct ConstantValue {
    pub name: &'static str,
    pub params: RieszOrder,
    pub value: f64,
    pub formula_ref: &'static str,
}

fn powi(x: f64, n: i32) -> f64 {
    pow(x, n as f64)
}

/// `x^y` with `0^0 = 1`.
fn pow0(x: f64, y: f64) -> f64 {
    if y == 0.0 {
        1.0
    } else {
        pow(x, y)
    }
}

fn check_gamma(gamma: f64) -> Result<()> {
    if !(gamma >= 0.0) || !gamma.is_finite() {
        return Err(domain_err!("gamma must be finite and >= 0, got {gamma}"));
    }
    Ok(())
}

/// `L^cl_{γ,d} = Γ(γ+1) / (2^d π^{d/2} Γ(γ+d/2+1))`.
pub fn semiclassical_constant(gamma: f64, d: u32) -> Result<f64> {
    check_gamma(gamma)?;
    if d < 1 {
        return Err(domain_err!("dimension must be >= 1"));
    }
    let half_d = 0.5 * d as f64;
    let ratio = libm::exp(ln_gamma(gamma + 1.0)? - ln_gamma(gamma + half_d + 1.0)?);
    Ok(ratio / (powi(2.0, d as i32) * pow(PI, half_d)))
}

/// `(e/α)^α Γ(α+1)`, equal to 1 at `α = 0`.
pub fn excess_factor_general(alpha: f64) -> Result<f64> {
    if !(alpha >= 0.0) || !alpha.is_finite() {
        return Err(domain_err!("alpha must be finite and >= 0, got {alpha}"));
    }
    if alpha == 0.0 {
        return Ok(1.0);
    }
    Ok(libm::exp(alpha * (1.0 - libm::log(alpha)) + ln_gamma(alpha + 1.0)?))
}

/// `(γ/e)^γ (e/α)^α Γ(α+1)/Γ(γ+1)` for `α ≥ γ ≥ 0`.
pub fn excess_factor_discrete(gamma: f64, alpha: f64) -> Result<f64> {
    check_gamma(gamma)?;
    if !(alpha >= gamma) {
        return Err(precondition_err!("need alpha >= gamma, got alpha = {alpha}, gamma = {gamma}"));
    }
    let g = if gamma == 0.0 {
        0.0
    } else {
        gamma * (libm::log(gamma) - 1.0) - ln_gamma(gamma + 1.0)?
    };
    Ok(excess_factor_general(alpha)? * libm::exp(g))
}

/// `b(γ, σ) = σ^{-σ} γ^γ (σ-γ)^{σ-γ}`, the maximum of
/// `(λ-E)^γ / (μ-E)^σ` over `E < λ` in units of `(μ-λ)^{γ-σ}`.
pub fn b_factor(gamma: f64, sigma: f64) -> Result<f64> {
    check_gamma(gamma)?;
    if !(sigma > gamma) {
        return Err(precondition_err!("need sigma > gamma, got sigma = {sigma}, gamma = {gamma}"));
    }
    if gamma == 0.0 {
        return Ok(1.0);
    }
    Ok(pow(sigma, -sigma) * pow(gamma, gamma) * pow(sigma - gamma, sigma - gamma))
}

/// `b(γ, σ) / b(γ+κ, σ+κ)`.
pub fn lifting_factor(gamma: f64, sigma: f64, kappa: f64) -> Result<f64> {
    if !(kappa >= 0.0) || !kappa.is_finite() {
        return Err(precondition_err!("need kappa >= 0, got {kappa}"));
    }
    Ok(b_factor(gamma, sigma)? / b_factor(gamma + kappa, sigma + kappa)?)
}

/// `ρ_{γ,d}` for `0 ≤ γ < 3/2`:
/// `Γ(5/2)Γ(γ+d/2+1) / (Γ((5+d)/2)Γ(γ+1)) · 3^{-3/2} (3+d)^{(3+d)/2}
/// (2γ)^γ (2γ+d)^{-γ-d/2}`.
pub fn rho_nonsharp(gamma: f64, d: u32) -> Result<f64> {
    check_gamma(gamma)?;
    if gamma >= 1.5 {
        return Err(precondition_err!("rho_nonsharp needs gamma < 3/2, got {gamma}"));
    }
    if d < 2 {
        return Err(domain_err!("dimension must be >= 2, got {d}"));
    }
    let df = d as f64;
    let gammas = ln_gamma(2.5)? + ln_gamma(gamma + 0.5 * df + 1.0)?
        - ln_gamma(0.5 * (5.0 + df))?
        - ln_gamma(gamma + 1.0)?;
    Ok(libm::exp(gammas)
        * pow(3.0, -1.5)
        * pow(3.0 + df, 0.5 * (3.0 + df))
        * pow0(2.0 * gamma, gamma)
        * pow(2.0 * gamma + df, -gamma - 0.5 * df))
}

/// Sharp constant for the homogeneous field in the plane:
/// `2` at `γ = 0`, `2(γ/(γ+1))^γ` on `(0, 1)`, `1` from `γ = 1` on.
pub fn rho_hom(gamma: f64) -> Result<f64> {
    check_gamma(gamma)?;
    Ok(if gamma == 0.0 {
        2.0
    } else if gamma < 1.0 {
        2.0 * pow(gamma / (gamma + 1.0), gamma)
    } else {
        1.0
    })
}

/// `ℓ_{γ,d} = Γ(γ+1)Γ(2+d/2)/Γ(γ+1+d/2) · j²_{(d-2)/2} J²_{d/2}(j_{(d-2)/2}) / (d(d+2))`.
pub fn ell_const(gamma: f64, d: u32) -> Result<f64> {
    if !(gamma >= 1.0) || !gamma.is_finite() {
        return Err(precondition_err!("ell_const needs gamma >= 1, got {gamma}"));
    }
    if d < 2 {
        return Err(domain_err!("dimension must be >= 2, got {d}"));
    }
    let df = d as f64;
    let nu = 0.5 * (df - 2.0);
    let j = bessel_first_zero(nu)?;
    let jd = bessel_j(0.5 * df, j)?;
    let gammas = libm::exp(ln_gamma(gamma + 1.0)? + ln_gamma(2.0 + 0.5 * df)? - ln_gamma(gamma + 1.0 + 0.5 * df)?);
    Ok(gammas * j * j * jd * jd / (df * (df + 2.0)))
}

/// `6(e/4)^3`, the discrete excess factor at `γ = 1`, `α = 4`.
pub fn stability_excess() -> f64 {
    6.0 * powi(E / 4.0, 3)
}

/// `(3/(4π)) × 4.4827`.
pub fn stability_li_yau() -> f64 {
    3.0 / (4.0 * PI) * LI_YAU_CONSTANT
}

/// `6(e/4)^3 × (3/(4π)) × 4.4827`.
pub fn stability_constant() -> f64 {
    stability_excess() * stability_li_yau()
}

/// Every constant defined at the order `(γ, d)`; those whose preconditions
/// fail at this order are omitted.
pub fn constants_at(order: &RieszOrder) -> Result<Vec<ConstantValue>> {
    order.validate()?;
    let (g, d) = (order.gamma, order.dim);
    let mut out = vec![
        ConstantValue {
            name: "semiclassical",
            params: *order,
            value: semiclassical_constant(g, d)?,
            formula_ref: "Γ(γ+1)/(2^d π^{d/2} Γ(γ+d/2+1))",
        },
        ConstantValue {
            name: "excess_general",
            params: *order,
            value: excess_factor_general(order.alpha)?,
            formula_ref: "(e/α)^α Γ(α+1)",
        },
    ];
    if order.alpha >= g {
        out.push(ConstantValue {
            name: "excess_discrete",
            params: *order,
            value: excess_factor_discrete(g, order.alpha)?,
            formula_ref: "(γ/e)^γ (e/α)^α Γ(α+1)/Γ(γ+1)",
        });
    }
    if order.sigma > g {
        out.push(ConstantValue {
            name: "lifting",
            params: *order,
            value: lifting_factor(g, order.sigma, order.kappa)?,
            formula_ref: "b(γ,σ)/b(γ+κ,σ+κ), b(γ,σ) = σ^{-σ} γ^γ (σ-γ)^{σ-γ}",
        });
    }
    if g < 1.5 {
        out.push(ConstantValue {
            name: "rho",
            params: *order,
            value: rho_nonsharp(g, d)?,
            formula_ref: "b(γ,3/2)/b(γ+d/2,3/2+d/2) · L^cl_{3/2,d}/L^cl_{γ,d}",
        });
    }
    if d == 2 {
        out.push(ConstantValue {
            name: "rho_hom",
            params: *order,
            value: rho_hom(g)?,
            formula_ref: "2 (γ=0); 2(γ/(γ+1))^γ (0<γ<1); 1 (γ≥1)",
        });
    }
    if g >= 1.0 {
        out.push(ConstantValue {
            name: "ell",
            params: *order,
            value: ell_const(g, d)?,
            formula_ref: "Γ(γ+1)Γ(2+d/2)/Γ(γ+1+d/2) · j²_{(d-2)/2} J²_{d/2}(j_{(d-2)/2})/(d(d+2))",
        });
    }
    out.push(ConstantValue {
        name: "stability",
        params: *order,
        value: stability_constant(),
        formula_ref: "6(e/4)^3 × (3/(4π)) × 4.4827 (Li-Yau input)",
    });
    Ok(out)
}

/// `Γ(x)` re-exported for constant tables.
pub fn gamma_value(x: f64) -> Result<f64> {
    gamma_fn(x)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn close(a: f64, b: f64, tol: f64) -> bool {
        (a - b).abs() <= tol
    }

    #[test]
    fn semiclassical_values() {
        assert!(close(semiclassical_constant(0.0, 2).unwrap(), 1.0 / (4.0 * PI), 1e-16));
        assert!(close(semiclassical_constant(1.0, 2).unwrap(), 1.0 / (8.0 * PI), 1e-16));
        assert!(close(semiclassical_constant(1.5, 2).unwrap(), 1.0 / (10.0 * PI), 1e-15));
        assert!(semiclassical_constant(-1.0, 2).is_err());
    }

    #[test]
    fn excess_factors() {
        assert_eq!(excess_factor_general(0.0).unwrap(), 1.0);
        assert!(close(excess_factor_general(1.0).unwrap(), E, 1e-14));
        assert!(close(excess_factor_general(4.0).unwrap(), 24.0 * powi(E / 4.0, 4), 1e-12));
        assert!(close(excess_factor_discrete(1.0, 4.0).unwrap(), 24.0 * powi(E, 3) / 256.0, 1e-13));
        assert!(close(excess_factor_discrete(1.0, 4.0).unwrap(), 1.883_02, 1e-5));
        assert!(close(excess_factor_discrete(0.0, 2.5).unwrap(), excess_factor_general(2.5).unwrap(), 1e-15));
        assert!(excess_factor_discrete(2.0, 1.0).is_err());
    }

    #[test]
    fn lifting_values() {
        assert_eq!(lifting_factor(0.7, 1.5, 0.0).unwrap(), 1.0);
        assert!(close(lifting_factor(1.0, 1.5, 1.0).unwrap(), 1.344_78, 1e-5));
        assert!(close(lifting_factor(0.0, 1.5, 1.0).unwrap(), 5.379_15, 1e-5));
        assert!(lifting_factor(1.5, 1.5, 1.0).is_err());
    }

    #[test]
    fn rho_values() {
        let r12 = pow(5.0 / 3.0, 1.5) / 2.0;
        assert!(close(rho_nonsharp(1.0, 2).unwrap(), r12, 1e-13));
        assert!(close(rho_nonsharp(0.0, 2).unwrap(), 2.0 * r12, 1e-13));
        assert!(close(rho_nonsharp(1.0, 3).unwrap(), 1.095_060_242_512_875, 1e-12));
        assert!(rho_nonsharp(1.5, 2).is_err());
        assert_eq!(rho_hom(0.0).unwrap(), 2.0);
        assert_eq!(rho_hom(1.0).unwrap(), 1.0);
        assert!(close(rho_hom(0.5).unwrap(), 2.0 / libm::sqrt(3.0), 1e-15));
    }

    #[test]
    fn ell_values() {
        assert!(close(ell_const(1.0, 2).unwrap(), 0.194_831_287_299_599, 1e-11));
        assert!(close(ell_const(1.0, 3).unwrap(), 2.0 / 15.0, 1e-12));
        assert!(close(ell_const(2.0, 2).unwrap(), 0.194_831_287_299_599 * 4.0 / 6.0, 1e-11));
        assert!(ell_const(0.5, 2).is_err());
    }

    #[test]
    fn stability_values() {
        assert!(close(stability_excess(), 1.883_02, 1e-5));
        assert!(close(stability_li_yau(), 1.070_17, 1e-5));
        assert!(close(stability_constant(), 2.0152, 1e-3));
    }

    #[test]
    fn constant_table() {
        let table = constants_at(&RieszOrder::new(1.0, 2).unwrap()).unwrap();
        let get = |n: &str| table.iter().find(|c| c.name == n).unwrap().value;
        assert!(close(get("rho"), 1.0758, 1e-4));
        assert!(close(get("semiclassical"), 0.039_788_7, 1e-7));
        assert!(table.iter().all(|c| c.value > 0.0));
    }
}
