//! Gauss quadrature rules on `[-1, 1]`.

use alloc::vec;
use alloc::vec::Vec;
use core::f64::consts::PI;

use libm::{cos, exp, fabs, sqrt};

use super::gamma::ln_gamma;
use crate::eig::tridiag::tql;
use crate::error::domain_err;
use crate::Result;

/// Nodes and weights of an `n`-point rule on `[-1, 1]`.
#[derive(Debug, Clone, PartialEq)]
pub struct GaussRule {
    pub nodes: Vec<f64>,
    pub weights: Vec<f64>,
}

impl GaussRule {
    pub fn len(&self) -> usize {
        self.nodes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.nodes.is_empty()
    }

    /// `Σ w_i f(x_i)`.
    pub fn integrate(&self, mut f: impl FnMut(f64) -> f64) -> f64 {
        self.nodes.iter().zip(&self.weights).map(|(&x, &w)| w * f(x)).sum()
    }

    /// Nodes and weights mapped affinely onto `[a, b]`.
    pub fn mapped(&self, a: f64, b: f64) -> impl Iterator<Item = (f64, f64)> + '_ {
        let half = 0.5 * (b - a);
        let mid = 0.5 * (b + a);
        self.nodes.iter().zip(&self.weights).map(move |(&x, &w)| (mid + half * x, half * w))
    }
}

/// Gauss-Legendre rule by Newton iteration on `P_n`, nodes ascending.
pub fn gauss_legendre(n: usize) -> GaussRule {
    let mut nodes = vec![0.0; n];
    let mut weights = vec![0.0; n];
    let m = n.div_ceil(2);
    for i in 0..m {
        let mut z = cos(PI * (i as f64 + 0.75) / (n as f64 + 0.5));
        let mut dp = 0.0;
        for _ in 0..100 {
            let (mut p0, mut p1) = (1.0, 0.0);
            for j in 0..n {
                let p2 = p1;
                p1 = p0;
                p0 = ((2 * j + 1) as f64 * z * p1 - j as f64 * p2) / (j + 1) as f64;
            }
            dp = n as f64 * (z * p0 - p1) / (z * z - 1.0);
            let dz = p0 / dp;
            z -= dz;
            if fabs(dz) < 1e-16 {
                break;
            }
        }
        let w = 2.0 / ((1.0 - z * z) * dp * dp);
        nodes[i] = -z;
        nodes[n - 1 - i] = z;
        weights[i] = w;
        weights[n - 1 - i] = w;
    }
    GaussRule { nodes, weights }
}

/// Gauss-Jacobi rule for the weight `(1-x)^a (1+x)^b`, `a, b > -1`, from the
/// eigen-decomposition of the Jacobi matrix.
pub fn gauss_jacobi(n: usize, a: f64, b: f64) -> Result<GaussRule> {
    if !(a > -1.0 && b > -1.0) {
        return Err(domain_err!("Jacobi exponents must exceed -1, got a = {a}, b = {b}"));
    }
    if n == 0 {
        return Ok(GaussRule { nodes: Vec::new(), weights: Vec::new() });
    }
    let ab = a + b;
    let mut diag = vec![0.0; n];
    let mut off = vec![0.0; n];
    for k in 0..n {
        let kf = k as f64;
        let s = 2.0 * kf + ab;
        diag[k] = if s == 0.0 || s + 2.0 == 0.0 {
            (b - a) / (ab + 2.0)
        } else {
            (b * b - a * a) / (s * (s + 2.0))
        };
        if k + 1 < n {
            let k1 = kf + 1.0;
            let s1 = 2.0 * k1 + ab;
            let beta = 4.0 * k1 * (k1 + a) * (k1 + b) * (k1 + ab) / (s1 * s1 * (s1 + 1.0) * (s1 - 1.0));
            off[k] = sqrt(beta);
        }
    }
    let mu0 = exp((ab + 1.0) * core::f64::consts::LN_2 + ln_gamma(a + 1.0)? + ln_gamma(b + 1.0)?
        - ln_gamma(ab + 2.0)?);
    let mut first = vec![0.0; n];
    first[0] = 1.0;
    tql(&mut diag, &mut off, Some((&mut first, 1)))?;
    let mut idx: Vec<usize> = (0..n).collect();
    idx.sort_by(|&i, &j| diag[i].total_cmp(&diag[j]));
    Ok(GaussRule {
        nodes: idx.iter().map(|&i| diag[i]).collect(),
        weights: idx.iter().map(|&i| mu0 * first[i] * first[i]).collect(),
    })
}
