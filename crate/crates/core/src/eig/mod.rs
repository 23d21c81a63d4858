//! Dense Hermitian eigensolver and spectral matrix functions.
//!
//! Complex Householder reduction to a real tridiagonal matrix followed by
//! implicit-shift QL. Eigenvectors are optional; without them a solve
//! needs `n²/2` complex words of workspace and about `16n³/3` flops.

mod householder;
pub(crate) mod tridiag;

use alloc::vec;
use alloc::vec::Vec;
use core::hash::Hasher;
use core::ops::{Index, IndexMut};

use fnv::FnvHasher;
use libm::{exp, fabs, sqrt};
use num_complex::Complex64;

use crate::{Error, Result};

/// Largest dimension the dense solver accepts.
pub const DIMENSION_CAP: usize = 5000;

/// Relative tolerance of the Hermitian input check.
pub const HERMITIAN_TOL: f64 = 1e-12;

/// Square complex matrix, row-major.
#[derive(Debug, Clone, PartialEq)]
pub struct CMatrix {
    n: usize,
    data: Vec<Complex64>,
}

impl CMatrix {
    pub fn zeros(n: usize) -> Self {
        CMatrix { n, data: vec![Complex64::new(0.0, 0.0); n * n] }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n);
        for i in 0..n {
            m[(i, i)] = Complex64::new(1.0, 0.0);
        }
        m
    }

    pub fn from_fn(n: usize, mut f: impl FnMut(usize, usize) -> Complex64) -> Self {
        let mut data = Vec::with_capacity(n * n);
        for i in 0..n {
            for j in 0..n {
                data.push(f(i, j));
            }
        }
        CMatrix { n, data }
    }

    pub fn from_real(n: usize, a: &[f64]) -> Self {
        assert_eq!(a.len(), n * n);
        CMatrix { n, data: a.iter().map(|&x| Complex64::new(x, 0.0)).collect() }
    }

    pub fn diagonal(d: &[f64]) -> Self {
        let mut m = Self::zeros(d.len());
        for (i, &x) in d.iter().enumerate() {
            m[(i, i)] = Complex64::new(x, 0.0);
        }
        m
    }

    pub fn dim(&self) -> usize {
        self.n
    }

    pub fn as_slice(&self) -> &[Complex64] {
        &self.data
    }

    pub fn column(&self, k: usize) -> Vec<Complex64> {
        (0..self.n).map(|i| self[(i, k)]).collect()
    }

    pub fn mul(&self, other: &CMatrix) -> CMatrix {
        assert_eq!(self.n, other.n);
        let n = self.n;
        let mut out = CMatrix::zeros(n);
        for i in 0..n {
            for k in 0..n {
                let a = self[(i, k)];
                if a == Complex64::new(0.0, 0.0) {
                    continue;
                }
                let row = &other.data[k * n..(k + 1) * n];
                for (o, b) in out.data[i * n..(i + 1) * n].iter_mut().zip(row) {
                    *o += a * b;
                }
            }
        }
        out
    }

    pub fn mul_vec(&self, x: &[Complex64]) -> Vec<Complex64> {
        self.data
            .chunks_exact(self.n)
            .map(|row| row.iter().zip(x).map(|(a, b)| a * b).sum())
            .collect()
    }

    pub fn adjoint(&self) -> CMatrix {
        CMatrix::from_fn(self.n, |i, j| self[(j, i)].conj())
    }

    pub fn trace(&self) -> Complex64 {
        (0..self.n).map(|i| self[(i, i)]).sum()
    }

    /// Largest entry modulus.
    pub fn max_abs(&self) -> f64 {
        self.data.iter().map(|z| z.norm()).fold(0.0, f64::max)
    }

    /// Frobenius norm.
    pub fn norm(&self) -> f64 {
        sqrt(self.data.iter().map(|z| z.norm_sqr()).sum())
    }

    /// `max |a_ij - conj(a_ji)|`.
    pub fn hermitian_defect(&self) -> f64 {
        let mut worst = 0.0f64;
        for i in 0..self.n {
            for j in 0..=i {
                worst = worst.max((self[(i, j)] - self[(j, i)].conj()).norm());
            }
        }
        worst
    }

    /// FNV-1a digest of the entries, used as spectrum provenance.
    pub fn digest(&self) -> u64 {
        let mut h = FnvHasher::default();
        h.write_usize(self.n);
        for z in &self.data {
            h.write_u64(z.re.to_bits());
            h.write_u64(z.im.to_bits());
        }
        h.finish()
    }
}

impl Index<(usize, usize)> for CMatrix {
    type Output = Complex64;
    fn index(&self, (i, j): (usize, usize)) -> &Complex64 {
        &self.data[i * self.n + j]
    }
}

impl IndexMut<(usize, usize)> for CMatrix {
    fn index_mut(&mut self, (i, j): (usize, usize)) -> &mut Complex64 {
        &mut self.data[i * self.n + j]
    }
}

/// Sorted eigenvalues with optional orthonormal eigenvectors (as columns).
#[derive(Debug, Clone, PartialEq)]
pub struct Spectrum {
    pub values: Vec<f64>,
    pub vectors: Option<CMatrix>,
    /// Digest of the matrix the spectrum was computed from.
    pub source: u64,
}

impl Spectrum {
    /// Wraps an externally known eigenvalue list (sorted on entry).
    pub fn from_values(mut values: Vec<f64>, source: u64) -> Self {
        values.sort_by(f64::total_cmp);
        Spectrum { values, vectors: None, source }
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    pub fn min(&self) -> Option<f64> {
        self.values.first().copied()
    }

    /// `max_k ‖H v_k - λ_k v_k‖`, if eigenvectors are present.
    pub fn max_residual(&self, h: &CMatrix) -> Option<f64> {
        let v = self.vectors.as_ref()?;
        let mut worst = 0.0f64;
        for (k, &lam) in self.values.iter().enumerate() {
            let x = v.column(k);
            let hx = h.mul_vec(&x);
            let r: f64 = hx.iter().zip(&x).map(|(a, b)| (a - lam * b).norm_sqr()).sum();
            worst = worst.max(sqrt(r));
        }
        Some(worst)
    }
}

fn check_input(h: &CMatrix) -> Result<()> {
    if h.n > DIMENSION_CAP {
        return Err(Error::DimensionCap { dim: h.n, cap: DIMENSION_CAP });
    }
    let defect = h.hermitian_defect();
    if defect > HERMITIAN_TOL * h.max_abs().max(1.0) || defect.is_nan() {
        return Err(Error::NotHermitian { asymmetry: defect });
    }
    Ok(())
}

/// Full spectrum of a Hermitian matrix, with eigenvectors on request.
pub fn eigenvalues(h: &CMatrix, want_vectors: bool) -> Result<Spectrum> {
    check_input(h)?;
    let n = h.n;
    let source = h.digest();
    let mut packed = householder::Packed::from_full(n, &h.data);
    let (mut d, mut e, refl) = householder::tridiagonalize(&mut packed, want_vectors);
    drop(packed);
    if !want_vectors {
        tridiag::tql(&mut d, &mut e, None)?;
        return Ok(Spectrum::from_values(d, source));
    }
    let mut z = vec![0.0; n * n];
    for i in 0..n {
        z[i * n + i] = 1.0;
    }
    tridiag::tql(&mut d, &mut e, Some((&mut z, n)))?;
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&a, &b| d[a].total_cmp(&d[b]));
    let refl = refl.expect("reflectors kept");
    let mut vectors = CMatrix::zeros(n);
    let mut x = vec![Complex64::new(0.0, 0.0); n];
    for (col, &k) in order.iter().enumerate() {
        for i in 0..n {
            x[i] = Complex64::new(z[i * n + k], 0.0);
        }
        refl.apply(&mut x);
        for i in 0..n {
            vectors[(i, col)] = x[i];
        }
    }
    Ok(Spectrum {
        values: order.iter().map(|&k| d[k]).collect(),
        vectors: Some(vectors),
        source,
    })
}

/// `V f(Λ) Vᴴ` for Hermitian `h`.
pub fn matrix_function(h: &CMatrix, f: impl Fn(f64) -> f64) -> Result<CMatrix> {
    let spec = eigenvalues(h, true)?;
    Ok(apply_function(&spec, f))
}

/// `V f(Λ) Vᴴ` from a spectrum that carries eigenvectors.
pub fn apply_function(spec: &Spectrum, f: impl Fn(f64) -> f64) -> CMatrix {
    let v = spec.vectors.as_ref().expect("spectrum without eigenvectors");
    let n = v.n;
    let fl: Vec<f64> = spec.values.iter().map(|&l| f(l)).collect();
    let mut out = CMatrix::zeros(n);
    for i in 0..n {
        for j in 0..=i {
            let mut s = Complex64::new(0.0, 0.0);
            for k in 0..n {
                s += v[(i, k)] * fl[k] * v[(j, k)].conj();
            }
            out[(i, j)] = s;
            out[(j, i)] = s.conj();
        }
        out[(i, i)].im = 0.0;
    }
    out
}

/// `exp(-t H)`.
pub fn exp_neg(h: &CMatrix, t: f64) -> Result<CMatrix> {
    matrix_function(h, |x| exp(-t * x))
}

/// `H^{-1/2}` for positive definite `H`.
pub fn inverse_sqrt(h: &CMatrix) -> Result<CMatrix> {
    let spec = eigenvalues(h, true)?;
    let min = spec.min().unwrap_or(1.0);
    let scale = fabs(spec.values.last().copied().unwrap_or(1.0)).max(1.0);
    if !(min > 1e-14 * scale) {
        return Err(Error::Singular { min_eigenvalue: min });
    }
    Ok(apply_function(&spec, |x| 1.0 / sqrt(x)))
}

#[cfg(test)]
mod tests {
    use super::*;
    use libm::{cosh, sinh};

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    fn pseudo_random_hermitian(n: usize, seed: u64) -> CMatrix {
        let mut s = seed;
        let mut next = || {
            s = s.wrapping_mul(6364136223846793005).wrapping_add(1442695040888963407);
            ((s >> 11) as f64 / (1u64 << 53) as f64) - 0.5
        };
        let mut m = CMatrix::zeros(n);
        for i in 0..n {
            m[(i, i)] = c(next(), 0.0);
            for j in 0..i {
                let z = c(next(), next());
                m[(i, j)] = z;
                m[(j, i)] = z.conj();
            }
        }
        m
    }

    #[test]
    fn pauli_y() {
        let h = CMatrix::from_fn(2, |i, j| match (i, j) {
            (0, 1) => c(0.0, 1.0),
            (1, 0) => c(0.0, -1.0),
            _ => c(0.0, 0.0),
        });
        let s = eigenvalues(&h, true).unwrap();
        assert!((s.values[0] + 1.0).abs() < 1e-15 && (s.values[1] - 1.0).abs() < 1e-15);
        assert!(s.max_residual(&h).unwrap() < 1e-14);
    }

    #[test]
    fn diagonal_sorted() {
        let h = CMatrix::diagonal(&[3.0, -1.0, 2.0, 0.5]);
        let s = eigenvalues(&h, false).unwrap();
        assert_eq!(s.values, vec![-1.0, 0.5, 2.0, 3.0]);
    }

    #[test]
    fn random_matrices_residual_and_trace() {
        for &n in &[1, 3, 10, 37] {
            let h = pseudo_random_hermitian(n, n as u64);
            let s = eigenvalues(&h, true).unwrap();
            let norm = h.norm();
            assert!(s.max_residual(&h).unwrap() <= 1e-12 * norm.max(1.0));
            let tr: f64 = s.values.iter().sum();
            assert!((tr - h.trace().re).abs() <= 1e-12 * norm.max(1.0));
            let s2 = eigenvalues(&h, false).unwrap();
            for (a, b) in s.values.iter().zip(&s2.values) {
                assert!((a - b).abs() < 1e-12);
            }
            // V is unitary.
            let v = s.vectors.unwrap();
            let g = v.adjoint().mul(&v);
            for i in 0..n {
                for j in 0..n {
                    let expect = if i == j { 1.0 } else { 0.0 };
                    assert!((g[(i, j)] - c(expect, 0.0)).norm() < 1e-12);
                }
            }
        }
    }

    #[test]
    fn rejects_bad_input() {
        let mut h = CMatrix::identity(3);
        h[(0, 1)] = c(1.0, 0.0);
        assert!(matches!(eigenvalues(&h, false), Err(Error::NotHermitian { .. })));
        let big = CMatrix { n: DIMENSION_CAP + 1, data: Vec::new() };
        assert!(matches!(eigenvalues(&big, false), Err(Error::DimensionCap { .. })));
    }

    #[test]
    fn matrix_functions() {
        let i2 = exp_neg(&CMatrix::zeros(3), 0.7).unwrap();
        assert!((i2.as_slice().iter().zip(CMatrix::identity(3).as_slice()))
            .all(|(a, b)| (a - b).norm() < 1e-14));
        let r = inverse_sqrt(&CMatrix::diagonal(&[1.0, 4.0])).unwrap();
        assert!((r[(0, 0)].re - 1.0).abs() < 1e-15 && (r[(1, 1)].re - 0.5).abs() < 1e-15);
        assert!(matches!(inverse_sqrt(&CMatrix::diagonal(&[1.0, 0.0])), Err(Error::Singular { .. })));
        let t = 0.8;
        let h = CMatrix::from_real(2, &[1.0, -1.0, -1.0, 1.0]);
        let e = exp_neg(&h, t).unwrap();
        let et = exp(-t);
        assert!((e[(0, 0)].re - et * cosh(t)).abs() < 1e-14);
        assert!((e[(0, 1)].re - et * sinh(t)).abs() < 1e-14);
    }
}
