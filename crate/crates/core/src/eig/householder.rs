//! Reduction of a complex Hermitian matrix to real symmetric tridiagonal form.
//!
//! The lower triangle is kept packed column by column with real and
//! imaginary parts in separate arrays. Each step applies the rank-two update
//! of the previous reflector and the matrix-vector product of the current one
//! in a single sweep over the trailing block, which halves memory traffic.

use alloc::vec;
use alloc::vec::Vec;

use libm::sqrt;
use num_complex::Complex64;

pub(crate) struct Packed {
    pub n: usize,
    pub re: Vec<f64>,
    pub im: Vec<f64>,
}

impl Packed {
    pub fn offset(&self, j: usize) -> usize {
        j * self.n - j * j.saturating_sub(1) / 2
    }

    /// Packs the lower triangle of a row-major full matrix.
    pub fn from_full(n: usize, a: &[Complex64]) -> Self {
        let len = n * (n + 1) / 2;
        let mut re = Vec::with_capacity(len);
        let mut im = Vec::with_capacity(len);
        for j in 0..n {
            for i in j..n {
                let z = a[i * n + j];
                re.push(z.re);
                im.push(if i == j { 0.0 } else { z.im });
            }
        }
        Packed { n, re, im }
    }
}

/// Householder data `Q = H_0 H_1 ⋯ H_{n-2}` with `H_k = I - τ_k v_k v_kᴴ`.
pub(crate) struct Reflectors {
    pub taus: Vec<Complex64>,
    pub vs: Vec<Vec<Complex64>>,
}

impl Reflectors {
    /// Overwrites `x` (length `n`) with `Q x`.
    pub fn apply(&self, x: &mut [Complex64]) {
        for k in (0..self.taus.len()).rev() {
            let tau = self.taus[k];
            if tau == Complex64::new(0.0, 0.0) {
                continue;
            }
            let v = &self.vs[k];
            let start = k + 1;
            let mut s = Complex64::new(0.0, 0.0);
            for (vi, xi) in v.iter().zip(&x[start..]) {
                s += vi.conj() * xi;
            }
            let s = tau * s;
            for (vi, xi) in v.iter().zip(&mut x[start..]) {
                *xi -= s * vi;
            }
        }
    }
}

/// Tridiagonalizes `a` in place (destroying it). Returns the diagonal, the
/// off-diagonal (`e[k]` couples `k` and `k + 1`) and, if requested, the
/// reflectors.
pub(crate) fn tridiagonalize(a: &mut Packed, keep: bool) -> (Vec<f64>, Vec<f64>, Option<Reflectors>) {
    let n = a.n;
    let mut d = vec![0.0; n];
    let mut e = vec![0.0; n];
    let mut refl = keep.then(|| Reflectors { taus: Vec::new(), vs: Vec::new() });
    if n == 0 {
        return (d, e, refl);
    }
    // Pending rank-two update A -= v wᴴ + w vᴴ from the previous step.
    let (mut vp_re, mut vp_im) = (vec![0.0; n], vec![0.0; n]);
    let (mut wp_re, mut wp_im) = (vec![0.0; n], vec![0.0; n]);
    let (mut v_re, mut v_im) = (vec![0.0; n], vec![0.0; n]);
    let (mut p_re, mut p_im) = (vec![0.0; n], vec![0.0; n]);

    for k in 0..n {
        let off = a.offset(k);
        let len = n - k;
        rank2_column(
            &mut a.re[off..off + len],
            &mut a.im[off..off + len],
            (&vp_re[k..], &vp_im[k..]),
            (&wp_re[k..], &wp_im[k..]),
        );
        d[k] = a.re[off];
        if k + 1 == n {
            break;
        }

        // Reflector annihilating A[k+2.., k].
        let (alr, ali) = (a.re[off + 1], a.im[off + 1]);
        let mut xnorm2 = 0.0;
        for i in 2..len {
            xnorm2 += a.re[off + i] * a.re[off + i] + a.im[off + i] * a.im[off + i];
        }
        v_re[..=k].fill(0.0);
        v_im[..=k].fill(0.0);
        let tau;
        if xnorm2 == 0.0 && ali == 0.0 {
            tau = Complex64::new(0.0, 0.0);
            e[k] = alr;
            v_re[k + 1..].fill(0.0);
            v_im[k + 1..].fill(0.0);
            v_re[k + 1] = 1.0;
        } else {
            let norm = sqrt(alr * alr + ali * ali + xnorm2);
            let beta = if alr >= 0.0 { -norm } else { norm };
            tau = Complex64::new((beta - alr) / beta, -ali / beta);
            let scal = Complex64::new(1.0, 0.0) / Complex64::new(alr - beta, ali);
            v_re[k + 1] = 1.0;
            v_im[k + 1] = 0.0;
            for i in k + 2..n {
                let z = Complex64::new(a.re[off + i - k], a.im[off + i - k]) * scal;
                v_re[i] = z.re;
                v_im[i] = z.im;
            }
            e[k] = beta;
        }

        // Fused sweep: finish the previous update on columns k+1.. and
        // accumulate p = A v for the new reflector.
        p_re.fill(0.0);
        p_im.fill(0.0);
        for j in k + 1..n {
            let off = a.offset(j);
            let len = n - j;
            let col_re = &mut a.re[off..off + len];
            let col_im = &mut a.im[off..off + len];
            rank2_column(col_re, col_im, (&vp_re[j..], &vp_im[j..]), (&wp_re[j..], &wp_im[j..]));
            hemv_column(col_re, col_im, (&v_re[j..], &v_im[j..]), (&mut p_re[j..], &mut p_im[j..]));
        }

        // w = τ p - ½ τ (τ p)ᴴ v · v
        let mut dot = Complex64::new(0.0, 0.0);
        for i in k + 1..n {
            let pi = tau * Complex64::new(p_re[i], p_im[i]);
            p_re[i] = pi.re;
            p_im[i] = pi.im;
            dot += pi.conj() * Complex64::new(v_re[i], v_im[i]);
        }
        let alpha = -0.5 * tau * dot;
        for i in 0..n {
            if i <= k {
                wp_re[i] = 0.0;
                wp_im[i] = 0.0;
                continue;
            }
            let w = Complex64::new(p_re[i], p_im[i]) + alpha * Complex64::new(v_re[i], v_im[i]);
            wp_re[i] = w.re;
            wp_im[i] = w.im;
        }
        vp_re.copy_from_slice(&v_re);
        vp_im.copy_from_slice(&v_im);

        if let Some(r) = refl.as_mut() {
            r.taus.push(tau);
            r.vs.push((k + 1..n).map(|i| Complex64::new(v_re[i], v_im[i])).collect());
        }
    }
    (d, e, refl)
}

/// `a -= v wᴴ + w vᴴ` on one packed column; index 0 is the diagonal.
#[inline]
fn rank2_column(a_re: &mut [f64], a_im: &mut [f64], v: (&[f64], &[f64]), w: (&[f64], &[f64])) {
    let (v_re, v_im) = v;
    let (w_re, w_im) = w;
    // conj(w_j), conj(v_j)
    let (cwr, cwi) = (w_re[0], -w_im[0]);
    let (cvr, cvi) = (v_re[0], -v_im[0]);
    if cwr == 0.0 && cwi == 0.0 && cvr == 0.0 && cvi == 0.0 {
        return;
    }
    let len = a_re.len();
    let (a_re, a_im) = (&mut a_re[..len], &mut a_im[..len]);
    let (v_re, v_im, w_re, w_im) = (&v_re[..len], &v_im[..len], &w_re[..len], &w_im[..len]);
    for i in 0..len {
        a_re[i] -= v_re[i] * cwr - v_im[i] * cwi + w_re[i] * cvr - w_im[i] * cvi;
        a_im[i] -= v_re[i] * cwi + v_im[i] * cwr + w_re[i] * cvi + w_im[i] * cvr;
    }
    a_im[0] = 0.0;
}

/// Adds the contribution of one packed column to `p = A v`.
#[inline]
fn hemv_column(a_re: &[f64], a_im: &[f64], v: (&[f64], &[f64]), p: (&mut [f64], &mut [f64])) {
    let (v_re, v_im) = v;
    let (p_re, p_im) = p;
    let len = a_re.len();
    let (vjr, vji) = (v_re[0], v_im[0]);
    let (a_re, a_im) = (&a_re[..len], &a_im[..len]);
    let (v_re, v_im) = (&v_re[..len], &v_im[..len]);
    let (p_re, p_im) = (&mut p_re[..len], &mut p_im[..len]);
    let mut sr = [0.0f64; 4];
    let mut si = [0.0f64; 4];
    let mut i = 1;
    while i + 4 <= len {
        for u in 0..4 {
            let (ar, ai) = (a_re[i + u], a_im[i + u]);
            sr[u] += ar * v_re[i + u] + ai * v_im[i + u];
            si[u] += ar * v_im[i + u] - ai * v_re[i + u];
            p_re[i + u] += ar * vjr - ai * vji;
            p_im[i + u] += ar * vji + ai * vjr;
        }
        i += 4;
    }
    while i < len {
        let (ar, ai) = (a_re[i], a_im[i]);
        sr[0] += ar * v_re[i] + ai * v_im[i];
        si[0] += ar * v_im[i] - ai * v_re[i];
        p_re[i] += ar * vjr - ai * vji;
        p_im[i] += ar * vji + ai * vjr;
        i += 1;
    }
    p_re[0] += a_re[0] * vjr + (sr[0] + sr[1]) + (sr[2] + sr[3]);
    p_im[0] += a_re[0] * vji + (si[0] + si[1]) + (si[2] + si[3]);
}
