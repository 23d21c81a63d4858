//! Finite-matrix models of the Birman-Schwinger machinery.
//!
//! A [`DominationPair`] consists of a non-magnetic grid Laplacian `H`
//! (positive definite, non-positive off-diagonal), its Peierls twist `M`
//! with the same diagonal and entrywise moduli, and a diagonal coupling
//! `G ≥ 0`. For such pairs `|exp(-tM)| ≤ exp(-tH)` entrywise, which is the
//! hypothesis of every check in this module.

use alloc::vec::Vec;
use core::f64::consts::PI;

use libm::{cos, exp, fabs, pow, sin, sqrt};
use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::bounds::{BoundReport, Direction, Verdict};
use crate::constants::excess_factor_general;
use crate::eig::{apply_function, eigenvalues, inverse_sqrt, CMatrix};
use crate::error::precondition_err;
use crate::{Error, Result};

/// Entrywise tolerance of the domination check.
pub const DOMINATION_TOL: f64 = 1e-12;
/// Shift used to make a semidefinite `H` definite.
pub const REGULARIZATION: f64 = 1e-8;

#[derive(Debug, Clone, PartialEq)]
pub struct DominationPair {
    pub h: CMatrix,
    pub m: CMatrix,
    /// Diagonal of `G`.
    pub g: Vec<f64>,
}

impl DominationPair {
    pub fn new(h: CMatrix, m: CMatrix, g: Vec<f64>) -> Result<Self> {
        let n = h.dim();
        if m.dim() != n || g.len() != n {
            return Err(precondition_err!("H, M and G must have equal dimension"));
        }
        if g.iter().any(|&x| !(x >= 0.0)) {
            return Err(precondition_err!("G must be entrywise non-negative"));
        }
        for i in 0..n {
            for j in 0..n {
                let (a, b) = (h[(i, j)], m[(i, j)]);
                let same = if i == j { (a - b).norm() } else { fabs(a.norm() - b.norm()) };
                if same > 1e-12 * (1.0 + a.norm()) || a.im != 0.0 || (i != j && a.re > 0.0) {
                    return Err(precondition_err!(
                        "entry ({i}, {j}) breaks the domination structure"
                    ));
                }
            }
        }
        Ok(DominationPair { h, m, g })
    }

    pub fn dim(&self) -> usize {
        self.g.len()
    }

    /// `G*G`, diagonal.
    fn gg(&self) -> Vec<f64> {
        self.g.iter().map(|x| x * x).collect()
    }

    /// `A - λ G*G`.
    pub fn coupled(&self, a: &CMatrix, lambda: f64) -> CMatrix {
        let mut out = a.clone();
        for (i, gg) in self.gg().iter().enumerate() {
            out[(i, i)] -= lambda * gg;
        }
        out
    }

    /// Same pair with `H` and `M` replaced by `H + τ`, `M + τ`.
    pub fn shifted(&self, tau: f64) -> Self {
        let mut p = self.clone();
        for i in 0..p.dim() {
            p.h[(i, i)] += tau;
            p.m[(i, i)] += tau;
        }
        p
    }
}

/// Couplings `λ` at which `H - λ G*G` acquires a new negative eigenvalue.
#[derive(Debug, Clone, PartialEq)]
pub struct ThresholdSet {
    pub couplings: Vec<f64>,
}

impl ThresholdSet {
    /// `#{κ_j < λ}`.
    pub fn count_below(&self, lambda: f64) -> usize {
        self.couplings.partition_point(|&k| k < lambda)
    }
}

/// Reciprocals of the positive eigenvalues of `(G H^{-1/2})(G H^{-1/2})*`.
pub fn bs_thresholds(h: &CMatrix, g: &[f64]) -> Result<ThresholdSet> {
    let r = inverse_sqrt(h)?;
    let n = h.dim();
    let k = CMatrix::from_fn(n, |i, j| r[(i, j)] * g[i]);
    let kk = k.mul(&k.adjoint());
    let mut kk = kk;
    for i in 0..n {
        for j in 0..i {
            let avg = 0.5 * (kk[(i, j)] + kk[(j, i)].conj());
            kk[(i, j)] = avg;
            kk[(j, i)] = avg.conj();
        }
        kk[(i, i)].im = 0.0;
    }
    let spec = eigenvalues(&kk, false)?;
    let top = spec.values.last().copied().unwrap_or(0.0);
    let mut couplings: Vec<f64> = spec
        .values
        .iter()
        .filter(|&&mu| mu > 1e-12 * top && mu > 0.0)
        .map(|&mu| 1.0 / mu)
        .collect();
    couplings.sort_by(f64::total_cmp);
    Ok(ThresholdSet { couplings })
}

/// [`bs_thresholds`] after shifting `H` by `10⁻⁸` if it is not definite.
pub fn bs_thresholds_regularized(h: &CMatrix, g: &[f64]) -> Result<ThresholdSet> {
    match bs_thresholds(h, g) {
        Err(Error::Singular { .. }) => {
            let mut hr = h.clone();
            for i in 0..h.dim() {
                hr[(i, i)] += Complex64::new(REGULARIZATION, 0.0);
            }
            bs_thresholds(&hr, g)
        }
        other => other,
    }
}

/// Number of eigenvalues of `a` strictly below `level`.
pub fn count_below(a: &CMatrix, level: f64) -> Result<usize> {
    let s = eigenvalues(a, false)?;
    Ok(s.values.partition_point(|&v| v < level))
}

/// Largest `|#{κ_j < λ} - N(0, H - λG*G)|` over `grid`.
pub fn threshold_mismatch(pair: &DominationPair, grid: &[f64]) -> Result<usize> {
    let th = bs_thresholds(&pair.h, &pair.g)?;
    let mut worst = 0usize;
    for &l in grid {
        let direct = count_below(&pair.coupled(&pair.h, l), 0.0)?;
        worst = worst.max(direct.abs_diff(th.count_below(l)));
    }
    Ok(worst)
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DominationReport {
    /// `max_{t, j, k} |exp(-tM)_{jk}| - exp(-tH)_{jk}`.
    pub max_violation: f64,
    pub verdict: Verdict,
}

/// Entrywise comparison of the two heat semigroups on `t_grid`.
pub fn domination_check(pair: &DominationPair, t_grid: &[f64]) -> Result<DominationReport> {
    let sh = eigenvalues(&pair.h, true)?;
    let sm = eigenvalues(&pair.m, true)?;
    let n = pair.dim();
    let mut worst = f64::NEG_INFINITY;
    for &t in t_grid {
        let eh = apply_function(&sh, |x| exp(-t * x));
        let em = apply_function(&sm, |x| exp(-t * x));
        for i in 0..n {
            for j in 0..n {
                worst = worst.max(em[(i, j)].norm() - eh[(i, j)].re);
            }
        }
    }
    let verdict = if worst.is_nan() {
        Verdict::Inconclusive
    } else if worst <= DOMINATION_TOL {
        Verdict::Holds
    } else {
        Verdict::Violated
    };
    Ok(DominationReport { max_violation: worst, verdict })
}

/// `N(-τ, M - G*G) ≤ e^t Σ_j e^{-κ_j t}` with `κ_j` the thresholds of
/// `(H + τ, G)`.
pub fn average_lemma_check(pair: &DominationPair, tau: f64, t: f64) -> Result<BoundReport> {
    if !(tau >= 0.0) || !(t > 0.0) {
        return Err(precondition_err!("need tau >= 0 and t > 0"));
    }
    let dom = domination_check(pair, &[t])?;
    if dom.verdict != Verdict::Holds {
        return Err(precondition_err!("semigroup domination fails (violation {:e})", dom.max_violation));
    }
    let lhs = count_below(&pair.coupled(&pair.m, 1.0), -tau)? as f64;
    let th = bs_thresholds_regularized(&pair.shifted(tau).h, &pair.g)?;
    let rhs = exp(t) * th.couplings.iter().map(|&k| exp(-k * t)).sum::<f64>();
    Ok(BoundReport::new("average", t, lhs, rhs, 0.0, Direction::Upper))
}

/// `tr(A - λG*G)_-^γ`, counting strictly negative eigenvalues at `γ = 0`.
pub fn coupled_riesz(pair: &DominationPair, a: &CMatrix, lambda: f64, gamma: f64) -> Result<f64> {
    let s = eigenvalues(&pair.coupled(a, lambda), false)?;
    let neg = s.values.partition_point(|&v| v < 0.0);
    Ok(if gamma == 0.0 {
        neg as f64
    } else {
        s.values[..neg].iter().map(|&v| pow(-v, gamma)).sum()
    })
}

/// With `C = max_λ tr(H - λG*G)_-^γ / λ^α` over `coupling_grid` (and, at
/// `γ = 0`, just above each threshold in range), checks
/// `tr(M - λG*G)_-^γ ≤ C (e/α)^α Γ(α+1) λ^α` on the grid.
pub fn verify_diamag_theorem(
    pair: &DominationPair,
    gamma: f64,
    alpha: f64,
    coupling_grid: &[f64],
) -> Result<Vec<BoundReport>> {
    let excess = excess_factor_general(alpha)?;
    let mut c = 0.0f64;
    for &l in coupling_grid {
        c = c.max(coupled_riesz(pair, &pair.h, l, gamma)? / pow(l, alpha));
    }
    if gamma == 0.0 {
        let th = bs_thresholds_regularized(&pair.h, &pair.g)?;
        let lo = coupling_grid.iter().copied().fold(f64::INFINITY, f64::min);
        let hi = coupling_grid.iter().copied().fold(0.0, f64::max);
        for &k in th.couplings.iter().filter(|&&k| k >= lo && k <= hi) {
            let l = k * (1.0 + 1e-9);
            c = c.max(th.count_below(l) as f64 / pow(l, alpha));
        }
    }
    coupling_grid
        .iter()
        .map(|&l| {
            let lhs = coupled_riesz(pair, &pair.m, l, gamma)?;
            Ok(BoundReport::new("diamag", l, lhs, c * excess * pow(l, alpha), 0.0, Direction::Upper))
        })
        .collect()
}

/// Grid-graph instance parameters.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct InstanceSpec {
    pub width: usize,
    pub height: usize,
    /// `G = √coupling · diag(u_i)` with `u_i ~ U[0, 1]`.
    pub coupling: f64,
}

/// Dirichlet-type grid Laplacian (`4` on the diagonal, `-1` per grid edge)
/// and its twist by the given plaquette fluxes, in axial gauge: horizontal
/// links carry no phase, vertical links accumulate the fluxes to their left.
pub fn grid_pair(width: usize, height: usize, fluxes: &[f64], g: Vec<f64>) -> Result<DominationPair> {
    let n = width * height;
    if fluxes.len() != (width.saturating_sub(1)) * (height.saturating_sub(1)) {
        return Err(precondition_err!("need one flux per plaquette"));
    }
    let idx = |i: usize, j: usize| j * width + i;
    let mut h = CMatrix::zeros(n);
    let mut m = CMatrix::zeros(n);
    for k in 0..n {
        h[(k, k)] = Complex64::new(4.0, 0.0);
        m[(k, k)] = Complex64::new(4.0, 0.0);
    }
    let minus = Complex64::new(-1.0, 0.0);
    for j in 0..height {
        for i in 0..width {
            if i + 1 < width {
                let (a, b) = (idx(i, j), idx(i + 1, j));
                h[(a, b)] = minus;
                h[(b, a)] = minus;
                m[(a, b)] = minus;
                m[(b, a)] = minus;
            }
            if j + 1 < height {
                // Phase on (i, j) → (i, j+1): sum of the fluxes left of column i.
                let theta: f64 = (0..i).map(|c| fluxes[j * (width - 1) + c]).sum();
                let (a, b) = (idx(i, j), idx(i, j + 1));
                let z = -Complex64::new(cos(theta), sin(theta));
                h[(a, b)] = minus;
                h[(b, a)] = minus;
                m[(a, b)] = z;
                m[(b, a)] = z.conj();
            }
        }
    }
    DominationPair::new(h, m, g)
}

/// Random instance `k` of the suite seeded by `seed`: grid sizes in
/// `[2, 8]²`, i.i.d. uniform plaquette fluxes in `[0, 2π)`, `G` diagonal with
/// i.i.d. `U[0,1]` entries scaled by `√coupling`.
pub fn random_instance(seed: u64, k: u64, coupling: f64) -> Result<(InstanceSpec, DominationPair)> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(k);
    let width = rng.random_range(2..=8usize);
    let height = rng.random_range(2..=8usize);
    let fluxes: Vec<f64> = (0..(width - 1) * (height - 1)).map(|_| rng.random::<f64>() * 2.0 * PI).collect();
    let scale = sqrt(coupling);
    let g: Vec<f64> = (0..width * height).map(|_| scale * rng.random::<f64>()).collect();
    let pair = grid_pair(width, height, &fluxes, g)?;
    Ok((InstanceSpec { width, height, coupling }, pair))
}

/// Geometric grid of `count` points on `[lo, hi]`.
pub fn geometric_grid(lo: f64, hi: f64, count: usize) -> Vec<f64> {
    if count == 1 {
        return alloc::vec![lo];
    }
    let r = pow(hi / lo, 1.0 / (count - 1) as f64);
    (0..count).map(|i| lo * pow(r, i as f64)).collect()
}

/// Aggregate of a suite run.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SuiteSummary {
    pub instances: usize,
    pub checks: usize,
    pub violations: usize,
    /// Largest `lhs/rhs` (or largest violation for domination).
    pub worst: f64,
}

impl SuiteSummary {
    pub fn empty() -> Self {
        SuiteSummary { instances: 0, checks: 0, violations: 0, worst: f64::NEG_INFINITY }
    }

    pub fn merge(self, o: SuiteSummary) -> Self {
        SuiteSummary {
            instances: self.instances + o.instances,
            checks: self.checks + o.checks,
            violations: self.violations + o.violations,
            worst: self.worst.max(o.worst),
        }
    }
}

/// Coupling scale of the suite instances; with `G*G` up to 6 the coupled
/// operators have several negative eigenvalues.
pub const SUITE_COUPLING: f64 = 6.0;
/// `t` values of the averaging-lemma suite.
pub const SUITE_TIMES: [f64; 3] = [0.5, 1.0, 2.0];
/// `t` values of the domination suite.
pub const DOMINATION_TIMES: [f64; 3] = [0.1, 1.0, 10.0];

/// Averaging lemma on instance `k`: three values of `t`, `τ ~ U[0, 1]`.
pub fn average_instance(seed: u64, k: u64) -> Result<SuiteSummary> {
    let (_, pair) = random_instance(seed, k, SUITE_COUPLING)?;
    let mut rng = ChaCha8Rng::seed_from_u64(seed ^ 0x5eed);
    rng.set_stream(k);
    let tau: f64 = rng.random();
    let mut s = SuiteSummary { instances: 1, ..SuiteSummary::empty() };
    for t in SUITE_TIMES {
        let r = average_lemma_check(&pair, tau, t)?;
        s.checks += 1;
        s.violations += usize::from(r.verdict != Verdict::Holds);
        s.worst = s.worst.max(r.ratio);
    }
    Ok(s)
}

/// Domination on instance `k` at `t ∈ {0.1, 1, 10}`.
pub fn domination_instance(seed: u64, k: u64) -> Result<SuiteSummary> {
    let (_, pair) = random_instance(seed, k, SUITE_COUPLING)?;
    let r = domination_check(&pair, &DOMINATION_TIMES)?;
    Ok(SuiteSummary {
        instances: 1,
        checks: 1,
        violations: usize::from(r.verdict != Verdict::Holds),
        worst: r.max_violation,
    })
}

/// Excess bound on instance `k` for `(γ, α) ∈ {(0, 1), (1, 2)}` over a
/// geometric coupling grid spanning the first thresholds.
pub fn diamag_instance(seed: u64, k: u64) -> Result<SuiteSummary> {
    let (_, pair) = random_instance(seed, k, SUITE_COUPLING)?;
    let th = bs_thresholds_regularized(&pair.h, &pair.g)?;
    let first = th.couplings.first().copied().unwrap_or(1.0);
    let grid = geometric_grid(0.5 * first, 20.0 * first, 24);
    let mut s = SuiteSummary { instances: 1, ..SuiteSummary::empty() };
    for (gamma, alpha) in [(0.0, 1.0), (1.0, 2.0)] {
        for r in verify_diamag_theorem(&pair, gamma, alpha, &grid)? {
            s.checks += 1;
            s.violations += usize::from(r.verdict != Verdict::Holds);
            if r.rhs > 0.0 {
                s.worst = s.worst.max(r.ratio);
            }
        }
    }
    Ok(s)
}
