//! The Aharonov-Bohm constant
//!
//! ```text
//! R_γ(α) = (γ+1) sup_{s≥0} S(γ, α, s),
//! S(γ, α, s) = Σ_{n∈ℤ} ∫_0^1 (1-μ)^γ J²_{|n-α|}(√μ s) dμ.
//! ```
//!
//! With `r = √μ s` the series becomes `(2/s²) ∫_0^s r (1 - r²/s²)^γ F(r) dr`
//! where `F(r) = Σ_n J²_{|n-α|}(r)` is summed over two Bessel ladders with
//! base orders `α` and `1 - α`. `F` is independent of `s`, so its values at
//! the fixed panel nodes are cached and shared by every `s` of a scan.

use alloc::vec;
use alloc::vec::Vec;
use core::f64::consts::PI;

use libm::{fabs, floor, log, pow, sin};

use crate::error::domain_err;
use crate::search::golden_max;
use crate::specfun::quad::{gauss_jacobi, gauss_legendre, GaussRule};
use crate::specfun::{gamma, ladder_into, ln_gamma, tail_safe_index};
use crate::Result;

/// Largest `s` accepted.
pub const MAX_S: f64 = 200.0;
/// Panel width in `r = us`; 16 Gauss-Legendre nodes each give 64 nodes per unit.
pub const PANEL_WIDTH: f64 = 0.25;
const PANEL_NODES: usize = 16;
const TAIL_NODES: usize = 32;
/// Geometric refinement of `[0, w]` towards `r = 0`, where `F(r) ~ r^{2α}`.
const GRADING_LEVELS: i32 = 6;
const GRADING_RATIO: f64 = 4.0;

/// Scan step and minimal range of the supremum search.
pub const SCAN_STEP: f64 = 0.05;
pub const SCAN_MIN_RANGE: f64 = 60.0;
const REFINE_TOL: f64 = 1e-8;

/// Reduces a flux to `[0, 1/2]` using `α → α + 1` and `α → 1 - α`.
pub fn reduce_flux(flux: f64) -> Result<f64> {
    if !flux.is_finite() {
        return Err(domain_err!("flux must be finite, got {flux}"));
    }
    let a = flux - floor(flux);
    Ok(a.min(1.0 - a).max(0.0))
}

fn check_gamma(gamma: f64) -> Result<()> {
    if !(gamma > -1.0) || !gamma.is_finite() {
        return Err(domain_err!("gamma must be finite and > -1, got {gamma}"));
    }
    Ok(())
}

/// `F(r) = Σ_{n∈ℤ} J²_{|n-α|}(r)` for a reduced flux `α ∈ [0, 1/2]`.
pub fn flux_sum(alpha: f64, r: f64) -> f64 {
    let mut buf = Vec::new();
    flux_sum_with(alpha, r, &mut buf)
}

fn flux_sum_with(alpha: f64, r: f64, buf: &mut Vec<f64>) -> f64 {
    let top = tail_safe_index(r);
    let squares = |buf: &[f64]| buf.iter().map(|j| j * j).sum::<f64>();
    if alpha == 0.0 {
        ladder_into(0.0, r, top, buf);
        return 2.0 * squares(buf) - buf[0] * buf[0];
    }
    ladder_into(alpha, r, top, buf);
    let first = squares(buf);
    if alpha == 0.5 {
        return 2.0 * first;
    }
    ladder_into(1.0 - alpha, r, top, buf);
    first + squares(buf)
}

/// Bound on the Bessel-series tail beyond the ladder at argument `r`, from
/// `|J_ν(r)| ≤ (r/2)^ν / Γ(ν+1)`.
pub fn ladder_tail_bound(r: f64) -> f64 {
    if r == 0.0 {
        return 0.0;
    }
    let m = (tail_safe_index(r) + 1) as f64;
    let log_t = m * log(0.5 * r) - ln_gamma(m + 1.0).unwrap_or(f64::INFINITY);
    let q = (0.5 * r / (m + 1.0)) * (0.5 * r / (m + 1.0));
    // Two ladders, geometric majorant of each.
    2.0 * libm::exp(2.0 * log_t) / (1.0 - q)
}

/// One evaluation of `S(γ, α, s)`.
#[derive(Debug, Clone, PartialEq)]
pub struct ABSeriesPoint {
    pub gamma: f64,
    /// Reduced flux in `[0, 1/2]`.
    pub flux: f64,
    pub s: f64,
    pub value: f64,
    /// Highest Bessel order index kept per ladder.
    pub truncation_order: usize,
    pub quadrature_nodes: usize,
    /// Tail bound plus the difference to a coarser quadrature.
    pub error_bound: f64,
}

#[derive(Debug, Clone, Copy)]
struct Node {
    r: f64,
    /// Quadrature weight times `r`.
    wr: f64,
    f: f64,
}

/// Evaluator of `S(γ, α, ·)` with cached `F` values.
#[derive(Debug, Clone)]
pub struct AbSeries {
    gamma: f64,
    alpha: f64,
    panel: GaussRule,
    tail: GaussRule,
    /// Nodes of `[0, w]`, graded towards 0.
    head: Vec<Node>,
    /// Nodes of the panels `[pw, (p+1)w]`, `p ≥ 1`, in order.
    panels: Vec<Node>,
    buf: Vec<f64>,
}

impl AbSeries {
    pub fn new(gamma: f64, flux: f64) -> Result<Self> {
        check_gamma(gamma)?;
        let alpha = reduce_flux(flux)?;
        Self::with_rules(gamma, alpha, PANEL_NODES, TAIL_NODES)
    }

    fn with_rules(gamma: f64, alpha: f64, panel_nodes: usize, tail_nodes: usize) -> Result<Self> {
        let panel = gauss_legendre(panel_nodes);
        let tail = gauss_jacobi(tail_nodes, gamma, 0.0)?;
        let mut me = AbSeries { gamma, alpha, panel, tail, head: Vec::new(), panels: Vec::new(), buf: Vec::new() };
        me.head = me.graded_nodes(PANEL_WIDTH);
        Ok(me)
    }

    pub fn gamma(&self) -> f64 {
        self.gamma
    }

    /// Reduced flux.
    pub fn flux(&self) -> f64 {
        self.alpha
    }

    fn f(&mut self, r: f64) -> f64 {
        flux_sum_with(self.alpha, r, &mut self.buf)
    }

    /// Gauss-Legendre nodes on `[0, b]` refined geometrically towards 0.
    fn graded_nodes(&mut self, b: f64) -> Vec<Node> {
        let mut edges = vec![0.0];
        for j in (0..GRADING_LEVELS).rev() {
            edges.push(b * pow(GRADING_RATIO, -(j as f64) - 1.0) * GRADING_RATIO);
        }
        // edges: 0, b/4^5, …, b/4, b
        let mut out = Vec::with_capacity(edges.len() * self.panel.len());
        for win in edges.windows(2) {
            let pts: Vec<(f64, f64)> = self.panel.mapped(win[0], win[1]).collect();
            for (r, w) in pts {
                let f = self.f(r);
                out.push(Node { r, wr: w * r, f });
            }
        }
        out
    }

    /// Caches the panels `p = 1..count`.
    fn ensure_panels(&mut self, count: usize) {
        let have = self.panels.len() / self.panel.len();
        for p in have + 1..count {
            let (a, b) = (p as f64 * PANEL_WIDTH, (p + 1) as f64 * PANEL_WIDTH);
            let pts: Vec<(f64, f64)> = self.panel.mapped(a, b).collect();
            for (r, w) in pts {
                let f = self.f(r);
                self.panels.push(Node { r, wr: w * r, f });
            }
        }
    }

    /// `(1 - r²/s²)^γ` on the smooth part of the interval.
    fn weight(&self, r: f64, s: f64) -> f64 {
        let x = 1.0 - (r / s) * (r / s);
        if self.gamma == 0.0 {
            1.0
        } else {
            pow(x, self.gamma)
        }
    }

    /// `∫_a^s r (1 - r²/s²)^γ F(r) dr` with the Jacobi rule absorbing `(s - r)^γ`.
    fn tail_integral(&mut self, a: f64, s: f64) -> (f64, usize) {
        let half = 0.5 * (s - a);
        let scale = if self.gamma == 0.0 { half } else { half * pow(half, self.gamma) };
        let rule = core::mem::replace(&mut self.tail, GaussRule { nodes: Vec::new(), weights: Vec::new() });
        let mut sum = 0.0;
        for (&t, &w) in rule.nodes.iter().zip(&rule.weights) {
            let r = a + half * (1.0 + t);
            // (1 - r²/s²)^γ = ((s - r)/s)^γ ((s + r)/s)^γ, (s - r) = half (1 - t)
            let smooth = if self.gamma == 0.0 { 1.0 } else { pow((s + r) / (s * s), self.gamma) };
            sum += w * smooth * r * self.f(r);
        }
        let n = rule.len();
        self.tail = rule;
        (scale * sum, n)
    }

    /// `S(γ, α, s)` and the number of quadrature nodes used.
    fn evaluate(&mut self, s: f64) -> (f64, usize) {
        if s == 0.0 {
            return (self.f(0.0) / (self.gamma + 1.0), 0);
        }
        let k = floor(s / PANEL_WIDTH) as i64 - 1;
        let integral;
        let nodes;
        if k <= 0 {
            // Graded rule on [0, s/2], Jacobi rule on [s/2, s].
            let head = self.graded_nodes(0.5 * s);
            let mut sum = 0.0;
            for nd in &head {
                sum += nd.wr * self.weight(nd.r, s) * nd.f;
            }
            let (t, n) = self.tail_integral(0.5 * s, s);
            integral = sum + t;
            nodes = head.len() + n;
        } else {
            let k = k as usize;
            self.ensure_panels(k);
            let mut sum = 0.0;
            for nd in &self.head {
                sum += nd.wr * self.weight(nd.r, s) * nd.f;
            }
            let m = (k - 1) * self.panel.len();
            for nd in &self.panels[..m] {
                sum += nd.wr * self.weight(nd.r, s) * nd.f;
            }
            let (t, n) = self.tail_integral(k as f64 * PANEL_WIDTH, s);
            integral = sum + t;
            nodes = self.head.len() + m + n;
        }
        (2.0 / (s * s) * integral, nodes)
    }

    /// `S(γ, α, s)` without an error estimate.
    pub fn value(&mut self, s: f64) -> Result<f64> {
        check_s(s)?;
        Ok(self.evaluate(s).0)
    }

    /// `S(γ, α, s)` with truncation order and error estimate.
    pub fn point(&mut self, s: f64) -> Result<ABSeriesPoint> {
        check_s(s)?;
        let (value, nodes) = self.evaluate(s);
        let mut coarse = AbSeries::with_rules(self.gamma, self.alpha, PANEL_NODES / 2, TAIL_NODES / 2)?;
        let (rough, _) = coarse.evaluate(s);
        let tail = ladder_tail_bound(s) / (self.gamma + 1.0);
        Ok(ABSeriesPoint {
            gamma: self.gamma,
            flux: self.alpha,
            s,
            value,
            truncation_order: tail_safe_index(s),
            quadrature_nodes: nodes,
            error_bound: tail + fabs(value - rough),
        })
    }
}

fn check_s(s: f64) -> Result<()> {
    if !(0.0..=MAX_S).contains(&s) {
        return Err(domain_err!("s must lie in [0, {MAX_S}], got {s}"));
    }
    Ok(())
}

/// `S(γ, α, s) = Σ_n ∫_0^1 (1-μ)^γ J²_{|n-α|}(√μ s) dμ`.
pub fn ab_series(gamma: f64, flux: f64, s: f64) -> Result<ABSeriesPoint> {
    AbSeries::new(gamma, flux)?.point(s)
}

/// `1/(γ+1) - Γ(γ+1) (sin απ / π) sin(2s - γπ/2) / s^{2+γ}`.
pub fn ab_asymptotic(gamma: f64, flux: f64, s: f64) -> Result<f64> {
    check_gamma(gamma)?;
    if !(s > 0.0) {
        return Err(domain_err!("s must be > 0, got {s}"));
    }
    let alpha = reduce_flux(flux)?;
    let amp = gamma_fn_positive(gamma + 1.0) * sin(alpha * PI) / PI;
    Ok(1.0 / (gamma + 1.0) - amp * sin(2.0 * s - 0.5 * gamma * PI) / pow(s, 2.0 + gamma))
}

fn gamma_fn_positive(x: f64) -> f64 {
    gamma(x)
}

/// Result of the supremum search.
#[derive(Debug, Clone, PartialEq)]
pub struct AbConstant {
    pub gamma: f64,
    /// Reduced flux in `[0, 1/2]`.
    pub flux: f64,
    /// `R_γ(α)`.
    pub value: f64,
    pub argmax_s: f64,
    /// End of the scanned range.
    pub s_max: f64,
    /// The maximum sits at the end of the scan range.
    pub at_boundary: bool,
    pub truncation_order: usize,
    pub error_bound: f64,
}

/// `s` beyond which the asymptotic envelope
/// `1/(γ+1) + Γ(γ+1)|sin απ|/(π s^{2+γ})` stays below `level`.
pub fn envelope_crossing(gamma: f64, alpha: f64, level: f64) -> f64 {
    let excess = level - 1.0 / (gamma + 1.0);
    let amp = gamma_fn_positive(gamma + 1.0) * fabs(sin(alpha * PI)) / PI;
    if amp == 0.0 {
        return 0.0;
    }
    if !(excess > 0.0) {
        return f64::INFINITY;
    }
    pow(amp / excess, 1.0 / (2.0 + gamma))
}

/// `R_γ(α) = (γ+1) sup_s S(γ, α, s)`: a scan with step 0.05 on `[0, s_max]`,
/// `s_max = max(60, envelope crossing)`, then golden-section refinement.
pub fn ab_constant(gamma: f64, flux: f64) -> Result<AbConstant> {
    let mut series = AbSeries::new(gamma, flux)?;
    let alpha = series.flux();
    let mut best_s = 0.0;
    let mut best = series.value(0.0)?;
    let mut i = 0usize;
    let mut s_max = SCAN_MIN_RANGE;
    loop {
        i += 1;
        let s = i as f64 * SCAN_STEP;
        if s > s_max + 1e-12 {
            break;
        }
        let v = series.value(s)?;
        if v > best {
            best = v;
            best_s = s;
        }
        if s >= SCAN_MIN_RANGE {
            s_max = SCAN_MIN_RANGE.max(envelope_crossing(gamma, alpha, best)).min(MAX_S);
        }
    }
    let s_end = (i - 1) as f64 * SCAN_STEP;
    let at_boundary = best_s > 0.0 && s_end - best_s < 0.5 * SCAN_STEP;
    let (mut arg, mut sup) = (best_s, best);
    if best_s > 0.0 {
        let lo = best_s - SCAN_STEP;
        let hi = (best_s + SCAN_STEP).min(MAX_S);
        let (x, v) = golden_max(|s| series.value(s).unwrap_or(f64::NEG_INFINITY), lo, hi, REFINE_TOL);
        if v > sup {
            arg = x;
            sup = v;
        }
    }
    let p = series.point(arg)?;
    Ok(AbConstant {
        gamma,
        flux: alpha,
        value: (gamma + 1.0) * sup,
        argmax_s: arg,
        s_max: s_end,
        at_boundary,
        truncation_order: p.truncation_order,
        error_bound: (gamma + 1.0) * p.error_bound,
    })
}

/// Least-squares slope of `log max|S - asymptotic|` against `log s`, with
/// the maximum taken over windows of length `π` (one period of the
/// oscillating remainder) on `[s_lo, s_hi]`.
#[derive(Debug, Clone, PartialEq)]
pub struct RemainderFit {
    pub slope: f64,
    /// `(s, |remainder|)` at each window maximum.
    pub peaks: Vec<(f64, f64)>,
}

pub fn remainder_slope(gamma: f64, flux: f64, s_lo: f64, s_hi: f64, samples_per_window: usize) -> Result<RemainderFit> {
    if !(0.0 < s_lo && s_lo < s_hi && s_hi <= MAX_S) || samples_per_window < 2 {
        return Err(domain_err!("need 0 < s_lo < s_hi <= {MAX_S} and >= 2 samples"));
    }
    let mut series = AbSeries::new(gamma, flux)?;
    let mut peaks = Vec::new();
    let mut start = s_lo;
    while start + PI <= s_hi + 1e-12 {
        let mut peak = (start, 0.0f64);
        for k in 0..samples_per_window {
            let s = start + PI * k as f64 / samples_per_window as f64;
            let d = fabs(series.value(s)? - ab_asymptotic(gamma, flux, s)?);
            if d > peak.1 {
                peak = (s, d);
            }
        }
        peaks.push(peak);
        start += PI;
    }
    let n = peaks.len() as f64;
    let (mut sx, mut sy, mut sxx, mut sxy) = (0.0, 0.0, 0.0, 0.0);
    for &(s, d) in &peaks {
        let (x, y) = (log(s), log(d));
        sx += x;
        sy += y;
        sxx += x * x;
        sxy += x * y;
    }
    let slope = (n * sxy - sx * sy) / (n * sxx - sx * sx);
    Ok(RemainderFit { slope, peaks })
}
