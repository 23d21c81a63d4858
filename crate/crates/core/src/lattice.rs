//! Peierls discretization of `(D - A)²` on planar grid domains.
//!
//! Nodes sit at `(ih, jh)` with `h = 1/n`. The hopping between neighbors
//! `p, q` is `-e^{iθ_{pq}}/h²` with `θ_{pq} = ∫_p^q A·dl`, evaluated exactly
//! for the (linear) vector potentials used here. Dirichlet domains keep the
//! strictly interior nodes with diagonal `4/h²`; Neumann domains keep the
//! nodes of the closed shape with diagonal `deg/h²`.

use alloc::string::String;
use alloc::vec;
use alloc::vec::Vec;
use core::f64::consts::PI;
use core::hash::Hasher;

use fnv::FnvHasher;
use libm::{cos, floor, sin};
use num_complex::Complex64;

use crate::eig::{eigenvalues, CMatrix, Spectrum};
use crate::error::domain_err;
use crate::{Error, Result};

/// Above this flux per cell the lattice is in the Hofstadter regime and no
/// longer resembles the continuum Landau problem.
pub const FLUX_PER_CELL_LIMIT: f64 = 0.1;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Shape {
    /// `[0, 1]²`.
    Square,
    /// `[0, 2] × [0, 1]`.
    Rectangle,
    /// Disk of radius 1/2 centred at `(1/2, 1/2)`.
    Disk,
    /// `[0, 1]²` minus `[1/2, 1]²`.
    LShape,
}

impl Shape {
    pub fn name(&self) -> &'static str {
        match self {
            Shape::Square => "square",
            Shape::Rectangle => "rectangle",
            Shape::Disk => "disk",
            Shape::LShape => "lshape",
        }
    }

    pub fn parse(s: &str) -> Result<Self> {
        match s {
            "square" => Ok(Shape::Square),
            "rectangle" => Ok(Shape::Rectangle),
            "disk" => Ok(Shape::Disk),
            "lshape" | "l-shape" => Ok(Shape::LShape),
            _ => Err(domain_err!("unknown shape {s:?}")),
        }
    }

    /// Bounding box `[0, w] × [0, 1]`.
    fn width(&self) -> f64 {
        match self {
            Shape::Rectangle => 2.0,
            _ => 1.0,
        }
    }

    /// Continuum area.
    pub fn area(&self) -> f64 {
        match self {
            Shape::Square => 1.0,
            Shape::Rectangle => 2.0,
            Shape::Disk => 0.25 * PI,
            Shape::LShape => 0.75,
        }
    }

    /// Whether translated copies tile the plane.
    pub fn is_tiling(&self) -> bool {
        matches!(self, Shape::Square | Shape::Rectangle)
    }

    fn contains(&self, x: f64, y: f64, closed: bool) -> bool {
        let w = self.width();
        let tol = 1e-12;
        let in_box = if closed {
            x >= -tol && x <= w + tol && y >= -tol && y <= 1.0 + tol
        } else {
            x > tol && x < w - tol && y > tol && y < 1.0 - tol
        };
        if !in_box {
            return false;
        }
        match self {
            Shape::Square | Shape::Rectangle => true,
            Shape::Disk => {
                let r2 = (x - 0.5) * (x - 0.5) + (y - 0.5) * (y - 0.5);
                if closed {
                    r2 <= 0.25 + tol
                } else {
                    r2 < 0.25 - tol
                }
            }
            Shape::LShape => {
                if closed {
                    x <= 0.5 + tol || y <= 0.5 + tol
                } else {
                    x < 0.5 - tol || y < 0.5 - tol
                }
            }
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum BoundaryCondition {
    Dirichlet,
    Neumann,
}

impl BoundaryCondition {
    pub fn name(&self) -> &'static str {
        match self {
            BoundaryCondition::Dirichlet => "dirichlet",
            BoundaryCondition::Neumann => "neumann",
        }
    }

    pub fn parse(s: &str) -> Result<Self> {
        match s {
            "dirichlet" => Ok(BoundaryCondition::Dirichlet),
            "neumann" => Ok(BoundaryCondition::Neumann),
            _ => Err(domain_err!("unknown boundary condition {s:?}")),
        }
    }
}

/// Grid nodes kept inside a shape.
#[derive(Debug, Clone, PartialEq)]
pub struct LatticeDomain {
    pub shape: Shape,
    pub n: usize,
    pub spacing: f64,
    pub bc: BoundaryCondition,
    /// Grid is `(nx + 1) × (ny + 1)` nodes.
    pub nx: usize,
    pub ny: usize,
    /// Row-major over `j * (nx + 1) + i`.
    pub mask: Vec<bool>,
    /// Number of kept nodes times `h²`.
    pub area: f64,
}

impl LatticeDomain {
    pub fn node_count(&self) -> usize {
        self.mask.iter().filter(|&&m| m).count()
    }

    pub fn contains(&self, i: usize, j: usize) -> bool {
        i <= self.nx && j <= self.ny && self.mask[j * (self.nx + 1) + i]
    }

    pub fn point(&self, i: usize, j: usize) -> (f64, f64) {
        (i as f64 * self.spacing, j as f64 * self.spacing)
    }

    /// Geometric centre of the shape.
    pub fn center(&self) -> (f64, f64) {
        (0.5 * self.shape.width(), 0.5)
    }

    /// Upper end of the λ-window in which the 5-point stencil tracks `|ξ|²`.
    pub fn validity_limit(&self) -> f64 {
        0.2 / (self.spacing * self.spacing)
    }

    fn digest(&self) -> u64 {
        let mut h = FnvHasher::default();
        h.write(self.shape.name().as_bytes());
        h.write(self.bc.name().as_bytes());
        h.write_usize(self.n);
        h.finish()
    }
}

/// Builds the node mask of `shape` on the grid of spacing `1/n`.
pub fn build_domain(shape: Shape, n: usize, bc: BoundaryCondition) -> Result<LatticeDomain> {
    if n < 4 {
        return Err(domain_err!("grid resolution n must be >= 4, got {n}"));
    }
    let h = 1.0 / n as f64;
    let nx = floor(shape.width() * n as f64 + 0.5) as usize;
    let ny = n;
    let closed = bc == BoundaryCondition::Neumann;
    let mut mask = Vec::with_capacity((nx + 1) * (ny + 1));
    for j in 0..=ny {
        for i in 0..=nx {
            mask.push(shape.contains(i as f64 * h, j as f64 * h, closed));
        }
    }
    let count = mask.iter().filter(|&&m| m).count();
    if count == 0 {
        return Err(Error::EmptyDomain);
    }
    Ok(LatticeDomain { shape, n, spacing: h, bc, nx, ny, mask, area: count as f64 * h * h })
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum GaugeKind {
    Zero,
    /// `A = (B/2)(-y, x)`.
    HomogeneousSymmetric { b: f64 },
    /// `A = (-B y, 0)`.
    HomogeneousLandau { b: f64 },
    /// Total phase `2πα` through the cell nearest the domain centre.
    AbPlaquette { flux: f64 },
}

/// A vector potential on the grid, resolved into link phases.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GaugeField {
    pub kind: GaugeKind,
    /// Lower-left node `(i0, j0)` of the flux cell (`AbPlaquette` only).
    cell: (usize, usize),
}

impl GaugeField {
    pub fn zero() -> Self {
        GaugeField { kind: GaugeKind::Zero, cell: (0, 0) }
    }

    pub fn symmetric(b: f64) -> Self {
        GaugeField { kind: GaugeKind::HomogeneousSymmetric { b }, cell: (0, 0) }
    }

    pub fn landau(b: f64) -> Self {
        GaugeField { kind: GaugeKind::HomogeneousLandau { b }, cell: (0, 0) }
    }

    /// Flux cell placed nearest the centre of `domain`.
    pub fn ab_plaquette(flux: f64, domain: &LatticeDomain) -> Self {
        let (cx, cy) = domain.center();
        let h = domain.spacing;
        let i0 = floor(cx / h - 0.5 + 1e-9).max(0.0) as usize;
        let j0 = floor(cy / h - 0.5 + 1e-9).max(0.0) as usize;
        GaugeField { kind: GaugeKind::AbPlaquette { flux }, cell: (i0, j0) }
    }

    /// Field strength `B` (0 unless homogeneous).
    pub fn field_strength(&self) -> f64 {
        match self.kind {
            GaugeKind::HomogeneousSymmetric { b } | GaugeKind::HomogeneousLandau { b } => b,
            _ => 0.0,
        }
    }

    pub fn flux_cell(&self) -> Option<(usize, usize)> {
        matches!(self.kind, GaugeKind::AbPlaquette { .. }).then_some(self.cell)
    }

    /// `∫_p^q A·dl` along the straight segment between neighboring nodes
    /// `p = (i, j)` and `q`, with spacing `h`.
    pub fn link_phase(&self, p: (usize, usize), q: (usize, usize), h: f64) -> f64 {
        let (p1, p2) = (p.0 as f64 * h, p.1 as f64 * h);
        let (q1, q2) = (q.0 as f64 * h, q.1 as f64 * h);
        match self.kind {
            GaugeKind::Zero => 0.0,
            // A linear, so the midpoint rule is exact: (B/2)(p1 q2 - p2 q1).
            GaugeKind::HomogeneousSymmetric { b } => 0.5 * b * (p1 * q2 - p2 * q1),
            GaugeKind::HomogeneousLandau { b } => -b * 0.5 * (p2 + q2) * (q1 - p1),
            GaugeKind::AbPlaquette { flux } => {
                let (i0, j0) = self.cell;
                let phase = 2.0 * PI * flux;
                // Branch cut: vertical links crossing y = (j0 + 1/2) h to the
                // right of the flux cell.
                if p.0 == q.0 && p.0 > i0 {
                    if p.1 == j0 && q.1 == j0 + 1 {
                        return phase;
                    }
                    if q.1 == j0 && p.1 == j0 + 1 {
                        return -phase;
                    }
                }
                0.0
            }
        }
    }

    /// Sum of link phases counterclockwise around the cell with lower-left
    /// node `(i, j)`.
    pub fn plaquette_flux(&self, i: usize, j: usize, h: f64) -> f64 {
        self.link_phase((i, j), (i + 1, j), h)
            + self.link_phase((i + 1, j), (i + 1, j + 1), h)
            + self.link_phase((i + 1, j + 1), (i, j + 1), h)
            + self.link_phase((i, j + 1), (i, j), h)
    }

    fn digest(&self) -> u64 {
        let mut h = FnvHasher::default();
        let (tag, v) = match self.kind {
            GaugeKind::Zero => (0u8, 0.0),
            GaugeKind::HomogeneousSymmetric { b } => (1, b),
            GaugeKind::HomogeneousLandau { b } => (2, b),
            GaugeKind::AbPlaquette { flux } => (3, flux),
        };
        h.write_u8(tag);
        h.write_u64(v.to_bits());
        h.write_usize(self.cell.0);
        h.write_usize(self.cell.1);
        h.finish()
    }
}

/// Sparse Hermitian matrix of the discretized operator.
#[derive(Debug, Clone, PartialEq)]
pub struct MagneticOperator {
    pub dimension: usize,
    /// Grid coordinates of each row.
    pub nodes: Vec<(usize, usize)>,
    pub diagonal: Vec<f64>,
    /// `(row, column, value)` for every off-diagonal entry.
    pub hopping: Vec<(usize, usize, Complex64)>,
    pub bc: BoundaryCondition,
    pub spacing: f64,
    pub field_strength: f64,
    pub provenance: (u64, u64),
    /// Set when `B h² > 0.1`.
    pub warning: Option<String>,
}

impl MagneticOperator {
    pub fn to_dense(&self) -> CMatrix {
        let mut m = CMatrix::zeros(self.dimension);
        for (k, &d) in self.diagonal.iter().enumerate() {
            m[(k, k)] = Complex64::new(d, 0.0);
        }
        for &(r, c, v) in &self.hopping {
            m[(r, c)] = v;
        }
        m
    }

    /// Full spectrum by the dense solver.
    pub fn spectrum(&self, want_vectors: bool) -> Result<Spectrum> {
        let mut s = eigenvalues(&self.to_dense(), want_vectors)?;
        s.source = self.provenance_digest();
        Ok(s)
    }

    pub fn provenance_digest(&self) -> u64 {
        let mut h = FnvHasher::default();
        h.write_u64(self.provenance.0);
        h.write_u64(self.provenance.1);
        h.finish()
    }

    /// `y = H x`.
    pub fn apply(&self, x: &[Complex64]) -> Vec<Complex64> {
        let mut y: Vec<Complex64> = x.iter().zip(&self.diagonal).map(|(v, d)| v * d).collect();
        for &(r, c, v) in &self.hopping {
            y[r] += v * x[c];
        }
        y
    }
}

/// Assembles the Peierls matrix of `gauge` on `domain`.
pub fn assemble_magnetic(domain: &LatticeDomain, gauge: &GaugeField) -> MagneticOperator {
    let h = domain.spacing;
    let inv_h2 = 1.0 / (h * h);
    let stride = domain.nx + 1;
    let mut index = vec![usize::MAX; domain.mask.len()];
    let mut nodes = Vec::new();
    for j in 0..=domain.ny {
        for i in 0..=domain.nx {
            if domain.mask[j * stride + i] {
                index[j * stride + i] = nodes.len();
                nodes.push((i, j));
            }
        }
    }
    let mut diagonal = Vec::with_capacity(nodes.len());
    let mut hopping = Vec::with_capacity(4 * nodes.len());
    for (row, &(i, j)) in nodes.iter().enumerate() {
        let mut degree = 0usize;
        let nbrs = [
            (i.wrapping_sub(1), j),
            (i + 1, j),
            (i, j.wrapping_sub(1)),
            (i, j + 1),
        ];
        for q in nbrs {
            if !domain.contains_wrapped(q) {
                continue;
            }
            degree += 1;
            let col = index[q.1 * stride + q.0];
            let theta = gauge.link_phase((i, j), q, h);
            hopping.push((row, col, -Complex64::new(cos(theta), sin(theta)) * inv_h2));
        }
        diagonal.push(match domain.bc {
            BoundaryCondition::Dirichlet => 4.0 * inv_h2,
            BoundaryCondition::Neumann => degree as f64 * inv_h2,
        });
    }
    let b = gauge.field_strength();
    let warning = (b * h * h > FLUX_PER_CELL_LIMIT).then(|| {
        alloc::format!("flux per cell B h^2 = {} exceeds {FLUX_PER_CELL_LIMIT}", b * h * h)
    });
    MagneticOperator {
        dimension: nodes.len(),
        nodes,
        diagonal,
        hopping,
        bc: domain.bc,
        spacing: h,
        field_strength: b,
        provenance: (domain.digest(), gauge.digest()),
        warning,
    }
}

impl LatticeDomain {
    fn contains_wrapped(&self, q: (usize, usize)) -> bool {
        q.0 != usize::MAX && q.1 != usize::MAX && self.contains(q.0, q.1)
    }
}

/// Exact eigenvalues `(4/h²)(sin²(πph/2) + sin²(πqh/2))`, `1 ≤ p, q ≤ n-1`,
/// of the Dirichlet 5-point Laplacian on the unit square, ascending.
pub fn dirichlet_square_eigenvalues(n: usize) -> Vec<f64> {
    let h = 1.0 / n as f64;
    let s: Vec<f64> = (1..n).map(|p| {
        let v = sin(0.5 * PI * p as f64 * h);
        4.0 / (h * h) * v * v
    }).collect();
    let mut out = Vec::with_capacity(s.len() * s.len());
    for a in &s {
        for b in &s {
            out.push(a + b);
        }
    }
    out.sort_by(f64::total_cmp);
    out
}

/// Continuum Dirichlet eigenvalues `π²(p² + q²)` of the unit square, ascending.
pub fn continuum_square_eigenvalues(count: usize) -> Vec<f64> {
    let m = libm::sqrt(count as f64) as usize + 2;
    let mut out = Vec::with_capacity(m * m);
    for p in 1..=m {
        for q in 1..=m {
            out.push(PI * PI * (p * p + q * q) as f64);
        }
    }
    out.sort_by(f64::total_cmp);
    out.truncate(count);
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn domain_counts() {
        let d = build_domain(Shape::Square, 4, BoundaryCondition::Dirichlet).unwrap();
        assert_eq!(d.node_count(), 9);
        assert!((d.area - 9.0 / 16.0).abs() < 1e-15);
        let nd = build_domain(Shape::Square, 6, BoundaryCondition::Neumann).unwrap();
        assert_eq!(nd.node_count(), 49);
        let disk = build_domain(Shape::Disk, 64, BoundaryCondition::Dirichlet).unwrap();
        assert!((disk.area - 0.25 * PI).abs() < 2.0 / 64.0);
        let l = build_domain(Shape::LShape, 8, BoundaryCondition::Dirichlet).unwrap();
        // 7×7 interior minus the 4×4 block with x, y ≥ 1/2.
        assert_eq!(l.node_count(), 49 - 16);
        let r = build_domain(Shape::Rectangle, 8, BoundaryCondition::Dirichlet).unwrap();
        assert_eq!(r.node_count(), 15 * 7);
        assert!(build_domain(Shape::Square, 3, BoundaryCondition::Dirichlet).is_err());
    }

    #[test]
    fn zero_gauge_stencil() {
        let d = build_domain(Shape::Square, 6, BoundaryCondition::Dirichlet).unwrap();
        let op = assemble_magnetic(&d, &GaugeField::zero());
        let h2 = 36.0;
        assert!(op.diagonal.iter().all(|&v| (v - 4.0 * h2).abs() < 1e-12));
        assert!(op.hopping.iter().all(|&(_, _, v)| (v - Complex64::new(-h2, 0.0)).norm() < 1e-12));
        // Interior-of-interior node has four neighbors.
        let row = op.nodes.iter().position(|&p| p == (3, 3)).unwrap();
        assert_eq!(op.hopping.iter().filter(|e| e.0 == row).count(), 4);
    }

    #[test]
    fn plaquette_fluxes() {
        let h = 1.0 / 16.0;
        let b = 7.5;
        for g in [GaugeField::symmetric(b), GaugeField::landau(b)] {
            for (i, j) in [(0, 0), (3, 9), (15, 15)] {
                assert!((g.plaquette_flux(i, j, h) - b * h * h).abs() < 1e-15);
            }
        }
        let d = build_domain(Shape::Square, 16, BoundaryCondition::Dirichlet).unwrap();
        let ab = GaugeField::ab_plaquette(0.3, &d);
        let (i0, j0) = ab.flux_cell().unwrap();
        for i in 0..16 {
            for j in 0..16 {
                let expect = if (i, j) == (i0, j0) { 2.0 * PI * 0.3 } else { 0.0 };
                assert!((ab.plaquette_flux(i, j, h) - expect).abs() < 1e-14);
            }
        }
    }

    #[test]
    fn operator_is_hermitian() {
        let d = build_domain(Shape::LShape, 12, BoundaryCondition::Neumann).unwrap();
        let op = assemble_magnetic(&d, &GaugeField::symmetric(10.0));
        assert!(op.to_dense().hermitian_defect() < 1e-14);
        assert!(op.warning.is_none());
        let hot = assemble_magnetic(&d, &GaugeField::symmetric(20.0));
        assert!(hot.warning.is_some());
    }

    #[test]
    fn closed_form_square_spectrum() {
        let n = 10;
        let d = build_domain(Shape::Square, n, BoundaryCondition::Dirichlet).unwrap();
        let spec = assemble_magnetic(&d, &GaugeField::zero()).spectrum(false).unwrap();
        let exact = dirichlet_square_eigenvalues(n);
        for (a, b) in spec.values.iter().zip(&exact) {
            assert!((a - b).abs() < 1e-10);
        }
    }
}
