//! Band functions, Floquet matrices and Brillouin-zone grid averages.
//!
//! For a crystal built as a product of a one-vertex lattice `Γ_0` with a
//! finite graph, the band functions are known in terms of the finite
//! spectrum `μ_j` and the base band `E_0(θ)`:
//!
//! | product   | `E_j(θ)`                |
//! |-----------|-------------------------|
//! | Cartesian | `E_0(θ) + μ_j`          |
//! | tensor    | `μ_j · E_0(θ)`          |
//! | strong    | `(1 + μ_j) E_0(θ) + μ_j` |
//!
//! Grids are the periodic `r/N`, `r ∈ {0, …, N−1}^d`, with shifts taken mod `N`.

use std::f64::consts::PI;

use nalgebra::DMatrix;
use num_complex::Complex64;
use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::format;
use crate::graph::{FiniteGraph, PeriodicGraphSpec, ProductKind};
use crate::spectral::{self, cluster_gap, cluster_sorted, DensityMatrix, DensitySource, SpectralDecomposition};

pub const DEFAULT_COLLISION_DELTA: f64 = 1e-9;

/// One-vertex base lattice `Γ_0`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum BaseLattice {
    /// `Z^d` with nearest-neighbour hops.
    Zd(usize),
    /// Triangular lattice, `d = 2`.
    Triangular,
}

impl BaseLattice {
    pub fn dim(self) -> usize {
        match self {
            BaseLattice::Zd(d) => d,
            BaseLattice::Triangular => 2,
        }
    }
}

/// `E_0(θ)` of the base lattice. Panics if `theta.len()` differs from the
/// lattice dimension.
pub fn base_band(base: BaseLattice, theta: &[f64]) -> f64 {
    assert_eq!(theta.len(), base.dim(), "θ has the wrong dimension");
    let c = |x: f64| 2.0 * (2.0 * PI * x).cos();
    match base {
        BaseLattice::Zd(_) => theta.iter().map(|&t| c(t)).sum(),
        BaseLattice::Triangular => c(theta[0]) + c(theta[1]) + c(theta[0] + theta[1]),
    }
}

/// Band functions of `Γ_0 ⊙ G_F`.
#[derive(Debug, Clone, PartialEq)]
pub struct BandStructure {
    base: BaseLattice,
    spectrum: SpectralDecomposition,
    rule: ProductKind,
    tol: f64,
}

impl BandStructure {
    pub fn new(base: BaseLattice, graph: &FiniteGraph, rule: ProductKind, tol: f64) -> Result<Self> {
        let spectrum = spectral::eigendecompose_symmetric(&graph.adjacency(), tol)?;
        Self::from_spectrum(base, spectrum, rule, tol)
    }

    pub fn from_spectrum(base: BaseLattice, spectrum: SpectralDecomposition, rule: ProductKind, tol: f64) -> Result<Self> {
        if base.dim() == 0 {
            return Err(Error::InvalidParameter("base lattice needs d ≥ 1".into()));
        }
        Ok(Self { base, spectrum, rule, tol })
    }

    pub fn base(&self) -> BaseLattice {
        self.base
    }

    pub fn rule(&self) -> ProductKind {
        self.rule
    }

    pub fn spectrum(&self) -> &SpectralDecomposition {
        &self.spectrum
    }

    pub fn band_count(&self) -> usize {
        self.spectrum.dim()
    }

    pub fn dim(&self) -> usize {
        self.base.dim()
    }
}

/// `E_j(θ)` for every band `j`, in ascending order of `μ_j`. Degenerate
/// `μ_j` are snapped to their cluster value so equal bands compare equal.
pub fn product_bands(bs: &BandStructure, theta: &[f64]) -> Vec<f64> {
    let e0 = base_band(bs.base, theta);
    bs.spectrum
        .snapped_eigenvalues()
        .into_iter()
        .map(|mu| match bs.rule {
            ProductKind::Cartesian => e0 + mu,
            ProductKind::Tensor => mu * e0,
            ProductKind::Strong => (1.0 + mu) * e0 + mu,
        })
        .collect()
}

/// Indices of constant bands: none for Cartesian products, `μ_j = 0` for
/// tensor products, `μ_j = −1` for strong products. `μ_j` is compared at the
/// clustering gap of the finite spectrum.
pub fn flat_band_check(bs: &BandStructure) -> Vec<usize> {
    let values = bs.spectrum.eigenvalues();
    let gap = cluster_gap(values, bs.tol);
    let target = match bs.rule {
        ProductKind::Cartesian => return Vec::new(),
        ProductKind::Tensor => 0.0,
        ProductKind::Strong => -1.0,
    };
    (0..values.len()).filter(|&j| (values[j] - target).abs() <= gap).collect()
}

/// Multi-index of grid point `linear` on `{0..n-1}^dim`, first axis slowest.
pub(crate) fn grid_point(mut linear: usize, n: usize, dim: usize) -> Vec<usize> {
    let mut r = vec![0; dim];
    for axis in (0..dim).rev() {
        r[axis] = linear % n;
        linear /= n;
    }
    r
}

pub(crate) fn grid_linear(r: &[usize], n: usize) -> usize {
    r.iter().fold(0, |acc, &x| acc * n + x)
}

fn grid_size(n: usize, dim: usize) -> Result<usize> {
    u32::try_from(dim)
        .ok()
        .and_then(|d| n.checked_pow(d))
        .ok_or_else(|| Error::InvalidParameter(format!("grid {n}^{dim} is too large")))
}

/// Result of scanning the collision fraction
/// `#{r : |E_s((r+m)/N) − E_w(r/N)| < δ} / N^d` over shifts `m ≠ 0` and
/// band pairs `(s, w)`.
#[derive(Debug, Clone, PartialEq)]
pub struct FloquetScanReport {
    pub n: usize,
    pub max_fraction: f64,
    pub worst_shift: Vec<usize>,
    pub worst_pair: (usize, usize),
    pub flat_bands: Vec<usize>,
}

impl FloquetScanReport {
    pub fn to_json(&self) -> String {
        let list = |v: &[usize]| v.iter().map(|x| x.to_string()).collect::<Vec<_>>().join(",");
        format!(
            "{{\"N\":{},\"max_fraction\":{},\"worst_shift\":[{}],\"worst_pair\":[{},{}],\"flat_bands\":[{}]}}",
            self.n,
            format::json(self.max_fraction),
            list(&self.worst_shift),
            self.worst_pair.0,
            self.worst_pair.1,
            list(&self.flat_bands)
        )
    }
}

/// Scans every nonzero shift and band pair on the `N^d` grid. Ties keep the
/// first maximiser in (shift, s, w) order.
pub fn floquet_condition_fraction(bs: &BandStructure, n: usize, delta: f64) -> Result<FloquetScanReport> {
    if n < 2 {
        return Err(Error::InvalidParameter("grid needs N ≥ 2".into()));
    }
    if !(delta > 0.0) {
        return Err(Error::InvalidParameter("collision tolerance δ must be positive".into()));
    }
    let dim = bs.dim();
    let points = grid_size(n, dim)?;
    let nb = bs.band_count();
    let bands: Vec<Vec<f64>> = (0..points)
        .map(|lin| {
            let theta: Vec<f64> = grid_point(lin, n, dim).iter().map(|&r| r as f64 / n as f64).collect();
            product_bands(bs, &theta)
        })
        .collect();

    let mut best = (0usize, 1usize, (0usize, 0usize));
    let mut counts = vec![0usize; nb * nb];
    'shifts: for shift_lin in 1..points {
        let shift = grid_point(shift_lin, n, dim);
        counts.fill(0);
        for lin in 0..points {
            let r = grid_point(lin, n, dim);
            let moved: Vec<usize> = r.iter().zip(&shift).map(|(a, b)| (a + b) % n).collect();
            let shifted = &bands[grid_linear(&moved, n)];
            let here = &bands[lin];
            for s in 0..nb {
                for w in 0..nb {
                    if (shifted[s] - here[w]).abs() < delta {
                        counts[s * nb + w] += 1;
                    }
                }
            }
        }
        for s in 0..nb {
            for w in 0..nb {
                let c = counts[s * nb + w];
                if c > best.0 {
                    best = (c, shift_lin, (s, w));
                    if c == points {
                        break 'shifts;
                    }
                }
            }
        }
    }
    Ok(FloquetScanReport {
        n,
        max_fraction: best.0 as f64 / points as f64,
        worst_shift: grid_point(best.1, n, dim),
        worst_pair: best.2,
        flat_bands: flat_band_check(bs),
    })
}

/// Floquet matrix `H(θ)(p,q) = Σ_{(p,q,n)} e^{2πi θ·n} + Q(p)[p = q]`.
pub fn floquet_matrix(spec: &PeriodicGraphSpec, theta: &[f64]) -> DMatrix<Complex64> {
    assert_eq!(theta.len(), spec.dim(), "θ has the wrong dimension");
    let nu = spec.nu();
    let mut h = DMatrix::from_diagonal(&nalgebra::DVector::from_iterator(
        nu,
        spec.potential().iter().map(|&v| Complex64::new(v, 0.0)),
    ));
    for e in spec.edges() {
        let phase: f64 = e.offset.iter().zip(theta).map(|(&n, &t)| n as f64 * t).sum();
        h[(e.p, e.q)] += Complex64::from_polar(1.0, 2.0 * PI * phase);
    }
    h
}

/// Grid approximation of the general density
/// `d(p,q) ≈ N^{-d} Σ_r Σ_s |P_{E_s}(r/N)(p,q)|²`.
#[derive(Debug, Clone, PartialEq)]
pub struct GridDensityResult {
    pub values: DMatrix<f64>,
    pub n: usize,
    /// Largest change of any sorted eigenvalue between neighbouring grid
    /// points; a continuity monitor, not a pass/fail criterion.
    pub max_band_jump: f64,
}

impl GridDensityResult {
    pub fn density(&self) -> DensityMatrix {
        DensityMatrix::new(self.values.clone(), DensitySource::Quadrature)
    }

    pub fn row_sum_error(&self) -> f64 {
        self.values.row_iter().fold(0.0f64, |acc, r| acc.max((r.sum() - 1.0).abs()))
    }
}

/// `Σ_s |P_s(p,q)|²` at one grid point, plus the sorted eigenvalues there.
fn point_contribution(spec: &PeriodicGraphSpec, theta: &[f64], tol: f64) -> Result<(DMatrix<f64>, Vec<f64>)> {
    let nu = spec.nu();
    let (values, vectors) = spectral::sorted_eigen(floquet_matrix(spec, theta))?;
    let mut acc = DMatrix::zeros(nu, nu);
    for c in cluster_sorted(&values, cluster_gap(&values, tol)) {
        let block = vectors.columns(c.start, c.len());
        let proj = block * block.adjoint();
        acc += proj.map(|z| z.norm_sqr());
    }
    Ok((acc, values))
}

const CHUNK: usize = 64;

/// Evaluates grid points in parallel; partial sums are taken over fixed
/// chunks and combined in grid order, so the result does not depend on the
/// thread count.
pub fn general_density(spec: &PeriodicGraphSpec, n: usize, tol: f64) -> Result<GridDensityResult> {
    if n < 2 {
        return Err(Error::InvalidParameter("grid needs N ≥ 2".into()));
    }
    let dim = spec.dim();
    let nu = spec.nu();
    let points = grid_size(n, dim)?;
    let chunks: Vec<(DMatrix<f64>, Vec<Vec<f64>>)> = (0..points)
        .collect::<Vec<_>>()
        .par_chunks(CHUNK)
        .map(|chunk| -> Result<_> {
            let mut sum = DMatrix::zeros(nu, nu);
            let mut spectra = Vec::with_capacity(chunk.len());
            for &lin in chunk {
                let r = grid_point(lin, n, dim);
                let theta: Vec<f64> = r.iter().map(|&x| x as f64 / n as f64).collect();
                let (contrib, values) = point_contribution(spec, &theta, tol)
                    .map_err(|e| Error::GridPoint { point: r.clone(), source: Box::new(e) })?;
                sum += contrib;
                spectra.push(values);
            }
            Ok((sum, spectra))
        })
        .collect::<Result<_>>()?;

    let mut values = DMatrix::zeros(nu, nu);
    let mut spectra = Vec::with_capacity(points);
    for (sum, s) in chunks {
        values += sum;
        spectra.extend(s);
    }
    values /= points as f64;

    let mut max_band_jump = 0.0f64;
    for lin in 0..points {
        let r = grid_point(lin, n, dim);
        for axis in 0..dim {
            let mut next = r.clone();
            next[axis] = (next[axis] + 1) % n;
            let other = &spectra[grid_linear(&next, n)];
            for (a, b) in spectra[lin].iter().zip(other) {
                max_band_jump = max_band_jump.max((a - b).abs());
            }
        }
    }
    Ok(GridDensityResult { values, n, max_band_jump })
}
