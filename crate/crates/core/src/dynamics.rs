//! Continuous-time quantum walk on the torus `Γ_N = C_N^d □ G`.
//!
//! The adjacency of `Γ_N` is diagonalised in closed form: eigenvalues
//! `λ_{r,j} = 2Σ_i cos(2π r_i/N) + μ_j` with eigenvectors
//! `e^{2πi r·k/N} / N^{d/2} ⊗ w_j`, where `(μ_j, w_j)` are the eigenpairs of
//! `G`. Vertex `(k, q)` (cell `k`, fundamental vertex `q`) is stored at
//! index `lin(k)·ν + q`, with the first cell axis slowest.
//!
//! Cosines are evaluated at `min(r, N − r)` so the `r ↔ N − r` degeneracies
//! are bitwise exact; the finite-graph eigenvalues are snapped to their
//! cluster values for the same reason.

use std::f64::consts::PI;
use std::sync::Arc;

use num_complex::Complex64;
use rayon::prelude::*;
use rustfft::{Fft, FftPlanner};

use crate::error::{Error, Result};
use crate::floquet::{grid_linear, grid_point};
use crate::format;
use crate::graph::FiniteGraph;
use crate::spectral::{self, cluster_gap, cluster_sorted, DensityMatrix, SpectralDecomposition};

/// Largest torus handled, in vertices.
pub const MAX_TORUS_VERTICES: usize = 1 << 20;

/// Gap (relative to the spectral radius) below which two torus eigenvalues
/// are treated as equal in the finite-time average.
const EXACT_DEGENERACY_TOL: f64 = 1e-12;

/// A vertex of the torus: lattice cell and fundamental index.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Site {
    pub cell: Vec<usize>,
    pub p: usize,
}

impl Site {
    pub fn new(cell: Vec<usize>, p: usize) -> Self {
        Self { cell, p }
    }

    /// Fundamental vertex `p` in the origin cell.
    pub fn origin(dim: usize, p: usize) -> Self {
        Self { cell: vec![0; dim], p }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Horizon {
    Finite(f64),
    Infinite,
}

/// Adjacency of `C_N^d □ G` in factorised eigen-form.
#[derive(Debug, Clone)]
pub struct TorusOperator {
    graph: FiniteGraph,
    dim: usize,
    n: usize,
    spectrum: SpectralDecomposition,
    mu: Vec<f64>,
    base: Vec<f64>,
}

impl TorusOperator {
    pub fn graph(&self) -> &FiniteGraph {
        &self.graph
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    /// Cells per axis.
    pub fn n(&self) -> usize {
        self.n
    }

    pub fn nu(&self) -> usize {
        self.graph.vertex_count()
    }

    pub fn cell_count(&self) -> usize {
        self.base.len()
    }

    pub fn vertex_count(&self) -> usize {
        self.cell_count() * self.nu()
    }

    pub fn spectrum(&self) -> &SpectralDecomposition {
        &self.spectrum
    }

    pub fn index(&self, site: &Site) -> usize {
        grid_linear(&site.cell, self.n) * self.nu() + site.p
    }

    pub fn site(&self, index: usize) -> Site {
        Site { cell: grid_point(index / self.nu(), self.n, self.dim), p: index % self.nu() }
    }

    /// `λ_{r,j}` for cell momentum `r` (linear index) and band `j`.
    pub fn eigenvalue(&self, r: usize, j: usize) -> f64 {
        self.base[r] + self.mu[j]
    }

    /// All eigenvalues, in vertex-index layout `(r, j) ↦ r·ν + j`.
    pub fn eigenvalues(&self) -> Vec<f64> {
        self.base.iter().flat_map(|b| self.mu.iter().map(move |m| b + m)).collect()
    }

    pub fn spectral_radius(&self) -> f64 {
        2.0 * self.dim as f64 + self.mu.iter().fold(0.0f64, |a, m| a.max(m.abs()))
    }

    fn check_site(&self, site: &Site) -> Result<()> {
        if site.cell.len() != self.dim {
            return Err(Error::LengthMismatch(site.cell.len(), self.dim));
        }
        if let Some(&c) = site.cell.iter().find(|&&c| c >= self.n) {
            return Err(Error::VertexOutOfRange { vertex: c, count: self.n });
        }
        if site.p >= self.nu() {
            return Err(Error::VertexOutOfRange { vertex: site.p, count: self.nu() });
        }
        Ok(())
    }

    /// `w_j(q)·w_j(p)` for all `j`, `q`, laid out `j·ν + q`.
    fn overlaps(&self, p: usize) -> Vec<f64> {
        let w = self.spectrum.eigenvectors();
        let nu = self.nu();
        (0..nu).flat_map(|j| (0..nu).map(move |q| w[(q, j)] * w[(p, j)])).collect()
    }

    /// `r·(k − n) mod N`.
    fn phase_index(&self, r: &[usize], k: &[usize], start: &[usize]) -> usize {
        let n = self.n;
        r.iter()
            .zip(k.iter().zip(start))
            .map(|(&ri, (&ki, &si))| ri * ((ki + n - si) % n) % n)
            .sum::<usize>()
            % n
    }

    /// Applies the adjacency through its eigen-factorisation (FFT over cells,
    /// projection onto the `w_j`).
    pub fn apply(&self, x: &[Complex64]) -> Result<Vec<Complex64>> {
        let m = self.vertex_count();
        if x.len() != m {
            return Err(Error::LengthMismatch(x.len(), m));
        }
        let nu = self.nu();
        let cells = self.cell_count();
        let w = self.spectrum.eigenvectors();
        let mut planner = FftPlanner::new();
        let forward = planner.plan_fft_forward(self.n);
        let inverse = planner.plan_fft_inverse(self.n);

        let mut layers: Vec<Vec<Complex64>> = (0..nu).map(|q| (0..cells).map(|c| x[c * nu + q]).collect()).collect();
        for layer in &mut layers {
            fft_cells(layer, self.n, self.dim, &forward);
        }
        let mut out_layers = vec![vec![Complex64::new(0.0, 0.0); cells]; nu];
        for r in 0..cells {
            for j in 0..nu {
                let coef: Complex64 = (0..nu).map(|q| layers[q][r] * w[(q, j)]).sum();
                let scaled = coef * self.eigenvalue(r, j);
                for q in 0..nu {
                    out_layers[q][r] += scaled * w[(q, j)];
                }
            }
        }
        let norm = 1.0 / cells as f64;
        let mut out = vec![Complex64::new(0.0, 0.0); m];
        for (q, layer) in out_layers.iter_mut().enumerate() {
            fft_cells(layer, self.n, self.dim, &inverse);
            for c in 0..cells {
                out[c * nu + q] = layer[c] * norm;
            }
        }
        Ok(out)
    }

    /// The torus as an explicit finite graph, vertices in the operator's layout.
    pub fn product_graph(&self) -> Result<FiniteGraph> {
        let nu = self.nu();
        let mut edges = Vec::new();
        for c in 0..self.cell_count() {
            let cell = grid_point(c, self.n, self.dim);
            for axis in 0..self.dim {
                let mut next = cell.clone();
                next[axis] = (next[axis] + 1) % self.n;
                let c2 = grid_linear(&next, self.n);
                for q in 0..nu {
                    edges.push((c * nu + q, c2 * nu + q));
                }
            }
            for &(u, v) in self.graph.edges() {
                edges.push((c * nu + u, c * nu + v));
            }
        }
        FiniteGraph::new(self.vertex_count(), edges)
    }
}

/// In-place unnormalised DFT of a row-major `n^dim` array along every axis.
fn fft_cells(data: &mut [Complex64], n: usize, dim: usize, fft: &Arc<dyn Fft<f64>>) {
    let mut line = vec![Complex64::new(0.0, 0.0); n];
    for axis in 0..dim {
        let stride = n.pow((dim - 1 - axis) as u32);
        for base in 0..data.len() {
            if !(base / stride).is_multiple_of(n) {
                continue;
            }
            for (i, slot) in line.iter_mut().enumerate() {
                *slot = data[base + i * stride];
            }
            fft.process(&mut line);
            for (i, v) in line.iter().enumerate() {
                data[base + i * stride] = *v;
            }
        }
    }
}

fn cycle_cos(r: usize, n: usize) -> f64 {
    let folded = r.min(n - r);
    2.0 * (2.0 * PI * folded as f64 / n as f64).cos()
}

/// Builds the torus `C_N^d □ G` for `N ≥ 3`.
pub fn build_torus(graph: &FiniteGraph, dim: usize, n: usize) -> Result<TorusOperator> {
    if dim == 0 {
        return Err(Error::InvalidParameter("torus needs d ≥ 1".into()));
    }
    if n < 3 {
        return Err(Error::InvalidParameter("torus needs N ≥ 3".into()));
    }
    let cells = u32::try_from(dim)
        .ok()
        .and_then(|d| n.checked_pow(d))
        .filter(|&c| c <= MAX_TORUS_VERTICES)
        .ok_or(Error::SizeBudget(usize::MAX))?;
    let total = cells * graph.vertex_count();
    if total > MAX_TORUS_VERTICES {
        return Err(Error::SizeBudget(total));
    }
    let spectrum = spectral::eigendecompose_symmetric(&graph.adjacency(), spectral::DEFAULT_CLUSTER_TOL)?;
    let mu = spectrum.snapped_eigenvalues();
    let base = (0..cells)
        .map(|c| grid_point(c, n, dim).iter().map(|&r| cycle_cos(r, n)).sum())
        .collect();
    Ok(TorusOperator { graph: graph.clone(), dim, n, spectrum, mu, base })
}

/// `e^{itA_N} δ_start`.
///
/// The propagator factorises as `U_cycle(t)^{⊗d} ⊗ e^{itA_G}`; the cycle
/// factor is one inverse FFT of `e^{2it cos(2πr/N)}`.
pub fn evolve(op: &TorusOperator, start: &Site, t: f64) -> Result<Vec<Complex64>> {
    op.check_site(start)?;
    if !t.is_finite() {
        return Err(Error::InvalidParameter("evolution time must be finite".into()));
    }
    let m = op.vertex_count();
    let nu = op.nu();
    let mut out = vec![Complex64::new(0.0, 0.0); m];
    if t == 0.0 {
        out[op.index(start)] = Complex64::new(1.0, 0.0);
        return Ok(out);
    }
    let n = op.n;
    let mut line: Vec<Complex64> = (0..n).map(|r| Complex64::from_polar(1.0, t * cycle_cos(r, n))).collect();
    FftPlanner::new().plan_fft_inverse(n).process(&mut line);
    let cycle: Vec<Complex64> = line.iter().map(|z| z / n as f64).collect();

    let w = op.spectrum.eigenvectors();
    let finite: Vec<Complex64> = (0..nu)
        .map(|q| (0..nu).map(|j| Complex64::from_polar(w[(q, j)] * w[(start.p, j)], t * op.mu[j])).sum())
        .collect();
    for c in 0..op.cell_count() {
        let cell = grid_point(c, n, op.dim);
        let amp: Complex64 = cell
            .iter()
            .zip(&start.cell)
            .map(|(&k, &s)| cycle[(k + n - s) % n])
            .product();
        for q in 0..nu {
            out[c * nu + q] = amp * finite[q];
        }
    }
    Ok(out)
}

/// Time-averaged (or infinite-time) occupation of every torus vertex.
#[derive(Debug, Clone, PartialEq)]
pub struct TimeAveragedDistribution {
    pub values: Vec<f64>,
    pub horizon: Horizon,
    pub start: Site,
}

impl TimeAveragedDistribution {
    pub fn total(&self) -> f64 {
        self.values.iter().sum()
    }

    /// `Σ_q μ(k, q)` for every cell `k`.
    pub fn cell_masses(&self, nu: usize) -> Vec<f64> {
        self.values.chunks(nu).map(|c| c.iter().sum()).collect()
    }

    /// `Σ_k μ(k, q)` for every fundamental vertex `q`.
    pub fn layer_masses(&self, nu: usize) -> Vec<f64> {
        let mut out = vec![0.0; nu];
        for (i, v) in self.values.iter().enumerate() {
            out[i % nu] += v;
        }
        out
    }

    /// CSV with columns `cell_0..cell_{d-1},q,mass`.
    pub fn to_csv(&self, op: &TorusOperator) -> String {
        let mut out = String::new();
        for axis in 0..op.dim() {
            out.push_str(&format!("cell_{axis},"));
        }
        out.push_str("q,mass\n");
        for (i, v) in self.values.iter().enumerate() {
            let site = op.site(i);
            for c in &site.cell {
                out.push_str(&format!("{c},"));
            }
            out.push_str(&format!("{},{}\n", op.graph().label(site.p), format::table(*v)));
        }
        out
    }
}

/// Clustered torus modes: distinct eigenvalue and member `(r, j)` pairs.
struct ModeClusters {
    values: Vec<f64>,
    members: Vec<Vec<(usize, usize)>>,
}

fn mode_clusters(op: &TorusOperator, tol: f64) -> ModeClusters {
    let nu = op.nu();
    let mut modes: Vec<(f64, usize, usize)> = (0..op.cell_count())
        .flat_map(|r| (0..nu).map(move |j| (r, j)))
        .map(|(r, j)| (op.eigenvalue(r, j), r, j))
        .collect();
    modes.sort_by(|a, b| a.0.total_cmp(&b.0).then(a.1.cmp(&b.1)).then(a.2.cmp(&b.2)));
    let sorted: Vec<f64> = modes.iter().map(|m| m.0).collect();
    let gap = tol * op.spectral_radius().max(1.0);
    let mut values = Vec::new();
    let mut members = Vec::new();
    for range in cluster_sorted(&sorted, gap) {
        values.push(sorted[range.clone()].iter().sum::<f64>() / range.len() as f64);
        members.push(modes[range].iter().map(|&(_, r, j)| (r, j)).collect());
    }
    ModeClusters { values, members }
}

/// `(P_K δ_start)(w)` for every cluster `K` at one target vertex `w`.
fn cluster_amplitudes(
    op: &TorusOperator,
    clusters: &ModeClusters,
    start: &Site,
    overlaps: &[f64],
    roots: &[Complex64],
    target: usize,
    cells: &[Vec<usize>],
) -> Vec<Complex64> {
    let nu = op.nu();
    let k = &cells[target / nu];
    let q = target % nu;
    let norm = 1.0 / op.cell_count() as f64;
    clusters
        .members
        .iter()
        .map(|members| {
            members
                .iter()
                .map(|&(r, j)| roots[op.phase_index(&cells[r], k, &start.cell)] * (overlaps[j * nu + q] * norm))
                .sum()
        })
        .collect()
}

fn roots_of_unity(n: usize) -> Vec<Complex64> {
    (0..n).map(|m| Complex64::from_polar(1.0, 2.0 * PI * m as f64 / n as f64)).collect()
}

/// `(1/T)∫_0^T e^{itΔ} dt = e^{iTΔ/2} · sinc(TΔ/2)`.
fn averaged_phase(t: f64, delta: f64) -> Complex64 {
    let half = 0.5 * t * delta;
    let sinc = if half.abs() < 1e-4 {
        1.0 - half * half / 6.0 + half.powi(4) / 120.0
    } else {
        half.sin() / half
    };
    Complex64::from_polar(sinc, half)
}

/// Exact finite-time average `(1/T)∫_0^T |(e^{itA_N}δ_start)(w)|² dt`.
///
/// Cost is `O(M·K²)` for `M` vertices and `K` distinct eigenvalues.
pub fn time_averaged(op: &TorusOperator, start: &Site, horizon_t: f64) -> Result<TimeAveragedDistribution> {
    op.check_site(start)?;
    if !(horizon_t > 0.0 && horizon_t.is_finite()) {
        return Err(Error::InvalidParameter("averaging horizon T must be positive and finite".into()));
    }
    let clusters = mode_clusters(op, EXACT_DEGENERACY_TOL);
    let kc = clusters.values.len();
    let phases: Vec<Complex64> = (0..kc * kc)
        .map(|i| averaged_phase(horizon_t, clusters.values[i / kc] - clusters.values[i % kc]))
        .collect();
    let overlaps = op.overlaps(start.p);
    let roots = roots_of_unity(op.n);
    let cells: Vec<Vec<usize>> = (0..op.cell_count()).map(|c| grid_point(c, op.n, op.dim)).collect();
    let values = (0..op.vertex_count())
        .into_par_iter()
        .map(|w| {
            let amps = cluster_amplitudes(op, &clusters, start, &overlaps, &roots, w, &cells);
            let mut acc = 0.0;
            for a in 0..kc {
                acc += amps[a].norm_sqr();
                for b in a + 1..kc {
                    acc += 2.0 * (amps[a] * amps[b].conj() * phases[a * kc + b]).re;
                }
            }
            acc
        })
        .collect();
    Ok(TimeAveragedDistribution { values, horizon: Horizon::Finite(horizon_t), start: start.clone() })
}

/// `lim_{T→∞}` of the time average: `Σ_K |(P_K δ_start)(w)|²`, with torus
/// eigenvalues clustered at `cluster_tol · max(1, spectral radius)`.
///
/// Both the exact `r ↔ N − r` degeneracies and any accidental cross-band
/// coincidences `E_0(r) + μ_j = E_0(r') + μ_j'` land in the same cluster.
pub fn infinite_time_averaged(op: &TorusOperator, start: &Site, cluster_tol: f64) -> Result<TimeAveragedDistribution> {
    op.check_site(start)?;
    let clusters = mode_clusters(op, cluster_tol);
    let overlaps = op.overlaps(start.p);
    let roots = roots_of_unity(op.n);
    let cells: Vec<Vec<usize>> = (0..op.cell_count()).map(|c| grid_point(c, op.n, op.dim)).collect();
    let values = (0..op.vertex_count())
        .into_par_iter()
        .map(|w| {
            cluster_amplitudes(op, &clusters, start, &overlaps, &roots, w, &cells)
                .iter()
                .map(|z| z.norm_sqr())
                .sum()
        })
        .collect();
    Ok(TimeAveragedDistribution { values, horizon: Horizon::Infinite, start: start.clone() })
}

/// Number of distinct torus eigenvalues at the given clustering tolerance.
pub fn distinct_eigenvalue_count(op: &TorusOperator, tol: f64) -> usize {
    let mut v = op.eigenvalues();
    v.sort_by(f64::total_cmp);
    cluster_sorted(&v, cluster_gap(&v, tol)).len()
}

/// Product-form prediction `μ(k, q) = d(p, q) / N^d`, uniform over cells.
pub fn product_prediction(op: &TorusOperator, density: &DensityMatrix, p: usize) -> Result<Vec<f64>> {
    if density.nu() != op.nu() {
        return Err(Error::LengthMismatch(density.nu(), op.nu()));
    }
    let cells = op.cell_count() as f64;
    Ok((0..op.vertex_count()).map(|i| density.get(p, i % op.nu()) / cells).collect())
}

/// `½ Σ |a_i − b_i|`.
pub fn total_variation(a: &[f64], b: &[f64]) -> Result<f64> {
    if a.len() != b.len() {
        return Err(Error::LengthMismatch(a.len(), b.len()));
    }
    Ok(0.5 * a.iter().zip(b).map(|(x, y)| (x - y).abs()).sum::<f64>())
}
