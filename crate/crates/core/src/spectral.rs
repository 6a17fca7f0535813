//! Eigendecomposition of finite adjacency matrices, distinct-eigenvalue
//! projection kernels, and the limiting density
//!
//! ```text
//! d(p, q) = Σ_s |P_{μ_s}(p, q)|²
//! ```
//!
//! where `P_{μ_s}` projects onto the eigenspace of the `s`-th distinct
//! eigenvalue. Grouping eigenvalues into distinct values is the delicate
//! step: splitting a degenerate eigenspace in two changes `d`, so clusters
//! are formed by single linkage with an absolute gap of
//! `tol · max(1, spectral radius)`.

use std::f64::consts::PI;
use std::ops::Range;

use nalgebra::{ComplexField, DMatrix, SymmetricEigen};

use crate::error::{Error, Result};
use crate::format;
use crate::graph::{Family, FiniteGraph};

pub const DEFAULT_CLUSTER_TOL: f64 = 1e-8;

/// Absolute symmetry tolerance accepted by [`eigendecompose_symmetric`].
pub const SYMMETRY_TOL: f64 = 1e-12;

/// Absolute gap used to separate clusters of `values`.
pub fn cluster_gap(values: &[f64], tol: f64) -> f64 {
    let radius = values.iter().fold(0.0f64, |acc, v| acc.max(v.abs()));
    tol * radius.max(1.0)
}

/// Single-linkage clustering of ascending `sorted` values: a new cluster
/// starts wherever consecutive values differ by more than `gap`.
pub fn cluster_sorted(sorted: &[f64], gap: f64) -> Vec<Range<usize>> {
    let mut clusters = Vec::new();
    let mut start = 0;
    for i in 1..sorted.len() {
        if sorted[i] - sorted[i - 1] > gap {
            clusters.push(start..i);
            start = i;
        }
    }
    if !sorted.is_empty() {
        clusters.push(start..sorted.len());
    }
    clusters
}

/// Ascending eigenvalues and matching eigenvector columns of a Hermitian
/// matrix. The iteration cap is `100·n` implicit QR steps.
pub(crate) fn sorted_eigen<T: ComplexField<RealField = f64>>(m: DMatrix<T>) -> Result<(Vec<f64>, DMatrix<T>)> {
    let n = m.nrows();
    let cap = 100 * n.max(1);
    let eig = SymmetricEigen::try_new(m, f64::EPSILON, cap).ok_or(Error::NoConvergence(cap))?;
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&a, &b| eig.eigenvalues[a].total_cmp(&eig.eigenvalues[b]));
    let values = order.iter().map(|&i| eig.eigenvalues[i]).collect();
    let vectors = DMatrix::from_fn(n, n, |r, c| eig.eigenvectors[(r, order[c])].clone());
    Ok((values, vectors))
}

#[derive(Debug, Clone, PartialEq)]
pub struct SpectralDecomposition {
    eigenvalues: Vec<f64>,
    eigenvectors: DMatrix<f64>,
    clusters: Vec<Range<usize>>,
    cluster_values: Vec<f64>,
}

impl SpectralDecomposition {
    /// Assembles a decomposition from ascending eigenvalues, orthonormal
    /// eigenvector columns, and a partition of `0..n` into consecutive
    /// clusters. Each cluster's value is the mean of its members.
    pub fn from_parts(eigenvalues: Vec<f64>, eigenvectors: DMatrix<f64>, clusters: Vec<Range<usize>>) -> Result<Self> {
        let n = eigenvalues.len();
        if eigenvectors.nrows() != n || eigenvectors.ncols() != n {
            return Err(Error::LengthMismatch(eigenvectors.nrows(), n));
        }
        if eigenvalues.windows(2).any(|w| w[0] > w[1]) {
            return Err(Error::InvalidParameter("eigenvalues must be ascending".into()));
        }
        let mut next = 0;
        for c in &clusters {
            if c.start != next || c.end <= c.start {
                return Err(Error::InvalidParameter("clusters must partition 0..n in order".into()));
            }
            next = c.end;
        }
        if next != n {
            return Err(Error::InvalidParameter("clusters must cover every eigenvalue".into()));
        }
        let cluster_values = clusters
            .iter()
            .map(|c| eigenvalues[c.clone()].iter().sum::<f64>() / c.len() as f64)
            .collect();
        Ok(Self { eigenvalues, eigenvectors, clusters, cluster_values })
    }

    pub fn dim(&self) -> usize {
        self.eigenvalues.len()
    }

    pub fn eigenvalues(&self) -> &[f64] {
        &self.eigenvalues
    }

    /// Orthonormal eigenvectors as columns, in eigenvalue order.
    pub fn eigenvectors(&self) -> &DMatrix<f64> {
        &self.eigenvectors
    }

    pub fn clusters(&self) -> &[Range<usize>] {
        &self.clusters
    }

    /// One representative value per cluster (the mean of its members).
    pub fn cluster_values(&self) -> &[f64] {
        &self.cluster_values
    }

    /// Number of distinct eigenvalues, `ν'`.
    pub fn distinct_count(&self) -> usize {
        self.clusters.len()
    }

    pub fn multiplicities(&self) -> Vec<usize> {
        self.clusters.iter().map(|c| c.len()).collect()
    }

    /// Eigenvalues with every member of a cluster snapped to the cluster value.
    pub fn snapped_eigenvalues(&self) -> Vec<f64> {
        let mut out = vec![0.0; self.dim()];
        for (c, &v) in self.clusters.iter().zip(&self.cluster_values) {
            out[c.clone()].fill(v);
        }
        out
    }

    /// Cluster index of each eigenvalue.
    pub fn cluster_of(&self) -> Vec<usize> {
        let mut out = vec![0; self.dim()];
        for (k, c) in self.clusters.iter().enumerate() {
            out[c.clone()].fill(k);
        }
        out
    }

    /// `max |M − V Λ Vᵀ|`.
    pub fn reconstruction_error(&self, m: &DMatrix<f64>) -> f64 {
        let v = &self.eigenvectors;
        let lambda = DMatrix::from_diagonal(&nalgebra::DVector::from_column_slice(&self.eigenvalues));
        (m - v * lambda * v.transpose()).amax()
    }

    /// `max |VᵀV − I|`.
    pub fn orthonormality_error(&self) -> f64 {
        let v = &self.eigenvectors;
        (v.transpose() * v - DMatrix::identity(self.dim(), self.dim())).amax()
    }
}

/// Eigendecomposition of a real symmetric matrix with eigenvalues clustered
/// at `tol · max(1, spectral radius)`.
pub fn eigendecompose_symmetric(m: &DMatrix<f64>, tol: f64) -> Result<SpectralDecomposition> {
    if !m.is_square() {
        return Err(Error::LengthMismatch(m.nrows(), m.ncols()));
    }
    let asym = (m - m.transpose()).amax();
    if asym > SYMMETRY_TOL {
        return Err(Error::NotSymmetric(asym));
    }
    let (values, vectors) = sorted_eigen(m.clone())?;
    let clusters = cluster_sorted(&values, cluster_gap(&values, tol));
    SpectralDecomposition::from_parts(values, vectors, clusters)
}

/// Orthogonal projector onto the eigenspace of one distinct eigenvalue.
#[derive(Debug, Clone, PartialEq)]
pub struct ProjectionKernel {
    pub matrix: DMatrix<f64>,
    pub cluster_value: f64,
    pub multiplicity: usize,
}

impl ProjectionKernel {
    /// `max |P² − P|`.
    pub fn idempotence_error(&self) -> f64 {
        (&self.matrix * &self.matrix - &self.matrix).amax()
    }

    pub fn symmetry_error(&self) -> f64 {
        (&self.matrix - self.matrix.transpose()).amax()
    }

    pub fn trace(&self) -> f64 {
        self.matrix.trace()
    }
}

/// `P_s = Σ_{j ∈ cluster s} w_j w_jᵀ`, one kernel per cluster.
pub fn projection_kernels(dec: &SpectralDecomposition) -> Vec<ProjectionKernel> {
    dec.clusters
        .iter()
        .zip(&dec.cluster_values)
        .map(|(c, &value)| {
            let block = dec.eigenvectors.columns(c.start, c.len());
            ProjectionKernel {
                matrix: block * block.transpose(),
                cluster_value: value,
                multiplicity: c.len(),
            }
        })
        .collect()
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum DensitySource {
    /// Numerical eigendecomposition of the finite graph.
    Numeric,
    /// Explicit density formulas.
    ClosedForm,
    /// Eigenpairs written down from the known spectrum of a named family.
    Analytic,
    /// Uniform Brillouin-zone grid average.
    Quadrature,
}

impl DensitySource {
    pub fn tag(self) -> &'static str {
        match self {
            DensitySource::Numeric => "numeric",
            DensitySource::ClosedForm => "closed-form",
            DensitySource::Analytic => "analytic",
            DensitySource::Quadrature => "quadrature",
        }
    }

    fn from_tag(tag: &str) -> Option<Self> {
        [Self::Numeric, Self::ClosedForm, Self::Analytic, Self::Quadrature]
            .into_iter()
            .find(|s| s.tag() == tag)
    }
}

/// Limiting weights `d(p, q)`: row `p` is the distribution, relative to
/// uniform, of a walk started at fundamental vertex `p` over the layers `q`.
#[derive(Debug, Clone, PartialEq)]
pub struct DensityMatrix {
    values: DMatrix<f64>,
    source: DensitySource,
}

impl DensityMatrix {
    pub fn new(values: DMatrix<f64>, source: DensitySource) -> Self {
        assert!(values.is_square(), "density matrix must be square");
        Self { values, source }
    }

    pub fn nu(&self) -> usize {
        self.values.nrows()
    }

    pub fn get(&self, p: usize, q: usize) -> f64 {
        self.values[(p, q)]
    }

    pub fn values(&self) -> &DMatrix<f64> {
        &self.values
    }

    pub fn source(&self) -> DensitySource {
        self.source
    }

    pub fn row_sums(&self) -> Vec<f64> {
        self.values.row_iter().map(|r| r.sum()).collect()
    }

    /// Largest `|Σ_q d(p,q) − 1|` over rows.
    pub fn row_sum_error(&self) -> f64 {
        self.row_sums().iter().fold(0.0f64, |acc, s| acc.max((s - 1.0).abs()))
    }

    pub fn symmetry_error(&self) -> f64 {
        (&self.values - self.values.transpose()).amax()
    }

    /// Largest entrywise difference to `other`.
    pub fn max_abs_diff(&self, other: &DensityMatrix) -> f64 {
        (&self.values - &other.values).amax()
    }

    /// `{"nu": ν, "source": tag, "d": [[…], …]}` with 17 significant digits.
    pub fn to_json(&self) -> String {
        let rows: Vec<String> = self
            .values
            .row_iter()
            .map(|r| {
                let cells: Vec<String> = r.iter().map(|&x| format::json(x)).collect();
                format!("[{}]", cells.join(","))
            })
            .collect();
        format!(
            "{{\"nu\":{},\"source\":\"{}\",\"d\":[{}]}}",
            self.nu(),
            self.source.tag(),
            rows.join(",")
        )
    }

    pub fn from_json(text: &str) -> Result<Self> {
        let bad = |m: &str| Error::Json(m.to_string());
        let v: serde_json::Value = serde_json::from_str(text).map_err(|e| Error::Json(e.to_string()))?;
        let nu = v["nu"].as_u64().ok_or_else(|| bad("missing `nu`"))? as usize;
        let source = v["source"]
            .as_str()
            .and_then(DensitySource::from_tag)
            .ok_or_else(|| bad("missing or unknown `source`"))?;
        let rows = v["d"].as_array().ok_or_else(|| bad("missing `d`"))?;
        if rows.len() != nu {
            return Err(Error::LengthMismatch(rows.len(), nu));
        }
        let mut values = DMatrix::zeros(nu, nu);
        for (p, row) in rows.iter().enumerate() {
            let row = row.as_array().ok_or_else(|| bad("row is not an array"))?;
            if row.len() != nu {
                return Err(Error::LengthMismatch(row.len(), nu));
            }
            for (q, x) in row.iter().enumerate() {
                values[(p, q)] = x.as_f64().ok_or_else(|| bad("entry is not a number"))?;
            }
        }
        Ok(Self { values, source })
    }

    /// `p,q,d` table with vertices in the graph's external labelling.
    pub fn to_csv(&self, graph: &FiniteGraph) -> String {
        let mut out = String::from("p,q,d\n");
        for p in 0..self.nu() {
            for q in 0..self.nu() {
                out.push_str(&format!("{},{},{}\n", graph.label(p), graph.label(q), format::table(self.get(p, q))));
            }
        }
        out
    }
}

/// `d(p,q) = Σ_s P_s(p,q)²` from a set of kernels.
pub fn density_from_kernels(kernels: &[ProjectionKernel], source: DensitySource) -> DensityMatrix {
    let n = kernels.first().map_or(0, |k| k.matrix.nrows());
    let mut d = DMatrix::zeros(n, n);
    for k in kernels {
        d += k.matrix.component_mul(&k.matrix);
    }
    DensityMatrix::new(d, source)
}

pub fn density_from_decomposition(dec: &SpectralDecomposition, source: DensitySource) -> DensityMatrix {
    density_from_kernels(&projection_kernels(dec), source)
}

/// Limiting density of `Γ_0 □ G` computed from a numerical
/// eigendecomposition of `G`.
pub fn limiting_density(graph: &FiniteGraph, tol: f64) -> Result<DensityMatrix> {
    let dec = eigendecompose_symmetric(&graph.adjacency(), tol)?;
    Ok(density_from_decomposition(&dec, DensitySource::Numeric))
}

/// Exact spectrum of a named family, with eigenvectors written down from
/// the family's symmetry rather than computed:
///
/// * cycle: `2cos(2πr/ν)`, real cosine/sine Fourier modes;
/// * path: `2cos(πj/(ν+1))`, sine modes;
/// * star: `0` with multiplicity `ν−1` and `±√ν`;
/// * hypercube: `m − 2k` with multiplicity `C(m,k)`, characters `(−1)^{r·x}/2^{m/2}`.
///
/// Clusters come from the known multiplicity structure, not from a tolerance.
pub fn analytic_spectrum(family: Family) -> Result<SpectralDecomposition> {
    family.validate()?;
    // (value, cluster key, eigenvector)
    let mut modes: Vec<(f64, i64, Vec<f64>)> = Vec::new();
    match family {
        Family::Cycle(nu) => {
            let n = nu as f64;
            let norm = (2.0 / n).sqrt();
            for r in 0..=nu / 2 {
                let value = 2.0 * (2.0 * PI * r as f64 / n).cos();
                if r == 0 || 2 * r == nu {
                    let sign = |x: usize| if r == 0 || x.is_multiple_of(2) { 1.0 } else { -1.0 };
                    modes.push((value, r as i64, (0..nu).map(|x| sign(x) / n.sqrt()).collect()));
                } else {
                    let angle = |x: usize| 2.0 * PI * (r * x % nu) as f64 / n;
                    modes.push((value, r as i64, (0..nu).map(|x| norm * angle(x).cos()).collect()));
                    modes.push((value, r as i64, (0..nu).map(|x| norm * angle(x).sin()).collect()));
                }
            }
        }
        Family::Path(nu) => {
            let h = (nu + 1) as f64;
            let norm = (2.0 / h).sqrt();
            for j in 1..=nu {
                let value = 2.0 * (PI * j as f64 / h).cos();
                let vector = (1..=nu).map(|l| norm * (PI * (j * l % (2 * (nu + 1))) as f64 / h).sin()).collect();
                modes.push((value, j as i64, vector));
            }
        }
        Family::Star(nu) => {
            let n = nu as f64;
            let leaf = 1.0 / (2.0 * n).sqrt();
            let centre = 1.0 / 2f64.sqrt();
            for sign in [-1.0, 1.0] {
                let mut vector = vec![sign * leaf; nu];
                vector.push(centre);
                modes.push((sign * n.sqrt(), sign as i64, vector));
            }
            // leaf-supported modes orthogonal to the all-ones vector: the
            // non-constant real Fourier modes of C_ν, padded with a zero centre
            let norm = (2.0 / n).sqrt();
            for r in 1..=nu / 2 {
                let angle = |x: usize| 2.0 * PI * (r * x % nu) as f64 / n;
                let padded = |f: &dyn Fn(usize) -> f64| {
                    let mut v: Vec<f64> = (0..nu).map(f).collect();
                    v.push(0.0);
                    v
                };
                if 2 * r == nu {
                    modes.push((0.0, 0, padded(&|x| (if x % 2 == 0 { 1.0 } else { -1.0 }) / n.sqrt())));
                } else {
                    modes.push((0.0, 0, padded(&|x| norm * angle(x).cos())));
                    modes.push((0.0, 0, padded(&|x| norm * angle(x).sin())));
                }
            }
        }
        Family::Hypercube(m) => {
            let count = 1usize << m;
            let norm = 1.0 / (count as f64).sqrt();
            for r in 0..count {
                let k = r.count_ones();
                let value = m as f64 - 2.0 * k as f64;
                let vector = (0..count)
                    .map(|x| if (r & x).count_ones() % 2 == 0 { norm } else { -norm })
                    .collect();
                modes.push((value, k as i64, vector));
            }
        }
        other => {
            return Err(Error::Unsupported(format!("no analytic spectrum for {other}")));
        }
    }
    modes.sort_by(|a, b| a.0.total_cmp(&b.0).then(a.1.cmp(&b.1)));
    let n = modes.len();
    let mut clusters = Vec::new();
    let mut start = 0;
    for i in 1..=n {
        if i == n || modes[i].1 != modes[start].1 {
            clusters.push(start..i);
            start = i;
        }
    }
    let eigenvalues = modes.iter().map(|m| m.0).collect();
    let eigenvectors = DMatrix::from_fn(n, n, |row, col| modes[col].2[row]);
    SpectralDecomposition::from_parts(eigenvalues, eigenvectors, clusters)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::Family;
    use approx::assert_abs_diff_eq;
    use proptest::prelude::*;

    fn graph(f: Family) -> FiniteGraph {
        FiniteGraph::named(f).unwrap()
    }

    #[test]
    fn p2_has_two_simple_eigenvalues() {
        let dec = eigendecompose_symmetric(&graph(Family::Path(2)).adjacency(), DEFAULT_CLUSTER_TOL).unwrap();
        assert_abs_diff_eq!(dec.eigenvalues()[0], -1.0, epsilon = 1e-14);
        assert_abs_diff_eq!(dec.eigenvalues()[1], 1.0, epsilon = 1e-14);
        assert_eq!(dec.distinct_count(), 2);
    }

    #[test]
    fn c5_clusters() {
        let dec = eigendecompose_symmetric(&graph(Family::Cycle(5)).adjacency(), DEFAULT_CLUSTER_TOL).unwrap();
        assert_eq!(dec.multiplicities(), vec![2, 2, 1]);
        let expect = [4.0 * PI / 5.0, 2.0 * PI / 5.0, 0.0].map(|a: f64| 2.0 * a.cos());
        for (got, want) in dec.cluster_values().iter().zip(expect) {
            assert_abs_diff_eq!(*got, want, epsilon = 1e-13);
        }
    }

    #[test]
    fn star_three_spectrum() {
        let dec = eigendecompose_symmetric(&graph(Family::Star(3)).adjacency(), DEFAULT_CLUSTER_TOL).unwrap();
        assert_eq!(dec.multiplicities(), vec![1, 2, 1]);
        let s3 = 3f64.sqrt();
        for (got, want) in dec.cluster_values().iter().zip([-s3, 0.0, s3]) {
            assert_abs_diff_eq!(*got, want, epsilon = 1e-13);
        }
    }

    #[test]
    fn rejects_non_symmetric() {
        let m = DMatrix::from_row_slice(2, 2, &[0.0, 1.0, 0.5, 0.0]);
        assert!(matches!(eigendecompose_symmetric(&m, 1e-8), Err(Error::NotSymmetric(_))));
    }

    #[test]
    fn single_linkage_chains_close_values() {
        let v = [0.0, 0.4e-8, 0.8e-8, 1.0, 1.0 + 2e-8];
        assert_eq!(cluster_sorted(&v, 0.5e-8), vec![0..3, 3..4, 4..5]);
        assert_eq!(cluster_sorted(&v, 1e-7), vec![0..3, 3..5]);
        assert!(cluster_sorted(&[], 1.0).is_empty());
    }

    #[test]
    fn kernel_examples() {
        let c5 = eigendecompose_symmetric(&graph(Family::Cycle(5)).adjacency(), DEFAULT_CLUSTER_TOL).unwrap();
        let top = projection_kernels(&c5).pop().unwrap();
        assert_abs_diff_eq!(top.cluster_value, 2.0, epsilon = 1e-13);
        for x in top.matrix.iter() {
            assert_abs_diff_eq!(*x, 0.2, epsilon = 1e-13);
        }

        let star = eigendecompose_symmetric(&graph(Family::Star(3)).adjacency(), DEFAULT_CLUSTER_TOL).unwrap();
        let zero = &projection_kernels(&star)[1];
        assert_abs_diff_eq!(zero.cluster_value, 0.0, epsilon = 1e-13);
        assert_abs_diff_eq!(zero.matrix[(0, 0)], 2.0 / 3.0, epsilon = 1e-13);
    }

    #[test]
    fn named_golden_densities() {
        let pet = limiting_density(&graph(Family::Petersen), DEFAULT_CLUSTER_TOL).unwrap();
        let g = graph(Family::Petersen);
        for p in 0..10 {
            for q in 0..10 {
                let want = if p == q {
                    21.0 / 50.0
                } else if g.is_adjacent(p, q) {
                    49.0 / 450.0
                } else {
                    19.0 / 450.0
                };
                assert_abs_diff_eq!(pet.get(p, q), want, epsilon = 1e-12);
            }
        }
        let k4 = limiting_density(&graph(Family::Complete(4)), DEFAULT_CLUSTER_TOL).unwrap();
        assert_abs_diff_eq!(k4.get(2, 2), 5.0 / 8.0, epsilon = 1e-12);
        let cube = limiting_density(&graph(Family::Hypercube(3)), DEFAULT_CLUSTER_TOL).unwrap();
        assert_abs_diff_eq!(cube.get(0, 0), 5.0 / 16.0, epsilon = 1e-12);
        assert_abs_diff_eq!(cube.get(0, 1), 1.0 / 16.0, epsilon = 1e-12);
        assert_abs_diff_eq!(cube.get(0, 7), 5.0 / 16.0, epsilon = 1e-12);
    }

    #[test]
    fn analytic_spectra_are_eigenpairs() {
        for family in [
            Family::Cycle(3),
            Family::Cycle(8),
            Family::Cycle(11),
            Family::Path(2),
            Family::Path(7),
            Family::Star(1),
            Family::Star(6),
            Family::Star(7),
            Family::Hypercube(1),
            Family::Hypercube(5),
        ] {
            let a = graph(family).adjacency();
            let dec = analytic_spectrum(family).unwrap();
            assert!(dec.orthonormality_error() < 1e-12, "{family}");
            assert!(dec.reconstruction_error(&a) < 1e-12, "{family}");
        }
    }

    #[test]
    fn analytic_spectrum_examples() {
        let path = analytic_spectrum(Family::Path(6)).unwrap();
        assert_eq!(path.multiplicities(), vec![1; 6]);
        for (i, v) in path.eigenvalues().iter().enumerate() {
            let j = 6 - i;
            assert_abs_diff_eq!(*v, 2.0 * (PI * j as f64 / 7.0).cos(), epsilon = 1e-15);
        }
        let h4 = analytic_spectrum(Family::Hypercube(4)).unwrap();
        assert_eq!(h4.cluster_values(), &[-4.0, -2.0, 0.0, 2.0, 4.0]);
        assert_eq!(h4.multiplicities(), vec![1, 4, 6, 4, 1]);
        let star = analytic_spectrum(Family::Star(10)).unwrap();
        assert_eq!(star.multiplicities(), vec![1, 9, 1]);
        assert_eq!(star.cluster_values()[1], 0.0);
        assert!(matches!(analytic_spectrum(Family::Petersen), Err(Error::Unsupported(_))));
    }

    #[test]
    fn numeric_and_analytic_densities_agree() {
        for family in [Family::Cycle(12), Family::Path(9), Family::Star(8), Family::Hypercube(4)] {
            let numeric = limiting_density(&graph(family), DEFAULT_CLUSTER_TOL).unwrap();
            let analytic = density_from_decomposition(&analytic_spectrum(family).unwrap(), DensitySource::Analytic);
            assert!(numeric.max_abs_diff(&analytic) < 1e-9, "{family}");
        }
    }

    #[test]
    fn cycle_density_is_circulant() {
        let d = limiting_density(&graph(Family::Cycle(10)), DEFAULT_CLUSTER_TOL).unwrap();
        for p in 0..10 {
            for q in 0..10 {
                assert_abs_diff_eq!(d.get(p, q), d.get(0, (q + 10 - p) % 10), epsilon = 1e-12);
            }
        }
    }

    #[test]
    fn json_round_trip_and_schema() {
        let d = limiting_density(&graph(Family::Star(3)), DEFAULT_CLUSTER_TOL).unwrap();
        let text = d.to_json();
        let v: serde_json::Value = serde_json::from_str(&text).unwrap();
        assert_eq!(v["nu"], 4);
        assert_eq!(v["source"], "numeric");
        assert_eq!(v["d"].as_array().unwrap().len(), 4);
        assert_eq!(DensityMatrix::from_json(&text).unwrap(), d);
        assert!(DensityMatrix::from_json("{\"nu\":1}").is_err());
    }

    #[test]
    fn csv_uses_external_labels() {
        let g = graph(Family::Star(2));
        let d = limiting_density(&g, DEFAULT_CLUSTER_TOL).unwrap();
        let csv = d.to_csv(&g);
        assert!(csv.starts_with("p,q,d\n1,1,"));
        assert!(csv.lines().any(|l| l.starts_with("3,3,0.5")), "{csv}");
    }

    fn random_graph() -> impl Strategy<Value = FiniteGraph> {
        (2usize..16).prop_flat_map(|n| {
            proptest::collection::vec((0..n, 0..n), 1..40).prop_filter_map("need a non-loop edge", move |pairs| {
                let edges: Vec<_> = pairs.into_iter().filter(|(u, v)| u != v).collect();
                (!edges.is_empty()).then(|| FiniteGraph::new(n, edges).unwrap())
            })
        })
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(48))]

        #[test]
        fn kernels_form_a_resolution_of_identity(g in random_graph()) {
            let dec = eigendecompose_symmetric(&g.adjacency(), DEFAULT_CLUSTER_TOL).unwrap();
            prop_assert!(dec.orthonormality_error() < 1e-10);
            prop_assert!(dec.reconstruction_error(&g.adjacency()) < 1e-9 * dec.eigenvalues().iter().fold(1.0f64, |a, v| a.max(v.abs())));
            let kernels = projection_kernels(&dec);
            let n = g.vertex_count();
            let mut sum = DMatrix::zeros(n, n);
            for (s, k) in kernels.iter().enumerate() {
                prop_assert!(k.idempotence_error() < 1e-10);
                prop_assert!(k.symmetry_error() < 1e-12);
                prop_assert!((k.trace() - k.multiplicity as f64).abs() < 1e-8);
                for other in &kernels[s + 1..] {
                    prop_assert!((&k.matrix * &other.matrix).amax() < 1e-10);
                }
                sum += &k.matrix;
            }
            prop_assert!((sum - DMatrix::identity(n, n)).amax() < 1e-10);

            let d = density_from_kernels(&kernels, DensitySource::Numeric);
            prop_assert!(d.row_sum_error() < 1e-10);
            prop_assert!(d.symmetry_error() < 1e-12);
            prop_assert!(d.values().iter().all(|&x| (-1e-15..=1.0 + 1e-12).contains(&x)));
        }
    }
}
