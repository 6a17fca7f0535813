//! Finite graphs, named families, and periodic-graph specifications.
//!
//! A [`FiniteGraph`] is the fundamental-domain graph `G_F`: vertices are
//! `0..n` internally, and each named family remembers how the formulas label
//! its vertices (see [`VertexLabels`]). A [`PeriodicGraphSpec`] stores only
//! the fundamental domain and the lattice offsets of its edges, never the
//! infinite graph itself.

use std::collections::BTreeSet;
use std::fmt;

use nalgebra::DMatrix;

use crate::error::{Error, Result};
use crate::floquet::{BandStructure, BaseLattice};
use crate::spectral::DEFAULT_CLUSTER_TOL;

/// How a family presents its vertices to the outside world.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum VertexLabels {
    /// `0..n`, as used for cycles and most generic graphs.
    ZeroBased,
    /// `1..=n`; paths and stars (the star centre is the last vertex, `n`).
    OneBased,
    /// Bit strings `x_1 x_2 … x_m`, bit `i` of the index is coordinate `i + 1`.
    Binary { bits: u32 },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum FamilyKind {
    Cycle,
    Path,
    Star,
    Complete,
    CompleteBipartite,
    Hypercube,
    Petersen,
}

impl FamilyKind {
    pub fn name(self) -> &'static str {
        match self {
            FamilyKind::Cycle => "cycle",
            FamilyKind::Path => "path",
            FamilyKind::Star => "star",
            FamilyKind::Complete => "complete",
            FamilyKind::CompleteBipartite => "complete-bipartite",
            FamilyKind::Hypercube => "hypercube",
            FamilyKind::Petersen => "petersen",
        }
    }
}

impl std::str::FromStr for FamilyKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Ok(match s {
            "cycle" => FamilyKind::Cycle,
            "path" => FamilyKind::Path,
            "star" => FamilyKind::Star,
            "complete" => FamilyKind::Complete,
            "complete-bipartite" | "complete_bipartite" | "bipartite" => {
                FamilyKind::CompleteBipartite
            }
            "hypercube" => FamilyKind::Hypercube,
            "petersen" => FamilyKind::Petersen,
            other => return Err(Error::InvalidParameter(format!("unknown family `{other}`"))),
        })
    }
}

/// A named graph family together with its parameters.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Family {
    /// `C_ν`, ν ≥ 3.
    Cycle(usize),
    /// `P_ν`, ν ≥ 2.
    Path(usize),
    /// `K_{ν,1}` with ν leaves and the centre last, ν ≥ 1.
    Star(usize),
    /// `K_ν`, ν ≥ 2.
    Complete(usize),
    /// `K_{m,n}`, m, n ≥ 1.
    CompleteBipartite(usize, usize),
    /// `H_m` on `2^m` vertices, m ≥ 1.
    Hypercube(u32),
    Petersen,
}

impl Family {
    pub fn from_params(kind: FamilyKind, params: &[usize]) -> Result<Self> {
        let want = |count: usize| -> Result<()> {
            if params.len() == count {
                Ok(())
            } else {
                Err(Error::InvalidParameter(format!(
                    "{} takes {count} parameter(s), got {}",
                    kind.name(),
                    params.len()
                )))
            }
        };
        let family = match kind {
            FamilyKind::Cycle => {
                want(1)?;
                Family::Cycle(params[0])
            }
            FamilyKind::Path => {
                want(1)?;
                Family::Path(params[0])
            }
            FamilyKind::Star => {
                want(1)?;
                Family::Star(params[0])
            }
            FamilyKind::Complete => {
                want(1)?;
                Family::Complete(params[0])
            }
            FamilyKind::CompleteBipartite => {
                want(2)?;
                Family::CompleteBipartite(params[0], params[1])
            }
            FamilyKind::Hypercube => {
                want(1)?;
                let m = u32::try_from(params[0])
                    .map_err(|_| Error::InvalidParameter("hypercube dimension too large".into()))?;
                Family::Hypercube(m)
            }
            FamilyKind::Petersen => {
                want(0)?;
                Family::Petersen
            }
        };
        family.validate()?;
        Ok(family)
    }

    pub fn kind(&self) -> FamilyKind {
        match self {
            Family::Cycle(_) => FamilyKind::Cycle,
            Family::Path(_) => FamilyKind::Path,
            Family::Star(_) => FamilyKind::Star,
            Family::Complete(_) => FamilyKind::Complete,
            Family::CompleteBipartite(..) => FamilyKind::CompleteBipartite,
            Family::Hypercube(_) => FamilyKind::Hypercube,
            Family::Petersen => FamilyKind::Petersen,
        }
    }

    pub fn validate(&self) -> Result<()> {
        let fail = |msg: &str| Err(Error::InvalidParameter(msg.to_string()));
        match *self {
            Family::Cycle(nu) if nu < 3 => fail("cycle requires ν ≥ 3"),
            Family::Path(nu) if nu < 2 => fail("path requires ν ≥ 2"),
            Family::Star(nu) if nu < 1 => fail("star requires ν ≥ 1"),
            Family::Complete(nu) if nu < 2 => fail("complete graph requires ν ≥ 2"),
            Family::CompleteBipartite(m, n) if m < 1 || n < 1 => {
                fail("complete bipartite graph requires m, n ≥ 1")
            }
            Family::Hypercube(m) if m < 1 => fail("hypercube requires m ≥ 1"),
            // 2^m vertices must fit comfortably in memory
            Family::Hypercube(m) if m > 20 => fail("hypercube requires m ≤ 20"),
            _ => Ok(()),
        }
    }

    /// Number of vertices of the graph this family builds.
    pub fn vertex_count(&self) -> usize {
        match *self {
            Family::Cycle(nu) | Family::Path(nu) | Family::Complete(nu) => nu,
            Family::Star(nu) => nu + 1,
            Family::CompleteBipartite(m, n) => m + n,
            Family::Hypercube(m) => 1usize << m,
            Family::Petersen => 10,
        }
    }
}

impl fmt::Display for Family {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Family::Cycle(nu) => write!(f, "C_{nu}"),
            Family::Path(nu) => write!(f, "P_{nu}"),
            Family::Star(nu) => write!(f, "K_{{{nu},1}}"),
            Family::Complete(nu) => write!(f, "K_{nu}"),
            Family::CompleteBipartite(m, n) => write!(f, "K_{{{m},{n}}}"),
            Family::Hypercube(m) => write!(f, "H_{m}"),
            Family::Petersen => write!(f, "Petersen"),
        }
    }
}

/// Outer 5-cycle, spokes, inner pentagram.
const PETERSEN_EDGES: [(usize, usize); 15] = [
    (0, 1),
    (1, 2),
    (2, 3),
    (3, 4),
    (0, 4),
    (0, 5),
    (1, 6),
    (2, 7),
    (3, 8),
    (4, 9),
    (5, 7),
    (7, 9),
    (6, 9),
    (6, 8),
    (5, 8),
];

/// Simple undirected graph on `0..n`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FiniteGraph {
    n: usize,
    edges: Vec<(usize, usize)>,
    labels: VertexLabels,
}

impl FiniteGraph {
    /// Builds a graph from an edge list. Duplicate edges (in either
    /// orientation) collapse; self-loops and out-of-range endpoints are errors.
    pub fn new(n: usize, edges: impl IntoIterator<Item = (usize, usize)>) -> Result<Self> {
        if n == 0 {
            return Err(Error::InvalidParameter("graph needs at least one vertex".into()));
        }
        let mut set = BTreeSet::new();
        for (u, v) in edges {
            if u == v {
                return Err(Error::SelfLoop(u));
            }
            for w in [u, v] {
                if w >= n {
                    return Err(Error::VertexOutOfRange { vertex: w, count: n });
                }
            }
            set.insert((u.min(v), u.max(v)));
        }
        Ok(Self {
            n,
            edges: set.into_iter().collect(),
            labels: VertexLabels::ZeroBased,
        })
    }

    pub fn with_labels(mut self, labels: VertexLabels) -> Self {
        self.labels = labels;
        self
    }

    pub fn named(family: Family) -> Result<Self> {
        family.validate()?;
        let graph = match family {
            Family::Cycle(nu) => Self::new(nu, (0..nu).map(|i| (i, (i + 1) % nu)))?,
            Family::Path(nu) => {
                Self::new(nu, (0..nu - 1).map(|i| (i, i + 1)))?.with_labels(VertexLabels::OneBased)
            }
            Family::Star(nu) => {
                Self::new(nu + 1, (0..nu).map(|i| (i, nu)))?.with_labels(VertexLabels::OneBased)
            }
            Family::Complete(nu) => Self::new(
                nu,
                (0..nu).flat_map(|i| (i + 1..nu).map(move |j| (i, j))),
            )?,
            Family::CompleteBipartite(m, n) => {
                Self::new(m + n, (0..m).flat_map(|i| (m..m + n).map(move |j| (i, j))))?
            }
            Family::Hypercube(m) => {
                let count = 1usize << m;
                Self::new(
                    count,
                    (0..count).flat_map(|x| {
                        (0..m).filter_map(move |b| {
                            let y = x ^ (1 << b);
                            (x < y).then_some((x, y))
                        })
                    }),
                )?
                .with_labels(VertexLabels::Binary { bits: m })
            }
            Family::Petersen => Self::new(10, PETERSEN_EDGES)?,
        };
        Ok(graph)
    }

    /// Parses the edge-list text format: one `u v` pair per line, 0-indexed,
    /// blank lines and lines starting with `#` ignored.
    pub fn from_edge_list(text: &str) -> Result<Self> {
        let mut edges = Vec::new();
        let mut max_vertex: Option<usize> = None;
        for (idx, raw) in text.lines().enumerate() {
            let line_no = idx + 1;
            let line = raw.trim();
            if line.is_empty() || line.starts_with('#') {
                continue;
            }
            let fields: Vec<&str> = line.split_whitespace().collect();
            if fields.len() != 2 {
                return Err(Error::Parse {
                    line: line_no,
                    message: format!("expected `u v`, found {} field(s)", fields.len()),
                });
            }
            let parse = |s: &str| {
                s.parse::<usize>().map_err(|e| Error::Parse {
                    line: line_no,
                    message: format!("`{s}`: {e}"),
                })
            };
            let (u, v) = (parse(fields[0])?, parse(fields[1])?);
            if u == v {
                return Err(Error::SelfLoop(u));
            }
            max_vertex = Some(max_vertex.unwrap_or(0).max(u).max(v));
            edges.push((u, v));
        }
        let n = max_vertex
            .map(|m| m + 1)
            .ok_or(Error::Parse { line: 0, message: "no edges found".into() })?;
        Self::new(n, edges)
    }

    /// Writes the graph back out in the edge-list format.
    pub fn to_edge_list(&self) -> String {
        let mut out = String::new();
        for &(u, v) in &self.edges {
            out.push_str(&format!("{u} {v}\n"));
        }
        out
    }

    pub fn vertex_count(&self) -> usize {
        self.n
    }

    pub fn edge_count(&self) -> usize {
        self.edges.len()
    }

    /// Edges as `(u, v)` with `u < v`, sorted.
    pub fn edges(&self) -> &[(usize, usize)] {
        &self.edges
    }

    pub fn labels(&self) -> VertexLabels {
        self.labels
    }

    /// External label of internal vertex `v`.
    pub fn label(&self, v: usize) -> String {
        match self.labels {
            VertexLabels::ZeroBased => v.to_string(),
            VertexLabels::OneBased => (v + 1).to_string(),
            VertexLabels::Binary { bits } => (0..bits).map(|b| if v >> b & 1 == 1 { '1' } else { '0' }).collect(),
        }
    }

    pub fn adjacency(&self) -> DMatrix<f64> {
        let mut a = DMatrix::zeros(self.n, self.n);
        for &(u, v) in &self.edges {
            a[(u, v)] = 1.0;
            a[(v, u)] = 1.0;
        }
        a
    }

    pub fn neighbours(&self) -> Vec<Vec<usize>> {
        let mut adj = vec![Vec::new(); self.n];
        for &(u, v) in &self.edges {
            adj[u].push(v);
            adj[v].push(u);
        }
        for list in &mut adj {
            list.sort_unstable();
        }
        adj
    }

    pub fn degrees(&self) -> Vec<usize> {
        let mut deg = vec![0; self.n];
        for &(u, v) in &self.edges {
            deg[u] += 1;
            deg[v] += 1;
        }
        deg
    }

    pub fn is_adjacent(&self, u: usize, v: usize) -> bool {
        self.edges.binary_search(&(u.min(v), u.max(v))).is_ok()
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum ProductKind {
    Cartesian,
    Tensor,
    Strong,
}

impl std::str::FromStr for ProductKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "cartesian" => Ok(ProductKind::Cartesian),
            "tensor" => Ok(ProductKind::Tensor),
            "strong" => Ok(ProductKind::Strong),
            other => Err(Error::InvalidParameter(format!("unknown product `{other}`"))),
        }
    }
}

/// Band structure of `base ⊙ graph` for the chosen product, with the finite
/// spectrum clustered at the default tolerance.
pub fn product_spec(base: BaseLattice, graph: &FiniteGraph, kind: ProductKind) -> Result<BandStructure> {
    BandStructure::new(base, graph, kind, DEFAULT_CLUSTER_TOL)
}

/// Edge from `v_p` in cell `0` to `v_q` in cell `offset`.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord)]
pub struct OffsetEdge {
    pub p: usize,
    pub q: usize,
    pub offset: Vec<i64>,
}

/// A `Z^d`-periodic graph given by its fundamental domain, the lattice
/// offsets of its edges and a diagonal potential.
///
/// Connectivity of the infinite graph is not checked; callers are expected to
/// describe a connected crystal.
#[derive(Debug, Clone, PartialEq)]
pub struct PeriodicGraphSpec {
    dim: usize,
    nu: usize,
    edges: Vec<OffsetEdge>,
    potential: Vec<f64>,
}

impl PeriodicGraphSpec {
    /// `edges` must be closed under reversal: `(p, q, n)` present iff
    /// `(q, p, -n)` present. Each direction is listed explicitly.
    pub fn new(dim: usize, nu: usize, edges: Vec<OffsetEdge>, potential: Vec<f64>) -> Result<Self> {
        if dim == 0 || nu == 0 {
            return Err(Error::InvalidParameter("periodic spec needs d ≥ 1 and ν ≥ 1".into()));
        }
        if potential.len() != nu {
            return Err(Error::LengthMismatch(potential.len(), nu));
        }
        for e in &edges {
            for w in [e.p, e.q] {
                if w >= nu {
                    return Err(Error::VertexOutOfRange { vertex: w, count: nu });
                }
            }
            if e.offset.len() != dim {
                return Err(Error::LengthMismatch(e.offset.len(), dim));
            }
            if e.p == e.q && e.offset.iter().all(|&c| c == 0) {
                return Err(Error::SelfLoop(e.p));
            }
        }
        let mut sorted = edges.clone();
        sorted.sort();
        for e in &edges {
            let reverse = OffsetEdge {
                p: e.q,
                q: e.p,
                offset: e.offset.iter().map(|c| -c).collect(),
            };
            let count = |x: &OffsetEdge| sorted.iter().filter(|y| *y == x).count();
            if count(&reverse) != count(e) {
                return Err(Error::MissingReverseEdge {
                    p: e.p,
                    q: e.q,
                    offset: e.offset.clone(),
                });
            }
        }
        Ok(Self { dim, nu, edges: sorted, potential })
    }

    /// `Z^d` itself: one vertex, hops `±e_i`.
    pub fn integer_lattice(dim: usize) -> Result<Self> {
        let mut edges = Vec::new();
        for axis in 0..dim {
            for sign in [1, -1] {
                let mut offset = vec![0; dim];
                offset[axis] = sign;
                edges.push(OffsetEdge { p: 0, q: 0, offset });
            }
        }
        Self::new(dim, 1, edges, vec![0.0])
    }

    /// `Z^d □ G`: each fundamental vertex hops `±e_i` to its own translate, and
    /// the edges of `G` stay inside a cell.
    pub fn cartesian_with_lattice(graph: &FiniteGraph, dim: usize) -> Result<Self> {
        let mut edges = Vec::new();
        for p in 0..graph.vertex_count() {
            for axis in 0..dim {
                for sign in [1, -1] {
                    let mut offset = vec![0; dim];
                    offset[axis] = sign;
                    edges.push(OffsetEdge { p, q: p, offset });
                }
            }
        }
        for &(u, v) in graph.edges() {
            edges.push(OffsetEdge { p: u, q: v, offset: vec![0; dim] });
            edges.push(OffsetEdge { p: v, q: u, offset: vec![0; dim] });
        }
        Self::new(dim, graph.vertex_count(), edges, vec![0.0; graph.vertex_count()])
    }

    /// Honeycomb lattice: vertex 0 is joined to vertex 1 in its own cell and
    /// in the cells `-a_1`, `-a_2`.
    pub fn honeycomb() -> Result<Self> {
        let mut edges = Vec::new();
        for offset in [[0, 0], [-1, 0], [0, -1]] {
            edges.push(OffsetEdge { p: 0, q: 1, offset: offset.to_vec() });
            edges.push(OffsetEdge { p: 1, q: 0, offset: offset.iter().map(|c| -c).collect() });
        }
        Self::new(2, 2, edges, vec![0.0; 2])
    }

    pub fn with_potential(mut self, potential: Vec<f64>) -> Result<Self> {
        if potential.len() != self.nu {
            return Err(Error::LengthMismatch(potential.len(), self.nu));
        }
        self.potential = potential;
        Ok(self)
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn nu(&self) -> usize {
        self.nu
    }

    pub fn edges(&self) -> &[OffsetEdge] {
        &self.edges
    }

    pub fn potential(&self) -> &[f64] {
        &self.potential
    }
}
