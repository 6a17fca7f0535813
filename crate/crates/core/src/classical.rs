//! Simple random walk `P(v, w) = 1/deg(v)` on a finite graph.

use std::collections::VecDeque;

use crate::error::{Error, Result};
use crate::format;
use crate::graph::FiniteGraph;

#[derive(Debug, Clone, PartialEq)]
pub struct WalkReport {
    /// `π(v) = deg(v) / 2m`.
    pub stationary: Vec<f64>,
    pub bipartite: bool,
    /// Distributions after `0, 1, …` steps, if requested.
    pub iterates: Option<Vec<Vec<f64>>>,
}

impl WalkReport {
    /// Plain iterates converge to `π` only on connected non-bipartite graphs.
    pub fn plain_iterates_converge(&self) -> bool {
        !self.bipartite
    }

    pub fn to_json(&self) -> String {
        let list = |v: &[f64]| v.iter().map(|x| format::json(*x)).collect::<Vec<_>>().join(",");
        let mut out = format!(
            "{{\"stationary\":[{}],\"bipartite\":{},\"plain_iterates_converge\":{}",
            list(&self.stationary),
            self.bipartite,
            self.plain_iterates_converge()
        );
        if let Some(iterates) = &self.iterates {
            let rows: Vec<String> = iterates.iter().map(|r| format!("[{}]", list(r))).collect();
            out.push_str(&format!(",\"iterates\":[{}]", rows.join(",")));
        }
        out.push('}');
        out
    }

    /// CSV with columns `q,mass` for the stationary distribution.
    pub fn to_csv(&self, graph: &FiniteGraph) -> String {
        let mut out = String::from("q,mass\n");
        for (v, p) in self.stationary.iter().enumerate() {
            out.push_str(&format!("{},{}\n", graph.label(v), format::table(*p)));
        }
        out
    }
}

fn check_no_isolated(graph: &FiniteGraph) -> Result<Vec<usize>> {
    let degrees = graph.degrees();
    match degrees.iter().position(|&d| d == 0) {
        Some(v) => Err(Error::IsolatedVertex(v)),
        None => Ok(degrees),
    }
}

pub fn stationary_distribution(graph: &FiniteGraph) -> Result<Vec<f64>> {
    let degrees = check_no_isolated(graph)?;
    let two_m = 2 * graph.edge_count();
    Ok(degrees.iter().map(|&d| d as f64 / two_m as f64).collect())
}

/// BFS 2-colouring of every component.
pub fn is_bipartite(graph: &FiniteGraph) -> bool {
    let neighbours = graph.neighbours();
    let mut colour: Vec<Option<bool>> = vec![None; graph.vertex_count()];
    let mut queue = VecDeque::new();
    for root in 0..graph.vertex_count() {
        if colour[root].is_some() {
            continue;
        }
        colour[root] = Some(false);
        queue.push_back(root);
        while let Some(v) = queue.pop_front() {
            let c = colour[v].unwrap();
            for &w in &neighbours[v] {
                match colour[w] {
                    None => {
                        colour[w] = Some(!c);
                        queue.push_back(w);
                    }
                    Some(cw) if cw == c => return false,
                    _ => {}
                }
            }
        }
    }
    true
}

/// One step `x ↦ xP`, or `x ↦ x(I + P)/2` when lazy.
pub fn step(graph: &FiniteGraph, x: &[f64], lazy: bool) -> Result<Vec<f64>> {
    if x.len() != graph.vertex_count() {
        return Err(Error::LengthMismatch(x.len(), graph.vertex_count()));
    }
    let degrees = check_no_isolated(graph)?;
    let mut out = vec![0.0; x.len()];
    for &(u, v) in graph.edges() {
        out[v] += x[u] / degrees[u] as f64;
        out[u] += x[v] / degrees[v] as f64;
    }
    if lazy {
        for (o, xi) in out.iter_mut().zip(x) {
            *o = 0.5 * (*o + xi);
        }
    }
    Ok(out)
}

/// Distribution after `steps` steps from `start`.
pub fn iterate_distribution(graph: &FiniteGraph, start: usize, steps: usize, lazy: bool) -> Result<Vec<f64>> {
    Ok(iterate_all(graph, start, steps, lazy)?.pop().expect("at least the starting distribution"))
}

/// Distributions after `0..=steps` steps.
pub fn iterate_all(graph: &FiniteGraph, start: usize, steps: usize, lazy: bool) -> Result<Vec<Vec<f64>>> {
    let n = graph.vertex_count();
    if start >= n {
        return Err(Error::VertexOutOfRange { vertex: start, count: n });
    }
    check_no_isolated(graph)?;
    let mut x = vec![0.0; n];
    x[start] = 1.0;
    let mut out = vec![x];
    for _ in 0..steps {
        let next = step(graph, out.last().unwrap(), lazy)?;
        out.push(next);
    }
    Ok(out)
}

/// Stationary distribution, bipartiteness and (optionally) the iterates
/// from `start`.
pub fn walk_report(graph: &FiniteGraph, iterates: Option<(usize, usize, bool)>) -> Result<WalkReport> {
    let stationary = stationary_distribution(graph)?;
    let iterates = iterates.map(|(start, steps, lazy)| iterate_all(graph, start, steps, lazy)).transpose()?;
    Ok(WalkReport { stationary, bipartite: is_bipartite(graph), iterates })
}
