// Classical random walk against the quantum limiting density on regular
// graphs, where the classical walk equidistributes and the quantum one
// does not.

use crystal_qwalk::classical::{is_bipartite, iterate_distribution, stationary_distribution};
use crystal_qwalk::dynamics::total_variation;
use crystal_qwalk::graph::{Family, FiniteGraph};
use crystal_qwalk::spectral::{limiting_density, DEFAULT_CLUSTER_TOL};

fn main() {
    for family in [Family::Petersen, Family::Hypercube(3), Family::Cycle(5), Family::Star(3)] {
        let graph = FiniteGraph::named(family).unwrap();
        let pi = stationary_distribution(&graph).unwrap();
        let d = limiting_density(&graph, DEFAULT_CLUSTER_TOL).unwrap();
        let bipartite = is_bipartite(&graph);
        let walked = iterate_distribution(&graph, 0, 200, bipartite).unwrap();
        println!(
            "{:<9} π(0) = {:.6}  quantum d(0,0) = {:.6}  bipartite = {bipartite:<5}  TV after 200 {}steps = {:.2e}",
            family.to_string(),
            pi[0],
            d.get(0, 0),
            if bipartite { "lazy " } else { "" },
            total_variation(&walked, &pi).unwrap()
        );
    }
}
