// Limiting densities of a few named graphs, printed next to the values they
// should take.

use crystal_qwalk::graph::{Family, FiniteGraph};
use crystal_qwalk::spectral::{limiting_density, DEFAULT_CLUSTER_TOL};

fn main() {
    let cases = [
        (Family::Petersen, 0, 0, 21.0 / 50.0),
        (Family::Petersen, 0, 1, 49.0 / 450.0),
        (Family::Petersen, 0, 2, 19.0 / 450.0),
        (Family::Complete(4), 0, 0, 5.0 / 8.0),
        (Family::Complete(5), 0, 0, 0.68),
        (Family::CompleteBipartite(4, 4), 0, 0, 0.59375),
        (Family::Hypercube(3), 0, 0, 5.0 / 16.0),
        (Family::Star(10), 0, 0, 0.815),
    ];
    println!("{:<10} {:>3} {:>3} {:>14} {:>14}", "graph", "p", "q", "d(p,q)", "expected");
    for (family, p, q, want) in cases {
        let graph = FiniteGraph::named(family).expect("valid family");
        let d = limiting_density(&graph, DEFAULT_CLUSTER_TOL).expect("eigensolver converges");
        println!("{:<10} {p:>3} {q:>3} {:>14.10} {want:>14.10}", family.to_string(), d.get(p, q));
    }

    // any graph can be read from an edge list
    let triangle_with_tail = FiniteGraph::from_edge_list("0 1\n1 2\n0 2\n2 3\n").unwrap();
    let d = limiting_density(&triangle_with_tail, DEFAULT_CLUSTER_TOL).unwrap();
    println!("\ntriangle with a tail, row sums {:?}", d.row_sums());
    print!("{}", d.to_csv(&triangle_with_tail));
}
