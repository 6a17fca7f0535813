// Density of a periodic graph by averaging eigenprojections over the
// Floquet grid.

use crystal_qwalk::closed_forms::{closed_form_matrix, ClosedFormFamily};
use crystal_qwalk::floquet::general_density;
use crystal_qwalk::graph::{Family, FiniteGraph, PeriodicGraphSpec};
use crystal_qwalk::spectral::DEFAULT_CLUSTER_TOL;

fn main() {
    let c5 = FiniteGraph::named(Family::Cycle(5)).unwrap();
    let spec = PeriodicGraphSpec::cartesian_with_lattice(&c5, 1).unwrap();
    let exact = closed_form_matrix(ClosedFormFamily::Cycle(5)).unwrap();
    for n in [10, 50, 100] {
        let result = general_density(&spec, n, DEFAULT_CLUSTER_TOL).unwrap();
        println!(
            "Z □ C_5, N={n:>3}: max error vs closed form {:.3e}, row-sum error {:.3e}",
            result.density().max_abs_diff(&exact),
            result.row_sum_error()
        );
    }

    let honeycomb = PeriodicGraphSpec::honeycomb().unwrap();
    let result = general_density(&honeycomb, 64, DEFAULT_CLUSTER_TOL).unwrap();
    println!("honeycomb, N=64: {}", result.density().to_json());

    // a potential on one sublattice breaks the uniformity
    let gapped = PeriodicGraphSpec::honeycomb().unwrap().with_potential(vec![0.5, 0.0]).unwrap();
    let result = general_density(&gapped, 32, DEFAULT_CLUSTER_TOL).unwrap();
    println!("honeycomb with potential (0.5, 0), N=32: {}", result.density().to_json());
}
