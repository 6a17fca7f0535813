// Quantum walk on the torus C_N □ C_5: finite and infinite time averages
// against the product prediction d(p,q)/N.

use crystal_qwalk::dynamics::{
    build_torus, evolve, infinite_time_averaged, product_prediction, time_averaged, total_variation, Site,
};
use crystal_qwalk::graph::{Family, FiniteGraph};
use crystal_qwalk::spectral::{limiting_density, DEFAULT_CLUSTER_TOL};

fn main() {
    let graph = FiniteGraph::named(Family::Cycle(5)).unwrap();
    let density = limiting_density(&graph, DEFAULT_CLUSTER_TOL).unwrap();
    let start = Site::origin(1, 0);

    let op = build_torus(&graph, 1, 16).unwrap();
    let psi = evolve(&op, &start, 3.0).unwrap();
    println!("|ψ(3)|² = {:.12}", psi.iter().map(|z| z.norm_sqr()).sum::<f64>());

    let limit = infinite_time_averaged(&op, &start, DEFAULT_CLUSTER_TOL).unwrap();
    for t in [1e1, 1e2, 1e3, 1e4] {
        let mu = time_averaged(&op, &start, t).unwrap();
        println!("N=16, T={t:>7}: TV to T=∞ is {:.3e}", total_variation(&mu.values, &limit.values).unwrap());
    }

    for n in [16, 32, 64, 128] {
        let op = build_torus(&graph, 1, n).unwrap();
        let mu = infinite_time_averaged(&op, &start, DEFAULT_CLUSTER_TOL).unwrap();
        let predicted = product_prediction(&op, &density, 0).unwrap();
        println!(
            "N={n:>3}: TV to prediction {:.4e}, layer masses {:?}",
            total_variation(&mu.values, &predicted).unwrap(),
            mu.layer_masses(5).iter().map(|m| format!("{m:.6}")).collect::<Vec<_>>()
        );
    }
}
