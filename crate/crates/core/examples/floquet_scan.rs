// Band structure of lattice products and the collision-fraction scan.

use crystal_qwalk::floquet::{floquet_condition_fraction, product_bands, BaseLattice, DEFAULT_COLLISION_DELTA};
use crystal_qwalk::graph::{product_spec, Family, FiniteGraph, ProductKind};

fn main() {
    let c3 = FiniteGraph::named(Family::Cycle(3)).unwrap();
    let c4 = FiniteGraph::named(Family::Cycle(4)).unwrap();

    let cartesian = product_spec(BaseLattice::Zd(1), &c3, ProductKind::Cartesian).unwrap();
    println!("Z □ C_3 bands at θ = 1/4: {:?}", product_bands(&cartesian, &[0.25]));
    for n in [16, 32, 64] {
        let report = floquet_condition_fraction(&cartesian, n, DEFAULT_COLLISION_DELTA).unwrap();
        println!("  N={n:>3}: {}", report.to_json());
    }

    let tensor = product_spec(BaseLattice::Zd(1), &c4, ProductKind::Tensor).unwrap();
    let report = floquet_condition_fraction(&tensor, 16, DEFAULT_COLLISION_DELTA).unwrap();
    println!("Z × C_4 (flat bands at μ = 0): {}", report.to_json());

    let strong = product_spec(BaseLattice::Triangular, &c3, ProductKind::Strong).unwrap();
    let report = floquet_condition_fraction(&strong, 12, DEFAULT_COLLISION_DELTA).unwrap();
    println!("triangular ⊠ C_3 (flat bands at μ = −1): {}", report.to_json());
}
