#![allow(dead_code)]

use crystal_qwalk::dynamics::{evolve, Site, TorusOperator};
use crystal_qwalk::graph::{Family, FiniteGraph};
use nalgebra::DMatrix;
use num_complex::Complex64;
use rand::rngs::StdRng;
use rand::{Rng, SeedableRng};

pub fn named(f: Family) -> FiniteGraph {
    FiniteGraph::named(f).unwrap()
}

/// `e^{M}` by scaling and squaring a truncated Taylor series.
pub fn expm(m: &DMatrix<Complex64>) -> DMatrix<Complex64> {
    let n = m.nrows();
    let norm = m.iter().map(|z| z.norm()).sum::<f64>();
    let mut squarings = 0;
    while norm / 2f64.powi(squarings) > 0.25 {
        squarings += 1;
    }
    let scaled = m / Complex64::new(2f64.powi(squarings), 0.0);
    let mut term = DMatrix::<Complex64>::identity(n, n);
    let mut sum = term.clone();
    for k in 1..30 {
        term = &term * &scaled / Complex64::new(k as f64, 0.0);
        sum += &term;
    }
    for _ in 0..squarings {
        sum = &sum * &sum;
    }
    sum
}

/// Composite Simpson average `(1/T)∫_0^T |evolve(t)|² dt` on `intervals`
/// (even) sub-intervals.
pub fn simpson_average(op: &TorusOperator, start: &Site, horizon: f64, intervals: usize) -> Vec<f64> {
    assert!(intervals.is_multiple_of(2));
    let h = horizon / intervals as f64;
    let mut acc = vec![0.0; op.vertex_count()];
    for i in 0..=intervals {
        let weight = if i == 0 || i == intervals {
            1.0
        } else if i % 2 == 1 {
            4.0
        } else {
            2.0
        };
        let psi = evolve(op, start, i as f64 * h).unwrap();
        for (a, z) in acc.iter_mut().zip(&psi) {
            *a += weight * z.norm_sqr();
        }
    }
    acc.iter().map(|a| a * h / 3.0 / horizon).collect()
}

/// Random graphs serialised as edge lists, with a fixed seed.
pub fn random_edge_lists(count: usize, max_nu: usize, seed: u64) -> Vec<String> {
    let mut rng = StdRng::seed_from_u64(seed);
    (0..count)
        .map(|_| {
            let nu = rng.gen_range(2..=max_nu);
            let p: f64 = rng.gen_range(0.05..0.9);
            let mut text = format!("# random graph on {nu} vertices\n");
            let mut any = false;
            for u in 0..nu {
                for v in u + 1..nu {
                    if rng.gen_bool(p) {
                        text.push_str(&format!("{u} {v}\n"));
                        any = true;
                    }
                }
            }
            if !any {
                text.push_str("0 1\n");
            }
            // pin the vertex count even when the last vertex is isolated
            if !text.contains(&format!(" {}\n", nu - 1)) {
                text.push_str(&format!("{} {}\n", nu - 2, nu - 1));
            }
            text
        })
        .collect()
}

/// Every named graph used across the test suites.
pub fn test_families() -> Vec<Family> {
    let mut out = vec![Family::Petersen];
    out.extend((3..=16).map(Family::Cycle));
    out.extend((2..=16).map(Family::Path));
    out.extend((1..=16).map(Family::Star));
    out.extend((2..=12).map(Family::Complete));
    out.extend([(1, 1), (2, 3), (4, 4), (3, 7)].map(|(a, b)| Family::CompleteBipartite(a, b)));
    out.extend((1..=6).map(Family::Hypercube));
    out
}
