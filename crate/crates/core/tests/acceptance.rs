//! Acceptance suite. Each test prints one `criterion N: PASS|FAIL` line;
//! run with `--nocapture` to see them all.

mod common;

use std::time::Instant;

use common::{named, random_edge_lists, simpson_average, test_families};
use crystal_qwalk::classical;
use crystal_qwalk::closed_forms::{closed_form_exact, closed_form_matrix, d_hypercube_exact, ClosedFormFamily, Rational};
use crystal_qwalk::dynamics::{build_torus, infinite_time_averaged, product_prediction, time_averaged, total_variation, Site};
use crystal_qwalk::floquet::{floquet_condition_fraction, general_density, BaseLattice, DEFAULT_COLLISION_DELTA};
use crystal_qwalk::graph::{product_spec, Family, FiniteGraph, PeriodicGraphSpec, ProductKind};
use crystal_qwalk::spectral::{eigendecompose_symmetric, limiting_density, projection_kernels, DEFAULT_CLUSTER_TOL};
use nalgebra::DMatrix;
use std::f64::consts::PI;

fn verdict(n: u32, ok: bool, detail: &str) {
    println!("criterion {n}: {} ({detail})", if ok { "PASS" } else { "FAIL" });
    assert!(ok, "criterion {n} failed: {detail}");
}

#[test]
fn criterion_1_closed_form_equivalence() {
    let clock = Instant::now();
    let mut families: Vec<ClosedFormFamily> = Vec::new();
    families.extend((3..=16).map(ClosedFormFamily::Cycle));
    families.extend((2..=16).map(ClosedFormFamily::Path));
    families.extend((1..=16).map(ClosedFormFamily::Star));
    families.extend((1..=6).map(ClosedFormFamily::Hypercube));
    let mut worst = 0.0f64;
    for f in &families {
        let numeric = limiting_density(&named((*f).into()), DEFAULT_CLUSTER_TOL).unwrap();
        let closed = closed_form_matrix(*f).unwrap();
        worst = worst.max(numeric.max_abs_diff(&closed));
    }
    let secs = clock.elapsed().as_secs_f64();
    verdict(
        1,
        worst <= 1e-9 && secs < 10.0,
        &format!("{} graphs, max entry error {worst:.3e} ≤ 1e-9, {secs:.2} s < 10 s", families.len()),
    );
}

#[test]
fn criterion_2_golden_values() {
    let mut failures = Vec::new();
    let mut check = |what: &str, got: f64, want: f64, tol: f64| {
        if (got - want).abs() > tol {
            failures.push(format!("{what}: {got} vs {want} ± {tol}"));
        }
    };
    let d = |f: Family| limiting_density(&named(f), DEFAULT_CLUSTER_TOL).unwrap();

    let petersen = named(Family::Petersen);
    let pd = d(Family::Petersen);
    for p in 0..10 {
        for q in 0..10 {
            let want = if p == q {
                21.0 / 50.0
            } else if petersen.is_adjacent(p, q) {
                49.0 / 450.0
            } else {
                19.0 / 450.0
            };
            check(&format!("Petersen d({p},{q})"), pd.get(p, q), want, 1e-9);
        }
    }
    let cube = d(Family::Hypercube(3));
    for q in 0..8usize {
        let want = if q.count_ones() % 3 == 0 { 5.0 / 16.0 } else { 1.0 / 16.0 };
        check(&format!("H_3 d(0,{q})"), cube.get(0, q), want, 1e-9);
    }
    let tess = d(Family::Hypercube(4));
    for q in 0..16usize {
        let want = match q.count_ones() {
            0 | 4 => 35.0 / 128.0,
            1 | 3 => 5.0 / 128.0,
            _ => 3.0 / 128.0,
        };
        check(&format!("H_4 d(0,{q})"), tess.get(0, q), want, 1e-9);
    }
    check("K_4 diagonal", d(Family::Complete(4)).get(0, 0), 5.0 / 8.0, 1e-9);
    check("K_5 diagonal", d(Family::Complete(5)).get(0, 0), 0.68, 1e-9);
    check("K_100 diagonal", d(Family::Complete(100)).get(0, 0), 0.98, 0.005);
    check("K_{4,4} diagonal", d(Family::CompleteBipartite(4, 4)).get(0, 0), 0.59, 0.005);
    check("K_{100,100} diagonal", d(Family::CompleteBipartite(100, 100)).get(0, 0), 0.98, 0.005);
    check("star ν=10 leaf diagonal", d(Family::Star(10)).get(0, 0), 0.81 + 0.005, 1e-9);
    verdict(2, failures.is_empty(), &if failures.is_empty() { "all golden values reproduced".into() } else { failures.join("; ") });
}

#[test]
fn criterion_3_row_sums() {
    let mut worst = 0.0f64;
    let mut count = 0;
    for f in test_families() {
        worst = worst.max(limiting_density(&named(f), DEFAULT_CLUSTER_TOL).unwrap().row_sum_error());
        count += 1;
    }
    for text in random_edge_lists(100, 32, 0x5eed) {
        let g = FiniteGraph::from_edge_list(&text).unwrap();
        assert!(g.vertex_count() <= 32);
        worst = worst.max(limiting_density(&g, DEFAULT_CLUSTER_TOL).unwrap().row_sum_error());
        count += 1;
    }
    verdict(3, worst <= 1e-10, &format!("{count} graphs incl. 100 random, max |row sum − 1| = {worst:.3e} ≤ 1e-10"));
}

fn binom(n: i64, k: i64) -> i128 {
    if k < 0 || k > n {
        return 0;
    }
    (0..k).fold(1i128, |acc, i| acc * (n - i) as i128 / (i + 1) as i128)
}

#[test]
fn criterion_4_hypercube_exact_identities() {
    let mut failures = Vec::new();
    for m in 1..=8u32 {
        for u in 0..=m {
            if d_hypercube_exact(m, u).unwrap() != d_hypercube_exact(m, m - u).unwrap() {
                failures.push(format!("m={m}, u={u}: symmetry"));
            }
        }
        let mm = m as i64;
        let b1 = binom(2 * mm, mm) - 4 * binom(2 * mm - 1, mm - 1) + 4 * binom(2 * mm - 2, mm - 1);
        if d_hypercube_exact(m, 1).unwrap() != Rational::new(b1, 1i128 << (2 * m)) {
            failures.push(format!("m={m}: B_1 identity"));
        }
        let table = closed_form_exact(ClosedFormFamily::Hypercube(m)).unwrap();
        let row: Rational = table[0].iter().copied().sum();
        if row != Rational::from_integer(1) {
            failures.push(format!("m={m}: exact row sum {row}"));
        }
    }
    verdict(4, failures.is_empty(), &if failures.is_empty() { "m = 1..8 in exact rationals".into() } else { failures.join("; ") });
}

/// Independent collision count for ℤ □ C_3: bands 2cos(2πθ) + μ, μ ∈ {−1, −1, 2}.
fn brute_force_c3(n: usize, delta: f64) -> usize {
    let mu = [-1.0, -1.0, 2.0];
    let band = |r: usize, j: usize| 2.0 * (2.0 * PI * r as f64 / n as f64).cos() + mu[j];
    let mut best = 0;
    for m in 1..n {
        for s in 0..3 {
            for w in 0..3 {
                best = best.max((0..n).filter(|&r| (band((r + m) % n, s) - band(r, w)).abs() < delta).count());
            }
        }
    }
    best
}

#[test]
fn criterion_5_floquet_scan() {
    let cartesian = product_spec(BaseLattice::Zd(1), &named(Family::Cycle(3)), ProductKind::Cartesian).unwrap();
    let tensor = product_spec(BaseLattice::Zd(1), &named(Family::Cycle(4)), ProductKind::Tensor).unwrap();
    let mut failures = Vec::new();
    let mut details = Vec::new();
    for n in [16usize, 32, 64] {
        let c = floquet_condition_fraction(&cartesian, n, DEFAULT_COLLISION_DELTA).unwrap();
        details.push(format!("C_3 N={n}: {}", c.max_fraction));
        if c.max_fraction > 2.0 / n as f64 + 1e-12 {
            failures.push(format!("cartesian N={n}: {} > 2/N", c.max_fraction));
        }
        if n == 16 {
            let brute = brute_force_c3(n, DEFAULT_COLLISION_DELTA) as f64 / n as f64;
            if brute != c.max_fraction {
                failures.push(format!("brute force {brute} ≠ scan {}", c.max_fraction));
            }
        }
        let t = floquet_condition_fraction(&tensor, n, DEFAULT_COLLISION_DELTA).unwrap();
        if t.max_fraction != 1.0 || t.flat_bands.is_empty() {
            failures.push(format!("tensor N={n}: fraction {}, flat bands {:?}", t.max_fraction, t.flat_bands));
        }
    }
    details.push("tensor C_4 fraction 1 at every N".into());
    verdict(5, failures.is_empty(), &if failures.is_empty() { details.join(", ") } else { failures.join("; ") });
}

#[test]
fn criterion_6_quadrature_density() {
    let spec = PeriodicGraphSpec::cartesian_with_lattice(&named(Family::Cycle(5)), 1).unwrap();
    let exact = closed_form_matrix(ClosedFormFamily::Cycle(5)).unwrap();
    let err50 = general_density(&spec, 50, DEFAULT_CLUSTER_TOL).unwrap().density().max_abs_diff(&exact);
    let err100 = general_density(&spec, 100, DEFAULT_CLUSTER_TOL).unwrap().density().max_abs_diff(&exact);
    let honeycomb = general_density(&PeriodicGraphSpec::honeycomb().unwrap(), 64, DEFAULT_CLUSTER_TOL).unwrap();
    let hc_err = honeycomb.values.iter().fold(0.0f64, |a, v| a.max((v - 0.5).abs()));

    let within = err50 <= 2e-3;
    let shrinking = err100 < err50;
    let hc_ok = hc_err <= 2e-3;
    verdict(
        6,
        within && shrinking && hc_ok,
        &format!(
            "ℤ□C_5 N=50 error {err50:.3e} ≤ 2e-3: {within}; N=100 error {err100:.3e} strictly smaller: {shrinking}; \
             honeycomb N=64 max |d − 1/2| {hc_err:.3e} ≤ 2e-3: {hc_ok}"
        ),
    );
}

#[test]
fn criterion_7_dynamics_consistency() {
    let clock = Instant::now();
    let mut failures = Vec::new();
    let mut details = Vec::new();

    // (a) exact sinc average against Simpson quadrature
    let instances: [(Family, usize, usize, f64); 5] = [
        (Family::Path(2), 1, 4, 50.0),
        (Family::Cycle(3), 1, 8, 20.0),
        (Family::Cycle(5), 1, 10, 20.0),
        (Family::Star(3), 1, 16, 20.0),
        (Family::Path(2), 2, 4, 20.0),
    ];
    let mut worst_a = 0.0f64;
    for (f, dim, n, horizon) in instances {
        let op = build_torus(&named(f), dim, n).unwrap();
        assert!(op.vertex_count() <= 64);
        let start = Site::origin(dim, 0);
        let exact = time_averaged(&op, &start, horizon).unwrap();
        let quad = simpson_average(&op, &start, horizon, 10_000);
        let err = exact.values.iter().zip(&quad).fold(0.0f64, |a, (x, y)| a.max((x - y).abs()));
        worst_a = worst_a.max(err);
    }
    if worst_a > 1e-6 {
        failures.push(format!("(a) quadrature mismatch {worst_a:.3e}"));
    }
    details.push(format!("(a) max |sinc − Simpson| {worst_a:.2e}"));

    // (b) finite-T average approaches the infinite-time limit
    let op = build_torus(&named(Family::Cycle(3)), 1, 8).unwrap();
    let start = Site::origin(1, 0);
    let limit = infinite_time_averaged(&op, &start, DEFAULT_CLUSTER_TOL).unwrap();
    let tvs: Vec<f64> = [1e2, 1e3, 1e4]
        .iter()
        .map(|&t| total_variation(&time_averaged(&op, &start, t).unwrap().values, &limit.values).unwrap())
        .collect();
    if !(tvs[1] < tvs[0] && tvs[2] < tvs[1]) {
        failures.push(format!("(b) TV not decreasing: {tvs:?}"));
    }
    details.push(format!("(b) TV {:.2e} > {:.2e} > {:.2e}", tvs[0], tvs[1], tvs[2]));

    // (c) infinite-time average approaches the product prediction
    for f in [Family::Cycle(3), Family::Cycle(5), Family::Path(4), Family::Star(3)] {
        let g = named(f);
        let d = limiting_density(&g, DEFAULT_CLUSTER_TOL).unwrap();
        let tv = |n: usize| {
            let op = build_torus(&g, 1, n).unwrap();
            let mu = infinite_time_averaged(&op, &Site::origin(1, 0), DEFAULT_CLUSTER_TOL).unwrap();
            total_variation(&mu.values, &product_prediction(&op, &d, 0).unwrap()).unwrap()
        };
        let (t32, t64) = (tv(32), tv(64));
        if t64 >= t32 {
            failures.push(format!("(c) {f}: TV {t32:.3e} → {t64:.3e}"));
        }
        details.push(format!("(c) {f} TV {t32:.3e} → {t64:.3e}"));
    }

    let secs = clock.elapsed().as_secs_f64();
    if secs >= 60.0 {
        failures.push(format!("runtime {secs:.1} s ≥ 60 s"));
    }
    details.push(format!("{secs:.2} s"));
    verdict(7, failures.is_empty(), &if failures.is_empty() { details.join("; ") } else { failures.join("; ") });
}

#[test]
fn criterion_8_classical_contrast() {
    let mut failures = Vec::new();
    for (f, quantum) in [(Family::Petersen, 21.0 / 50.0), (Family::Hypercube(3), 5.0 / 16.0)] {
        let g = named(f);
        let nu = g.vertex_count();
        let pi = classical::stationary_distribution(&g).unwrap();
        if pi.iter().any(|&x| x != 1.0 / nu as f64) {
            failures.push(format!("{f}: classical π not exactly uniform"));
        }
        let d = limiting_density(&g, DEFAULT_CLUSTER_TOL).unwrap();
        for p in 0..nu {
            if (d.get(p, p) - quantum).abs() > 1e-9 || (d.get(p, p) - 1.0 / nu as f64).abs() < 1e-3 {
                failures.push(format!("{f}: quantum d({p},{p}) = {}", d.get(p, p)));
            }
        }
    }
    verdict(
        8,
        failures.is_empty(),
        &if failures.is_empty() {
            "π uniform (1/10, 1/8) while d(p,p) = 21/50, 5/16".into()
        } else {
            failures.join("; ")
        },
    );
}

#[test]
fn criterion_9_projection_kernels() {
    let mut graphs: Vec<FiniteGraph> = test_families().into_iter().map(named).collect();
    graphs.extend(random_edge_lists(100, 32, 0x5eed).iter().map(|t| FiniteGraph::from_edge_list(t).unwrap()));
    let mut worst = [0.0f64; 3];
    for g in &graphs {
        let kernels = projection_kernels(&eigendecompose_symmetric(&g.adjacency(), DEFAULT_CLUSTER_TOL).unwrap());
        let n = g.vertex_count();
        let mut total = DMatrix::<f64>::zeros(n, n);
        for (i, a) in kernels.iter().enumerate() {
            worst[0] = worst[0].max((&a.matrix * &a.matrix - &a.matrix).amax());
            for b in &kernels[i + 1..] {
                worst[1] = worst[1].max((&a.matrix * &b.matrix).amax());
            }
            total += &a.matrix;
        }
        worst[2] = worst[2].max((total - DMatrix::<f64>::identity(n, n)).amax());
    }
    verdict(
        9,
        worst.iter().all(|&w| w <= 1e-10),
        &format!(
            "{} graphs: idempotence {:.2e}, orthogonality {:.2e}, completeness {:.2e} (≤ 1e-10)",
            graphs.len(),
            worst[0],
            worst[1],
            worst[2]
        ),
    );
}
