use lerw_core::geometry::PlanePoint;
use lerw_core::graph::{grid_graph, laplacian_dense, EmbeddedWeightedGraph};
use lerw_core::solver::*;
use lerw_core::walk::estimate_hit;
use lerw_core::Error;
use num_bigint::BigInt;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

/// `[0, n-1]^2` split into the ring and the rest.
fn square(n: i64) -> (EmbeddedWeightedGraph, Vec<usize>, Vec<usize>) {
    let g = grid_graph(0, 1, (0, n - 1), (0, n - 1)).unwrap();
    let (mut inner, mut ring) = (vec![], vec![]);
    for v in 0..g.len() {
        let p = g.point(v);
        if p.nx == 0 || p.ny == 0 || p.nx == n - 1 || p.ny == n - 1 {
            ring.push(v);
        } else {
            inner.push(v);
        }
    }
    (g, inner, ring)
}

fn random_weights(g: &EmbeddedWeightedGraph, seed: u64) -> EmbeddedWeightedGraph {
    let edges = g.edges();
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let w: Vec<f64> = edges.iter().map(|_| rng.gen_range(0.25..4.0)).collect();
    g.reweighted(|a, b, _| {
        let k = edges.iter().position(|e| (e.0, e.1) == (a.min(b), a.max(b))).unwrap();
        w[k]
    })
    .unwrap()
}

#[test]
fn dirichlet_trivial_solutions() {
    let (g, inner, ring) = square(9);
    let values = vec![2.5; ring.len()];
    let f = solve_dirichlet(&g, &DirichletProblem { interior: inner.clone(), boundary: ring.clone(), values }).unwrap();
    assert!(inner.iter().all(|&v| (f[v] - 2.5).abs() < 1e-12));
    let values: Vec<f64> = ring.iter().map(|&v| g.point(v).nx as f64).collect();
    let f = solve_dirichlet(&g, &DirichletProblem { interior: inner.clone(), boundary: ring.clone(), values }).unwrap();
    for &v in &inner {
        assert!((f[v] - g.point(v).nx as f64).abs() < 1e-10);
    }
}

#[test]
fn dirichlet_residual_and_maximum_principle() {
    let (g, inner, ring) = square(14);
    let g = random_weights(&g, 5);
    let mut rng = ChaCha8Rng::seed_from_u64(1);
    let values: Vec<f64> = ring.iter().map(|_| rng.gen_range(-3.0..7.0)).collect();
    let (lo, hi) = values.iter().fold((f64::MAX, f64::MIN), |a, &x| (a.0.min(x), a.1.max(x)));
    let p = DirichletProblem { interior: inner.clone(), boundary: ring.clone(), values: values.clone() };
    let f = solve_dirichlet(&g, &p).unwrap();
    for (&b, &x) in ring.iter().zip(&values) {
        assert_eq!(f[b], x);
    }
    let scale = values.iter().map(|x| x.abs()).fold(0.0, f64::max) + 1.0;
    for &v in &inner {
        assert!(laplacian_dense(&g, &f, v).abs() < 1e-10 * scale);
        assert!(f[v] >= lo - 1e-12 && f[v] <= hi + 1e-12);
    }
}

#[test]
fn dirichlet_errors() {
    let (g, inner, ring) = square(6);
    let p = DirichletProblem { interior: inner.clone(), boundary: ring.clone(), values: vec![] };
    assert!(matches!(solve_dirichlet(&g, &p), Err(Error::InvalidInput(_))));
    let all: Vec<usize> = (0..g.len()).collect();
    let p = DirichletProblem { interior: all, boundary: vec![], values: vec![] };
    assert!(matches!(solve_dirichlet(&g, &p), Err(Error::Singular(_))));
}

#[test]
fn indicator_data_matches_monte_carlo() {
    let (g, inner, ring) = square(10);
    let target = g.index_of(&PlanePoint::int(0, 4)).unwrap();
    let values: Vec<f64> = ring.iter().map(|&b| if b == target { 1.0 } else { 0.0 }).collect();
    let f = solve_dirichlet(&g, &DirichletProblem { interior: inner, boundary: ring.clone(), values }).unwrap();
    let c = g.index_of(&PlanePoint::int(4, 4)).unwrap();
    let est = estimate_hit(&g, c, &[target], &ring, 100_000, 77).unwrap();
    assert!((est.value - f[c]).abs() < 3.0 * est.std_error, "{} vs {}", est.value, f[c]);
}

#[test]
fn harmonic_measure_is_a_distribution() {
    let (g, _, ring) = square(12);
    let g = random_weights(&g, 9);
    for start in [g.index_of(&PlanePoint::int(5, 6)).unwrap(), ring[3], ring[20]] {
        let q = harmonic_measure(&g, start, &ring).unwrap();
        assert!(q.iter().all(|&x| x >= 0.0));
        assert!((q.iter().sum::<f64>() - 1.0).abs() < 1e-10);
    }
}

#[test]
fn harmonic_measure_unreachable_set() {
    let g = EmbeddedWeightedGraph::from_edges(
        1,
        (0..4).map(|i| PlanePoint::int(i, 0)).collect(),
        &[(0, 1, 1.0), (2, 3, 1.0)],
    )
    .unwrap();
    assert!(harmonic_measure(&g, 0, &[3]).is_err());
}

#[test]
fn green_function_invariants_and_symmetry() {
    let (g, inner, ring) = square(12);
    let g = random_weights(&g, 3);
    let (v, w) = (inner[7], inner[60]);
    let lv = green_function(&g, &inner, &ring, v).unwrap();
    let lw = green_function(&g, &inner, &ring, w).unwrap();
    for &b in &ring {
        assert_eq!(lv.values[b], 0.0);
    }
    for &u in &inner {
        let want = if u == v { 1.0 } else { 0.0 };
        assert!((laplacian_dense(&g, &lv.values, u) - want).abs() < 1e-10);
        assert!(lv.values[u] <= 0.0);
    }
    assert!((lv.values[w] - lw.values[v]).abs() < 1e-12);
    // expected visits G(x, y) = -l_y(x) W(y) are reversible with respect to W
    let visits = |from: usize, to: usize, l: &GreenFunction| -l.values[from] * g.total_weight(to);
    let gvw = visits(v, w, &lw);
    let gwv = visits(w, v, &lv);
    assert!((gvw / g.total_weight(w) - gwv / g.total_weight(v)).abs() < 1e-12);
    assert!(matches!(green_function(&g, &inner, &ring, ring[0]), Err(Error::InvalidInput(_))));
}

#[test]
fn hitting_identity_links_green_function_and_harmonic_measure() {
    let (g, inner, ring) = square(16);
    for u in [inner[0], inner[50], inner[100]] {
        let l = green_function(&g, &inner, &ring, u).unwrap();
        let q = harmonic_measure(&g, u, &ring).unwrap();
        for (&b, &qb) in ring.iter().zip(&q) {
            let s: f64 = g.neighbors(b).map(|(s, w)| w * l.values[s]).sum();
            assert!((qb + s).abs() < 1e-8, "{qb} {s}");
        }
    }
}

#[test]
fn spanning_tree_counts() {
    assert_eq!(spanning_tree_count(&grid_graph(0, 1, (0, 2), (0, 1)).unwrap()).count, BigInt::from(15));
    // ladder and grid values from the matrix-tree theorem
    assert_eq!(spanning_tree_count(&grid_graph(0, 1, (0, 3), (0, 1)).unwrap()).count, BigInt::from(56));
    assert_eq!(spanning_tree_count(&grid_graph(0, 1, (0, 3), (0, 3)).unwrap()).count, BigInt::from(100352));
    let big = spanning_tree_count(&grid_graph(0, 1, (0, 7), (0, 7)).unwrap());
    assert_eq!(big.count.to_string(), "126231322912498539682594816");
}

#[test]
fn corner_escape_band() {
    for n in [16i64, 32, 64] {
        let r: Vec<f64> = [1, 4, 16]
            .iter()
            .map(|&d| corner_escape(n, d).unwrap() * (n * n) as f64 / d as f64)
            .collect();
        let (lo, hi) = r.iter().fold((f64::MAX, 0.0f64), |a, &x| (a.0.min(x), a.1.max(x)));
        assert!(lo >= 0.1 && hi <= 10.0, "N={n}: {r:?}");
        assert!(hi / lo < 3.0, "N={n}: {r:?}");
    }
    assert!(corner_escape(8, 9).is_err());
}

#[test]
fn center_hit_is_linear_near_corners() {
    let diam2 = 8.0f64;
    for n in [32i64, 64] {
        let hits = square_center_hits(n).unwrap();
        assert!((hits.iter().map(|h| h.q).sum::<f64>() - 1.0).abs() < 1e-10);
        let r: Vec<f64> = hits
            .iter()
            .filter(|h| h.corner_distance <= diam2.sqrt() / 4.0)
            .map(|h| h.q * n as f64 * diam2 / h.corner_distance)
            .collect();
        let (lo, hi) = r.iter().fold((f64::MAX, 0.0f64), |a, &x| (a.0.min(x), a.1.max(x)));
        assert!(hi / lo < 4.0, "N={n}: {lo} {hi}");
    }
}
