use lerw_core::hybrid::*;
use lerw_core::potential::{Normalization, PotentialTable};
use lerw_core::walk::step_distribution;
use proptest::prelude::*;
use std::collections::HashSet;
use std::f64::consts::PI;

fn random_d() -> impl Strategy<Value = Vec<(i64, i64)>> {
    prop::collection::vec((-5i64..5, -5i64..5), 1..30)
}

fn dedup(cells: Vec<(i64, i64)>) -> CellSet {
    CellSet::finite(cells.into_iter().collect::<HashSet<_>>())
}

proptest! {
    #![proptest_config(ProptestConfig { cases: 50, .. ProptestConfig::default() })]

    #[test]
    fn planar_for_random_defining_sets(cells in random_d(), n in 1i64..3) {
        let g = build_hybrid(dedup(cells), n, (-5 * n, 5 * n, -5 * n, 5 * n)).unwrap();
        prop_assert_eq!(g.planarity_violations(), 0);
    }

    #[test]
    fn seam_counts_and_inclusion(cells in random_d(), n in 1i64..4) {
        let d = dedup(cells);
        let nd = d.len_finite().unwrap();
        let m = 7 * n;
        let g = build_hybrid(d, n, (-m, m, -m, m)).unwrap();
        let (sg, sgg) = g.classify_seams();
        prop_assert!(sgg.len() <= 8 * nd, "#seam intersections {} for #D {}", sgg.len(), nd);
        prop_assert!(sg.len() <= 16 * n as usize * nd);
        let s: HashSet<_> = sg.iter().collect();
        prop_assert!(sgg.iter().all(|v| s.contains(v)));
    }

    #[test]
    fn annihilation_orders_follow_seam_class(cells in random_d(), n in 1i64..3) {
        let m = 7 * n;
        let g = build_hybrid(dedup(cells), n, (-m, m, -m, m)).unwrap();
        let (sg, sgg) = g.classify_seams();
        let sg: HashSet<_> = sg.iter().copied().collect();
        let sgg: HashSet<_> = sgg.iter().copied().collect();
        for v in 0..g.graph.len() {
            let Ok(k) = g.annihilation_order(v) else { continue };
            if sgg.contains(&v) {
                prop_assert_eq!(k, 1);
            } else if sg.contains(&v) {
                prop_assert!(k >= 2);
            } else {
                prop_assert_eq!(k, 4);
            }
        }
    }
}

#[test]
fn seam_support_of_b_v_defect() {
    let t = PotentialTable::new(80);
    let configs = vec![
        CellSet::finite([(0, 0)]),
        CellSet::finite([(0, 0), (1, 0), (1, 1), (-2, 3)]),
        CellSet::Quadrant { x_pos: true, y_pos: true },
        CellSet::HalfPlane { upper: false },
    ];
    for d in configs {
        let lat = HybridLattice::new(d, 1).unwrap();
        for v in [(0, 0), (1, 1), (-3, 2), (4, -1)] {
            if lat.level(v).is_none() {
                continue;
            }
            for w in lat.vertices_in(30) {
                if lat.is_seam(w) {
                    continue;
                }
                let e = lat.b_v_defect(&t, v, w).unwrap();
                assert!(e.abs() < 1e-8, "{v:?} {w:?} {e}");
            }
        }
    }
}

#[test]
fn b_v_reduces_to_the_potential() {
    let t = PotentialTable::new(40);
    let lat = HybridLattice::new(CellSet::Empty, 1).unwrap();
    for (v, w) in [((0, 0), (0, 0)), ((2, 4), (-6, 0)), ((0, 2), (8, 8))] {
        let b = lat.b_v(&t, v, w).unwrap();
        let a = t
            .potential((v.0 - w.0) / 2, (v.1 - w.1) / 2, Normalization::Asymptotic)
            .unwrap();
        assert!((a - b).abs() < 1e-15);
    }
    assert_eq!(lat.b_v(&t, (0, 0), (0, 0)).unwrap(), t.potential(0, 0, Normalization::Asymptotic).unwrap());
    let q = HybridLattice::new(CellSet::Quadrant { x_pos: true, y_pos: true }, 1).unwrap();
    let (v, w) = ((11, 7), (15, 20));
    let direct = t.potential(v.0 - w.0, v.1 - w.1, Normalization::Asymptotic).unwrap() - 2f64.ln() / (2.0 * PI);
    assert!((q.b_v(&t, v, w).unwrap() - direct).abs() < 1e-15);
}

#[test]
fn half_plane_has_no_seam_intersections() {
    let g = build_hybrid(CellSet::HalfPlane { upper: false }, 2, (-6, 6, -6, 6)).unwrap();
    assert!(!g.seams.is_empty());
    assert!(g.seam_intersections.is_empty());
}

#[test]
fn single_cell_seam_corners() {
    let g = build_hybrid(CellSet::finite([(0, 0)]), 1, (-3, 4, -3, 4)).unwrap();
    let (_, sgg) = g.classify_seams();
    let pts: HashSet<_> = sgg.iter().map(|&v| g.units[v]).collect();
    let want: HashSet<_> = [(2, 0), (-2, 0), (0, 2), (0, -2)].into_iter().collect();
    assert_eq!(pts, want);
    let g2 = build_hybrid(CellSet::finite([(0, 0)]), 2, (-6, 8, -6, 8)).unwrap();
    assert!(g2.seam_intersections.len() <= 8);
}

#[test]
fn seam_step_distributions() {
    let g = build_hybrid(CellSet::HalfPlane { upper: false }, 1, (-4, 4, -4, 4)).unwrap();
    // coarse seam vertex at 0, fine seam vertices on the row y = -1
    let coarse = g.index_of((0, 0)).unwrap();
    let mut w: Vec<f64> = g.graph.neighbors(coarse).map(|x| x.1).collect();
    w.sort_by(|a, b| b.partial_cmp(a).unwrap());
    assert_eq!(w, vec![1.0, 1.0, 1.0, 0.5, 0.25, 0.25]);
    for (x, want) in [(0, vec![1.0, 1.0, 1.0, 0.5]), (1, vec![1.0, 1.0, 1.0, 0.25, 0.25])] {
        let v = g.index_of((x, -2)).unwrap();
        let mut w: Vec<f64> = g.graph.neighbors(v).map(|x| x.1).collect();
        w.sort_by(|a, b| b.partial_cmp(a).unwrap());
        assert_eq!(w, want);
        let p = step_distribution(&g.graph, v).unwrap();
        assert!((p.iter().map(|x| x.1).sum::<f64>() - 1.0).abs() < 1e-12);
        assert!(p.iter().all(|x| (x.1 * 3.5 - g.graph.weight(v, x.0)).abs() < 1e-12));
    }
}

#[test]
fn easy_rectangle_strength() {
    let plain = HybridLattice::new(CellSet::Empty, 4).unwrap();
    let sq = EasyRectangle::new(-16, 16, -16, 16).unwrap();
    assert_eq!(sq.strength(&plain), 1.0);
    assert!(sq.is_easy(&plain));
    let wide = EasyRectangle::new(-16, 16, -8, 8).unwrap();
    assert_eq!(wide.strength(&plain), 0.5);
    // a seam through the middle leaves the corners far away
    let half = HybridLattice::new(CellSet::HalfPlane { upper: false }, 4).unwrap();
    let s = sq.strength(&half);
    assert!(s > 0.3 && s <= 1.0, "{s}");
    // a seam passing next to a corner makes the rectangle weak
    let shifted = EasyRectangle::new(-16, 16, -2, 30).unwrap();
    assert!(shifted.strength(&half) < 0.1);
    assert!(EasyRectangle::new(-15, 16, 0, 2).is_err());
}

#[test]
fn beta_translation_invariance_on_a_straight_seam() {
    let t = PotentialTable::new(140);
    let (betas, _, _) = beta_for(&CellSet::HalfPlane { upper: false }, &t, 60, 3.0, 20).unwrap();
    let get = |p| betas.iter().find(|b| b.0 == p).unwrap().1;
    for y in [-2, -3, 0] {
        for x in -2..2 {
            if betas.iter().any(|b| b.0 == (x, y)) && betas.iter().any(|b| b.0 == (x + 2, y)) {
                assert!((get((x, y)) - get((x + 2, y))).abs() < 1e-6);
            }
        }
    }
}

#[test]
fn beta_table_needs_a_large_enough_potential() {
    let t = PotentialTable::new(50);
    assert!(beta_table(&t, 40, 5.0).is_err());
}
