//! Acceptance run: one PASS/FAIL line per criterion, non-zero exit if any
//! criterion fails.

use lerw_core::conformal::verify_hit_formula;
use lerw_core::experiments::{cauchy_trend, convergence_experiment, puncture_demo, PunctureDomain};
use lerw_core::geometry::{Pt, Region, Q};
use lerw_core::graph::{grid_graph, loop_erase, loop_erase_dense, EmbeddedWeightedGraph, LatticePath};
use lerw_core::geometry::PlanePoint;
use lerw_core::hybrid::{beta_table, build_hybrid, CellSet, HybridLattice};
use lerw_core::lerw::{detect_quasi_loops, rejection_lerw_law, ust_law, ConditionedLerw, Law};
use lerw_core::potential::{diagonal_closed_form, PotentialTable};
use lerw_core::solver::{corner_escape, spanning_tree_count};
use lerw_core::walk::{RngStream, DEFAULT_STEP_BUDGET};
use lerw_core::Result;
use num_traits::ToPrimitive;
use rand::Rng;
use statrs::distribution::{ChiSquared, ContinuousCDF};
use std::collections::HashSet;
use std::sync::OnceLock;
use std::time::Instant;

const BUDGET: u64 = DEFAULT_STEP_BUDGET;

struct Outcome {
    pass: bool,
    detail: String,
}

fn verdict(pass: bool, detail: String) -> Result<Outcome> {
    Ok(Outcome { pass, detail })
}

fn table() -> &'static PotentialTable {
    static T: OnceLock<PotentialTable> = OnceLock::new();
    T.get_or_init(|| PotentialTable::new(420))
}

fn c1_beta_table() -> Result<Outcome> {
    let rows = beta_table(table(), 200, 5.0)?;
    let mut pass = true;
    let mut parts = vec![];
    for r in &rows {
        let ok = (r.max_beta - r.expected).abs() <= 0.02 && r.listed_attain_max;
        pass &= ok;
        parts.push(format!("{}: {:.3} (table {:.2}){}", r.label, r.max_beta, r.expected, if ok { "" } else { " !" }));
    }
    verdict(pass, parts.join("; "))
}

fn c2_potential() -> Result<Outcome> {
    let t = table();
    let (far, at) = t.residual_bound_scan(10.0, 200.0)?;
    let (global, gat) = t.residual_bound_scan(1.0, 200.0)?;
    let mut diag = 0.0f64;
    for n in 0..=t.radius() as u64 {
        diag = diag.max((t.raw(n as i64, n as i64)? - diagonal_closed_form(n)).abs());
    }
    let mut lap = (t.laplacian_at(0, 0)? - 1.0).abs();
    for x in 0..t.radius() as i64 {
        for y in 0..=x {
            if x > 0 {
                lap = lap.max(t.laplacian_at(x, y)?.abs());
            }
        }
    }
    let band = far > 0.015 && far < 0.0175;
    verdict(
        band && diag < 1e-12 && lap < 1e-9,
        format!(
            "max |R||z|^2 on [10,200] = {far:.6} at {at:?} (band (0.015, 0.0175)); over |z| >= 1: {global:.6} at {gat:?}; \
             diagonal err {diag:.1e}; max |Δa - δ0| {lap:.1e}"
        ),
    )
}

fn chi_square(law: &Law<Vec<(usize, usize)>>, cells: usize) -> f64 {
    let e = law.total as f64 / cells as f64;
    let seen: f64 = law.counts.values().map(|&c| (c as f64 - e).powi(2) / e).sum();
    seen + (cells - law.counts.len()) as f64 * e
}

fn c3_wilson() -> Result<Outcome> {
    let g = grid_graph(0, 1, (0, 2), (0, 1))?;
    let cells = spanning_tree_count(&g).count.to_usize().unwrap();
    let crit = ChiSquared::new((cells - 1) as f64).unwrap().inverse_cdf(0.99);
    let a = ust_law(&g, &[0, 1, 2, 3, 4, 5], 15_000, 11, BUDGET)?;
    let b = ust_law(&g, &[5, 2, 3, 0, 4, 1], 15_000, 12, BUDGET)?;
    let (xa, xb) = (chi_square(&a, cells), chi_square(&b, cells));
    verdict(
        cells == 15 && xa < crit && xb < crit,
        format!("{cells} trees; chi2 = {xa:.2}, {xb:.2} vs critical {crit:.2}"),
    )
}

fn grid5() -> (EmbeddedWeightedGraph, Vec<usize>) {
    let g = grid_graph(0, 1, (0, 4), (0, 4)).unwrap();
    let ring = (0..g.len())
        .filter(|&v| {
            let p = g.point(v);
            p.nx == 0 || p.ny == 0 || p.nx == 4 || p.ny == 4
        })
        .collect();
    (g, ring)
}

fn c4_conditioned() -> Result<Outcome> {
    let (g, ring) = grid5();
    let at = |x, y| g.index_of(&PlanePoint::int(x, y)).unwrap();
    let (b0, b1) = (at(0, 2), at(4, 3));
    let fwd = ConditionedLerw::new(&g, &ring, b0, b1)?.law(100_000, 41, BUDGET)?;
    let rev = ConditionedLerw::new(&g, &ring, b1, b0)?.law(100_000, 42, BUDGET)?;
    let rej = rejection_lerw_law(&g, &ring, b0, b1, 100_000, 43, BUDGET)?;
    let (s, o) = (fwd.tv(&rev), fwd.tv(&rej));
    verdict(s < 0.03 && o < 0.03, format!("TV(forward, reversed) = {s:.4}; TV(h-transform, rejection) = {o:.4}"))
}

fn c5_hit_formula() -> Result<Outcome> {
    let coarse = verify_hit_formula(16, (0, 0), 0)?;
    let fine = verify_hit_formula(64, (0, 0), 0)?;
    let pass = fine.max_rel_err_derivative <= 0.10
        && fine.max_rel_err_derivative < coarse.max_rel_err_derivative
        && (fine.predicted_mass - 1.0).abs() <= 0.05;
    verdict(
        pass,
        format!(
            "max rel err N=16 {:.4}, N=64 {:.4}; predicted mass {:.4}",
            coarse.max_rel_err_derivative, fine.max_rel_err_derivative, fine.predicted_mass
        ),
    )
}

fn c6_corner_escape() -> Result<Outcome> {
    let mut pass = true;
    let mut parts = vec![];
    for n in [16i64, 32, 64] {
        let mut r = vec![];
        for d in [1, 4, 16] {
            r.push(corner_escape(n, d)? * (n * n) as f64 / d as f64);
        }
        let (lo, hi) = r.iter().fold((f64::MAX, 0.0f64), |a, &x| (a.0.min(x), a.1.max(x)));
        pass &= hi / lo < 3.0;
        parts.push(format!("N={n}: pN^2/d in [{lo:.3}, {hi:.3}]"));
    }
    verdict(pass, parts.join("; "))
}

fn chronological(path: &[usize]) -> Vec<usize> {
    let mut p = path.to_vec();
    'outer: loop {
        for j in 0..p.len() {
            if let Some(i) = p[..j].iter().position(|&v| v == p[j]) {
                p.drain(i..j);
                continue 'outer;
            }
        }
        return p;
    }
}

fn quadratic_scan(pts: &[(f64, f64)], r: f64, eps: f64, centers: &[(f64, f64)]) -> Vec<(f64, f64)> {
    let d2 = |a: (f64, f64), b: (f64, f64)| (a.0 - b.0).powi(2) + (a.1 - b.1).powi(2);
    let mut out = vec![];
    for &z in centers {
        let close: Vec<usize> = (0..pts.len()).filter(|&i| d2(pts[i], z) <= eps * eps).collect();
        let hit = close.iter().any(|&i| {
            close.iter().filter(|&&j| j > i).any(|&j| {
                (i..=j).any(|a| (a..=j).any(|b| d2(pts[a], pts[b]) > r * r))
            })
        });
        if hit {
            out.push(z);
        }
    }
    out
}

fn walk(g: &EmbeddedWeightedGraph, start: usize, steps: usize, rng: &mut impl Rng) -> Vec<usize> {
    let mut p = vec![start];
    for _ in 0..steps {
        let nb: Vec<usize> = g.neighbors(*p.last().unwrap()).map(|x| x.0).collect();
        p.push(nb[rng.gen_range(0..nb.len())]);
    }
    p
}

fn c7_oracles() -> Result<Outcome> {
    let mut rng = RngStream::new(7, 0).rng();
    let mut scratch = vec![];
    let mut le_bad = 0;
    for _ in 0..10_000 {
        let w = rng.gen_range(2..=15);
        let g = grid_graph(0, 1, (0, w - 1), (0, w - 1))?;
        let start = rng.gen_range(0..g.len());
        let len = rng.gen_range(0..400);
        let p = walk(&g, start, len, &mut rng);
        let want = chronological(&p);
        let a = loop_erase(&LatticePath::new(&g, p.clone())?);
        if a.vertices() != &want[..] || loop_erase_dense(&p, &mut scratch, g.len()) != want {
            le_bad += 1;
        }
    }
    let g = grid_graph(0, 1, (-30, 30), (-30, 30))?;
    let centers: Vec<(f64, f64)> = (-12..=12).flat_map(|x| (-12..=12).map(move |y| (x as f64, y as f64))).collect();
    let origin = g.index_of(&PlanePoint::int(0, 0)).unwrap();
    let mut ql_bad = 0;
    for _ in 0..1000 {
        let p = walk(&g, origin, 120, &mut rng);
        let r = rng.gen_range(2.0..9.0);
        let eps = [0.4, 1.0, 1.5, 2.0][rng.gen_range(0..4)];
        let pts: Vec<(f64, f64)> = p.iter().map(|&v| g.coords(v)).collect();
        let got: Vec<(f64, f64)> = detect_quasi_loops(&g, &p, r, eps, &centers).iter().map(|q| q.center).collect();
        let mut want = quadratic_scan(&pts, r, eps, &centers);
        want.sort_by(|a, b| a.partial_cmp(b).unwrap());
        ql_bad += (got != want) as usize;
    }
    verdict(le_bad == 0 && ql_bad == 0, format!("loop erasure mismatches {le_bad}/10000; quasi-loop mismatches {ql_bad}/1000"))
}

fn c8_hybrid() -> Result<Outcome> {
    let t = PotentialTable::new(80);
    let mut support = 0.0f64;
    for d in [
        CellSet::finite([(0, 0)]),
        CellSet::finite([(0, 0), (1, 0), (1, 1), (-2, 3)]),
        CellSet::Quadrant { x_pos: true, y_pos: true },
        CellSet::HalfPlane { upper: false },
    ] {
        let lat = HybridLattice::new(d, 1)?;
        for v in [(0, 0), (1, 1), (-3, 2), (4, -1)] {
            if lat.level(v).is_none() {
                continue;
            }
            for w in lat.vertices_in(30) {
                if !lat.is_seam(w) {
                    support = support.max(lat.b_v_defect(&t, v, w)?.abs());
                }
            }
        }
    }
    let mut rng = RngStream::new(8, 0).rng();
    let (mut planar_bad, mut count_bad, mut order_bad) = (0, 0, 0);
    for i in 0..50 {
        let n = 1 + (i % 2) as i64;
        let k = rng.gen_range(1..30);
        let cells: HashSet<(i64, i64)> = (0..k).map(|_| (rng.gen_range(-5..5), rng.gen_range(-5..5))).collect();
        let nd = cells.len();
        let m = 7 * n;
        let g = build_hybrid(CellSet::finite(cells), n, (-m, m, -m, m))?;
        planar_bad += (g.planarity_violations() != 0) as usize;
        let (sg, sgg) = g.classify_seams();
        count_bad += (sgg.len() > 8 * nd) as usize;
        let sg: HashSet<usize> = sg.iter().copied().collect();
        let sgg: HashSet<usize> = sgg.iter().copied().collect();
        for v in 0..g.graph.len() {
            let Ok(k) = g.annihilation_order(v) else { continue };
            let ok = if sgg.contains(&v) {
                k >= 1
            } else if sg.contains(&v) {
                k >= 2
            } else {
                k == 4
            };
            order_bad += !ok as usize;
        }
    }
    verdict(
        support < 1e-8 && planar_bad == 0 && count_bad == 0 && order_bad == 0,
        format!(
            "max |Δb_v - δ_v| off the seam {support:.1e}; non-planar {planar_bad}/50; #seam intersections > 8#D in {count_bad}/50; \
             order violations {order_bad}"
        ),
    )
}

fn c9_convergence() -> Result<Outcome> {
    let d = Region::rect_int(-1, -1, 1, 1);
    let e = Region::rect(Q::from_integer(-1), Q::from_integer(-1), Q::from_integer(1), Q::new(1, 2));
    let a = Pt::frac(0, 1, -1, 4);
    let rows = convergence_experiment(&d, &e, &a, &[4, 5, 6, 7, 8], 100_000, 9, BUDGET)?;
    let trend = cauchy_trend(&rows);
    let ps: Vec<String> = rows.iter().map(|r| format!("p{}={:.4}±{:.4}", r.n, r.estimate.value, r.estimate.std_error)).collect();
    let ds: Vec<String> = trend.iter().map(|s| format!("d{}={:.4}→{:.4} (2σ={:.4})", s.n, s.diff, s.next_diff, 2.0 * s.sigma)).collect();
    verdict(trend.iter().all(|s| s.ok), format!("{}; {}", ps.join(" "), ds.join(" ")))
}

fn c10_puncture() -> Result<Outcome> {
    let rows = puncture_demo(&PunctureDomain::standard(), &[5, 6, 7], 0, 0, BUDGET)?;
    let (p5, p6, p7) = (rows[0].outer, rows[1].outer, rows[2].outer);
    verdict(
        (p5 - p6).abs() >= 0.2,
        format!("q(outer square) at n = 5, 6, 7: {p5:.4}, {p6:.4}, {p7:.4}; drop at n1 = 6: {:.4}", p5 - p6),
    )
}

fn main() {
    let criteria: Vec<(&str, fn() -> Result<Outcome>)> = vec![
        ("beta table", c1_beta_table),
        ("potential asymptotics", c2_potential),
        ("Wilson uniformity", c3_wilson),
        ("conditioned LERW symmetry", c4_conditioned),
        ("hitting formula", c5_hit_formula),
        ("corner escape", c6_corner_escape),
        ("loop-erasure and quasi-loop oracles", c7_oracles),
        ("hybrid-graph structure", c8_hybrid),
        ("convergence trend", c9_convergence),
        ("non-convergence demo", c10_puncture),
    ];
    let filter: Vec<String> = std::env::args().skip(1).filter(|a| !a.starts_with('-')).collect();
    let mut failed = vec![];
    for (i, (name, f)) in criteria.into_iter().enumerate() {
        let id = i + 1;
        if !filter.is_empty() && !filter.iter().any(|s| s == &id.to_string()) {
            continue;
        }
        let t0 = Instant::now();
        let (pass, detail) = match f() {
            Ok(o) => (o.pass, o.detail),
            Err(e) => (false, format!("error: {e}")),
        };
        println!(
            "criterion {id:>2} {:<36} {} ({:.1}s): {detail}",
            name,
            if pass { "PASS" } else { "FAIL" },
            t0.elapsed().as_secs_f64()
        );
        if !pass {
            failed.push(id);
        }
    }
    if !failed.is_empty() {
        println!("acceptance: failed criteria {failed:?}");
        std::process::exit(1);
    }
    println!("acceptance: all criteria passed");
}
