//! Experiment drivers: scaling-limit convergence of containment
//! probabilities, the punctured square with non-convergent hitting
//! probabilities, the hybrid interpolation sweep, and ρ-diagnostics.

use crate::error::{Error, Result};
use crate::geometry::{PlanePoint, Pt, Region, Q};
use crate::graph::{graph_boundary, grid_graph, loop_erase_dense, nearest_vertex, EmbeddedWeightedGraph};
use crate::hybrid::{build_hybrid, Cell, CellSet};
use crate::lerw::diameter_exceeds;
use crate::solver::harmonic_measure;
use crate::walk::{count_hits, par_chunks, walk_into, MCEstimate, RngStream, StopRule, WalkSampler, CHUNK};
use rand::seq::index::sample;
use serde::Serialize;
use std::collections::VecDeque;

/// splitmix64 of `seed` combined with two labels; used to give every
/// experiment cell its own seed.
pub fn derive_seed(seed: u64, a: u64, b: u64) -> u64 {
    let mut z = seed ^ a.wrapping_mul(0x9E37_79B9_7F4A_7C15) ^ b.wrapping_mul(0xC2B2_AE3D_27D4_EB4F);
    z = z.wrapping_add(0x9E37_79B9_7F4A_7C15);
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}

/// A domain discretized on `2^-level Z^2`: the grid window, `∂_G 𝒟` and
/// `𝒟°`.
#[derive(Clone, Debug)]
pub struct DomainGrid {
    pub graph: EmbeddedWeightedGraph,
    pub level: u32,
    pub boundary: Vec<usize>,
    pub interior: Vec<usize>,
}

impl DomainGrid {
    /// Grid over the bounding box of `region`, padded by one vertex plus
    /// `margin` vertices on every side.
    pub fn from_region(region: &Region, level: u32, margin: i64) -> Result<Self> {
        if level > 24 {
            return Err(Error::InvalidInput(format!("level {level} too fine")));
        }
        let b = region
            .bounding_box()
            .ok_or_else(|| Error::InvalidInput("region has no bounded part".into()))?;
        let s = (1u64 << level) as f64;
        let lo = |x: f64| (x * s).floor() as i64 - 1 - margin;
        let hi = |x: f64| (x * s).ceil() as i64 + 1 + margin;
        let graph = grid_graph(level, 1, (lo(b[0]), hi(b[1])), (lo(b[2]), hi(b[3])))?;
        let bd = graph_boundary(&graph, region)?;
        Ok(DomainGrid { graph, level, boundary: bd.boundary, interior: bd.interior })
    }

    pub fn mesh(&self) -> f64 {
        0.5f64.powi(self.level as i32)
    }

    /// The vertex `(i + i j) 2^-level`.
    pub fn vertex_at(&self, i: i64, j: i64) -> Option<usize> {
        self.graph.index_of(&PlanePoint::new(i, j, self.level))
    }
}

/// Counts, for each mask, the walks from `start` stopped on `stop` whose
/// loop erasure minus its terminal vertex lies in the mask.
fn containment_counts(
    g: &EmbeddedWeightedGraph,
    start: usize,
    stop: &[usize],
    masks: &[Vec<bool>],
    samples: u64,
    seed: u64,
    step_budget: u64,
) -> Result<Vec<u64>> {
    let rule = StopRule::new(g.len(), stop, 0)?;
    if !rule.reachable_from(g, start) {
        return Err(Error::InvalidInput("boundary unreachable from the start".into()));
    }
    let sampler = WalkSampler::new(g);
    let parts = par_chunks(seed, samples, CHUNK, |s, m| {
        let mut rng = s.rng();
        let (mut buf, mut scratch) = (Vec::new(), Vec::new());
        let mut hits = vec![0u64; masks.len()];
        for _ in 0..m {
            walk_into(&sampler, start, &rule, &mut rng, step_budget, &mut buf)?;
            let le = loop_erase_dense(&buf, &mut scratch, g.len());
            let body = &le[..le.len() - 1];
            for (h, mask) in hits.iter_mut().zip(masks) {
                if body.iter().all(|&v| mask[v]) {
                    *h += 1;
                }
            }
        }
        Ok(hits)
    })?;
    let mut total = vec![0u64; masks.len()];
    for p in parts {
        for (t, h) in total.iter_mut().zip(p) {
            *t += h;
        }
    }
    Ok(total)
}

fn region_mask(g: &EmbeddedWeightedGraph, e: &Region) -> Vec<bool> {
    (0..g.len()).map(|v| e.contains(&g.exact(v))).collect()
}

#[derive(Clone, Copy, Debug, Serialize)]
pub struct ConvergenceRow {
    pub n: u32,
    pub mesh: f64,
    pub estimate: MCEstimate,
    /// Coarse mesh relative to the distance from `a` to the boundaries,
    /// or an estimate of exactly 0 or 1.
    pub degenerate: bool,
}

/// `ℙ(LE(R_n) ⊂ ℰ)` for each level, with `R_n` the walk on `2^-n Z^2`
/// from the vertex nearest `a`, stopped on `∂_G 𝒟`.
pub fn convergence_experiment(
    domain: &Region,
    e: &Region,
    a: &Pt,
    levels: &[u32],
    samples: u64,
    seed: u64,
    step_budget: u64,
) -> Result<Vec<ConvergenceRow>> {
    let mut rows = convergence_nested(domain, std::slice::from_ref(e), a, levels, samples, seed, step_budget)?;
    Ok(rows.remove(0))
}

/// As `convergence_experiment` for several `ℰ` at once, evaluated on
/// the same trajectories; one row list per entry of `es`.
pub fn convergence_nested(
    domain: &Region,
    es: &[Region],
    a: &Pt,
    levels: &[u32],
    samples: u64,
    seed: u64,
    step_budget: u64,
) -> Result<Vec<Vec<ConvergenceRow>>> {
    if es.is_empty() {
        return Err(Error::InvalidInput("no target set".into()));
    }
    if !domain.contains(a) || es.iter().any(|e| !e.contains(a)) {
        return Err(Error::InvalidInput("start point must lie in both sets".into()));
    }
    let af = a.to_f64();
    let scale = es.iter().map(|e| e.boundary_distance(af)).fold(domain.boundary_distance(af), f64::min);
    let mut out = vec![Vec::new(); es.len()];
    for &n in levels {
        let grid = DomainGrid::from_region(domain, n, 0)?;
        let start = nearest_vertex(&grid.graph, a)?;
        let masks: Vec<Vec<bool>> = es.iter().map(|e| region_mask(&grid.graph, e)).collect();
        let level_seed = derive_seed(seed, n as u64, 0);
        let hits = containment_counts(&grid.graph, start, &grid.boundary, &masks, samples, level_seed, step_budget)?;
        for (rows, h) in out.iter_mut().zip(hits) {
            rows.push(ConvergenceRow {
                n,
                mesh: grid.mesh(),
                estimate: MCEstimate::bernoulli(h, samples, level_seed),
                degenerate: grid.mesh() > scale / 4.0 || h == 0 || h == samples,
            });
        }
    }
    Ok(out)
}

/// One comparison of consecutive differences `d_n = |p_n - p_{n+1}|`.
#[derive(Clone, Copy, Debug, Serialize)]
pub struct TrendStep {
    pub n: u32,
    pub diff: f64,
    pub next_diff: f64,
    /// Combined standard error of `d_n` and `d_{n+1}`.
    pub sigma: f64,
    /// `d_{n+1} <= d_n + 2σ`.
    pub ok: bool,
}

pub fn cauchy_trend(rows: &[ConvergenceRow]) -> Vec<TrendStep> {
    rows.windows(3)
        .map(|w| {
            let (p, se): (Vec<f64>, Vec<f64>) = w.iter().map(|r| (r.estimate.value, r.estimate.std_error)).unzip();
            let diff = (p[0] - p[1]).abs();
            let next_diff = (p[1] - p[2]).abs();
            let sigma = (se[0] * se[0] + 2.0 * se[1] * se[1] + se[2] * se[2]).sqrt();
            TrendStep { n: w[0].n, diff, next_diff, sigma, ok: next_diff <= diff + 2.0 * sigma }
        })
        .collect()
}

/// A closed fat Cantor set, stored as its finite-stage intervals.
#[derive(Clone, Debug)]
pub struct CantorSet {
    intervals: Vec<(f64, f64)>,
}

impl CantorSet {
    /// Starting from `[lo, hi]`, stage `j` removes from every interval
    /// its open middle part of length `gap (hi - lo) 4^-j`. The limit has
    /// measure `(1 - gap/2)(hi - lo)`.
    pub fn new(lo: f64, hi: f64, gap: f64, stages: u32) -> Result<Self> {
        if !(lo < hi) || !(0.0..1.0).contains(&gap) || stages > 20 {
            return Err(Error::InvalidInput("bad Cantor parameters".into()));
        }
        let mut intervals = vec![(lo, hi)];
        for j in 1..=stages {
            let cut = gap * (hi - lo) * 0.25f64.powi(j as i32);
            intervals = intervals
                .into_iter()
                .flat_map(|(a, b)| {
                    let m = 0.5 * (a + b);
                    [(a, m - 0.5 * cut), (m + 0.5 * cut, b)]
                })
                .collect();
        }
        Ok(CantorSet { intervals })
    }

    /// `E' ⊂ ]-1/3, 1/3[` with measure above ½, its hull shifted off the
    /// rationals by `(√2 - 1)/64`.
    pub fn standard(stages: u32) -> Result<Self> {
        let theta = (2f64.sqrt() - 1.0) / 64.0;
        CantorSet::new(-1.0 / 3.0 + theta, 1.0 / 3.0 - theta, 0.25, stages)
    }

    pub fn intervals(&self) -> &[(f64, f64)] {
        &self.intervals
    }

    pub fn measure(&self) -> f64 {
        self.intervals.iter().map(|(a, b)| b - a).sum()
    }

    pub fn distance(&self, x: f64) -> f64 {
        let k = self.intervals.partition_point(|&(_, b)| b < x);
        let mut d = f64::INFINITY;
        for &(a, b) in self.intervals[k.saturating_sub(1)..(k + 1).min(self.intervals.len())].iter() {
            d = d.min(if x < a { a - x } else if x > b { x - b } else { 0.0 });
        }
        d
    }
}

/// The punctured square `(-1,1)^2 ∖ (E ∪ ⋃ P_k)`.
///
/// `E` sits on the lines `x, y = ±1/3` over a set avoiding the dyadics,
/// so it never meets a grid edge and plays no role in any `∂_G`. The
/// point set `P_k` is made of odd multiples of `2^-n_k`; it becomes a set
/// of vertices from level `n_k` on and is invisible before.
#[derive(Clone, Debug)]
pub struct PunctureDomain {
    pub schedule: Vec<u32>,
    pub cantor: CantorSet,
}

impl PunctureDomain {
    pub fn new(schedule: Vec<u32>, cantor_stages: u32) -> Result<Self> {
        if schedule.is_empty() || schedule[0] < 2 || schedule.windows(2).any(|w| w[0] >= w[1]) {
            return Err(Error::InvalidInput("schedule must increase from at least 2".into()));
        }
        if *schedule.last().unwrap() > 24 {
            return Err(Error::InvalidInput("schedule too fine".into()));
        }
        Ok(PunctureDomain { schedule, cantor: CantorSet::standard(cantor_stages)? })
    }

    /// `n_1 = 6`, `n_2 = 10`.
    pub fn standard() -> Self {
        PunctureDomain::new(vec![6, 10], 12).unwrap()
    }

    /// `r_k` as an odd numerator over `2^{n_k}` (stages count from 1).
    pub fn radius(&self, k: usize) -> i64 {
        let m = (1i64 << self.schedule[k - 1]) / 3;
        if m % 2 == 0 {
            m + 1
        } else {
            m
        }
    }

    /// `P_k ∩ (-1,1)^2` as numerators over `2^{n_k}`, sorted.
    pub fn obstacle(&self, k: usize) -> Vec<(i64, i64)> {
        let s = 1i64 << self.schedule[k - 1];
        let r = self.radius(k);
        let mut pts = Vec::new();
        for x in (1 - s..s).filter(|x| x.rem_euclid(2) == 1) {
            if self.cantor.distance(x as f64 / s as f64) < 1.0 / k as f64 {
                pts.extend([(x, r), (x, -r), (r, x), (-r, x)]);
            }
        }
        pts.sort_unstable();
        pts.dedup();
        pts
    }

    /// Stages whose points are vertices of `2^-n Z^2`.
    pub fn active(&self, n: u32) -> Vec<usize> {
        (1..=self.schedule.len()).filter(|&k| self.schedule[k - 1] <= n).collect()
    }

    /// The discretization at level `n`: `∂_G 𝒟` is the outer ring without
    /// its corners, together with the active obstacle points.
    pub fn grid(&self, n: u32) -> Result<DomainGrid> {
        if n > 12 {
            return Err(Error::InvalidInput(format!("level {n} too fine for the puncture grid")));
        }
        let s = 1i64 << n;
        let graph = grid_graph(n, 1, (-s, s), (-s, s))?;
        // corners only have edges along the sides, so they are neither
        // boundary nor interior
        let mut is_b = vec![false; graph.len()];
        let mut corner = vec![false; graph.len()];
        for v in 0..graph.len() {
            let (i, j) = graph.point(v).at_scale(n);
            corner[v] = i.abs() == s && j.abs() == s;
            is_b[v] = (i.abs() == s || j.abs() == s) && !corner[v];
        }
        for k in self.active(n) {
            let up = 1i64 << (n - self.schedule[k - 1]);
            for (x, y) in self.obstacle(k) {
                let v = graph
                    .index_of(&PlanePoint::new(x * up, y * up, n))
                    .ok_or_else(|| Error::InvalidInput("obstacle outside the grid".into()))?;
                is_b[v] = true;
            }
        }
        let boundary = (0..graph.len()).filter(|&v| is_b[v]).collect();
        let interior = (0..graph.len()).filter(|&v| !is_b[v] && !corner[v]).collect();
        Ok(DomainGrid { graph, level: n, boundary, interior })
    }

    /// The domain with stages `1..=stages` as exact geometry, for
    /// cross-checks against `graph_boundary`.
    pub fn region(&self, stages: usize) -> Region {
        let mut pts = Vec::new();
        for k in 1..=stages.min(self.schedule.len()) {
            let d = 1i128 << self.schedule[k - 1];
            pts.extend(self.obstacle(k).into_iter().map(|(x, y)| Pt::frac(x as i128, d, y as i128, d)));
        }
        Region::rect_int(-1, -1, 1, 1).minus(Region::Points(pts))
    }
}

#[derive(Clone, Copy, Debug, Serialize)]
pub struct PunctureRow {
    pub n: u32,
    pub active_stages: usize,
    pub obstacle_vertices: usize,
    /// Exact `q(0, ∂[-1,1]^2, ∂_G 𝒟)`.
    pub outer: f64,
    pub estimate: Option<MCEstimate>,
}

/// Exact hitting probabilities of the outer square from 0 at each level,
/// with a Monte Carlo estimate alongside when `samples > 0`.
pub fn puncture_demo(
    dom: &PunctureDomain,
    levels: &[u32],
    samples: u64,
    seed: u64,
    step_budget: u64,
) -> Result<Vec<PunctureRow>> {
    let mut rows = Vec::new();
    for &n in levels {
        let grid = dom.grid(n)?;
        let g = &grid.graph;
        let origin = grid.vertex_at(0, 0).unwrap();
        let s = 1i64 << n;
        let ring: Vec<usize> = grid
            .boundary
            .iter()
            .copied()
            .filter(|&v| {
                let (i, j) = g.point(v).at_scale(n);
                i.abs() == s || j.abs() == s
            })
            .collect();
        let q = harmonic_measure(g, origin, &grid.boundary)?;
        let outer = grid
            .boundary
            .iter()
            .zip(&q)
            .filter(|(v, _)| ring.binary_search(v).is_ok())
            .map(|(_, x)| x)
            .sum();
        let estimate = if samples > 0 {
            let level_seed = derive_seed(seed, n as u64, 1);
            let c = count_hits(g, origin, &ring, &grid.boundary, samples, level_seed, step_budget)?;
            Some(MCEstimate::bernoulli(c.in_a, samples, level_seed))
        } else {
            None
        };
        rows.push(PunctureRow {
            n,
            active_stages: dom.active(n).len(),
            obstacle_vertices: grid.boundary.len() - ring.len(),
            outer,
            estimate,
        });
    }
    Ok(rows)
}

#[derive(Clone, Copy, Debug, Serialize)]
pub struct RhoDiagnostics {
    pub r: f64,
    pub delta: f64,
    pub rho1: f64,
    pub rho2: f64,
    pub rho3: f64,
    /// `#(X_1 ∩ ∂_G 𝒟)` and `#X_2`.
    pub x1: usize,
    pub x2: usize,
}

/// `ρ_1, ρ_2, ρ_3` at mesh `2^-level`, started from `⌊2^level a⌋`.
pub fn rho_diagnostics(domain: &Region, e: &Region, a: &Pt, r: f64, level: u32) -> Result<RhoDiagnostics> {
    if !(r > 0.0) {
        return Err(Error::InvalidInput("r must be positive".into()));
    }
    let margin = (r * (1u64 << level) as f64).ceil() as i64 + 2;
    let grid = DomainGrid::from_region(domain, level, margin)?;
    let s = Q::from_integer(1i128 << level);
    let (i, j) = ((a.x * s).floor().to_integer(), (a.y * s).floor().to_integer());
    let start = grid
        .vertex_at(i as i64, j as i64)
        .ok_or_else(|| Error::InvalidInput("start outside the grid".into()))?;
    rho_on_grid(&grid, e, start, r)
}

/// `ρ_i` on a prepared grid. Components of the non-interior vertices that
/// reach the edge of the grid window count as unbounded.
pub fn rho_on_grid(grid: &DomainGrid, e: &Region, start: usize, r: f64) -> Result<RhoDiagnostics> {
    let g = &grid.graph;
    let n = g.len();
    let mut inner = vec![false; n];
    for &v in &grid.interior {
        inner[v] = true;
    }
    let mut in_x1 = vec![false; n];
    let mut seen = vec![false; n];
    let mut queue = VecDeque::new();
    for s0 in 0..n {
        if inner[s0] || seen[s0] {
            continue;
        }
        let mut comp = vec![s0];
        seen[s0] = true;
        queue.push_back(s0);
        while let Some(v) = queue.pop_front() {
            for (w, _) in g.neighbors(v) {
                if !inner[w] && !seen[w] {
                    seen[w] = true;
                    comp.push(w);
                    queue.push_back(w);
                }
            }
        }
        let unbounded = comp.iter().any(|&v| g.degree(v) < 4);
        if unbounded {
            continue;
        }
        let pts: Vec<(f64, f64)> = comp.iter().map(|&v| g.coords(v)).collect();
        if !diameter_exceeds(&pts, r * (1.0 - 1e-12)) {
            for v in comp {
                in_x1[v] = true;
            }
        }
    }
    let q = harmonic_measure(g, start, &grid.boundary)?;
    let (mut rho1, mut rho2, mut rho3) = (0.0, 0.0, 0.0);
    let (mut x1, mut x2) = (0, 0);
    for (&b, &qb) in grid.boundary.iter().zip(&q) {
        let qb = qb.max(0.0);
        let a1 = in_x1[b];
        let a2 = e.boundary_distance(g.coords(b)) < r;
        if a1 {
            rho1 += qb;
            x1 += 1;
        }
        if a2 {
            rho2 += qb;
            x2 += 1;
        }
        if a1 || a2 {
            rho3 += qb;
        }
    }
    Ok(RhoDiagnostics { r, delta: grid.mesh(), rho1, rho2, rho3, x1, x2 })
}

#[derive(Clone, Debug, Serialize)]
pub struct InterpolationConfig {
    pub m: i64,
    pub n: i64,
    /// Sizes of `D_k`; empty means `0, #Y/4, #Y/2, 3#Y/4, #Y`.
    pub ks: Vec<usize>,
    pub trials: usize,
    pub samples: u64,
    pub seed: u64,
    pub step_budget: u64,
}

#[derive(Clone, Copy, Debug, Serialize)]
pub struct InterpolationRow {
    pub k: usize,
    pub mean: f64,
    pub std_error: f64,
    pub trials: usize,
}

#[derive(Clone, Debug, Serialize)]
pub struct InterpolationReport {
    /// Always true: the admissibility conditions on `(M, N)` are not
    /// checked, so nothing here certifies a quantitative bound.
    pub heuristic: bool,
    pub m: i64,
    pub n: i64,
    pub y_size: usize,
    pub rows: Vec<InterpolationRow>,
    pub drift: f64,
    pub drift_std_error: f64,
}

/// Unit cells `x + [0,1]^2` meeting `M𝒟`, detected on the points of
/// `(1/2N) Z^2` in the closed cell.
pub fn interpolation_cells(domain: &Region, m: i64, n: i64) -> Result<Vec<Cell>> {
    let md = domain.scaled(Q::from_integer(m as i128));
    let b = md.bounding_box().ok_or_else(|| Error::InvalidInput("region has no bounded part".into()))?;
    let f = 2 * n as i128;
    let mut cells = Vec::new();
    for cy in (b[2].floor() as i64 - 1)..=(b[3].ceil() as i64) {
        for cx in (b[0].floor() as i64 - 1)..=(b[1].ceil() as i64) {
            let hit = (0..=f).any(|s| {
                (0..=f).any(|t| md.contains(&Pt::frac(cx as i128 * f + s, f, cy as i128 * f + t, f)))
            });
            if hit {
                cells.push((cx, cy));
            }
        }
    }
    Ok(cells)
}

/// Containment probabilities `ℙ(LE(S_{1,k}) ⊂ Mℰ)` on hybrid graphs
/// `G(D_k, N)` with `D_k` uniform among `k`-subsets of the cells meeting
/// `M𝒟`, averaged over `trials` draws per `k`.
pub fn interpolation_sweep(domain: &Region, e: &Region, a: &Pt, cfg: &InterpolationConfig) -> Result<InterpolationReport> {
    if cfg.m < 1 || cfg.n < 1 || cfg.trials == 0 {
        return Err(Error::InvalidInput("M, N and the trial count must be positive".into()));
    }
    if !domain.contains(a) || !e.contains(a) {
        return Err(Error::InvalidInput("start point must lie in both sets".into()));
    }
    let k_m = Q::from_integer(cfg.m as i128);
    let md = domain.scaled(k_m);
    let me = e.scaled(k_m);
    let ma = Pt::new(a.x * k_m, a.y * k_m);
    let y = interpolation_cells(domain, cfg.m, cfg.n)?;
    let ks = if cfg.ks.is_empty() { (0..=4).map(|i| i * y.len() / 4).collect() } else { cfg.ks.clone() };
    if let Some(k) = ks.iter().find(|&&k| k > y.len()) {
        return Err(Error::InvalidInput(format!("k = {k} exceeds #Y = {}", y.len())));
    }
    let b = md.bounding_box().unwrap();
    let nf = cfg.n as f64;
    let window = (
        (b[0] * nf).floor() as i64 - 1,
        (b[1] * nf).ceil() as i64 + 1,
        (b[2] * nf).floor() as i64 - 1,
        (b[3] * nf).ceil() as i64 + 1,
    );
    let mut rows = Vec::new();
    for &k in &ks {
        let mut ps = Vec::with_capacity(cfg.trials);
        let mut mc_var = 0.0;
        for t in 0..cfg.trials {
            let mut rng = RngStream::new(derive_seed(cfg.seed, k as u64, t as u64), 0).rng();
            let d = CellSet::finite(sample(&mut rng, y.len(), k).iter().map(|i| y[i]));
            let hg = build_hybrid(d, cfg.n, window)?;
            let bd = graph_boundary(&hg.graph, &md)?;
            let start = nearest_vertex(&hg.graph, &ma)?;
            let mask = region_mask(&hg.graph, &me);
            let walk_seed = derive_seed(cfg.seed, k as u64, t as u64 + (1 << 32));
            let hits = containment_counts(&hg.graph, start, &bd.boundary, &[mask], cfg.samples, walk_seed, cfg.step_budget)?;
            let est = MCEstimate::bernoulli(hits[0], cfg.samples, walk_seed);
            mc_var += est.std_error * est.std_error;
            ps.push(est.value);
        }
        let tn = cfg.trials as f64;
        let mean = ps.iter().sum::<f64>() / tn;
        let between = if cfg.trials > 1 {
            ps.iter().map(|p| (p - mean) * (p - mean)).sum::<f64>() / (tn - 1.0) / tn
        } else {
            0.0
        };
        let std_error = between.max(mc_var / (tn * tn)).sqrt();
        rows.push(InterpolationRow { k, mean, std_error, trials: cfg.trials });
    }
    let (first, last) = (rows[0], *rows.last().unwrap());
    Ok(InterpolationReport {
        heuristic: true,
        m: cfg.m,
        n: cfg.n,
        y_size: y.len(),
        drift: (first.mean - last.mean).abs(),
        drift_std_error: first.std_error.hypot(last.std_error),
        rows,
    })
}
