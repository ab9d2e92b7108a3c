//! Hybrid graphs `G(D, N)`: the grid `(1/N)Z^2` outside the cells of
//! `D`, the grid `(1/2N)Z^2` inside, joined by weighted cross edges.
//!
//! All hybrid coordinates are integers in units of `1/(2N)`. Weights are
//! kept as integer multiples of ¼ so seam predicates are exact.

use crate::error::{Error, Result};
use crate::geometry::PlanePoint;
use crate::graph::EmbeddedWeightedGraph;
use crate::potential::{HalfIntegerPoint, Normalization, PotentialTable};
use rayon::prelude::*;
use std::collections::{HashMap, HashSet};
use std::f64::consts::PI;

pub type Cell = (i64, i64);
pub type Unit = (i64, i64);

/// Sets of unit cells `[m, m+1) x [n, n+1)`, indexed by `(m, n)`.
///
/// Sign conventions: `Z⁺ = {0, 1, ...}`, `Z⁻ = {..., -2, -1}`.
#[derive(Clone, Debug)]
pub enum CellSet {
    Empty,
    All,
    Finite(HashSet<Cell>),
    /// `x_pos ? Z⁺ : Z⁻` times `y_pos ? Z⁺ : Z⁻`.
    Quadrant { x_pos: bool, y_pos: bool },
    /// Cells with `n ≥ 0` (`upper`) or `n < 0`; i.e. `Z + iZ^±`.
    HalfPlane { upper: bool },
    Union(Vec<CellSet>),
    Complement(Box<CellSet>),
}

impl CellSet {
    pub fn finite(cells: impl IntoIterator<Item = Cell>) -> Self {
        CellSet::Finite(cells.into_iter().collect())
    }

    pub fn complement(self) -> Self {
        match self {
            CellSet::Complement(inner) => *inner,
            CellSet::Empty => CellSet::All,
            CellSet::All => CellSet::Empty,
            other => CellSet::Complement(Box::new(other)),
        }
    }

    pub fn contains(&self, c: Cell) -> bool {
        match self {
            CellSet::Empty => false,
            CellSet::All => true,
            CellSet::Finite(s) => s.contains(&c),
            CellSet::Quadrant { x_pos, y_pos } => (c.0 >= 0) == *x_pos && (c.1 >= 0) == *y_pos,
            CellSet::HalfPlane { upper } => (c.1 >= 0) == *upper,
            CellSet::Union(v) => v.iter().any(|s| s.contains(c)),
            CellSet::Complement(s) => !s.contains(c),
        }
    }

    pub fn len_finite(&self) -> Option<usize> {
        match self {
            CellSet::Empty => Some(0),
            CellSet::Finite(s) => Some(s.len()),
            _ => None,
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Level {
    Coarse,
    Fine,
}

/// The infinite hybrid lattice; the graph type below is a finite window
/// of it.
#[derive(Clone, Debug)]
pub struct HybridLattice {
    pub d: CellSet,
    pub n: i64,
}

const SQ4: [Unit; 4] = [(2, 0), (-2, 0), (0, 2), (0, -2)];
const SQ5: [Unit; 8] = [(2, 1), (2, -1), (-2, 1), (-2, -1), (1, 2), (-1, 2), (1, -2), (-1, -2)];
const SQ1: [Unit; 4] = [(1, 0), (-1, 0), (0, 1), (0, -1)];

impl HybridLattice {
    pub fn new(d: CellSet, n: i64) -> Result<Self> {
        if n < 1 {
            return Err(Error::InvalidInput("N must be at least 1".into()));
        }
        Ok(HybridLattice { d, n })
    }

    pub fn cell_of(&self, p: Unit) -> Cell {
        let m = 2 * self.n;
        (p.0.div_euclid(m), p.1.div_euclid(m))
    }

    fn is_coarse(&self, p: Unit) -> bool {
        p.0.rem_euclid(2) == 0 && p.1.rem_euclid(2) == 0 && !self.d.contains(self.cell_of(p))
    }

    pub fn level(&self, p: Unit) -> Option<Level> {
        if self.is_coarse(p) {
            return Some(Level::Coarse);
        }
        if !self.d.contains(self.cell_of(p)) {
            return None;
        }
        // d(p, V0) ≥ 1/N, i.e. no coarse point at squared distance < 4 units.
        for dx in -1..=1 {
            for dy in -1..=1 {
                if self.is_coarse((p.0 + dx, p.1 + dy)) {
                    return None;
                }
            }
        }
        Some(Level::Fine)
    }

    /// Neighbours with weights in quarters (4 = weight 1).
    pub fn neighbors(&self, p: Unit) -> Vec<(Unit, i64)> {
        let mut out = Vec::with_capacity(8);
        let add = |out: &mut Vec<(Unit, i64)>, off: &[Unit], want: Level, w4: i64| {
            for o in off {
                let q = (p.0 + o.0, p.1 + o.1);
                if self.level(q) == Some(want) {
                    out.push((q, w4));
                }
            }
        };
        match self.level(p) {
            Some(Level::Coarse) => {
                add(&mut out, &SQ4, Level::Coarse, 4);
                add(&mut out, &SQ4, Level::Fine, 2);
                add(&mut out, &SQ5, Level::Fine, 1);
            }
            Some(Level::Fine) => {
                add(&mut out, &SQ1, Level::Fine, 4);
                add(&mut out, &SQ4, Level::Coarse, 2);
                add(&mut out, &SQ5, Level::Coarse, 1);
            }
            None => {}
        }
        out
    }

    pub fn is_seam(&self, p: Unit) -> bool {
        match self.level(p) {
            None => false,
            Some(l) => self.neighbors(p).iter().any(|(q, _)| self.level(*q) != Some(l)),
        }
    }

    /// `Σ_w W(v,w)(v - w) ≠ 0`.
    pub fn is_seam_intersection(&self, p: Unit) -> bool {
        let (mut sx, mut sy) = (0i64, 0i64);
        for ((qx, qy), w) in self.neighbors(p) {
            sx += w * (qx - p.0);
            sy += w * (qy - p.1);
        }
        sx != 0 || sy != 0
    }

    /// `(Δ z^j)(p)·4` in units, exact Gaussian integer.
    fn laplacian_power(&self, p: Unit, j: u32) -> (i128, i128) {
        let pow = |x: i128, y: i128| -> (i128, i128) {
            let (mut a, mut b) = (1i128, 0i128);
            for _ in 0..j {
                (a, b) = (a * x - b * y, a * y + b * x);
            }
            (a, b)
        };
        let (px, py) = pow(p.0 as i128, p.1 as i128);
        let (mut re, mut im) = (0i128, 0i128);
        for ((qx, qy), w) in self.neighbors(p) {
            let (a, b) = pow(qx as i128, qy as i128);
            re += w as i128 * (a - px);
            im += w as i128 * (b - py);
        }
        (re, im)
    }

    /// Largest `k ∈ {1, 2, 4}` with `Δ Re z^j = Δ Im z^j = 0` at `p` for all
    /// `j < k`.
    pub fn annihilation_order(&self, p: Unit) -> u8 {
        let zero = |j| self.laplacian_power(p, j) == (0, 0);
        if !zero(1) {
            1
        } else if zero(2) && zero(3) {
            4
        } else {
            2
        }
    }

    /// `b_v(w)` in asymptotic normalization.
    pub fn b_v(&self, table: &PotentialTable, v: Unit, w: Unit) -> Result<f64> {
        match self.level(w) {
            Some(l) => self.b_v_at(table, v, w, l),
            None => Err(Error::InvalidInput(format!("{w:?} is not a hybrid vertex"))),
        }
    }

    fn b_v_at(&self, table: &PotentialTable, v: Unit, w: Unit, level: Level) -> Result<f64> {
        match level {
            Level::Coarse => Ok(table.potential_half(
                HalfIntegerPoint::new(v.0, v.1),
                (w.0 / 2, w.1 / 2),
                Normalization::Asymptotic,
            )? - (self.n as f64).ln() / (2.0 * PI)),
            Level::Fine => Ok(table.potential(v.0 - w.0, v.1 - w.1, Normalization::Asymptotic)?
                - ((2 * self.n) as f64).ln() / (2.0 * PI)),
        }
    }

    /// The weighted neighbourhood of a vertex, with levels resolved.
    pub fn stencil(&self, w: Unit) -> Option<Stencil> {
        let level = self.level(w)?;
        let nbrs = self
            .neighbors(w)
            .into_iter()
            .map(|(q, w4)| (q, w4, self.level(q).unwrap()))
            .collect();
        Some(Stencil { w, level, nbrs })
    }

    /// `(Δ_G b_v)(w) - δ_v(w)`.
    pub fn b_v_defect(&self, table: &PotentialTable, v: Unit, w: Unit) -> Result<f64> {
        let st = self
            .stencil(w)
            .ok_or_else(|| Error::InvalidInput(format!("{w:?} is not a hybrid vertex")))?;
        self.defect(table, v, &st)
    }

    pub fn defect(&self, table: &PotentialTable, v: Unit, st: &Stencil) -> Result<f64> {
        let bw = self.b_v_at(table, v, st.w, st.level)?;
        let mut s = 0.0;
        for &(q, w4, l) in &st.nbrs {
            s += 0.25 * w4 as f64 * (self.b_v_at(table, v, q, l)? - bw);
        }
        Ok(if v == st.w { s - 1.0 } else { s })
    }

    /// Hybrid vertices of the square `[-r, r]^2` (units), sorted.
    pub fn vertices_in(&self, r: i64) -> Vec<Unit> {
        let mut out = Vec::new();
        for y in -r..=r {
            for x in -r..=r {
                if self.level((x, y)).is_some() {
                    out.push((x, y));
                }
            }
        }
        out
    }
}

#[derive(Clone, Debug)]
pub struct Stencil {
    pub w: Unit,
    pub level: Level,
    pub nbrs: Vec<(Unit, i64, Level)>,
}

/// A finite window `[x0, x1] x [y0, y1]` (units) of a hybrid lattice.
#[derive(Clone, Debug)]
pub struct HybridGraph {
    pub lattice: HybridLattice,
    pub window: (i64, i64, i64, i64),
    pub graph: EmbeddedWeightedGraph,
    pub units: Vec<Unit>,
    pub levels: Vec<Level>,
    pub seams: Vec<usize>,
    pub seam_intersections: Vec<usize>,
    index: HashMap<Unit, usize>,
}

/// Builds `G(D, N)` on the window `[x0, x1] x [y0, y1]` given in units of
/// `1/N` (so that window sides are multiples of `1/N`).
pub fn build_hybrid(d: CellSet, n: i64, window: (i64, i64, i64, i64)) -> Result<HybridGraph> {
    let lat = HybridLattice::new(d, n)?;
    let (x0, x1, y0, y1) = (2 * window.0, 2 * window.1, 2 * window.2, 2 * window.3);
    if x1 < x0 || y1 < y0 {
        return Err(Error::InvalidInput("empty window".into()));
    }
    let mut units = Vec::new();
    let mut levels = Vec::new();
    let mut index = HashMap::new();
    for y in y0..=y1 {
        for x in x0..=x1 {
            if let Some(l) = lat.level((x, y)) {
                index.insert((x, y), units.len());
                units.push((x, y));
                levels.push(l);
            }
        }
    }
    if units.is_empty() {
        return Err(Error::InvalidInput("window contains no vertices".into()));
    }
    let mut edges = Vec::new();
    for (i, p) in units.iter().enumerate() {
        for (q, w4) in lat.neighbors(*p) {
            if let Some(&j) = index.get(&q) {
                if i < j {
                    edges.push((i, j, w4 as f64 / 4.0));
                }
            }
        }
    }
    let points = units.iter().map(|&(x, y)| PlanePoint::new(x, y, 1)).collect();
    let graph = EmbeddedWeightedGraph::from_edges(n as u32, points, &edges)?;
    let seams = (0..units.len()).filter(|&i| lat.is_seam(units[i])).collect();
    let seam_intersections =
        (0..units.len()).filter(|&i| lat.is_seam_intersection(units[i])).collect();
    Ok(HybridGraph {
        lattice: lat,
        window: (x0, x1, y0, y1),
        graph,
        units,
        levels,
        seams,
        seam_intersections,
        index,
    })
}

impl HybridGraph {
    pub fn index_of(&self, p: Unit) -> Option<usize> {
        self.index.get(&p).copied()
    }

    /// `(Ḡ, Ḡ̄)` as vertex indices.
    pub fn classify_seams(&self) -> (&[usize], &[usize]) {
        (&self.seams, &self.seam_intersections)
    }

    /// `k(v)`; `v` must sit at least `2/N` inside the window.
    pub fn annihilation_order(&self, v: usize) -> Result<u8> {
        let p = self.units[v];
        let m = 4;
        let (x0, x1, y0, y1) = self.window;
        if p.0 - x0 < m || x1 - p.0 < m || p.1 - y0 < m || y1 - p.1 < m {
            return Err(Error::Range(format!("{p:?} within 2/N of the window edge")));
        }
        Ok(self.lattice.annihilation_order(p))
    }

    /// Number of pairs of edges whose relative interiors meet.
    pub fn planarity_violations(&self) -> usize {
        let edges: Vec<(Unit, Unit)> = self
            .graph
            .edges()
            .into_iter()
            .map(|(i, j, _)| (self.units[i], self.units[j]))
            .collect();
        // Bucket by the lower-left endpoint; edges are at most √5 units long.
        let mut buckets: HashMap<(i64, i64), Vec<usize>> = HashMap::new();
        let key = |p: Unit| (p.0.div_euclid(4), p.1.div_euclid(4));
        for (k, e) in edges.iter().enumerate() {
            buckets.entry(key(e.0)).or_default().push(k);
        }
        let mut count = 0;
        for (k, e) in edges.iter().enumerate() {
            let (bx, by) = key(e.0);
            for dx in -1..=1 {
                for dy in -1..=1 {
                    if let Some(list) = buckets.get(&(bx + dx, by + dy)) {
                        for &l in list {
                            if l > k && segments_cross(*e, edges[l]) {
                                count += 1;
                            }
                        }
                    }
                }
            }
        }
        count
    }
}

fn orient(a: Unit, b: Unit, c: Unit) -> i64 {
    ((b.0 - a.0) * (c.1 - a.1) - (b.1 - a.1) * (c.0 - a.0)).signum()
}

fn on_closed(a: Unit, b: Unit, p: Unit) -> bool {
    orient(a, b, p) == 0
        && p.0 >= a.0.min(b.0)
        && p.0 <= a.0.max(b.0)
        && p.1 >= a.1.min(b.1)
        && p.1 <= a.1.max(b.1)
}

/// True when two segments share a point other than a common endpoint.
fn segments_cross(e: (Unit, Unit), f: (Unit, Unit)) -> bool {
    let (a, b) = e;
    let (c, d) = f;
    let shared = [a, b].iter().filter(|p| **p == c || **p == d).count();
    if shared == 2 {
        return true;
    }
    let o1 = orient(a, b, c);
    let o2 = orient(a, b, d);
    let o3 = orient(c, d, a);
    let o4 = orient(c, d, b);
    if shared == 1 {
        // Touching at the shared endpoint is fine unless they overlap.
        return o1 == 0 && o2 == 0 && {
            let other_f = if c == a || c == b { d } else { c };
            let other_e = if a == c || a == d { b } else { a };
            on_closed(a, b, other_f) || on_closed(c, d, other_e)
        };
    }
    if o1 * o2 < 0 && o3 * o4 < 0 {
        return true;
    }
    on_closed(a, b, c) || on_closed(a, b, d) || on_closed(c, d, a) || on_closed(c, d, b)
}

/// An axis-parallel rectangle `[r, s] x [t, u]` with corners in `(1/N)Z`,
/// given in units of `1/(2N)`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct EasyRectangle {
    pub r: i64,
    pub s: i64,
    pub t: i64,
    pub u: i64,
}

impl EasyRectangle {
    pub fn new(r: i64, s: i64, t: i64, u: i64) -> Result<Self> {
        if [r, s, t, u].iter().any(|c| c.rem_euclid(2) != 0) || s <= r || u <= t {
            return Err(Error::InvalidInput("rectangle corners must lie in (1/N)Z".into()));
        }
        Ok(EasyRectangle { r, s, t, u })
    }

    pub fn diam(&self) -> f64 {
        (((self.s - self.r).pow(2) + (self.u - self.t).pow(2)) as f64).sqrt()
    }

    pub fn corners(&self) -> [Unit; 4] {
        [(self.r, self.t), (self.s, self.t), (self.s, self.u), (self.r, self.u)]
    }

    /// `str S`, the largest value compatible with the aspect ratio and the
    /// two seam distance conditions. Distances are in units.
    pub fn strength(&self, lat: &HybridLattice) -> f64 {
        let w = (self.s - self.r) as f64;
        let h = (self.u - self.t) as f64;
        let mut st = (w / h).min(h / w);
        let diam = self.diam();
        let mut d_corner = f64::INFINITY;
        let mut d_edge = f64::INFINITY;
        for y in self.t + 1..self.u {
            for x in self.r + 1..self.s {
                if !lat.is_seam((x, y)) {
                    continue;
                }
                for (cx, cy) in self.corners() {
                    d_corner = d_corner.min((((x - cx).pow(2) + (y - cy).pow(2)) as f64).sqrt());
                }
                if lat.is_seam_intersection((x, y)) {
                    let e = (x - self.r).min(self.s - x).min(y - self.t).min(self.u - y);
                    d_edge = d_edge.min(e as f64);
                }
            }
        }
        st = st.min(d_corner / diam).min(d_edge / diam);
        st
    }

    /// `str S · diam S > 1/N` (i.e. > 2 units).
    pub fn is_easy(&self, lat: &HybridLattice) -> bool {
        self.strength(lat) * self.diam() > 2.0
    }
}

/// Where Table 1 places the maximum.
#[derive(Clone, Debug)]
pub enum Family {
    Everywhere,
    Points(Vec<Unit>),
    /// `m + ½ - i` for all integers `m`, units at N = 1.
    HalfShiftedRow,
}

#[derive(Clone, Debug)]
pub struct BetaConfig {
    /// Label as printed in the table (names the coarse region).
    pub label: &'static str,
    /// Hybrid defining sets, i.e. the refined cells.
    pub hybrid: Vec<CellSet>,
    pub expected: f64,
    pub family: Family,
}

/// The five configurations of the appendix table. The table's first
/// column names the coarse region; the refined set is its complement.
pub fn table_one() -> Vec<BetaConfig> {
    let q = |x_pos, y_pos| CellSet::Quadrant { x_pos, y_pos };
    vec![
        BetaConfig {
            label: "Z^2 or empty",
            hybrid: vec![CellSet::Empty, CellSet::All],
            expected: 0.0,
            family: Family::Everywhere,
        },
        BetaConfig {
            label: "Z^2 \\ (Z-)^2",
            hybrid: vec![q(false, false)],
            expected: 0.31,
            family: Family::Points(vec![(-2, -2)]),
        },
        BetaConfig {
            label: "Z + iZ+",
            hybrid: vec![CellSet::HalfPlane { upper: false }],
            expected: 0.19,
            family: Family::HalfShiftedRow,
        },
        BetaConfig {
            label: "(Z+)^2 u (Z-)^2",
            hybrid: vec![CellSet::Union(vec![q(false, true), q(true, false)])],
            expected: 0.34,
            family: Family::Points(vec![(-3, 0), (0, -3), (1, -2), (-2, 1)]),
        },
        BetaConfig {
            label: "(Z+)^2",
            hybrid: vec![q(true, true).complement()],
            expected: 0.39,
            family: Family::Points(vec![(-1, -2), (-2, -1)]),
        },
    ]
}

#[derive(Clone, Debug, serde::Serialize)]
pub struct BetaRow {
    pub label: String,
    pub expected: f64,
    pub max_beta: f64,
    /// Strict argmax, in units of ½.
    pub argmax: Unit,
    /// Vertices within `COMAX_TOL` of the maximum.
    pub comax: Vec<Unit>,
    /// Listed locations that attain the maximum up to `COMAX_TOL`.
    pub listed_attain_max: bool,
    /// Tail estimate `β(window) - β(window/2)` at the argmax.
    pub truncation: f64,
    /// Largest `|Δb_v - δ_v|` seen off the seams.
    pub off_seam_max: f64,
    /// Largest `β_v` over translates along the straight seam, minus the
    /// smallest (half-plane row only).
    pub translation_spread: Option<f64>,
}

pub const COMAX_TOL: f64 = 1e-3;

/// `β_v` restricted to seam stencils in `[-r, r]^2` (units).
fn beta_v(lat: &HybridLattice, table: &PotentialTable, seams: &[Stencil], v: Unit, r: i64) -> Result<f64> {
    let mut s = 0.0;
    for st in seams {
        if st.w.0.abs() <= r && st.w.1.abs() <= r {
            s += lat.defect(table, v, st)?.abs();
        }
    }
    Ok(s)
}

fn off_seam_defect(lat: &HybridLattice, table: &PotentialTable, v: Unit, stencils: &[Stencil]) -> Result<f64> {
    let mut m = 0.0f64;
    for st in stencils {
        m = m.max(lat.defect(table, v, st)?.abs());
    }
    Ok(m)
}

fn off_seam_stencils(lat: &HybridLattice, r: i64) -> Vec<Stencil> {
    lat.vertices_in(r)
        .into_iter()
        .filter(|p| !lat.is_seam(*p))
        .filter_map(|p| lat.stencil(p))
        .collect()
}

/// Maximum of `β_v` over hybrid vertices with `|v| ≤ search_radius`, for one
/// hybrid defining set, at `N = 1` on the window `[-window, window]^2`.
pub fn beta_for(
    d: &CellSet,
    table: &PotentialTable,
    window: i64,
    search_radius: f64,
    check_radius: i64,
) -> Result<(Vec<(Unit, f64)>, f64, f64)> {
    let need = 2 * (window as f64 + search_radius) as usize + 4;
    if table.radius() < need {
        return Err(Error::Range(format!(
            "potential table radius {} below the required {need}",
            table.radius()
        )));
    }
    let lat = HybridLattice::new(d.clone(), 1)?;
    let r_units = 2 * window;
    let seams: Vec<Stencil> = lat
        .vertices_in(r_units)
        .into_iter()
        .filter(|p| lat.is_seam(*p))
        .filter_map(|p| lat.stencil(p))
        .collect();
    let near = off_seam_stencils(&lat, check_radius.min(r_units));
    let sr = (2.0 * search_radius).floor() as i64;
    let cands: Vec<Unit> = lat
        .vertices_in(sr)
        .into_iter()
        .filter(|p| ((p.0 * p.0 + p.1 * p.1) as f64) <= 4.0 * search_radius * search_radius)
        .collect();
    let rows = cands
        .par_iter()
        .map(|&v| {
            let b = beta_v(&lat, table, &seams, v, r_units)?;
            let off = off_seam_defect(&lat, table, v, &near)?;
            Ok((v, b, off))
        })
        .collect::<Result<Vec<_>>>()?;
    let off = rows.iter().map(|r| r.2).fold(0.0, f64::max);
    let betas: Vec<(Unit, f64)> = rows.iter().map(|r| (r.0, r.1)).collect();
    let best = betas
        .iter()
        .copied()
        .fold(((0, 0), f64::NEG_INFINITY), |a, b| if b.1 > a.1 { b } else { a });
    let trunc = if best.1 > 0.0 {
        best.1 - beta_v(&lat, table, &seams, best.0, r_units / 2)?
    } else {
        0.0
    };
    Ok((betas, trunc, off))
}

/// Reproduces the appendix table at `N = 1`.
pub fn beta_table(table: &PotentialTable, window: i64, search_radius: f64) -> Result<Vec<BetaRow>> {
    let mut out = Vec::new();
    for cfg in table_one() {
        let mut best_row: Option<(Vec<(Unit, f64)>, f64, f64, &CellSet)> = None;
        let mut off_all = 0.0f64;
        for d in &cfg.hybrid {
            let (betas, trunc, off) = beta_for(d, table, window, search_radius, 80)?;
            off_all = off_all.max(off);
            let m = betas.iter().map(|b| b.1).fold(0.0, f64::max);
            let better = best_row
                .as_ref()
                .is_none_or(|b| m > b.0.iter().map(|x| x.1).fold(0.0, f64::max));
            if better {
                best_row = Some((betas, trunc, off, d));
            }
        }
        let (betas, trunc, _, d) = best_row.unwrap();
        let (argmax, max_beta) = betas
            .iter()
            .copied()
            .fold(((0, 0), f64::NEG_INFINITY), |a, b| if b.1 > a.1 { b } else { a });
        let comax: Vec<Unit> =
            betas.iter().filter(|b| b.1 >= max_beta - COMAX_TOL).map(|b| b.0).collect();
        let lookup: HashMap<Unit, f64> = betas.iter().copied().collect();
        let attains = |p: &Unit| lookup.get(p).is_some_and(|b| *b >= max_beta - COMAX_TOL);
        let (listed_attain_max, spread) = match &cfg.family {
            Family::Everywhere => (max_beta < 1e-8, None),
            Family::Points(ps) => (ps.iter().all(attains), None),
            Family::HalfShiftedRow => {
                let row: Vec<Unit> = lookup.keys().filter(|p| p.1 == -2 && p.0.rem_euclid(2) == 1).copied().collect();
                let vals: Vec<f64> = row.iter().map(|p| lookup[p]).collect();
                let spread = vals.iter().cloned().fold(f64::NEG_INFINITY, f64::max)
                    - vals.iter().cloned().fold(f64::INFINITY, f64::min);
                (!row.is_empty() && row.iter().all(attains), Some(spread))
            }
        };
        // Full-window support check at the argmax.
        let lat = HybridLattice::new(d.clone(), 1)?;
        let off_full = if max_beta > 0.0 {
            off_seam_defect(&lat, table, argmax, &off_seam_stencils(&lat, 2 * window))?
        } else {
            0.0
        };
        out.push(BetaRow {
            label: cfg.label.to_string(),
            expected: cfg.expected,
            max_beta,
            argmax,
            comax,
            listed_attain_max,
            truncation: trunc,
            off_seam_max: off_all.max(off_full),
            translation_spread: spread,
        });
    }
    Ok(out)
}

/// Formats a unit point at N = 1 as a complex number.
pub fn format_half_units(p: Unit) -> String {
    let part = |v: i64| {
        if v % 2 == 0 {
            format!("{}", v / 2)
        } else {
            format!("{}/2", v)
        }
    };
    format!("{} + {}i", part(p.0), part(p.1))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn empty_d_is_the_coarse_grid() {
        let g = build_hybrid(CellSet::Empty, 2, (-3, 3, -3, 3)).unwrap();
        assert!(g.levels.iter().all(|l| *l == Level::Coarse));
        assert_eq!(g.graph.len(), 49);
        assert!(g.graph.edges().iter().all(|e| e.2 == 1.0));
        assert!(g.seams.is_empty() && g.seam_intersections.is_empty());
    }

    #[test]
    fn all_d_is_the_fine_grid() {
        let g = build_hybrid(CellSet::All, 1, (-2, 2, -2, 2)).unwrap();
        assert!(g.levels.iter().all(|l| *l == Level::Fine));
        assert_eq!(g.graph.len(), 81);
    }

    #[test]
    fn single_cell_at_n1() {
        let g = build_hybrid(CellSet::finite([(0, 0)]), 1, (-3, 4, -3, 4)).unwrap();
        let fine: Vec<Unit> = g.units.iter().zip(&g.levels).filter(|(_, l)| **l == Level::Fine).map(|(u, _)| *u).collect();
        assert_eq!(fine, vec![(0, 0)]);
        assert_eq!(g.seam_intersections.len(), 4);
    }

    #[test]
    fn cross_weights_at_n2() {
        let g = build_hybrid(CellSet::finite([(0, 0)]), 2, (-6, 8, -6, 8)).unwrap();
        let ws: HashSet<u64> = g.graph.edges().iter().map(|e| (e.2 * 4.0) as u64).collect();
        assert!(ws.contains(&1) && ws.contains(&2) && ws.contains(&4));
        let (sg, sgg) = g.classify_seams();
        assert!(!sgg.is_empty() && sgg.len() <= 8);
        assert!(sgg.iter().all(|v| sg.contains(v)));
    }

    #[test]
    fn segment_crossing_predicate() {
        assert!(segments_cross(((0, 0), (2, 2)), ((0, 2), (2, 0))));
        assert!(!segments_cross(((0, 0), (2, 0)), ((2, 0), (2, 2))));
        assert!(segments_cross(((0, 0), (2, 0)), ((1, 0), (3, 0))));
        assert!(!segments_cross(((0, 0), (1, 0)), ((0, 1), (1, 1))));
        assert!(segments_cross(((0, 0), (2, 0)), ((1, 0), (1, 1))));
    }

    #[test]
    fn half_unit_format() {
        assert_eq!(format_half_units((-1, -2)), "-1/2 + -1i");
    }
}
