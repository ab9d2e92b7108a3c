//! Weighted graphs embedded in the plane, paths and loop erasure.

use crate::error::{Error, Result};
use crate::geometry::{top_left_cmp, PlanePoint, Pt, Region, Q};
use serde::{Deserialize, Serialize};
use std::collections::HashMap;
use std::hash::{Hash, Hasher};

/// Symmetric weighted graph with vertices at exact dyadic points.
///
/// Vertex coordinates are `PlanePoint`s measured in units of
/// `1/unit_den`. Adjacency is stored in compressed rows.
#[derive(Clone, Debug)]
pub struct EmbeddedWeightedGraph {
    unit_den: u32,
    points: Vec<PlanePoint>,
    index: HashMap<PlanePoint, usize>,
    offsets: Vec<usize>,
    nbrs: Vec<usize>,
    wts: Vec<f64>,
}

impl EmbeddedWeightedGraph {
    /// Builds a graph from undirected edges `(i, j, w)`. Repeated edges
    /// are rejected, as are loops and nonpositive weights.
    pub fn from_edges(
        unit_den: u32,
        points: Vec<PlanePoint>,
        edges: &[(usize, usize, f64)],
    ) -> Result<Self> {
        if unit_den == 0 {
            return Err(Error::InvalidInput("unit denominator must be positive".into()));
        }
        let n = points.len();
        let mut index = HashMap::with_capacity(n);
        for (i, p) in points.iter().enumerate() {
            if index.insert(*p, i).is_some() {
                return Err(Error::InvalidInput(format!("duplicate vertex {p:?}")));
            }
        }
        let mut deg = vec![0usize; n];
        for &(i, j, w) in edges {
            if i >= n || j >= n {
                return Err(Error::InvalidInput(format!("edge ({i},{j}) out of range")));
            }
            if i == j {
                return Err(Error::InvalidInput(format!("loop at vertex {i}")));
            }
            if !(w > 0.0 && w.is_finite()) {
                return Err(Error::InvalidInput(format!("edge ({i},{j}) has weight {w}")));
            }
            deg[i] += 1;
            deg[j] += 1;
        }
        let mut offsets = vec![0usize; n + 1];
        for i in 0..n {
            offsets[i + 1] = offsets[i] + deg[i];
        }
        let mut fill = offsets.clone();
        let mut nbrs = vec![0usize; offsets[n]];
        let mut wts = vec![0.0; offsets[n]];
        for &(i, j, w) in edges {
            nbrs[fill[i]] = j;
            wts[fill[i]] = w;
            fill[i] += 1;
            nbrs[fill[j]] = i;
            wts[fill[j]] = w;
            fill[j] += 1;
        }
        for v in 0..n {
            let row = &mut nbrs[offsets[v]..offsets[v + 1]];
            let mut sorted = row.to_vec();
            sorted.sort_unstable();
            if sorted.windows(2).any(|p| p[0] == p[1]) {
                return Err(Error::InvalidInput(format!("repeated edge at vertex {v}")));
            }
        }
        Ok(EmbeddedWeightedGraph { unit_den, points, index, offsets, nbrs, wts })
    }

    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }

    pub fn unit_den(&self) -> u32 {
        self.unit_den
    }

    pub fn point(&self, v: usize) -> PlanePoint {
        self.points[v]
    }

    pub fn points(&self) -> &[PlanePoint] {
        &self.points
    }

    pub fn index_of(&self, p: &PlanePoint) -> Option<usize> {
        self.index.get(p).copied()
    }

    pub fn coords(&self, v: usize) -> (f64, f64) {
        self.points[v].to_f64(self.unit_den)
    }

    pub fn exact(&self, v: usize) -> Pt {
        self.points[v].exact(self.unit_den)
    }

    /// Neighbours of `v` with their weights.
    pub fn neighbors(&self, v: usize) -> impl Iterator<Item = (usize, f64)> + '_ {
        let r = self.offsets[v]..self.offsets[v + 1];
        self.nbrs[r.clone()].iter().copied().zip(self.wts[r].iter().copied())
    }

    pub fn neighbor_slice(&self, v: usize) -> (&[usize], &[f64]) {
        let r = self.offsets[v]..self.offsets[v + 1];
        (&self.nbrs[r.clone()], &self.wts[r])
    }

    pub fn degree(&self, v: usize) -> usize {
        self.offsets[v + 1] - self.offsets[v]
    }

    pub fn weight(&self, v: usize, w: usize) -> f64 {
        self.neighbors(v).find(|&(u, _)| u == w).map_or(0.0, |(_, x)| x)
    }

    pub fn total_weight(&self, v: usize) -> f64 {
        self.neighbors(v).map(|(_, w)| w).sum()
    }

    pub fn edges(&self) -> Vec<(usize, usize, f64)> {
        let mut out = Vec::new();
        for v in 0..self.len() {
            for (w, x) in self.neighbors(v) {
                if v < w {
                    out.push((v, w, x));
                }
            }
        }
        out
    }

    /// Same vertices, new weights per edge; edges mapped to zero vanish.
    pub fn reweighted(&self, f: impl Fn(usize, usize, f64) -> f64) -> Result<Self> {
        let edges: Vec<_> = self
            .edges()
            .into_iter()
            .filter_map(|(v, w, x)| {
                let y = f(v, w, x);
                (y > 0.0).then_some((v, w, y))
            })
            .collect();
        Self::from_edges(self.unit_den, self.points.clone(), &edges)
    }

    pub fn to_json(&self) -> serde_json::Value {
        let g = GraphJson {
            unit_den: self.unit_den,
            vertices: self.points.iter().map(|p| [p.nx, p.ny, p.scale_log2 as i64]).collect(),
            edges: self.edges().into_iter().map(|(i, j, w)| (i, j, w.to_string())).collect(),
        };
        serde_json::to_value(g).expect("graph serializes")
    }

    pub fn from_json(v: &serde_json::Value) -> Result<Self> {
        let g: GraphJson =
            serde_json::from_value(v.clone()).map_err(|e| Error::InvalidInput(e.to_string()))?;
        let points = g
            .vertices
            .iter()
            .map(|t| {
                u32::try_from(t[2])
                    .map(|s| PlanePoint::new(t[0], t[1], s))
                    .map_err(|_| Error::InvalidInput("negative scale".into()))
            })
            .collect::<Result<Vec<_>>>()?;
        let edges = g
            .edges
            .iter()
            .map(|(i, j, w)| {
                w.parse::<f64>()
                    .map(|w| (*i, *j, w))
                    .map_err(|e| Error::InvalidInput(format!("weight {w:?}: {e}")))
            })
            .collect::<Result<Vec<_>>>()?;
        Self::from_edges(g.unit_den, points, &edges)
    }
}

#[derive(Serialize, Deserialize)]
struct GraphJson {
    unit_den: u32,
    vertices: Vec<[i64; 3]>,
    edges: Vec<(usize, usize, String)>,
}

/// The grid `2^-scale_log2 (1/unit_den) Z^2` restricted to integer
/// index ranges `[i0, i1] x [j0, j1]`, unit weights.
pub fn grid_graph(
    scale_log2: u32,
    unit_den: u32,
    (i0, i1): (i64, i64),
    (j0, j1): (i64, i64),
) -> Result<EmbeddedWeightedGraph> {
    if i1 < i0 || j1 < j0 {
        return Err(Error::InvalidInput("empty grid".into()));
    }
    let w = (i1 - i0 + 1) as usize;
    let h = (j1 - j0 + 1) as usize;
    let mut points = Vec::with_capacity(w * h);
    for j in j0..=j1 {
        for i in i0..=i1 {
            points.push(PlanePoint::new(i, j, scale_log2));
        }
    }
    let mut edges = Vec::with_capacity(2 * w * h);
    for r in 0..h {
        for c in 0..w {
            let v = r * w + c;
            if c + 1 < w {
                edges.push((v, v + 1, 1.0));
            }
            if r + 1 < h {
                edges.push((v, v + w, 1.0));
            }
        }
    }
    EmbeddedWeightedGraph::from_edges(unit_den, points, &edges)
}

/// A vertex sequence whose consecutive entries are joined by edges.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LatticePath {
    vertices: Vec<usize>,
}

impl LatticePath {
    pub fn new(g: &EmbeddedWeightedGraph, vertices: Vec<usize>) -> Result<Self> {
        if vertices.is_empty() {
            return Err(Error::InvalidInput("empty path".into()));
        }
        for (k, p) in vertices.windows(2).enumerate() {
            if g.weight(p[0], p[1]) == 0.0 {
                return Err(Error::InvalidInput(format!(
                    "no edge between steps {k} and {}",
                    k + 1
                )));
            }
        }
        Ok(LatticePath { vertices })
    }

    /// Caller guarantees edge validity (walk output, loop erasure output).
    pub(crate) fn trusted(vertices: Vec<usize>) -> Self {
        LatticePath { vertices }
    }

    pub fn vertices(&self) -> &[usize] {
        &self.vertices
    }

    pub fn into_vertices(self) -> Vec<usize> {
        self.vertices
    }

    pub fn len(&self) -> usize {
        self.vertices.len()
    }

    pub fn is_empty(&self) -> bool {
        self.vertices.is_empty()
    }

    pub fn first(&self) -> usize {
        self.vertices[0]
    }

    pub fn last(&self) -> usize {
        *self.vertices.last().unwrap()
    }
}

/// A path without repeated vertices. Equality and hashing identify a
/// path with its reversal.
#[derive(Clone, Debug)]
pub struct SimplePath {
    vertices: Vec<usize>,
}

impl SimplePath {
    pub fn new(g: &EmbeddedWeightedGraph, vertices: Vec<usize>) -> Result<Self> {
        let p = LatticePath::new(g, vertices)?;
        let mut seen = std::collections::HashSet::new();
        if !p.vertices.iter().all(|v| seen.insert(*v)) {
            return Err(Error::InvalidInput("path revisits a vertex".into()));
        }
        Ok(SimplePath { vertices: p.vertices })
    }

    pub(crate) fn trusted(vertices: Vec<usize>) -> Self {
        SimplePath { vertices }
    }

    pub fn vertices(&self) -> &[usize] {
        &self.vertices
    }

    pub fn len(&self) -> usize {
        self.vertices.len()
    }

    pub fn is_empty(&self) -> bool {
        self.vertices.is_empty()
    }

    pub fn as_path(&self) -> LatticePath {
        LatticePath::trusted(self.vertices.clone())
    }

    /// Orientation with the smaller endpoint first.
    pub fn canonical(&self) -> Vec<usize> {
        let v = &self.vertices;
        if v.first() <= v.last() {
            v.clone()
        } else {
            v.iter().rev().copied().collect()
        }
    }
}

impl PartialEq for SimplePath {
    fn eq(&self, other: &Self) -> bool {
        self.canonical() == other.canonical()
    }
}

impl Eq for SimplePath {}

impl Hash for SimplePath {
    fn hash<H: Hasher>(&self, state: &mut H) {
        self.canonical().hash(state)
    }
}

/// Loop erasure of a path, following the last-visit recursion: after
/// `LE_i`, continue from the step following the last visit of `LE_i`.
pub fn loop_erase(path: &LatticePath) -> SimplePath {
    SimplePath { vertices: loop_erase_slice(&path.vertices) }
}

pub fn loop_erase_slice(path: &[usize]) -> Vec<usize> {
    let mut last: HashMap<usize, usize> = HashMap::with_capacity(path.len());
    for (k, v) in path.iter().enumerate() {
        last.insert(*v, k);
    }
    let mut out = Vec::new();
    let mut k = 0;
    while k < path.len() {
        out.push(path[k]);
        k = last[&path[k]] + 1;
    }
    out
}

/// As `loop_erase_slice` but with a dense scratch table of size
/// `n_vertices`, for hot loops. The table is left all `usize::MAX`, so
/// reusing it costs time proportional to the path only.
pub fn loop_erase_dense(path: &[usize], scratch: &mut Vec<usize>, n_vertices: usize) -> Vec<usize> {
    if scratch.len() != n_vertices {
        scratch.clear();
        scratch.resize(n_vertices, usize::MAX);
    }
    for (k, v) in path.iter().enumerate() {
        scratch[*v] = k;
    }
    let mut out = Vec::new();
    let mut k = 0;
    while k < path.len() {
        out.push(path[k]);
        k = scratch[path[k]] + 1;
    }
    for v in path {
        scratch[*v] = usize::MAX;
    }
    out
}

/// `∂_G 𝒟` together with the interior `𝒟°`, both sorted.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct Boundary {
    pub boundary: Vec<usize>,
    pub interior: Vec<usize>,
}

pub fn graph_boundary(g: &EmbeddedWeightedGraph, region: &Region) -> Result<Boundary> {
    let mut out = Boundary::default();
    for v in 0..g.len() {
        let p = g.exact(v);
        let inside = region.contains(&p);
        let mut on_boundary = false;
        for (w, _) in g.neighbors(v) {
            let q = g.exact(w);
            let hit = if inside {
                !region.segment_inside(&p, &q)?
            } else {
                !region.segment_disjoint(&p, &q)?
            };
            if hit {
                on_boundary = true;
                break;
            }
        }
        if on_boundary {
            out.boundary.push(v);
        } else if inside {
            out.interior.push(v);
        }
    }
    Ok(out)
}

/// Vertex closest to `p` (absolute coordinates); ties go to the
/// top-left candidate.
pub fn nearest_vertex(g: &EmbeddedWeightedGraph, p: &Pt) -> Result<usize> {
    if g.is_empty() {
        return Err(Error::InvalidInput("empty graph".into()));
    }
    let mut best: Option<(Q, usize)> = None;
    for v in 0..g.len() {
        let q = g.exact(v);
        let dx = q.x - p.x;
        let dy = q.y - p.y;
        let d = dx * dx + dy * dy;
        best = match best {
            None => Some((d, v)),
            Some((bd, bv)) => {
                let b = g.exact(bv);
                if d < bd || (d == bd && top_left_cmp((q.x, q.y), (b.x, b.y)).is_lt()) {
                    Some((d, v))
                } else {
                    Some((bd, bv))
                }
            }
        };
    }
    Ok(best.unwrap().1)
}

/// `(Δ_G f)(v) = Σ_w W(v,w) (f(w) - f(v))`.
pub fn graph_laplacian(
    g: &EmbeddedWeightedGraph,
    f: impl Fn(usize) -> Option<f64>,
    v: usize,
) -> Result<f64> {
    let undefined = |u| Error::InvalidInput(format!("function undefined at vertex {u}"));
    let fv = f(v).ok_or_else(|| undefined(v))?;
    let mut s = 0.0;
    for (w, x) in g.neighbors(v) {
        s += x * (f(w).ok_or_else(|| undefined(w))? - fv);
    }
    Ok(s)
}

/// Dense-vector form of `graph_laplacian`.
pub fn laplacian_dense(g: &EmbeddedWeightedGraph, f: &[f64], v: usize) -> f64 {
    g.neighbors(v).map(|(w, x)| x * (f[w] - f[v])).sum()
}
