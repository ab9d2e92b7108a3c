//! Loop-erased walk samplers: Wilson's algorithm, conditioned LERW by an
//! h-transform, and quasi-loops.

use crate::error::{Error, Result};
use crate::graph::{loop_erase_dense, EmbeddedWeightedGraph, SimplePath};
use crate::solver::{reachable_interior, solve_dirichlet, DirichletProblem};
use crate::walk::{par_chunks, walk_into, MCEstimate, StopRule, WalkSampler, CHUNK};
use rand::Rng;
use serde::Serialize;
use std::collections::{HashMap, VecDeque};

/// Rooted spanning forest; `parent[v] == None` exactly at the roots.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SpanningTree {
    pub parent: Vec<Option<usize>>,
}

impl SpanningTree {
    /// Edges as `(min, max)` pairs, sorted.
    pub fn edges(&self) -> Vec<(usize, usize)> {
        let mut e: Vec<(usize, usize)> = self
            .parent
            .iter()
            .enumerate()
            .filter_map(|(v, p)| p.map(|p| (v.min(p), v.max(p))))
            .collect();
        e.sort_unstable();
        e
    }

    pub fn roots(&self) -> Vec<usize> {
        (0..self.parent.len()).filter(|&v| self.parent[v].is_none()).collect()
    }

    /// Path from `v` to its root.
    pub fn branch(&self, v: usize) -> Vec<usize> {
        let mut out = vec![v];
        let mut u = v;
        while let Some(p) = self.parent[u] {
            out.push(p);
            u = p;
        }
        out
    }

    pub fn validate(&self, g: &EmbeddedWeightedGraph) -> Result<()> {
        let n = g.len();
        if self.parent.len() != n {
            return Err(Error::InvalidInput("parent map has the wrong size".into()));
        }
        for (v, p) in self.parent.iter().enumerate() {
            if let Some(p) = *p {
                if g.weight(v, p) <= 0.0 {
                    return Err(Error::InvalidInput(format!("tree edge {v}-{p} is not a graph edge")));
                }
            }
        }
        // every vertex reaches a root without cycling
        let mut state = vec![0u8; n];
        for s in 0..n {
            let mut trail = vec![];
            let mut u = s;
            while state[u] == 0 {
                state[u] = 1;
                trail.push(u);
                match self.parent[u] {
                    Some(p) => u = p,
                    None => break,
                }
            }
            if state[u] == 1 && self.parent[u].is_some() {
                return Err(Error::InvalidInput("parent map has a cycle".into()));
            }
            for t in trail {
                state[t] = 2;
            }
        }
        Ok(())
    }
}

fn check_connected(g: &EmbeddedWeightedGraph, roots: &[usize]) -> Result<()> {
    let mut seen = vec![false; g.len()];
    let mut queue: VecDeque<usize> = roots.iter().copied().collect();
    for &r in roots {
        seen[r] = true;
    }
    while let Some(v) = queue.pop_front() {
        for (w, _) in g.neighbors(v) {
            if !seen[w] {
                seen[w] = true;
                queue.push_back(w);
            }
        }
    }
    match seen.iter().position(|s| !s) {
        Some(v) => Err(Error::InvalidInput(format!("vertex {v} cannot reach a root"))),
        None => Ok(()),
    }
}

/// Wilson's algorithm with every vertex of `roots` already in the tree.
/// Vertices are started in `order`, then any remaining ones by index.
pub fn wilson_forest<R: Rng>(
    g: &EmbeddedWeightedGraph,
    roots: &[usize],
    order: &[usize],
    rng: &mut R,
    step_budget: u64,
) -> Result<SpanningTree> {
    if roots.is_empty() {
        return Err(Error::InvalidInput("no roots".into()));
    }
    if let Some(v) = roots.iter().chain(order).find(|&&v| v >= g.len()) {
        return Err(Error::InvalidInput(format!("vertex {v} out of range")));
    }
    check_connected(g, roots)?;
    let sampler = WalkSampler::new(g);
    let n = g.len();
    let mut in_tree = vec![false; n];
    for &r in roots {
        in_tree[r] = true;
    }
    let mut parent = vec![None; n];
    let mut next = vec![0usize; n];
    let mut steps = 0u64;
    for v in order.iter().copied().chain(0..n) {
        let mut u = v;
        while !in_tree[u] {
            if steps >= step_budget {
                return Err(Error::Timeout(step_budget));
            }
            let w = sampler.step(u, rng);
            steps += 1;
            next[u] = w;
            u = w;
        }
        u = v;
        while !in_tree[u] {
            parent[u] = Some(next[u]);
            in_tree[u] = true;
            u = next[u];
        }
    }
    Ok(SpanningTree { parent })
}

/// Uniform spanning tree rooted at `order[0]`.
pub fn wilson_ust<R: Rng>(
    g: &EmbeddedWeightedGraph,
    order: &[usize],
    rng: &mut R,
    step_budget: u64,
) -> Result<SpanningTree> {
    let Some((&root, rest)) = order.split_first() else {
        return Err(Error::InvalidInput("empty vertex order".into()));
    };
    wilson_forest(g, &[root], rest, rng, step_budget)
}

/// Empirical law of discrete outcomes.
#[derive(Clone, Debug)]
pub struct Law<K: std::hash::Hash + Eq> {
    pub counts: HashMap<K, u64>,
    pub total: u64,
}

impl<K: std::hash::Hash + Eq> Default for Law<K> {
    fn default() -> Self {
        Law { counts: HashMap::new(), total: 0 }
    }
}

impl<K: std::hash::Hash + Eq + Clone> Law<K> {
    pub fn add(&mut self, k: K) {
        *self.counts.entry(k).or_insert(0) += 1;
        self.total += 1;
    }

    pub fn merge(&mut self, other: Law<K>) {
        for (k, c) in other.counts {
            *self.counts.entry(k).or_insert(0) += c;
        }
        self.total += other.total;
    }

    pub fn prob(&self, k: &K) -> f64 {
        self.counts.get(k).copied().unwrap_or(0) as f64 / self.total.max(1) as f64
    }

    /// Total-variation distance between the two empirical laws.
    pub fn tv(&self, other: &Law<K>) -> f64 {
        let mut s = 0.0;
        for (k, _) in self.counts.iter() {
            s += (self.prob(k) - other.prob(k)).abs();
        }
        for (k, _) in other.counts.iter() {
            if !self.counts.contains_key(k) {
                s += other.prob(k);
            }
        }
        0.5 * s
    }
}

/// Simple paths keyed by their canonical orientation.
pub type PathLaw = Law<Vec<usize>>;

fn canonical(v: Vec<usize>) -> Vec<usize> {
    SimplePath::trusted(v).canonical()
}

/// Law of `samples` uniform spanning trees (edge sets).
pub fn ust_law(g: &EmbeddedWeightedGraph, order: &[usize], samples: u64, seed: u64, step_budget: u64) -> Result<Law<Vec<(usize, usize)>>> {
    let parts = par_chunks(seed, samples, CHUNK, |s, m| {
        let mut rng = s.rng();
        let mut law = Law::default();
        for _ in 0..m {
            law.add(wilson_ust(g, order, &mut rng, step_budget)?.edges());
        }
        Ok(law)
    })?;
    Ok(fold(parts))
}

fn fold<K: std::hash::Hash + Eq + Clone>(parts: Vec<Law<K>>) -> Law<K> {
    let mut law = Law::default();
    for p in parts {
        law.merge(p);
    }
    law
}

/// Law of the first Wilson branch from `a` to `roots`.
pub fn wilson_branch_law(
    g: &EmbeddedWeightedGraph,
    roots: &[usize],
    a: usize,
    samples: u64,
    seed: u64,
    step_budget: u64,
) -> Result<PathLaw> {
    let parts = par_chunks(seed, samples, CHUNK, |s, m| {
        let mut rng = s.rng();
        let mut law = Law::default();
        for _ in 0..m {
            let t = wilson_forest(g, roots, &[a], &mut rng, step_budget)?;
            law.add(canonical(t.branch(a)));
        }
        Ok(law)
    })?;
    Ok(fold(parts))
}

/// Law of `LE` of walks from `start` stopped on `stop` (time `>= 1`).
pub fn lerw_law(
    g: &EmbeddedWeightedGraph,
    start: usize,
    stop: &[usize],
    samples: u64,
    seed: u64,
    step_budget: u64,
) -> Result<PathLaw> {
    let rule = StopRule::new(g.len(), stop, 1)?;
    if !rule.reachable_from(g, start) {
        return Err(Error::InvalidInput("stop set unreachable".into()));
    }
    let sampler = WalkSampler::new(g);
    let parts = par_chunks(seed, samples, CHUNK, |s, m| {
        let mut rng = s.rng();
        let (mut buf, mut scratch) = (vec![], vec![]);
        let mut law = Law::default();
        for _ in 0..m {
            walk_into(&sampler, start, &rule, &mut rng, step_budget, &mut buf)?;
            law.add(canonical(loop_erase_dense(&buf, &mut scratch, g.len())));
        }
        Ok(law)
    })?;
    Ok(fold(parts))
}

/// The graph `W'(v,w) = h(v) h(w) W(v,w)` with `h` harmonic off `B`,
/// one at `b0, b1` and zero on the rest of `B`.
#[derive(Clone, Debug)]
pub struct HTransform {
    pub graph: EmbeddedWeightedGraph,
    pub h: Vec<f64>,
}

pub fn h_transform_graph(g: &EmbeddedWeightedGraph, b_set: &[usize], b0: usize, b1: usize) -> Result<HTransform> {
    if b0 == b1 || !b_set.contains(&b0) || !b_set.contains(&b1) {
        return Err(Error::InvalidInput("b0 and b1 must be distinct members of B".into()));
    }
    let mut stop = vec![false; g.len()];
    for &b in b_set {
        if b >= g.len() {
            return Err(Error::InvalidInput(format!("vertex {b} out of range")));
        }
        stop[b] = true;
    }
    let starts: Vec<usize> = g.neighbors(b0).chain(g.neighbors(b1)).map(|x| x.0).collect();
    let interior = reachable_interior(g, &starts, &stop);
    let mut boundary = b_set.to_vec();
    boundary.sort_unstable();
    boundary.dedup();
    let values = boundary.iter().map(|&b| if b == b0 || b == b1 { 1.0 } else { 0.0 }).collect();
    let h = solve_dirichlet(g, &DirichletProblem { interior, boundary, values })?;
    let edges: Vec<(usize, usize, f64)> = g
        .edges()
        .into_iter()
        .filter(|&(v, w, _)| h[v] > 0.0 && h[w] > 0.0)
        .map(|(v, w, x)| (v, w, h[v] * h[w] * x))
        .collect();
    let graph = EmbeddedWeightedGraph::from_edges(g.unit_den(), g.points().to_vec(), &edges)?;
    Ok(HTransform { graph, h })
}

/// LERW from `b0` to `b1` conditioned by the h-transform.
#[derive(Clone, Debug)]
pub struct ConditionedLerw {
    pub transform: HTransform,
    pub b0: usize,
    pub b1: usize,
    rule: StopRule,
}

impl ConditionedLerw {
    pub fn new(g: &EmbeddedWeightedGraph, b_set: &[usize], b0: usize, b1: usize) -> Result<Self> {
        let transform = h_transform_graph(g, b_set, b0, b1)?;
        let rule = StopRule::new(g.len(), &[b1], 1)?;
        if !rule.reachable_from(&transform.graph, b0) {
            return Err(Error::InvalidInput("conditioning event has probability zero".into()));
        }
        Ok(ConditionedLerw { transform, b0, b1, rule })
    }

    pub fn sampler(&self) -> WalkSampler<'_> {
        WalkSampler::new(&self.transform.graph)
    }

    pub fn sample_with<R: Rng>(
        &self,
        sampler: &WalkSampler<'_>,
        rng: &mut R,
        step_budget: u64,
        buf: &mut Vec<usize>,
        scratch: &mut Vec<usize>,
    ) -> Result<SimplePath> {
        walk_into(sampler, self.b0, &self.rule, rng, step_budget, buf)?;
        Ok(SimplePath::trusted(loop_erase_dense(buf, scratch, self.transform.graph.len())))
    }

    pub fn law(&self, samples: u64, seed: u64, step_budget: u64) -> Result<PathLaw> {
        let sampler = self.sampler();
        let parts = par_chunks(seed, samples, CHUNK, |s, m| {
            let mut rng = s.rng();
            let (mut buf, mut scratch) = (vec![], vec![]);
            let mut law = Law::default();
            for _ in 0..m {
                law.add(self.sample_with(&sampler, &mut rng, step_budget, &mut buf, &mut scratch)?.canonical());
            }
            Ok(law)
        })?;
        Ok(fold(parts))
    }
}

/// One conditioned LERW sample.
pub fn sample_conditioned_lerw<R: Rng>(
    g: &EmbeddedWeightedGraph,
    b_set: &[usize],
    b0: usize,
    b1: usize,
    rng: &mut R,
    step_budget: u64,
) -> Result<SimplePath> {
    let c = ConditionedLerw::new(g, b_set, b0, b1)?;
    let s = c.sampler();
    c.sample_with(&s, rng, step_budget, &mut vec![], &mut vec![])
}

/// Rejection oracle: walks from `b0` stopped on `B`, kept when they end
/// at `b1`, then loop-erased. `samples` counts accepted walks.
pub fn rejection_lerw_law(
    g: &EmbeddedWeightedGraph,
    b_set: &[usize],
    b0: usize,
    b1: usize,
    samples: u64,
    seed: u64,
    step_budget: u64,
) -> Result<PathLaw> {
    if !b_set.contains(&b1) {
        return Err(Error::InvalidInput("b1 must be in B".into()));
    }
    let rule = StopRule::new(g.len(), b_set, 1)?;
    let sampler = WalkSampler::new(g);
    let parts = par_chunks(seed, samples, CHUNK, |s, m| {
        let mut rng = s.rng();
        let (mut buf, mut scratch) = (vec![], vec![]);
        let mut law = Law::default();
        let mut spent = 0u64;
        while law.total < m {
            walk_into(&sampler, b0, &rule, &mut rng, step_budget, &mut buf)?;
            spent += buf.len() as u64;
            if spent > step_budget {
                return Err(Error::Timeout(step_budget));
            }
            if *buf.last().unwrap() == b1 {
                law.add(canonical(loop_erase_dense(&buf, &mut scratch, g.len())));
            }
        }
        Ok(law)
    })?;
    Ok(fold(parts))
}

/// Two points `v, w` of the path within `eps` of `center` whose
/// intermediate segment has diameter `> r`.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct QuasiLoopReport {
    pub center: (f64, f64),
    pub r: f64,
    pub eps: f64,
    /// Path indices of the witness pair.
    pub witness: (usize, usize),
}

fn d2(a: (f64, f64), b: (f64, f64)) -> f64 {
    (a.0 - b.0).powi(2) + (a.1 - b.1).powi(2)
}

fn cross(o: (f64, f64), a: (f64, f64), b: (f64, f64)) -> f64 {
    (a.0 - o.0) * (b.1 - o.1) - (a.1 - o.1) * (b.0 - o.0)
}

/// Whether the point set has diameter `> r`.
pub(crate) fn diameter_exceeds(pts: &[(f64, f64)], r: f64) -> bool {
    let r2 = r * r;
    let far = pts.iter().map(|&p| d2(p, pts[0])).fold(0.0, f64::max);
    if far > r2 {
        return true;
    }
    if 4.0 * far <= r2 {
        return false;
    }
    let mut p = pts.to_vec();
    p.sort_by(|a, b| a.partial_cmp(b).unwrap());
    p.dedup();
    let mut hull: Vec<(f64, f64)> = Vec::new();
    for pass in 0..2 {
        let start = hull.len();
        let iter: Box<dyn Iterator<Item = &(f64, f64)>> =
            if pass == 0 { Box::new(p.iter()) } else { Box::new(p.iter().rev()) };
        for &q in iter {
            while hull.len() >= start + 2 && cross(hull[hull.len() - 2], hull[hull.len() - 1], q) <= 0.0 {
                hull.pop();
            }
            hull.push(q);
        }
        hull.pop();
    }
    if hull.is_empty() {
        hull = p;
    }
    hull.iter().any(|&a| hull.iter().any(|&b| d2(a, b) > r2))
}

/// Quasi-loops of `path` (any vertex sequence) around each center.
pub fn detect_quasi_loops(
    g: &EmbeddedWeightedGraph,
    path: &[usize],
    r: f64,
    eps: f64,
    centers: &[(f64, f64)],
) -> Vec<QuasiLoopReport> {
    if path.len() < 2 || centers.is_empty() || eps < 0.0 {
        return vec![];
    }
    let cell = eps.max(1e-9);
    let key = |p: (f64, f64)| ((p.0 / cell).floor() as i64, (p.1 / cell).floor() as i64);
    let mut grid: HashMap<(i64, i64), Vec<usize>> = HashMap::new();
    for (k, &c) in centers.iter().enumerate() {
        grid.entry(key(c)).or_default().push(k);
    }
    let pts: Vec<(f64, f64)> = path.iter().map(|&v| g.coords(v)).collect();
    let e2 = eps * eps * (1.0 + 1e-12);
    let mut span: HashMap<usize, (usize, usize)> = HashMap::new();
    for (i, &p) in pts.iter().enumerate() {
        let (kx, ky) = key(p);
        for dx in -1..=1 {
            for dy in -1..=1 {
                let Some(list) = grid.get(&(kx + dx, ky + dy)) else { continue };
                for &c in list {
                    if d2(p, centers[c]) <= e2 {
                        span.entry(c).and_modify(|s| s.1 = i).or_insert((i, i));
                    }
                }
            }
        }
    }
    let mut out: Vec<QuasiLoopReport> = span
        .into_iter()
        .filter(|&(_, (i, j))| i < j && diameter_exceeds(&pts[i..=j], r))
        .map(|(c, w)| QuasiLoopReport { center: centers[c], r, eps, witness: w })
        .collect();
    out.sort_by(|a, b| a.center.partial_cmp(&b.center).unwrap());
    out
}

fn winding(poly: &[(f64, f64)], a: (f64, f64)) -> f64 {
    let mut total = 0.0;
    for k in 0..poly.len() {
        let p = (poly[k].0 - a.0, poly[k].1 - a.1);
        let q = (poly[(k + 1) % poly.len()].0 - a.0, poly[(k + 1) % poly.len()].1 - a.1);
        total += (p.0 * q.1 - p.1 * q.0).atan2(p.0 * q.0 + p.1 * q.1);
    }
    total / (2.0 * std::f64::consts::PI)
}

/// Whether the subgraph induced on `b_set` has a cycle winding around
/// vertex `a`. Checked on fundamental cycles, which generate all others.
pub fn encloses(g: &EmbeddedWeightedGraph, b_set: &[usize], a: usize) -> bool {
    let mut in_b = vec![false; g.len()];
    for &b in b_set {
        in_b[b] = true;
    }
    if in_b[a] {
        return false;
    }
    let target = g.coords(a);
    let mut parent = vec![usize::MAX; g.len()];
    let mut depth = vec![0usize; g.len()];
    let mut seen = vec![false; g.len()];
    for &s in b_set {
        if seen[s] {
            continue;
        }
        seen[s] = true;
        let mut queue = VecDeque::from([s]);
        let mut non_tree = vec![];
        while let Some(v) = queue.pop_front() {
            for (w, _) in g.neighbors(v) {
                if !in_b[w] {
                    continue;
                }
                if !seen[w] {
                    seen[w] = true;
                    parent[w] = v;
                    depth[w] = depth[v] + 1;
                    queue.push_back(w);
                } else if parent[v] != w && v < w {
                    non_tree.push((v, w));
                }
            }
        }
        for (mut u, mut v) in non_tree {
            let (mut left, mut right) = (vec![u], vec![v]);
            while u != v {
                if depth[u] >= depth[v] {
                    u = parent[u];
                    left.push(u);
                } else {
                    v = parent[v];
                    right.push(v);
                }
            }
            right.pop();
            left.extend(right.into_iter().rev());
            let poly: Vec<(f64, f64)> = left.iter().map(|&x| g.coords(x)).collect();
            if winding(&poly, target).abs() > 0.5 {
                return true;
            }
        }
    }
    false
}

/// Monte Carlo mean of `#{z : LE(R^a) ∈ QL(r, eps, z)}` for walks from
/// `a` stopped on `B`. Centers default to the vertex positions.
#[allow(clippy::too_many_arguments)]
pub fn quasi_loop_census(
    g: &EmbeddedWeightedGraph,
    a: usize,
    b_set: &[usize],
    r: f64,
    eps: f64,
    centers: Option<&[(f64, f64)]>,
    samples: u64,
    seed: u64,
    step_budget: u64,
) -> Result<MCEstimate> {
    if !encloses(g, b_set, a) {
        return Err(Error::InvalidInput("B has no cycle around the start".into()));
    }
    let own: Vec<(f64, f64)>;
    let centers = match centers {
        Some(c) => c,
        None => {
            own = (0..g.len()).map(|v| g.coords(v)).collect();
            &own
        }
    };
    let rule = StopRule::new(g.len(), b_set, 1)?;
    let sampler = WalkSampler::new(g);
    let parts = par_chunks(seed, samples, CHUNK, |s, m| {
        let mut rng = s.rng();
        let (mut buf, mut scratch) = (vec![], vec![]);
        let (mut sum, mut sq) = (0.0, 0.0);
        for _ in 0..m {
            walk_into(&sampler, a, &rule, &mut rng, step_budget, &mut buf)?;
            let le = loop_erase_dense(&buf, &mut scratch, g.len());
            let k = detect_quasi_loops(g, &le, r, eps, centers).len() as f64;
            sum += k;
            sq += k * k;
        }
        Ok((sum, sq))
    })?;
    let (sum, sq) = parts.into_iter().fold((0.0, 0.0), |a, b| (a.0 + b.0, a.1 + b.1));
    let n = samples.max(1) as f64;
    let mean = sum / n;
    let var = (sq / n - mean * mean).max(0.0);
    Ok(MCEstimate { value: mean, samples, std_error: (var / n).sqrt(), seed })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geometry::PlanePoint;
    use crate::graph::grid_graph;
    use crate::walk::RngStream;

    #[test]
    fn tree_input_returns_itself() {
        let g = EmbeddedWeightedGraph::from_edges(
            1,
            (0..4).map(|i| PlanePoint::int(i, 0)).collect(),
            &[(0, 1, 1.0), (1, 2, 2.0), (2, 3, 1.0)],
        )
        .unwrap();
        let mut rng = RngStream::new(1, 0).rng();
        for order in [vec![0, 1, 2, 3], vec![3, 0, 2, 1]] {
            let t = wilson_ust(&g, &order, &mut rng, 1000).unwrap();
            assert_eq!(t.edges(), vec![(0, 1), (1, 2), (2, 3)]);
            t.validate(&g).unwrap();
        }
    }

    #[test]
    fn disconnected_graph_is_rejected() {
        let g = EmbeddedWeightedGraph::from_edges(
            1,
            (0..3).map(|i| PlanePoint::int(i, 0)).collect(),
            &[(0, 1, 1.0)],
        )
        .unwrap();
        let mut rng = RngStream::new(1, 0).rng();
        assert!(wilson_ust(&g, &[0], &mut rng, 1000).is_err());
    }

    #[test]
    fn two_vertex_conditioned_path() {
        let g = EmbeddedWeightedGraph::from_edges(1, vec![PlanePoint::int(0, 0), PlanePoint::int(1, 0)], &[(0, 1, 1.0)])
            .unwrap();
        let mut rng = RngStream::new(3, 0).rng();
        let p = sample_conditioned_lerw(&g, &[0, 1], 0, 1, &mut rng, 100).unwrap();
        assert_eq!(p.vertices(), &[0, 1]);
    }

    #[test]
    fn hull_diameter() {
        let pts = [(0.0, 0.0), (1.0, 0.0), (1.0, 1.0), (0.0, 1.0), (0.5, 0.5)];
        assert!(diameter_exceeds(&pts, 1.4));
        assert!(!diameter_exceeds(&pts, 1.5));
        let line = [(0.0, 0.0), (1.0, 0.0), (2.0, 0.0)];
        assert!(diameter_exceeds(&line, 1.9) && !diameter_exceeds(&line, 2.0));
    }

    #[test]
    fn ring_encloses_center() {
        let g = grid_graph(0, 1, (-3, 3), (-3, 3)).unwrap();
        let ring: Vec<usize> = (0..g.len()).filter(|&v| g.point(v).nx.abs() == 3 || g.point(v).ny.abs() == 3).collect();
        let c = g.index_of(&PlanePoint::int(0, 0)).unwrap();
        assert!(encloses(&g, &ring, c));
        let side: Vec<usize> = (0..g.len()).filter(|&v| g.point(v).nx == 3).collect();
        assert!(!encloses(&g, &side, c));
    }
}
