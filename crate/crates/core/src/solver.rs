//! Exact linear-algebra oracles on weighted graphs.
//!
//! Every problem reduces to the interior Laplacian `L = D - W_II`, where
//! `D` holds total vertex weights. It is symmetric positive definite as
//! soon as each interior component touches the boundary.

use crate::error::{Error, Result};
use crate::graph::EmbeddedWeightedGraph;
use num_bigint::BigInt;
use num_traits::{Signed, Zero};
use rayon::prelude::*;
use std::collections::VecDeque;

/// Envelope entries above which we switch from Cholesky to CG.
const DIRECT_ENVELOPE_LIMIT: usize = 40_000_000;
const CG_TOL: f64 = 1e-12;

/// The interior system of a graph for a fixed boundary.
pub struct InteriorSystem<'g> {
    graph: &'g EmbeddedWeightedGraph,
    pub interior: Vec<usize>,
    /// Vertex → interior position, or `usize::MAX`.
    pos: Vec<usize>,
    is_boundary: Vec<bool>,
    diag: Vec<f64>,
    method: Method,
}

enum Method {
    Direct(Skyline),
    Iterative,
}

struct Skyline {
    first: Vec<usize>,
    start: Vec<usize>,
    data: Vec<f64>,
}

impl Skyline {
    #[inline]
    fn at(&self, i: usize, j: usize) -> f64 {
        self.data[self.start[i] + j - self.first[i]]
    }

    fn solve(&self, b: &[f64]) -> Vec<f64> {
        let n = b.len();
        let mut y = b.to_vec();
        for i in 0..n {
            let mut s = y[i];
            let row = &self.data[self.start[i]..self.start[i] + i - self.first[i]];
            for (k, l) in row.iter().enumerate() {
                s -= l * y[self.first[i] + k];
            }
            y[i] = s / self.at(i, i);
        }
        for i in (0..n).rev() {
            y[i] /= self.at(i, i);
            let yi = y[i];
            let row = &self.data[self.start[i]..self.start[i] + i - self.first[i]];
            for (k, l) in row.iter().enumerate() {
                y[self.first[i] + k] -= l * yi;
            }
        }
        y
    }
}

impl<'g> InteriorSystem<'g> {
    /// `interior` and `boundary` must be disjoint, every neighbour of an
    /// interior vertex must be in one of them, and each interior
    /// component must touch the boundary.
    pub fn new(g: &'g EmbeddedWeightedGraph, interior: &[usize], boundary: &[usize]) -> Result<Self> {
        let n = g.len();
        let mut pos = vec![usize::MAX; n];
        let mut is_boundary = vec![false; n];
        for &b in boundary {
            is_boundary[b] = true;
        }
        for (k, &v) in interior.iter().enumerate() {
            if is_boundary[v] {
                return Err(Error::InvalidInput(format!("vertex {v} is both interior and boundary")));
            }
            if pos[v] != usize::MAX {
                return Err(Error::InvalidInput(format!("vertex {v} repeated in interior")));
            }
            pos[v] = k;
        }
        let mut diag = vec![0.0; interior.len()];
        for (k, &v) in interior.iter().enumerate() {
            for (w, x) in g.neighbors(v) {
                if pos[w] == usize::MAX && !is_boundary[w] {
                    return Err(Error::InvalidInput(format!(
                        "interior vertex {v} has neighbour {w} outside the problem"
                    )));
                }
                diag[k] += x;
            }
        }
        // Each interior component must reach the boundary.
        let mut seen = vec![false; interior.len()];
        for s in 0..interior.len() {
            if seen[s] {
                continue;
            }
            let mut queue = VecDeque::from([s]);
            seen[s] = true;
            let mut touches = false;
            while let Some(k) = queue.pop_front() {
                for (w, _) in g.neighbors(interior[k]) {
                    if is_boundary[w] {
                        touches = true;
                    } else if !seen[pos[w]] {
                        seen[pos[w]] = true;
                        queue.push_back(pos[w]);
                    }
                }
            }
            if !touches {
                return Err(Error::Singular(format!(
                    "interior component of vertex {} does not touch the boundary",
                    interior[s]
                )));
            }
        }
        let mut sys = InteriorSystem {
            graph: g,
            interior: interior.to_vec(),
            pos,
            is_boundary,
            diag,
            method: Method::Iterative,
        };
        if let Some(f) = sys.factor() {
            sys.method = Method::Direct(f);
        }
        Ok(sys)
    }

    fn factor(&self) -> Option<Skyline> {
        let m = self.interior.len();
        let mut first = vec![0usize; m];
        for (k, &v) in self.interior.iter().enumerate() {
            first[k] = k;
            for (w, _) in self.graph.neighbors(v) {
                let p = self.pos[w];
                if p != usize::MAX && p < first[k] {
                    first[k] = p;
                }
            }
        }
        let mut start = vec![0usize; m + 1];
        for k in 0..m {
            start[k + 1] = start[k] + (k - first[k] + 1);
        }
        if start[m] > DIRECT_ENVELOPE_LIMIT {
            return None;
        }
        let mut data = vec![0.0; start[m]];
        for (k, &v) in self.interior.iter().enumerate() {
            data[start[k] + k - first[k]] = self.diag[k];
            for (w, x) in self.graph.neighbors(v) {
                let p = self.pos[w];
                if p != usize::MAX && p < k {
                    data[start[k] + p - first[k]] -= x;
                }
            }
        }
        for i in 0..m {
            let (fi, si) = (first[i], start[i]);
            for j in fi..i {
                let (fj, sj) = (first[j], start[j]);
                let lo = fi.max(fj);
                let mut s = data[si + j - fi];
                for k in lo..j {
                    s -= data[si + k - fi] * data[sj + k - fj];
                }
                data[si + j - fi] = s / data[sj + j - fj];
            }
            let mut s = data[si + i - fi];
            for k in fi..i {
                s -= data[si + k - fi] * data[si + k - fi];
            }
            if s <= 0.0 {
                return None;
            }
            data[si + i - fi] = s.sqrt();
        }
        Some(Skyline { first, start, data })
    }

    pub fn position(&self, v: usize) -> Option<usize> {
        let p = self.pos[v];
        (p != usize::MAX).then_some(p)
    }

    pub fn is_boundary(&self, v: usize) -> bool {
        self.is_boundary[v]
    }

    fn apply(&self, x: &[f64], out: &mut [f64]) {
        for (k, &v) in self.interior.iter().enumerate() {
            let mut s = self.diag[k] * x[k];
            for (w, wt) in self.graph.neighbors(v) {
                let p = self.pos[w];
                if p != usize::MAX {
                    s -= wt * x[p];
                }
            }
            out[k] = s;
        }
    }

    fn cg(&self, b: &[f64]) -> Result<Vec<f64>> {
        let m = b.len();
        let bn = b.iter().map(|x| x * x).sum::<f64>().sqrt();
        let mut x = vec![0.0; m];
        if bn == 0.0 {
            return Ok(x);
        }
        let mut r = b.to_vec();
        let mut z: Vec<f64> = r.iter().zip(&self.diag).map(|(r, d)| r / d).collect();
        let mut p = z.clone();
        let mut ap = vec![0.0; m];
        let mut rz: f64 = r.iter().zip(&z).map(|(a, b)| a * b).sum();
        for _ in 0..20 * m + 1000 {
            self.apply(&p, &mut ap);
            let alpha = rz / p.iter().zip(&ap).map(|(a, b)| a * b).sum::<f64>();
            for k in 0..m {
                x[k] += alpha * p[k];
                r[k] -= alpha * ap[k];
            }
            if r.iter().map(|x| x * x).sum::<f64>().sqrt() <= CG_TOL * bn {
                return Ok(x);
            }
            for k in 0..m {
                z[k] = r[k] / self.diag[k];
            }
            let rz_new: f64 = r.iter().zip(&z).map(|(a, b)| a * b).sum();
            let beta = rz_new / rz;
            rz = rz_new;
            for k in 0..m {
                p[k] = z[k] + beta * p[k];
            }
        }
        Err(Error::Singular("conjugate gradients did not converge".into()))
    }

    /// Solves `L x = b` in interior coordinates.
    pub fn solve(&self, b: &[f64]) -> Result<Vec<f64>> {
        match &self.method {
            Method::Direct(f) => Ok(f.solve(b)),
            Method::Iterative => self.cg(b),
        }
    }

    pub fn solve_many(&self, rhs: &[Vec<f64>]) -> Result<Vec<Vec<f64>>> {
        rhs.par_iter().map(|b| self.solve(b)).collect()
    }

    pub fn is_direct(&self) -> bool {
        matches!(self.method, Method::Direct(_))
    }
}

#[derive(Clone, Debug)]
pub struct DirichletProblem {
    pub interior: Vec<usize>,
    pub boundary: Vec<usize>,
    pub values: Vec<f64>,
}

/// Harmonic extension of boundary data; returns values per graph vertex
/// (zero outside the problem).
pub fn solve_dirichlet(g: &EmbeddedWeightedGraph, p: &DirichletProblem) -> Result<Vec<f64>> {
    if p.boundary.len() != p.values.len() {
        return Err(Error::InvalidInput("one boundary value per boundary vertex".into()));
    }
    let sys = InteriorSystem::new(g, &p.interior, &p.boundary)?;
    let mut f = vec![0.0; g.len()];
    for (&b, &x) in p.boundary.iter().zip(&p.values) {
        f[b] = x;
    }
    let rhs: Vec<f64> = sys
        .interior
        .iter()
        .map(|&v| {
            g.neighbors(v)
                .filter(|(w, _)| sys.is_boundary(*w))
                .map(|(w, x)| x * f[w])
                .sum()
        })
        .collect();
    let x = sys.solve(&rhs)?;
    for (k, &v) in sys.interior.iter().enumerate() {
        f[v] = x[k];
    }
    Ok(f)
}

/// Interior vertices reachable from `from` without entering `stop`.
pub fn reachable_interior(g: &EmbeddedWeightedGraph, from: &[usize], stop: &[bool]) -> Vec<usize> {
    let mut seen = vec![false; g.len()];
    let mut queue = VecDeque::new();
    for &s in from {
        if !stop[s] && !seen[s] {
            seen[s] = true;
            queue.push_back(s);
        }
    }
    while let Some(v) = queue.pop_front() {
        for (w, _) in g.neighbors(v) {
            if !stop[w] && !seen[w] {
                seen[w] = true;
                queue.push_back(w);
            }
        }
    }
    (0..g.len()).filter(|&v| seen[v]).collect()
}

/// Exact `q(v, b, B, G)` for every `b ∈ B`, in the order of `b_set`.
/// A hit counts only from time 1, so `v ∈ B` is allowed.
pub fn harmonic_measure(g: &EmbeddedWeightedGraph, v: usize, b_set: &[usize]) -> Result<Vec<f64>> {
    let mut stop = vec![false; g.len()];
    for &b in b_set {
        stop[b] = true;
    }
    let total = g.total_weight(v);
    if total <= 0.0 {
        return Err(Error::NoTransition(v));
    }
    let starts: Vec<usize> = if stop[v] { g.neighbors(v).map(|x| x.0).collect() } else { vec![v] };
    let interior = reachable_interior(g, &starts, &stop);
    let boundary: Vec<usize> = {
        let mut b: Vec<usize> = interior
            .iter()
            .flat_map(|&x| g.neighbors(x).map(|y| y.0))
            .chain(if stop[v] { g.neighbors(v).map(|y| y.0).collect() } else { vec![] })
            .filter(|&w| stop[w])
            .collect();
        b.sort_unstable();
        b.dedup();
        b
    };
    if boundary.is_empty() {
        return Err(Error::Singular("B is unreachable".into()));
    }
    let sys = InteriorSystem::new(g, &interior, &boundary)?;
    let mut rhs = vec![0.0; interior.len()];
    let mut direct = vec![0.0; g.len()];
    if stop[v] {
        for (w, x) in g.neighbors(v) {
            match sys.position(w) {
                Some(p) => rhs[p] += x / total,
                None => direct[w] += x / total,
            }
        }
    } else {
        rhs[sys.position(v).unwrap()] = 1.0;
    }
    let gsol = sys.solve(&rhs)?;
    let mut q = direct;
    for (k, &x) in sys.interior.iter().enumerate() {
        for (w, wt) in g.neighbors(x) {
            if stop[w] {
                q[w] += gsol[k] * wt;
            }
        }
    }
    let out: Vec<f64> = b_set.iter().map(|&b| q[b]).collect();
    Ok(out.into_iter().map(|p| if p < 0.0 && p > -1e-12 { 0.0 } else { p }).collect())
}

#[derive(Clone, Debug)]
pub struct GreenFunction {
    pub pole: usize,
    /// Values on the interior and boundary; zero elsewhere.
    pub values: Vec<f64>,
}

/// `l_v` with `l_v = 0` on `boundary` and `Δ_G l_v = δ_v` on `interior`.
pub fn green_function(
    g: &EmbeddedWeightedGraph,
    interior: &[usize],
    boundary: &[usize],
    v: usize,
) -> Result<GreenFunction> {
    if boundary.contains(&v) || !interior.contains(&v) {
        return Err(Error::InvalidInput("pole must be an interior vertex".into()));
    }
    let sys = InteriorSystem::new(g, interior, boundary)?;
    let mut rhs = vec![0.0; interior.len()];
    rhs[sys.position(v).unwrap()] = -1.0;
    let x = sys.solve(&rhs)?;
    let mut values = vec![0.0; g.len()];
    for (k, &u) in sys.interior.iter().enumerate() {
        values[u] = x[k];
    }
    Ok(GreenFunction { pole: v, values })
}

#[derive(Clone, Debug, PartialEq)]
pub struct TreeCount {
    pub count: BigInt,
    pub connected: bool,
}

/// Matrix-tree count for the unweighted support of `g` (Bareiss
/// elimination on the reduced Laplacian).
pub fn spanning_tree_count(g: &EmbeddedWeightedGraph) -> TreeCount {
    let n = g.len();
    if n <= 1 {
        return TreeCount { count: BigInt::from(1), connected: true };
    }
    let connected = reachable_interior(g, &[0], &vec![false; n]).len() == n;
    if !connected {
        return TreeCount { count: BigInt::zero(), connected };
    }
    let m = n - 1;
    let mut a = vec![vec![BigInt::zero(); m]; m];
    for (i, row) in a.iter_mut().enumerate() {
        row[i] = BigInt::from(g.degree(i + 1) as i64);
        for (w, _) in g.neighbors(i + 1) {
            if w > 0 {
                row[w - 1] -= 1;
            }
        }
    }
    let mut prev = BigInt::from(1);
    let mut sign = 1;
    for k in 0..m {
        if a[k][k].is_zero() {
            let Some(r) = (k + 1..m).find(|&r| !a[r][k].is_zero()) else {
                return TreeCount { count: BigInt::zero(), connected };
            };
            a.swap(k, r);
            sign = -sign;
        }
        for i in k + 1..m {
            for j in k + 1..m {
                let v = (&a[i][j] * &a[k][k] - &a[i][k] * &a[k][j]) / &prev;
                a[i][j] = v;
            }
        }
        prev = a[k][k].clone();
    }
    let det: BigInt = a[m - 1][m - 1].clone() * BigInt::from(sign);
    TreeCount { count: det.abs(), connected }
}

/// Vertices of the square grid `[-n, n]^2` on its outer ring.
pub fn square_ring(g: &EmbeddedWeightedGraph, n: i64) -> Vec<usize> {
    (0..g.len())
        .filter(|&v| {
            let p = g.point(v);
            p.nx.abs() == n || p.ny.abs() == n
        })
        .collect()
}

/// `p_I(d, N)`: from `s = N-1 + i(N-d)`, probability of leaving
/// `[-N, N]^2` through the middle half of the left edge.
pub fn corner_escape(n: i64, d: i64) -> Result<f64> {
    if d < 1 || d > n {
        return Err(Error::InvalidInput(format!("need 1 <= d <= N, got d = {d}")));
    }
    let g = crate::graph::grid_graph(0, 1, (-n, n), (-n, n))?;
    let ring = square_ring(&g, n);
    let s = g.index_of(&crate::geometry::PlanePoint::int(n - 1, n - d)).unwrap();
    let q = harmonic_measure(&g, s, &ring)?;
    Ok(ring
        .iter()
        .zip(&q)
        .filter(|(&b, _)| {
            let p = g.point(b);
            p.nx == -n && 2 * p.ny.abs() <= n
        })
        .map(|x| x.1)
        .sum())
}

/// One boundary point of `[-1, 1]^2` on the mesh `1/N` grid.
#[derive(Clone, Copy, Debug)]
pub struct SquareHit {
    /// Position in mesh units.
    pub at: (i64, i64),
    /// Distance to the nearest corner, in the plane.
    pub corner_distance: f64,
    pub q: f64,
}

/// Exact harmonic measure of `∂[-1,1]^2` from the centre, mesh `1/N`.
/// Corner vertices are unreachable and omitted.
pub fn square_center_hits(n: i64) -> Result<Vec<SquareHit>> {
    let g = crate::graph::grid_graph(0, n as u32, (-n, n), (-n, n))?;
    let ring: Vec<usize> = square_ring(&g, n)
        .into_iter()
        .filter(|&v| {
            let p = g.point(v);
            p.nx.abs() != p.ny.abs()
        })
        .collect();
    let c = g.index_of(&crate::geometry::PlanePoint::int(0, 0)).unwrap();
    let q = harmonic_measure(&g, c, &ring)?;
    Ok(ring
        .iter()
        .zip(q)
        .map(|(&v, q)| {
            let p = g.point(v);
            let along = if p.nx.abs() == n { p.ny } else { p.nx };
            SquareHit {
                at: (p.nx, p.ny),
                corner_distance: (n - along.abs()) as f64 / n as f64,
                q,
            }
        })
        .collect())
}
